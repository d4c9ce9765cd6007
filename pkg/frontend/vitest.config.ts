import { defineConfig } from "vitest/config";

// e2e suite spawns a real service process; generous timeouts, one file at a
// time so the jsdom suite and the server do not compete.
export default defineConfig({
  test: {
    environment: "node",
    testTimeout: 120_000,
    hookTimeout: 120_000,
    fileParallelism: false,
  },
});
