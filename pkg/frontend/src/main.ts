// Browser entry point. The API base comes from ?api=... so the page can be
// served by any static file server next to a running service.

import { StudioClient } from "./api.js";
import { mountStudio } from "./app.js";

const params = new URLSearchParams(location.search);
const base = params.get("api") ?? `${location.protocol}//${location.hostname}:8000`;

const root = document.getElementById("studio");
if (!root) throw new Error("missing #studio mount point");

const view = mountStudio(root, new StudioClient(base));
view.ready.catch((e) => {
  root.insertAdjacentHTML(
    "afterbegin",
    `<div class="boot-error">service unreachable at ${base}: ${(e as Error).message}</div>`,
  );
});
