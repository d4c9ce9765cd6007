// @vitest-environment jsdom
// Studio page behavior against a canned client: layout, timeline editing
// with inline violation flags, raw editor round trips and the knowledge
// browser's suggestion flow. Preset bytes come from the real bundled files
// so the fixtures cannot drift from the service.

import { readFileSync, readdirSync } from "node:fs";
import { join, resolve } from "node:path";
import { beforeEach, describe, expect, it } from "vitest";

import { CardRecord, PatternRecord, StudioClient } from "../src/api.js";
import { StudioView, mountStudio } from "../src/app.js";
import { parseDocument, sequencesEqual } from "../src/document.js";

// import.meta.url is http-based under jsdom; the suite always runs from frontend/
const PRESET_DIR = resolve(process.cwd(), "../src/mojikit/data/presets");
const PRESET_NAMES = readdirSync(PRESET_DIR)
  .filter((n) => n.endsWith(".seq"))
  .map((n) => n.replace(/\.seq$/, ""))
  .sort();
const PRESET_TEXT = new Map(
  PRESET_NAMES.map((n) => [n, readFileSync(join(PRESET_DIR, `${n}.seq`), "utf-8")]),
);

const CANNED_PATTERNS: PatternRecord[] = [
  {
    id: "p01",
    title: "door greeting",
    intent: "greeting_reunion",
    trigger: "human_action",
    behaviors: ["tail_wag", "approach"],
    affect: "positive_seeking",
    summary: "runs to the door and wags",
    suggested_presets: ["tail_wag", "nod"],
  },
  {
    id: "p02",
    title: "nap curl",
    intent: "other",
    trigger: "temporal_routine",
    behaviors: ["lie_curl_roll"],
    affect: "ambiguous_mixed",
    summary: "settles into a curl at rest time",
    suggested_presets: ["curl_up"],
  },
];

const CANNED_CARDS: CardRecord[] = [
  { id: "c1", module: "human_centric", species: null, title: "family rhythms", sections: [{ heading: "notes", items: ["a", "b"] }] },
  { id: "c2", module: "human_centric", species: null, title: "touch budget", sections: [] },
  { id: "c3", module: "environmental", species: null, title: "home zones", sections: [] },
  { id: "c4", module: "animal_centric", species: "dog", title: "greeting style", sections: [] },
  { id: "c5", module: "animal_centric", species: "dog", title: "play bows", sections: [] },
  { id: "c6", module: "animal_centric", species: "cat", title: "slow blinks", sections: [] },
  { id: "c7", module: "animal_centric", species: "cat", title: "tail talk", sections: [] },
];

function fakeFetch(history: string[]): typeof fetch {
  return (async (input: RequestInfo | URL) => {
    const url = new URL(String(input));
    history.push(url.pathname + url.search);
    const respond = (body: unknown, status = 200) =>
      ({
        ok: status < 400,
        status,
        statusText: "",
        json: async () => body,
        text: async () => (typeof body === "string" ? body : JSON.stringify(body)),
      }) as unknown as Response;

    if (url.pathname === "/presets") {
      return respond({ presets: PRESET_NAMES.map((name) => ({ name })) });
    }
    const preset = url.pathname.match(/^\/presets\/(.+)$/);
    if (preset) {
      const text = PRESET_TEXT.get(decodeURIComponent(preset[1]));
      return text
        ? respond(text)
        : respond({ error: "not_found", message: "no such preset" }, 404);
    }
    if (url.pathname === "/patterns") {
      const intent = url.searchParams.get("intent");
      const patterns = CANNED_PATTERNS.filter((p) => !intent || p.intent === intent);
      return respond({ total: patterns.length, offset: 0, limit: 50, patterns });
    }
    if (url.pathname === "/cards") return respond({ cards: CANNED_CARDS });
    return respond({ error: "not_found", message: url.pathname }, 404);
  }) as typeof fetch;
}

let view: StudioView;
let root: HTMLElement;
let requests: string[];

async function waitUntil(cond: () => boolean, what: string): Promise<void> {
  for (let i = 0; i < 100; i++) {
    if (cond()) return;
    await new Promise((r) => setTimeout(r, 10));
  }
  throw new Error(`timed out waiting for ${what}`);
}

beforeEach(async () => {
  document.body.innerHTML = "";
  root = document.createElement("div");
  document.body.appendChild(root);
  requests = [];
  const client = new StudioClient("http://studio.test", { fetchImpl: fakeFetch(requests) });
  view = mountStudio(root, client);
  await view.ready;
});

describe("layout", () => {
  it("renders eight lanes, the full palette and grouped cards", () => {
    expect(root.querySelectorAll(".lane")).toHaveLength(8);
    expect(root.querySelectorAll(".palette .load")).toHaveLength(15);
    expect(root.querySelectorAll(".card-module")).toHaveLength(3);
    const animal = root.querySelectorAll('.card[data-module="animal_centric"]');
    expect(animal).toHaveLength(4);
    expect(root.querySelector(".count")?.textContent).toBe("2 pattern(s)");
  });
});

describe("timeline editing", () => {
  it("loading nod fills the head lane with its four blocks", async () => {
    await view.palette.apply("nod", false);
    const headBlocks = root.querySelectorAll('.lane[data-structure="head"] .block');
    expect(headBlocks).toHaveLength(4);
    expect(root.querySelectorAll(".block")).toHaveLength(4);
    expect(view.rawEditor.currentText()).toBe(PRESET_TEXT.get("nod"));
  });

  it("double-clicking an empty lane places a block and opens the panel", () => {
    const laneBody = root.querySelector<HTMLElement>('.lane[data-structure="tail"] .lane-body')!;
    laneBody.dispatchEvent(new MouseEvent("dblclick", { bubbles: true }));

    const track = view.controller.timeline.sequence.tracks.find((t) => t.structure === "tail");
    expect(track?.blocks).toHaveLength(1);
    expect(track?.blocks[0].duration_ms).toBe(800);
    expect(root.querySelector(".panel-title")?.textContent).toBe("Tail block 0");
  });

  it("setting head F to 60 flags the block inline at the 40 degree limit", async () => {
    await view.palette.apply("nod", false);
    view.controller.timeline.select({ structure: "head", index: 0 });

    const input = root.querySelector<HTMLInputElement>('.panel input[name="f_deg"]')!;
    input.value = "60";
    input.dispatchEvent(new Event("change"));

    const flag = root.querySelector('.panel .violations li[data-code="f_range"]');
    expect(flag?.textContent).toContain("outside pitch range");
    const block = root.querySelector('.lane[data-structure="head"] .block.invalid');
    expect(block).not.toBeNull();
    expect(block?.getAttribute("title")).toContain("outside pitch range");
    expect(view.controller.timeline.report.ok).toBe(false);
  });

  it("dragging a block onto its neighbour flags the overlap", async () => {
    await view.palette.apply("nod", false);
    const timelineRoot = root.querySelector<HTMLElement>(".timeline-root")!;
    const first = timelineRoot.querySelector<HTMLElement>(
      '.lane[data-structure="head"] .block[data-index="0"]',
    )!;

    first.dispatchEvent(new MouseEvent("pointerdown", { bubbles: true, clientX: 100 }));
    // 60 px at 0.12 px/ms is a 500 ms shift, right onto the second block
    timelineRoot.dispatchEvent(new MouseEvent("pointermove", { clientX: 160 }));
    timelineRoot.dispatchEvent(new MouseEvent("pointerup", {}));

    const report = view.controller.timeline.report;
    expect(report.ok).toBe(false);
    expect(report.violations.map((v) => v.code)).toContain("overlap");
    const flagged = timelineRoot.querySelectorAll('.lane[data-structure="head"] .block.invalid');
    expect(flagged).toHaveLength(2);
  });

  it("remove in the panel deletes the selected block", async () => {
    await view.palette.apply("nod", false);
    view.controller.timeline.select({ structure: "head", index: 0 });
    root.querySelector<HTMLButtonElement>('.panel button[name="remove"]')!.click();
    expect(root.querySelectorAll('.lane[data-structure="head"] .block')).toHaveLength(3);
  });

  it("renaming in the header reaches the document", async () => {
    await view.palette.apply("nod", false);
    const nameInput = root.querySelector<HTMLInputElement>('input[name="seq-name"]')!;
    expect(nameInput.value).toBe("nod");
    nameInput.value = "wave hello";
    nameInput.dispatchEvent(new Event("change"));
    expect(view.controller.timeline.sequence.name).toBe("wave hello");
    expect(view.rawEditor.currentText()).toContain('"name": "wave hello"');
  });
});

describe("raw editor", () => {
  it("exported text re-imported reproduces the identical timeline", async () => {
    await view.palette.apply("nod", false);
    const exported = view.rawEditor.currentText();
    const wanted = parseDocument(exported);

    await view.palette.apply("tail_wag", false);
    expect(sequencesEqual(view.controller.timeline.sequence, wanted)).toBe(false);

    view.rawEditor.loadText(exported);
    expect(sequencesEqual(view.controller.timeline.sequence, wanted)).toBe(true);
    expect(root.querySelectorAll('.lane[data-structure="head"] .block')).toHaveLength(4);
    expect(root.querySelector(".raw-error")?.textContent).toBe("");
  });

  it("a broken document stays in the pane with an error, timeline untouched", async () => {
    await view.palette.apply("nod", false);
    view.rawEditor.loadText("{ not json");
    expect(root.querySelector(".raw-error")?.textContent).toContain("not valid JSON");
    expect(view.controller.timeline.sequence.name).toBe("nod");
    expect(root.querySelectorAll('.lane[data-structure="head"] .block')).toHaveLength(4);
  });
});

describe("knowledge browser", () => {
  it("inserting a suggested preset drops its blocks onto the timeline", async () => {
    const btn = root.querySelector<HTMLButtonElement>('button.suggest[data-preset="tail_wag"]')!;
    btn.click();
    await waitUntil(
      () => view.controller.timeline.sequence.tracks.some((t) => t.structure === "tail"),
      "tail track from suggestion",
    );
    const wanted = parseDocument(PRESET_TEXT.get("tail_wag")!);
    expect(view.controller.timeline.sequence.tracks).toEqual(wanted.tracks);
  });

  it("dimension filters drive the pattern query", async () => {
    const select = root.querySelector<HTMLSelectElement>('select[name="intent"]')!;
    select.value = "greeting_reunion";
    select.dispatchEvent(new Event("change"));
    await waitUntil(
      () => requests.some((r) => r.startsWith("/patterns?") && r.includes("intent=greeting_reunion")),
      "filtered pattern request",
    );
    await waitUntil(
      () => root.querySelectorAll(".pattern").length === 1,
      "filtered pattern list",
    );
    expect(root.querySelector(".pattern .pattern-head b")?.textContent).toBe("door greeting");
  });
});
