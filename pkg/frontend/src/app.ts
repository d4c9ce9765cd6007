// Studio wiring. StudioController is the DOM-free core (timeline model,
// playback, telemetry binding) so the end-to-end tests can drive it
// headless; mountStudio adds the views on top.

import { StudioClient, SessionInfo, TelemetryEvent } from "./api.js";
import { exportDocument } from "./document.js";
import { KnowledgeBrowser } from "./knowledge.js";
import { ParameterPanel } from "./panel.js";
import { PresetPalette } from "./palette.js";
import { PreviewModel, PreviewView } from "./preview.js";
import { RawEditor } from "./raweditor.js";
import { TimelineModel, TimelineView } from "./timeline.js";

export class StudioController {
  readonly timeline = new TimelineModel();
  readonly preview = new PreviewModel();
  /** Exact bytes of the last document handed to the service. */
  lastPosted: string | null = null;
  session: SessionInfo | null = null;
  onTelemetry: ((ev: TelemetryEvent) => void) | null = null;

  constructor(readonly client: StudioClient) {}

  /**
   * Validate locally, post the canonical text, bind telemetry to the
   * preview. The posted body is exactly what exportDocument produced; no
   * other serialization path exists.
   */
  async playCurrent(replace = false): Promise<SessionInfo> {
    const text = exportDocument(this.timeline.sequence);
    this.lastPosted = text;
    const session = await this.client.playDocument(text, replace);
    this.session = session;
    const handle = this.client.telemetry(session.session, (ev) => {
      this.preview.applyEvent(ev);
      this.onTelemetry?.(ev);
    });
    await handle.done;
    return session;
  }

  async stopPlayback(): Promise<void> {
    await this.client.stop(this.session?.session);
  }
}

export interface StudioView {
  controller: StudioController;
  timelineView: TimelineView;
  panel: ParameterPanel;
  palette: PresetPalette;
  rawEditor: RawEditor;
  previewView: PreviewView;
  knowledge: KnowledgeBrowser;
  ready: Promise<void>;
}

/** Build the full single-page layout under root and wire the parts up. */
export function mountStudio(root: HTMLElement, client: StudioClient): StudioView {
  root.innerHTML = `
    <header class="studio-header">
      <span class="brand">behavior studio</span>
      <input name="seq-name" value="untitled" title="sequence name">
      <button name="play">play</button>
      <button name="stop">stop</button>
      <button name="export">export</button>
      <label class="import-label">import<input type="file" name="import" accept=".seq,.json" hidden></label>
      <span class="status-line"></span>
    </header>
    <main class="studio-main">
      <aside class="left"><h3>presets</h3><div class="palette-root"></div></aside>
      <section class="center">
        <div class="timeline-root"></div>
        <div class="preview-root"></div>
      </section>
      <aside class="right"><div class="panel-root"></div></aside>
    </main>
    <section class="bottom">
      <div class="raw-root"></div>
      <div class="knowledge-root"></div>
    </section>`;

  const controller = new StudioController(client);
  const statusLine = root.querySelector<HTMLElement>(".status-line")!;
  const showError = (msg: string) => {
    statusLine.textContent = msg;
  };

  const timelineView = new TimelineView(root.querySelector(".timeline-root")!, controller.timeline);
  const panel = new ParameterPanel(root.querySelector(".panel-root")!, controller.timeline);
  const palette = new PresetPalette(
    root.querySelector(".palette-root")!, client, controller.timeline, showError,
  );
  const rawEditor = new RawEditor(root.querySelector(".raw-root")!, controller.timeline);
  const previewView = new PreviewView(root.querySelector(".preview-root")!, controller.preview);
  const knowledge = new KnowledgeBrowser(root.querySelector(".knowledge-root")!, client, palette);

  controller.onTelemetry = (ev) => {
    previewView.update(ev);
    statusLine.textContent = `t=${ev.t_ms} ms ${ev.status}`;
  };
  timelineView.onOpenPanel = () => panel.render();

  const nameInput = root.querySelector<HTMLInputElement>("input[name=seq-name]")!;
  nameInput.addEventListener("change", () => controller.timeline.rename(nameInput.value));
  controller.timeline.onChange(() => {
    nameInput.value = controller.timeline.sequence.name;
  });

  root.querySelector<HTMLButtonElement>("button[name=play]")!.addEventListener("click", () => {
    controller.playCurrent(true).catch((e) => showError((e as Error).message));
  });
  root.querySelector<HTMLButtonElement>("button[name=stop]")!.addEventListener("click", () => {
    controller.stopPlayback().catch((e) => showError((e as Error).message));
  });
  root.querySelector<HTMLButtonElement>("button[name=export]")!.addEventListener("click", () => {
    try {
      const text = exportDocument(controller.timeline.sequence);
      const blob = new Blob([text], { type: "application/json" });
      const a = document.createElement("a");
      a.href = URL.createObjectURL(blob);
      a.download = `${controller.timeline.sequence.name}.seq`;
      a.click();
      URL.revokeObjectURL(a.href);
    } catch (e) {
      showError((e as Error).message);
    }
  });
  const importInput = root.querySelector<HTMLInputElement>("input[name=import]")!;
  importInput.addEventListener("change", () => {
    const file = importInput.files?.[0];
    if (!file) return;
    void file.text().then((text) => rawEditor.loadText(text));
  });

  const ready = Promise.all([palette.init(), knowledge.init()]).then(() => undefined);
  return { controller, timelineView, panel, palette, rawEditor, previewView, knowledge, ready };
}
