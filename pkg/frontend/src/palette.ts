// Preset palette: the bundled action inventory. "load" replaces the
// timeline; "+" appends the preset after the current content.

import { StudioClient } from "./api.js";
import { parseDocument } from "./document.js";
import { TimelineModel } from "./timeline.js";

export class PresetPalette {
  names: string[] = [];

  constructor(
    private root: HTMLElement,
    private client: StudioClient,
    private model: TimelineModel,
    private onError: (msg: string) => void = () => {},
  ) {}

  async init(): Promise<void> {
    this.names = await this.client.presetNames();
    this.render();
  }

  render(): void {
    const rows = this.names
      .map(
        (name) =>
          `<li><button class="load" data-name="${name}">${name}</button>` +
          `<button class="add" data-name="${name}" title="append to timeline">+</button></li>`,
      )
      .join("");
    this.root.innerHTML = `<ul class="palette">${rows}</ul>`;
    this.root.querySelectorAll<HTMLButtonElement>("button").forEach((btn) => {
      btn.addEventListener("click", () => {
        void this.apply(btn.dataset.name!, btn.classList.contains("add"));
      });
    });
  }

  async apply(name: string, append: boolean): Promise<void> {
    try {
      const seq = parseDocument(await this.client.presetText(name));
      if (append) {
        this.model.append(seq);
      } else {
        this.model.load(seq);
      }
    } catch (e) {
      this.onError(`preset ${name}: ${(e as Error).message}`);
    }
  }
}
