// Knowledge browser: design reference cards by module, interaction patterns
// filterable on all four dimensions. Each pattern lists its suggested
// presets; clicking one drops that preset's blocks onto the timeline.

import { CardRecord, PatternRecord, StudioClient } from "./api.js";
import { PresetPalette } from "./palette.js";

const DIMENSIONS: Record<string, string[]> = {
  intent: [
    "greeting_reunion", "affection_comfort", "play_teasing", "attention_seeking",
    "training_instruction", "boundary_discipline", "avoid_refuse", "other",
  ],
  trigger: ["human_action", "environmental_cue", "temporal_routine", "proactive_robot"],
  behavior: [
    "tail_wag", "head_turn_nod", "approach", "retreat_avoid",
    "paw_tap_contact", "lie_curl_roll", "vocalization", "other_complex",
  ],
  affect: [
    "positive_seeking", "positive_comforting", "negative_avoiding",
    "disciplinary_corrective", "ambiguous_mixed",
  ],
};

export class KnowledgeBrowser {
  cards: CardRecord[] = [];
  patterns: PatternRecord[] = [];
  total = 0;
  filter: Record<string, string> = {};

  constructor(
    private root: HTMLElement,
    private client: StudioClient,
    private palette: PresetPalette,
  ) {}

  async init(): Promise<void> {
    this.cards = await this.client.cards();
    await this.refresh();
  }

  async refresh(): Promise<void> {
    const result = await this.client.patterns({ ...this.filter, limit: 50 });
    this.patterns = result.patterns;
    this.total = result.total;
    this.render();
  }

  private filterControls(): string {
    return Object.entries(DIMENSIONS)
      .map(([dim, values]) => {
        const opts = values
          .map((v) => `<option value="${v}"${this.filter[dim] === v ? " selected" : ""}>${v}</option>`)
          .join("");
        return `<select name="${dim}"><option value="">any ${dim}</option>${opts}</select>`;
      })
      .join("");
  }

  private cardHtml(card: CardRecord): string {
    const sections = card.sections
      .map(
        (s) =>
          `<div class="card-section"><h4>${s.heading}</h4><ul>${s.items
            .map((i) => `<li>${i}</li>`)
            .join("")}</ul></div>`,
      )
      .join("");
    const species = card.species ? ` <em>(${card.species})</em>` : "";
    return `<details class="card" data-module="${card.module}"><summary>${card.title}${species}</summary>${sections}</details>`;
  }

  private patternHtml(p: PatternRecord): string {
    const suggestions = p.suggested_presets
      .map((name) => `<button class="suggest" data-preset="${name}">insert ${name}</button>`)
      .join("");
    return (
      `<div class="pattern" data-id="${p.id}">` +
      `<div class="pattern-head"><b>${p.title}</b> <code>${p.id}</code> ` +
      `<span class="tag">${p.intent}</span><span class="tag">${p.trigger}</span>` +
      `<span class="tag">${p.affect}</span></div>` +
      `<div class="pattern-summary">${p.summary}</div>` +
      `<div class="pattern-actions">${suggestions}</div></div>`
    );
  }

  render(): void {
    const modules: [string, string][] = [
      ["human_centric", "Human-centric"],
      ["environmental", "Environmental"],
      ["animal_centric", "Animal-centric"],
    ];
    const cardCols = modules
      .map(
        ([mod, label]) =>
          `<div class="card-module"><h3>${label}</h3>` +
          this.cards.filter((c) => c.module === mod).map((c) => this.cardHtml(c)).join("") +
          `</div>`,
      )
      .join("");
    this.root.innerHTML =
      `<div class="knowledge">` +
      `<div class="cards">${cardCols}</div>` +
      `<div class="pattern-filter">${this.filterControls()}<span class="count">${this.total} pattern(s)</span></div>` +
      `<div class="patterns">${this.patterns.map((p) => this.patternHtml(p)).join("")}</div>` +
      `</div>`;
    this.bind();
  }

  private bind(): void {
    this.root.querySelectorAll<HTMLSelectElement>("select").forEach((sel) => {
      sel.addEventListener("change", () => {
        if (sel.value) {
          this.filter[sel.name] = sel.value;
        } else {
          delete this.filter[sel.name];
        }
        void this.refresh();
      });
    });
    this.root.querySelectorAll<HTMLButtonElement>("button.suggest").forEach((btn) => {
      btn.addEventListener("click", () => {
        void this.palette.apply(btn.dataset.preset!, true);
      });
    });
  }
}
