// Parameter panel for the selected block: F/R angles, speed, delay plus the
// block's window. Edits go straight into the timeline model; violations on
// the edited block are listed under the fields.

import { TimelineModel } from "./timeline.js";
import { STRUCTURE_BY_NAME } from "./morphology.js";
import { quantizeAngle } from "./document.js";

const INT_FIELDS = ["speed", "delay_ms", "start_ms", "duration_ms"] as const;
const ANGLE_FIELDS = ["f_deg", "r_deg"] as const;

export class ParameterPanel {
  constructor(private root: HTMLElement, readonly model: TimelineModel) {
    model.onChange(() => this.render());
    this.render();
  }

  render(): void {
    const sel = this.model.selection;
    const block = this.model.selectedBlock();
    if (!sel || !block) {
      this.root.innerHTML = `<div class="panel empty">no block selected</div>`;
      return;
    }
    const spec = STRUCTURE_BY_NAME.get(sel.structure)!;
    const violations = this.model.blockViolations(sel.structure, sel.index);

    const angleRow = (field: "f_deg" | "r_deg") => {
      const axis = field === "f_deg" ? spec.f : spec.r;
      return (
        `<label>${field === "f_deg" ? "F" : "R"} (${axis.name}, ${axis.min}..${axis.max})` +
        `<input type="number" step="0.1" name="${field}" value="${block[field]}"></label>`
      );
    };
    const intRow = (field: (typeof INT_FIELDS)[number], min: number, extra = "") =>
      `<label>${field}<input type="number" step="1" min="${min}" name="${field}" value="${block[field]}"${extra}></label>`;

    const flags = violations.length
      ? `<ul class="violations">${violations
          .map((v) => `<li data-code="${v.code}">${v.message}</li>`)
          .join("")}</ul>`
      : "";

    this.root.innerHTML =
      `<div class="panel">` +
      `<div class="panel-title">${spec.label} block ${sel.index}</div>` +
      angleRow("f_deg") +
      angleRow("r_deg") +
      intRow("speed", 1, ' max="5"') +
      intRow("delay_ms", 0) +
      intRow("start_ms", 0) +
      intRow("duration_ms", 1) +
      flags +
      `<button name="remove">remove block</button>` +
      `</div>`;
    this.bind();
  }

  private bind(): void {
    const sel = this.model.selection;
    if (!sel) return;
    this.root.querySelectorAll<HTMLInputElement>("input").forEach((input) => {
      input.addEventListener("change", () => {
        const field = input.name;
        const raw = Number(input.value);
        if (!Number.isFinite(raw)) return;
        const current = this.model.selection;
        if (!current) return;
        if ((ANGLE_FIELDS as readonly string[]).includes(field)) {
          this.model.updateBlock(current.structure, current.index, {
            [field]: quantizeAngle(raw),
          });
        } else if ((INT_FIELDS as readonly string[]).includes(field)) {
          this.model.updateBlock(current.structure, current.index, {
            [field]: Math.trunc(raw),
          });
        }
      });
    });
    this.root.querySelector<HTMLButtonElement>("button[name=remove]")?.addEventListener("click", () => {
      const current = this.model.selection;
      if (current) this.model.remove(current.structure, current.index);
    });
  }
}
