// Raw document pane. Shows the canonical text of the current timeline and
// accepts pasted or hand-edited documents back. Parse errors stay local to
// the pane; the timeline keeps its last good state.

import { DocParseError, exportDocument, parseDocument } from "./document.js";
import { TimelineModel } from "./timeline.js";

export class RawEditor {
  private textarea!: HTMLTextAreaElement;
  private errorLine!: HTMLElement;
  private dirty = false;

  constructor(private root: HTMLElement, readonly model: TimelineModel) {
    this.root.innerHTML =
      `<div class="raw-editor">` +
      `<textarea spellcheck="false" rows="14"></textarea>` +
      `<div class="raw-actions"><button name="apply">apply to timeline</button>` +
      `<span class="raw-error"></span></div></div>`;
    this.textarea = this.root.querySelector("textarea")!;
    this.errorLine = this.root.querySelector(".raw-error")!;
    this.textarea.addEventListener("input", () => {
      this.dirty = true;
    });
    this.root.querySelector<HTMLButtonElement>("button[name=apply]")!.addEventListener("click", () => this.apply());
    model.onChange(() => this.syncFromModel());
    this.syncFromModel();
  }

  /** Timeline -> text, unless the user is mid-edit or the state is invalid. */
  syncFromModel(): void {
    if (this.dirty) return;
    if (!this.model.report.ok) {
      this.errorLine.textContent = `${this.model.report.violations.length} validation problem(s); fix or edit here`;
      return;
    }
    this.errorLine.textContent = "";
    this.textarea.value = exportDocument(this.model.sequence);
  }

  currentText(): string {
    return this.textarea.value;
  }

  apply(): void {
    try {
      const seq = parseDocument(this.textarea.value);
      this.dirty = false;
      this.model.load(seq);
      this.errorLine.textContent = "";
    } catch (e) {
      if (e instanceof DocParseError) {
        this.errorLine.textContent = e.message;
      } else {
        this.errorLine.textContent = (e as Error).message;
      }
    }
  }

  /** Load external text (file import) through the same strict path. */
  loadText(text: string): void {
    this.textarea.value = text;
    this.dirty = true;
    this.apply();
  }
}
