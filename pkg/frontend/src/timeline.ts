// Timeline editor: one horizontal lane per structure, blocks positioned by
// start time and sized by duration. Edits keep the local model as the single
// source of truth; every mutation re-validates and invalid blocks are
// flagged inline rather than rejected.

import {
  MotionBlock,
  SequenceData,
  ValidationReport,
  Violation,
  blockEnd,
  canonicalize,
  emptySequence,
  insertBlock,
  removeBlock,
  replaceBlock,
  totalDurationMs,
  validateSequence,
} from "./document.js";
import { STRUCTURES, StructureName } from "./morphology.js";

export interface Selection {
  structure: StructureName;
  index: number;
}

export type TimelineListener = () => void;

export class TimelineModel {
  sequence: SequenceData = emptySequence();
  selection: Selection | null = null;
  report: ValidationReport = { ok: true, violations: [] };
  private listeners: TimelineListener[] = [];

  onChange(fn: TimelineListener): void {
    this.listeners.push(fn);
  }

  private mutate(seq: SequenceData): void {
    this.sequence = seq;
    this.report = validateSequence(seq);
    for (const fn of this.listeners) fn();
  }

  load(seq: SequenceData): void {
    this.selection = null;
    this.mutate(seq);
  }

  rename(name: string): void {
    this.mutate({ ...this.sequence, name });
  }

  select(sel: Selection | null): void {
    this.selection = sel;
    for (const fn of this.listeners) fn();
  }

  selectedBlock(): MotionBlock | null {
    if (!this.selection) return null;
    const track = this.sequence.tracks.find((t) => t.structure === this.selection!.structure);
    return track?.blocks[this.selection.index] ?? null;
  }

  /** Violations addressed to one block, overlap partners included. */
  blockViolations(structure: StructureName, index: number): Violation[] {
    return this.report.violations.filter(
      (v) =>
        v.structure === structure &&
        (v.block_index === index || v.other_index === index),
    );
  }

  /**
   * Apply a panel edit or drag result. The block may become invalid or
   * overlap a neighbour; it stays on the timeline with inline flags.
   */
  updateBlock(structure: StructureName, index: number, patch: Partial<MotionBlock>): void {
    const track = this.sequence.tracks.find((t) => t.structure === structure);
    if (!track || !track.blocks[index]) return;
    const updated: MotionBlock = { ...track.blocks[index], ...patch };
    const next = replaceBlock(this.sequence, structure, index, updated);
    const newIndex = next.tracks
      .find((t) => t.structure === structure)!
      .blocks.findIndex((b) => b === updated);
    this.selection = { structure, index: newIndex };
    this.mutate(next);
  }

  /** Strict insert for palette and knowledge suggestions; overlap throws. */
  insert(structure: StructureName, block: MotionBlock): void {
    this.mutate(insertBlock(this.sequence, structure, block));
  }

  /**
   * Place a free-form block (double-click authoring). Unlike insert this
   * tolerates overlap and invalid fields; they show up as inline flags.
   */
  place(structure: StructureName, block: MotionBlock): void {
    const track = this.sequence.tracks.find((t) => t.structure === structure);
    const blocks = track ? [...track.blocks, block] : [block];
    const others = this.sequence.tracks.filter((t) => t.structure !== structure);
    const next = canonicalize(this.sequence.name, [...others, { structure, blocks }]);
    const newIndex = next.tracks
      .find((t) => t.structure === structure)!
      .blocks.findIndex((b) => b === block);
    this.selection = { structure, index: newIndex };
    this.mutate(next);
  }

  remove(structure: StructureName, index: number): void {
    this.selection = null;
    this.mutate(removeBlock(this.sequence, structure, index));
  }

  /** Append another sequence's blocks after the current content. */
  append(other: SequenceData, gridMs = 100): void {
    let seq = this.sequence;
    const base = Math.ceil(totalDurationMs(seq) / gridMs) * gridMs;
    for (const track of other.tracks) {
      for (const b of track.blocks) {
        seq = insertBlock(seq, track.structure, { ...b, start_ms: b.start_ms + base });
      }
    }
    this.mutate(seq);
  }
}

// ---------------------------------------------------------------------------
// DOM view

export interface TimelineViewConfig {
  pxPerMs: number;
  laneHeight: number;
  headerWidth: number;
  snapMs: number;
  minSpanMs: number; // rendered width floor so tiny blocks stay clickable
}

const VIEW_DEFAULTS: TimelineViewConfig = {
  pxPerMs: 0.12,
  laneHeight: 34,
  headerWidth: 92,
  snapMs: 10,
  minSpanMs: 120,
};

interface DragState {
  structure: StructureName;
  index: number;
  pointerStartX: number;
  blockStartMs: number;
  moved: boolean;
}

export class TimelineView {
  private cfg: TimelineViewConfig;
  private drag: DragState | null = null;
  onOpenPanel: (() => void) | null = null;

  constructor(
    private root: HTMLElement,
    readonly model: TimelineModel,
    cfg: Partial<TimelineViewConfig> = {},
  ) {
    this.cfg = { ...VIEW_DEFAULTS, ...cfg };
    // root-level listeners survive re-renders; per-block ones are rebound
    this.root.addEventListener("pointermove", (ev) => this.onPointerMove(ev as PointerEvent));
    this.root.addEventListener("pointerup", () => this.onPointerUp());
    model.onChange(() => this.render());
    this.render();
  }

  private horizonMs(): number {
    return Math.max(3000, totalDurationMs(this.model.sequence) + 600);
  }

  render(): void {
    const { pxPerMs, laneHeight, headerWidth } = this.cfg;
    const width = headerWidth + this.horizonMs() * pxPerMs;
    const rows: string[] = [];
    for (const spec of STRUCTURES) {
      const track = this.model.sequence.tracks.find((t) => t.structure === spec.name);
      const blocks = (track?.blocks ?? [])
        .map((b, i) => this.blockHtml(spec.name, b, i))
        .join("");
      rows.push(
        `<div class="lane" data-structure="${spec.name}" style="height:${laneHeight}px">` +
          `<div class="lane-header" style="width:${headerWidth}px">${spec.label}</div>` +
          `<div class="lane-body" style="left:${headerWidth}px">${blocks}</div>` +
          `</div>`,
      );
    }
    const ruler = this.rulerHtml();
    this.root.innerHTML =
      `<div class="timeline" style="min-width:${width}px">${ruler}${rows.join("")}</div>`;
    this.bind();
  }

  private rulerHtml(): string {
    const { pxPerMs, headerWidth } = this.cfg;
    const marks: string[] = [];
    for (let t = 0; t <= this.horizonMs(); t += 500) {
      marks.push(
        `<span class="tick" style="left:${headerWidth + t * pxPerMs}px">${t / 1000}s</span>`,
      );
    }
    return `<div class="ruler">${marks.join("")}</div>`;
  }

  private blockHtml(structure: StructureName, b: MotionBlock, index: number): string {
    const { pxPerMs, minSpanMs } = this.cfg;
    const sel = this.model.selection;
    const violations = this.model.blockViolations(structure, index);
    const classes = ["block"];
    if (sel && sel.structure === structure && sel.index === index) classes.push("selected");
    if (violations.length) classes.push("invalid");
    const left = b.start_ms * pxPerMs;
    const w = Math.max(b.duration_ms, minSpanMs) * pxPerMs;
    const label = `F${b.f_deg} R${b.r_deg} S${b.speed}` + (b.delay_ms ? ` D${b.delay_ms}` : "");
    const title = violations.length
      ? violations.map((v) => v.message).join("\n")
      : `${b.start_ms}..${blockEnd(b)} ms`;
    return (
      `<div class="${classes.join(" ")}" data-structure="${structure}" data-index="${index}" ` +
      `style="left:${left}px;width:${w}px" title="${title.replace(/"/g, "&quot;")}">` +
      `${label}</div>`
    );
  }

  private bind(): void {
    this.root.querySelectorAll<HTMLElement>(".block").forEach((el) => {
      el.addEventListener("pointerdown", (ev) => this.onPointerDown(el, ev as PointerEvent));
      el.addEventListener("dblclick", () => {
        this.selectFrom(el);
        this.onOpenPanel?.();
      });
    });
    this.root.querySelectorAll<HTMLElement>(".lane-body").forEach((el) => {
      el.addEventListener("dblclick", (ev) => {
        if ((ev.target as HTMLElement).classList.contains("block")) return;
        const lane = el.closest<HTMLElement>(".lane")!;
        const structure = lane.dataset.structure as StructureName;
        const off = (ev as MouseEvent).offsetX;
        const atMs = this.snap((Number.isFinite(off) ? off : 0) / this.cfg.pxPerMs);
        this.model.place(structure, {
          f_deg: 0, r_deg: 0, speed: 3, delay_ms: 0,
          start_ms: Math.max(0, atMs), duration_ms: 800,
        });
        this.onOpenPanel?.();
      });
    });
  }

  private selectFrom(el: HTMLElement): void {
    this.model.select({
      structure: el.dataset.structure as StructureName,
      index: Number(el.dataset.index),
    });
  }

  private snap(ms: number): number {
    return Math.round(ms / this.cfg.snapMs) * this.cfg.snapMs;
  }

  private onPointerDown(el: HTMLElement, ev: PointerEvent): void {
    this.selectFrom(el);
    const sel = this.model.selection!;
    const block = this.model.selectedBlock()!;
    this.drag = {
      structure: sel.structure,
      index: sel.index,
      pointerStartX: ev.clientX,
      blockStartMs: block.start_ms,
      moved: false,
    };
  }

  private onPointerMove(ev: PointerEvent): void {
    if (!this.drag) return;
    const deltaMs = (ev.clientX - this.drag.pointerStartX) / this.cfg.pxPerMs;
    const target = Math.max(0, this.snap(this.drag.blockStartMs + deltaMs));
    const current = this.model.selectedBlock();
    if (!current || current.start_ms === target) return;
    this.drag.moved = true;
    const sel = this.model.selection!;
    this.model.updateBlock(sel.structure, sel.index, { start_ms: target });
    this.drag.index = this.model.selection!.index;
  }

  private onPointerUp(): void {
    this.drag = null;
  }
}
