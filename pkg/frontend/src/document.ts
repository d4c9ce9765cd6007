// Sequence document model: strict parser, semantic validator, canonical
// serializer. Mirrors the server's rules; serialized output must be
// byte-identical to the server's canonical form so that "what you see is
// exactly what play sends" holds.

import { STRUCTURES, STRUCTURE_BY_NAME, STRUCTURE_ORDER, StructureName } from "./morphology.js";

export const FORMAT_VERSION = 1;
export const SPEED_MIN = 1;
export const SPEED_MAX = 5;

export interface MotionBlock {
  f_deg: number;
  r_deg: number;
  speed: number;
  delay_ms: number;
  start_ms: number;
  duration_ms: number;
}

export interface TrackData {
  structure: StructureName;
  blocks: MotionBlock[];
}

export interface SequenceData {
  name: string;
  tracks: TrackData[];
}

export interface Violation {
  code: string;
  message: string;
  structure?: string;
  block_index?: number;
  other_index?: number;
}

export interface ValidationReport {
  ok: boolean;
  violations: Violation[];
}

export class DocParseError extends Error {}

/**
 * Snap an angle to one decimal, matching the server for every double:
 * nearest one-decimal value of the EXACT binary value, ties to even,
 * -0 normalized away. One-decimal inputs are fixed points.
 *
 * A true decimal tie at one decimal needs the double to be exactly
 * odd/4 (0.25, -2.75, ...); no other double sits exactly midway. For
 * everything else toFixed(1) is the correctly rounded nearest value,
 * while a naive value*10 can land on k+0.5 after product rounding and
 * misread a non-tie (0.45, 1.05) as one.
 */
export function quantizeAngle(value: number): number {
  const quarters = value * 4; // exact: scaling by a power of two never rounds
  let n: number;
  if (Number.isInteger(quarters) && Math.abs(quarters % 2) === 1) {
    n = 2 * Math.round((value * 10) / 2); // exact tie: round half to even
  } else {
    n = Math.round(Number(value.toFixed(1)) * 10);
  }
  const out = n / 10;
  return Object.is(out, -0) ? 0 : out;
}

/** One-decimal text for an already-quantized angle; never "-0.0". */
export function formatAngle(value: number): string {
  let n = Math.round(value * 10);
  if (Object.is(n, -0) || n === 0) n = 0;
  const sign = n < 0 ? "-" : "";
  const m = Math.abs(n);
  return `${sign}${Math.floor(m / 10)}.${m % 10}`;
}

function requireInt(value: unknown, what: string): number {
  // JSON makes "3.0" indistinguishable from "3" after parsing, so
  // integer-valued float literals pass here; the server rejects them.
  // The shared corpus does not exercise that lexeme class.
  if (typeof value !== "number" || !Number.isInteger(value)) {
    throw new DocParseError(`${what} must be an integer, got ${JSON.stringify(value)}`);
  }
  return value;
}

function requireNumber(value: unknown, what: string): number {
  if (typeof value !== "number" || !Number.isFinite(value)) {
    throw new DocParseError(`${what} must be a number, got ${JSON.stringify(value)}`);
  }
  return value;
}

/** Build a block with quantized angles; throws DocParseError on bad types. */
export function makeBlock(raw: {
  f_deg: number; r_deg: number; speed: number;
  delay_ms: number; start_ms: number; duration_ms: number;
}): MotionBlock {
  return {
    f_deg: quantizeAngle(requireNumber(raw.f_deg, "f_deg")),
    r_deg: quantizeAngle(requireNumber(raw.r_deg, "r_deg")),
    speed: requireInt(raw.speed, "speed"),
    delay_ms: requireInt(raw.delay_ms, "delay_ms"),
    start_ms: requireInt(raw.start_ms, "start_ms"),
    duration_ms: requireInt(raw.duration_ms, "duration_ms"),
  };
}

export function blockEnd(b: MotionBlock): number {
  return b.start_ms + b.duration_ms;
}

function sortBlocks(blocks: MotionBlock[]): MotionBlock[] {
  return [...blocks].sort(
    (a, b) =>
      a.start_ms - b.start_ms ||
      a.duration_ms - b.duration_ms ||
      a.delay_ms - b.delay_ms ||
      a.speed - b.speed ||
      a.f_deg - b.f_deg ||
      a.r_deg - b.r_deg,
  );
}

/**
 * Canonical shape: empty tracks dropped, tracks in structure enumeration
 * order, blocks sorted by start time. Duplicate tracks are an error.
 */
export function canonicalize(name: string, tracks: TrackData[]): SequenceData {
  const seen = new Set<string>();
  const kept: TrackData[] = [];
  for (const t of tracks) {
    if (t.blocks.length === 0) continue;
    if (seen.has(t.structure)) throw new Error(`duplicate track for structure ${t.structure}`);
    seen.add(t.structure);
    kept.push({ structure: t.structure, blocks: sortBlocks(t.blocks) });
  }
  kept.sort((a, b) => STRUCTURE_ORDER.get(a.structure)! - STRUCTURE_ORDER.get(b.structure)!);
  return { name, tracks: kept };
}

export function totalDurationMs(seq: SequenceData): number {
  let end = 0;
  for (const t of seq.tracks) for (const b of t.blocks) end = Math.max(end, blockEnd(b));
  return end;
}

export function blockCount(seq: SequenceData): number {
  return seq.tracks.reduce((n, t) => n + t.blocks.length, 0);
}

// ---------------------------------------------------------------------------
// Validation. Same rule set and codes as the server's semantic check.

function validateBlockFields(b: MotionBlock, structure: StructureName, index: number | null): Violation[] {
  const spec = STRUCTURE_BY_NAME.get(structure)!;
  const where = index === null ? structure : `${structure}[${index}]`;
  const found: Violation[] = [];
  const add = (code: string, message: string) => {
    const v: Violation = { code, message: `${where}: ${message}`, structure };
    if (index !== null) v.block_index = index;
    found.push(v);
  };
  if (b.speed < SPEED_MIN || b.speed > SPEED_MAX) {
    add("speed_range", `speed ${b.speed} outside ${SPEED_MIN}..${SPEED_MAX}`);
  }
  if (b.start_ms < 0) add("start_negative", `start_ms ${b.start_ms} is negative`);
  if (b.duration_ms <= 0) add("duration_nonpositive", `duration_ms ${b.duration_ms} must be positive`);
  if (b.delay_ms < 0) {
    add("delay_negative", `delay_ms ${b.delay_ms} is negative`);
  } else if (b.delay_ms >= b.duration_ms) {
    add("delay_exceeds_duration", `delay_ms ${b.delay_ms} leaves no motion window in duration_ms ${b.duration_ms}`);
  }
  if (b.f_deg < spec.f.min || b.f_deg > spec.f.max) {
    add("f_range", `f_deg ${formatAngle(b.f_deg)} outside ${spec.f.name} range`);
  }
  if (b.r_deg < spec.r.min || b.r_deg > spec.r.max) {
    add("r_range", `r_deg ${formatAngle(b.r_deg)} outside ${spec.r.name} range`);
  }
  return found;
}

export function validateSequence(seq: SequenceData): ValidationReport {
  const found: Violation[] = [];
  for (const track of seq.tracks) {
    track.blocks.forEach((b, i) => found.push(...validateBlockFields(b, track.structure, i)));
    for (let i = 1; i < track.blocks.length; i++) {
      const prev = track.blocks[i - 1];
      const cur = track.blocks[i];
      if (blockEnd(prev) > cur.start_ms) {
        found.push({
          code: "overlap",
          message:
            `${track.structure}[${i - 1}] and [${i}] overlap: ` +
            `[${prev.start_ms}, ${blockEnd(prev)}) vs [${cur.start_ms}, ${blockEnd(cur)})`,
          structure: track.structure,
          block_index: i - 1,
          other_index: i,
        });
      }
    }
  }
  return { ok: found.length === 0, violations: found };
}

/** Field violations for one block alone, for inline panel feedback. */
export function validateBlock(b: MotionBlock, structure: StructureName): Violation[] {
  return validateBlockFields(b, structure, null);
}

// ---------------------------------------------------------------------------
// Editing primitives used by the timeline.

export class OverlapConflict extends Error {
  constructor(public structure: StructureName, public conflictIndex: number) {
    super(`${structure}: overlaps block ${conflictIndex}`);
  }
}

/** Pure insert; abutting windows are fine, overlap throws. */
export function insertBlock(seq: SequenceData, structure: StructureName, block: MotionBlock): SequenceData {
  const bad = validateBlock(block, structure);
  if (bad.length) throw new Error(bad.map((v) => v.message).join("; "));
  const track = seq.tracks.find((t) => t.structure === structure);
  const existing = track ? track.blocks : [];
  for (let i = 0; i < existing.length; i++) {
    const other = existing[i];
    if (block.start_ms < blockEnd(other) && other.start_ms < blockEnd(block)) {
      throw new OverlapConflict(structure, i);
    }
  }
  const others = seq.tracks.filter((t) => t.structure !== structure);
  return canonicalize(seq.name, [...others, { structure, blocks: [...existing, block] }]);
}

export function removeBlock(seq: SequenceData, structure: StructureName, index: number): SequenceData {
  const track = seq.tracks.find((t) => t.structure === structure);
  if (!track) throw new Error(`no track for structure ${structure}`);
  if (index < 0 || index >= track.blocks.length) throw new Error(`${structure}: no block at index ${index}`);
  const blocks = track.blocks.filter((_, i) => i !== index);
  const others = seq.tracks.filter((t) => t.structure !== structure);
  return canonicalize(seq.name, blocks.length ? [...others, { structure, blocks }] : others);
}

/** Replace one block in place (panel edits); result is re-canonicalized. */
export function replaceBlock(
  seq: SequenceData, structure: StructureName, index: number, block: MotionBlock,
): SequenceData {
  const track = seq.tracks.find((t) => t.structure === structure);
  if (!track) throw new Error(`no track for structure ${structure}`);
  const blocks = track.blocks.map((b, i) => (i === index ? block : b));
  const others = seq.tracks.filter((t) => t.structure !== structure);
  return canonicalize(seq.name, [...others, { structure, blocks }]);
}

// ---------------------------------------------------------------------------
// Canonical text form.

// Mirrors server-side JSON string escaping: ASCII-only output, control
// characters escaped, lowercase \uXXXX.
function jsonString(s: string): string {
  const base = JSON.stringify(s);
  return base.replace(/[\u007f-\uffff]/g, (ch) => {
    return "\\u" + ch.charCodeAt(0).toString(16).padStart(4, "0");
  });
}

/** Canonical document text. Requires a valid sequence. */
export function exportDocument(seq: SequenceData): string {
  const report = validateSequence(seq);
  if (!report.ok) {
    throw new Error(`cannot export invalid sequence: ${report.violations[0].message}`);
  }
  const lines: string[] = ["{", `  "name": ${jsonString(seq.name)},`, `  "version": ${FORMAT_VERSION},`];
  if (seq.tracks.length === 0) {
    lines.push('  "tracks": []');
  } else {
    lines.push('  "tracks": [');
    seq.tracks.forEach((track, ti) => {
      lines.push("    {");
      lines.push(`      "structure": "${track.structure}",`);
      lines.push('      "blocks": [');
      const last = track.blocks.length - 1;
      track.blocks.forEach((b, bi) => {
        lines.push(
          `        {"f_deg": ${formatAngle(b.f_deg)}, ` +
            `"r_deg": ${formatAngle(b.r_deg)}, ` +
            `"speed": ${b.speed}, "delay_ms": ${b.delay_ms}, ` +
            `"start_ms": ${b.start_ms}, "duration_ms": ${b.duration_ms}}` +
            (bi < last ? "," : ""),
        );
      });
      lines.push("      ]");
      lines.push("    }" + (ti < seq.tracks.length - 1 ? "," : ""));
    });
    lines.push("  ]");
  }
  lines.push("}");
  return lines.join("\n") + "\n";
}

// ---------------------------------------------------------------------------
// Strict import: closed schema, structural problems throw DocParseError,
// semantic problems (ranges, overlap, speed) survive for validateSequence.

const BLOCK_KEYS = ["f_deg", "r_deg", "speed", "delay_ms", "start_ms", "duration_ms"] as const;

function isPlainObject(v: unknown): v is Record<string, unknown> {
  return typeof v === "object" && v !== null && !Array.isArray(v);
}

function parseBlock(raw: unknown, where: string): MotionBlock {
  if (!isPlainObject(raw)) throw new DocParseError(`${where}: block must be an object`);
  const keys = Object.keys(raw);
  const unknown = keys.filter((k) => !(BLOCK_KEYS as readonly string[]).includes(k)).sort();
  if (unknown.length) throw new DocParseError(`${where}: unknown block key ${JSON.stringify(unknown[0])}`);
  for (const k of BLOCK_KEYS) {
    if (!(k in raw)) throw new DocParseError(`${where}: missing block key ${JSON.stringify(k)}`);
  }
  try {
    return makeBlock({
      f_deg: requireNumber(raw.f_deg, "f_deg"),
      r_deg: requireNumber(raw.r_deg, "r_deg"),
      speed: raw.speed as number,
      delay_ms: raw.delay_ms as number,
      start_ms: raw.start_ms as number,
      duration_ms: raw.duration_ms as number,
    });
  } catch (e) {
    if (e instanceof DocParseError) throw new DocParseError(`${where}: ${e.message}`);
    throw e;
  }
}

export function parseDocument(text: string): SequenceData {
  let doc: unknown;
  try {
    doc = JSON.parse(text);
  } catch (e) {
    throw new DocParseError(`not valid JSON: ${(e as Error).message}`);
  }
  if (!isPlainObject(doc)) throw new DocParseError("top level must be an object");
  const unknown = Object.keys(doc).filter((k) => !["name", "version", "tracks"].includes(k)).sort();
  if (unknown.length) throw new DocParseError(`unknown top-level key ${JSON.stringify(unknown[0])}`);
  for (const key of ["name", "version", "tracks"]) {
    if (!(key in doc)) throw new DocParseError(`missing top-level key ${JSON.stringify(key)}`);
  }
  if (typeof doc.name !== "string") throw new DocParseError("name must be a string");
  const version = doc.version;
  if (typeof version !== "number" || !Number.isInteger(version) || version !== FORMAT_VERSION) {
    throw new DocParseError(`unsupported version ${JSON.stringify(version)} (expected ${FORMAT_VERSION})`);
  }
  if (!Array.isArray(doc.tracks)) throw new DocParseError("tracks must be an array");

  const tracks: TrackData[] = [];
  const seen = new Set<string>();
  doc.tracks.forEach((rawTrack: unknown, ti: number) => {
    const where = `tracks[${ti}]`;
    if (!isPlainObject(rawTrack)) throw new DocParseError(`${where}: track must be an object`);
    const bad = Object.keys(rawTrack).filter((k) => !["structure", "blocks"].includes(k)).sort();
    if (bad.length) throw new DocParseError(`${where}: unknown track key ${JSON.stringify(bad[0])}`);
    if (!("structure" in rawTrack) || !("blocks" in rawTrack)) {
      throw new DocParseError(`${where}: track needs structure and blocks`);
    }
    const sname = rawTrack.structure;
    if (typeof sname !== "string" || !STRUCTURE_BY_NAME.has(sname)) {
      throw new DocParseError(`${where}: unknown structure ${JSON.stringify(sname)}`);
    }
    if (seen.has(sname)) throw new DocParseError(`${where}: duplicate track for structure ${sname}`);
    seen.add(sname);
    if (!Array.isArray(rawTrack.blocks)) throw new DocParseError(`${where}: blocks must be an array`);
    const blocks = rawTrack.blocks.map((raw: unknown, bi: number) =>
      parseBlock(raw, `${where}.blocks[${bi}]`),
    );
    tracks.push({ structure: sname as StructureName, blocks: sortBlocks(blocks) });
  });
  // canonicalize but keep the duplicate check above (error text carries the
  // track index, matching the server's wording)
  return canonicalize(doc.name, tracks);
}

export function sequencesEqual(a: SequenceData, b: SequenceData): boolean {
  return JSON.stringify(a) === JSON.stringify(b);
}

export function emptySequence(name = "untitled"): SequenceData {
  return { name, tracks: [] };
}

export { STRUCTURES };
