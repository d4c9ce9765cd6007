// Joint morphology mirror: 8 structures x 2 axes with per-axis ranges.
// Must stay in lockstep with the service; the shared conformance corpus is
// the contract that keeps both sides honest.

export type StructureName =
  | "ear_left"
  | "ear_right"
  | "head"
  | "limb_front_left"
  | "limb_front_right"
  | "limb_rear_left"
  | "limb_rear_right"
  | "tail";

export interface AxisSpec {
  name: string;
  min: number;
  max: number;
}

export interface StructureSpec {
  name: StructureName;
  label: string;
  f: AxisSpec; // first axis, the block's f_deg
  r: AxisSpec; // second axis, the block's r_deg
}

export const STRUCTURES: readonly StructureSpec[] = [
  { name: "ear_left", label: "Ear L", f: { name: "pitch", min: -40, max: 40 }, r: { name: "rotate", min: -40, max: 40 } },
  { name: "ear_right", label: "Ear R", f: { name: "pitch", min: -40, max: 40 }, r: { name: "rotate", min: -40, max: 40 } },
  { name: "head", label: "Head", f: { name: "pitch", min: -40, max: 40 }, r: { name: "rotate", min: -40, max: 40 } },
  { name: "limb_front_left", label: "Leg FL", f: { name: "lift", min: -90, max: 90 }, r: { name: "flex", min: 0, max: 90 } },
  { name: "limb_front_right", label: "Leg FR", f: { name: "lift", min: -90, max: 90 }, r: { name: "flex", min: 0, max: 90 } },
  { name: "limb_rear_left", label: "Leg RL", f: { name: "lift", min: -90, max: 90 }, r: { name: "flex", min: 0, max: 90 } },
  { name: "limb_rear_right", label: "Leg RR", f: { name: "lift", min: -90, max: 90 }, r: { name: "flex", min: 0, max: 90 } },
  { name: "tail", label: "Tail", f: { name: "wag", min: -90, max: 90 }, r: { name: "curl", min: 0, max: 90 } },
];

export const STRUCTURE_BY_NAME: ReadonlyMap<string, StructureSpec> = new Map(
  STRUCTURES.map((s) => [s.name, s]),
);

export const STRUCTURE_ORDER: ReadonlyMap<string, number> = new Map(
  STRUCTURES.map((s, i) => [s.name, i]),
);

export const JOINT_COUNT = 16;

/** Flat joint index: two per structure, F axis first. */
export function jointIndex(structure: StructureName, axis: "f" | "r"): number {
  const si = STRUCTURE_ORDER.get(structure);
  if (si === undefined) throw new Error(`unknown structure ${structure}`);
  return 2 * si + (axis === "f" ? 0 : 1);
}

export function jointRange(index: number): AxisSpec {
  if (!Number.isInteger(index) || index < 0 || index >= JOINT_COUNT) {
    throw new Error(`joint index ${index} out of range`);
  }
  const spec = STRUCTURES[Math.floor(index / 2)];
  return index % 2 === 0 ? spec.f : spec.r;
}

export function angleInRange(index: number, value: number): boolean {
  const axis = jointRange(index);
  return value >= axis.min && value <= axis.max;
}
