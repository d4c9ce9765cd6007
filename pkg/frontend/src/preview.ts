// Schematic robot preview. The model's angles come exclusively from
// telemetry events; nothing here interpolates, extrapolates or guesses.
// An out-of-range telemetry angle is recorded as a fault instead of drawn.

import { JOINT_COUNT, STRUCTURES, angleInRange, jointIndex } from "./morphology.js";
import type { TelemetryEvent } from "./api.js";

const ACTIVE_EPSILON = 0.05; // deg; smaller changes do not light a structure

export class PreviewModel {
  private angles: number[] = new Array(JOINT_COUNT).fill(0);
  private lastEvent: TelemetryEvent | null = null;
  status = "idle";
  tMs = 0;
  /** Structures whose pose moved in the latest event. */
  active = new Set<string>();
  /** Range violations seen in the stream; must stay empty. */
  faults: string[] = [];

  applyEvent(ev: TelemetryEvent): void {
    if (!Array.isArray(ev.angles) || ev.angles.length !== JOINT_COUNT) {
      this.faults.push(`event at ${ev.t_ms} ms carries ${ev.angles?.length ?? 0} angles`);
      return;
    }
    for (let j = 0; j < JOINT_COUNT; j++) {
      if (!angleInRange(j, ev.angles[j])) {
        this.faults.push(`joint ${j} out of range at ${ev.t_ms} ms: ${ev.angles[j]}`);
        return; // refuse the whole event; the display keeps its last good pose
      }
    }
    this.active.clear();
    for (const s of STRUCTURES) {
      const f = jointIndex(s.name, "f");
      const r = jointIndex(s.name, "r");
      if (
        Math.abs(ev.angles[f] - this.angles[f]) > ACTIVE_EPSILON ||
        Math.abs(ev.angles[r] - this.angles[r]) > ACTIVE_EPSILON
      ) {
        this.active.add(s.name);
      }
    }
    this.angles = [...ev.angles];
    this.lastEvent = ev;
    this.status = ev.status;
    this.tMs = ev.t_ms;
  }

  /** Exactly the angles of the last accepted event. */
  displayedAngles(): number[] {
    return [...this.angles];
  }

  lastAccepted(): TelemetryEvent | null {
    return this.lastEvent;
  }

  angle(structure: string, axis: "f" | "r"): number {
    return this.angles[jointIndex(structure as never, axis)];
  }
}

// ---------------------------------------------------------------------------
// SVG rendering: side silhouette (pitch/lift/flex/curl) plus a top inset
// (rotate/wag). Plain transforms on grouped parts, no animation of its own;
// the figure only moves when a new telemetry event arrives.

function part(id: string, cx: number, cy: number, shape: string, active: boolean): string {
  const cls = active ? "part active" : "part";
  return `<g class="${cls}" data-part="${id}" transform-origin="${cx} ${cy}">${shape}</g>`;
}

export function renderPreviewSvg(model: PreviewModel): string {
  const a = (s: string, axis: "f" | "r") => model.angle(s, axis);
  const act = (s: string) => model.active.has(s);

  // side view: x grows toward the head (right), y grows downward
  const body = `<ellipse cx="150" cy="120" rx="80" ry="38" class="body"/>`;
  const head = part(
    "head", 242, 96,
    `<g transform="rotate(${-a("head", "f")} 242 96)">
       <circle cx="252" cy="88" r="30" class="body"/>
       <circle cx="266" cy="80" r="4" class="eye"/>
     </g>`,
    act("head"),
  );
  const earL = part(
    "ear_left", 240, 64,
    `<g transform="rotate(${-a("ear_left", "f")} 240 64)"><path d="M 234 66 L 240 36 L 250 62 Z" class="limb"/></g>`,
    act("ear_left"),
  );
  const earR = part(
    "ear_right", 262, 62,
    `<g transform="rotate(${-a("ear_right", "f")} 262 62)"><path d="M 256 64 L 264 34 L 272 60 Z" class="limb"/></g>`,
    act("ear_right"),
  );
  const limb = (name: string, x: number) => {
    const lift = a(name, "f");
    const flex = a(name, "r");
    return part(
      name, x, 140,
      `<g transform="rotate(${lift} ${x} 140)">
         <rect x="${x - 5}" y="140" width="10" height="34" rx="4" class="limb"/>
         <g transform="rotate(${flex} ${x} 174)">
           <rect x="${x - 5}" y="174" width="10" height="22" rx="4" class="limb"/>
         </g>
       </g>`,
      act(name),
    );
  };
  const tail = part(
    "tail", 74, 110,
    `<g transform="rotate(${-a("tail", "r")} 74 110)"><rect x="26" y="104" width="50" height="10" rx="5" class="limb"/></g>`,
    act("tail"),
  );

  // top inset: rotate and wag
  const top = `
    <g transform="translate(330 40)">
      <rect x="-6" y="-6" width="112" height="172" class="inset"/>
      <ellipse cx="50" cy="96" rx="26" ry="52" class="body"/>
      <g class="${act("head") ? "part active" : "part"}" data-part="head_top">
        <g transform="rotate(${a("head", "r")} 50 36)"><circle cx="50" cy="28" r="18" class="body"/><circle cx="50" cy="14" r="3" class="eye"/></g>
      </g>
      <g class="${act("tail") ? "part active" : "part"}" data-part="tail_top">
        <g transform="rotate(${a("tail", "f")} 50 148)"><rect x="47" y="148" width="6" height="34" rx="3" class="limb"/></g>
      </g>
    </g>`;

  return `<svg viewBox="0 0 450 220" xmlns="http://www.w3.org/2000/svg">
    ${tail}${body}
    ${limb("limb_rear_left", 102)}${limb("limb_rear_right", 122)}
    ${limb("limb_front_left", 178)}${limb("limb_front_right", 198)}
    ${head}${earL}${earR}
    ${top}
    <text x="10" y="208" class="hud">t=${model.tMs} ms ${model.status}</text>
  </svg>`;
}

export class PreviewView {
  constructor(private root: HTMLElement, readonly model: PreviewModel) {}

  update(ev: TelemetryEvent): void {
    this.model.applyEvent(ev);
    this.root.innerHTML = renderPreviewSvg(this.model);
  }
}
