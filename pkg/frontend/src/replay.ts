/**
 * Scripted pointer replay: deterministic sample streams through the
 * live protocol, used by the automated UI tests and demo mode.
 *
 * The planner reads target positions straight from the layout message
 * (never from its own geometry) and emits a fixed-rate pointer path in
 * pixels: park at the center, travel to the prescribed item, perform
 * the technique (hold for dwell, sweep outward through the band for
 * crossing), and return to the center for the next prescription.
 */

import { LayoutMsg, SampleMsg } from "./protocol.js";

export interface ReplayOptions {
  sampleRateHz?: number;
  centerHoldMs?: number;
  travelMs?: number;
  dwellHoldMs?: number;
  settleMs?: number;
  sweepMs?: number;
}

type Pt = [number, number];

function lerp(a: Pt, b: Pt, f: number): Pt {
  return [a[0] + (b[0] - a[0]) * f, a[1] + (b[1] - a[1]) * f];
}

function dir(angleDeg: number): Pt {
  const a = (angleDeg * Math.PI) / 180;
  return [Math.sin(a), -Math.cos(a)];
}

function cellCenterPx(layout: LayoutMsg & { kind: "grid" }, label: string | null): Pt {
  const cell = layout.cells.find((c) =>
    label === null ? c.is_center : c.label === label,
  );
  if (!cell) throw new Error(`no cell labelled ${String(label)}`);
  const ppc = layout.px_per_cm;
  return [
    (layout.origin[0] + (cell.col + 0.5) * layout.cell_size_cm) * ppc,
    (layout.origin[1] + (cell.row + 0.5) * layout.cell_size_cm) * ppc,
  ];
}

/** Waypoints a single prescription visits, starting and ending at center. */
function waypointsFor(
  layout: LayoutMsg,
  label: string,
  opts: Required<ReplayOptions>,
): { point: Pt; holdMs: number; travelMs: number }[] {
  if (layout.kind === "grid") {
    const center = cellCenterPx(layout, null);
    const target = cellCenterPx(layout, label);
    return [
      { point: target, holdMs: opts.dwellHoldMs, travelMs: opts.travelMs },
      { point: center, holdMs: opts.centerHoldMs, travelMs: opts.travelMs },
    ];
  }
  const ppc = layout.px_per_cm;
  const slice = layout.slices.find((s) => s.label === label);
  const disc = layout.disc_targets.find((d) => d.label === label);
  if (!slice || !disc) throw new Error(`no slice labelled ${label}`);
  const mid = (slice.start_angle_deg + slice.end_angle_deg) / 2;
  const [dx, dy] = dir(mid);
  const approachR = layout.inner_radius_cm * 0.6 * ppc;
  const center: Pt = [layout.center[0] * ppc, layout.center[1] * ppc];
  const approach: Pt = [center[0] + dx * approachR, center[1] + dy * approachR];
  const discPx: Pt = [disc.center[0] * ppc, disc.center[1] * ppc];
  return [
    { point: approach, holdMs: opts.settleMs, travelMs: opts.travelMs },
    { point: discPx, holdMs: opts.settleMs, travelMs: opts.sweepMs },
    { point: center, holdMs: opts.centerHoldMs, travelMs: opts.travelMs },
  ];
}

/**
 * Plan the full pointer path for a prescription list.  Timestamps start
 * at zero and advance by one sample period throughout.
 */
export function planReplay(
  layout: LayoutMsg,
  prescriptions: string[],
  options: ReplayOptions = {},
): SampleMsg[] {
  const opts: Required<ReplayOptions> = {
    sampleRateHz: options.sampleRateHz ?? 60,
    centerHoldMs: options.centerHoldMs ?? 150,
    travelMs: options.travelMs ?? 150,
    dwellHoldMs: options.dwellHoldMs ?? 650,
    settleMs: options.settleMs ?? 120,
    sweepMs: options.sweepMs ?? 100,
  };
  const period = 1000 / opts.sampleRateHz;
  const samples: SampleMsg[] = [];
  let t = 0;
  let pos: Pt =
    layout.kind === "grid"
      ? cellCenterPx(layout, null)
      : [layout.center[0] * layout.px_per_cm, layout.center[1] * layout.px_per_cm];

  const emit = (p: Pt): void => {
    samples.push({ type: "sample", t, x: p[0], y: p[1] });
    t += period;
  };

  const hold = (p: Pt, durationMs: number): void => {
    const n = Math.max(1, Math.ceil(durationMs / period));
    for (let i = 0; i < n; i += 1) emit(p);
  };

  const travel = (from: Pt, to: Pt, durationMs: number): void => {
    const n = Math.max(2, Math.ceil(durationMs / period));
    for (let i = 1; i <= n; i += 1) emit(lerp(from, to, i / n));
  };

  hold(pos, opts.centerHoldMs);
  for (const label of prescriptions) {
    for (const leg of waypointsFor(layout, label, opts)) {
      travel(pos, leg.point, leg.travelMs);
      pos = leg.point;
      hold(pos, leg.holdMs);
    }
  }
  return samples;
}

/** Pointer parked at one spot for a stretch of virtual time. */
export function planPark(
  point: Pt,
  durationMs: number,
  sampleRateHz = 60,
): SampleMsg[] {
  const period = 1000 / sampleRateHz;
  const samples: SampleMsg[] = [];
  for (let t = 0; t <= durationMs; t += period) {
    samples.push({ type: "sample", t, x: point[0], y: point[1] });
  }
  return samples;
}
