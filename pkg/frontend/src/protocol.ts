/**
 * Wire types and line framing for the session protocol.
 *
 * One JSON object per line (or per WebSocket text frame).  Coordinates
 * on the wire are pixels; the layout message carries px_per_cm so the
 * client can convert the cm lengths it contains.
 */

export type Technique = "dwell" | "crossing";

export interface HelloMsg {
  type: "hello";
  technique: Technique;
  items: number | string[];
  px_per_cm: number;
  distance_cm?: number;
  dwell_ms?: number;
  blink_filter?: boolean;
}

export interface SampleMsg {
  type: "sample";
  t: number;
  x: number;
  y: number;
  valid?: boolean;
}

export interface CalibrateMsg {
  type: "calibrate";
  /** five [target_px, gaze_px] pairs */
  pairs: [number, number][][];
}

export interface EndMsg {
  type: "end";
}

export type ClientMsg = HelloMsg | SampleMsg | CalibrateMsg | EndMsg;

export interface SliceInfo {
  label: string;
  start_angle_deg: number;
  end_angle_deg: number;
}

export interface DiscInfo {
  label: string;
  center: [number, number];
  radius_cm: number;
}

export interface CircularLayoutMsg {
  type: "layout";
  kind: "circular";
  technique: Technique;
  px_per_cm: number;
  center: [number, number];
  inner_radius_cm: number;
  band_width_cm: number;
  center_region_radius_cm: number;
  slices: SliceInfo[];
  disc_targets: DiscInfo[];
}

export interface CellInfo {
  label: string | null;
  row: number;
  col: number;
  is_center: boolean;
}

export interface GridLayoutMsg {
  type: "layout";
  kind: "grid";
  technique: Technique;
  px_per_cm: number;
  origin: [number, number];
  cell_size_cm: number;
  cols: number;
  rows: number;
  center_cell: [number, number];
  cells: CellInfo[];
}

export type LayoutMsg = CircularLayoutMsg | GridLayoutMsg;

export type EventKind =
  | "enter"
  | "exit"
  | "dwell_progress"
  | "activation"
  | "blink_start"
  | "blink_end"
  | "center_reached";

export interface EventMsg {
  type: "event";
  kind: EventKind;
  t_ms: number;
  label?: string;
  region?: { kind: string; label?: string };
  fraction?: number;
  technique?: Technique;
}

export interface CalibratedMsg {
  type: "calibrated";
  correction_cm: [number, number];
}

export interface ErrorMsg {
  type: "error";
  message: string;
}

export interface ByeMsg {
  type: "bye";
}

export type ServerMsg = LayoutMsg | EventMsg | CalibratedMsg | ErrorMsg | ByeMsg;

export function encode(msg: ClientMsg): string {
  return JSON.stringify(msg);
}

/** Parse one server line; throws on JSON errors or unknown types. */
export function decode(line: string): ServerMsg {
  const doc = JSON.parse(line) as { type?: string };
  switch (doc.type) {
    case "layout":
    case "event":
    case "calibrated":
    case "error":
    case "bye":
      return doc as ServerMsg;
    default:
      throw new Error(`unknown server message type ${String(doc.type)}`);
  }
}

/** Reassembles newline-delimited messages from arbitrary chunk boundaries. */
export class LineCodec {
  private partial = "";

  push(chunk: string): string[] {
    this.partial += chunk;
    const parts = this.partial.split("\n");
    this.partial = parts.pop() ?? "";
    return parts.filter((p) => p.length > 0);
  }

  /** Any trailing bytes that never saw a newline. */
  flush(): string[] {
    const rest = this.partial;
    this.partial = "";
    return rest.length > 0 ? [rest] : [];
  }
}
