/**
 * Canvas drawing for both menus.
 *
 * Works against a small structural subset of CanvasRenderingContext2D
 * so tests can record draw calls without a DOM.  All layout lengths are
 * cm and are mapped through px_per_cm around the canvas midpoint.
 *
 * Feedback: hovered element fills yellow; a dwell progress arc grows
 * around the hovered cell; a wrong selection is flagged with both a
 * distinct color and an X shape so the cue survives color confusion.
 */

import { flashVisible, RenderModel } from "./model.js";
import { CircularLayoutMsg, GridLayoutMsg } from "./protocol.js";

export interface Draw2D {
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  font: string;
  textAlign: string;
  textBaseline: string;
  clearRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  closePath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  rect(x: number, y: number, w: number, h: number): void;
  arc(
    x: number,
    y: number,
    r: number,
    a0: number,
    a1: number,
    counterclockwise?: boolean,
  ): void;
  fill(): void;
  stroke(): void;
  fillText(text: string, x: number, y: number): void;
}

export const HIGHLIGHT_YELLOW = "#F5C518";
// Okabe-Ito pair: blue for ordinary accents, vermillion for errors
export const ACCENT_BLUE = "#0072B2";
export const ERROR_VERMILLION = "#D55E00";
const INK = "#1A1A1A";
const PAPER = "#FDFDFD";
const FAINT = "#C8C8C8";

export interface Viewport {
  width: number;
  height: number;
}

/** Angle convention on the wire: degrees clockwise from 12 o'clock. */
function dir(angleDeg: number): [number, number] {
  const a = (angleDeg * Math.PI) / 180;
  return [Math.sin(a), -Math.cos(a)];
}

function canvasAngle(angleDeg: number): number {
  // canvas arcs measure from 3 o'clock counterclockwise-negative; our
  // zero is 12 o'clock going clockwise
  return ((angleDeg - 90) * Math.PI) / 180;
}

export function render(
  ctx: Draw2D,
  model: RenderModel,
  view: Viewport,
  nowMs = 0,
): void {
  ctx.clearRect(0, 0, view.width, view.height);
  ctx.fillStyle = PAPER;
  ctx.beginPath();
  ctx.rect(0, 0, view.width, view.height);
  ctx.fill();
  const layout = model.layout;
  if (!layout) {
    ctx.fillStyle = INK;
    ctx.font = "16px sans-serif";
    ctx.textAlign = "center";
    ctx.textBaseline = "middle";
    ctx.fillText("waiting for layout...", view.width / 2, view.height / 2);
    return;
  }
  if (layout.kind === "grid") {
    renderGrid(ctx, model, layout, view, nowMs);
  } else {
    renderCircular(ctx, model, layout, view, nowMs);
  }
}

function toPx(
  view: Viewport,
  pxPerCm: number,
  xCm: number,
  yCm: number,
): [number, number] {
  return [view.width / 2 + xCm * pxPerCm, view.height / 2 + yCm * pxPerCm];
}

function renderGrid(
  ctx: Draw2D,
  model: RenderModel,
  layout: GridLayoutMsg,
  view: Viewport,
  nowMs: number,
): void {
  const s = layout.cell_size_cm * layout.px_per_cm;
  const labelFont = `${Math.max(10, Math.floor(s * 0.45))}px sans-serif`;
  for (const cell of layout.cells) {
    const [x, y] = toPx(
      view,
      layout.px_per_cm,
      layout.origin[0] + cell.col * layout.cell_size_cm,
      layout.origin[1] + cell.row * layout.cell_size_cm,
    );
    const hovered = cell.label !== null && cell.label === model.highlight;
    ctx.beginPath();
    ctx.rect(x, y, s, s);
    ctx.fillStyle = hovered ? HIGHLIGHT_YELLOW : PAPER;
    ctx.fill();
    ctx.strokeStyle = cell.is_center ? ACCENT_BLUE : FAINT;
    ctx.lineWidth = cell.is_center ? 2 : 1;
    ctx.stroke();
    ctx.font = labelFont;
    ctx.textAlign = "center";
    ctx.textBaseline = "middle";
    if (cell.is_center) {
      // the prescribed letter lives in the middle cell
      if (model.prescription) {
        ctx.fillStyle = ACCENT_BLUE;
        ctx.fillText(model.prescription, x + s / 2, y + s / 2);
      }
    } else if (cell.label !== null) {
      ctx.fillStyle = INK;
      ctx.fillText(cell.label, x + s / 2, y + s / 2);
      if (hovered && model.dwellFraction > 0) {
        progressArc(ctx, x + s / 2, y + s / 2, s * 0.42, model.dwellFraction);
      }
      if (
        flashVisible(model, nowMs) &&
        model.errorFlash?.label === cell.label
      ) {
        errorCross(ctx, x + s / 2, y + s / 2, s * 0.45);
      }
    }
  }
}

function renderCircular(
  ctx: Draw2D,
  model: RenderModel,
  layout: CircularLayoutMsg,
  view: Viewport,
  nowMs: number,
): void {
  const ppc = layout.px_per_cm;
  const [cx, cy] = toPx(view, ppc, layout.center[0], layout.center[1]);
  const inner = layout.inner_radius_cm * ppc;
  const band = layout.band_width_cm * ppc;
  const labelR = inner * 0.72;
  const labelFont = `${Math.max(10, Math.floor(inner * 0.12))}px sans-serif`;

  for (const slice of layout.slices) {
    const hovered = slice.label === model.highlight;
    ctx.beginPath();
    ctx.moveTo(cx, cy);
    ctx.arc(
      cx,
      cy,
      inner,
      canvasAngle(slice.start_angle_deg),
      canvasAngle(slice.end_angle_deg),
    );
    ctx.closePath();
    ctx.fillStyle = hovered ? HIGHLIGHT_YELLOW : PAPER;
    ctx.fill();
    ctx.strokeStyle = FAINT;
    ctx.lineWidth = 1;
    ctx.stroke();
  }

  // crossing band: the invisible activation ring, drawn as a faint halo
  ctx.beginPath();
  ctx.arc(cx, cy, inner + band, 0, 2 * Math.PI);
  ctx.strokeStyle = FAINT;
  ctx.lineWidth = 1;
  ctx.stroke();

  // neutral center: resting gaze here never selects
  ctx.beginPath();
  ctx.arc(cx, cy, layout.center_region_radius_cm * ppc, 0, 2 * Math.PI);
  ctx.strokeStyle = ACCENT_BLUE;
  ctx.lineWidth = 1;
  ctx.stroke();

  ctx.font = labelFont;
  ctx.textAlign = "center";
  ctx.textBaseline = "middle";
  for (const slice of layout.slices) {
    const mid = (slice.start_angle_deg + slice.end_angle_deg) / 2;
    const [dx, dy] = dir(mid);
    ctx.fillStyle = INK;
    ctx.fillText(slice.label, cx + dx * labelR, cy + dy * labelR);
  }

  for (const disc of layout.disc_targets) {
    const [x, y] = toPx(view, ppc, disc.center[0], disc.center[1]);
    const hovered = disc.label === model.highlight;
    ctx.beginPath();
    ctx.arc(x, y, disc.radius_cm * ppc, 0, 2 * Math.PI);
    ctx.fillStyle = hovered ? HIGHLIGHT_YELLOW : PAPER;
    ctx.fill();
    ctx.strokeStyle = INK;
    ctx.lineWidth = 1;
    ctx.stroke();
    if (flashVisible(model, nowMs) && model.errorFlash?.label === disc.label) {
      errorCross(ctx, x, y, disc.radius_cm * ppc);
    }
  }

  if (model.prescription) {
    ctx.font = `${Math.max(12, Math.floor(inner * 0.2))}px sans-serif`;
    ctx.fillStyle = ACCENT_BLUE;
    ctx.fillText(model.prescription, cx, cy);
  }

  if (model.dwellFraction > 0 && model.highlight) {
    progressArc(ctx, cx, cy, inner + band + 4, model.dwellFraction);
  }
}

/** Progress ring: empty at 0, full circle exactly at 1. */
function progressArc(
  ctx: Draw2D,
  x: number,
  y: number,
  r: number,
  fraction: number,
): void {
  ctx.beginPath();
  ctx.arc(x, y, r, -Math.PI / 2, -Math.PI / 2 + 2 * Math.PI * fraction);
  ctx.strokeStyle = ACCENT_BLUE;
  ctx.lineWidth = 3;
  ctx.stroke();
}

/** Shape + color error cue: vermillion X across the offending target. */
function errorCross(ctx: Draw2D, x: number, y: number, half: number): void {
  ctx.beginPath();
  ctx.moveTo(x - half, y - half);
  ctx.lineTo(x + half, y + half);
  ctx.moveTo(x - half, y + half);
  ctx.lineTo(x + half, y - half);
  ctx.strokeStyle = ERROR_VERMILLION;
  ctx.lineWidth = 3;
  ctx.stroke();
}
