/**
 * Render state, driven exclusively by server events.
 *
 * The UI never decides selections: highlight, dwell fraction, blink
 * state, and error flashes all change only in applyEvent, so the drawn
 * frame is a pure function of the event stream plus the task's
 * prescription.
 */

import { EventMsg, LayoutMsg } from "./protocol.js";

export type SessionState =
  | { kind: "idle" }
  | { kind: "calibrating" }
  | { kind: "running"; task: string }
  | { kind: "done" };

export interface ErrorFlash {
  label: string;
  atMs: number;
}

export interface RenderModel {
  layout: LayoutMsg | null;
  highlight: string | null;
  dwellFraction: number;
  prescription: string | null;
  sessionState: SessionState;
  blinkActive: boolean;
  /** last activation seen, for flashes and logging */
  lastActivation: { label: string; tMs: number } | null;
  /** set when an activation contradicted the prescription */
  errorFlash: ErrorFlash | null;
  lastCenterMs: number | null;
}

export function initialModel(): RenderModel {
  return {
    layout: null,
    highlight: null,
    dwellFraction: 0,
    prescription: null,
    sessionState: { kind: "idle" },
    blinkActive: false,
    lastActivation: null,
    errorFlash: null,
    lastCenterMs: null,
  };
}

/** How long a wrong-selection flash stays visible. */
export const ERROR_FLASH_MS = 600;

export function applyEvent(model: RenderModel, ev: EventMsg): RenderModel {
  const next = { ...model };
  switch (ev.kind) {
    case "enter":
      next.highlight = ev.region?.label ?? null;
      next.dwellFraction = 0;
      break;
    case "exit":
      next.highlight = null;
      next.dwellFraction = 0;
      break;
    case "dwell_progress":
      next.highlight = ev.label ?? next.highlight;
      next.dwellFraction = ev.fraction ?? 0;
      break;
    case "activation":
      next.lastActivation = { label: ev.label ?? "", tMs: ev.t_ms };
      if (model.prescription !== null && ev.label !== model.prescription) {
        next.errorFlash = { label: ev.label ?? "", atMs: ev.t_ms };
      }
      break;
    case "blink_start":
      next.blinkActive = true;
      break;
    case "blink_end":
      next.blinkActive = false;
      break;
    case "center_reached":
      next.lastCenterMs = ev.t_ms;
      break;
  }
  return next;
}

export function flashVisible(model: RenderModel, nowMs: number): boolean {
  return (
    model.errorFlash !== null &&
    nowMs - model.errorFlash.atMs < ERROR_FLASH_MS
  );
}
