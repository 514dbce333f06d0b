/**
 * Live task runner and trial logging.
 *
 * The Selection task alternates one letter pair for twenty
 * prescriptions (first two are warm-up).  The runner is a small
 * event-driven reducer: a center visit shows the prescription, the next
 * activation answers it, and the following center visit closes the
 * trial and shows the next one.  Records serialize to the same trial
 * CSV the backend's stats command reads.
 */

import { EventMsg, Technique } from "./protocol.js";

export interface TrialRecord {
  user: string;
  technique: Technique;
  block: number;
  trial: number;
  prescription: string;
  shownMs: number;
  activatedLabel: string | null;
  activatedMs: number | null;
  activationTimeMs: number | null;
  returnTimeMs: number | null;
  error: boolean;
  warmup: boolean;
}

export const RECORD_CSV_HEADER =
  "user,technique,block,trial,prescription,shown_ms," +
  "activated,activated_ms,activation_time_ms,return_time_ms,error,warmup";

function ms(value: number | null): string {
  return value === null ? "" : String(Math.max(0, Math.round(value)));
}

export function recordsToCsv(records: TrialRecord[]): string {
  const lines = [RECORD_CSV_HEADER];
  for (const r of records) {
    lines.push(
      [
        r.user,
        r.technique,
        String(r.block),
        String(r.trial),
        r.prescription,
        ms(r.shownMs),
        r.activatedLabel ?? "",
        ms(r.activatedMs),
        ms(r.activationTimeMs),
        ms(r.returnTimeMs),
        r.error ? "1" : "0",
        r.warmup ? "1" : "0",
      ].join(","),
    );
  }
  return lines.join("\n") + "\n";
}

export interface SelectionTaskOptions {
  user?: string;
  block?: number;
  prescriptionsPerPair?: number;
  warmupCount?: number;
}

type Phase = "wait-center" | "wait-activation" | "wait-return" | "done";

export class SelectionTask {
  readonly prescriptions: string[];
  readonly records: TrialRecord[] = [];
  private phase: Phase = "wait-center";
  private index = 0;
  private shownMs = 0;
  private activated: { label: string; tMs: number } | null = null;
  private readonly user: string;
  private readonly block: number;
  private readonly warmupCount: number;

  constructor(
    readonly technique: Technique,
    readonly pair: [string, string],
    opts: SelectionTaskOptions = {},
  ) {
    if (pair[0] === pair[1]) {
      throw new Error("pair letters must differ");
    }
    const count = opts.prescriptionsPerPair ?? 20;
    this.prescriptions = Array.from({ length: count }, (_, i) =>
      i % 2 === 0 ? pair[0] : pair[1],
    );
    this.user = opts.user ?? "ui";
    this.block = opts.block ?? 1;
    this.warmupCount = opts.warmupCount ?? 2;
  }

  /** Letter to show in the menu middle, or null before start / after end. */
  get currentPrescription(): string | null {
    return this.phase === "wait-center" || this.phase === "done"
      ? null
      : this.prescriptions[this.index] ?? null;
  }

  get done(): boolean {
    return this.phase === "done";
  }

  onEvent(ev: EventMsg): void {
    switch (this.phase) {
      case "wait-center":
        if (ev.kind === "center_reached") {
          this.shownMs = ev.t_ms;
          this.phase = "wait-activation";
        }
        break;
      case "wait-activation":
        if (ev.kind === "activation") {
          this.activated = { label: ev.label ?? "", tMs: ev.t_ms };
          this.phase = "wait-return";
        }
        break;
      case "wait-return":
        if (ev.kind === "center_reached") {
          this.closeTrial(ev.t_ms);
        }
        break;
      case "done":
        break;
    }
  }

  /** Flush an unfinished trial as an error (stream ended early). */
  finish(): void {
    if (this.phase === "wait-activation" || this.phase === "wait-return") {
      this.push(null, null, true);
    }
    this.phase = "done";
  }

  private closeTrial(returnMs: number): void {
    const act = this.activated;
    if (act === null) return;
    const wrong = act.label !== this.prescriptions[this.index];
    this.push(act, returnMs, wrong);
    this.activated = null;
    this.index += 1;
    if (this.index >= this.prescriptions.length) {
      this.phase = "done";
    } else {
      // the same center visit that closed this trial shows the next letter
      this.shownMs = returnMs;
      this.phase = "wait-activation";
    }
  }

  private push(
    act: { label: string; tMs: number } | null,
    returnMs: number | null,
    error: boolean,
  ): void {
    this.records.push({
      user: this.user,
      technique: this.technique,
      block: this.block,
      trial: this.index + 1,
      prescription: this.prescriptions[this.index],
      shownMs: this.shownMs,
      activatedLabel: act?.label ?? null,
      activatedMs: act?.tMs ?? null,
      activationTimeMs: act === null ? null : act.tMs - this.shownMs,
      returnTimeMs:
        act === null || returnMs === null ? null : returnMs - act.tMs,
      error,
      warmup: this.index < this.warmupCount,
    });
  }

  toCsv(): string {
    return recordsToCsv(this.records);
  }
}
