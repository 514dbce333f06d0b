/**
 * Fixed-rate input pump: turns a pointer position source into sample
 * messages with strictly increasing timestamps.
 *
 * Mouse-as-gaze is the default, so the menus are operable with no
 * tracker attached; an external stream can push positions through the
 * same pump.  While the tab is hidden the pump keeps ticking but sends
 * nothing, and the timestamp clock keeps order on resume.
 */

export type InputMode = "mouse-as-gaze" | "external-stream";

export interface InputBinding {
  mode: InputMode;
  pxPerCm: number;
  sampleRateHz: number;
}

export function defaultBinding(pxPerCm: number): InputBinding {
  return { mode: "mouse-as-gaze", pxPerCm, sampleRateHz: 60 };
}

interface SampleSink {
  sample(t: number, x: number, y: number, valid?: boolean): void;
}

export class InputPump {
  private timer: ReturnType<typeof setInterval> | null = null;
  private lastT = -Infinity;
  private t0: number | null = null;

  constructor(
    private readonly sink: SampleSink,
    private readonly binding: InputBinding,
    private readonly readPointer: () => [number, number] | null,
    private readonly now: () => number = () => performance.now(),
    private readonly hidden: () => boolean = () =>
      typeof document !== "undefined" && document.visibilityState === "hidden",
  ) {}

  start(): void {
    if (this.timer !== null) return;
    const period = 1000 / this.binding.sampleRateHz;
    this.timer = setInterval(() => this.tick(), period);
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  get running(): boolean {
    return this.timer !== null;
  }

  private tick(): void {
    if (this.hidden()) return;
    const pos = this.readPointer();
    if (pos === null) return;
    if (this.t0 === null) this.t0 = this.now();
    let t = this.now() - this.t0;
    // the service rejects non-increasing timestamps
    if (t <= this.lastT) t = this.lastT + 0.01;
    this.lastT = t;
    this.sink.sample(t, pos[0], pos[1]);
  }
}
