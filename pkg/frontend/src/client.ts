/**
 * Session client over an injectable transport.
 *
 * The transport only moves lines; all protocol knowledge lives here.
 * Browsers use WebSocketTransport, tests and tools use the TCP
 * transport from node_transport.ts.
 */

import {
  CalibratedMsg,
  ClientMsg,
  decode,
  encode,
  EventMsg,
  LayoutMsg,
  ServerMsg,
  Technique,
} from "./protocol.js";

export interface Transport {
  send(line: string): void;
  onLine(handler: (line: string) => void): void;
  onClose(handler: () => void): void;
  close(): void;
}

export interface HelloOptions {
  items?: number | string[];
  pxPerCm?: number;
  distanceCm?: number;
  dwellMs?: number;
  blinkFilter?: boolean;
}

export class SessionClient {
  layout: LayoutMsg | null = null;
  private readonly eventHandlers: ((ev: EventMsg) => void)[] = [];
  private readonly errorHandlers: ((message: string) => void)[] = [];
  private readonly closeHandlers: (() => void)[] = [];
  private layoutWaiters: ((layout: LayoutMsg) => void)[] = [];
  private byeWaiters: (() => void)[] = [];
  private calWaiters: ((msg: CalibratedMsg) => void)[] = [];

  constructor(private readonly transport: Transport) {
    transport.onLine((line) => this.receive(line));
    transport.onClose(() => {
      for (const h of this.closeHandlers) h();
    });
  }

  hello(technique: Technique, opts: HelloOptions = {}): Promise<LayoutMsg> {
    this.send({
      type: "hello",
      technique,
      items: opts.items ?? 26,
      px_per_cm: opts.pxPerCm ?? 1.0,
      ...(opts.distanceCm !== undefined ? { distance_cm: opts.distanceCm } : {}),
      ...(opts.dwellMs !== undefined ? { dwell_ms: opts.dwellMs } : {}),
      ...(opts.blinkFilter !== undefined
        ? { blink_filter: opts.blinkFilter }
        : {}),
    });
    return new Promise((resolve) => this.layoutWaiters.push(resolve));
  }

  calibrate(pairs: [number, number][][]): Promise<CalibratedMsg> {
    this.send({ type: "calibrate", pairs });
    return new Promise((resolve) => this.calWaiters.push(resolve));
  }

  sample(t: number, x: number, y: number, valid = true): void {
    this.send({ type: "sample", t, x, y, ...(valid ? {} : { valid }) });
  }

  /** Flush server-side buffers and wait for the goodbye. */
  end(): Promise<void> {
    this.send({ type: "end" });
    return new Promise((resolve) => this.byeWaiters.push(resolve));
  }

  close(): void {
    this.transport.close();
  }

  onEvent(handler: (ev: EventMsg) => void): void {
    this.eventHandlers.push(handler);
  }

  onError(handler: (message: string) => void): void {
    this.errorHandlers.push(handler);
  }

  onClose(handler: () => void): void {
    this.closeHandlers.push(handler);
  }

  private send(msg: ClientMsg): void {
    this.transport.send(encode(msg));
  }

  private receive(line: string): void {
    let msg: ServerMsg;
    try {
      msg = decode(line);
    } catch (err) {
      for (const h of this.errorHandlers) h(String(err));
      return;
    }
    switch (msg.type) {
      case "layout": {
        this.layout = msg;
        const waiters = this.layoutWaiters;
        this.layoutWaiters = [];
        for (const w of waiters) w(msg);
        break;
      }
      case "event":
        for (const h of this.eventHandlers) h(msg);
        break;
      case "calibrated": {
        const waiters = this.calWaiters;
        this.calWaiters = [];
        for (const w of waiters) w(msg);
        break;
      }
      case "error":
        for (const h of this.errorHandlers) h(msg.message);
        break;
      case "bye": {
        const waiters = this.byeWaiters;
        this.byeWaiters = [];
        for (const w of waiters) w();
        break;
      }
    }
  }
}

/** Browser transport: one JSON message per WebSocket text frame. */
export class WebSocketTransport implements Transport {
  private readonly lineHandlers: ((line: string) => void)[] = [];
  private readonly closeHandlers: (() => void)[] = [];
  private readonly queue: string[] = [];
  private open = false;

  constructor(private readonly socket: WebSocket) {
    socket.addEventListener("open", () => {
      this.open = true;
      for (const line of this.queue.splice(0)) socket.send(line);
    });
    socket.addEventListener("message", (ev) => {
      for (const h of this.lineHandlers) h(String(ev.data));
    });
    socket.addEventListener("close", () => {
      this.open = false;
      for (const h of this.closeHandlers) h();
    });
  }

  send(line: string): void {
    if (this.open) {
      this.socket.send(line);
    } else {
      this.queue.push(line);
    }
  }

  onLine(handler: (line: string) => void): void {
    this.lineHandlers.push(handler);
  }

  onClose(handler: () => void): void {
    this.closeHandlers.push(handler);
  }

  close(): void {
    this.socket.close();
  }
}
