/**
 * Browser entry point.
 *
 * Query parameters pick the session: ?technique=crossing|dwell,
 * &port=8765, &task=selection to run the alternating-pair task.  The
 * mouse is the gaze source; px_per_cm comes from a screen DPI guess and
 * can be overridden with &ppc=38.
 */

import { SessionClient, WebSocketTransport } from "./client.js";
import { defaultBinding, InputPump } from "./input.js";
import { applyEvent, initialModel, RenderModel } from "./model.js";
import { Technique } from "./protocol.js";
import { render } from "./render.js";
import { SelectionTask } from "./tasks.js";

function param(name: string, fallback: string): string {
  return new URLSearchParams(window.location.search).get(name) ?? fallback;
}

async function start(): Promise<void> {
  const canvas = document.getElementById("menu") as HTMLCanvasElement;
  const status = document.getElementById("status") as HTMLElement;
  const ctx = canvas.getContext("2d");
  if (!ctx) throw new Error("canvas 2d context unavailable");

  const technique = param("technique", "crossing") as Technique;
  const port = param("port", "8765");
  // 96 dpi -> 37.8 px/cm is a serviceable default for desktop monitors
  const pxPerCm = Number(param("ppc", "37.8"));

  const socket = new WebSocket(`ws://${window.location.hostname || "127.0.0.1"}:${port}`);
  const client = new SessionClient(new WebSocketTransport(socket));
  let model: RenderModel = initialModel();
  client.onClose(() => {
    model = { ...model, sessionState: { kind: "idle" } };
    status.textContent = "disconnected - reload to reconnect";
  });
  client.onError((message) => {
    status.textContent = `service: ${message}`;
  });

  const task =
    param("task", "free") === "selection"
      ? new SelectionTask(technique, ["A", "N"], { user: "ui" })
      : null;

  client.onEvent((ev) => {
    model = applyEvent(model, ev);
    if (task && !task.done) {
      task.onEvent(ev);
      model = { ...model, prescription: task.currentPrescription };
      if (task.done) {
        model = { ...model, sessionState: { kind: "done" } };
        offerCsv(task.toCsv());
      }
    }
  });

  const layout = await client.hello(technique, { pxPerCm });
  model = {
    ...model,
    layout,
    sessionState: { kind: "running", task: task ? "selection" : "free" },
  };
  status.textContent = `${technique} menu - ${task ? "selection task" : "free use"}`;

  let pointer: [number, number] | null = null;
  canvas.addEventListener("mousemove", (ev) => {
    const box = canvas.getBoundingClientRect();
    // canvas center is the layout origin on the wire
    pointer = [
      ev.clientX - box.left - canvas.width / 2,
      ev.clientY - box.top - canvas.height / 2,
    ];
  });
  canvas.addEventListener("mouseleave", () => {
    pointer = null;
  });

  const pump = new InputPump(client, defaultBinding(pxPerCm), () => pointer);
  pump.start();

  const frame = (): void => {
    render(ctx, model, { width: canvas.width, height: canvas.height },
      performance.now());
    requestAnimationFrame(frame);
  };
  requestAnimationFrame(frame);
}

function offerCsv(csv: string): void {
  const link = document.createElement("a");
  link.href = URL.createObjectURL(new Blob([csv], { type: "text/csv" }));
  link.download = "trials.csv";
  link.textContent = "download trials.csv";
  document.body.appendChild(link);
}

start().catch((err) => {
  const status = document.getElementById("status");
  if (status) status.textContent = String(err);
});
