import { describe, expect, it } from "vitest";

import { applyEvent, flashVisible, initialModel } from "../src/model.js";
import { EventMsg } from "../src/protocol.js";

function ev(partial: Partial<EventMsg> & { kind: EventMsg["kind"] }): EventMsg {
  return { type: "event", t_ms: 0, ...partial };
}

describe("render model", () => {
  it("highlight follows enter and exit", () => {
    let m = initialModel();
    m = applyEvent(m, ev({ kind: "enter", region: { kind: "cell", label: "A" } }));
    expect(m.highlight).toBe("A");
    m = applyEvent(m, ev({ kind: "exit", region: { kind: "cell", label: "A" } }));
    expect(m.highlight).toBeNull();
  });

  it("dwell fraction tracks progress events and resets on region change", () => {
    let m = initialModel();
    m = applyEvent(m, ev({ kind: "dwell_progress", label: "B", fraction: 0.4 }));
    expect(m.dwellFraction).toBe(0.4);
    expect(m.highlight).toBe("B");
    m = applyEvent(m, ev({ kind: "enter", region: { kind: "cell", label: "C" } }));
    expect(m.dwellFraction).toBe(0);
  });

  it("fraction one arrives before the activation", () => {
    let m = initialModel();
    m = applyEvent(m, ev({ kind: "dwell_progress", label: "B", fraction: 1.0 }));
    expect(m.dwellFraction).toBe(1.0);
    m = applyEvent(m, ev({ kind: "activation", label: "B", t_ms: 500 }));
    expect(m.lastActivation).toEqual({ label: "B", tMs: 500 });
  });

  it("activation matching the prescription raises no error flash", () => {
    let m = { ...initialModel(), prescription: "A" };
    m = applyEvent(m, ev({ kind: "activation", label: "A", t_ms: 100 }));
    expect(m.errorFlash).toBeNull();
  });

  it("wrong activation flashes and the flash expires", () => {
    let m = { ...initialModel(), prescription: "A" };
    m = applyEvent(m, ev({ kind: "activation", label: "Q", t_ms: 100 }));
    expect(m.errorFlash).toEqual({ label: "Q", atMs: 100 });
    expect(flashVisible(m, 150)).toBe(true);
    expect(flashVisible(m, 1000)).toBe(false);
  });

  it("blink events toggle the indicator", () => {
    let m = initialModel();
    m = applyEvent(m, ev({ kind: "blink_start" }));
    expect(m.blinkActive).toBe(true);
    m = applyEvent(m, ev({ kind: "blink_end" }));
    expect(m.blinkActive).toBe(false);
  });

  it("is a pure reducer: same events, same model", () => {
    const events: EventMsg[] = [
      ev({ kind: "enter", region: { kind: "slice_interior", label: "K" } }),
      ev({ kind: "activation", label: "K", t_ms: 42 }),
      ev({ kind: "center_reached", t_ms: 90 }),
    ];
    const a = events.reduce(applyEvent, initialModel());
    const b = events.reduce(applyEvent, initialModel());
    expect(a).toEqual(b);
    expect(a.lastCenterMs).toBe(90);
  });
});
