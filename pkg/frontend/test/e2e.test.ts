/**
 * Full-stack round trip against the real backend: spawn the service,
 * replay a scripted pointer through one Selection pair on each menu,
 * and feed the resulting CSV back through the backend's stats command.
 */

import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { SessionClient } from "../src/client.js";
import { NodeTcpTransport } from "../src/node_transport.js";
import { EventMsg, Technique } from "../src/protocol.js";
import { planPark, planReplay } from "../src/replay.js";
import { SelectionTask } from "../src/tasks.js";

let server: ChildProcess;
let port = 0;

beforeAll(async () => {
  server = spawn("python3", ["-m", "gazecross", "serve", "--port", "0"], {
    stdio: ["ignore", "ignore", "pipe"],
  });
  port = await new Promise<number>((resolve, reject) => {
    let buf = "";
    server.stderr!.on("data", (chunk: Buffer) => {
      buf += chunk.toString();
      const m = buf.match(/listening on [^:]+:(\d+)/);
      if (m) resolve(Number(m[1]));
    });
    server.on("exit", (code) => reject(new Error(`server exited: ${code}`)));
    setTimeout(() => reject(new Error("server start timeout")), 20_000);
  });
});

afterAll(() => {
  server?.kill();
});

async function connect(): Promise<SessionClient> {
  const transport = await NodeTcpTransport.connect("127.0.0.1", port);
  return new SessionClient(transport);
}

async function runSelectionPair(technique: Technique): Promise<SelectionTask> {
  const client = await connect();
  try {
    const task = new SelectionTask(technique, ["A", "N"], { user: "ui" });
    const errors: string[] = [];
    client.onError((message) => errors.push(message));
    client.onEvent((ev: EventMsg) => task.onEvent(ev));
    const layout = await client.hello(technique, { pxPerCm: 24 });
    expect(layout.kind).toBe(technique === "dwell" ? "grid" : "circular");
    for (const sample of planReplay(layout, task.prescriptions)) {
      client.sample(sample.t, sample.x, sample.y);
    }
    await client.end();
    task.finish();
    expect(errors).toEqual([]);
    return task;
  } finally {
    client.close();
  }
}

function runStats(files: string[]) {
  const proc = spawnSync("python3", ["-m", "gazecross", "stats", ...files], {
    encoding: "utf8",
  });
  return { code: proc.status, out: proc.stdout, err: proc.stderr };
}

describe("selection pair end to end", () => {
  const dir = mkdtempSync(join(tmpdir(), "gazecross-ui-"));
  const csvPaths: Record<string, string> = {};

  it("dwell grid: 20 clean trials through the live protocol", async () => {
    const task = await runSelectionPair("dwell");
    expect(task.done).toBe(true);
    expect(task.records).toHaveLength(20);
    expect(task.records.filter((r) => r.error)).toHaveLength(0);
    for (const r of task.records) {
      expect(r.activationTimeMs).not.toBeNull();
      expect(r.activationTimeMs!).toBeGreaterThan(500); // dwell is 500 ms
      expect(r.returnTimeMs).not.toBeNull();
    }
    csvPaths.dwell = join(dir, "dwell.csv");
    writeFileSync(csvPaths.dwell, task.toCsv());
  });

  it("crossing pie: 20 clean trials through the live protocol", async () => {
    const task = await runSelectionPair("crossing");
    expect(task.done).toBe(true);
    expect(task.records).toHaveLength(20);
    expect(task.records.filter((r) => r.error)).toHaveLength(0);
    csvPaths.crossing = join(dir, "crossing.csv");
    writeFileSync(csvPaths.crossing, task.toCsv());
  });

  it("each CSV feeds the backend stats command with zero warnings", () => {
    for (const technique of ["dwell", "crossing"] as const) {
      const { code, out, err } = runStats([csvPaths[technique]]);
      expect(code).toBe(0);
      expect(err).not.toMatch(/warning/i);
      expect(out.startsWith("row_kind,")).toBe(true);
      expect(out).toContain(`group,ui,${technique},1,activation_time,18`);
    }
  });

  it("pooled stats compare the techniques", () => {
    const { code, out, err } = runStats([csvPaths.dwell, csvPaths.crossing]);
    expect(code).toBe(0);
    expect(err).not.toMatch(/warning/i);
    expect(out).toMatch(/^ratio_crossing_over_dwell,ui,/m);
  });
});

describe("resting gaze never selects", () => {
  it("ten seconds parked inside the inner disk yields no activation", async () => {
    const client = await connect();
    try {
      const events: EventMsg[] = [];
      client.onEvent((ev) => events.push(ev));
      const layout = await client.hello("crossing", { pxPerCm: 24 });
      if (layout.kind !== "circular") throw new Error("expected pie layout");
      const r = layout.inner_radius_cm * 0.5 * layout.px_per_cm;
      const a = Math.PI / 4;
      for (const s of planPark([r * Math.sin(a), -r * Math.cos(a)], 10_000)) {
        client.sample(s.t, s.x, s.y);
      }
      await client.end();
      expect(events.length).toBeGreaterThan(0);
      expect(events.filter((e) => e.kind === "activation")).toHaveLength(0);
    } finally {
      client.close();
    }
  });
});
