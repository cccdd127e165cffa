// Integration against the real session service: a user whose choices equal a
// seeded policy's produces the identical server-side trace, and replaying
// that trace renders the same final frame as the live session.

import assert from "node:assert/strict";
import { after, before, test } from "node:test";
import { spawn, spawnSync, ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";

import { SessionClient } from "../src/protocol.js";
import { parseTrace, replayAll, summarize } from "../src/replay.js";

// compiled tests live in frontend/dist-test/tests/, the repo root is 3 up
const ROOT = resolve(import.meta.dirname ?? ".", "..", "..", "..");
let server: ChildProcess;
let base = "";
let scenario: any;
let referenceTrace = "";

function sh(args: string[]): void {
  const r = spawnSync("python3", args, { cwd: ROOT, encoding: "utf-8" });
  assert.equal(r.status, 0, r.stdout + r.stderr);
}

before(async () => {
  const dir = mkdtempSync(join(tmpdir(), "apf-console-"));
  const scenarioPath = join(dir, "s.json");
  const tracePath = join(dir, "t.jsonl");
  // reference run straight from the batch engine
  sh(["-m", "apf.cli", "generate", "--k", "5", "--box", "9", "--seed", "11",
      "--out", scenarioPath]);
  sh(["-m", "apf.cli", "run", "--scenario", scenarioPath, "--policy",
      "async-random", "--seed", "4", "--out", tracePath]);
  scenario = JSON.parse(readFileSync(scenarioPath, "utf-8"));
  referenceTrace = readFileSync(tracePath, "utf-8");

  server = spawn("python3", ["-m", "apf.cli", "serve", "--port", "0"], {
    cwd: ROOT,
  });
  base = await new Promise<string>((resolveUrl, reject) => {
    let buf = "";
    server.stdout!.on("data", (chunk) => {
      buf += String(chunk);
      const m = buf.match(/http:\/\/127\.0\.0\.1:(\d+)\//);
      if (m) resolveUrl(`http://127.0.0.1:${m[1]}`);
    });
    server.on("exit", (code) => reject(new Error(`server died: ${code}`)));
    setTimeout(() => reject(new Error("server start timeout")), 15000);
  });
});

after(() => {
  server?.kill();
});

test("user choices equal to async-random(seed) reproduce its trace bytes", async () => {
  const client = new SessionClient(base);
  await client.create(scenario);
  for (const rec of parseTrace(referenceTrace)) {
    const event = {
      kind: rec.ev === "arrive" ? ("arrive" as const) : ("activate" as const),
      robot: rec.robot,
    };
    if (rec.ev === "arrive" && rec.to) {
      await client.apply(event, rec.to);
    } else {
      await client.apply(event);
    }
  }
  const { trace, verdict } = await client.trace();
  assert.equal(verdict, "formed");
  assert.equal(trace, referenceTrace);
});

test("replaying the stored trace matches the live session's final frame", async () => {
  const client = new SessionClient(base);
  const st0 = await client.create(scenario);
  assert.equal(st0.still, true);
  const st = await client.autoStep(1000000, "async-random", 4);
  assert.equal(st.verdict, "formed");

  const { trace } = await client.trace();
  const frames = replayAll(scenario.robots, parseTrace(trace));
  const final = summarize(frames[frames.length - 1]);

  const liveNodes = st.nodes.map((p: number[]) => JSON.stringify(p)).sort();
  assert.deepEqual(final.nodes, liveNodes);
  assert.deepEqual(final.edges, []);
  assert.equal(final.discards, st.metrics.discards);
  assert.equal(final.moves, st.metrics.moves_total);
});

test("stale revisions are refused so racing clients cannot corrupt a run", async () => {
  const client = new SessionClient(base);
  await client.create(scenario);
  const enabled = await client.enabled();
  const rev = client.revision;
  await client.apply(enabled[0]);
  client.revision = rev; // simulate a client that missed the update
  await assert.rejects(() => client.apply(enabled[0]), /stale/);
});
