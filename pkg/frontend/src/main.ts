// Console wiring: one live session (or a read-only trace replay), event
// buttons for the adversary, metric dials against the space and move
// budgets, and an undo stack realized by reset-and-reapply (every applied
// event is deterministic server-side).

import { EnabledEvent, SessionClient, SessionState, StaleRevisionError } from "./protocol.js";
import { Frame, parseTrace, replayAll, TraceRecord } from "./replay.js";
import { drawScene, Scene } from "./render.js";

const $ = <T extends HTMLElement>(id: string): T =>
  document.getElementById(id) as T;

const client = new SessionClient("");
let scenario: any = null;
let applied: { event: EnabledEvent; to?: number[] }[] = [];
let replayFrames: Frame[] | null = null;
let replayIdx = 0;

function condRow(conds: string | null, phase: string | null): string {
  if (!conds) return "<em>mid-transit: no still configuration</em>";
  const cells = [...conds].map(
    (b, i) =>
      `<span class="cond ${b === "1" ? "on" : ""}">c${i}</span>`,
  );
  return `${cells.join("")} <b>phase ${phase ?? "-"}</b>`;
}

function sceneFromState(st: SessionState): Scene {
  const elected = st.candidates.find((c) => c.elected);
  return {
    nodes: st.nodes,
    edges: st.robots
      .filter((r) => r.edge)
      .map((r) => r.edge as [number[], number[]]),
    targets: st.target_nodes ?? [],
    electedCorner: elected ? elected.corner : null,
    tail: st.tail,
    formed: st.formed,
    kind: st.kind,
  };
}

function dial(value: number, limit: number): string {
  const pct = limit > 0 ? Math.min(100, (100 * value) / limit) : 0;
  const cls = pct >= 100 ? "over" : pct > 80 ? "near" : "";
  return `<div class="dial"><div class="fill ${cls}" style="width:${pct}%"></div>` +
    `<span>${value} / ${limit}</span></div>`;
}

async function refresh(st?: SessionState): Promise<void> {
  const state = st ?? (await client.state());
  drawScene($("grid") as HTMLCanvasElement, sceneFromState(state));
  $("phase-row").innerHTML = condRow(state.conds, state.phase);
  $("status").textContent = state.verdict
    ? `verdict: ${state.verdict}${state.violation ? ` (${state.violation})` : ""}`
    : state.formed
      ? "Formed"
      : `events: ${state.events}, discards: ${state.metrics.discards}`;
  $("status").className = state.formed || state.verdict === "formed" ? "banner ok" : "banner";
  const b = state.bounds;
  const m = state.metrics;
  $("dials").innerHTML =
    `<label>space square</label>${dial(m.space_square, b.space_square_limit)}` +
    `<label>long side</label>${dial(m.space_rect[0], b.rect_limit[0])}` +
    `<label>short side</label>${dial(m.space_rect[1], b.rect_limit[1])}` +
    `<label>head moves</label>${dial(m.moves_per_role.head, b.D)}` +
    `<label>inner max</label>${dial(m.moves_per_role.inner_max, 2 * b.D)}` +
    `<label>tail moves</label>${dial(m.moves_per_role.tail, 6 * b.D + 12)}`;
  $("strings").innerHTML = state.candidates
    .map(
      (c) =>
        `<div class="cand ${c.elected ? "elected" : ""}">` +
        `[${c.corner}]→[${c.side}] <code>${c.bits}</code></div>`,
    )
    .join("");
  await refreshEnabled(state);
}

async function refreshEnabled(state: SessionState): Promise<void> {
  const box = $("events");
  if (state.verdict) {
    box.innerHTML = "";
    return;
  }
  const enabled = await client.enabled();
  const transiting = state.robots.some((r) => r.state === "transit");
  box.innerHTML = "";
  for (const ev of enabled) {
    const robot = state.robots[ev.robot];
    const btn = document.createElement("button");
    const note =
      ev.kind === "activate" && transiting
        ? " (will discard)"
        : robot.state === "computed"
          ? " (departs)"
          : robot.state === "transit"
            ? " (lands)"
            : "";
    btn.textContent = `${ev.kind} ${ev.robot}${note}`;
    btn.onclick = () => void applyEvent(ev, robot);
    box.appendChild(btn);
  }
}

async function applyEvent(ev: EnabledEvent, robot: { pending?: number[][] } | any): Promise<void> {
  try {
    let to: number[] | undefined;
    if (ev.kind === "arrive" && robot.pending && robot.pending.length > 1) {
      const pick = window.prompt(
        `two possible landings: ${JSON.stringify(robot.pending)}; index?`, "0");
      to = robot.pending[Number(pick ?? "0") % robot.pending.length];
    }
    const st = await client.apply(ev, to);
    applied.push({ event: ev, to });
    await refresh(st);
  } catch (e) {
    if (e instanceof StaleRevisionError) {
      toast("another mutation won the race; refreshed");
      await refresh();
    } else {
      toast(String(e));
    }
  }
}

async function undo(): Promise<void> {
  if (!applied.length) return;
  const replay = applied.slice(0, -1);
  applied = [];
  await client.reset();
  for (const a of replay) {
    await client.apply(a.event, a.to);
    applied.push(a);
  }
  await refresh();
}

function toast(msg: string): void {
  const t = $("toast");
  t.textContent = msg;
  t.classList.add("show");
  setTimeout(() => t.classList.remove("show"), 2600);
}

// ---- replay mode -----------------------------------------------------------

function showReplayFrame(): void {
  if (!replayFrames) return;
  const f = replayFrames[replayIdx];
  const nodes = f.positions.filter((p): p is number[] => p !== null);
  drawScene($("grid") as HTMLCanvasElement, {
    nodes,
    edges: [...f.edges.values()],
    targets: [],
    electedCorner: null,
    tail: null,
    formed: replayIdx === replayFrames.length - 1,
    kind: "grid",
  });
  $("phase-row").innerHTML = condRow(f.conds, f.phase);
  $("status").textContent =
    `replay ${replayIdx}/${replayFrames.length - 1}: ${f.lastEvent} ` +
    `(moves ${f.moves}, discards ${f.discards})`;
  $("status").className = "banner replay";
}

function enterReplay(traceText: string, starts: number[][]): void {
  replayFrames = replayAll(starts, parseTrace(traceText));
  replayIdx = replayFrames.length - 1;
  $("replay-bar").style.display = "flex";
  showReplayFrame();
}

// ---- boot ------------------------------------------------------------------

async function createSession(): Promise<void> {
  try {
    scenario = JSON.parse(($("scenario") as HTMLTextAreaElement).value);
    const st = await client.create(scenario);
    applied = [];
    replayFrames = null;
    $("replay-bar").style.display = "none";
    await refresh(st);
  } catch (e) {
    toast(String(e));
  }
}

function boot(): void {
  $("create").onclick = () => void createSession();
  $("undo").onclick = () => void undo();
  $("reset").onclick = () => {
    applied = [];
    void client.reset().then((st) => refresh(st));
  };
  $("auto1").onclick = () =>
    void client
      .autoStep(1, ($("policy") as HTMLSelectElement).value, 0)
      .then((st) => refresh(st));
  $("auto50").onclick = () =>
    void client
      .autoStep(50, ($("policy") as HTMLSelectElement).value, 0)
      .then((st) => refresh(st));
  $("auto-run").onclick = () =>
    void client
      .autoStep(100000, ($("policy") as HTMLSelectElement).value, 0)
      .then((st) => refresh(st));
  $("download").onclick = () =>
    void client.trace().then(({ trace }) => {
      const a = document.createElement("a");
      a.href = URL.createObjectURL(new Blob([trace], { type: "application/jsonl" }));
      a.download = "trace.jsonl";
      a.click();
    });
  ($("trace-file") as HTMLInputElement).onchange = async (e) => {
    const file = (e.target as HTMLInputElement).files?.[0];
    if (!file || !scenario) {
      toast("load a scenario first, then its trace");
      return;
    }
    enterReplay(await file.text(), scenario.robots);
  };
  $("replay-prev").onclick = () => {
    replayIdx = Math.max(0, replayIdx - 1);
    showReplayFrame();
  };
  $("replay-next").onclick = () => {
    if (replayFrames) replayIdx = Math.min(replayFrames.length - 1, replayIdx + 1);
    showReplayFrame();
  };
}

boot();
