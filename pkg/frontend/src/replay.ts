// Read-only trace replay: a pure reducer from trace records to the same
// frame shape a live session renders, so a stored run and a live run driven
// by the same events draw identically.

export interface TraceRecord {
  t: number;
  ev: "activate" | "arrive" | "discard";
  robot: number;
  from: number[] | null;
  to: number[] | null;
  phase: string | null;
  conds: string | null;
}

export interface Frame {
  t: number;
  // robot id -> node (null while on an edge)
  positions: (number[] | null)[];
  edges: Map<number, [number[], number[]]>;
  phase: string | null;
  conds: string | null;
  lastEvent: string;
  discards: number;
  moves: number;
}

export function parseTrace(text: string): TraceRecord[] {
  const out: TraceRecord[] = [];
  for (const line of text.split("\n")) {
    const s = line.trim();
    if (!s) continue;
    out.push(JSON.parse(s) as TraceRecord);
  }
  return out;
}

export function initialFrame(starts: number[][]): Frame {
  return {
    t: -1,
    positions: starts.map((p) => [...p]),
    edges: new Map(),
    phase: null,
    conds: null,
    lastEvent: "start",
    discards: 0,
    moves: 0,
  };
}

export function step(frame: Frame, rec: TraceRecord): Frame {
  const next: Frame = {
    t: rec.t,
    positions: frame.positions.map((p) => (p ? [...p] : null)),
    edges: new Map(frame.edges),
    phase: frame.phase,
    conds: frame.conds,
    lastEvent: "",
    discards: frame.discards,
    moves: frame.moves,
  };
  if (rec.ev === "activate") {
    next.phase = rec.phase;
    next.conds = rec.conds;
    next.lastEvent = `robot ${rec.robot} looks (phase ${rec.phase ?? "-"})`;
    return next;
  }
  if (rec.ev === "discard") {
    next.discards += 1;
    next.lastEvent = `robot ${rec.robot} sees a robot on an edge and discards`;
    return next;
  }
  // arrive: first occurrence departs, second lands
  if (next.edges.has(rec.robot)) {
    next.edges.delete(rec.robot);
    next.positions[rec.robot] = rec.to ? [...rec.to] : null;
    next.moves += 1;
    next.lastEvent = `robot ${rec.robot} lands at ${JSON.stringify(rec.to)}`;
  } else {
    next.edges.set(rec.robot, [rec.from as number[], rec.to as number[]]);
    next.positions[rec.robot] = null;
    next.lastEvent = `robot ${rec.robot} leaves ${JSON.stringify(rec.from)}`;
  }
  return next;
}

export function replayAll(starts: number[][], records: TraceRecord[]): Frame[] {
  const frames = [initialFrame(starts)];
  let cur = frames[0];
  for (const rec of records) {
    cur = step(cur, rec);
    frames.push(cur);
  }
  return frames;
}

// Normalized view of what gets drawn, used to compare a replayed final frame
// with a live session's reported state.
export interface RenderSummary {
  nodes: string[];
  edges: string[];
  discards: number;
  moves: number;
}

export function summarize(frame: Frame): RenderSummary {
  const nodes = frame.positions
    .filter((p): p is number[] => p !== null)
    .map((p) => JSON.stringify(p))
    .sort();
  const edges = [...frame.edges.values()]
    .map(([a, b]) => JSON.stringify([a, b]))
    .sort();
  return { nodes, edges, discards: frame.discards, moves: frame.moves };
}
