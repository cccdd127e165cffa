// Read-only trace replay: a pure reducer from trace records to the same
// frame shape a live session renders, so a stored run and a live run driven
// by the same events draw identically.
export function parseTrace(text) {
    const out = [];
    for (const line of text.split("\n")) {
        const s = line.trim();
        if (!s)
            continue;
        out.push(JSON.parse(s));
    }
    return out;
}
export function initialFrame(starts) {
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
export function step(frame, rec) {
    const next = {
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
    }
    else {
        next.edges.set(rec.robot, [rec.from, rec.to]);
        next.positions[rec.robot] = null;
        next.lastEvent = `robot ${rec.robot} leaves ${JSON.stringify(rec.from)}`;
    }
    return next;
}
export function replayAll(starts, records) {
    const frames = [initialFrame(starts)];
    let cur = frames[0];
    for (const rec of records) {
        cur = step(cur, rec);
        frames.push(cur);
    }
    return frames;
}
export function summarize(frame) {
    const nodes = frame.positions
        .filter((p) => p !== null)
        .map((p) => JSON.stringify(p))
        .sort();
    const edges = [...frame.edges.values()]
        .map(([a, b]) => JSON.stringify([a, b]))
        .sort();
    return { nodes, edges, discards: frame.discards, moves: frame.moves };
}
