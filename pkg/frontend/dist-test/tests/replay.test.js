// Pure replay reducer: trace records in, frames out.
import assert from "node:assert/strict";
import { test } from "node:test";
import { initialFrame, parseTrace, replayAll, step, summarize } from "../src/replay.js";
const TRACE = [
    '{"t":0,"ev":"activate","robot":0,"from":null,"to":null,"phase":"I","conds":"00001010110"}',
    '{"t":1,"ev":"arrive","robot":0,"from":[0,2],"to":[0,3],"phase":null,"conds":null}',
    '{"t":2,"ev":"discard","robot":1,"from":null,"to":null,"phase":null,"conds":null}',
    '{"t":3,"ev":"arrive","robot":0,"from":[0,2],"to":[0,3],"phase":null,"conds":null}',
].join("\n");
test("parseTrace reads line-delimited records", () => {
    const recs = parseTrace(TRACE + "\n\n");
    assert.equal(recs.length, 4);
    assert.equal(recs[0].ev, "activate");
    assert.equal(recs[0].conds, "00001010110");
});
test("a move takes a departure and a landing", () => {
    const starts = [[0, 2], [1, 0], [0, 0]];
    let f = initialFrame(starts);
    const recs = parseTrace(TRACE);
    f = step(f, recs[0]);
    assert.equal(f.phase, "I");
    f = step(f, recs[1]); // departs
    assert.equal(f.positions[0], null);
    assert.equal(f.edges.size, 1);
    f = step(f, recs[2]); // discard
    assert.equal(f.discards, 1);
    f = step(f, recs[3]); // lands
    assert.deepEqual(f.positions[0], [0, 3]);
    assert.equal(f.edges.size, 0);
    assert.equal(f.moves, 1);
});
test("replayAll yields one frame per record plus the start", () => {
    const frames = replayAll([[0, 2], [1, 0], [0, 0]], parseTrace(TRACE));
    assert.equal(frames.length, 5);
    const final = summarize(frames[frames.length - 1]);
    assert.deepEqual(final.nodes, [
        JSON.stringify([0, 0]),
        JSON.stringify([0, 3]),
        JSON.stringify([1, 0]),
    ]);
    assert.equal(final.moves, 1);
    assert.equal(final.discards, 1);
});
test("frames are immutable snapshots", () => {
    const starts = [[0, 2]];
    const f0 = initialFrame(starts);
    const f1 = step(f0, {
        t: 0, ev: "arrive", robot: 0, from: [0, 2], to: [0, 3],
        phase: null, conds: null,
    });
    assert.deepEqual(f0.positions[0], [0, 2]);
    assert.equal(f1.positions[0], null);
});
