"""Line-delimited trace files and their metadata sidecar.

One UTF-8 JSON object per event, append-only, fixed key order:

    {"t": 0, "ev": "activate", "robot": 2, "from": null, "to": null,
     "phase": "I", "conds": "01101011010"}

``from``/``to`` are nodes as coordinate lists (null when the event moves
nothing), ``phase``/``conds`` only appear non-null on still-configuration
records.  The sidecar ``<trace>.meta.json`` stores the scenario, policy,
seed and verdict so a trace file is self-contained for verification.
"""

from __future__ import annotations

import json
import os

_KEYS = ("t", "ev", "robot", "from", "to", "phase", "conds")


def record_to_line(rec: dict) -> str:
    doc = {
        "t": rec["t"],
        "ev": rec["ev"],
        "robot": rec["robot"],
        "from": list(rec["from"]) if rec["from"] is not None else None,
        "to": list(rec["to"]) if rec["to"] is not None else None,
        "phase": rec["phase"],
        "conds": rec["conds"],
    }
    return json.dumps(doc, separators=(",", ":"))


def trace_to_bytes(trace: list[dict]) -> bytes:
    return "".join(record_to_line(r) + "\n" for r in trace).encode("utf-8")


def write_trace(trace: list[dict], path: str) -> None:
    with open(path, "wb") as f:
        f.write(trace_to_bytes(trace))


def read_trace(path: str) -> list[dict]:
    out = []
    with open(path, "r", encoding="utf-8") as f:
        for i, line in enumerate(f):
            line = line.strip()
            if not line:
                continue
            doc = json.loads(line)
            missing = [k for k in _KEYS if k not in doc]
            if missing:
                raise ValueError(f"trace line {i}: missing fields {missing}")
            doc["from"] = tuple(doc["from"]) if doc["from"] is not None else None
            doc["to"] = tuple(doc["to"]) if doc["to"] is not None else None
            out.append(doc)
    return out


def meta_path(trace_path: str) -> str:
    return trace_path + ".meta.json"


def write_meta(trace_path: str, scenario, policy: str, seed: int, verdict: str,
               violation: str | None = None) -> None:
    doc = {
        "scenario": json.loads(scenario.to_json()),
        "policy": policy,
        "seed": seed,
        "verdict": verdict,
        "violation": violation,
    }
    with open(meta_path(trace_path), "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=1, sort_keys=True)
        f.write("\n")


def read_meta(trace_path: str) -> dict | None:
    p = meta_path(trace_path)
    if not os.path.exists(p):
        return None
    with open(p, "r", encoding="utf-8") as f:
        return json.load(f)
