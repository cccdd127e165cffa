"""Scenario files, the generator, and the command line surface."""

import json
import subprocess
import sys

import pytest

from apf import traceio
from apf.cli import main
from apf.runner import run_one
from apf.scenario import (
    Scenario,
    ScenarioError,
    generate_scenario,
    parse_scenario,
)
from apf.verify import compute_metrics


class TestParsing:
    def test_round_trip(self):
        sc = Scenario("grid", ((0, 0), (1, 0), (0, 2)), ((5, 5), (6, 5), (5, 7)),
                      seed=9, policy="fsync")
        assert parse_scenario(sc.to_json()) == sc

    @pytest.mark.parametrize("mutate,msg", [
        (lambda d: d.update(version=2), "version"),
        (lambda d: d.update(kind="hex"), "kind"),
        (lambda d: d.update(robots=[[0, 0], [0]]), "robots"),
        (lambda d: d.update(robots="nope"), "robots"),
        (lambda d: d.update(seed="x"), "seed"),
        (lambda d: d.update(extra=1), "unknown"),
    ])
    def test_strict_errors(self, mutate, msg):
        doc = json.loads(Scenario("grid", ((0, 0), (1, 0), (0, 2)),
                                  ((0, 0), (1, 0), (0, 3))).to_json())
        mutate(doc)
        with pytest.raises(ScenarioError) as e:
            parse_scenario(json.dumps(doc))
        assert msg in str(e.value)

    def test_admissibility_messages(self):
        from apf.scenario import validate_admissible

        with pytest.raises(ScenarioError, match="distinct"):
            validate_admissible(Scenario("grid", ((0, 0), (0, 0), (1, 0)),
                                         ((0, 0), (1, 0), (0, 2))))
        with pytest.raises(ScenarioError, match="symmetric"):
            validate_admissible(Scenario("grid", ((0, 0), (1, 0), (0, 1), (1, 1)),
                                         ((0, 0), (1, 0), (0, 2), (3, 3))))
        with pytest.raises(ScenarioError, match="more than 2"):
            validate_admissible(Scenario("grid", ((0, 0), (1, 0)), ((0, 0), (1, 0))))


class TestGenerator:
    def test_deterministic(self):
        a = generate_scenario(3, 4, 7)
        b = generate_scenario(3, 4, 7)
        assert a == b

    def test_line_rejection_bound(self):
        # three robots on three nodes can only form the full symmetric block
        with pytest.raises(ScenarioError) as e:
            generate_scenario(3, 3, 0, "line")
        assert e.value.code == "generation-exhausted"

    def test_symmetric_target_allowed(self):
        for seed in range(20):
            sc = generate_scenario(4, 6, seed)
            assert len(set(sc.target)) == 4  # targets distinct, symmetry fine


class TestCli:
    def run_cli(self, *args):
        return main(list(args))

    def test_run_verify_replay_round_trip(self, tmp_path):
        scen = tmp_path / "s.json"
        trace = tmp_path / "t.jsonl"
        assert self.run_cli("generate", "--k", "4", "--box", "8", "--seed", "3",
                            "--out", str(scen)) == 0
        assert self.run_cli("run", "--scenario", str(scen), "--policy",
                            "async-random", "--seed", "5", "--out", str(trace)) == 0
        assert self.run_cli("verify", "--trace", str(trace)) == 0
        assert self.run_cli("replay", "--trace", str(trace), "--limit", "4") == 0

        # metrics survive the write/read/recompute round trip
        sc = parse_scenario(scen.read_text())
        out = run_one(sc, "async-random", 5)
        again = compute_metrics(traceio.read_trace(str(trace)), sc)
        assert again == compute_metrics(out.trace, sc)

    def test_verify_rejects_tampered_trace(self, tmp_path):
        scen = tmp_path / "s.json"
        trace = tmp_path / "t.jsonl"
        self.run_cli("generate", "--k", "4", "--box", "8", "--seed", "3",
                     "--out", str(scen))
        self.run_cli("run", "--scenario", str(scen), "--seed", "5",
                     "--out", str(trace))
        lines = trace.read_bytes().decode().splitlines()
        doc = json.loads(lines[0])
        doc["conds"] = "11111111111"
        lines[0] = json.dumps(doc, separators=(",", ":"))
        trace.write_text("\n".join(lines) + "\n")
        assert self.run_cli("verify", "--trace", str(trace)) == 1

    def test_usage_error_exit_code(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert self.run_cli("run", "--scenario", str(bad)) == 2

    def test_line_run(self, tmp_path):
        scen = tmp_path / "line.json"
        scen.write_text(Scenario("line", ((0,), (2,), (3,)), ((0,), (1,), (3,))).to_json())
        assert self.run_cli("line-run", "--scenario", str(scen), "--policy",
                            "async-random", "--seed", "1") == 0

    def test_campaign_subprocess(self, tmp_path):
        out = tmp_path / "summary.json"
        r = subprocess.run(
            [sys.executable, "-m", "apf.cli", "campaign", "--count", "4",
             "--k", "3..5", "--box", "8", "--policies", "fsync,async-random",
             "--seeds", "2", "--workers", "1", "--out", str(out)],
            capture_output=True, text=True, timeout=300,
        )
        assert r.returncode == 0, r.stdout + r.stderr
        doc = json.loads(out.read_text())
        assert doc["runs"] == 16 and doc["formed"] == 16
