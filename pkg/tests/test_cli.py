from __future__ import annotations

import io
import json
import sys

import pytest

from rainbowmatch.cli import main
from rainbowmatch.graph import canonical_digest, from_json, read_instances, to_canonical_json


def run(argv, stdin_text=None, monkeypatch=None):
    if stdin_text is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin_text))
    return main(argv)


def test_gen_writes_instances(tmp_path):
    out = tmp_path / "batch.jsonl"
    code = main([
        "gen", "--kind", "random", "--n", "3", "--left", "4", "--right", "4",
        "--seed", "5", "--count", "3", "--out", str(out),
    ])
    assert code == 0
    graphs = read_instances(out.read_text())
    assert len(graphs) == 3
    assert all(g.n == 3 for g in graphs)


def test_gen_deterministic(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    argv = ["gen", "--kind", "random", "--n", "2", "--left", "4", "--right", "3",
            "--seed", "9", "--count", "5"]
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_gen_enumerate_capped(tmp_path):
    out = tmp_path / "enum.jsonl"
    assert main(["gen", "--kind", "enumerate", "--n", "2", "--count", "100",
                 "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 36


def test_gen_latin(tmp_path):
    out = tmp_path / "latin.jsonl"
    assert main(["gen", "--kind", "latin", "--order", "4", "--seed", "1",
                 "--out", str(out)]) == 0
    g = from_json(out.read_text())
    assert g.n == 3 and g.left_size == 4


def test_validate_ok_and_exit_codes(tmp_path, capsys):
    inst = tmp_path / "good.json"
    assert main(["gen", "--kind", "random", "--n", "2", "--left", "3", "--right", "3",
                 "--seed", "0", "--out", str(inst)]) == 0
    assert main(["validate", "--in", str(inst)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["ok"]

    bad = tmp_path / "bad.json"
    bad.write_text('{"n":1,"left":2,"right":2,"edges":[[0,0,0],[0,1,0]]}')
    assert main(["validate", "--in", str(bad)]) == 2


def test_validate_malformed_input(tmp_path, capsys):
    garbage = tmp_path / "garbage.json"
    garbage.write_text("not json at all")
    assert main(["validate", "--in", str(garbage)]) == 2


def test_solve(tmp_path, capsys):
    inst = tmp_path / "i.json"
    main(["gen", "--kind", "latin", "--order", "4", "--seed", "0", "--out", str(inst)])
    assert main(["solve", "--in", str(inst)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["max"] == 3
    assert len(out["witness"]) == 3
    assert main(["solve", "--in", str(inst), "--target", "4"]) == 0
    assert json.loads(capsys.readouterr().out)["found"] is False


def test_shift_graph_emit(tmp_path, capsys, monkeypatch):
    text = '{"n":1,"left":2,"right":2,"edges":[[1,0,0]]}'
    assert run(["shift", "--pivot", "0", "--donor", "1"], text, monkeypatch) == 0
    g = from_json(capsys.readouterr().out)
    assert [list(e) for e in g.edges] == [[0, 0, 0]]


def test_shift_record_emit(tmp_path, capsys, monkeypatch):
    text = '{"n":1,"left":2,"right":2,"edges":[[0,0,0],[1,1,0]]}'
    assert run(["shift", "--pivot", "0", "--donor", "1", "--emit", "record"],
               text, monkeypatch) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["swaps"] == 1 and rec["moves"] == 0
    assert rec["rewrites"][0]["kind"] == "swap"


def test_shift_right_side(capsys, monkeypatch):
    # mirror of the move golden: donor on the right side
    text = '{"n":1,"left":2,"right":2,"edges":[[0,1,0]]}'
    assert run(["shift", "--pivot", "0", "--donor", "1", "--side", "right"],
               text, monkeypatch) == 0
    g = from_json(capsys.readouterr().out)
    assert [list(e) for e in g.edges] == [[0, 0, 0]]


def test_shift_bad_pivot(capsys, monkeypatch):
    text = '{"n":1,"left":2,"right":2,"edges":[[0,0,0]]}'
    assert run(["shift", "--pivot", "0", "--donor", "0"], text, monkeypatch) == 2


def test_reduce_pipeline(tmp_path, capsys):
    inst = tmp_path / "wide.json"
    main(["gen", "--kind", "random", "--n", "3", "--left", "6", "--right", "5",
          "--seed", "0", "--out", str(inst)])
    assert main(["reduce", "--in", str(inst)]) == 0
    g = from_json(capsys.readouterr().out)
    assert g.left_size == 4 and g.right_size == 4


def test_reduce_stall_exit_code(tmp_path, capsys):
    inst = tmp_path / "cycle.json"
    main(["gen", "--kind", "random", "--n", "3", "--left", "6", "--right", "5",
          "--seed", "17", "--out", str(inst)])
    assert main(["reduce", "--in", str(inst), "--emit", "record"]) == 3
    rec = json.loads(capsys.readouterr().out)
    assert rec["status"] == "stalled"
    assert rec["trace"]


def test_shift_trace_file(tmp_path, capsys, monkeypatch):
    trace = tmp_path / "rewrites.jsonl"
    text = '{"n":1,"left":2,"right":2,"edges":[[1,0,0]]}'
    assert run(["shift", "--pivot", "0", "--donor", "1", "--trace", str(trace)],
               text, monkeypatch) == 0
    capsys.readouterr()
    rewrites = [json.loads(line) for line in trace.read_text().splitlines()]
    assert rewrites == [
        {"kind": "move", "color": 0, "removed": [[1, 0, 0]], "added": [[0, 0, 0]]}
    ]


def test_reduce_trace_file(tmp_path, capsys):
    inst = tmp_path / "wide.json"
    trace = tmp_path / "steps.jsonl"
    main(["gen", "--kind", "random", "--n", "3", "--left", "6", "--right", "5",
          "--seed", "0", "--out", str(inst)])
    assert main(["reduce", "--in", str(inst), "--emit", "record",
                 "--trace", str(trace)]) == 0
    rec = json.loads(capsys.readouterr().out)
    steps = [json.loads(line) for line in trace.read_text().splitlines()]
    assert steps == rec["trace"]
    assert all(s["side"] in ("left", "right") for s in steps)


def test_construct_latin(tmp_path, capsys):
    inst = tmp_path / "l4.json"
    main(["gen", "--kind", "latin", "--order", "4", "--seed", "3", "--out", str(inst)])
    assert main(["construct", "--in", str(inst), "--strategy", "backtrack"]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["status"] == "matched"
    assert len(rec["matching"]) == 3


def test_construct_failure_exit_code(tmp_path, capsys):
    inst = tmp_path / "hard.json"
    main(["gen", "--kind", "random", "--n", "3", "--left", "6", "--right", "5",
          "--seed", "1", "--out", str(inst)])
    assert main(["construct", "--in", str(inst), "--strategy", "backtrack"]) == 3
    rec = json.loads(capsys.readouterr().out)
    assert rec["status"] == "step_failed"
    assert rec["failure"]["reason"] == "count_deficit"
    assert rec["candidate"] is not None


def test_check_and_replay(tmp_path, capsys):
    records = tmp_path / "rec.jsonl"
    code = main([
        "check", "--kind", "random", "--n", "3", "--left", "6", "--right", "5",
        "--seed", "0", "--count", "25", "--hyp", "H2", "--hyp", "H3",
        "--records", str(records), "--format", "summary",
    ])
    assert code == 0  # violations are findings, not failures
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("H2:") and lines[1].startswith("H3:")
    assert "violated=" in lines[0] and "violated=0" not in lines[0]
    assert main(["replay", "--in", str(records)]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["mismatches"] == []
    assert rep["violated"] > 0


def test_check_clean_exit(tmp_path, capsys):
    code = main([
        "check", "--kind", "enumerate", "--n", "2", "--hyp", "CONJ",
    ])
    assert code == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["trials"] == 36 and summary["holds"] == 36


def test_replay_tampered_exit(tmp_path, capsys):
    records = tmp_path / "rec.jsonl"
    main(["check", "--kind", "random", "--n", "3", "--left", "6", "--right", "5",
          "--seed", "0", "--count", "25", "--hyp", "H3", "--records", str(records)])
    capsys.readouterr()
    lines = [json.loads(l) for l in records.read_text().splitlines()]
    victim = next(l for l in lines if l["verdict"] == "violated")
    victim["witness"]["instance"]["edges"] = victim["witness"]["instance"]["edges"][::-1]
    victim["witness"]["opts"]["max_iters"] = 0  # forces inconclusive on replay
    records.write_text("\n".join(json.dumps(l) for l in lines) + "\n")
    assert main(["replay", "--in", str(records)]) == 4


def test_minimize_cli(tmp_path, capsys):
    inst = tmp_path / "v.json"
    main(["gen", "--kind", "random", "--n", "3", "--left", "6", "--right", "5",
          "--seed", "17", "--out", str(inst)])
    assert main(["minimize", "--hyp", "H2", "--in", str(inst)]) == 0
    g = from_json(capsys.readouterr().out)
    assert g.n >= 1


def test_minimize_non_violating_is_error(tmp_path, capsys):
    inst = tmp_path / "ok.json"
    main(["gen", "--kind", "enumerate", "--n", "2", "--count", "1", "--out", str(inst)])
    assert main(["minimize", "--hyp", "CONJ", "--in", str(inst)]) == 2


def test_pipeline_gen_reduce_solve(tmp_path, capsys, monkeypatch):
    inst = tmp_path / "p.json"
    main(["gen", "--kind", "random", "--n", "3", "--left", "6", "--right", "5",
          "--seed", "3", "--out", str(inst)])
    capsys.readouterr()
    assert main(["reduce", "--in", str(inst)]) == 0
    reduced = capsys.readouterr().out
    assert run(["solve"], reduced, monkeypatch) == 0
    assert json.loads(capsys.readouterr().out)["max"] >= 2


def test_round_trip_instance_file(tmp_path, capsys):
    inst = tmp_path / "r.json"
    main(["gen", "--kind", "random", "--n", "2", "--left", "4", "--right", "4",
          "--seed", "2", "--out", str(inst)])
    g = from_json(inst.read_text())
    assert to_canonical_json(g) == inst.read_text().strip()
