#!/usr/bin/env python3
"""Run the full experiment battery and write results to an output directory.

Four phases, each skippable via --phase:

    conj    exhaustive n=2 enumeration, conjecture check on every instance
    random  H1..H5 campaigns over seeded random oversized instances
    latin   Latin-square pipeline: construct vs. oracle agreement
    shrink  greedy minimization of one finding per violated hypothesis

Outputs under --out-dir:

    <hyp>.jsonl       one campaign record per trial (replayable witnesses)
    summary.json      per-phase counts and wall times
    findings.jsonl    minimized counterexamples (shrink phase)

Every phase is deterministic given --seed; re-running with the same
arguments reproduces the record files byte for byte apart from the "ms"
timing fields.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from rainbowmatch.construct import ConstructStatus, PeelStrategy, construct
from rainbowmatch.generators import (
    GenKind,
    GenSpec,
    gen_latin,
    gen_random,
    latin_spec_stream,
    random_spec_stream,
)
from rainbowmatch.graph import canonical_digest, to_canonical_json
from rainbowmatch.harness import (
    EvalOptions,
    Hypothesis,
    Verdict,
    evaluate,
    minimize,
    run_campaign,
    violation_predicate,
    write_records,
)
from rainbowmatch.oracle import max_rainbow

PHASES = ("conj", "random", "latin", "shrink")
RANDOM_HYPS = (
    Hypothesis.H1,
    Hypothesis.H2,
    Hypothesis.H3,
    Hypothesis.H4,
    Hypothesis.H5,
    Hypothesis.CONJ,
)


def phase_conj(out_dir: Path, workers: int) -> dict:
    spec = GenSpec(GenKind.EXHAUSTIVE, 2, 3, 3)
    summary, records = run_campaign(Hypothesis.CONJ, [spec], workers=workers)
    write_records(records, out_dir / "conj_exhaustive.jsonl")
    d = summary.to_dict()
    print(f"[conj] {d['trials']} instances enumerated, "
          f"{d['holds']} hold, {d['violated']} violated")
    return d


def phase_random(
    out_dir: Path, trials: int, seed: int, workers: int, opts: EvalOptions
) -> dict:
    results = {}
    for hyp in RANDOM_HYPS:
        specs = random_spec_stream(3, 6, 5, seed, trials)
        summary, records = run_campaign(hyp, specs, opts=opts, workers=workers)
        write_records(records, out_dir / f"{hyp.value.lower()}.jsonl")
        d = summary.to_dict()
        results[hyp.value] = d
        print(f"[random] {hyp.value}: {d['holds']} hold, "
              f"{d['violated']} violated, {d['inconclusive']} inconclusive "
              f"({d['ms']:.0f} ms)")
    return results


def phase_latin(out_dir: Path, trials: int, seed: int, budget: int) -> dict:
    agree = 0
    matched = 0
    rows = []
    t0 = time.perf_counter()
    for spec in latin_spec_stream(4, 3, seed, trials):
        g = gen_latin(4, spec.drop if spec.drop is not None else 3, spec.seed)
        out = construct(g, PeelStrategy.BACKTRACKING, budget=budget)
        got = out.status is ConstructStatus.MATCHED
        want = max_rainbow(g).max_size >= g.n
        matched += got
        agree += got == want
        rows.append({
            "spec": spec.to_dict(),
            "digest": canonical_digest(g),
            "constructed": got,
            "oracle": want,
        })
    ms = (time.perf_counter() - t0) * 1000.0
    (out_dir / "latin_pipeline.jsonl").write_text(
        "".join(json.dumps(r, separators=(",", ":")) + "\n" for r in rows)
    )
    print(f"[latin] {agree}/{trials} construct/oracle agreement, "
          f"{matched} matched ({ms:.0f} ms)")
    return {"trials": trials, "agree": agree, "matched": matched, "ms": ms}


def phase_shrink(out_dir: Path, trials: int, seed: int, opts: EvalOptions) -> dict:
    """Minimize the first violated instance found for each hypothesis."""
    lines = []
    for hyp in RANDOM_HYPS:
        found = None
        for spec in random_spec_stream(3, 6, 5, seed, trials):
            g = gen_random(spec)
            verdict, _ = evaluate(hyp, g, opts)
            if verdict is Verdict.VIOLATED:
                found = (spec, g)
                break
        if found is None:
            print(f"[shrink] {hyp.value}: no violation in {trials} trials")
            continue
        spec, g = found
        small = minimize(g, violation_predicate(hyp, opts))
        lines.append(json.dumps({
            "hyp": hyp.value,
            "spec": spec.to_dict(),
            "original": {"left": g.left_size, "right": g.right_size,
                         "edges": len(g.edges)},
            "minimized": json.loads(to_canonical_json(small)),
        }, separators=(",", ":")))
        print(f"[shrink] {hyp.value}: seed {spec.seed} "
              f"{g.left_size}x{g.right_size}/{len(g.edges)}e -> "
              f"{small.left_size}x{small.right_size}/{len(small.edges)}e")
    path = out_dir / "findings.jsonl"
    path.write_text("".join(line + "\n" for line in lines))
    return {"findings": len(lines)}


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", type=Path, default=Path("results"))
    ap.add_argument("--trials", type=int, default=10_000,
                    help="random-campaign size (default 10000)")
    ap.add_argument("--latin-trials", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--construct-budget", type=int, default=256)
    ap.add_argument("--phase", action="append", choices=PHASES,
                    help="run only these phases (repeatable; default all)")
    args = ap.parse_args(argv)

    phases = tuple(args.phase) if args.phase else PHASES
    args.out_dir.mkdir(parents=True, exist_ok=True)
    opts = EvalOptions(construct_budget=args.construct_budget)

    summary: dict = {"seed": args.seed, "trials": args.trials}
    if "conj" in phases:
        summary["conj"] = phase_conj(args.out_dir, args.workers)
    if "random" in phases:
        summary["random"] = phase_random(
            args.out_dir, args.trials, args.seed, args.workers, opts
        )
    if "latin" in phases:
        summary["latin"] = phase_latin(
            args.out_dir, args.latin_trials, args.seed, args.construct_budget
        )
    if "shrink" in phases:
        summary["shrink"] = phase_shrink(args.out_dir, args.trials, args.seed, opts)

    (args.out_dir / "summary.json").write_text(
        json.dumps(summary, indent=2) + "\n"
    )
    print(f"summary written to {args.out_dir / 'summary.json'}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
