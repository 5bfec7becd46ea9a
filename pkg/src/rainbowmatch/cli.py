"""Command line interface.

Subcommands compose over stdin/stdout: instances travel as one canonical
JSON object per line, so ``rainbowmatch gen ... | rainbowmatch reduce |
rainbowmatch solve`` works as a pipeline.

Exit codes:
    0   success (campaign findings are reported, not signalled)
    2   invalid input (malformed JSON, failed validation, bad arguments)
    3   stalled reduction or failed construction
    4   internal consistency error (invalid witness, non-reproducing record)
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Iterable

from .construct import ConstructStatus, PeelStrategy, construct
from .generators import GenKind, GenSpec, instances_for, latin_spec_stream, random_spec_stream
from .graph import (
    ColoredMultigraph,
    Side,
    canonical_digest,
    is_rainbow_matching,
    read_instances,
    to_canonical_json,
)
from .graph import validate as validate_graph
from .harness import (
    EvalOptions,
    H1Mode,
    Hypothesis,
    InternalConsistencyError,
    minimize,
    read_record_dicts,
    replay,
    run_campaign,
    violation_predicate,
)
from .oracle import has_rainbow, max_rainbow
from .reduction import PivotDonorPolicy, ReductionStatus, mirror, reduce_to_normal_form
from .shifting import shift

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_FINDINGS = 3
EXIT_INTERNAL = 4


def _read_text(path: str | None) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _write_lines(lines: Iterable[str], path: str | None) -> None:
    text = "".join(line + "\n" for line in lines)
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _load_graphs(path: str | None) -> list[ColoredMultigraph]:
    return read_instances(_read_text(path))


def _edges(edge_list) -> list[list[int]]:
    return [[e.u, e.v, e.c] for e in edge_list]


def _specs_from_args(args) -> list[GenSpec]:
    kind = GenKind(args.kind)
    if kind is GenKind.RANDOM:
        if args.n is None or args.left is None or args.right is None:
            raise ValueError("--kind random needs --n, --left and --right")
        return list(random_spec_stream(args.n, args.left, args.right, args.seed, args.count))
    if kind is GenKind.LATIN:
        order = args.order if args.order is not None else args.left
        if order is None:
            raise ValueError("--kind latin needs --order")
        return list(latin_spec_stream(order, args.drop, args.seed, args.count))
    if args.n is None:
        raise ValueError("--kind enumerate needs --n")
    left = args.left if args.left is not None else args.n + 1
    right = args.right if args.right is not None else args.n + 1
    return [GenSpec(GenKind.EXHAUSTIVE, args.n, left, right)]


def _eval_options(args) -> EvalOptions:
    return EvalOptions(
        h1_mode=H1Mode(args.h1_mode),
        policy=PivotDonorPolicy(args.policy),
        construct_budget=args.construct_budget,
        max_iters=args.max_iters,
    )


def _cmd_gen(args) -> int:
    lines = []
    emitted = 0
    for spec in _specs_from_args(args):
        for g in instances_for(spec):
            lines.append(to_canonical_json(g))
            emitted += 1
            if args.kind == "enumerate" and emitted >= args.count:
                break
        if args.kind == "enumerate" and emitted >= args.count:
            break
    _write_lines(lines, args.out)
    return EXIT_OK


def _cmd_validate(args) -> int:
    graphs = _load_graphs(args.inp)
    lines = []
    all_ok = True
    for g in graphs:
        report = validate_graph(g, require_counts=not args.no_counts)
        all_ok = all_ok and report.ok
        if args.format == "json":
            lines.append(
                json.dumps(
                    {
                        "digest": canonical_digest(g),
                        "ok": report.ok,
                        "violations": [
                            {"rule": v.rule, "detail": v.detail} for v in report.violations
                        ],
                    },
                    separators=(",", ":"),
                )
            )
        else:
            status = "ok" if report.ok else "; ".join(v.detail for v in report.violations)
            lines.append(f"{canonical_digest(g)} {status}")
    _write_lines(lines, args.out)
    return EXIT_OK if all_ok else EXIT_INVALID


def _cmd_solve(args) -> int:
    graphs = _load_graphs(args.inp)
    lines = []
    for g in graphs:
        if args.target is not None:
            found, m = has_rainbow(g, args.target)
            payload = {
                "digest": canonical_digest(g),
                "target": args.target,
                "found": found,
                "witness": _edges(m.edges) if m is not None else None,
            }
            text = f"{payload['digest']} target={args.target} found={found}"
        else:
            result = max_rainbow(g)
            payload = {
                "digest": canonical_digest(g),
                "max": result.max_size,
                "witness": _edges(result.witness.edges),
                "nodes": result.nodes_explored,
            }
            text = f"{payload['digest']} max={result.max_size}"
        lines.append(json.dumps(payload, separators=(",", ":")) if args.format == "json" else text)
    _write_lines(lines, args.out)
    return EXIT_OK


def _cmd_shift(args) -> int:
    graphs = _load_graphs(args.inp)
    side = Side(args.side)
    lines = []
    trace_lines = []
    for g in graphs:
        work = g if side is Side.LEFT else mirror(g)
        outcome = shift(work, args.pivot, args.donor)
        result = outcome.graph if side is Side.LEFT else mirror(outcome.graph)
        trace_lines.extend(
            json.dumps(
                {
                    "kind": r.kind.value,
                    "color": r.color,
                    "removed": _edges(r.removed),
                    "added": _edges(r.added),
                },
                separators=(",", ":"),
            )
            for r in outcome.rewrites
        )
        if args.emit == "graph":
            lines.append(to_canonical_json(result))
        else:
            lines.append(
                json.dumps(
                    {
                        "digest_before": canonical_digest(g),
                        "digest_after": canonical_digest(result),
                        "side": side.value,
                        "pivot": args.pivot,
                        "donor": args.donor,
                        "moves": outcome.moves,
                        "swaps": outcome.swaps,
                        "rewrites": [
                            {
                                "kind": r.kind.value,
                                "color": r.color,
                                "removed": _edges(r.removed),
                                "added": _edges(r.added),
                            }
                            for r in outcome.rewrites
                        ],
                        "graph": json.loads(to_canonical_json(result)),
                    },
                    separators=(",", ":"),
                )
            )
    if args.trace is not None:
        Path(args.trace).write_text("".join(t + "\n" for t in trace_lines))
    _write_lines(lines, args.out)
    return EXIT_OK


def _cmd_reduce(args) -> int:
    graphs = _load_graphs(args.inp)
    lines = []
    trace_lines = []
    all_normal = True
    for g in graphs:
        red = reduce_to_normal_form(g, PivotDonorPolicy(args.policy), args.max_iters)
        trace_lines.extend(
            json.dumps(
                {
                    "side": s.side.value,
                    "pivot": s.pivot,
                    "donor": s.donor,
                    "moves": s.moves,
                    "swaps": s.swaps,
                },
                separators=(",", ":"),
            )
            for s in red.trace
        )
        all_normal = all_normal and red.status is ReductionStatus.NORMALIZED
        if args.emit == "graph":
            lines.append(to_canonical_json(red.graph))
        else:
            lines.append(
                json.dumps(
                    {
                        "digest_before": canonical_digest(g),
                        "status": red.status.value,
                        "iterations": red.iterations,
                        "graph": json.loads(to_canonical_json(red.graph)),
                        "left_map": list(red.left_map),
                        "right_map": list(red.right_map),
                        "trace": [
                            {
                                "side": s.side.value,
                                "pivot": s.pivot,
                                "donor": s.donor,
                                "moves": s.moves,
                                "swaps": s.swaps,
                            }
                            for s in red.trace
                        ],
                    },
                    separators=(",", ":"),
                )
            )
    if args.trace is not None:
        Path(args.trace).write_text("".join(t + "\n" for t in trace_lines))
    _write_lines(lines, args.out)
    return EXIT_OK if all_normal else EXIT_FINDINGS


def _cmd_construct(args) -> int:
    graphs = _load_graphs(args.inp)
    lines = []
    worst = EXIT_OK
    for g in graphs:
        outcome = construct(
            g,
            PeelStrategy(args.strategy),
            budget=args.budget,
            policies=tuple(PivotDonorPolicy(p) for p in args.policy),
            max_iters=args.max_iters,
        )
        if outcome.status is ConstructStatus.MATCHED:
            if not is_rainbow_matching(g, outcome.matching, g.n):
                raise InternalConsistencyError(
                    f"invalid matching reported for {canonical_digest(g)}"
                )
        else:
            worst = max(worst, EXIT_FINDINGS)
        payload = {
            "digest": canonical_digest(g),
            "status": outcome.status.value,
            "matching": _edges(outcome.matching.edges) if outcome.matching else None,
            "attempts": outcome.attempts,
            "failure": None,
            "candidate": _edges(outcome.candidate.edges) if outcome.candidate else None,
            "steps": [
                {"depth": s.depth, "color": s.color, "pivot": s.pivot, "edge": list(s.edge)}
                for s in outcome.trace
            ],
        }
        if outcome.failure is not None:
            payload["failure"] = {
                "depth": outcome.failure.depth,
                "reason": outcome.failure.reason.value,
                "digest": outcome.failure.digest,
            }
        if args.format == "json":
            lines.append(json.dumps(payload, separators=(",", ":")))
        else:
            detail = (
                f"matching={payload['matching']}"
                if outcome.status is ConstructStatus.MATCHED
                else f"failure={payload['failure']}"
            )
            lines.append(f"{payload['digest']} {outcome.status.value} {detail}")
    _write_lines(lines, args.out)
    return worst


def _cmd_check(args) -> int:
    hyps = [Hypothesis(h) for h in args.hyp] if args.hyp else list(Hypothesis)
    opts = _eval_options(args)
    specs = _specs_from_args(args)
    lines = []
    all_records = []
    for hyp in hyps:
        summary, records = run_campaign(
            hyp, specs, budget=args.budget, opts=opts, workers=args.workers
        )
        all_records.extend(records)
        if args.format == "json":
            lines.append(json.dumps(summary.to_dict(), separators=(",", ":")))
        else:
            extra = " truncated" if summary.truncated else ""
            lines.append(
                f"{hyp.value}: trials={summary.trials} holds={summary.holds} "
                f"violated={summary.violated} inconclusive={summary.inconclusive}{extra}"
            )
    if args.records is not None:
        _write_lines((r.to_json_line() for r in all_records), args.records)
    _write_lines(lines, args.out)
    # violated verdicts are findings, not failures: the campaign completed
    return EXIT_OK


def _cmd_minimize(args) -> int:
    graphs = _load_graphs(args.inp)
    pred = violation_predicate(Hypothesis(args.hyp), _eval_options(args))
    lines = []
    for g in graphs:
        lines.append(to_canonical_json(minimize(g, pred)))
    _write_lines(lines, args.out)
    return EXIT_OK


def _cmd_replay(args) -> int:
    records = read_record_dicts(_read_text(args.inp))
    report = replay(records)
    payload = {
        "total": report.total,
        "violated": report.violated,
        "reproduced": report.reproduced,
        "mismatches": list(report.mismatches),
    }
    if args.format == "json":
        line = json.dumps(payload, separators=(",", ":"))
    else:
        line = (
            f"records={report.total} violated={report.violated} "
            f"reproduced={report.reproduced} mismatches={len(report.mismatches)}"
        )
    _write_lines([line], args.out)
    return EXIT_OK if report.ok else EXIT_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rainbowmatch",
        description="Shifting, normal-form reduction and rainbow matching experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    io_flags = argparse.ArgumentParser(add_help=False)
    io_flags.add_argument("--in", dest="inp", default=None, metavar="PATH",
                          help="input path, '-' or omitted for stdin")
    io_flags.add_argument("--out", default=None, metavar="PATH",
                          help="output path, '-' or omitted for stdout")

    fmt_flags = argparse.ArgumentParser(add_help=False)
    fmt_flags.add_argument("--format", choices=["json", "summary"], default="json")

    gen_flags = argparse.ArgumentParser(add_help=False)
    gen_flags.add_argument("--kind", choices=[k.value for k in GenKind], required=True)
    gen_flags.add_argument("--n", type=int, default=None, help="number of colors")
    gen_flags.add_argument("--left", type=int, default=None)
    gen_flags.add_argument("--right", type=int, default=None)
    gen_flags.add_argument("--order", type=int, default=None,
                           help="latin square order (latin kind)")
    gen_flags.add_argument("--drop", type=int, default=None,
                           help="latin symbol to drop (default order-1)")
    gen_flags.add_argument("--seed", type=int, default=0)
    gen_flags.add_argument("--count", type=int, default=1,
                           help="instances to generate (cap for enumerate)")

    hyp_flags = argparse.ArgumentParser(add_help=False)
    hyp_flags.add_argument("--h1-mode", choices=[m.value for m in H1Mode], default="policy")
    hyp_flags.add_argument("--policy", default=PivotDonorPolicy.MAX_DRAIN.value,
                           choices=[p.value for p in PivotDonorPolicy])
    hyp_flags.add_argument("--construct-budget", type=int, default=256)
    hyp_flags.add_argument("--max-iters", type=int, default=None)

    p = sub.add_parser("gen", parents=[io_flags, gen_flags],
                       help="generate instances as canonical JSON lines")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("validate", parents=[io_flags, fmt_flags],
                       help="check properness and per-color counts")
    p.add_argument("--no-counts", action="store_true",
                   help="skip the n+1 edges per color requirement")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("solve", parents=[io_flags, fmt_flags],
                       help="exact maximum rainbow matching")
    p.add_argument("--target", type=int, default=None,
                   help="decide existence at this size instead of maximizing")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("shift", parents=[io_flags],
                       help="apply one shift at a pivot/donor pair")
    p.add_argument("--pivot", type=int, required=True)
    p.add_argument("--donor", type=int, required=True)
    p.add_argument("--side", choices=[s.value for s in Side], default="left")
    p.add_argument("--emit", choices=["graph", "record"], default="graph")
    p.add_argument("--trace", metavar="PATH", default=None,
                   help="write per-color rewrites as JSON lines here")
    p.set_defaults(func=_cmd_shift)

    p = sub.add_parser("reduce", parents=[io_flags],
                       help="reduce to normal form")
    p.add_argument("--policy", default=PivotDonorPolicy.MAX_DRAIN.value,
                   choices=[pol.value for pol in PivotDonorPolicy])
    p.add_argument("--max-iters", type=int, default=None)
    p.add_argument("--emit", choices=["graph", "record"], default="graph")
    p.add_argument("--trace", metavar="PATH", default=None,
                   help="write one JSON line per shift step here")
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("construct", parents=[io_flags, fmt_flags],
                       help="inductive rainbow matching construction")
    p.add_argument("--strategy", choices=[s.value for s in PeelStrategy],
                   default=PeelStrategy.FIRST_FEASIBLE.value)
    p.add_argument("--budget", type=int, default=10_000)
    p.add_argument("--policy", action="append",
                   default=None,
                   choices=[pol.value for pol in PivotDonorPolicy],
                   help="reduction policy; repeat to try several")
    p.add_argument("--max-iters", type=int, default=None)
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("check", parents=[io_flags, fmt_flags, gen_flags, hyp_flags],
                       help="run hypothesis campaigns over generated instances")
    p.add_argument("--hyp", action="append", default=None, type=str.upper,
                   choices=[h.value for h in Hypothesis],
                   help="hypothesis to test; repeat for several (default: all)")
    p.add_argument("--budget", type=int, default=None, help="trial cap")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--records", default=None, metavar="PATH",
                   help="write per-trial JSONL records here")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("minimize", parents=[io_flags, hyp_flags],
                       help="shrink a violating instance to a 1-minimal one")
    p.add_argument("--hyp", required=True, type=str.upper,
                   choices=[h.value for h in Hypothesis])
    p.set_defaults(func=_cmd_minimize)

    p = sub.add_parser("replay", parents=[io_flags, fmt_flags],
                       help="re-verify violated records from a campaign file")
    p.set_defaults(func=_cmd_replay)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "construct" and args.policy is None:
        args.policy = [PivotDonorPolicy.MAX_DRAIN.value]
    try:
        return args.func(args)
    except InternalConsistencyError as exc:
        print(f"internal consistency error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ValueError, json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
