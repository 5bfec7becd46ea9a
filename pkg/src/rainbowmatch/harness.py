"""Campaign runner for the procedure's unproven hypotheses.

Each hypothesis is a measurable predicate evaluated per instance:

* H1: shifting preserves existence of a size-n rainbow matching, in both
  directions (neither destroys nor creates one).
* H2: reduction terminates in normal form.
* H3: after peeling a color and its pivot, re-normalization empties exactly
  the peeled right vertex.
* H4: the inductive construction succeeds whenever the oracle finds a
  size-n matching.
* H5: a fully assembled candidate matching exists in the original graph.
* CONJ: every valid instance has a rainbow matching of size n.

A Violated verdict is a *finding*, not an error: campaigns exit cleanly and
report counts.  Only internal inconsistencies (an invalid Matched witness, a
non-reproducing record) are failures.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Iterator

from .construct import ConstructStatus, PeelStrategy, construct
from .generators import GenSpec, instances_for
from .graph import (
    ColoredMultigraph,
    Side,
    canonical_digest,
    delete_color,
    delete_vertex,
    from_dict,
    is_rainbow_matching,
    to_dict,
    validate,
)
from .oracle import max_rainbow
from .reduction import (
    PivotDonorPolicy,
    ReductionStatus,
    compact_isolated,
    mirror,
    pick_donor,
    pick_pivot,
    reduce_to_normal_form,
)
from .shifting import shift


class Hypothesis(str, Enum):
    H1 = "H1"
    H2 = "H2"
    H3 = "H3"
    H4 = "H4"
    H5 = "H5"
    CONJ = "CONJ"


class Verdict(str, Enum):
    HOLDS = "holds"
    VIOLATED = "violated"
    INCONCLUSIVE = "inconclusive"


class H1Mode(str, Enum):
    # policy: test only the (side, pivot, donor) the reduction would pick
    # next; all: test every left-side pair whose donor has an edge, whether
    # or not the pivot is missing a color.
    POLICY = "policy"
    ALL = "all"


class InternalConsistencyError(Exception):
    """A witness failed its own validity check; always a hard failure."""


@dataclass(frozen=True)
class EvalOptions:
    h1_mode: H1Mode = H1Mode.POLICY
    policy: PivotDonorPolicy = PivotDonorPolicy.MAX_DRAIN
    construct_budget: int = 256
    max_iters: int | None = None

    def to_dict(self) -> dict:
        return {
            "h1_mode": self.h1_mode.value,
            "policy": self.policy.value,
            "construct_budget": self.construct_budget,
            "max_iters": self.max_iters,
        }

    @staticmethod
    def from_dict(d: dict) -> "EvalOptions":
        return EvalOptions(
            h1_mode=H1Mode(d.get("h1_mode", "policy")),
            policy=PivotDonorPolicy(d.get("policy", "maxdrain")),
            construct_budget=d.get("construct_budget", 256),
            max_iters=d.get("max_iters"),
        )


@dataclass(frozen=True)
class CampaignRecord:
    hypothesis: Hypothesis
    spec: GenSpec
    instance_digest: str
    verdict: Verdict
    witness: dict | None
    wall_time_ms: float

    def to_json_line(self) -> str:
        return json.dumps(
            {
                "hyp": self.hypothesis.value,
                "digest": self.instance_digest,
                "verdict": self.verdict.value,
                "spec": self.spec.to_dict(),
                "witness": self.witness,
                "ms": self.wall_time_ms,
            },
            separators=(",", ":"),
        )


@dataclass(frozen=True)
class CampaignSummary:
    hypothesis: Hypothesis
    trials: int
    holds: int
    violated: int
    inconclusive: int
    truncated: bool
    wall_time_ms: float

    def to_dict(self) -> dict:
        return {
            "hyp": self.hypothesis.value,
            "trials": self.trials,
            "holds": self.holds,
            "violated": self.violated,
            "inconclusive": self.inconclusive,
            "truncated": self.truncated,
            "ms": self.wall_time_ms,
        }


@dataclass(frozen=True)
class ReplayReport:
    total: int
    violated: int
    reproduced: int
    mismatches: tuple[int, ...]  # indices of non-reproducing records

    @property
    def ok(self) -> bool:
        return not self.mismatches


def _witness(g: ColoredMultigraph, opts: EvalOptions, **extra) -> dict:
    w: dict = {"instance": to_dict(g)}
    w.update(extra)
    w["opts"] = opts.to_dict()
    return w


def _eval_conj(g: ColoredMultigraph, opts: EvalOptions) -> tuple[Verdict, dict | None]:
    result = max_rainbow(g)
    if result.max_size >= g.n:
        return Verdict.HOLDS, None
    return Verdict.VIOLATED, _witness(g, opts, max=result.max_size)


def _policy_step(
    g: ColoredMultigraph, opts: EvalOptions
) -> tuple[Side, ColoredMultigraph, int, int] | None:
    """The first (side, working graph, pivot, donor) the reduction would use,
    or None when the graph is already normal."""
    cur, _, _ = compact_isolated(g)
    target = g.n + 1
    left_over = cur.left_size > target
    right_over = cur.right_size > target
    if not left_over and not right_over:
        return None
    side = Side.LEFT if left_over else Side.RIGHT
    work = cur if side is Side.LEFT else mirror(cur)
    pivot = pick_pivot(work)
    donor = pick_donor(work, pivot, opts.policy)
    return side, work, pivot, donor


def _eval_h1(g: ColoredMultigraph, opts: EvalOptions) -> tuple[Verdict, dict | None]:
    n = g.n
    if opts.h1_mode is H1Mode.POLICY:
        step = _policy_step(g, opts)
        if step is None:
            return Verdict.INCONCLUSIVE, None
        side, work, pivot, donor = step
        pairs = [(side, work, pivot, donor)]
    else:
        deg = [0] * g.left_size
        for e in g.edges:
            deg[e.u] += 1
        pairs = [
            (Side.LEFT, g, pivot, donor)
            for pivot in range(g.left_size)
            for donor in range(g.left_size)
            if donor != pivot and deg[donor] > 0
        ]
        if not pairs:
            return Verdict.INCONCLUSIVE, None

    cache: dict[int, int] = {}
    for side, work, pivot, donor in pairs:
        key = id(work)
        if key not in cache:
            cache[key] = max_rainbow(work).max_size
        before = cache[key]
        after = max_rainbow(shift(work, pivot, donor).graph).max_size
        if (before >= n) != (after >= n):
            direction = "forward" if before >= n else "reverse"
            return Verdict.VIOLATED, _witness(
                g,
                opts,
                side=side.value,
                pivot=pivot,
                donor=donor,
                direction=direction,
                max_before=before,
                max_after=after,
            )
    return Verdict.HOLDS, None


def _eval_h2(g: ColoredMultigraph, opts: EvalOptions) -> tuple[Verdict, dict | None]:
    red = reduce_to_normal_form(g, opts.policy, opts.max_iters)
    if red.status is ReductionStatus.NORMALIZED:
        return Verdict.HOLDS, None
    detail = _witness(g, opts, status=red.status.value, iterations=red.iterations)
    if red.status is ReductionStatus.STALLED:
        return Verdict.VIOLATED, detail
    return Verdict.INCONCLUSIVE, detail


def _eval_h3(g: ColoredMultigraph, opts: EvalOptions) -> tuple[Verdict, dict | None]:
    if g.n < 2:
        return Verdict.INCONCLUSIVE, None
    red = reduce_to_normal_form(g, opts.policy, opts.max_iters)
    if red.status is not ReductionStatus.NORMALIZED:
        return Verdict.INCONCLUSIVE, _witness(g, opts, stage="normalize", status=red.status.value)
    h = red.graph
    carriers = [e.u for e in h.edges if e.c == 0]
    if not carriers:
        return Verdict.INCONCLUSIVE, _witness(g, opts, stage="peel")
    pivot = min(carriers)
    peel = next(e for e in h.edges if e.u == pivot and e.c == 0)
    residual = delete_vertex(delete_color(h, 0), Side.LEFT, pivot)
    red2 = reduce_to_normal_form(residual, opts.policy, opts.max_iters)
    if red2.status is not ReductionStatus.NORMALIZED:
        return Verdict.INCONCLUSIVE, _witness(g, opts, stage="residual", status=red2.status.value)
    if peel.v in red2.right_map:
        return Verdict.VIOLATED, _witness(
            g, opts, color=0, pivot=pivot, peeled_right=peel.v
        )
    return Verdict.HOLDS, None


def _run_construct(g: ColoredMultigraph, opts: EvalOptions):
    return construct(
        g,
        PeelStrategy.BACKTRACKING,
        budget=opts.construct_budget,
        policies=(opts.policy,),
        max_iters=opts.max_iters,
    )


def _check_matched(g: ColoredMultigraph, outcome) -> None:
    if not is_rainbow_matching(g, outcome.matching, g.n):
        raise InternalConsistencyError(
            f"construct returned an invalid matching on {canonical_digest(g)}"
        )


def _eval_h4(g: ColoredMultigraph, opts: EvalOptions) -> tuple[Verdict, dict | None]:
    if g.n < 2:
        return Verdict.INCONCLUSIVE, None
    outcome = _run_construct(g, opts)
    if outcome.status is ConstructStatus.MATCHED:
        _check_matched(g, outcome)
        return Verdict.HOLDS, None
    oracle_max = max_rainbow(g).max_size
    failure = {
        "depth": outcome.failure.depth,
        "reason": outcome.failure.reason.value,
        "digest": outcome.failure.digest,
    }
    if oracle_max >= g.n:
        return Verdict.VIOLATED, _witness(g, opts, oracle_max=oracle_max, failure=failure)
    return Verdict.INCONCLUSIVE, _witness(g, opts, oracle_max=oracle_max, failure=failure)


def _eval_h5(g: ColoredMultigraph, opts: EvalOptions) -> tuple[Verdict, dict | None]:
    if g.n < 2:
        return Verdict.INCONCLUSIVE, None
    outcome = _run_construct(g, opts)
    if outcome.status is ConstructStatus.MATCHED:
        _check_matched(g, outcome)
        return Verdict.HOLDS, None
    if outcome.candidate is not None:
        return Verdict.VIOLATED, _witness(
            g, opts, candidate=[[e.u, e.v, e.c] for e in outcome.candidate.edges]
        )
    failure = {
        "depth": outcome.failure.depth,
        "reason": outcome.failure.reason.value,
        "digest": outcome.failure.digest,
    }
    return Verdict.INCONCLUSIVE, _witness(g, opts, failure=failure)


_EVALUATORS: dict[Hypothesis, Callable] = {
    Hypothesis.CONJ: _eval_conj,
    Hypothesis.H1: _eval_h1,
    Hypothesis.H2: _eval_h2,
    Hypothesis.H3: _eval_h3,
    Hypothesis.H4: _eval_h4,
    Hypothesis.H5: _eval_h5,
}


def evaluate(
    hyp: Hypothesis, g: ColoredMultigraph, opts: EvalOptions = EvalOptions()
) -> tuple[Verdict, dict | None]:
    """Evaluate one hypothesis on one instance.  Pure and deterministic."""
    return _EVALUATORS[hyp](g, opts)


def _expand(specs: Iterable[GenSpec]) -> Iterator[tuple[GenSpec, ColoredMultigraph]]:
    for spec in specs:
        for g in instances_for(spec):
            yield spec, g


def _eval_trial(args) -> tuple[int, CampaignRecord]:
    idx, hyp, spec, g, opts = args
    t0 = time.perf_counter()
    verdict, witness = evaluate(hyp, g, opts)
    ms = round((time.perf_counter() - t0) * 1000, 3)
    return idx, CampaignRecord(hyp, spec, canonical_digest(g), verdict, witness, ms)


def _eval_bucket(bucket) -> list[tuple[int, CampaignRecord]]:
    return [_eval_trial(item) for item in bucket]


def run_campaign(
    hyp: Hypothesis,
    specs: Iterable[GenSpec],
    budget: int | None = None,
    opts: EvalOptions = EvalOptions(),
    workers: int = 1,
) -> tuple[CampaignSummary, list[CampaignRecord]]:
    """Evaluate ``hyp`` over every instance the spec stream produces.

    ``budget`` caps the number of trials; hitting the cap only flags the
    summary as truncated.  With ``workers > 1`` instances are sharded by
    digest and evaluated in separate processes; the record order (and hence
    the output bytes, timing aside) is identical to a sequential run.
    """
    t0 = time.perf_counter()
    trials: list[tuple[int, Hypothesis, GenSpec, ColoredMultigraph, EvalOptions]] = []
    truncated = False
    for spec, g in _expand(specs):
        if budget is not None and len(trials) >= budget:
            truncated = True
            break
        trials.append((len(trials), hyp, spec, g, opts))

    if workers > 1 and len(trials) > 1:
        buckets: list[list] = [[] for _ in range(workers)]
        for item in trials:
            shard = int(canonical_digest(item[3]), 16) % workers
            buckets[shard].append(item)
        indexed: list[tuple[int, CampaignRecord]] = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_eval_bucket, buckets):
                indexed.extend(part)
        indexed.sort(key=lambda p: p[0])
        records = [rec for _, rec in indexed]
    else:
        records = [_eval_trial(item)[1] for item in trials]

    counts = {v: 0 for v in Verdict}
    for rec in records:
        counts[rec.verdict] += 1
    summary = CampaignSummary(
        hypothesis=hyp,
        trials=len(records),
        holds=counts[Verdict.HOLDS],
        violated=counts[Verdict.VIOLATED],
        inconclusive=counts[Verdict.INCONCLUSIVE],
        truncated=truncated,
        wall_time_ms=round((time.perf_counter() - t0) * 1000, 3),
    )
    return summary, records


def write_records(records: Iterable[CampaignRecord], path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for rec in records:
            f.write(rec.to_json_line() + "\n")


def read_record_dicts(text: str) -> list[dict]:
    out = []
    for line in text.splitlines():
        if line.strip():
            out.append(json.loads(line))
    return out


def replay(records: Iterable[dict]) -> ReplayReport:
    """Re-run every Violated record's predicate on its embedded instance;
    a non-reproducing record indicates a determinism bug."""
    total = 0
    violated = 0
    mismatches: list[int] = []
    for idx, rec in enumerate(records):
        total += 1
        if rec.get("verdict") != Verdict.VIOLATED.value:
            continue
        violated += 1
        witness = rec.get("witness") or {}
        if "instance" not in witness:
            mismatches.append(idx)
            continue
        g = from_dict(witness["instance"])
        opts = EvalOptions.from_dict(witness.get("opts", {}))
        verdict, _ = evaluate(Hypothesis(rec["hyp"]), g, opts)
        if verdict is not Verdict.VIOLATED:
            mismatches.append(idx)
    return ReplayReport(total, violated, violated - len(mismatches), tuple(mismatches))


def _counts_valid(g: ColoredMultigraph) -> bool:
    return g.n >= 1 and validate(g, require_counts=True).ok


def violation_predicate(
    hyp: Hypothesis, opts: EvalOptions = EvalOptions()
) -> Callable[[ColoredMultigraph], bool]:
    """Predicate for minimization: instance is in-domain and still violates."""

    def pred(g: ColoredMultigraph) -> bool:
        if not _counts_valid(g):
            return False
        verdict, _ = evaluate(hyp, g, opts)
        return verdict is Verdict.VIOLATED

    return pred


def minimize(
    g: ColoredMultigraph, predicate: Callable[[ColoredMultigraph], bool]
) -> ColoredMultigraph:
    """Greedy 1-minimal shrink: repeatedly drop one color or one vertex while
    the instance stays valid and the predicate still holds."""
    if not predicate(g):
        raise ValueError("predicate does not hold on the input instance")

    def candidates(cur: ColoredMultigraph) -> Iterator[ColoredMultigraph]:
        for c in range(cur.n):
            yield delete_color(cur, c)
        for side in (Side.LEFT, Side.RIGHT):
            for v in range(cur.side_size(side)):
                yield delete_vertex(cur, side, v)

    changed = True
    while changed:
        changed = False
        for cand in candidates(g):
            if _counts_valid(cand) and predicate(cand):
                g = cand
                changed = True
                break
    return g
