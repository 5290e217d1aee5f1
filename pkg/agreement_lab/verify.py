"""Correctness predicates and per-iteration lemma checks for traces.

Task predicates take the inputs and the outputs of one run, with
`None` standing for a crashed process. `check_trace` replays the
convergence lemmas of each protocol family over a recorded trace.

Within one trace, `X(t)` is the union of the views taken in iteration
`t` and `Y(t)` is the set of values chosen in it, so `Y(T)` is the set
of decisions.
"""
from __future__ import annotations

import itertools
import logging

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import networkx as nx

from agreement_lab.annotations import JSONDict
from agreement_lab.config import Budgets, DEFAULT_BUDGETS
from agreement_lab.errors import TraceFormatError, UndecidedError
from agreement_lab.graphs.core import (
    Graph,
    convex_hull,
    diameter,
    induced_subgraph,
    interval,
    is_clique,
    set_diameter,
)
from agreement_lab.graphs.classify import (
    contains_induced_3sun,
    is_bridged,
    is_nicely_bridged_exact,
)
from agreement_lab.protocols.agreement import (
    ProtocolId,
    ceil_log2,
    ceil_log_three_halves,
)
from agreement_lab.simulation.sync import SYNC_PROTOCOL, two_set_rounds
from agreement_lab.simulation.trace import ExecutionTrace


__all__ = [
    'Verdict',
    'VerdictBundle',
    'check_agreement',
    'check_validity_interval',
    'check_validity_hull',
    'check_clique_gathering',
    'check_validity_minimal_path',
    'check_two_set',
    'check_outputs',
    'check_trace',
    'LEMMAS',
]


log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Verdict:
    name: str
    passed: bool
    detail: str = ""
    t: int | None = None
    """Iteration of the first failure, for lemma checks."""
    gating: bool = True
    """Reporting-only verdicts never fail a bundle."""

    def to_json(self) -> JSONDict:
        return {
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "t": self.t,
            "gating": self.gating,
        }


@dataclass(frozen=True)
class VerdictBundle:
    verdicts: tuple[Verdict, ...]
    first_failure: tuple[str, int | None] | None = None
    failure_counts: dict[str, int] = field(default_factory=dict, compare=False)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts if v.gating)

    def __getitem__(self, name: str) -> Verdict:
        for v in self.verdicts:
            if v.name == name:
                return v
        raise KeyError(name)

    def names(self) -> list[str]:
        return [v.name for v in self.verdicts]

    def to_json(self) -> JSONDict:
        first = None
        if self.first_failure:
            lemma, t = self.first_failure
            first = {"lemma": lemma, "t": t}
        return {
            "passed": self.passed,
            "first_failure": first,
            "failure_counts": dict(sorted(self.failure_counts.items())),
            "verdicts": [v.to_json() for v in self.verdicts],
        }


def _live(values: Iterable[int | None]) -> list[int]:
    return [x for x in values if x is not None]


def check_agreement(g: Graph, outputs: Iterable[int | None]) -> Verdict:
    """Distinct decisions are pairwise adjacent."""
    decided = sorted(set(_live(outputs)))
    for u, v in itertools.combinations(decided, 2):
        if not g.has_edge(u, v):
            return Verdict("agreement", False, f"outputs {u} and {v} are not adjacent")
    return Verdict("agreement", True)


def check_validity_interval(
    g: Graph,
    inputs: Sequence[int],
    outputs: Iterable[int | None]
) -> Verdict:
    """Every output lies on a shortest path between two inputs."""
    pairs = list(itertools.combinations_with_replacement(sorted(set(inputs)), 2))
    witnesses = []
    for y in sorted(set(_live(outputs))):
        pair = next((p for p in pairs if y in interval(g, *p)), None)
        if pair is None:
            return Verdict(
                "validity-interval", False,
                f"output {y} is on no shortest path between inputs", gating=False)
        witnesses.append(f"{y} in I{pair}")
    return Verdict("validity-interval", True, "; ".join(witnesses), gating=False)


def check_validity_hull(
    g: Graph,
    inputs: Sequence[int],
    outputs: Iterable[int | None]
) -> Verdict:
    """Every output lies in the convex hull of the inputs."""
    hull = convex_hull(g, inputs)
    outside = sorted(set(_live(outputs)) - hull)
    if outside:
        return Verdict("validity-hull", False, f"outputs {outside} lie outside the hull")
    return Verdict("validity-hull", True)


def check_clique_gathering(
    g: Graph,
    inputs: Sequence[int],
    outputs: Iterable[int | None]
) -> Verdict:
    """With pairwise adjacent inputs, every output is an input."""
    if not is_clique(g, inputs):
        return Verdict("clique-gathering", True, "inputs are not a clique")
    stray = sorted(set(_live(outputs)) - set(inputs))
    if stray:
        return Verdict("clique-gathering", False, f"outputs {stray} are not inputs")
    return Verdict("clique-gathering", True)


def check_validity_minimal_path(
    g: Graph,
    inputs: Sequence[int],
    outputs: Iterable[int | None],
    budgets: Budgets = DEFAULT_BUDGETS
) -> Verdict:
    """Every output lies on an induced path between two inputs.

    Reporting only. Raises `UndecidedError` past
    `budgets.minimal_path_vertices`.
    """
    budgets.check("minimal_path_vertices", g.n)
    nxg = g.to_networkx()
    allowed = set(inputs)
    for u, w in itertools.combinations(sorted(set(inputs)), 2):
        for path in nx.all_simple_paths(nxg, u, w):
            chordless = not any(
                g.has_edge(path[i], path[j])
                for i in range(len(path)) for j in range(i + 2, len(path)))
            if chordless:
                allowed.update(path)
    outside = sorted(set(_live(outputs)) - allowed)
    if outside:
        return Verdict(
            "validity-minimal-path", False,
            f"outputs {outside} lie on no induced path between inputs", gating=False)
    return Verdict("validity-minimal-path", True, gating=False)


def check_two_set(inputs: Sequence[int], outputs: Iterable[int | None]) -> Verdict:
    """At most two distinct decisions, each of them an input."""
    decided = sorted(set(_live(outputs)))
    if len(decided) > 2:
        return Verdict("two-set", False, f"{len(decided)} distinct decisions {decided}")
    stray = [y for y in decided if y not in inputs]
    if stray:
        return Verdict("two-set", False, f"decisions {stray} are not inputs")
    return Verdict("two-set", True)


def check_outputs(
    g: Graph,
    inputs: Sequence[int],
    outputs: Sequence[int | None]
) -> VerdictBundle:
    """The task predicates alone, without replaying iterations."""
    verdicts = (
        check_agreement(g, outputs),
        check_validity_hull(g, inputs, outputs),
        check_validity_interval(g, inputs, outputs),
        check_clique_gathering(g, inputs, outputs),
    )
    first = next(((v.name, None) for v in verdicts if v.gating and not v.passed), None)
    return VerdictBundle(verdicts, first)


LEMMAS: dict[str, tuple[str, ...]] = {
    "common": ("snapshot-chain", "own-value", "view-values", "hull-validity"),
    str(ProtocolId.ONE_RESILIENT): ("min-phase-two-set", "path-shrink"),
    str(ProtocolId.WAIT_FREE_BRIDGED): (
        "bridged-shrink",
        "three-sun-free-shrink",
        "shrink-envelope",
        "diameter-two-landing",
        "radius-one-step",
        "strict-hull-shrink",
    ),
    SYNC_PROTOCOL: ("round-count", "two-set-phase", "sync-path-shrink", "path-view-size"),
}


class _Recorder:
    """Collects lemma outcomes in check order."""

    def __init__(self, names: Iterable[str]):
        self.names = list(names)
        self.failures: dict[str, tuple[int, str]] = {}
        self.counts: dict[str, int] = {}
        self.first: tuple[str, int | None] | None = None
        self.notes: dict[str, str] = {}

    def check(self, name: str, t: int, ok: bool, detail: str = "") -> None:
        if ok:
            return
        self.counts[name] = self.counts.get(name, 0) + 1
        self.failures.setdefault(name, (t, detail))
        if self.first is None:
            self.first = (name, t)

    def skip(self, name: str, reason: str) -> None:
        self.notes[name] = reason

    def verdicts(self) -> list[Verdict]:
        out = []
        for name in self.names:
            if name in self.failures:
                t, detail = self.failures[name]
                out.append(Verdict(name, False, detail, t))
            else:
                out.append(Verdict(name, True, self.notes.get(name, "")))
        return out


def _diam(g: Graph, values: Iterable[int]) -> int | None:
    members = set(values)
    return set_diameter(g, members) if members else None


def _hull_radius(g: Graph, values: frozenset[int]) -> int:
    hull = convex_hull(g, values)
    return int(g.distances.within(hull).max(axis=1).min())


@lru_cache(maxsize=4096)
def _hull_has_3sun(g: Graph, values: frozenset[int], budgets: Budgets) -> bool:
    sub, _ = induced_subgraph(g, convex_hull(g, values))
    return contains_induced_3sun(sub, budgets)


@lru_cache(maxsize=64)
def _graph_class(g: Graph, budgets: Budgets) -> tuple[bool | None, bool | None]:
    try:
        bridged = is_bridged(g, budgets).bridged
    except UndecidedError:
        return None, None
    if not bridged:
        return False, False
    try:
        return True, is_nicely_bridged_exact(g, budgets)
    except UndecidedError:
        return True, None


def check_trace(
    g: Graph,
    trace: ExecutionTrace,
    protocol_class: str | None = None,
    budgets: Budgets = DEFAULT_BUDGETS
) -> VerdictBundle:
    """Replay every lemma that applies to the trace's protocol family.

    Structural lemmas are checked per iteration; shrink lemmas relate
    `X(t)` to `Y(t)` and are reported at `t + 1`. Lemmas that need a
    graph class are skipped, with a note, when the class does not hold
    or is undecided.

    Raises:
        `TraceFormatError` for a trace that does not fit `g`.
    """
    family = protocol_class or trace.protocol
    if family not in LEMMAS:
        raise TraceFormatError(f"unknown protocol family {family!r}")
    if trace.graph != g:
        raise TraceFormatError("trace was recorded on a different graph")
    n = trace.n
    if len(trace.outputs) != n or any(
        len(it.views) != n or len(it.chosen) != n for it in trace.iterations
    ):
        raise TraceFormatError("every iteration needs one entry per process")

    is_sync = family == SYNC_PROTOCOL
    rec = _Recorder(LEMMAS["common"] + LEMMAS[family])
    input_hull = convex_hull(g, trace.inputs)
    diam_g = diameter(g)
    last = len(trace.iterations) - 1

    bridged: bool | None = None
    nicely: bool | None = None
    if family == str(ProtocolId.WAIT_FREE_BRIDGED):
        bridged, nicely = _graph_class(g, budgets)
        if not bridged:
            reason = "graph not bridged" if bridged is False else "bridgedness undecided"
            for name in ("bridged-shrink", "three-sun-free-shrink",
                         "shrink-envelope", "diameter-two-landing"):
                rec.skip(name, reason)
        if not nicely:
            rec.skip("strict-hull-shrink", "graph not known to be nicely bridged")
    t_star = ceil_log_three_halves(diam_g) + 1
    sync_first = two_set_rounds(trace.resilience)

    current: list[int | None] = list(trace.inputs)
    for it in trace.iterations:
        t = it.t
        views = [v for v in it.views if v is not None]
        x_t = it.union_of_views()
        y_t = it.live_values()
        values_now = {x for x in current if x is not None}

        if not is_sync:
            chain = all(a <= b or b <= a for a, b in itertools.combinations(views, 2))
            rec.check("snapshot-chain", t, chain, "views are not nested")
        for i, view in enumerate(it.views):
            own = current[i]
            if view is None:
                continue
            rec.check(
                "own-value", t, own is not None and own in view,
                f"process {i} does not see its own value")
            rec.check(
                "view-values", t, view <= values_now,
                f"process {i} saw {sorted(view - values_now)} that nobody holds")
        rec.check(
            "hull-validity", t, x_t <= input_hull,
            f"values {sorted(x_t - input_hull)} left the input hull")

        d_x, d_y = _diam(g, x_t), _diam(g, y_t)
        if d_x is not None and d_y is not None:
            if family == str(ProtocolId.ONE_RESILIENT):
                if t == 0:
                    rec.check(
                        "min-phase-two-set", t + 1, len(y_t) <= 2,
                        f"min phase left {len(y_t)} values")
                else:
                    rec.check(
                        "path-shrink", t + 1, d_y <= -(-d_x // 2),
                        f"D went from {d_x} to {d_y}")

            elif family == str(ProtocolId.WAIT_FREE_BRIDGED):
                if bridged and t <= t_star:
                    rec.check(
                        "bridged-shrink", t + 1, 3 * d_y <= 2 * (d_x + 1),
                        f"D went from {d_x} to {d_y}")
                    if not _hull_has_3sun(g, x_t, budgets):
                        rec.check(
                            "three-sun-free-shrink", t + 1, 2 * d_y <= d_x + 1,
                            f"D went from {d_x} to {d_y} without a 3-sun")
                if bridged and t <= t_star:
                    bound = Fraction(2, 3) ** t * (diam_g - 2) + 2
                    rec.check(
                        "shrink-envelope", t, d_x <= bound,
                        f"D(X({t})) = {d_x} exceeds {float(bound):.3f}")
                if bridged and t == t_star:
                    rec.check(
                        "diameter-two-landing", t, d_x <= 2,
                        f"D(X(T*)) = {d_x}")
                if _hull_radius(g, x_t) == 1:
                    rec.check(
                        "radius-one-step", t + 1, is_clique(g, y_t),
                        f"radius-one hull but chosen {sorted(y_t)} is no clique")
                if nicely and d_x >= 2:
                    shrunk = convex_hull(g, y_t) < convex_hull(g, x_t)
                    rec.check(
                        "strict-hull-shrink", t + 1, shrunk,
                        "hull did not strictly shrink")

            elif is_sync:
                if t == sync_first - 1:
                    verdict = check_two_set(trace.inputs, it.chosen)
                    rec.check("two-set-phase", t + 1, verdict.passed, verdict.detail)
                if t >= sync_first:
                    rec.check(
                        "sync-path-shrink", t + 1, d_y <= -(-d_x // 2),
                        f"D went from {d_x} to {d_y}")
                    rec.check(
                        "path-view-size", t, 1 <= len(x_t) <= 2,
                        f"|X({t})| = {len(x_t)}")
        current = list(it.chosen)

    if is_sync:
        expected = sync_first + ceil_log2(diam_g)
        rec.check(
            "round-count", last + 1, len(trace.iterations) == expected,
            f"ran {len(trace.iterations)} rounds, expected {expected}")

    verdicts = rec.verdicts()
    final = [
        check_agreement(g, trace.outputs),
        check_validity_hull(g, trace.inputs, trace.outputs),
        check_validity_interval(g, trace.inputs, trace.outputs),
    ]
    first = rec.first
    for v in final:
        if v.gating and not v.passed:
            rec.counts[v.name] = rec.counts.get(v.name, 0) + 1
            if first is None:
                first = (v.name, last + 1)
    bundle = VerdictBundle(tuple(verdicts + final), first, dict(rec.counts))
    if not bundle.passed:
        log.debug("trace failed first at %s", first)
    return bundle
