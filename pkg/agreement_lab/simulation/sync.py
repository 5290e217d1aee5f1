"""Lockstep synchronous rounds with crash failures.

The synchronous algorithm first floods minima for `floor(f/2) + 1`
rounds, which leaves at most two values, then halves the distance
between them on their fixed path for `ceil(log2 diam)` rounds.
"""
from __future__ import annotations

import logging

from collections.abc import Callable, Sequence

from agreement_lab.errors import AdversaryError
from agreement_lab.graphs.core import Graph, diameter
from agreement_lab.protocols.agreement import ceil_log2, psi_path
from agreement_lab.simulation.adversary import RoundAdversary, validate_adversary
from agreement_lab.simulation.trace import ExecutionTrace, Iteration


__all__ = [
    'SYNC_PROTOCOL',
    'two_set_rounds',
    'sync_rounds',
    'sync_two_set',
    'run_sync',
]


log = logging.getLogger(__name__)


SYNC_PROTOCOL = "sync-path"


Rule = Callable[[int, frozenset[int]], int]


def two_set_rounds(f: int) -> int:
    return f // 2 + 1


def sync_rounds(g: Graph, f: int) -> int:
    """`floor(f/2) + ceil(log2 diam) + 1`."""
    return two_set_rounds(f) + ceil_log2(diameter(g))


def _check(n: int, f: int, adversary: RoundAdversary, rounds: int) -> None:
    if not 0 <= f < n:
        raise AdversaryError(f"need 0 <= f < n, got f={f} with n={n}")
    validate_adversary(adversary, n, f, rounds)


def _play_round(
    r: int,
    phase: str,
    current: list[int | None],
    adversary: RoundAdversary,
    rule: Rule
) -> Iteration:
    """Broadcast, deliver and apply `rule`; crashed entries become `None`."""
    n = len(current)
    crashing = {c.process: c for c in adversary.crashes if c.round == r}
    senders = [p for p in range(n) if current[p] is not None]
    views: list[frozenset[int] | None] = [None] * n
    chosen: list[int | None] = [None] * n
    for i in senders:
        if i in crashing:
            continue
        received = {
            value for p in senders
            if (value := current[p]) is not None
            and (p not in crashing or i in crashing[p].recipients or p == i)
        }
        view = frozenset(received)
        views[i] = view
        chosen[i] = rule(r, view)
    current[:] = chosen
    return Iteration(r, phase, tuple(views), tuple(chosen))


def sync_two_set(
    values: Sequence[int],
    f: int,
    adversary: RoundAdversary = RoundAdversary()
) -> tuple[int | None, ...]:
    """Min-flooding for `floor(f/2) + 1` rounds.

    Returns each process's decision, `None` for crashed processes.
    """
    rounds = two_set_rounds(f)
    _check(len(values), f, adversary, rounds)
    current: list[int | None] = list(values)
    for r in range(rounds):
        _play_round(r, "two-set", current, adversary, lambda _, view: min(view))
    return tuple(current)


def run_sync(
    g: Graph,
    inputs: Sequence[int],
    f: int,
    adversary: RoundAdversary = RoundAdversary(),
    seed: int | None = None
) -> ExecutionTrace:
    """Run both phases for exactly `sync_rounds(g, f)` rounds.

    Raises:
        `AdversaryError` if the plan exceeds `f` or `f >= n`.
    """
    n = len(inputs)
    for x in inputs:
        if not 0 <= x < g.n:
            raise ValueError(f"input {x} is not a vertex of {g!r}")
    first = two_set_rounds(f)
    total = sync_rounds(g, f)
    _check(n, f, adversary, total)

    current: list[int | None] = list(inputs)
    iterations = []
    for r in range(total):
        if r < first:
            it = _play_round(r, "two-set", current, adversary, lambda _, view: min(view))
        else:
            it = _play_round(
                r, "path", current, adversary, lambda _, view: psi_path(g, view))
        iterations.append(it)

    trace = ExecutionTrace(
        graph=g,
        protocol=SYNC_PROTOCOL,
        model="sync",
        inputs=tuple(inputs),
        iterations=tuple(iterations),
        outputs=tuple(current),
        schedule=adversary,
        seed=seed,
        resilience=f,
    )
    log.debug("sync outputs %s after %d rounds", trace.outputs, total)
    return trace
