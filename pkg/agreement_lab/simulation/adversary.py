"""Crash plans for the synchronous round model.

A crashing process sends its round-`r` value to a chosen subset of
the others and then stops; it takes no part in later rounds.
"""
from __future__ import annotations

import itertools
import logging
import random

from collections.abc import Iterator
from dataclasses import dataclass
from typing import Any

from agreement_lab.annotations import JSONDict, ProcessId
from agreement_lab.config import Budgets, DEFAULT_BUDGETS
from agreement_lab.errors import AdversaryError


__all__ = [
    'RoundCrash',
    'RoundAdversary',
    'validate_adversary',
    'enumerate_adversaries',
    'random_adversary',
]


log = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class RoundCrash:
    process: ProcessId
    round: int
    """0-based round in which the crash happens."""
    recipients: frozenset[int]
    """Who still receives the crashing process's last message."""

    def to_json(self) -> JSONDict:
        return {
            "proc": self.process,
            "round": self.round,
            "recipients": sorted(self.recipients),
        }

    @classmethod
    def from_json(cls, document: dict[str, Any]) -> RoundCrash:
        try:
            process = document["proc"] if "proc" in document else document["process"]
            return cls(
                int(process),
                int(document["round"]),
                frozenset(int(p) for p in document["recipients"]))
        except (KeyError, TypeError, ValueError) as e:
            raise AdversaryError(f"malformed round crash {document!r}: {e}") from e


@dataclass(frozen=True)
class RoundAdversary:
    crashes: tuple[RoundCrash, ...] = ()

    def crash_of(self, process: ProcessId) -> RoundCrash | None:
        for crash in self.crashes:
            if crash.process == process:
                return crash
        return None

    def crashed(self) -> frozenset[int]:
        return frozenset(c.process for c in self.crashes)

    def to_json(self) -> JSONDict:
        return {"crashes": [c.to_json() for c in self.crashes]}

    @classmethod
    def from_json(cls, document: dict[str, Any] | list[Any]) -> RoundAdversary:
        """Accept `{"crashes": [...]}` or the bare crash list."""
        try:
            raw = document if isinstance(document, list) else document["crashes"]
        except (KeyError, TypeError) as e:
            raise AdversaryError(f"malformed adversary: {e}") from e
        return cls(tuple(sorted(RoundCrash.from_json(c) for c in raw)))


def validate_adversary(
    adversary: RoundAdversary,
    n: int,
    f: int,
    rounds: int
) -> None:
    """Raise `AdversaryError` unless the plan fits `n`, `f` and `rounds`."""
    processes = [c.process for c in adversary.crashes]
    if len(processes) != len(set(processes)):
        raise AdversaryError("a process crashes more than once")
    if len(processes) > f:
        raise AdversaryError(f"{len(processes)} crashes exceed f={f}")
    for c in adversary.crashes:
        if not 0 <= c.process < n:
            raise AdversaryError(f"crash of unknown process {c.process}")
        if not 0 <= c.round < rounds:
            raise AdversaryError(
                f"process {c.process} crashes in round {c.round},"
                f" outside 0..{rounds - 1}")
        if not c.recipients <= set(range(n)) - {c.process}:
            raise AdversaryError(
                f"recipients of process {c.process} must be other processes")


def _subsets(items: list[int]) -> Iterator[frozenset[int]]:
    for size in range(len(items) + 1):
        for chosen in itertools.combinations(items, size):
            yield frozenset(chosen)


def enumerate_adversaries(
    n: int,
    f: int,
    rounds: int,
    budgets: Budgets = DEFAULT_BUDGETS
) -> Iterator[RoundAdversary]:
    """Every crash plan with at most `f` crashes, the empty plan first.

    Raises:
        `UndecidedError` past the adversary budgets.
    """
    hint = "use randomized mode"
    budgets.check("adversary_processes", n, hint)
    budgets.check("adversary_crashes", f, hint)
    budgets.check("adversary_rounds", rounds, hint)
    for size in range(min(f, n) + 1):
        for victims in itertools.combinations(range(n), size):
            per_victim = [
                [
                    RoundCrash(p, r, recipients)
                    for r in range(rounds)
                    for recipients in _subsets([q for q in range(n) if q != p])
                ]
                for p in victims
            ]
            for plan in itertools.product(*per_victim):
                yield RoundAdversary(tuple(plan))


def random_adversary(n: int, f: int, rounds: int, seed: int) -> RoundAdversary:
    """Up to `f` crashes with uniform rounds and recipient subsets."""
    rng = random.Random(seed)
    size = rng.randint(0, min(f, n))
    victims = sorted(rng.sample(range(n), size))
    crashes = tuple(
        RoundCrash(
            p,
            rng.randrange(rounds),
            frozenset(q for q in range(n) if q != p and rng.random() < 0.5))
        for p in victims)
    return RoundAdversary(crashes)
