"""Execution traces and their JSON form.

```
{
  "graph": {"name": "path3", "n": 3, "edges": [[0, 1], [1, 2]]},
  "protocol": "one-resilient",
  "model": "async",
  "resilience": 1,
  "inputs": [0, 2],
  "iterations": [
    {"t": 0, "phase": "min", "views": [[0, 2], [0, 2]], "chosen": [0, 0]}
  ],
  "outputs": [0, "CRASHED"],
  "schedule": {...},
  "seed": null
}
```

`views` hold the vertex values a process saw (`null` when it took no
scan); `chosen` holds `x_i(t+1)`.
"""
from __future__ import annotations

import json

from dataclasses import dataclass
from typing import Any, Final

from agreement_lab.annotations import JSONDict
from agreement_lab.errors import AgreementLabError, TraceFormatError
from agreement_lab.graphs.core import Graph
from agreement_lab.simulation.adversary import RoundAdversary
from agreement_lab.simulation.schedules import ScheduleOutcome


__all__ = [
    'CRASHED',
    'Iteration',
    'ExecutionTrace',
    'trace_to_json',
    'trace_from_json',
]


CRASHED: Final = "CRASHED"


Views = tuple[frozenset[int] | None, ...]
Values = tuple[int | None, ...]


@dataclass(frozen=True)
class Iteration:
    t: int
    phase: str
    views: Views
    chosen: Values

    def live_values(self) -> frozenset[int]:
        return frozenset(x for x in self.chosen if x is not None)

    def union_of_views(self) -> frozenset[int]:
        return frozenset().union(*(v for v in self.views if v is not None))


@dataclass(frozen=True)
class ExecutionTrace:
    graph: Graph
    protocol: str
    model: str
    inputs: tuple[int, ...]
    iterations: tuple[Iteration, ...]
    outputs: Values
    """Decided vertex per process; `None` for crashed processes."""
    schedule: ScheduleOutcome | RoundAdversary | None = None
    seed: int | None = None
    resilience: int = 0

    @property
    def n(self) -> int:
        return len(self.inputs)

    def correct(self) -> list[int]:
        return [i for i, x in enumerate(self.outputs) if x is not None]

    def decided(self) -> frozenset[int]:
        return frozenset(x for x in self.outputs if x is not None)

    def to_json(self) -> JSONDict:
        return {
            "graph": {
                "name": self.graph.name,
                "n": self.graph.n,
                "edges": [list(e) for e in self.graph.edges],
            },
            "protocol": self.protocol,
            "model": self.model,
            "resilience": self.resilience,
            "inputs": list(self.inputs),
            "iterations": [
                {
                    "t": it.t,
                    "phase": it.phase,
                    "views": [None if v is None else sorted(v) for v in it.views],
                    "chosen": list(it.chosen),
                }
                for it in self.iterations
            ],
            "outputs": [CRASHED if x is None else x for x in self.outputs],
            "schedule": None if self.schedule is None else self.schedule.to_json(),
            "seed": self.seed,
        }


def trace_to_json(trace: ExecutionTrace) -> str:
    return json.dumps(trace.to_json(), sort_keys=True)


def _values(raw: list[Any]) -> Values:
    return tuple(None if x is None or x == CRASHED else int(x) for x in raw)


def trace_from_json(text: str | dict[str, Any]) -> ExecutionTrace:
    """Parse a trace document.

    Raises:
        `TraceFormatError` when fields are missing or malformed.
    """
    try:
        document = json.loads(text) if isinstance(text, str) else text
        graph_doc = document["graph"]
        graph = Graph.from_edges(
            int(graph_doc["n"]),
            (tuple(e) for e in graph_doc["edges"]),
            name=graph_doc.get("name", ""))
        model = document.get("model", "async")
        raw_schedule = document.get("schedule")
        schedule: ScheduleOutcome | RoundAdversary | None
        if raw_schedule is None:
            schedule = None
        elif model == "sync":
            schedule = RoundAdversary.from_json(raw_schedule)
        else:
            schedule = ScheduleOutcome.from_json(raw_schedule)
        iterations = tuple(
            Iteration(
                t=int(it["t"]),
                phase=str(it.get("phase", "")),
                views=tuple(
                    None if v is None else frozenset(int(x) for x in v)
                    for v in it["views"]),
                chosen=_values(it["chosen"]),
            )
            for it in document["iterations"])
        seed = document.get("seed")
        return ExecutionTrace(
            graph=graph,
            protocol=str(document["protocol"]),
            model=model,
            inputs=tuple(int(x) for x in document["inputs"]),
            iterations=iterations,
            outputs=_values(document["outputs"]),
            schedule=schedule,
            seed=None if seed is None else int(seed),
            resilience=int(document.get("resilience", 0)),
        )
    except TraceFormatError:
        raise
    except AgreementLabError as e:
        raise TraceFormatError(f"invalid trace: {e}") from e
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        raise TraceFormatError(f"malformed trace document: {e!r}") from e
