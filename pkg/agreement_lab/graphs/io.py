"""Plain-text graph files.

```
# comment lines and blank lines are skipped
graph 4
0 1
1 2
2 3
3 0
```
"""
import logging

from pathlib import Path

from agreement_lab.config import Budgets, DEFAULT_BUDGETS
from agreement_lab.errors import DisconnectedGraphError, GraphFormatError
from agreement_lab.graphs.core import Graph


__all__ = [
    'read_graph',
    'write_graph',
    'load_graph',
    'FIXTURE_PREFIX',
]


log = logging.getLogger(__name__)


FIXTURE_PREFIX = "fixture:"


def _parse_int(token: str, line: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphFormatError(f"expected an integer, got {token!r}", line)


def read_graph(text: str, name: str = "") -> Graph:
    """Parse the edge-list format shown in the module docstring.

    Raises:
        `GraphFormatError` naming the offending line for bad input.
    """
    n: int | None = None
    header_line = 0
    edges: list[tuple[int, int]] = []
    seen: dict[tuple[int, int], int] = {}

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()

        if n is None:
            if len(tokens) != 2 or tokens[0] != "graph":
                raise GraphFormatError("expected header 'graph <n>'", line_no)
            n = _parse_int(tokens[1], line_no)
            if n < 1:
                raise GraphFormatError("vertex count must be positive", line_no)
            header_line = line_no
            continue

        if len(tokens) != 2:
            raise GraphFormatError("expected an edge 'u v'", line_no)
        u, v = (_parse_int(t, line_no) for t in tokens)
        for w in (u, v):
            if not 0 <= w < n:
                raise GraphFormatError(
                    f"vertex {w} out of range 0..{n - 1}", line_no)
        if u == v:
            raise GraphFormatError(f"self-loop at {u}", line_no)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(
                f"duplicate edge {u}-{v} (first on line {seen[key]})", line_no)
        seen[key] = line_no
        edges.append(key)

    if n is None:
        raise GraphFormatError("missing header 'graph <n>'")

    try:
        return Graph.from_edges(n, edges, name=name)
    except DisconnectedGraphError:
        raise DisconnectedGraphError(line=header_line)


def write_graph(g: Graph) -> str:
    lines = []
    if g.name:
        lines.append(f"# {g.name}")
    lines.append(f"graph {g.n}")
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def load_graph(source: str | Path, budgets: Budgets = DEFAULT_BUDGETS) -> Graph:
    """Read a graph file, or a named fixture given as `fixture:<name>`.

    Raises:
        `GraphFormatError` for unknown fixtures and malformed files.
        `UndecidedError` past `budgets.max_vertices`.
    """
    spec = str(source)
    if spec.startswith(FIXTURE_PREFIX):
        from agreement_lab.graphs.fixtures import fixture
        try:
            g = fixture(spec.removeprefix(FIXTURE_PREFIX))
        except KeyError as e:
            raise GraphFormatError(e.args[0]) from e
    else:
        path = Path(spec)
        g = read_graph(path.read_text(), name=path.stem)
    budgets.check("max_vertices", g.n)
    log.debug("loaded %r", g)
    return g
