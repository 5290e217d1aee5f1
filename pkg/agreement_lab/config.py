import logging
import tomllib

from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Final

from agreement_lab.errors import UndecidedError


__all__ = [
    'LogLevel',
    'Budgets',
    'DEFAULT_BUDGETS',
    'configure_logging',
]


class LogLevel(str):
    """Convert to upper case and validate as a known name.

    Raises:
        `ValueError` if it the name does not convert to a known
        upper-case value (i.e. `"info"` to `"INFO"`).
    """

    def __new__(cls, level_raw: str):
        level_upper = level_raw.upper()
        _mapping = logging.getLevelNamesMapping()
        level_int = _mapping.get(level_upper, None)
        if level_int is None:
            known_levels = ", ".join((
                repr(level) for level in _mapping.keys()
            ))
            raise ValueError(
                f"Invalid log level: {level_raw!r}."
                f" Expected one of: {known_levels}"
            )
        instance = super().__new__(cls, level_upper)
        setattr(instance, '_level_int', level_int)
        return instance

    @property
    def level(self) -> int:
        return getattr(self, '_level_int')


def configure_logging(level: str) -> None:
    """Route the package's loggers to stderr at `level`."""
    logging.basicConfig(
        level=LogLevel(level).level,
        format="%(levelname)s %(name)s: %(message)s",
        force=True)


@dataclass(frozen=True)
class Budgets:
    """Desk-scale limits for the exhaustive checks.

    A check asked to exceed one of these raises `UndecidedError`
    instead of running for hours or guessing.
    """

    max_vertices: int = 32
    """Largest graph accepted for hull-based work."""

    bridged_vertices: int = 16
    nicely_bridged_vertices: int = 15
    labelling_vertices: int = 14
    minimal_path_vertices: int = 10

    enumeration_processes: int = 3
    enumeration_objects: int = 4

    adversary_processes: int = 4
    adversary_crashes: int = 2
    adversary_rounds: int = 4

    topology_cycle: int = 6
    topology_rounds: int = 2

    samples: int = 100_000
    """Default sample count for randomized schedule search."""

    def check(self, name: str, actual: int, hint: str = "") -> None:
        """Raise `UndecidedError` when `actual` exceeds budget `name`."""
        limit = getattr(self, name)
        if actual > limit:
            raise UndecidedError(name, limit, actual, hint)

    def override(self, **changes: int | None) -> 'Budgets':
        """Copy with every non-`None` change applied."""
        return replace(self, **{
            k: v for k, v in changes.items() if v is not None})

    @classmethod
    def from_toml(cls, path: Path | str) -> 'Budgets':
        """Read the `[budgets]` table of a TOML file.

        Raises:
            `ValueError` for unknown keys or non-integer values.
        """
        with open(path, "rb") as f:
            document = tomllib.load(f)
        table = document.get("budgets", {})
        known = {field.name for field in fields(cls)}
        unknown = sorted(set(table) - known)
        if unknown:
            raise ValueError(f"Unknown budget keys: {', '.join(unknown)}")
        for k, v in table.items():
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise ValueError(f"Budget {k!r} must be a non-negative int")
        return cls(**table)


DEFAULT_BUDGETS: Final[Budgets] = Budgets()
