import logging

import pytest

from agreement_lab.config import DEFAULT_BUDGETS, Budgets, LogLevel
from agreement_lab.errors import UndecidedError


@pytest.mark.parametrize("raw, level", [
    ("info", logging.INFO),
    ("Debug", logging.DEBUG),
    ("WARNING", logging.WARNING),
])
def test_log_level_parses_any_case(raw, level):
    parsed = LogLevel(raw)
    assert parsed == raw.upper()
    assert parsed.level == level


def test_log_level_rejects_unknown_names():
    with pytest.raises(ValueError) as info:
        LogLevel("chatty")
    assert "'chatty'" in str(info.value)


def test_budget_check():
    DEFAULT_BUDGETS.check("max_vertices", DEFAULT_BUDGETS.max_vertices)
    with pytest.raises(UndecidedError) as info:
        DEFAULT_BUDGETS.check("max_vertices", 33, "try a smaller graph")
    assert info.value.budget == "max_vertices"
    assert info.value.limit == 32
    assert "try a smaller graph" in str(info.value)


def test_override_skips_unset_values():
    budgets = DEFAULT_BUDGETS.override(samples=5, bridged_vertices=None)
    assert budgets.samples == 5
    assert budgets.bridged_vertices == DEFAULT_BUDGETS.bridged_vertices


def test_budgets_from_toml(tmp_path):
    path = tmp_path / "lab.toml"
    path.write_text("[budgets]\nbridged_vertices = 18\nsamples = 1000\n")
    budgets = Budgets.from_toml(path)
    assert budgets.bridged_vertices == 18
    assert budgets.samples == 1000
    assert budgets.max_vertices == DEFAULT_BUDGETS.max_vertices


def test_empty_toml_gives_defaults(tmp_path):
    path = tmp_path / "empty.toml"
    path.write_text("")
    assert Budgets.from_toml(path) == DEFAULT_BUDGETS


@pytest.mark.parametrize("body", [
    "[budgets]\nbogus = 1\n",
    "[budgets]\nsamples = \"many\"\n",
    "[budgets]\nsamples = -1\n",
    "[budgets]\nsamples = true\n",
])
def test_bad_toml_budgets(tmp_path, body):
    path = tmp_path / "bad.toml"
    path.write_text(body)
    with pytest.raises(ValueError):
        Budgets.from_toml(path)
