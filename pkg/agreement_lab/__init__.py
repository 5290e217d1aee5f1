"""Command-line front door: classify, run, verify, impossibility, reduce.

Exit codes: 0 pass, 1 verification failure, 2 usage or parse error,
3 a budget left the answer undecided.
"""
from collections.abc import Iterator
from contextlib import contextmanager
import json
import logging

from pathlib import Path
from typing import Final

# typer does not support | syntax, so we use Optional
import typer
from typing_extensions import Annotated, Optional

from agreement_lab.annotations import JSONDict
from agreement_lab.config import Budgets, DEFAULT_BUDGETS, LogLevel, configure_logging
from agreement_lab.errors import AgreementLabError, UndecidedError
from agreement_lab.graphs.classify import classify
from agreement_lab.graphs.io import load_graph
from agreement_lab.graphs.labelling import Labelling
from agreement_lab.harness import (
    Experiment,
    Model,
    ScheduleMode,
    load_schedules,
    run_batch,
    run_reduction_batch,
    summarize,
)
from agreement_lab.protocols.agreement import ProtocolId
from agreement_lab.simulation.trace import trace_from_json
from agreement_lab.topology.search import search_protocol
from agreement_lab.verify import check_trace


app = typer.Typer()
log = logging.getLogger(__name__)


EXIT_FAILURE: Final = 1
EXIT_USAGE: Final = 2
EXIT_UNDECIDED: Final = 3


# Will always have a value (we'll default it to "WARNING") below
LogLevelOption = Annotated[str,
    typer.Option("--log-level", help="The logging level to use", parser=LogLevel)]


def option(annotation, flag: str, help: str | None = None, **kwargs):
    """Wraps the base `annotation` in `Optional` + a typer.Option.

    Arguments:
        annotation: a type or type alias.
        flag: a `--flag` to use.
        help: A help string.
        kwargs: Additional values to pass to `typer.Option`
    Returns:
        An typer-annotated type alias.
    """
    return Annotated[
        Optional[annotation],
        typer.Option(flag, help=help, **kwargs)
    ]


GraphOption = Annotated[str, typer.Option(
    "--graph", help="A graph file, or fixture:<name> (e.g. fixture:cycle6)")]
InputsOption = Annotated[str, typer.Option(
    "--inputs", help="Comma-separated input vertices, one per process")]
ConfigOption = option(
    Path, "--config", help="A TOML file with a [budgets] table")
MaxVerticesOption = option(
    int, "--max-vertices", help="Largest graph accepted")
ExactVerticesOption = option(
    int, "--exact-vertices", help="Largest graph for exact class checks")
SeedOption = option(
    int, "--seed", help="Seed for randomized modes (required by them)")
SamplesOption = option(
    int, "--samples", help="How many random schedules to draw")
CrashesOption = Annotated[Optional[int], typer.Option(
    "--crashes", "--f", "-f", help="Crash bound (defaults to the protocol's)")]
ScheduleFileOption = option(
    Path, "--schedule-file", help="JSON schedules for --schedule file")
OutOption = option(
    Path, "--out", help="Directory for failing traces")


def _budgets(
    config: Path | None,
    max_vertices: int | None = None,
    exact_vertices: int | None = None,
    samples: int | None = None,
) -> Budgets:
    budgets = Budgets.from_toml(config) if config else DEFAULT_BUDGETS
    return budgets.override(
        max_vertices=max_vertices,
        bridged_vertices=exact_vertices,
        nicely_bridged_vertices=exact_vertices,
        labelling_vertices=exact_vertices,
        samples=samples,
    )


def _parse_inputs(raw: str) -> tuple[int, ...]:
    try:
        inputs = tuple(int(x) for x in raw.split(",") if x.strip())
    except ValueError:
        raise typer.BadParameter(f"inputs must be integers, got {raw!r}")
    if not inputs:
        raise typer.BadParameter("need at least one input")
    return inputs


def _emit(document: JSONDict) -> None:
    typer.echo(json.dumps(document, sort_keys=True, indent=2))


@contextmanager
def _exit_codes() -> Iterator[None]:
    """Map library errors onto the documented exit codes."""
    try:
        yield
    except UndecidedError as e:
        typer.echo(str(e), err=True)
        raise typer.Exit(EXIT_UNDECIDED)
    except (AgreementLabError, ValueError, OSError) as e:
        typer.echo(f"error: {e}", err=True)
        raise typer.Exit(EXIT_USAGE)


@app.command("classify")
def command_classify(
    graph: GraphOption,
    config: ConfigOption = None,
    max_vertices: MaxVerticesOption = None,
    exact_vertices: ExactVerticesOption = None,
    log_level: LogLevelOption = "WARNING"
) -> None:
    """Report every graph class check as JSON."""
    configure_logging(log_level)
    with _exit_codes():
        budgets = _budgets(config, max_vertices, exact_vertices)
        report = classify(load_graph(graph, budgets), budgets)
        _emit(report.to_json())


@app.command("run")
def command_run(
    graph: GraphOption,
    inputs: InputsOption,
    protocol: Annotated[ProtocolId, typer.Option(
        "--protocol", help="Asynchronous protocol to run")] = ProtocolId.ONE_RESILIENT,
    model: Annotated[Model, typer.Option(
        "--model", help="async snapshots or sync rounds")] = Model.ASYNC,
    schedule: Annotated[ScheduleMode, typer.Option(
        "--schedule", "--adversary", help="Where schedules or adversaries come from")] = ScheduleMode.EXHAUSTIVE,
    schedule_file: ScheduleFileOption = None,
    seed: SeedOption = None,
    samples: SamplesOption = None,
    crashes: CrashesOption = None,
    out: OutOption = None,
    workers: Annotated[int, typer.Option(
        "--workers", help="Worker processes checking runs concurrently")] = 1,
    config: ConfigOption = None,
    max_vertices: MaxVerticesOption = None,
    exact_vertices: ExactVerticesOption = None,
    log_level: LogLevelOption = "WARNING"
) -> None:
    """Execute a protocol under many schedules and check every trace."""
    configure_logging(log_level)
    with _exit_codes():
        budgets = _budgets(config, max_vertices, exact_vertices, samples)
        experiment = Experiment(
            graph=load_graph(graph, budgets),
            inputs=_parse_inputs(inputs),
            protocol=str(protocol),
            model=model,
            crashes=crashes,
            budgets=budgets,
        )
        match schedule:
            case ScheduleMode.EXHAUSTIVE:
                plans = ((None, p) for p in experiment.exhaustive())
            case ScheduleMode.RANDOM:
                if seed is None:
                    raise typer.BadParameter("--schedule random needs --seed")
                plans = experiment.sampled(seed, budgets.samples)
            case ScheduleMode.FILE:
                if schedule_file is None:
                    raise typer.BadParameter("--schedule file needs --schedule-file")
                plans = ((None, p) for p in load_schedules(schedule_file, model))
        details = experiment.describe()
        details.update(schedule=str(schedule), seed=seed)
        summary = summarize(run_batch(experiment, plans, workers), out, details)
    _emit(summary.to_json())
    if summary.failures:
        raise typer.Exit(EXIT_FAILURE)


@app.command("verify")
def command_verify(
    trace: Annotated[Path, typer.Option("--trace", help="A trace JSON file")],
    config: ConfigOption = None,
    log_level: LogLevelOption = "WARNING"
) -> None:
    """Re-check a recorded trace; exits 1 if any check fails."""
    configure_logging(log_level)
    with _exit_codes():
        budgets = _budgets(config)
        recorded = trace_from_json(trace.read_text(encoding="utf-8"))
        bundle = check_trace(recorded.graph, recorded, budgets=budgets)
    _emit(bundle.to_json())
    if not bundle.passed:
        raise typer.Exit(EXIT_FAILURE)


@app.command("impossibility")
def command_impossibility(
    cycle: Annotated[int, typer.Option("--cycle", help="Cycle length c >= 4")],
    rounds: Annotated[int, typer.Option("--rounds", help="Immediate-snapshot rounds")],
    corners: Annotated[bool, typer.Option(
        "--corners/--no-corners",
        help="Require solo and pairwise views to decide an input")] = True,
    parity: Annotated[bool, typer.Option(
        "--parity/--no-parity",
        help="Prune boundaries by label-pair parity before the interior search")] = True,
    config: ConfigOption = None,
    log_level: LogLevelOption = "WARNING"
) -> None:
    """Search for a bounded-round decision map for cycle agreement."""
    configure_logging(log_level)
    with _exit_codes():
        result = search_protocol(
            cycle, rounds, _budgets(config), corner_conditions=corners, use_parity=parity)
    _emit(result.to_json())


@app.command("reduce")
def command_reduce(
    graph: GraphOption,
    labelling: Annotated[Path, typer.Option(
        "--labelling", help="A lower bound labelling JSON file")],
    inputs: InputsOption,
    schedule: Annotated[ScheduleMode, typer.Option(
        "--schedule", help="exhaustive or random")] = ScheduleMode.EXHAUSTIVE,
    seed: SeedOption = None,
    samples: SamplesOption = None,
    crashes: Annotated[int, typer.Option(
        "--crashes", "-f", help="Crash bound across both stages")] = 1,
    config: ConfigOption = None,
    log_level: LogLevelOption = "WARNING"
) -> None:
    """Solve 2-set agreement through a lower bound labelling."""
    configure_logging(log_level)
    with _exit_codes():
        budgets = _budgets(config, samples=samples)
        g = load_graph(graph, budgets)
        lab = Labelling.from_json(json.loads(labelling.read_text(encoding="utf-8")))
        values = _parse_inputs(inputs)
        runs = failures = 0
        first_failure = None
        decided: set[tuple[int, ...]] = set()
        for record in run_reduction_batch(
            g, lab, values, schedule, seed, budgets.samples, crashes, budgets=budgets
        ):
            runs += 1
            decided.add(tuple(sorted({y for y in record.outputs if y is not None})))
            if not record.verdict.passed:
                failures += 1
                first_failure = first_failure or record.to_json()
    _emit({
        "graph": g.name,
        "inputs": list(values),
        "schedule": str(schedule),
        "seed": seed,
        "runs": runs,
        "passes": runs - failures,
        "failures": failures,
        "first_failure": first_failure,
        "decision_sets": sorted(list(d) for d in decided),
    })
    if failures:
        raise typer.Exit(EXIT_FAILURE)


if __name__ == "__main__":
    app()
