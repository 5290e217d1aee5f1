# sync imports the protocols package, which imports schedules from
# here, so it is left out of the eager imports below.
from .schedules import (
    WaitRule,
    CrashPhase,
    CrashPoint,
    ObjectOutcome,
    ScheduleOutcome,
    validate_schedule,
    enumerate_schedules,
    random_schedule,
    naive_view_outcomes,
)
from .adversary import (
    RoundCrash,
    RoundAdversary,
    enumerate_adversaries,
    random_adversary,
)
from .trace import (
    CRASHED,
    Iteration,
    ExecutionTrace,
    trace_to_json,
    trace_from_json,
)
from .snapshot import run

__all__ = [
    'WaitRule',
    'CrashPhase',
    'CrashPoint',
    'ObjectOutcome',
    'ScheduleOutcome',
    'validate_schedule',
    'enumerate_schedules',
    'random_schedule',
    'naive_view_outcomes',
    'RoundCrash',
    'RoundAdversary',
    'enumerate_adversaries',
    'random_adversary',
    'CRASHED',
    'Iteration',
    'ExecutionTrace',
    'trace_to_json',
    'trace_from_json',
    'run',
]
