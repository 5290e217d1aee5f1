#!/usr/bin/env python
"""
Low-dependency task runner for agreement-lab.
"""
# Does not use typer so that CI can run the unit tests and the type
# checker without installing the CLI's own dependencies first.
from __future__ import annotations

import subprocess
import sys


def stderr(*args, **kwargs):
    print(*args, **kwargs, file=sys.stderr)


commands = {}


def command(f):
    """Register `f` under its dashed name."""
    commands[f.__name__.replace("_", "-")] = f
    return f


def _run(*argv: str) -> int:
    return subprocess.run(argv).returncode


@command
def test(extra=(), **_) -> int:
    """Run the unit tests with pytest (extra args are passed through)."""
    return _run('pytest', 'tests', *extra)


@command
def acceptance(extra=(), **_) -> int:
    """Run the unit tests plus the slow acceptance suites."""
    return _run('pytest', 'tests', '--run-acceptance', *extra)


@command
def typecheck(**_) -> int:
    """Type-check with pyright."""
    return _run('pyright', 'agreement_lab')


@command
def help(print_func=print, **_) -> int:
    """Print usage information."""

    command_width = max(len(k) for k in commands)
    print_func(__doc__.strip(), end="\n\n")
    for name, func in commands.items():
        print_func(f"{sys.argv[0]} {name:<{command_width}}", end="      ")
        doc = getattr(func, '__doc__', '[ no docstring ]')
        print_func(doc.split("\n")[0])
    return 0


def main():

    problem = 0
    kwargs = dict(print_func=print, extra=tuple(sys.argv[2:]))

    if len(sys.argv) < 2:
        command_name = 'help'
    elif (command_name := sys.argv[1]) not in commands:
        problem = 1
        stderr(f"ERROR: unknown command {command_name!r}")
        command_name = 'help'
        kwargs.update(print_func=stderr)

    run_command = commands[command_name]
    problem = run_command(**kwargs) or problem
    exit(problem)


if __name__ == '__main__':
    main()
