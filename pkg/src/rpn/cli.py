"""Command line for the engine.

Commands: validate, run, step (REPL), explore, check, serve.
Exit codes: 0 = pass, 1 = violation or failed check, 2 = usage error.
"""

import json
import sys

import click

from .dsl import InvalidNetError, ParseError, parse_net, state_json
from .explorer import MODES, PROPERTIES, check_property, check_theorem, explore
from .model import Marking, Net, State
from .semantics import HomelessComponentError, NotEnabledError
from .server import serve as serve_session
from .session import (
    EmptyUndoError,
    Session,
    TraceNotEnabled,
    format_trace,
    parse_trace,
    run_trace,
)

REVERSAL_MODES = ("bt", "co", "o")
THEOREMS = ("main", "second", "inclusions", "loop", "prop4", "preservation")


def load(path: str) -> tuple[Net, Marking]:
    """Parse a net file, printing errors and exiting 1 on failure."""
    try:
        with open(path, encoding="utf-8") as handle:
            return parse_net(handle.read())
    except OSError as e:
        raise click.UsageError(f"cannot read {path}: {e.strerror}")
    except ParseError as e:
        click.echo(str(e), err=True)
        raise SystemExit(1)
    except InvalidNetError as e:
        for violation in e.report.violations:
            click.echo(str(violation), err=True)
        raise SystemExit(1)


def fmt_state(net: Net, state: State) -> str:
    """Human-oriented rendering: nonempty places, then history keys."""
    lines = []
    for place in sorted(net.places):
        held = state.marking[place]
        if held.empty:
            continue
        items = sorted(held.bases) + sorted(str(b) for b in held.bonds)
        lines.append(f"  {place}: {{{', '.join(items)}}}")
    if not lines:
        lines.append("  (all places empty)")
    keys = ", ".join(
        f"{t}={state.history[t] if state.history[t] is not None else '-'}"
        for t in sorted(net.transitions)
    )
    lines.append(f"  history: {keys}")
    return "\n".join(lines)


@click.group()
def main() -> None:
    """Reversing Petri nets: validate, run, explore, check, serve."""


@main.command()
@click.argument("file", type=click.Path())
def validate(file: str) -> None:
    """Parse FILE and report structural violations."""
    net, _ = load(file)
    click.echo(
        f"{net.name}: ok ({len(net.places)} places, "
        f"{len(net.transitions)} transitions, {len(net.bases)} bases)"
    )


@main.command()
@click.argument("file", type=click.Path())
@click.option("--trace", default="", help="comma-separated actions, e.g. 't1,~t1:o'")
@click.option(
    "--mode",
    default="co",
    type=click.Choice(REVERSAL_MODES),
    help="mode for bare '~t' reversals",
)
def run(file: str, trace: str, mode: str) -> None:
    """Apply a trace to FILE's initial state and print the final state."""
    net, m0 = load(file)
    session = Session.open(net, m0)
    try:
        parse_trace(trace, mode)
    except ValueError as e:
        raise click.UsageError(str(e))
    try:
        run_trace(session, trace, mode)
    except TraceNotEnabled as e:
        click.echo(f"NOT-ENABLED at index {e.index}: {e.action} ({e.mode})", err=True)
        click.echo(f"enabled: {json.dumps(e.enabled)}", err=True)
        raise SystemExit(1)
    click.echo(state_json(net, session.current))


STEP_HELP = """\
commands:
  t1            fire transition t1 forward
  ~t1:co        reverse t1 (modes: bt, co, o); bare ~t1 uses co
  enabled       show the four enabled sets
  state         show the current state
  trace         show the action log
  undo          undo the last step (tool-level, not a reversal)
  reset         back to the initial state
  help          this text
  quit          leave"""


@main.command()
@click.argument("file", type=click.Path())
def step(file: str) -> None:
    """Interactive stepper over FILE."""
    net, m0 = load(file)
    session = Session.open(net, m0)
    click.echo(f"stepping {net.name}; 'help' lists commands")
    click.echo(fmt_state(net, session.current))
    while True:
        try:
            line = input("rpn> ").strip()
        except EOFError:
            click.echo("")
            return
        if not line:
            continue
        if line in ("quit", "exit", "q"):
            return
        if line == "help":
            click.echo(STEP_HELP)
            continue
        if line == "state":
            click.echo(fmt_state(net, session.current))
            continue
        if line == "enabled":
            click.echo(json.dumps(session.enabled()))
            continue
        if line == "trace":
            click.echo(format_trace(session.log.actions) or "(empty)")
            continue
        if line == "undo":
            try:
                session.undo()
            except EmptyUndoError:
                click.echo("nothing to undo")
                continue
            click.echo(fmt_state(net, session.current))
            continue
        if line == "reset":
            session.reset()
            click.echo(fmt_state(net, session.current))
            continue
        try:
            actions = parse_trace(line)
        except ValueError as e:
            click.echo(f"? {e}")
            continue
        try:
            for action in actions:
                session.apply(action)
        except (NotEnabledError, HomelessComponentError) as e:
            click.echo(f"not enabled: {e}")
            click.echo(f"enabled: {json.dumps(session.enabled())}")
            continue
        click.echo(fmt_state(net, session.current))


@main.command("explore")
@click.argument("file", type=click.Path())
@click.option("--mode", default="forward", type=click.Choice(MODES))
@click.option("--depth", default=6, show_default=True)
@click.option("--check", "checks", default="", help="comma-separated properties")
def explore_cmd(file: str, mode: str, depth: int, checks: str) -> None:
    """Enumerate the reachable state space of FILE under MODE."""
    net, m0 = load(file)
    space = explore(net, m0, mode, depth)
    shape = "truncated at depth" if space.truncated else "complete within depth"
    click.echo(
        f"{net.name} mode={mode} depth={depth}: "
        f"{len(space.states)} states, {len(space.edges)} edges ({shape} {depth})"
    )
    failed = False
    for prop in filter(None, (p.strip() for p in checks.split(","))):
        if prop not in PROPERTIES:
            raise click.UsageError(
                f"unknown property {prop!r}; choose from {', '.join(sorted(PROPERTIES))}"
            )
        try:
            report = check_property(space, prop)
        except ValueError as e:
            raise click.UsageError(str(e))
        click.echo(str(report))
        failed = failed or not report.ok
    if failed:
        raise SystemExit(1)


@main.command()
@click.argument("file", type=click.Path())
@click.option("--theorem", required=True, type=click.Choice(THEOREMS))
@click.option("--max-len", default=4, show_default=True, help="trace length bound")
@click.option("--depth", default=6, show_default=True, help="exploration depth bound")
def check(file: str, theorem: str, max_len: int, depth: int) -> None:
    """Check a theorem or property battery over FILE's state spaces."""
    net, m0 = load(file)
    reports = check_theorem(net, m0, theorem, max_len=max_len, depth=depth)
    for report in reports:
        click.echo(str(report))
    if not all(r.ok for r in reports):
        raise SystemExit(1)


@main.command()
@click.argument("file", type=click.Path())
@click.option("--port", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option(
    "--ui",
    type=click.Path(file_okay=False),
    default=None,
    help="directory with a built web UI to serve at /",
)
def serve(file: str, port: int, host: str, ui: str) -> None:
    """Serve FILE as an HTTP session on PORT."""
    net, m0 = load(file)
    serve_session(Session.open(net, m0), port=port, host=host, static_dir=ui)


if __name__ == "__main__":
    main()
