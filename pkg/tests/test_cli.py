"""Command-line interface: commands, output shapes, exit codes."""

import json

import pytest
from click.testing import CliRunner

import rpn.cli as cli
from rpn.dsl import print_net

from helpers import ALL_NETS


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def net_file(tmp_path):
    def write(name: str) -> str:
        path = tmp_path / f"{name}.rpn"
        path.write_text(print_net(*ALL_NETS[name]()))
        return str(path)

    return write


### validate

def test_validate_ok(runner, net_file):
    result = runner.invoke(cli.main, ["validate", net_file("catalysis")])
    assert result.exit_code == 0
    assert "catalysis: ok" in result.output


def test_validate_reports_violations(runner, tmp_path):
    path = tmp_path / "broken.rpn"
    path.write_text(
        "net broken { bases: a, b; places: p, q; transitions: t1;"
        " arc p -> t1 { a, b } arc t1 -> q { a } initial { p: {a, b} } }"
    )
    result = runner.invoke(cli.main, ["validate", str(path)])
    assert result.exit_code == 1
    assert "WF1" in result.output


def test_validate_syntax_error(runner, tmp_path):
    path = tmp_path / "bad.rpn"
    path.write_text("net x { bases a; }")
    result = runner.invoke(cli.main, ["validate", str(path)])
    assert result.exit_code == 1
    assert "SYNTAX" in result.output


def test_missing_file_is_usage_error(runner):
    result = runner.invoke(cli.main, ["validate", "no-such-file.rpn"])
    assert result.exit_code == 2


### run

def test_run_trace_prints_state(runner, net_file):
    result = runner.invoke(
        cli.main, ["run", net_file("catalysis"), "--trace", "t1,t2,~t1:o"]
    )
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data["history"] == {"t1": None, "t2": 2}
    assert data["marking"]["u"] == {"bases": ["c"], "bonds": []}
    assert data["marking"]["y"] == {"bases": ["a", "b"], "bonds": [["a", "b"]]}


def test_run_empty_trace_prints_initial_state(runner, net_file):
    result = runner.invoke(cli.main, ["run", net_file("catalysis")])
    assert result.exit_code == 0
    assert json.loads(result.output)["history"] == {"t1": None, "t2": None}


def test_run_disabled_action(runner, net_file):
    result = runner.invoke(cli.main, ["run", net_file("catalysis"), "--trace", "t2"])
    assert result.exit_code == 1
    assert "NOT-ENABLED at index 0: t2 (forward)" in result.output
    assert '"forward": ["t1"]' in result.output


def test_run_bare_reversal_uses_mode_flag(runner, net_file):
    result = runner.invoke(
        cli.main,
        ["run", net_file("parallel"), "--trace", "t1,~t1", "--mode", "bt"],
    )
    assert result.exit_code == 0
    assert json.loads(result.output)["history"]["t1"] is None


def test_run_malformed_trace_is_usage_error(runner, net_file):
    result = runner.invoke(
        cli.main, ["run", net_file("catalysis"), "--trace", "~t1:zz"]
    )
    assert result.exit_code == 2


### step (REPL)

def test_step_session(runner, net_file):
    script = "t1\nenabled\nt2\ntrace\n~t1:o\nstate\nundo\nquit\n"
    result = runner.invoke(cli.main, ["step", net_file("catalysis")], input=script)
    assert result.exit_code == 0
    assert "x: {a, c, a-c}" in result.output  # after t1
    assert '"bt": ["t1"]' in result.output  # enabled, queried right after t1
    assert "t1,t2" in result.output  # trace command
    assert "history: t1=-, t2=2" in result.output  # after ~t1:o


def test_step_reports_disabled_and_recovers(runner, net_file):
    script = "t2\nhelp\nreset\nundo\nundo\nquit\n"
    result = runner.invoke(cli.main, ["step", net_file("catalysis")], input=script)
    assert result.exit_code == 0
    assert "not enabled" in result.output
    assert "commands:" in result.output
    assert "nothing to undo" in result.output


def test_step_eof_exits_cleanly(runner, net_file):
    result = runner.invoke(cli.main, ["step", net_file("catalysis")], input="t1\n")
    assert result.exit_code == 0


### explore

def test_explore_summarizes_space(runner, net_file):
    result = runner.invoke(
        cli.main, ["explore", net_file("parallel"), "--mode", "forward"]
    )
    assert result.exit_code == 0
    assert "7 states, 6 edges" in result.output


def test_explore_runs_checks(runner, net_file):
    result = runner.invoke(
        cli.main,
        [
            "explore",
            net_file("catalysis"),
            "--mode",
            "co",
            "--depth",
            "5",
            "--check",
            "preservation,loop,inclusions",
        ],
    )
    assert result.exit_code == 0
    assert result.output.count(": pass") == 3


def test_explore_unknown_property_is_usage_error(runner, net_file):
    result = runner.invoke(
        cli.main, ["explore", net_file("catalysis"), "--check", "sparkle"]
    )
    assert result.exit_code == 2


def test_explore_mode_property_mismatch_is_usage_error(runner, net_file):
    result = runner.invoke(
        cli.main,
        ["explore", net_file("catalysis"), "--mode", "forward", "--check", "loop"],
    )
    assert result.exit_code == 2


def test_explore_failing_check_exits_one(runner, net_file, monkeypatch):
    import rpn.semantics as semantics
    from rpn.connectivity import connected

    true_fire = semantics.fire_forward

    def lossy(net, state, t):
        nxt = true_fire(net, state, t)
        # drop every bond in some out-place: preservation must notice
        for place in sorted(net.postset(t)):
            held = nxt.marking[place]
            if held.bonds:
                broken = nxt.marking.replace(
                    {place: held.without_bonds(held.bonds)}
                )
                return semantics.State(broken, nxt.history)
        return nxt

    monkeypatch.setattr(semantics, "fire_forward", lossy)
    result = runner.invoke(
        cli.main,
        ["explore", net_file("catalysis"), "--check", "preservation"],
    )
    assert result.exit_code == 1
    assert "FAIL" in result.output


### check

def test_check_theorem_main(runner, net_file):
    result = runner.invoke(
        cli.main,
        ["check", net_file("parallel"), "--theorem", "main", "--max-len", "3"],
    )
    assert result.exit_code == 0
    assert "pass" in result.output


def test_check_theorem_second(runner, net_file):
    result = runner.invoke(
        cli.main,
        ["check", net_file("catalysis"), "--theorem", "second", "--max-len", "4"],
    )
    assert result.exit_code == 0


def test_check_property_battery(runner, net_file):
    result = runner.invoke(
        cli.main,
        ["check", net_file("catalysis"), "--theorem", "loop", "--depth", "5"],
    )
    assert result.exit_code == 0
    assert "loop[bt]" in result.output and "loop[co]" in result.output


def test_check_rejects_unknown_theorem(runner, net_file):
    result = runner.invoke(
        cli.main, ["check", net_file("catalysis"), "--theorem", "bogus"]
    )
    assert result.exit_code == 2


### serve (wiring only; HTTP behavior is covered in test_server)

def test_serve_invokes_server(runner, net_file, monkeypatch):
    calls = {}

    def fake_serve(session, port, host, static_dir):
        calls["net"] = session.net.name
        calls["port"] = port
        calls["host"] = host
        calls["static_dir"] = static_dir

    monkeypatch.setattr(cli, "serve_session", fake_serve)
    result = runner.invoke(
        cli.main, ["serve", net_file("catalysis"), "--port", "9100"]
    )
    assert result.exit_code == 0
    assert calls == {
        "net": "catalysis",
        "port": 9100,
        "host": "127.0.0.1",
        "static_dir": None,
    }
