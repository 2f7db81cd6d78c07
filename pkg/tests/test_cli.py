"""Command-line interface: outputs, formats, exit codes."""

import json

import pytest

from sgsolve import parse_game
from sgsolve.cli import main


@pytest.fixture()
def fig2_file(tmp_path):
    path = tmp_path / "fig2.game"
    assert main(["gallery", "fig2", "--depth", "8", "--emit", str(path)]) == 0
    return str(path)


@pytest.fixture()
def ladder_file(tmp_path):
    path = tmp_path / "ladder.game"
    assert main(["gallery", "ladder", "--k", "3", "--emit", str(path)]) == 0
    return str(path)


def test_solve_emits_exact_rationals(fig2_file, capsys):
    assert main(["solve", fig2_file, "--objective", "reach", "--target", "t"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert "r3 7/8" in out
    assert "r0 0" in out


def test_solve_iterate_reports_error_bound(fig2_file, capsys):
    code = main([
        "solve", fig2_file, "--objective", "reach", "--target", "t",
        "--mode", "iterate", "--tol", "1/100000",
    ])
    assert code == 0
    out = capsys.readouterr().out
    assert "# error-bound" in out


def test_solve_table_and_json_formats(fig2_file, capsys):
    assert main(["solve", fig2_file, "--target", "t", "--format", "table"]) == 0
    table = capsys.readouterr().out
    assert table.splitlines()[0].split() == ["state", "value"]
    assert main(["solve", fig2_file, "--target", "t", "--format", "json-lines"]) == 0
    lines = capsys.readouterr().out.splitlines()
    row = json.loads(lines[0])
    assert set(row) == {"state", "value"}


def test_validate_reports_line_numbered_violation(tmp_path, capsys):
    path = tmp_path / "bad.game"
    path.write_text(
        "state a rand\nstate t max\nedge a t 1/2\nedge a a 1/3\nedge t t\ntarget t\n"
    )
    assert main(["validate", str(path)]) == 1
    err = capsys.readouterr().err
    assert "line 1" in err and "5/6" in err


def test_validate_ok(fig2_file, capsys):
    assert main(["validate", fig2_file]) == 0
    assert capsys.readouterr().out.strip() == "ok"


def test_parse_error_exit_code(tmp_path, capsys):
    path = tmp_path / "broken.game"
    path.write_text("state a max\nbogus line here\n")
    assert main(["validate", str(path)]) == 1
    assert "line 2" in capsys.readouterr().err


def test_decide_threshold_one_on_ladder(ladder_file, capsys):
    code = main([
        "decide", ladder_file, "--target", "goal",
        "--threshold", "1/1", "--from", "q1",
    ])
    assert code == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "winner min"


def test_decide_out_of_scope_exit_code(tmp_path, capsys):
    path = tmp_path / "oos.game"
    path.write_text(
        "state a max\nstate m min\nstate x rand\nstate t max\nstate z max\n"
        "edge a x\nedge a z\nedge m z\nedge m x\n"
        "edge x t 1/2\nedge x z 1/2\nedge t t\nedge z z\ntarget t\n"
    )
    code = main(["decide", str(path), "--target", "t", "--threshold", "1/2", "--from", "a"])
    assert code == 2
    out = capsys.readouterr().out
    assert "winner out-of-scope" in out
    assert "none-applicable" in out


def test_winning_set_machine_lines(ladder_file, capsys):
    assert main(["winning-set", ladder_file, "--objective", "reach", "--target", "goal"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert "state goal max index bot" in out
    assert "state c min index 1" in out
    assert out[-1] == "rounds 4"


def test_strategy_export_round_trips(fig2_file, tmp_path, capsys):
    out_file = tmp_path / "sigma.strat"
    code = main([
        "strategy", fig2_file, "--objective", "buchi",
        "--target", "t,sp0,sp1,sp2,sp3,sp4,sp5,sp6,sp7",
        "--player", "min", "--emit", str(out_file),
    ])
    assert code == 0
    from sgsolve import parse_strategy

    parsed = parse_strategy(out_file.read_text())
    assert parsed.choice["sp1"] == "rp1"


def test_transform_rvi_emits_parseable_game(tmp_path, capsys):
    path = tmp_path / "min.game"
    path.write_text(
        "state m min\nstate cheap rand\nstate dear rand\nstate t max\nstate z max\n"
        "edge m cheap\nedge m dear\n"
        "edge cheap t 3/10\nedge cheap z 7/10\n"
        "edge dear t 7/10\nedge dear z 3/10\n"
        "edge t t\nedge z z\ntarget t\n"
    )
    assert main(["transform", str(path), "--rvi", "--target", "t"]) == 0
    out = capsys.readouterr().out
    parsed = parse_game(out)
    assert parsed.game.succ["m"] == ("cheap",)


def test_simulate_smoke_is_deterministic(fig2_file, capsys):
    args = [
        "simulate", fig2_file, "--target", "t", "--from", "r3",
        "--samples", "500", "--horizon", "80", "--seed", "9",
    ]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    assert capsys.readouterr().out == first
    assert first.startswith("mean ")


def test_gallery_round_trip_and_labels(tmp_path):
    path = tmp_path / "fig2b.game"
    assert main([
        "gallery", "fig2", "--depth", "6", "--label", "buchi", "--emit", str(path)
    ]) == 0
    parsed = parse_game(path.read_text())
    assert "sp0" in parsed.targets and "t" in parsed.targets


def test_solve_bounded_reach_objective(ladder_file, capsys):
    assert main([
        "solve", ladder_file, "--objective", "reach<=1", "--target", "goal"
    ]) == 0
    out = dict(line.split() for line in capsys.readouterr().out.splitlines())
    assert out["home"] == "1"  # one step suffices from home
    assert out["q1"] == "0"


def test_unknown_flag_is_an_input_error(capsys):
    assert main(["solve", "--no-such-flag"]) == 1


def test_missing_target_is_an_input_error(tmp_path, capsys):
    path = tmp_path / "nt.game"
    path.write_text("state a max\nedge a a\n")
    assert main(["solve", str(path)]) == 1
    assert "target" in capsys.readouterr().err
