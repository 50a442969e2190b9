"""Command-line interface: exit codes, file handling, subcommands."""

import csv

import pytest

from gridreach.cli import main
from gridreach.grid import gen_random, parse_grid, write_grid


@pytest.fixture
def grid_file(tmp_path):
    def write(density, seed=0, w=6, h=6):
        path = tmp_path / f"g{seed}.grid"
        path.write_text(write_grid(gen_random(w, h, density, seed)))
        return str(path)

    return write


def test_solve_and_oracle_agree_on_exit_codes(grid_file, capsys):
    for seed, density in ((0, 0.9), (1, 0.1), (2, 0.5)):
        path = grid_file(density, seed)
        got = main(["solve", path])
        assert got in (0, 1)
        assert main(["oracle", path]) == got
        out = capsys.readouterr().out
        assert ("reachable" in out) or ("unreachable" in out)


def test_solve_mode_and_flags(grid_file, capsys):
    path = grid_file(0.8, 7)
    base = main(["solve", path])
    assert main(["solve", path, "--mode", "materialized"]) == base
    assert main(["solve", path, "--separator", "fundamental-cycle"]) == base
    assert main(["solve", path, "--inner", "separator"]) == base
    assert main(["solve", path, "--ledger"]) == base
    out = capsys.readouterr().out
    assert "peak_words" in out


def test_bad_input_exits_2(tmp_path, grid_file):
    bad = tmp_path / "bad.grid"
    bad.write_text("not a grid\n")
    assert main(["solve", str(bad)]) == 2
    assert main(["solve", str(tmp_path / "missing.grid")]) == 2
    path = grid_file(0.5, 3)
    with pytest.raises(SystemExit) as exc:
        main(["solve", path, "--mode", "telepathy"])
    assert exc.value.code == 2


def test_gen_roundtrip(tmp_path, capsys):
    out = tmp_path / "gen.grid"
    assert (
        main(
            [
                "gen",
                "--width",
                "7",
                "--height",
                "5",
                "--density",
                "0.6",
                "--seed",
                "9",
                "-o",
                str(out),
            ]
        )
        == 0
    )
    g = parse_grid(out.read_text())
    assert (g.width, g.height) == (7, 5)
    assert (
        main(
            ["gen", "--width", "3", "--height", "3", "--density", "2.0", "--seed", "0"]
        )
        == 2
    )


def test_check_passes_clean_and_fails_mutated(capsys):
    assert main(["check"]) == 0
    assert main(["check", "--mutate", "ignore-path-function"]) == 1
    assert main(["check", "--mutate", "skip-level-shift-pass"]) == 1
    capsys.readouterr()


def test_bench_writes_csv(tmp_path, capsys):
    out = tmp_path / "bench.csv"
    assert (
        main(["bench", "--sides", "6,8", "--trials", "1", "--csv", str(out)]) == 0
    )
    rows = list(csv.DictReader(out.open()))
    assert {(r["side"], r["mode"]) for r in rows} == {
        ("6", "streamed"),
        ("6", "materialized"),
        ("8", "streamed"),
        ("8", "materialized"),
    }
    for r in rows:
        assert int(r["peak_words"]) > 0
    capsys.readouterr()
