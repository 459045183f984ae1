import numpy as np
import pytest

import darwinsim.cli as cli
from darwinsim.cli import RunConfig, main, parse_args
from darwinsim.experiments import ClosedFormEntry, ClosedFormReport
from darwinsim.serialize import read_matrix_csv


# ---------------------------------------------------------------------------
# parsing


def test_defaults_per_subcommand():
    cfg = parse_args(["sweep"])
    assert cfg.command == "sweep"
    assert cfg.n == 50 and cfg.epsilon == 0.1
    assert cfg.deltas == (0.4, 0.2, 0.1, 0.05)
    assert cfg.seeds == (1, 2, 3, 4, 5)
    assert cfg.output is None

    cfg = parse_args(["verhulst"])
    assert cfg.generations == 5000
    assert cfg.birth_rate == 0.5 and cfg.capacity == 10_000.0
    assert cfg.v_max == 25 and cfg.kernel == "paper8" and cfg.mortality == "inverse-v"

    cfg = parse_args(["verify"])
    assert cfg.n_range == (4, 12)
    assert cfg.delta_grid == (0.05, 0.1, 0.2, 0.25, 0.4)


@pytest.mark.parametrize(
    "argv",
    [
        ["verhulst", "--generations", "100", "--b", "0.3", "--K", "500", "--vmax", "7",
         "--p0", "20@3"],
        ["markov-gen", "--n", "9", "--epsilon", "0.2", "--delta", "0.35", "--seed", "11"],
        ["stationary", "--input", "m.csv", "--method", "power", "--tol", "1e-10"],
        ["hessenberg", "--n", "6", "--delta", "0.25", "--closed-form"],
        ["sweep", "--deltas", "0.3,0.2", "--seeds", "7,8,9", "--output", "out.csv"],
        ["verify", "--n-range", "5:9", "--delta-grid", "0.1,0.3"],
    ],
)
def test_config_round_trips_through_its_own_argv(argv):
    cfg = parse_args(argv)
    assert parse_args(cfg.to_argv()) == cfg


def test_n_range_accepts_single_value():
    assert parse_args(["verify", "--n-range", "7"]).n_range == (7, 7)


@pytest.mark.parametrize(
    "argv",
    [
        ["unknown-command"],
        ["sweep", "--frobnicate"],
        ["verify", "--n-range", "9:5"],
        ["verify", "--delta-grid", "abc"],
        ["stationary"],  # --input is required
        ["stationary", "--input", "m.csv", "--method", "cheat"],
        [],
    ],
)
def test_usage_errors_exit_one(argv, capsys):
    assert main(argv) == 1
    assert "usage" in capsys.readouterr().err


def test_seed_env_default(monkeypatch):
    monkeypatch.delenv("DARWIN_SEED", raising=False)
    assert parse_args(["markov-gen"]).seed == 1
    monkeypatch.setenv("DARWIN_SEED", "77")
    assert parse_args(["markov-gen"]).seed == 77
    # an explicit flag always wins over the environment
    assert parse_args(["markov-gen", "--seed", "3"]).seed == 3


def test_bad_seed_env_is_a_validation_error(monkeypatch, capsys):
    monkeypatch.setenv("DARWIN_SEED", "not-a-number")
    assert main(["markov-gen", "--n", "4"]) == 1
    assert "DARWIN_SEED" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# command execution and exit codes


def test_markov_gen_then_stationary(tmp_path, capsys):
    matrix_path = tmp_path / "m.csv"
    assert main(["markov-gen", "--n", "8", "--seed", "5", "--output", str(matrix_path)]) == 0
    P = read_matrix_csv(matrix_path)
    assert P.shape == (8, 8)

    dist_path = tmp_path / "pi.csv"
    code = main(["stationary", "--input", str(matrix_path), "--output", str(dist_path)])
    assert code == 0
    lines = dist_path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "state,pi"
    pi = np.array([float(line.split(",")[1]) for line in lines[1:]])
    assert pi.sum() == pytest.approx(1.0)
    assert "expected_state" in capsys.readouterr().err


def test_stationary_csv_goes_to_stdout_without_output(tmp_path, capsys):
    matrix_path = tmp_path / "m.csv"
    main(["markov-gen", "--n", "5", "--output", str(matrix_path)])
    capsys.readouterr()
    assert main(["stationary", "--input", str(matrix_path)]) == 0
    out = capsys.readouterr().out
    assert out.startswith("state,pi\n")


def test_missing_input_file_exits_two(tmp_path):
    assert main(["stationary", "--input", str(tmp_path / "absent.csv")]) == 2


def test_reducible_matrix_exits_two(tmp_path):
    path = tmp_path / "reducible.csv"
    path.write_text("2\n1,0\n0,1\n", encoding="utf-8")
    assert main(["stationary", "--input", str(path)]) == 2


def test_non_stochastic_matrix_exits_one(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("2\n0.9,0.3\n0.5,0.5\n", encoding="utf-8")
    assert main(["stationary", "--input", str(path)]) == 1


def test_invalid_chain_size_exits_one():
    assert main(["markov-gen", "--n", "1"]) == 1


def test_hessenberg_closed_form_output(capsys):
    assert main(["hessenberg", "--n", "4", "--delta", "0.25", "--closed-form"]) == 0
    captured = capsys.readouterr()
    rows = captured.out.splitlines()
    assert rows[0] == "state,pi"
    values = [float(r.split(",")[1]) for r in rows[1:]]
    np.testing.assert_allclose(values, np.array([1, 4, 12, 9]) / 26, atol=1e-15)
    assert "expected_state" in captured.err


def test_hessenberg_solver_and_closed_form_agree(capsys):
    main(["hessenberg", "--n", "9", "--delta", "0.1", "--closed-form"])
    closed = capsys.readouterr().out
    main(["hessenberg", "--n", "9", "--delta", "0.1"])
    solved = capsys.readouterr().out
    a = [float(r.split(",")[1]) for r in closed.splitlines()[1:]]
    b = [float(r.split(",")[1]) for r in solved.splitlines()[1:]]
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_verhulst_run_and_formats(tmp_path, capsys):
    out = tmp_path / "trace.csv"
    svg = tmp_path / "trace.svg"
    code = main(
        ["verhulst", "--generations", "50", "--output", str(out), "--svg", str(svg)]
    )
    assert code == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 52  # header + generations 0..50
    assert lines[0].startswith("generation,total,E_n,P_1")
    assert svg.read_text(encoding="utf-8").startswith("<svg")
    # the v=1 class has mortality 1, which is legal but flagged
    assert "warning" in capsys.readouterr().err


def test_verhulst_zero_generations(tmp_path):
    out = tmp_path / "t.csv"
    assert main(["verhulst", "--generations", "0", "--output", str(out)]) == 0
    assert len(out.read_text(encoding="utf-8").splitlines()) == 2


def test_verhulst_p0_placement(tmp_path):
    out = tmp_path / "t.csv"
    assert main(["verhulst", "--generations", "0", "--p0", "12@4", "--output", str(out)]) == 0
    row = out.read_text(encoding="utf-8").splitlines()[1].split(",")
    assert float(row[3 + 3]) == 12.0  # P_4 column
    assert main(["verhulst", "--p0", "12@99", "--output", str(out)]) == 1
    assert main(["verhulst", "--p0", "oops", "--output", str(out)]) == 1


def test_verhulst_kernel_file_must_match_vmax(tmp_path):
    kernel = tmp_path / "k.csv"
    kernel.write_text("u,mass\n-1,0.05\n0,0.9\n1,0.05\n", encoding="utf-8")
    out = tmp_path / "t.csv"
    args = ["verhulst", "--generations", "1", "--kernel", str(kernel), "--output", str(out)]
    assert main(args) == 1  # radius 1 vs default vmax 25
    assert main(args + ["--vmax", "1"]) == 0


def test_verhulst_rejects_invalid_kernel_file(tmp_path):
    kernel = tmp_path / "k.csv"
    # normalised but asymmetric: fails the axioms, not the file format
    kernel.write_text("u,mass\n-1,0.2\n0,0.7\n1,0.1\n", encoding="utf-8")
    out = tmp_path / "t.csv"
    code = main(
        ["verhulst", "--generations", "1", "--kernel", str(kernel), "--vmax", "1",
         "--output", str(out)]
    )
    assert code == 1


def test_sweep_csv_and_rerun_bytes(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["sweep", "--n", "20", "--deltas", "0.4,0.1", "--seeds", "1,2"]
    assert main(args + ["--output", str(a)]) == 0
    assert main(args + ["--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "delta,seed,expected_state,residual"
    assert len(lines) == 5


def test_sweep_svg(tmp_path):
    svg = tmp_path / "sweep.svg"
    code = main(
        ["sweep", "--n", "10", "--deltas", "0.4,0.2", "--seeds", "1,2",
         "--output", str(tmp_path / "s.csv"), "--svg", str(svg)]
    )
    assert code == 0
    assert svg.read_text(encoding="utf-8").count("<polyline") == 2


def test_verify_success(capsys):
    assert main(["verify", "--n-range", "4:6", "--delta-grid", "0.1,0.25"]) == 0
    out = capsys.readouterr().out
    assert "max deviation" in out and "FLAGGED" not in out


def test_verify_failure_path(monkeypatch, capsys):
    # real deviations sit around 1e-14, so exercise the failing branch
    # with a synthetic report
    entry = ClosedFormEntry(n=5, delta=0.1, deviation=1e-3)
    bad = ClosedFormReport(
        entries=(entry,), flagged=(entry,), max_deviation=1e-3, flag_tolerance=1e-10
    )
    monkeypatch.setattr(cli, "verify_closed_form", lambda **kw: bad)
    assert main(["verify"]) == 2
    assert "FLAGGED" in capsys.readouterr().out


def test_help_exits_zero():
    assert main(["--help"]) == 0
    assert main(["sweep", "--help"]) == 0
