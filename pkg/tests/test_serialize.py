import io

import numpy as np
import numpy.testing as npt
import pytest

from darwinsim import (
    ChainSpec,
    RandomSource,
    build_random_transition,
    default_params,
    point_mass_population,
    run_delta_sweep,
    simulate,
    validate_kernel,
)
from darwinsim.serialize import (
    format_real,
    read_kernel_csv,
    read_matrix_csv,
    read_mortality_csv,
    write_distribution_csv,
    write_matrix_csv,
    write_svg_lines,
    write_sweep_csv,
    write_trace_csv,
)


def test_format_real_is_roundtrip_exact():
    rng = np.random.default_rng(8)
    samples = np.concatenate(
        [
            rng.uniform(-1, 1, 200),
            rng.uniform(-1e300, 1e300, 50),
            10.0 ** rng.uniform(-300, 300, 50) * np.sign(rng.standard_normal(50)),
            [0.0, 1.0, -1.0, np.pi, 2**-1074, np.nan, np.inf],
        ]
    )
    for x in samples:
        back = float(format_real(x))
        assert back == x or (np.isnan(back) and np.isnan(x))


def test_trace_csv_layout(tmp_path):
    params = default_params(v_max=4)
    trace = simulate(point_mass_population(4, trait=2, size=10.0), params, 3)
    path = tmp_path / "trace.csv"
    write_trace_csv(path, trace)
    raw = path.read_bytes()
    assert b"\r" not in raw  # LF endings only
    lines = raw.decode("utf-8").splitlines()
    assert lines[0] == "generation,total,E_n,P_1,P_2,P_3,P_4"
    assert len(lines) == 1 + 4  # header + generations 0..3
    first = lines[1].split(",")
    assert first[0] == "0"
    assert float(first[1]) == trace.totals[0]
    assert float(first[3 + 1]) == 10.0  # P_2 column


def test_trace_csv_nan_velocity_round_trips(tmp_path):
    params = default_params(v_max=4)
    trace = simulate(np.zeros(4), params, 1)
    buf = io.StringIO()
    write_trace_csv(buf, trace)
    row = buf.getvalue().splitlines()[1].split(",")
    assert np.isnan(float(row[2]))


def test_distribution_csv(tmp_path):
    pi = np.array([1.0, 4.0, 12.0, 9.0]) / 26.0
    buf = io.StringIO()
    write_distribution_csv(buf, pi)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "state,pi"
    assert len(lines) == 5
    values = [float(line.split(",")[1]) for line in lines[1:]]
    npt.assert_array_equal(values, pi)  # 17 significant digits: exact
    states = [int(line.split(",")[0]) for line in lines[1:]]
    assert states == [1, 2, 3, 4]


def test_sweep_csv_schema():
    results = run_delta_sweep(n=8, deltas=(0.4, 0.1), seeds=(1, 2))
    buf = io.StringIO()
    write_sweep_csv(buf, results)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "delta,seed,expected_state,residual"
    assert len(lines) == 1 + 4
    delta, seed, e, res = lines[1].split(",")
    assert float(delta) == 0.4 and seed == "1"
    assert float(e) == results[0].expected_state
    assert float(res) == results[0].residual


def test_matrix_csv_round_trip_is_bitwise(tmp_path):
    P = build_random_transition(ChainSpec(n=17, epsilon=0.13, delta=0.21), RandomSource(99))
    path = tmp_path / "matrix.csv"
    write_matrix_csv(path, P)
    back = read_matrix_csv(path)
    npt.assert_array_equal(back, P)
    assert path.read_text(encoding="utf-8").splitlines()[0] == "17"


def test_matrix_csv_rejects_malformed_input(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("", encoding="utf-8")
    with pytest.raises(ValueError, match="empty"):
        read_matrix_csv(bad)
    bad.write_text("not-a-size\n1,2\n", encoding="utf-8")
    with pytest.raises(ValueError, match="size"):
        read_matrix_csv(bad)
    bad.write_text("2\n0.5,0.5\n", encoding="utf-8")
    with pytest.raises(ValueError, match="rows"):
        read_matrix_csv(bad)
    bad.write_text("2\n0.5,0.5\n0.5,0.5,0.5\n", encoding="utf-8")
    with pytest.raises(ValueError, match="entries"):
        read_matrix_csv(bad)
    with pytest.raises(ValueError):
        write_matrix_csv(bad, np.ones((2, 3)))


def test_kernel_csv_reader(tmp_path):
    path = tmp_path / "kernel.csv"
    path.write_text(
        "u,mass\n-2,0.05\n-1,0.15\n0,0.6\n1,0.15\n2,0.05\n", encoding="utf-8"
    )
    kernel = read_kernel_csv(path)
    assert kernel.v_max == 2
    npt.assert_allclose(kernel.mass, [0.05, 0.15, 0.6, 0.15, 0.05])
    assert validate_kernel(kernel).ok


def test_kernel_csv_requires_complete_range(tmp_path):
    path = tmp_path / "kernel.csv"
    path.write_text("u,mass\n-1,0.05\n1,0.05\n", encoding="utf-8")  # no u=0
    with pytest.raises(ValueError, match="missing"):
        read_kernel_csv(path)
    path.write_text("w,mass\n0,1\n", encoding="utf-8")
    with pytest.raises(ValueError, match="header"):
        read_kernel_csv(path)
    path.write_text("u,mass\n0,0.5\n0,0.5\n", encoding="utf-8")
    with pytest.raises(ValueError, match="duplicate"):
        read_kernel_csv(path)


def test_mortality_csv_reader(tmp_path):
    path = tmp_path / "mort.csv"
    path.write_text("v,mortality\n1,1.0\n2,0.5\n3,0.25\n", encoding="utf-8")
    table = read_mortality_csv(path)
    npt.assert_allclose(table.values, [1.0, 0.5, 0.25])
    path.write_text("v,mortality\n1,0.5\n3,0.25\n", encoding="utf-8")
    with pytest.raises(ValueError, match="missing"):
        read_mortality_csv(path)


def test_svg_emitter(tmp_path):
    path = tmp_path / "chart.svg"
    xs = np.arange(10.0)
    ys = np.sin(xs)
    write_svg_lines(path, xs, [ys], labels=["wave"], title="demo")
    text = path.read_text(encoding="utf-8")
    assert text.startswith("<svg")
    assert text.count("<polyline") == 1
    assert "wave" in text and "demo" in text


def test_svg_breaks_polyline_at_nan():
    ys = np.array([1.0, 2.0, np.nan, 3.0, 4.0])
    buf = io.StringIO()
    write_svg_lines(buf, np.arange(5.0), [ys])
    assert buf.getvalue().count("<polyline") == 2


def test_svg_length_mismatch():
    with pytest.raises(ValueError):
        write_svg_lines(io.StringIO(), np.arange(3.0), [np.arange(4.0)])
