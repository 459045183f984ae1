"""CSV readers/writers and a minimal SVG line-chart emitter.

All files are UTF-8 with line-feed endings and a header row first.
Real numbers are rendered with 17 significant digits, which binary64
round-trips exactly: a matrix written and re-read compares equal
bitwise.

Schemas
-------
trace:        ``generation,total,E_n,P_1..P_vmax``
distribution: ``state,pi``
sweep:        ``delta,seed,expected_state,residual``
matrix:       a single line holding ``n``, then ``n`` rows of ``n`` entries
kernel:       ``u,mass`` covering every offset ``-v_max..v_max``
mortality:    ``v,mortality`` covering every trait ``1..v_max``

Writers accept a path or an open text file (e.g. ``sys.stdout``).
"""

from __future__ import annotations

import csv
from contextlib import contextmanager

import numpy as np

from .verhulst import MortalityTable, MutationKernel, SimulationTrace

__all__ = [
    "format_real",
    "write_trace_csv",
    "write_distribution_csv",
    "write_sweep_csv",
    "write_matrix_csv",
    "read_matrix_csv",
    "read_kernel_csv",
    "read_mortality_csv",
    "write_svg_lines",
]


def format_real(x: float) -> str:
    """Render a float with 17 significant digits (binary64 round-trip)."""
    return f"{float(x):.17g}"


@contextmanager
def _open_for_write(path_or_file):
    if hasattr(path_or_file, "write"):
        yield path_or_file
    else:
        with open(path_or_file, "w", encoding="utf-8", newline="") as fh:
            yield fh


@contextmanager
def _open_for_read(path_or_file):
    if hasattr(path_or_file, "read"):
        yield path_or_file
    else:
        with open(path_or_file, "r", encoding="utf-8", newline="") as fh:
            yield fh


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def write_trace_csv(path_or_file, trace: SimulationTrace) -> None:
    """One row per generation: index, total, mean trait, full profile."""
    with _open_for_write(path_or_file) as fh:
        w = _writer(fh)
        v_max = trace.v_max
        w.writerow(["generation", "total", "E_n"] + [f"P_{v}" for v in range(1, v_max + 1)])
        for k in range(trace.generations.shape[0]):
            row = [str(k), format_real(trace.totals[k]), format_real(trace.expected_velocities[k])]
            row.extend(format_real(x) for x in trace.generations[k])
            w.writerow(row)


def write_distribution_csv(path_or_file, pi) -> None:
    """Probability vector as ``state,pi`` rows, states numbered from 1."""
    vec = np.asarray(getattr(pi, "pi", pi), dtype=float)
    with _open_for_write(path_or_file) as fh:
        w = _writer(fh)
        w.writerow(["state", "pi"])
        for k, value in enumerate(vec, start=1):
            w.writerow([str(k), format_real(value)])


def write_sweep_csv(path_or_file, results) -> None:
    """Sweep records in input order: ``delta,seed,expected_state,residual``."""
    with _open_for_write(path_or_file) as fh:
        w = _writer(fh)
        w.writerow(["delta", "seed", "expected_state", "residual"])
        for r in results:
            w.writerow(
                [
                    format_real(r.delta),
                    str(r.seed),
                    format_real(r.expected_state),
                    format_real(r.residual),
                ]
            )


def write_matrix_csv(path_or_file, matrix) -> None:
    """Square matrix: a line holding ``n``, then ``n`` rows of ``n`` entries."""
    P = np.asarray(matrix, dtype=float)
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise ValueError(f"matrix must be square, got shape {P.shape}")
    n = P.shape[0]
    with _open_for_write(path_or_file) as fh:
        w = _writer(fh)
        w.writerow([str(n)])
        for row in P:
            w.writerow([format_real(x) for x in row])


def read_matrix_csv(path_or_file) -> np.ndarray:
    """Inverse of :func:`write_matrix_csv`; the round trip is exact."""
    with _open_for_read(path_or_file) as fh:
        rows = [row for row in csv.reader(fh) if row]
    if not rows:
        raise ValueError("matrix file is empty")
    try:
        n = int(rows[0][0])
    except (IndexError, ValueError):
        raise ValueError(f"matrix file must start with its size, got {rows[0]!r}") from None
    if n < 1:
        raise ValueError(f"matrix size must be positive, got {n}")
    if len(rows) - 1 != n:
        raise ValueError(f"expected {n} matrix rows, found {len(rows) - 1}")
    P = np.empty((n, n))
    for i, row in enumerate(rows[1:]):
        if len(row) != n:
            raise ValueError(f"matrix row {i + 1} has {len(row)} entries, expected {n}")
        P[i] = [float(x) for x in row]
    return P


def _read_table(path_or_file, header: tuple[str, str]):
    with _open_for_read(path_or_file) as fh:
        rows = [row for row in csv.reader(fh) if row]
    if not rows:
        raise ValueError("file is empty")
    got = tuple(col.strip() for col in rows[0])
    if got != header:
        raise ValueError(f"expected header {','.join(header)!r}, got {','.join(got)!r}")
    table = {}
    for row in rows[1:]:
        if len(row) != 2:
            raise ValueError(f"expected 2 columns per row, got {row!r}")
        key = int(row[0])
        if key in table:
            raise ValueError(f"duplicate entry for {header[0]}={key}")
        table[key] = float(row[1])
    if not table:
        raise ValueError("file has a header but no data rows")
    return table


def read_kernel_csv(path_or_file) -> MutationKernel:
    """Mutation kernel from ``u,mass`` rows over the full offset range.

    The radius is inferred from the largest offset; every offset in
    ``-v_max..v_max`` must be present exactly once.  Structural shape is
    enforced here; the probability axioms are the caller's concern (see
    ``validate_kernel``).
    """
    table = _read_table(path_or_file, ("u", "mass"))
    v_max = max(abs(u) for u in table)
    if v_max < 1:
        raise ValueError("kernel radius must be at least 1")
    missing = [u for u in range(-v_max, v_max + 1) if u not in table]
    if missing:
        raise ValueError(f"kernel file is missing offsets {missing}")
    if len(table) != 2 * v_max + 1:
        extra = sorted(set(table) - set(range(-v_max, v_max + 1)))
        raise ValueError(f"kernel file has offsets outside the range: {extra}")
    mass = np.array([table[u] for u in range(-v_max, v_max + 1)])
    return MutationKernel(v_max=v_max, mass=mass)


def read_mortality_csv(path_or_file) -> MortalityTable:
    """Mortality table from ``v,mortality`` rows covering ``1..v_max``."""
    table = _read_table(path_or_file, ("v", "mortality"))
    v_max = max(table)
    missing = [v for v in range(1, v_max + 1) if v not in table]
    if missing:
        raise ValueError(f"mortality file is missing traits {missing}")
    if len(table) != v_max:
        extra = sorted(set(table) - set(range(1, v_max + 1)))
        raise ValueError(f"mortality file has traits outside the range: {extra}")
    values = np.array([table[v] for v in range(1, v_max + 1)])
    return MortalityTable(values=values)


_SVG_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def write_svg_lines(
    path_or_file,
    xs,
    series,
    labels=None,
    title: str = "",
    width: int = 640,
    height: int = 400,
) -> None:
    """Plain polyline chart: one path per series, shared x values.

    Presentation-only helper so runs can be eyeballed without any
    plotting dependency.  NaN points break the polyline.
    """
    xs = np.asarray(xs, dtype=float)
    curves = [np.asarray(s, dtype=float) for s in series]
    if labels is None:
        labels = [f"series {i + 1}" for i in range(len(curves))]
    for s in curves:
        if s.shape != xs.shape:
            raise ValueError("every series must match the x values in length")

    finite = np.concatenate([c[np.isfinite(c)] for c in curves]) if curves else np.array([])
    lo = float(finite.min()) if finite.size else 0.0
    hi = float(finite.max()) if finite.size else 1.0
    if hi == lo:
        hi = lo + 1.0
    x_lo, x_hi = float(xs.min()), float(xs.max())
    if x_hi == x_lo:
        x_hi = x_lo + 1.0

    margin = 40.0
    inner_w, inner_h = width - 2 * margin, height - 2 * margin

    def px(x):
        return margin + (x - x_lo) / (x_hi - x_lo) * inner_w

    def py(y):
        return height - margin - (y - lo) / (hi - lo) * inner_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="#333"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" '
        f'stroke="#333"/>',
    ]
    if title:
        parts.append(
            f'<text x="{width / 2}" y="20" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{title}</text>'
        )
    for i, (curve, label) in enumerate(zip(curves, labels)):
        color = _SVG_PALETTE[i % len(_SVG_PALETTE)]
        points, runs = [], []
        for x, y in zip(xs, curve):
            if np.isfinite(y):
                points.append(f"{px(x):.2f},{py(y):.2f}")
            elif points:
                runs.append(points)
                points = []
        if points:
            runs.append(points)
        for run in runs:
            parts.append(
                f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                f'points="{" ".join(run)}"/>'
            )
        parts.append(
            f'<text x="{margin + 8}" y="{margin + 14 + 16 * i}" fill="{color}" '
            f'font-family="sans-serif" font-size="11">{label}</text>'
        )
    parts.append("</svg>")
    with _open_for_write(path_or_file) as fh:
        fh.write("\n".join(parts) + "\n")
