#!/usr/bin/env python3
"""Two certificates you can evaluate before running anything.

The a-priori bound says no trajectory ever exceeds
max(g^2 K / (4 b r), K, |P0|) where g is the best per-generation growth
factor and r the kernel retention.  The extinction certificate says that
if g <= 1 the total mass is eventually non-increasing and drains to
zero.  This script evaluates both on a growing and a dying parameter
set, then runs the trajectories to show the certificates are honest.
"""

from pathlib import Path

import numpy as np

import darwinsim as d
from darwinsim.serialize import write_svg_lines

out_dir = Path(__file__).with_name("output")
out_dir.mkdir(exist_ok=True)

population0 = d.point_mass_population(25, trait=1, size=100.0)

# --- a growing population, still pinned under its bound -----------------
growing = d.default_params()
bound = d.upper_bound(growing, population0)
print(f"default parameters: bound = {bound:.0f}, "
      f"extinction certificate holds: {d.extinction_condition_holds(growing)}")

trace_up = d.simulate(population0, growing, 10_000)
print(f"  observed max over 10000 generations: {trace_up.totals.max():.2f} "
      f"(bound respected: {bool((trace_up.totals <= bound).all())})")

# --- the same shape with flat mortality 0.5 and b = 0.4 dies out --------
dying = d.VerhulstParams(
    birth_rate=0.4,
    capacity=10_000.0,
    v_max=25,
    kernel=d.nearest_neighbor_kernel(25),
    mortality=d.constant_mortality(25, 0.5),
)
print(f"flat-mortality parameters: extinction certificate holds: "
      f"{d.extinction_condition_holds(dying)}")

trace_down = d.simulate(population0, dying, 10_000)
decades = trace_down.totals[[0, 10, 100, 1000, 10_000]]
print("  totals at generations 0/10/100/1000/10000:",
      "  ".join(f"{t:.3e}" for t in decades))
print(f"  monotone decay: {bool((np.diff(trace_down.totals) <= 0).all())}")

# Log-scale both totals into one picture; the dying run hits float
# underflow long before generation 10000, so clip for the plot.
gens = np.arange(10_001, dtype=float)
svg_path = out_dir / "bounds_and_extinction.svg"
write_svg_lines(
    svg_path,
    gens,
    [
        np.log10(np.maximum(trace_up.totals, 1e-30)),
        np.log10(np.maximum(trace_down.totals, 1e-30)),
        np.full(gens.shape, np.log10(bound)),
    ],
    labels=["log10 total (growing)", "log10 total (dying)", "log10 bound"],
    title="certified bound and certified extinction",
)
print(f"wrote {svg_path}")
