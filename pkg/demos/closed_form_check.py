#!/usr/bin/env python3
"""Cross-check the tridiagonal stationary distribution three ways.

For the nearest-neighbour drift chain the stationary distribution has a
closed form built from the ratio delta/(1-delta) alone -- epsilon cancels.
Here we compare it against the LU solver on a small grid, print the n=4
distribution next to its hand-derivable value, and finally push delta
toward zero to watch the expected state approach (2n-1)/2.
"""

import numpy as np

import darwinsim as d

# closed form vs direct solve, worst case over a small grid
worst = 0.0
for n in range(4, 13):
    for delta in (0.05, 0.1, 0.2, 0.25, 0.4):
        spec = d.ChainSpec(n=n, epsilon=0.1, delta=delta)
        closed = d.hessenberg_stationary_closed(spec)
        direct = d.stationary_direct(d.hessenberg_build(spec))
        worst = max(worst, float(np.abs(closed.pi - direct.pi).max()))
print(f"closed form vs LU over n=4..12, five deltas: worst gap {worst:.2e}")

# the n=4, delta=1/4 chain is small enough to check by hand:
# weights (delta, 1, 1, 1-delta) * ratio powers give (1, 4, 12, 9)/26
spec = d.ChainSpec(n=4, epsilon=0.1, delta=0.25)
pi = d.hessenberg_stationary_closed(spec).pi
print("n=4, delta=1/4:", np.array2string(pi, precision=6),
      "  exact:", np.array2string(np.array([1, 4, 12, 9]) / 26, precision=6))

# epsilon really is absent from the answer
for eps in (0.01, 0.1, 0.49):
    assert np.array_equal(pi, d.hessenberg_stationary_closed(
        d.ChainSpec(n=4, epsilon=eps, delta=0.25)).pi)
print("identical for epsilon = 0.01, 0.1, 0.49")

# vanishing back-drift concentrates the chain on the top two states
print(f"\n{'delta':>8}  {'E (n=50)':>10}")
for delta in (0.4, 0.2, 0.1, 0.05, 1e-3, 1e-6):
    E = d.expected_state_closed(d.ChainSpec(n=50, epsilon=0.1, delta=delta))
    print(f"{delta:>8g}  {E:>10.5f}")
print(f"limit value (2n-1)/2 = {d.limit_expected_state(50)}")
