"""
The independent eigenvalue oracle
=================================

Every closed form in this package is cross-checked against a finite
difference engine that knows nothing about the ansatz: log-mapped grid,
symmetric tridiagonal pencil, deterministic Sturm-sequence bisection,
inverse iteration for the vectors, and Richardson extrapolation over two
resolutions.  This script calibrates it on problems with textbook spectra.
"""

import numpy as np

from ncspectra import Family, NCContext, PotentialSpec, deform
from ncspectra.oracle import GridSpec, default_grid, solve_radial

# --- 2D harmonic oscillator: E = 2 (2 n_r + |m| + 1) ----------------------
print("V = r^2 (2D oscillator):")
for m in (0, 1, 2):
    p = deform(PotentialSpec(Family.EVEN_POWER, 1.0, 0.0, 0.0),
               NCContext(0.0, m))
    res = solve_radial(p, GridSpec(1e-5, 14.0, "log", 4000), n_eigs=3)
    exact = [2.0 * (2 * n + abs(m) + 1) for n in range(3)]
    err = np.abs(res.eigenvalues - exact) / exact
    print(f"  m={m}: E = {np.round(res.eigenvalues, 9)}  "
          f"max rel err {err.max():.1e}  nodes {res.node_counts}")

# --- 2D Coulomb: E_n = -(n + 1/2)^-2 for V = -2/r -------------------------
print("\nV = -2/r (2D hydrogen-like):")
p = deform(PotentialSpec(Family.INVERSE_POWER, -2.0, 0.0), NCContext(0.0, 0))
grid = default_grid(p, 3)     # auto-expanded walls
res = solve_radial(p, grid, n_eigs=3)
exact = [-1.0 / (n + 0.5) ** 2 for n in range(3)]
for E, ex in zip(res.eigenvalues, exact):
    print(f"  E = {E:.9f}   exact {ex:.9f}   rel err "
          f"{abs(E - ex) / abs(ex):.1e}")
print(f"  auto grid: r in [{grid.r_min:.2e}, {grid.r_max:.1f}], "
      f"{grid.points} points")

# --- Richardson extrapolation at work --------------------------------------
# the reported eigenvalues combine two resolutions, (4 E_2h - E_h)/3, so
# even a coarse 800-point grid hits the wall-limited accuracy floor; after
# that, shrinking r_min (not adding points) is what gains digits
p = deform(PotentialSpec(Family.EVEN_POWER, 1.0, 0.0, 0.0), NCContext(0.0, 0))
coarse = solve_radial(p, GridSpec(1e-4, 12.0, "log", 800), n_eigs=1)
tight = solve_radial(p, GridSpec(1e-6, 12.0, "log", 800), n_eigs=1)
print(f"\nRichardson, 800-pt grid: |E-2| = "
      f"{abs(coarse.eigenvalues[0] - 2):.1e} with r_min=1e-4, "
      f"{abs(tight.eigenvalues[0] - 2):.1e} with r_min=1e-6")

# --- safety rails -----------------------------------------------------------
# attractive r^-6 (theta*m < 0 in the even-power family) means the spectrum
# is unbounded below; the oracle refuses instead of returning garbage
bad = deform(PotentialSpec(Family.EVEN_POWER, 1.0, 0.0, 1.0),
             NCContext(0.01, -1))
try:
    solve_radial(bad)
except Exception as exc:
    print(f"\ntheta*m < 0: {type(exc).__name__}: {exc}")
