"""
Zeeman-like splitting sweeps
============================

The noncommutativity parameter lifts the +-m degeneracy the way a magnetic
field would.  Sweeping theta and fitting E(theta, m) - E(0, m) against
theta*m gives the splitting slope; a log-log fit measures the scaling
exponent of the shift.  The physical shift is first order in theta, while
the published expansion chain for the inverse-power spectrum carries a 1/nu
factor that makes its own prediction scale like sqrt(theta) — the sweep
measures both rather than assuming either.
"""

from ncspectra import Family
from ncspectra.sweep import run_sweep, to_csv

thetas = [0.0, 0.001, 0.002, 0.005, 0.01, 0.02, 0.05]

# --- even-power family ------------------------------------------------------
rep = run_sweep(Family.EVEN_POWER, 1.0, 1.0, 1.0, thetas, [1, 2],
                level=0, n_eigs=2)
print("even-power ground state E(theta, m):")
for r in rep.rows:
    print(f"  theta={r.theta:6g} m={r.m}: E = {r.E_oracle:.10f} "
          f"(nodes {r.node_count})")
for f in rep.fits:
    print(f"  m={f.m}: slope dE/d(theta m) = {f.slope:+.6f}, "
          f"measured exponent {f.exponent:.4f} (R^2 = {f.exponent_r2:.6f})")

# --- inverse-power family ---------------------------------------------------
rep = run_sweep(Family.INVERSE_POWER, -2.0, 1.0, 0.0, thetas, [1],
                level=0, n_eigs=2)
print("\ninverse-power ground state:")
for f in rep.fits:
    print(f"  {f.source:8s}: slope = {f.slope:+.6f}, "
          f"exponent {f.exponent:.4f} (R^2 = {f.exponent_r2:.6f})")
# the oracle (true) shift scales ~ theta^1; the published expansion's own
# structure scales ~ theta^(1/2) — visible side by side above.

# --- machine-readable export ------------------------------------------------
csv_text = to_csv(rep)
print("\nCSV export (schema=1, 17 significant digits):")
print("\n".join(csv_text.splitlines()[:6]))
print("...")

# the same table is available from the command line:
#   ncspectra sweep --family inverse --a -2 --b 1 \
#       --theta 0,0.001,0.002,0.005,0.01,0.02,0.05 --m 1 \
#       --format csv --no-timestamp
