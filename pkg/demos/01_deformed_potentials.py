"""
Deforming 2D central potentials
===============================

A spatial noncommutativity parameter theta turns an ordinary central
potential into an m-dependent effective radial problem: each angular sector
picks up new singular terms proportional to theta*m, and (for the confining
family) a constant energy offset.  This script builds both families and
prints the induced coefficient maps.
"""

from ncspectra import Family, NCContext, PotentialSpec, deform

# --- the even-power family: V = a r^2 + b r^-2 + c r^-4 -------------------
spec = PotentialSpec(Family.EVEN_POWER, a=1.0, b=1.0, c=1.0)

print("even-power family, a=b=c=1")
for theta, m in [(0.0, 1), (0.02, 1), (0.02, 2), (0.02, -2)]:
    try:
        p = deform(spec, NCContext(theta, m))
    except Exception as exc:
        print(f"  theta={theta:5g} m={m:+d}: refused ({exc})")
        continue
    print(f"  theta={theta:5g} m={m:+d}: terms={{"
          + ", ".join(f"r^{k}: {v:.4g}" for k, v in sorted(p.terms.items()))
          + f"}}, shift={p.energy_shift:.4g}")

# observations: at theta=0 nothing changes; at theta != 0 an r^-6 term
# (c/2) theta m and an r^-4 correction (b/4) theta m appear, plus the
# constant (a/2) theta m that splits the +-m degeneracy like a magnetic
# field would.

# --- the inverse-power family: V = a r^-1 + b r^-2 -------------------------
spec = PotentialSpec(Family.INVERSE_POWER, a=-2.0, b=1.0)

print("\ninverse-power family, a=-2, b=1")
for theta, m in [(0.0, 1), (0.1, 1), (0.1, 3)]:
    p = deform(spec, NCContext(theta, m))
    print(f"  theta={theta:5g} m={m:+d}: terms={{"
          + ", ".join(f"r^{k}: {v:.4g}" for k, v in sorted(p.terms.items()))
          + "}")

# here the deformation adds a dipole-like r^-3 term (a/2) theta m and an
# r^-4 term (b/4) theta m; there is no constant shift.  Only the product
# theta*m matters, so (theta, m) and (-theta, -m) give identical problems.

p1 = deform(spec, NCContext(0.1, 3))
p2 = deform(spec, NCContext(-0.1, -3))
print("\n(theta, m) <-> (-theta, -m) symmetry:", p1.terms == p2.terms)
