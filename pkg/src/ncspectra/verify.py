"""Convention ledger: every sign/indexing ambiguity in the closed-form
derivations is resolved by running both candidate conventions and letting the
ODE residual and the independent numerical oracle arbitrate.

Each entry reports the two candidate values/behaviours, their residuals, and
a verdict.  The row set is fixed and enumerable; `ok` is False when the
rederived convention itself fails its residual contract, which the CLI turns
into a nonzero exit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import evenpower, invpower
from .deformation import (
    DeformedRadialProblem,
    Family,
    NCContext,
    PotentialSpec,
    deform,
)
from .errors import NCSpectraError, OracleUnavailable
from .oracle import GridSpec, default_grid, match_level, ode_residual, solve_radial

RESIDUAL_CONTRACT = 1e-8


@dataclass
class VerifyReport:
    rows: list = field(default_factory=list)
    ok: bool = True

    def add(self, **kw):
        kw.setdefault("residual_paper", math.nan)
        kw.setdefault("residual_rederived", math.nan)
        self.rows.append(kw)


def _oracle_or_unavailable(problem, **kw):
    try:
        return solve_radial(problem, **kw)
    except NCSpectraError as exc:
        raise OracleUnavailable(str(exc)) from exc


def _entry_radial_reduction_sign(report):
    """Sign of the potential inside the reduced radial bracket.

    With the bracket [E - V - (m^2 - 1/4)/r^2] the oracle reproduces the
    analytic 2D oscillator ground state E = 2 for V = r^2; flipping the sign
    (bracket [E + V - ...]) does not."""
    spec = PotentialSpec(Family.EVEN_POWER, 1.0, 0.0, 0.0)
    problem = deform(spec, NCContext(0.0, 0))
    grid = GridSpec(1e-5, 12.0, "log", 3000)
    E_minus = _oracle_or_unavailable(problem, grid=grid, n_eigs=1).eigenvalues[0]
    flipped = DeformedRadialProblem(
        family=problem.family,
        terms={p: -c for p, c in problem.terms.items()},
        energy_shift=0.0, m=0, theta=0.0)
    try:
        E_plus = float(solve_radial(flipped, grid=grid, n_eigs=1).eigenvalues[0])
        res_plus = abs(E_plus - 2.0)
    except NCSpectraError:
        E_plus = math.nan
        res_plus = math.inf
    report.add(
        name="radial-reduction-sign",
        description="sign of V in the reduced radial bracket, checked against "
                    "the analytic 2D oscillator ground state E = 2",
        paper=f"[E + V - centrifugal]: E0 = {E_plus!r}",
        rederived=f"[E - V - centrifugal]: E0 = {float(E_minus)!r}",
        residual_paper=float(res_plus),
        residual_rederived=float(abs(E_minus - 2.0)),
        verdict="minus sign (potential subtracted)",
        contract=True,
        tol=1e-6,
    )


def _even_fixture():
    a, c, theta, m, n = 1.0, 1.0, 0.01, 1, 0
    b = evenpower.solve_constraint_b(a, c, theta, m, n)
    spec = PotentialSpec(Family.EVEN_POWER, a, b, c)
    return deform(spec, NCContext(theta, m)), n


def _entry_even_indicial_sign(report):
    """Which sign of the r^-2 prefactor exponent enters the indicial relation.

    The printed indicial value nu = 3/2 + ct/(2 sqrt(dt)) only annihilates the
    lowest matching relation when the recurrence carries the decaying exponent
    -sqrt(dt); with +sqrt(dt) the same relation leaves a 2*ct remainder."""
    problem, n = _even_fixture()
    ct = problem.terms[-4]
    dt = problem.terms[-6]
    sq = math.sqrt(dt)
    nu = 1.5 + ct / (2.0 * sq)
    res_plus = abs((+sq) * (3.0 - 2.0 * nu) - ct)
    res_minus = abs((-sq) * (3.0 - 2.0 * nu) - ct)
    report.add(
        name="evenpower-indicial-sign",
        description="remainder of the lowest power-matching relation at the "
                    "printed indicial exponent, for both exponent signs",
        paper=f"+sqrt(dt) in recurrence: remainder {res_plus:.6e}",
        rederived=f"-sqrt(dt) in recurrence: remainder {res_minus:.6e}",
        residual_paper=res_plus,
        residual_rederived=res_minus,
        verdict="-sqrt(dt): the printed exponent value is the root of the "
                "decaying-sign relation",
        contract=True,
        tol=1e-12,
    )


def _entry_even_prefactor_sign(report):
    """Divergent vs decaying r^-2 exponential in the eigenfunction."""
    problem, n = _even_fixture()
    grid = GridSpec(0.2, 10.0, "log", 3000)
    rows = {}
    for mode in (evenpower.SignMode.NORMALIZABLE, evenpower.SignMode.PAPER):
        pre = evenpower.PrefactorExponents.from_problem(problem, mode)
        sol = evenpower.closed_form_energy(problem, pre, n, normalize=False)
        res = ode_residual(problem, sol.energy_physical,
                           lambda r: evenpower.radial_R(sol, pre, r), grid)
        rows[mode] = (sol, res)
    sol_n, res_n = rows[evenpower.SignMode.NORMALIZABLE]
    sol_p, res_p = rows[evenpower.SignMode.PAPER]
    report.add(
        name="evenpower-prefactor-sign",
        description="ODE residual of the closed-form eigenfunction with the "
                    "printed (growing) vs decaying r^-2 exponential prefactor",
        paper=f"exp(+sqrt(dt)/2 r^-2): residual {res_p:.3e}, non-normalizable",
        rederived=f"exp(-sqrt(dt)/2 r^-2): residual {res_n:.3e}, normalizable",
        residual_paper=res_p,
        residual_rederived=res_n,
        energies_agree=abs(sol_n.energy_physical - sol_p.energy_physical) < 1e-14,
        verdict="decaying exponents; both conventions give identical energies",
        contract=True,
        tol=RESIDUAL_CONTRACT,
    )


def _entry_even_oracle(report):
    """Closed-form even-power level against the oracle."""
    problem, n = _even_fixture()
    pre = evenpower.PrefactorExponents.from_problem(problem)
    sol = evenpower.closed_form_energy(problem, pre, n)
    orc = _oracle_or_unavailable(problem, n_eigs=n + 2)
    idx, nodes, gap = match_level(orc, sol.energy_physical)
    rel = gap / max(1.0, abs(sol.energy_physical))
    report.add(
        name="evenpower-oracle-agreement",
        description="constraint-consistent closed-form level vs the nearest "
                    "oracle eigenvalue (node counts must agree)",
        paper=f"E = {sol.energy_physical!r}",
        rederived=f"oracle E = {float(orc.eigenvalues[idx])!r}, nodes {nodes}",
        residual_rederived=rel,
        node_match=(nodes == n),
        verdict="closed form confirmed by the oracle",
        contract=True,
        tol=1e-4,
    )


def _entry_inv_moment_equations(report):
    """Published sigma moment equations vs direct power matching.

    On each convention's own quasi-exact parameter surface (feasible b along
    the b axis at theta = 0.01, a = -2, m = 1, degree 1) the accepted
    solution is checked against the ODE and the oracle."""
    a, theta, m, k = -2.0, 0.01, 1, 1
    out = {}
    for conv in (invpower.MomentConvention.REDERIVED,
                 invpower.MomentConvention.PAPER):
        b = invpower.solve_feasible_b(a, theta, m, k, conv)
        problem = deform(PotentialSpec(Family.INVERSE_POWER, a, b),
                         NCContext(theta, m))
        sols = [s for s in invpower.spectrum(problem, k, conv)
                if s.normalizable]
        sol = sols[0]
        res = ode_residual(problem, sol.energy_reduced,
                           lambda r: invpower.radial_R(sol, r))
        orc = _oracle_or_unavailable(problem, n_eigs=2)
        _, _, gap = match_level(orc, sol.energy_reduced)
        out[conv] = (b, sol, res, gap)
    b_r, sol_r, res_r, gap_r = out[invpower.MomentConvention.REDERIVED]
    b_p, sol_p, res_p, gap_p = out[invpower.MomentConvention.PAPER]
    report.add(
        name="invpower-moment-equations",
        description="published sigma moment equations vs direct power-of-r "
                    "matching, each on its own feasible-b surface",
        paper=f"b = {b_p:.8f}, E = {sol_p.energy_reduced:.10f}, "
              f"ODE residual {res_p:.2e}, oracle gap {gap_p:.2e}",
        rederived=f"b = {b_r:.8f}, E = {sol_r.energy_reduced:.10f}, "
                  f"ODE residual {res_r:.2e}, oracle gap {gap_r:.2e}",
        residual_paper=res_p,
        residual_rederived=res_r,
        oracle_gap_paper=gap_p,
        oracle_gap_rederived=gap_r,
        verdict="direct power matching: its solution satisfies the ODE and "
                "the oracle; the published moment equation's does not",
        contract=True,
        tol=RESIDUAL_CONTRACT,
    )


def _entry_inv_theta0_degeneracy(report):
    """At theta = 0 both moment-equation conventions coincide."""
    problem = deform(PotentialSpec(Family.INVERSE_POWER, -2.0, 0.5),
                     NCContext(0.0, 1))
    Es = {}
    for conv in (invpower.MomentConvention.PAPER,
                 invpower.MomentConvention.REDERIVED):
        sols = [s for s in invpower.spectrum(problem, 1, conv)
                if s.normalizable]
        Es[conv] = sorted(s.energy_reduced for s in sols)
    diff = max(abs(x - y) for x, y in
               zip(Es[invpower.MomentConvention.PAPER],
                   Es[invpower.MomentConvention.REDERIVED]))
    report.add(
        name="invpower-theta0-degeneracy",
        description="commutative limit: both conventions produce the same "
                    "degree-1 energies",
        paper=str(Es[invpower.MomentConvention.PAPER]),
        rederived=str(Es[invpower.MomentConvention.REDERIVED]),
        residual_paper=diff,
        residual_rederived=diff,
        verdict="degenerate",
        contract=True,
        tol=1e-12,
    )


def _entry_inv_omega_expansion(report):
    """Exact omega^2 vs its published first-order expansion (1/nu factor)."""
    a, theta, m, k = -2.0, 0.01, 1, 1
    b = invpower.solve_feasible_b(a, theta, m, k)
    problem = deform(PotentialSpec(Family.INVERSE_POWER, a, b),
                     NCContext(theta, m))
    sols = [s for s in invpower.spectrum(problem, k) if s.normalizable]
    ans = sols[0].ansatz
    rep = invpower.omega(problem, k, ans.lambda_param, ans.nu)
    report.add(
        name="invpower-omega-expansion",
        description="exact effective-frequency square vs its published "
                    "expansion carrying a 1/nu (order sqrt(theta)) term",
        paper=f"expanded omega^2 = {rep.expanded_squared!r}",
        rederived=f"exact omega^2 = {rep.value_squared!r}",
        residual_paper=rep.discrepancy,
        residual_rederived=0.0,
        verdict="exact combination used for energies; expansion reported for "
                "the sqrt(theta) scaling diagnostics only",
        contract=False,
    )


def _entry_inv_B_quadratic_sign(report):
    """Sign of the linear term in the closed-form root of the B quadratic."""
    problem = deform(PotentialSpec(Family.INVERSE_POWER, -2.0, 0.5),
                     NCContext(0.0, 1))
    sols = [s for s in invpower.spectrum(problem, 1)
            if s.normalizable
            and abs(s.ansatz.A - s.ansatz.sigma_sum) > 1e-8]  # non-degenerate
    sol = sols[0]
    ans = sol.ansatz
    rep = invpower.omega(problem, 1, ans.lambda_param, ans.nu)
    q = 4.0 * (ans.A - ans.sigma_sum)
    lin = problem.terms[-1] * (ans.nu + 2.0)

    def quad(B):
        return abs(q * B * B + 2.0 * rep.value * B - lin)

    root = math.sqrt(rep.value_squared + q * lin)
    printed = [(+rep.value + s * root) / q for s in (+1.0, -1.0)]
    corrected = [(-rep.value + s * root) / q for s in (+1.0, -1.0)]
    res_printed = min(quad(B) for B in printed)
    res_corr = min(quad(B) for B in corrected)
    report.add(
        name="invpower-B-root-sign",
        description="closed-form roots of the B quadratic: printed "
                    "(+omega +- sqrt)/q vs corrected (-omega +- sqrt)/q, "
                    "substituted back into the quadratic",
        paper=f"best printed-root residual {res_printed:.3e}",
        rederived=f"best corrected-root residual {res_corr:.3e}",
        residual_paper=res_printed,
        residual_rederived=res_corr,
        verdict="standard quadratic-formula signs (-omega +- sqrt)/q",
        contract=True,
        tol=1e-10,
    )


ENTRIES = [
    _entry_radial_reduction_sign,
    _entry_even_indicial_sign,
    _entry_even_prefactor_sign,
    _entry_even_oracle,
    _entry_inv_moment_equations,
    _entry_inv_theta0_degeneracy,
    _entry_inv_omega_expansion,
    _entry_inv_B_quadratic_sign,
]


def run_verify() -> VerifyReport:
    """Full convention-ledger run; row count equals len(ENTRIES)."""
    report = VerifyReport()
    for entry in ENTRIES:
        entry(report)
    for row in report.rows:
        if row.get("contract"):
            if not (row["residual_rederived"] <= row["tol"]):
                report.ok = False
                row["verdict"] += "  [CONTRACT FAILED]"
    return report


def render_text(report: VerifyReport) -> str:
    lines = []
    for row in report.rows:
        lines.append(f"== {row['name']} ==")
        lines.append(f"   {row['description']}")
        lines.append(f"   as printed : {row['paper']}")
        lines.append(f"   rederived  : {row['rederived']}")
        lines.append(f"   residuals  : printed {row['residual_paper']:.3e}  "
                     f"rederived {row['residual_rederived']:.3e}")
        lines.append(f"   verdict    : {row['verdict']}")
    lines.append(f"entries: {len(report.rows)}  "
                 f"status: {'ok' if report.ok else 'CONTRACT FAILED'}")
    return "\n".join(lines) + "\n"
