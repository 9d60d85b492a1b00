"""Closed-form spectrum of the deformed even-power family.

The deformed radial problem  R'' + [Etilde - a r^2 - b r^-2 - ct r^-4
- dt r^-6 - (m^2-1/4)/r^2] R = 0  is attacked with the quasi-exactly-solvable
ansatz

    R(r) = exp(alpha/2 r^2 + beta/2 r^-2) * sum_k ak r^{2k + nu},

with alpha^2 = a and beta^2 = |dt|.  Matching powers of r yields a three-term
recurrence  A_n a_n + B_{n+1} a_{n+1} + C_{n+2} a_{n+2} = 0.  Termination of
the series at level n requires A_n = 0 (which fixes the energy) plus one
chained condition a_{n+1} = 0 that pins one potential parameter; only such
constraint-consistent parameter sets carry exact levels.

Two sign conventions are exposed.  The rederived (normalizable) one uses
decaying exponents alpha = -sqrt(a), beta = -sqrt(|dt|); the paper-printed one
stores beta = +sqrt(|dt|) in the prefactor, which diverges at the origin and
is flagged non-normalizable.  Both give the same indicial exponent
nu = 3/2 + ct/(2 sqrt(|dt|)) and the same energies

    Etilde_n = sqrt(a) (4 + 2*gamma + 4n),    E = Etilde + (a/2) theta m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .deformation import DeformedRadialProblem, Family
from .errors import (
    ConstraintViolated,
    DegenerateDeformation,
    InvalidFamily,
    SingularAttraction,
)


class SignMode(Enum):
    PAPER = "paper"
    NORMALIZABLE = "rederived"


@dataclass(frozen=True)
class PrefactorExponents:
    alpha: float
    beta: float
    sign_mode: SignMode

    @classmethod
    def from_problem(cls, problem: DeformedRadialProblem,
                     mode: SignMode = SignMode.NORMALIZABLE):
        if problem.family is not Family.EVEN_POWER:
            raise InvalidFamily("even-power prefactor requires an even-power problem")
        a2 = problem.terms[2]
        dt = problem.terms.get(-6, 0.0)
        if dt < 0.0:
            raise SingularAttraction(
                "r^-6 coefficient is negative (theta*m < 0): no bound spectrum"
            )
        beta = math.sqrt(dt)
        if mode is SignMode.NORMALIZABLE:
            beta = -beta
        return cls(alpha=-math.sqrt(a2), beta=beta, sign_mode=mode)

    @property
    def beta_rec(self):
        """Exponent sign actually consistent with the recurrence and with a
        decaying prefactor at the origin (both modes share it)."""
        return -abs(self.beta)


def recurrence_coeffs(problem, pre: PrefactorExponents, nu, etilde, n):
    """Coefficients (A_n, B_n, C_n) of the three-term recurrence.

    Indexing: the power-matching relation at series level n reads
    A_n a_n + B_{n+1} a_{n+1} + C_{n+2} a_{n+2} = 0.
    """
    b = problem.terms.get(-2, 0.0)
    ct = problem.terms.get(-4, 0.0)
    lamc = problem.centrifugal
    alpha, beta = pre.alpha, pre.beta_rec
    A = etilde + alpha * (1.0 + 2.0 * nu + 4.0 * n)
    B = (nu + 2.0 * n) * (nu + 2.0 * n - 1.0) - b - 2.0 * alpha * beta - lamc
    C = beta * (3.0 - 2.0 * nu - 4.0 * n) - ct
    return A, B, C


def indicial_exponent(problem, pre: PrefactorExponents):
    """Root nu of C_0 = 0: nu = 3/2 + ct/(2 sqrt(|dt|))."""
    dt = problem.terms.get(-6, 0.0)
    if dt == 0.0:
        raise DegenerateDeformation(
            "r^-6 coefficient vanishes; series closed form inapplicable"
        )
    ct = problem.terms.get(-4, 0.0)
    gamma = ct / (2.0 * math.sqrt(abs(dt)))
    return 1.5 + gamma


def series_coeffs(problem, pre, nu, etilde, n_terms):
    """Forward recurrence for a_0 .. a_{n_terms}, a_0 = 1."""
    a = np.zeros(n_terms + 1)
    a[0] = 1.0
    if n_terms >= 1:
        _, B0, _ = recurrence_coeffs(problem, pre, nu, etilde, 0)
        _, _, C1 = recurrence_coeffs(problem, pre, nu, etilde, 1)
        a[1] = -B0 * a[0] / C1
    for j in range(n_terms - 1):
        Aj, _, _ = recurrence_coeffs(problem, pre, nu, etilde, j)
        _, Bj1, _ = recurrence_coeffs(problem, pre, nu, etilde, j + 1)
        _, _, Cj2 = recurrence_coeffs(problem, pre, nu, etilde, j + 2)
        a[j + 2] = -(Aj * a[j] + Bj1 * a[j + 1]) / Cj2
    return a


def recurrence_closure_residual(problem, pre, nu, etilde, coeffs):
    """Max |A_n a_n + B a_{n+1} + C a_{n+2}| over all levels, padded with
    zeros past the truncation, relative to the largest coefficient."""
    padded = np.concatenate([np.asarray(coeffs, dtype=float), [0.0, 0.0]])
    worst = 0.0
    for n in range(len(padded) - 2):
        An, _, _ = recurrence_coeffs(problem, pre, nu, etilde, n)
        _, Bn1, _ = recurrence_coeffs(problem, pre, nu, etilde, n + 1)
        _, _, Cn2 = recurrence_coeffs(problem, pre, nu, etilde, n + 2)
        worst = max(worst, abs(An * padded[n] + Bn1 * padded[n + 1]
                               + Cn2 * padded[n + 2]))
    return worst / np.max(np.abs(padded))


@dataclass
class SolvabilityReport:
    n: int
    conditions: list
    residual: float
    feasible: bool
    energy_reduced: float = None
    reason: str = ""


def closed_form_reduced_energy(problem, pre, n):
    nu = indicial_exponent(problem, pre)
    return -pre.alpha * (1.0 + 2.0 * nu + 4.0 * n)


def solvability_constraint(problem, pre, n, tol=1e-8) -> SolvabilityReport:
    """Do the supplied parameters admit an exact degree-n truncation?

    The conditions are A_n = 0 (imposed here through the closed-form energy)
    plus the chained requirement that the forward recurrence annihilates
    a_{n+1}; all higher coefficients then vanish automatically.  For m = 0 the
    deformation-induced r^-6 term vanishes and no such level exists (the
    s-level exclusion); this is reported as infeasible rather than raised.
    """
    conditions = [f"A_{n}(Etilde) = 0",
                  f"a_{n + 1} = 0 under the forward recurrence"]
    if problem.theta == 0.0:
        raise DegenerateDeformation("theta = 0: no r^-6 term, closed form inapplicable")
    try:
        nu = indicial_exponent(problem, pre)
    except DegenerateDeformation:
        return SolvabilityReport(n, conditions, math.inf, False,
                                 reason="degenerate deformation (theta*m*c = 0)")
    etilde = closed_form_reduced_energy(problem, pre, n)
    a = series_coeffs(problem, pre, nu, etilde, n + 2)
    residual = float(np.max(np.abs(a[n + 1:])) / np.max(np.abs(a[:n + 1])))
    return SolvabilityReport(n, conditions, residual, residual <= tol,
                             energy_reduced=etilde)


def constraint_residual_in_b(a, c, theta, m, n, b,
                             mode: SignMode = SignMode.NORMALIZABLE):
    """Signed residual a_{n+1}(b) of the chained truncation condition."""
    from .deformation import NCContext, PotentialSpec, deform_even_power

    spec = PotentialSpec(Family.EVEN_POWER, a, b, c)
    problem = deform_even_power(spec, NCContext(theta, m))
    pre = PrefactorExponents.from_problem(problem, mode)
    nu = indicial_exponent(problem, pre)
    etilde = closed_form_reduced_energy(problem, pre, n)
    coeffs = series_coeffs(problem, pre, nu, etilde, n + 1)
    return float(coeffs[n + 1] / np.max(np.abs(coeffs[:n + 1])))


def solve_constraint_b(a, c, theta, m, n, mode=SignMode.NORMALIZABLE,
                       b_lo=-50.0, b_hi=500.0, samples=400):
    """Scalar root-solve for the b value making degree-n truncation exact."""
    bs = np.linspace(b_lo, b_hi, samples)
    vals = np.array([constraint_residual_in_b(a, c, theta, m, n, b, mode)
                     for b in bs])
    for i in range(len(bs) - 1):
        if np.isfinite(vals[i]) and np.isfinite(vals[i + 1]) \
                and vals[i] * vals[i + 1] < 0:
            return brentq(
                lambda b: constraint_residual_in_b(a, c, theta, m, n, b, mode),
                bs[i], bs[i + 1], xtol=1e-14, rtol=8.9e-16)
    raise ConstraintViolated(
        f"no b in [{b_lo}, {b_hi}] satisfies the degree-{n} truncation chain"
    )


@dataclass
class SeriesSolution:
    nu: float
    gamma: float
    coeffs: np.ndarray
    n: int
    energy_reduced: float
    energy_physical: float
    m: int
    sign_mode: SignMode
    diagnostics: dict = field(default_factory=dict)


def closed_form_energy(problem, pre, n, tol=1e-8, normalize=True) -> SeriesSolution:
    """Exact level-n solution for constraint-consistent parameters.

    energy_reduced follows Etilde = sqrt(a)(4 + 2 gamma + 4 n); the physical
    energy adds the constant shift (a/2) theta m.  a_0 is fixed by a unit
    L^2 norm of R on (0, inf).
    """
    report = solvability_constraint(problem, pre, n, tol)
    if not report.feasible:
        if report.energy_reduced is None:
            raise DegenerateDeformation(report.reason)
        raise ConstraintViolated(
            f"truncation residual {report.residual:.3e} exceeds {tol:.1e}"
        )
    nu = indicial_exponent(problem, pre)
    ct = problem.terms.get(-4, 0.0)
    dt = problem.terms.get(-6, 0.0)
    gamma = ct / (2.0 * math.sqrt(abs(dt)))
    etilde = report.energy_reduced
    coeffs = series_coeffs(problem, pre, nu, etilde, n)
    closure = recurrence_closure_residual(problem, pre, nu, etilde, coeffs)

    diag = {
        "constraint_residual": report.residual,
        "closure_residual": closure,
    }
    if n == 1:
        b = problem.terms.get(-2, 0.0)
        tm = problem.theta * problem.m
        c_raw = ct - (b / 4.0) * tm
        a2 = problem.terms[2]
        diag["lambda_tilde"] = c_raw / math.sqrt(abs(dt))
        diag["delta"] = b / math.sqrt(a2)
        # paper's split of E_1: sqrt(a)(8 + lambda_tilde) + (a/4)(2+delta) theta m
        diag["display_reduced"] = math.sqrt(a2) * (8.0 + diag["lambda_tilde"])
        diag["display_shift"] = (a2 / 4.0) * (2.0 + diag["delta"]) * tm

    sol = SeriesSolution(
        nu=nu, gamma=gamma, coeffs=coeffs, n=n,
        energy_reduced=etilde,
        energy_physical=etilde + problem.energy_shift,
        m=problem.m, sign_mode=pre.sign_mode, diagnostics=diag,
    )
    if normalize and pre.sign_mode is SignMode.NORMALIZABLE:
        norm2, _ = quad(lambda r: radial_R(sol, pre, r) ** 2, 0.0, np.inf,
                        limit=200)
        sol.coeffs = coeffs / math.sqrt(norm2)
        sol.diagnostics["l2_norm_check"] = norm2
    return sol


def eigenfunction(solution: SeriesSolution, pre: PrefactorExponents, r):
    """Radial profile of the wavefunction, psi = profile(r) * e^{i m phi}:
    (sum a_k r^{2k}) r^{nu - 1/2} exp(alpha/2 r^2 + beta/2 r^-2).

    With paper-printed exponent signs (beta > 0) the result diverges at the
    origin and is not square integrable.
    """
    r = np.asarray(r, dtype=float)
    poly = np.zeros_like(r)
    for k, ak in enumerate(solution.coeffs):
        poly = poly + ak * r ** (2 * k)
    expo = 0.5 * pre.alpha * r ** 2 + 0.5 * pre.beta * r ** (-2)
    return poly * r ** (solution.nu - 0.5) * np.exp(expo)


def radial_R(solution: SeriesSolution, pre: PrefactorExponents, r):
    """Reduced radial function R(r) = r^{1/2} * eigenfunction profile."""
    r = np.asarray(r, dtype=float)
    return np.sqrt(r) * eigenfunction(solution, pre, r)
