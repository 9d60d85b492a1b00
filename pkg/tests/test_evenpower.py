"""Even-power family: series closed form, truncation constraints, oracle
agreement and sign-convention behaviour."""

import math

import numpy as np
import pytest

from ncspectra import evenpower
from ncspectra.deformation import Family, NCContext, PotentialSpec, deform
from ncspectra.errors import (
    ConstraintViolated,
    DegenerateDeformation,
    SingularAttraction,
)
from ncspectra.oracle import GridSpec, match_level, ode_residual, solve_radial

A_COEF, C_COEF = 1.0, 1.0


def _fixture(theta, m, n, mode=evenpower.SignMode.NORMALIZABLE):
    b = evenpower.solve_constraint_b(A_COEF, C_COEF, theta, m, n, mode)
    problem = deform(PotentialSpec(Family.EVEN_POWER, A_COEF, b, C_COEF),
                     NCContext(theta, m))
    pre = evenpower.PrefactorExponents.from_problem(problem, mode)
    return problem, pre, b


def test_indicial_exponent_annihilates_lowest_relation():
    problem, pre, _ = _fixture(0.01, 1, 0)
    nu = evenpower.indicial_exponent(problem, pre)
    _, _, C0 = evenpower.recurrence_coeffs(problem, pre, nu, 0.0, 0)
    assert abs(C0) < 1e-14


def test_truncation_constraint_feasible_on_solved_b():
    problem, pre, _ = _fixture(0.01, 1, 1)
    rep = evenpower.solvability_constraint(problem, pre, 1)
    assert rep.feasible and rep.residual < 1e-8


def test_truncation_constraint_infeasible_off_surface():
    problem = deform(PotentialSpec(Family.EVEN_POWER, 1.0, 1.0, 1.0),
                     NCContext(0.01, 1))
    pre = evenpower.PrefactorExponents.from_problem(problem)
    rep = evenpower.solvability_constraint(problem, pre, 0)
    assert not rep.feasible
    with pytest.raises(ConstraintViolated):
        evenpower.closed_form_energy(problem, pre, 0)


def test_recurrence_closure():
    problem, pre, _ = _fixture(0.05, 2, 1)
    nu = evenpower.indicial_exponent(problem, pre)
    et = evenpower.closed_form_reduced_energy(problem, pre, 1)
    coeffs = evenpower.series_coeffs(problem, pre, nu, et, 1)
    res = evenpower.recurrence_closure_residual(problem, pre, nu, et, coeffs)
    assert res < 1e-12


@pytest.mark.parametrize("theta,m,n", [
    (0.01, 1, 0), (0.01, 1, 1), (0.01, 2, 0), (0.05, 1, 0), (0.05, 2, 1),
])
def test_closed_form_vs_oracle(theta, m, n):
    problem, pre, _ = _fixture(theta, m, n)
    sol = evenpower.closed_form_energy(problem, pre, n)
    grid = GridSpec(0.15, 14.0, "log", 4000)
    resid = ode_residual(problem, sol.energy_physical,
                         lambda r: evenpower.radial_R(sol, pre, r), grid)
    assert resid <= 1e-8
    orc = solve_radial(problem, n_eigs=n + 2)
    idx, nodes, gap = match_level(orc, sol.energy_physical)
    assert nodes == n
    assert gap / max(1.0, abs(sol.energy_physical)) <= 1e-4


def test_energy_spacing_is_4_sqrt_a():
    problem, pre, _ = _fixture(0.01, 1, 0)
    e = [evenpower.closed_form_reduced_energy(problem, pre, n)
         for n in range(4)]
    for lo, hi in zip(e, e[1:]):
        assert abs((hi - lo) - 4.0 * math.sqrt(A_COEF)) < 1e-12


def test_physical_minus_reduced_is_shift():
    problem, pre, _ = _fixture(0.01, 1, 0)
    sol = evenpower.closed_form_energy(problem, pre, 0)
    tm = problem.theta * problem.m
    assert abs((sol.energy_physical - sol.energy_reduced)
               - (A_COEF / 2.0) * tm) < 1e-15


def test_paper_mode_same_energy_flagged_nonnormalizable():
    problem, pre_n, b = _fixture(0.01, 1, 0)
    pre_p = evenpower.PrefactorExponents.from_problem(
        problem, evenpower.SignMode.PAPER)
    sol_n = evenpower.closed_form_energy(problem, pre_n, 0, normalize=False)
    sol_p = evenpower.closed_form_energy(problem, pre_p, 0, normalize=False)
    assert sol_n.energy_physical == sol_p.energy_physical
    assert pre_p.beta > 0 > pre_n.beta
    # printed sign diverges at the origin; decaying sign vanishes there
    r = np.array([0.05])
    big = evenpower.radial_R(sol_p, pre_p, r)[0]
    small = evenpower.radial_R(sol_n, pre_n, r)[0]
    assert abs(big) > abs(small)
    grid = GridSpec(0.2, 10.0, "log", 3000)
    res_p = ode_residual(problem, sol_p.energy_physical,
                         lambda rr: evenpower.radial_R(sol_p, pre_p, rr), grid)
    res_n = ode_residual(problem, sol_n.energy_physical,
                         lambda rr: evenpower.radial_R(sol_n, pre_n, rr), grid)
    assert res_n <= 1e-8 < res_p


def test_m_zero_reports_infeasible():
    problem = deform(PotentialSpec(Family.EVEN_POWER, 1.0, 1.0, 1.0),
                     NCContext(0.01, 0))
    pre = None
    with pytest.raises(DegenerateDeformation):
        pre = evenpower.PrefactorExponents.from_problem(problem)
        evenpower.indicial_exponent(problem, pre)


def test_theta_zero_degenerate():
    problem = deform(PotentialSpec(Family.EVEN_POWER, 1.0, 1.0, 1.0),
                     NCContext(0.0, 1))
    pre = evenpower.PrefactorExponents.from_problem(problem)
    with pytest.raises(DegenerateDeformation):
        evenpower.solvability_constraint(problem, pre, 0)


def test_negative_theta_m_refused():
    problem = deform(PotentialSpec(Family.EVEN_POWER, 1.0, 1.0, 1.0),
                     NCContext(0.01, -1))
    with pytest.raises(SingularAttraction):
        evenpower.PrefactorExponents.from_problem(problem)


def test_eigenfunction_normalized():
    problem, pre, _ = _fixture(0.01, 2, 0)
    sol = evenpower.closed_form_energy(problem, pre, 0)
    from scipy.integrate import quad
    norm, _ = quad(lambda r: evenpower.radial_R(sol, pre, r) ** 2,
                   0.0, np.inf, limit=200)
    assert abs(norm - 1.0) < 1e-8
