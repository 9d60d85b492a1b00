"""Zeeman-style sweep reports: E(theta, m) tables, splitting slopes and the
measured scaling exponent of the deformation-induced shift.

Oracle energies are computed on one fixed grid per (family, m) so that
differences E(theta) - E(0) are far more accurate than the absolute
discretization error.  For the inverse-power family the published expansion
of the spectrum (the omega^2 formula with its 1/nu factor) is additionally
evaluated as a formula, so its O(sqrt(theta)) structure can be measured and
compared against the physical scaling.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .deformation import Family, NCContext, PotentialSpec, deform
from .errors import NCSpectraError
from .oracle import default_grid, solve_radial

CSV_SCHEMA = 1
CSV_HEADER = [
    "family", "theta", "m", "level", "mode",
    "E_oracle", "E_reduced_oracle", "E_closed", "closed_gap",
    "node_count", "oracle_verified", "residual", "status",
]


@dataclass
class SweepRow:
    family: str
    theta: float
    m: int
    level: int
    mode: str
    E_oracle: float
    E_reduced_oracle: float
    E_closed: float      # nan when no closed form applies
    closed_gap: float    # nan when no closed form applies
    node_count: int
    oracle_verified: bool
    residual: float
    status: str


@dataclass
class SplittingFit:
    family: str
    m: int
    source: str          # "oracle" or "formula"
    slope: float         # dE/d(theta*m), linear coefficient of the fit
    quad_bound: float    # quadratic coefficient of the fit
    fit_residual: float
    exponent: float      # measured scaling exponent of |E(theta)-E(0)|
    exponent_r2: float


@dataclass
class SplittingReport:
    rows: list = field(default_factory=list)
    fits: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)


def _fit_slope(tm, dE):
    """Least-squares dE = slope*(tm) + quad*(tm)^2."""
    X = np.column_stack([tm, tm ** 2])
    coef, res, _, _ = np.linalg.lstsq(X, dE, rcond=None)
    resid = float(np.max(np.abs(X @ coef - dE)))
    return float(coef[0]), float(coef[1]), resid


def fit_exponent(thetas, dE):
    """Scaling exponent p of |dE| ~ theta^p from a log-log regression,
    with the R^2 of that regression."""
    mask = (np.asarray(thetas) > 0) & (np.abs(dE) > 0)
    x = np.log(np.asarray(thetas)[mask])
    y = np.log(np.abs(np.asarray(dE)[mask]))
    if len(x) < 3:
        return math.nan, math.nan
    p, c = np.polyfit(x, y, 1)
    yhat = p * x + c
    ss_res = float(np.sum((y - yhat) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(p), r2


def _invpower_formula_energy(problem, degree):
    """Published closed-form chain for the inverse-power energy:
    A, C pinned by the theta terms, B from a = 2B(C+k), sigma_1 from the
    lambda identity, then the minus branch of the B quadratic with the
    expanded omega^2.  Evaluated as a formula regardless of whether the
    quasi-exact closure actually holds."""
    from .invpower import _params, omega, solve_B

    a, b, ct, dt, lam = _params(problem)
    A = -math.sqrt(abs(dt))
    C = 1.0 - ct / (2.0 * A) if A != 0.0 else 1.0
    k = degree
    B0 = a / (2.0 * (C + k))
    s1 = A - (C * (C + 2 * k - 1) + k * (k - 1) - lam) / (2.0 * B0)
    rep = omega(problem, k, lam, C - 1.0)
    w = math.sqrt(max(rep.expanded_squared, 0.0))
    roots = solve_B(A, s1, w, a, C - 1.0, k)
    # the physical branch stays continuous with B0; the other root blows up
    # when the quadratic's leading coefficient passes through zero
    B = min((roots.plus, roots.minus), key=lambda r: abs(r - B0))
    return -B * B


def run_sweep(family: Family, a, b, c, thetas, ms, level=0, degree=1,
              mode="rederived", n_eigs=None, grid_points=None):
    """E(theta, m) table plus splitting fits.

    Oracle level selection is by index within the m-sector (level = number of
    radial nodes).  Closed-form columns are attached when the respective
    solver accepts the parameters; otherwise the row carries a status.
    """
    thetas = sorted(set(float(t) for t in thetas))
    ms = sorted(set(int(m) for m in ms))
    report = SplittingReport(meta={
        "family": family.value, "a": a, "b": b, "c": c,
        "level": level, "degree": degree, "mode": mode,
    })
    n_eigs = n_eigs or (level + 3)
    base = {}
    for m in ms:
        # one grid per m, built at the largest theta, reused across the sweep
        spec = PotentialSpec(family, a, b, c if family is Family.EVEN_POWER else 0.0)
        ref_theta = max(thetas, key=abs)
        grid = default_grid(deform(spec, NCContext(ref_theta, m)),
                            n_eigs, points=grid_points)
        for theta in thetas:
            problem = deform(spec, NCContext(theta, m))
            status = "ok"
            E_closed = math.nan
            gap = math.nan
            resid = math.nan
            try:
                orc = solve_radial(problem, grid, n_eigs=n_eigs)
                E = float(orc.eigenvalues[level])
                nodes = int(orc.node_counts[level])
                verified = bool(orc.converged[level])
                resid = float(orc.residual_norms[level])
            except NCSpectraError as exc:
                report.rows.append(SweepRow(
                    family.value, theta, m, level, mode, math.nan, math.nan,
                    math.nan, math.nan, -1, False, math.nan,
                    type(exc).__name__))
                continue
            E_closed, gap, status = _closed_form_column(
                problem, family, level, degree, mode, E)
            base[(theta, m)] = E
            report.rows.append(SweepRow(
                family.value, theta, m, level, mode, E, E - problem.energy_shift,
                E_closed, gap, nodes, verified, resid, status))
    report.rows.sort(key=lambda r: (r.theta, r.m))

    for m in ms:
        if (0.0, m) not in base:
            continue
        ts = [t for t in thetas if t != 0.0 and (t, m) in base]
        if len(ts) < 3:
            continue
        dE = np.array([base[(t, m)] - base[(0.0, m)] for t in ts])
        tm = np.array([t * m for t in ts])
        slope, quad, fres = _fit_slope(tm, dE)
        expo, r2 = fit_exponent(ts, dE)
        report.fits.append(SplittingFit(
            family.value, m, "oracle", slope, quad, fres, expo, r2))
        if family is Family.INVERSE_POWER:
            spec = PotentialSpec(family, a, b)
            Ef = np.array([
                _invpower_formula_energy(deform(spec, NCContext(t, m)), degree)
                for t in ts])
            Ef0 = _invpower_formula_energy(
                deform(spec, NCContext(0.0, m)), degree)
            expo_f, r2_f = fit_exponent(ts, Ef - Ef0)
            slope_f, quad_f, fres_f = _fit_slope(tm, Ef - Ef0)
            report.fits.append(SplittingFit(
                family.value, m, "formula", slope_f, quad_f, fres_f,
                expo_f, r2_f))
    return report


def run_spectrum(family: Family, a, b, c, thetas, ms, n=0, degree=1,
                 mode="rederived", oracle_on=True, grid_points=None):
    """Closed-form spectrum rows, one per (theta, m) and level.

    The closed-form energy is the primary column; for the even-power family
    the residual column carries the truncation-constraint residual, so
    off-surface parameter sets still get a numeric formula value but a
    non-ok status.  The oracle columns are attached when enabled.  Solver
    failures become structured rows, never partial silent output.
    """
    from . import evenpower, invpower
    from .oracle import match_level

    rows = []
    for theta in sorted(set(float(t) for t in thetas)):
        for m in sorted(set(int(v) for v in ms)):
            spec = PotentialSpec(
                family, a, b, c if family is Family.EVEN_POWER else 0.0)
            try:
                problem = deform(spec, NCContext(theta, m))
            except NCSpectraError as exc:
                rows.append(SweepRow(family.value, theta, m, n, mode,
                                     math.nan, math.nan, math.nan, math.nan,
                                     -1, False, math.nan, type(exc).__name__))
                continue
            orc = None
            if oracle_on:
                try:
                    orc = solve_radial(problem, n_eigs=max(n, degree) + 2)
                except NCSpectraError:
                    orc = None
            if family is Family.EVEN_POWER:
                rows.append(_even_spectrum_row(problem, n, mode, orc))
            else:
                rows.extend(_inv_spectrum_rows(problem, degree, mode, orc))
    rows.sort(key=lambda r: (r.theta, r.m, r.level))
    report = SplittingReport(rows=rows, meta={
        "family": family.value, "a": a, "b": b, "c": c,
        "n": n, "degree": degree, "mode": mode,
        "oracle": "on" if oracle_on else "off",
    })
    _spectrum_fits(report)
    return report


def _even_spectrum_row(problem, n, mode, orc):
    from . import evenpower
    from .oracle import match_level

    m, theta = problem.m, problem.theta
    sign_mode = (evenpower.SignMode.PAPER if mode == "paper"
                 else evenpower.SignMode.NORMALIZABLE)
    E = math.nan
    resid = math.nan
    status = "ok"
    try:
        pre = evenpower.PrefactorExponents.from_problem(problem, sign_mode)
        report = evenpower.solvability_constraint(problem, pre, n)
        resid = report.residual
        if report.energy_reduced is None:
            status = "DegenerateDeformation"
        else:
            E = report.energy_reduced + problem.energy_shift
            if not report.feasible:
                status = "ConstraintViolated"
    except NCSpectraError as exc:
        status = type(exc).__name__
    E_orc = math.nan
    gap = math.nan
    nodes = -1
    verified = False
    if orc is not None and math.isfinite(E):
        idx, nodes, gap = match_level(orc, E)
        E_orc = float(orc.eigenvalues[idx])
        verified = bool(orc.converged[idx]) and nodes == n
    return SweepRow(problem.family.value, theta, m, n, mode, E_orc,
                    E_orc - problem.energy_shift, E, gap, nodes, verified,
                    resid, status)


def _inv_spectrum_rows(problem, degree, mode, orc):
    from . import invpower
    from .oracle import match_level

    m, theta = problem.m, problem.theta
    conv = (invpower.MomentConvention.PAPER if mode == "paper"
            else invpower.MomentConvention.REDERIVED)
    try:
        sols = invpower.spectrum(problem, degree, convention=conv)
    except NCSpectraError as exc:
        resid = getattr(exc, "best_residual", math.nan) or math.nan
        return [SweepRow(problem.family.value, theta, m, 0, mode,
                         math.nan, math.nan, math.nan, math.nan, -1, False,
                         resid, type(exc).__name__)]
    rows = []
    for level, sol in enumerate(sols):
        E = sol.energy_reduced
        resid = float(np.max(np.abs(sol.diagnostics["system_residuals"])))
        status = "ok" if sol.normalizable else "NonNormalizable"
        E_orc = math.nan
        gap = math.nan
        nodes = -1
        verified = False
        if orc is not None:
            idx, nodes, gap = match_level(orc, E)
            E_orc = float(orc.eigenvalues[idx])
            verified = bool(orc.converged[idx])
        rows.append(SweepRow(problem.family.value, theta, m, level, mode,
                             E_orc, E_orc, E, gap, nodes, verified, resid,
                             status))
    return rows


def _spectrum_fits(report: SplittingReport):
    """Slope of the closed-form energy against theta*m, per (m, level)."""
    keys = sorted(set((r.m, r.level) for r in report.rows))
    for m, level in keys:
        pts = [(r.theta * r.m, r.E_closed) for r in report.rows
               if r.m == m and r.level == level and math.isfinite(r.E_closed)]
        if len(pts) < 3 or len(set(p[0] for p in pts)) < 3:
            continue
        tm = np.array([p[0] for p in pts])
        E = np.array([p[1] for p in pts])
        X = np.column_stack([np.ones_like(tm), tm, tm ** 2])
        coef, _, _, _ = np.linalg.lstsq(X, E, rcond=None)
        fres = float(np.max(np.abs(X @ coef - E)))
        expo, r2 = fit_exponent(tm / m if m else tm, E - coef[0])
        report.fits.append(SplittingFit(
            report.meta["family"], m, f"closed-form level {level}",
            float(coef[1]), float(coef[2]), fres, expo, r2))


def _closed_form_column(problem, family, level, degree, mode, E_oracle):
    from . import evenpower, invpower
    from .errors import NCSpectraError

    try:
        if family is Family.EVEN_POWER:
            sign_mode = (evenpower.SignMode.PAPER if mode == "paper"
                         else evenpower.SignMode.NORMALIZABLE)
            pre = evenpower.PrefactorExponents.from_problem(problem, sign_mode)
            sol = evenpower.closed_form_energy(problem, pre, level)
            E_closed = sol.energy_physical
        else:
            conv = (invpower.MomentConvention.PAPER if mode == "paper"
                    else invpower.MomentConvention.REDERIVED)
            sols = invpower.spectrum(problem, degree, convention=conv)
            E_closed = min((s.energy_reduced for s in sols),
                           key=lambda e: abs(e - E_oracle))
        return E_closed, abs(E_closed - E_oracle), "ok"
    except NCSpectraError as exc:
        return math.nan, math.nan, type(exc).__name__


def _fmt(v):
    if isinstance(v, float):
        return "%.17g" % v
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def to_csv(report: SplittingReport, timestamp=None) -> str:
    buf = io.StringIO()
    buf.write(f"# schema={CSV_SCHEMA}\n")
    if timestamp:
        buf.write(f"# generated={timestamp}\n")
    for k in sorted(report.meta):
        buf.write(f"# {k}={_fmt(report.meta[k])}\n")
    buf.write(",".join(CSV_HEADER) + "\n")
    for row in report.rows:
        d = asdict(row)
        buf.write(",".join(_fmt(d[k]) for k in CSV_HEADER) + "\n")
    for fit in report.fits:
        d = asdict(fit)
        buf.write("# fit " + " ".join(f"{k}={_fmt(v)}" for k, v in d.items())
                  + "\n")
    return buf.getvalue()


def to_json(report: SplittingReport, timestamp=None) -> str:
    payload = {
        "schema": CSV_SCHEMA,
        "meta": report.meta,
        "rows": [asdict(r) for r in report.rows],
        "fits": [asdict(f) for f in report.fits],
    }
    if timestamp:
        payload["generated"] = timestamp
    return json.dumps(payload, indent=2, sort_keys=True, allow_nan=True) + "\n"


def parse_csv(text: str) -> SplittingReport:
    """Inverse of to_csv (rows and fits; metadata comments are kept raw)."""
    report = SplittingReport()
    header = None
    for line in text.splitlines():
        if line.startswith("# fit "):
            kv = dict(tok.split("=", 1) for tok in line[len("# fit "):].split())
            report.fits.append(SplittingFit(
                family=kv["family"], m=int(kv["m"]), source=kv["source"],
                slope=float(kv["slope"]), quad_bound=float(kv["quad_bound"]),
                fit_residual=float(kv["fit_residual"]),
                exponent=float(kv["exponent"]),
                exponent_r2=float(kv["exponent_r2"])))
        elif line.startswith("#"):
            continue
        elif header is None:
            header = line.split(",")
        elif line:
            vals = dict(zip(header, line.split(",")))
            report.rows.append(SweepRow(
                family=vals["family"], theta=float(vals["theta"]),
                m=int(vals["m"]), level=int(vals["level"]), mode=vals["mode"],
                E_oracle=float(vals["E_oracle"]),
                E_reduced_oracle=float(vals["E_reduced_oracle"]),
                E_closed=float(vals["E_closed"]),
                closed_gap=float(vals["closed_gap"]),
                node_count=int(vals["node_count"]),
                oracle_verified=vals["oracle_verified"] == "true",
                residual=float(vals["residual"]), status=vals["status"]))
    return report
