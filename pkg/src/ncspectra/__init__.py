"""Bound states of noncommutativity-deformed 2D central potentials."""

from .deformation import (
    DeformedRadialProblem,
    Family,
    NCContext,
    PotentialSpec,
    deform,
    deform_even_power,
    deform_inverse_power,
    effective_radial_ode,
)
from .oracle import GridSpec, OracleResult, match_level, ode_residual, solve_radial
from .sweep import (
    SplittingFit,
    SplittingReport,
    SweepRow,
    parse_csv,
    run_spectrum,
    run_sweep,
    to_csv,
    to_json,
)
from .verify import VerifyReport, run_verify

__all__ = [
    "SplittingFit",
    "SplittingReport",
    "SweepRow",
    "VerifyReport",
    "parse_csv",
    "run_spectrum",
    "run_sweep",
    "run_verify",
    "to_csv",
    "to_json",
    "DeformedRadialProblem",
    "Family",
    "NCContext",
    "PotentialSpec",
    "deform",
    "deform_even_power",
    "deform_inverse_power",
    "effective_radial_ode",
    "GridSpec",
    "OracleResult",
    "match_level",
    "ode_residual",
    "solve_radial",
]
