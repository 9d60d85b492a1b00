"""Bopp-shift deformation of 2D central potentials.

Turns an undeformed potential plus a noncommutativity parameter theta and an
angular quantum number m into an effective radial problem.  Units: hbar = 2*mu = 1.
The angular momentum operator is replaced by its eigenvalue m at deformation
time, so every m-sector is a scalar radial ODE

    R''(r) + [Etilde - V(r) - (m^2 - 1/4)/r^2] R(r) = 0,

with Etilde = E - energy_shift and V given by an integer power -> coefficient map.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import InvalidFamily, NonConfining


class Family(Enum):
    EVEN_POWER = "even"        # a r^2 + b r^-2 + c r^-4
    INVERSE_POWER = "inverse"  # a r^-1 + b r^-2


@dataclass(frozen=True)
class PotentialSpec:
    """Undeformed central potential: family tag plus raw coefficients."""

    family: Family
    a: float
    b: float
    c: float = 0.0

    def __post_init__(self):
        if self.family is Family.INVERSE_POWER and self.c != 0.0:
            raise InvalidFamily("inverse-power family has no c coefficient")


@dataclass(frozen=True)
class NCContext:
    """Noncommutativity parameter (area units) and angular quantum number.

    theta of either sign is permitted; only the product theta*m enters the
    deformed coefficients.  Smallness of theta (first-order validity) is the
    caller's responsibility.
    """

    theta: float
    m: int

    def __post_init__(self):
        if self.m != int(self.m):
            raise ValueError("m must be an integer")


@dataclass(frozen=True)
class DeformedRadialProblem:
    """Effective radial ODE data after deformation.

    terms maps integer powers of r to real coefficients.  energy_shift is the
    constant (a/2)*theta*m folded out of the even-power potential so that both
    the physical energy E and the reduced energy Etilde = E - shift are
    reportable.
    """

    family: Family
    terms: dict = field(default_factory=dict)
    energy_shift: float = 0.0
    m: int = 0
    theta: float = 0.0

    @property
    def centrifugal(self) -> float:
        return self.m ** 2 - 0.25

    def potential(self, r):
        """V(r) from the power map (centrifugal term not included)."""
        v = 0.0
        for p, coeff in self.terms.items():
            v = v + coeff * r ** p
        return v

    def coefficient(self, r, E):
        """Coefficient function of the standard-form ODE R'' + coeff(r) R = 0."""
        etilde = E - self.energy_shift
        return etilde - self.potential(r) - self.centrifugal / r ** 2


def deform_even_power(spec: PotentialSpec, ctx: NCContext) -> DeformedRadialProblem:
    """Deform V = a r^2 + b r^-2 + c r^-4.

    The deformed potential picks up a constant (a/2)*theta*m (returned as
    energy_shift), a correction (b/4)*theta*m to the r^-4 coefficient and a new
    r^-6 term (c/2)*theta*m.
    """
    if spec.family is not Family.EVEN_POWER:
        raise InvalidFamily(f"expected even-power spec, got {spec.family}")
    if spec.a <= 0:
        raise NonConfining("even-power well requires a > 0")
    tm = ctx.theta * ctx.m
    terms = {
        2: spec.a,
        -2: spec.b,
        -4: spec.c + (spec.b / 4.0) * tm,
        -6: (spec.c / 2.0) * tm,
    }
    return DeformedRadialProblem(
        family=Family.EVEN_POWER,
        terms=terms,
        energy_shift=(spec.a / 2.0) * tm,
        m=ctx.m,
        theta=ctx.theta,
    )


def deform_inverse_power(spec: PotentialSpec, ctx: NCContext) -> DeformedRadialProblem:
    """Deform V = a r^-1 + b r^-2.

    New singular terms: a dipole-like r^-3 piece (a/2)*theta*m and an
    ion-neutral-like r^-4 piece (b/4)*theta*m.  No constant shift appears.
    """
    if spec.family is not Family.INVERSE_POWER:
        raise InvalidFamily(f"expected inverse-power spec, got {spec.family}")
    tm = ctx.theta * ctx.m
    terms = {
        -1: spec.a,
        -2: spec.b,
        -3: (spec.a / 2.0) * tm,
        -4: (spec.b / 4.0) * tm,
    }
    return DeformedRadialProblem(
        family=Family.INVERSE_POWER,
        terms=terms,
        energy_shift=0.0,
        m=ctx.m,
        theta=ctx.theta,
    )


def deform(spec: PotentialSpec, ctx: NCContext) -> DeformedRadialProblem:
    if spec.family is Family.EVEN_POWER:
        return deform_even_power(spec, ctx)
    return deform_inverse_power(spec, ctx)


def effective_radial_ode(problem: DeformedRadialProblem, E: float):
    """Return the coefficient function r -> Etilde - V(r) - (m^2-1/4)/r^2."""
    return lambda r: problem.coefficient(r, E)
