"""The five space-time source densities and their supports.

Cases (spherically symmetric, unnormalized; normalization cancels in the
correlation ratio):

    A  Gaussian ball, Gaussian time lapse      exp(-r^2/2R^2) exp(-t^2/2tau^2)
    B  spherical shell delta(r - R), Gaussian time lapse
    C  homogeneous sphere of radius R, Gaussian time lapse
    D  exponential ball, constant emission for t^2 < 3 tau^2
    E  expanding shock front: filled ball of radius Rdot*t for t > 0,
       one-sided Gaussian time profile exp(-t^2/tau^2)

Case E's time exponent is -t^2/tau^2 (not -t^2/2tau^2 as in A-C); both are
kept exactly as defined.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

from .kinematics import C_UM_PER_PS

__all__ = [
    "SourceCase",
    "Emission",
    "SourceSpec",
    "SpaceTimePoint",
    "DistributionalDensityError",
    "density",
    "radial_support",
    "time_support",
    "DENSITY_CUTOFF",
]

# Relative density level below which the support is treated as ended.
DENSITY_CUTOFF = 1e-12

# exp(-x^2/2) < 1e-12  for  x > _GAUSS_CUT;  exp(-x) < 1e-12 for x > _EXP_CUT
_GAUSS_CUT = math.sqrt(-2.0 * math.log(DENSITY_CUTOFF))  # ~7.4338
_EXP_CUT = -math.log(DENSITY_CUTOFF)                     # ~27.631


class SourceCase(str, Enum):
    A_GAUSSIAN = "A"
    B_SHELL = "B"
    C_SPHERE = "C"
    D_EXPONENTIAL = "D"
    E_EXPANDING_SHOCK = "E"


class Emission(str, Enum):
    CHAOTIC = "chaotic"
    COHERENT = "coherent"


class DistributionalDensityError(ValueError):
    """The shell density is a radial delta measure; it has no pointwise value."""


@dataclass(frozen=True)
class SourceSpec:
    """One source case with its parameters.

    R is the spatial extension (um, unused for case E), tau the time span
    (ps), r_dot the shock-front speed (um/ps, case E only).
    """

    case: SourceCase
    tau: float
    R: Optional[float] = None
    r_dot: Optional[float] = None
    emission: Emission = Emission.CHAOTIC

    def __post_init__(self):
        if not self.tau > 0.0:
            raise ValueError("tau must be positive")
        if self.case is SourceCase.E_EXPANDING_SHOCK:
            if self.r_dot is None or not self.r_dot > 0.0:
                raise ValueError("case E requires r_dot > 0")
            # non-relativistic shock front
            if not self.r_dot < 0.01 * C_UM_PER_PS:
                raise ValueError("case E requires r_dot << c (r_dot < 0.01 c)")
        else:
            if self.R is None or not self.R > 0.0:
                raise ValueError(f"case {self.case.value} requires R > 0")


@dataclass(frozen=True)
class SpaceTimePoint:
    """Radial coordinate r >= 0 (um) and time t (ps)."""

    r: float
    t: float

    def __post_init__(self):
        if self.r < 0.0:
            raise ValueError("r must be non-negative")


def density(spec: SourceSpec, p: SpaceTimePoint) -> float:
    """Unnormalized rho(r, t) for the given case.

    Case B raises DistributionalDensityError: the shell is handled through
    its radial measure, never pointwise.
    """
    r, t = p.r, p.t
    case = spec.case
    if case is SourceCase.A_GAUSSIAN:
        return math.exp(-r * r / (2.0 * spec.R * spec.R)
                        - t * t / (2.0 * spec.tau * spec.tau))
    if case is SourceCase.B_SHELL:
        raise DistributionalDensityError(
            "case B density is a delta shell; use its radial measure")
    if case is SourceCase.C_SPHERE:
        if r > spec.R:
            return 0.0
        return math.exp(-t * t / (2.0 * spec.tau * spec.tau))
    if case is SourceCase.D_EXPONENTIAL:
        if t * t > 3.0 * spec.tau * spec.tau:
            return 0.0
        return math.exp(-r / spec.R)
    # case E
    if t < 0.0 or r > spec.r_dot * t:
        return 0.0
    return math.exp(-t * t / (spec.tau * spec.tau))


def radial_support(spec: SourceSpec, t: float) -> Optional[Tuple[float, float]]:
    """Radial interval where the density exceeds DENSITY_CUTOFF of its peak at
    time t, or None if the density vanishes at that time."""
    case = spec.case
    if case is SourceCase.E_EXPANDING_SHOCK:
        if t <= 0.0:
            return None
        return (0.0, spec.r_dot * t)
    ts = time_support(spec)
    if not (ts[0] <= t <= ts[1]):
        return None
    if case is SourceCase.A_GAUSSIAN:
        return (0.0, _GAUSS_CUT * spec.R)
    if case is SourceCase.B_SHELL:
        return (spec.R, spec.R)
    if case is SourceCase.C_SPHERE:
        return (0.0, spec.R)
    # case D
    return (0.0, _EXP_CUT * spec.R)


def time_support(spec: SourceSpec) -> Tuple[float, float]:
    """Time interval outside which the density is below DENSITY_CUTOFF of peak
    (exactly zero for cases D and E's lower edge)."""
    case = spec.case
    if case is SourceCase.D_EXPONENTIAL:
        w = math.sqrt(3.0) * spec.tau
        return (-w, w)
    if case is SourceCase.E_EXPANDING_SHOCK:
        # exp(-t^2/tau^2) < cutoff for t > tau*sqrt(ln(1/cutoff))
        return (0.0, spec.tau * math.sqrt(_EXP_CUT))
    w = _GAUSS_CUT * spec.tau
    return (-w, w)
