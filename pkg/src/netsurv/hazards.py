"""Hazard functions and the four-component mortality decomposition.

Total mortality for a cancer cohort is modelled as the sum of four
additive cause components:

    A  cancer-specific hazard
    B  baseline other-cause excess (health differences present at diagnosis)
    C  treatment-induced other-cause hazard
    D  general-population other-cause hazard

``ComponentModel`` carries the four pieces; the module-level functions
evaluate the derived quantities (total, excess = A+B+C, other-cause =
B+C+D, and the other-cause relative risk RR = 1 + (B+C)/D).

All times are in years.  Every object here is immutable and every
operation is a pure function, so evaluation is thread-safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import SingularEvaluationError, UndefinedRatioError, ValidationError

__all__ = [
    "HazardFunction",
    "WeibullHazard",
    "ConstantHazard",
    "ZeroHazard",
    "PiecewiseConstantHazard",
    "ComponentModel",
    "RelativeRiskProfile",
    "hazard_at",
    "cumulative_hazard",
    "survival_from",
    "total_hazard",
    "excess_hazard",
    "other_cause_hazard",
    "relative_risk",
]


def _as_times(t, what="time"):
    """Validate and shape a time argument; returns (1-d array, was_scalar)."""
    arr = np.asarray(t, dtype=np.float64)
    scalar = arr.ndim == 0
    flat = np.ascontiguousarray(np.atleast_1d(arr).ravel())
    if flat.size and not np.all(np.isfinite(flat)):
        raise ValidationError(f"{what} values must be finite")
    if flat.size and flat.min() < 0.0:
        raise ValidationError(f"{what} values must be nonnegative")
    return flat, scalar


def _shaped(values, template, scalar):
    if scalar:
        return float(values[0])
    return values.reshape(np.asarray(template).shape)


class HazardFunction:
    """Base class for nonnegative hazard rate functions h(t), t >= 0.

    Subclasses implement ``rate``, ``cumulative`` and ``inverse_cumulative``
    over 1-d float arrays; the public methods handle scalars and validation.
    """

    def rate(self, t):
        """Hazard rate h(t) (events/year)."""
        flat, scalar = _as_times(t)
        return _shaped(self._rate(flat), t, scalar)

    def cumulative(self, t):
        """Cumulative hazard H(t) = integral of h over [0, t]."""
        flat, scalar = _as_times(t)
        return _shaped(self._cumulative(flat), t, scalar)

    def survival(self, t):
        """exp(-H(t))."""
        flat, scalar = _as_times(t)
        return _shaped(np.exp(-self._cumulative(flat)), t, scalar)

    def inverse_cumulative(self, mass):
        """Smallest t with H(t) >= mass; +inf when the mass is unreachable.

        The workhorse of inverse-transform sampling: feed it an exponential
        deviate and it returns the corresponding event time.
        """
        flat, scalar = _as_times(mass, what="mass")
        return _shaped(self._invert(flat), mass, scalar)

    # subclass hooks, 1-d float64 in / out
    def _rate(self, t):
        raise NotImplementedError

    def _cumulative(self, t):
        raise NotImplementedError

    def _invert(self, mass):
        raise NotImplementedError


@dataclass(frozen=True)
class WeibullHazard(HazardFunction):
    """Weibull hazard h(t) = (shape/scale) * (t/scale)**(shape-1).

    shape < 1 is a valid parameterization whose rate diverges at t = 0;
    evaluating the rate there raises ``SingularEvaluationError`` rather than
    silently returning infinity.  The cumulative hazard (t/scale)**shape is
    finite everywhere and is what survival-level code consumes.
    """

    shape: float
    scale: float

    def __post_init__(self):
        if not (math.isfinite(self.shape) and self.shape > 0.0):
            raise ValidationError(f"weibull shape must be > 0, got {self.shape!r}")
        if not (math.isfinite(self.scale) and self.scale > 0.0):
            raise ValidationError(f"weibull scale must be > 0, got {self.scale!r}")

    def _rate(self, t):
        if self.shape < 1.0 and t.size and t.min() == 0.0:
            raise SingularEvaluationError(
                f"weibull rate with shape={self.shape} < 1 diverges at t = 0; "
                "use cumulative()/survival(), which stay finite"
            )
        return (self.shape / self.scale) * np.power(t / self.scale, self.shape - 1.0)

    def _cumulative(self, t):
        return np.power(t / self.scale, self.shape)

    def _invert(self, mass):
        return _kernels.weibull_invert(mass, self.shape, self.scale)


@dataclass(frozen=True)
class ConstantHazard(HazardFunction):
    """Time-constant hazard rate."""

    rate_per_year: float

    def __post_init__(self):
        if not (math.isfinite(self.rate_per_year) and self.rate_per_year >= 0.0):
            raise ValidationError(
                f"constant hazard rate must be finite and >= 0, got {self.rate_per_year!r}"
            )

    def _rate(self, t):
        return np.full_like(t, self.rate_per_year)

    def _cumulative(self, t):
        return self.rate_per_year * t

    def _invert(self, mass):
        return _kernels.constant_invert(mass, self.rate_per_year)


@dataclass(frozen=True)
class ZeroHazard(ConstantHazard):
    """The everywhere-zero hazard (an absent component)."""

    rate_per_year: float = 0.0

    def __post_init__(self):
        if self.rate_per_year != 0.0:
            raise ValidationError("ZeroHazard rate is fixed at 0; use ConstantHazard")


@dataclass(frozen=True)
class PiecewiseConstantHazard(HazardFunction):
    """Piecewise-constant hazard on left-closed intervals.

    ``breakpoints`` (strictly increasing, > 0) split [0, inf) into
    ``len(breakpoints) + 1`` intervals; ``rates`` gives one rate per
    interval and the final rate extends to +inf.  A breakpoint t belongs
    to the interval it opens, so rate(t) jumps *at* t.
    """

    breakpoints: tuple
    rates: tuple

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=np.float64)
        r = np.asarray(self.rates, dtype=np.float64)
        if bp.ndim != 1 or r.ndim != 1:
            raise ValidationError("breakpoints and rates must be 1-d sequences")
        if r.shape[0] != bp.shape[0] + 1:
            raise ValidationError(
                f"need len(rates) == len(breakpoints) + 1, got {r.shape[0]} rates "
                f"for {bp.shape[0]} breakpoints"
            )
        if bp.size and (not np.all(np.isfinite(bp)) or bp[0] <= 0.0):
            raise ValidationError("breakpoints must be finite and > 0")
        if bp.size > 1 and not np.all(np.diff(bp) > 0.0):
            raise ValidationError("breakpoints must be strictly increasing")
        if not np.all(np.isfinite(r)) or (r.size and r.min() < 0.0):
            raise ValidationError("rates must be finite and >= 0")
        # normalize to hashable tuples; keep arrays cached for the kernels
        object.__setattr__(self, "breakpoints", tuple(float(x) for x in bp))
        object.__setattr__(self, "rates", tuple(float(x) for x in r))
        object.__setattr__(self, "_bp", bp.copy())
        object.__setattr__(self, "_r", r.copy())

    def _rate(self, t):
        return _kernels.piecewise_rate(t, self._bp, self._r)

    def _cumulative(self, t):
        return _kernels.piecewise_cumhaz(t, self._bp, self._r)

    def _invert(self, mass):
        return _kernels.piecewise_invert(mass, self._bp, self._r)


@dataclass(frozen=True)
class ComponentModel:
    """The four additive cause-specific hazards of one modelled cohort."""

    cancer: HazardFunction
    baseline_excess: HazardFunction
    treatment_excess: HazardFunction
    population: HazardFunction

    def __post_init__(self):
        for name in ("cancer", "baseline_excess", "treatment_excess", "population"):
            h = getattr(self, name)
            if not isinstance(h, HazardFunction):
                raise ValidationError(f"{name} must be a HazardFunction, got {type(h).__name__}")

    @property
    def components(self):
        """The four hazards as an (A, B, C, D) tuple."""
        return (self.cancer, self.baseline_excess, self.treatment_excess, self.population)

    def total(self, t):
        return self.cancer.rate(t) + self.baseline_excess.rate(t) \
            + self.treatment_excess.rate(t) + self.population.rate(t)

    def excess(self, t):
        """A + B + C: everything beyond general-population mortality."""
        return self.cancer.rate(t) + self.baseline_excess.rate(t) \
            + self.treatment_excess.rate(t)

    def other_cause(self, t):
        """B + C + D: all non-cancer mortality experienced by the cohort."""
        return self.baseline_excess.rate(t) + self.treatment_excess.rate(t) \
            + self.population.rate(t)

    def relative_risk(self, t):
        """Other-cause mortality relative to the general population.

        RR(t) = (B + C + D) / D.  Undefined wherever the population hazard
        is zero — that is an error, not +inf, because it means the life
        table (or its stand-in) has no mortality to compare against.
        """
        d = self.population.rate(t)
        if np.any(np.asarray(d) == 0.0):
            raise UndefinedRatioError(
                "relative risk is undefined where the population hazard is 0"
            )
        return self.other_cause(t) / d


@dataclass(frozen=True)
class RelativeRiskProfile:
    """Evaluable RR(t) diagnostic for a ComponentModel."""

    model: ComponentModel

    def rr_at(self, t):
        return self.model.relative_risk(t)

    def on_grid(self, grid):
        return np.asarray(self.rr_at(np.asarray(grid, dtype=np.float64)))


# Functional aliases mirroring the operation vocabulary used elsewhere.

def hazard_at(h: HazardFunction, t):
    return h.rate(t)


def cumulative_hazard(h: HazardFunction, t):
    return h.cumulative(t)


def survival_from(h: HazardFunction, t):
    return h.survival(t)


def total_hazard(m: ComponentModel, t):
    return m.total(t)


def excess_hazard(m: ComponentModel, t):
    return m.excess(t)


def other_cause_hazard(m: ComponentModel, t):
    return m.other_cause(t)


def relative_risk(m: ComponentModel, t):
    return m.relative_risk(t)
