"""Closed-form survival estimands over a ComponentModel.

Five estimands, distinguished only by which hazard components they keep:

    overall                exp(-(A+B+C+D))   what patients experience
    net                    exp(-(A+B+C))     population mortality removed
    disease_attributable   exp(-(A+C))       deaths the disease causes
    disease_specific       exp(-A)           disease progression alone
    cause_specific         exp(-(A+f*C))     death-certificate coding keeps
                                             an unknown fraction f of C

Scenario builders express the excess components as a multiple of the
population hazard: given a target other-cause relative risk ``rr`` and an
allocation fraction ``frac_c``, the treatment-induced rate is
frac_c*(rr-1)*h_d and the baseline-excess rate is (1-frac_c)*(rr-1)*h_d.
The net-vs-disease-specific gap then depends on rr only, not on the
allocation, because the summed excess is the same.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .hazards import (
    ComponentModel,
    ConstantHazard,
    WeibullHazard,
    ZeroHazard,
)

__all__ = [
    "EstimandKind",
    "ScenarioSpec",
    "EstimandCurve",
    "GapCurve",
    "ScenarioClassification",
    "build_scenario",
    "survival",
    "survival_overall",
    "survival_net",
    "survival_disease_attributable",
    "survival_disease_specific",
    "survival_cause_specific",
    "estimand_curve",
    "gap_curve",
    "scenario_table",
    "default_grid",
    "RR_GRID",
]

#: RR values used by the stock scenario sweep.
RR_GRID = (1.0, 1.5, 2.0, 3.0, 4.0)


class EstimandKind(enum.Enum):
    """Named estimands and the hazard components each one retains."""

    OVERALL = "overall"
    NET = "net"
    DISEASE_ATTRIBUTABLE = "disease_attributable"
    DISEASE_SPECIFIC = "disease_specific"
    CAUSE_SPECIFIC = "cause_specific"

    @property
    def components(self) -> str:
        return _COMPONENTS[self]


_COMPONENTS = {
    EstimandKind.OVERALL: "A+B+C+D",
    EstimandKind.NET: "A+B+C",
    EstimandKind.DISEASE_ATTRIBUTABLE: "A+C",
    EstimandKind.DISEASE_SPECIFIC: "A",
    EstimandKind.CAUSE_SPECIFIC: "A+some C",
}


def _coerce_kind(kind) -> EstimandKind:
    if isinstance(kind, EstimandKind):
        return kind
    try:
        return EstimandKind(str(kind))
    except ValueError:
        valid = ", ".join(k.value for k in EstimandKind)
        raise ValidationError(f"unknown estimand kind {kind!r}; expected one of: {valid}") from None


@dataclass(frozen=True)
class ScenarioSpec:
    """Parameters of one analytic scenario.

    Defaults give the stock cohort: Weibull(1.5, 5.3) disease hazard
    (40% disease-specific survival at 5 years) over a constant population
    rate of 0.025/year, with excess split evenly between the baseline and
    treatment components.
    """

    rr: float
    frac_c: float = 0.5
    h_d_rate: float = 0.025
    cancer_shape: float = 1.5
    cancer_scale: float = 5.3

    def __post_init__(self):
        if not self.rr >= 1.0:
            raise ValidationError(f"rr must be >= 1, got {self.rr!r}")
        if not 0.0 <= self.frac_c <= 1.0:
            raise ValidationError(f"frac_c must be in [0, 1], got {self.frac_c!r}")
        if not self.h_d_rate > 0.0:
            raise ValidationError(f"h_d_rate must be > 0, got {self.h_d_rate!r}")
        if not self.cancer_shape > 0.0 or not self.cancer_scale > 0.0:
            raise ValidationError("cancer_shape and cancer_scale must be > 0")

    @property
    def treatment_rate(self) -> float:
        return self.frac_c * (self.rr - 1.0) * self.h_d_rate

    @property
    def baseline_rate(self) -> float:
        return (1.0 - self.frac_c) * (self.rr - 1.0) * self.h_d_rate


def build_scenario(spec: ScenarioSpec) -> ComponentModel:
    """Materialize a ScenarioSpec as a ComponentModel.

    The result's relative risk equals ``spec.rr`` at every t by
    construction: (b + c + d)/d = 1 + (rr-1) = rr.
    """

    def const(rate):
        return ZeroHazard() if rate == 0.0 else ConstantHazard(rate)

    return ComponentModel(
        cancer=WeibullHazard(spec.cancer_shape, spec.cancer_scale),
        baseline_excess=const(spec.baseline_rate),
        treatment_excess=const(spec.treatment_rate),
        population=ConstantHazard(spec.h_d_rate),
    )


def survival_disease_specific(m: ComponentModel, t):
    return np.exp(-m.cancer.cumulative(t))


def survival_disease_attributable(m: ComponentModel, t):
    return np.exp(-(m.cancer.cumulative(t) + m.treatment_excess.cumulative(t)))


def survival_net(m: ComponentModel, t):
    return np.exp(
        -(
            m.cancer.cumulative(t)
            + m.baseline_excess.cumulative(t)
            + m.treatment_excess.cumulative(t)
        )
    )


def survival_overall(m: ComponentModel, t):
    return np.exp(
        -(
            m.cancer.cumulative(t)
            + m.baseline_excess.cumulative(t)
            + m.treatment_excess.cumulative(t)
            + m.population.cumulative(t)
        )
    )


def survival_cause_specific(m: ComponentModel, t, coded_fraction: float = 0.0):
    """Survival under certificate-coded disease deaths: A plus a coded
    fraction of C.  How much of C ends up coded to the disease depends on
    local attribution practice, so the fraction is an explicit parameter;
    the default 0 gives the disease-specific curve."""
    if not 0.0 <= coded_fraction <= 1.0:
        raise ValidationError(f"coded_fraction must be in [0, 1], got {coded_fraction!r}")
    return np.exp(
        -(m.cancer.cumulative(t) + coded_fraction * m.treatment_excess.cumulative(t))
    )


def survival(m: ComponentModel, kind, t, coded_fraction: float = 0.0):
    """Dispatch on EstimandKind (or its string value)."""
    kind = _coerce_kind(kind)
    if kind is EstimandKind.OVERALL:
        return survival_overall(m, t)
    if kind is EstimandKind.NET:
        return survival_net(m, t)
    if kind is EstimandKind.DISEASE_ATTRIBUTABLE:
        return survival_disease_attributable(m, t)
    if kind is EstimandKind.DISEASE_SPECIFIC:
        return survival_disease_specific(m, t)
    return survival_cause_specific(m, t, coded_fraction)


def default_grid(stop: float = 10.0, step: float = 0.01):
    """The stock evaluation grid: [0, stop] in steps of ``step``."""
    n = int(round(stop / step))
    return np.linspace(0.0, stop, n + 1)


@dataclass(frozen=True)
class EstimandCurve:
    kind: EstimandKind
    time_grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.time_grid, dtype=np.float64)
        vals = np.asarray(self.values, dtype=np.float64)
        if grid.shape != vals.shape or grid.ndim != 1:
            raise ValidationError("time_grid and values must be 1-d and equal length")
        if grid.size == 0 or grid[0] != 0.0:
            raise ValidationError("time_grid must start at 0")
        if np.any(np.diff(grid) <= 0.0):
            raise ValidationError("time_grid must be strictly ascending")
        # tolerate sub-ulp wobble from libm pow, nothing more
        if vals[0] != 1.0 or np.any(np.diff(vals) > 1e-12):
            raise ValidationError("survival values must start at 1 and be nonincreasing")
        object.__setattr__(self, "time_grid", grid)
        object.__setattr__(self, "values", vals)


def estimand_curve(m: ComponentModel, kind, grid=None, coded_fraction: float = 0.0):
    kind = _coerce_kind(kind)
    grid = default_grid() if grid is None else np.asarray(grid, dtype=np.float64)
    return EstimandCurve(kind, grid, survival(m, kind, grid, coded_fraction))


@dataclass(frozen=True)
class GapCurve:
    """Pointwise difference between two estimands, in percentage points."""

    kind_a: EstimandKind
    kind_b: EstimandKind
    time_grid: np.ndarray
    gap_pp: np.ndarray
    max_gap_pp: float = field(init=False)
    argmax_time: float = field(init=False)

    def __post_init__(self):
        idx = int(np.argmax(self.gap_pp))
        object.__setattr__(self, "max_gap_pp", float(self.gap_pp[idx]))
        object.__setattr__(self, "argmax_time", float(self.time_grid[idx]))


def gap_curve(m: ComponentModel, kind_a, kind_b, grid=None) -> GapCurve:
    """kind_a minus kind_b on the grid, in percentage points.

    Full precision is retained; round only for display.
    """
    kind_a = _coerce_kind(kind_a)
    kind_b = _coerce_kind(kind_b)
    grid = default_grid() if grid is None else np.asarray(grid, dtype=np.float64)
    if grid.ndim != 1 or grid.size == 0:
        raise ValidationError("grid must be a nonempty 1-d array")
    if grid[0] < 0.0 or np.any(np.diff(grid) <= 0.0):
        raise ValidationError("grid must be ascending and start at t >= 0")
    diff = (survival(m, kind_a, grid) - survival(m, kind_b, grid)) * 100.0
    return GapCurve(kind_a, kind_b, grid, diff)


@dataclass(frozen=True)
class ScenarioClassification:
    """Which excess components are active, and what net survival means there."""

    row: str        # none | baseline_only | treatment_only | both_present
    relation: str   # what the net curve coincides with / how far it sits from A
    baseline_active: bool
    treatment_active: bool


_ROWS = {
    (False, False): ("none", "equals_disease_specific"),
    (True, False): ("baseline_only", "gap_equals_component_b"),
    (False, True): ("treatment_only", "equals_disease_attributable"),
    (True, True): ("both_present", "gap_equals_b_plus_c"),
}


def scenario_table(m: ComponentModel, probe_grid=None, tol: float = 1e-12):
    """Classify a model by which excess components are present.

    A component counts as present when its rate exceeds ``tol`` anywhere
    on the probe grid (default [0, 10] at 0.01 steps).
    """
    grid = default_grid() if probe_grid is None else np.asarray(probe_grid, dtype=np.float64)
    b_on = bool(np.any(m.baseline_excess.rate(grid) > tol))
    c_on = bool(np.any(m.treatment_excess.rate(grid) > tol))
    row, relation = _ROWS[(b_on, c_on)]
    return ScenarioClassification(row, relation, b_on, c_on)
