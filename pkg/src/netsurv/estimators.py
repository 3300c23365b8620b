"""Nonparametric estimation from subject-level data.

Four estimators, mirroring the closed-form estimands:

  * ``overall_km``               product-limit over all deaths
  * ``cause_specific_km``        product-limit over recorded cancer deaths
  * ``disease_attributable_km``  product-limit over deaths caused by the
                                 disease or its treatment (needs labels)
  * ``pohar_perme``              net survival with inverse expected-survival
                                 weights from a life table

plus ``smr``, the observed/expected other-cause death ratio.

The weighted net-survival estimator follows the standard construction:
each subject is weighted by the reciprocal of their expected (population)
survival, the weighted death increments are offset by the weighted
population-hazard integral, and the death part is accumulated product-limit
style.  Because every subject's expected hazard is piecewise constant, the
population integral between consecutive observed times has the closed form

    integral = log(sum_R w_i(b)) - log(sum_R w_i(a))

over any interval (a, b] with constant risk set R — the weighted mean of
population hazards is exactly the log-derivative of the summed weights.
Accumulating those log differences removes any event-grid discretization
bias, which matters when validating against exact closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .cohort import Cohort, Status
from .errors import MissingLabelError, UndefinedRatioError, ValidationError
from .lifetable import LifeTable, profile_hazard

__all__ = [
    "StepCurve",
    "kaplan_meier",
    "overall_km",
    "cause_specific_km",
    "disease_attributable_km",
    "pohar_perme",
    "smr",
]


@dataclass(frozen=True)
class StepCurve:
    """A right-continuous survival step function.

    ``values[k]`` is the survival level on [times[k], times[k+1]); before
    ``times[0]`` the curve is 1.  ``values`` are clipped to [0, 1];
    ``values_raw`` keeps what the estimator actually produced (weighted
    net-survival estimates can wobble above 1), and ``clipped`` counts how
    many steps needed clipping.  ``variance`` is advisory.
    """

    times: np.ndarray
    values: np.ndarray
    at_risk: np.ndarray
    events: np.ndarray
    variance: np.ndarray | None = None
    values_raw: np.ndarray | None = None
    clipped: int = 0
    truncated: bool = False

    def __post_init__(self):
        t = np.asarray(self.times, dtype=np.float64)
        v = np.asarray(self.values, dtype=np.float64)
        if t.ndim != 1 or t.shape != v.shape:
            raise ValidationError("times and values must be 1-d and equal length")
        if t.size > 1 and np.any(np.diff(t) <= 0.0):
            raise ValidationError("step times must be strictly ascending")
        if v.size and (v.min() < 0.0 or v.max() > 1.0):
            raise ValidationError("step values must lie in [0, 1]")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return int(self.times.size)

    def value_at(self, t):
        """Survival at time t (1.0 before the first step)."""
        arr = np.asarray(t, dtype=np.float64)
        idx = np.searchsorted(self.times, arr, side="right")
        padded = np.concatenate(([1.0], self.values))
        out = padded[idx]
        return float(out) if arr.ndim == 0 else out

    def to_rows(self):
        """(time, survival, at_risk[, variance]) tuples for serialization."""
        cols = [self.times, self.values, self.at_risk]
        if self.variance is not None:
            cols.append(self.variance)
        return list(zip(*cols)) if self.times.size else []


def _sorted_events(cohort: Cohort, is_event) -> tuple:
    times = cohort.times
    flags = np.fromiter(
        (r.status.is_death and bool(is_event(r)) for r in cohort.records),
        dtype=np.int64,
        count=len(cohort),
    )
    order = np.argsort(times, kind="stable")
    return times[order], flags[order]


def kaplan_meier(cohort: Cohort, is_event=None) -> StepCurve:
    """Product-limit estimate; ``is_event`` picks which deaths count.

    Deaths failing the predicate are censored at their death time, the
    standard cause-specific treatment.  Subjects censored and dying at
    the same time are both in the risk set at that time (deaths first).
    """
    if is_event is None:
        is_event = lambda r: True  # noqa: E731 - any death
    times, flags = _sorted_events(cohort, is_event)
    uniq, at_risk, deaths, surv = _kernels.product_limit(times, flags)
    keep = deaths > 0
    s = surv[keep]
    n = at_risk[keep].astype(np.float64)
    d = deaths[keep].astype(np.float64)
    # Greenwood's formula, advisory; 0 where the curve has hit 0
    with np.errstate(divide="ignore", invalid="ignore"):
        greenwood = np.cumsum(np.where(n > d, d / (n * (n - d)), np.inf))
        var = np.where(s > 0.0, s * s * greenwood, 0.0)
    return StepCurve(
        times=uniq[keep],
        values=np.clip(s, 0.0, 1.0),
        at_risk=at_risk[keep],
        events=deaths[keep],
        variance=var,
        values_raw=s,
    )


def overall_km(cohort: Cohort) -> StepCurve:
    return kaplan_meier(cohort)


def cause_specific_km(cohort: Cohort) -> StepCurve:
    """Events = deaths recorded as cancer deaths; other deaths censored."""
    return kaplan_meier(cohort, lambda r: r.status is Status.DEATH_CANCER)


def disease_attributable_km(cohort: Cohort) -> StepCurve:
    """Events = deaths from disease progression or treatment (labels A/C).

    Needs per-death cause labels, which exist in simulated cohorts and in
    ingested files with a ``true_cause`` column.
    """
    unlabeled = sum(
        1 for r in cohort.records if r.status.is_death and r.true_cause is None
    )
    if unlabeled:
        raise MissingLabelError(
            f"{unlabeled} death record(s) carry no cause label; "
            "disease-attributable estimation needs simulated data or an "
            "explicit true_cause column"
        )
    return kaplan_meier(cohort, lambda r: r.true_cause is not None
                        and r.true_cause.value in ("A", "C"))


def _profile_groups(cohort: Cohort):
    """Group record indices by demographic profile.

    Iteration order is sorted by (age, sex, year), not first-seen, so the
    floating-point accumulation order — and hence the result, bit for bit —
    does not depend on how the records happen to be arranged.
    """
    groups = {}
    for i, r in enumerate(cohort.records):
        key = (r.profile.age_at_diagnosis, r.profile.sex, r.profile.diagnosis_year)
        groups.setdefault(key, []).append(i)
    return dict(
        sorted(groups.items(), key=lambda kv: (kv[0][0], kv[0][1].value, kv[0][2]))
    )


def pohar_perme(cohort: Cohort, table: LifeTable) -> StepCurve:
    """Net survival with inverse expected-survival weights.

    Subjects sharing a demographic profile share one expected-hazard path,
    so the cohort collapses to per-profile weight trajectories and risk
    counts; cost is O(profiles x observed times), not O(n^2).
    """
    times = cohort.times
    deaths = cohort.status_codes > 0

    # grid of all observed times, with 0 prepended for the left endpoints
    uniq = np.unique(times)
    grid = np.concatenate(([0.0], uniq))
    m_pts = uniq.size

    groups = _profile_groups(cohort)
    risk = np.zeros(m_pts, dtype=np.float64)        # unweighted risk count at u_m
    death_n = np.zeros(m_pts, dtype=np.float64)     # deaths at u_m
    w_risk = np.zeros(m_pts, dtype=np.float64)      # sum of weights over risk set, at u_m
    w_risk_prev = np.zeros(m_pts, dtype=np.float64) # same risk set, weights at u_{m-1}
    w_death = np.zeros(m_pts, dtype=np.float64)     # sum of weights over deaths at u_m
    w2_death = np.zeros(m_pts, dtype=np.float64)

    for (age, sex, year), idx in groups.items():
        idx = np.asarray(idx)
        gt = times[idx]
        gmax = float(gt.max())
        hz = profile_hazard(
            table,
            cohort.records[idx[0]].profile,
            gmax,
        )
        cum = hz.cumulative(grid)
        w = np.exp(np.minimum(cum, 700.0))  # overflow guard; weights this large
        w[grid > gmax] = 0.0                # are unreachable at sane rates anyway

        gt_sorted = np.sort(gt)
        cnt = idx.size - np.searchsorted(gt_sorted, uniq, side="left")
        risk += cnt
        w_risk += cnt * w[1:]
        w_risk_prev += cnt * w[:-1]

        dt = np.sort(gt[deaths[idx]])
        if dt.size:
            lo = np.searchsorted(dt, uniq, side="left")
            hi = np.searchsorted(dt, uniq, side="right")
            dcnt = hi - lo
            death_n += dcnt
            w_death += dcnt * w[1:]
            w2_death += dcnt * w[1:] ** 2

    # population-hazard integral over each (u_{m-1}, u_m], exact in closed form
    valid = w_risk > 0.0
    pop = np.zeros(m_pts)
    with np.errstate(divide="ignore", invalid="ignore"):
        pop[valid] = np.log(w_risk[valid]) - np.log(w_risk_prev[valid])

    truncated = False
    if not np.all(valid):
        last = int(np.argmax(~valid))
        truncated = True
        uniq, risk, death_n = uniq[:last], risk[:last], death_n[:last]
        w_risk, w_death, w2_death, pop = (
            w_risk[:last], w_death[:last], w2_death[:last], pop[:last],
        )

    is_step = death_n > 0
    factors = np.ones_like(w_risk)
    factors[is_step] = 1.0 - w_death[is_step] / w_risk[is_step]
    death_part = np.cumprod(factors)
    pop_part = np.exp(np.cumsum(pop))
    raw = death_part * pop_part

    with np.errstate(divide="ignore", invalid="ignore"):
        var_inc = np.where(is_step, w2_death / w_risk**2, 0.0)
    var = raw**2 * np.cumsum(var_inc)

    steps = is_step
    values_raw = raw[steps]
    clipped = int(np.sum((values_raw > 1.0) | (values_raw < 0.0)))
    return StepCurve(
        times=uniq[steps],
        values=np.clip(values_raw, 0.0, 1.0),
        at_risk=risk[steps].astype(np.int64),
        events=death_n[steps].astype(np.int64),
        variance=var[steps],
        values_raw=values_raw,
        clipped=clipped,
        truncated=truncated,
    )


def expected_death_probability(cohort: Cohort, table: LifeTable, horizon: float):
    """Per-subject probability of dying of population causes by ``horizon``."""
    if not (math.isfinite(horizon) and horizon > 0.0):
        raise ValidationError(f"horizon must be finite and > 0, got {horizon!r}")
    out = np.empty(len(cohort))
    for (age, sex, year), idx in _profile_groups(cohort).items():
        idx = np.asarray(idx)
        hz = profile_hazard(table, cohort.records[idx[0]].profile, horizon)
        out[idx] = 1.0 - math.exp(-float(hz.cumulative(horizon)))
    return out


def smr(
    cohort: Cohort,
    table: LifeTable,
    horizon: float,
    *,
    person_time: bool = False,
) -> float:
    """Standardized mortality ratio for other-cause deaths by ``horizon``.

    observed: other-cause deaths on [0, horizon].
    expected, default convention: sum over subjects of their expected death
    probability by tau_i, where tau_i is the horizon for subjects who died
    (their potential follow-up) and min(censoring time, horizon) otherwise.
    With ``person_time=True``, expected is instead the accumulated expected
    hazard over each subject's own observed time (classic person-years
    times rate), truncated at the horizon for everyone.
    """
    if not (math.isfinite(horizon) and horizon > 0.0):
        raise ValidationError(f"horizon must be finite and > 0, got {horizon!r}")
    times = cohort.times
    codes = cohort.status_codes
    observed = int(np.sum((codes == 2) & (times <= horizon)))

    expected = 0.0
    for (age, sex, year), idx in _profile_groups(cohort).items():
        idx = np.asarray(idx)
        hz = profile_hazard(table, cohort.records[idx[0]].profile, horizon)
        t = times[idx]
        died = codes[idx] > 0
        if person_time:
            tau = np.minimum(t, horizon)
            expected += float(np.sum(hz.cumulative(tau)))
        else:
            tau = np.where(died, horizon, np.minimum(t, horizon))
            expected += float(np.sum(1.0 - np.exp(-hz.cumulative(tau))))
    if expected <= 0.0:
        raise UndefinedRatioError(
            "expected other-cause deaths are zero; SMR is undefined "
            "(is the life table all-zero?)"
        )
    return observed / expected
