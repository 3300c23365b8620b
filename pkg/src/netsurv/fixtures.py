"""Packaged example data: a synthetic reconstruction of the VACURG
high-dose estrogen prostate trial margins (1960s Veterans Administration
cooperative study), paired with a calibrated trial-era life table.

Only the published margins are reconstructed — arm sizes, death counts by
recorded cause within 36 months of follow-up, and censoring counts:

    placebo   n=127: 37 disease deaths, 58 other-cause deaths, 32 censored
    estrogen  n=125: 27 disease deaths, 66 other-cause deaths, 32 censored

Individual event times, ages and diagnosis years are invented: death times
are spread evenly over the 36 months, causes interleaved evenly through
the death sequence, censoring placed at exactly 3.0 years, and demographics
cycled deterministically over ages 58-86 and years 1960-1971.  Nothing
here is patient-level source data.

The life table is synthetic too: male rates over ages 55-95 and years
1960-1975 with Gompertz-style age structure (9%/year of age) and a mild
0.5%/calendar-year decline, scaled so the cohort's average expected
other-cause death probability over the 3-year horizon is exactly 13.5%.
That calibration stands in for the trial-era national tables the original
analysis would have used.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .cohort import Cohort, Provenance, Status, SubjectRecord
from .errors import ValidationError
from .lifetable import DemographicProfile, LifeTable, Sex, profile_hazard

__all__ = [
    "TRIAL_HORIZON_YEARS",
    "TARGET_EXPECTED_DEATH_PCT",
    "trial_cohort",
    "trial_life_table",
    "fixture",
    "FIXTURE_NAMES",
]

TRIAL_HORIZON_YEARS = 3.0
TARGET_EXPECTED_DEATH_PCT = 13.5

_ARMS = (
    # label, n, disease deaths, other-cause deaths
    ("placebo", 127, 37, 58),
    ("estrogen", 125, 27, 66),
)

_AGE_LO, _AGE_HI = 55, 95
_YEAR_LO, _YEAR_HI = 1960, 1975


def _profiles():
    """Deterministic demographics for the 252 subjects (global order)."""
    total = sum(a[1] for a in _ARMS)
    out = []
    for i in range(total):
        age = 58.0 + float((i * 7) % 29)       # 58..86
        year = 1960 + ((i * 5) % 12)           # 1960..1971
        out.append(DemographicProfile(age, Sex.MALE, year))
    return out


def _base_rate(age: int, year: int) -> float:
    return math.exp(0.09 * (age - 70)) * 0.995 ** (year - 1967)


@lru_cache(maxsize=1)
def _calibrated_scale() -> float:
    """Scale factor making the cohort-average expected 3-year death
    probability hit the target exactly (the expected cumulative hazard is
    linear in the scale, so this is a 1-d root find)."""
    base = LifeTable(
        {
            (age, Sex.MALE, year): _base_rate(age, year)
            for age in range(_AGE_LO, _AGE_HI + 1)
            for year in range(_YEAR_LO, _YEAR_HI + 1)
        }
    )
    masses = np.array(
        [
            float(profile_hazard(base, p, TRIAL_HORIZON_YEARS).cumulative(TRIAL_HORIZON_YEARS))
            for p in _profiles()
        ]
    )
    target = TARGET_EXPECTED_DEATH_PCT / 100.0

    def excess(scale):
        return float(np.mean(1.0 - np.exp(-scale * masses))) - target

    lo, hi = 1e-9, 2.0
    if excess(hi) < 0.0:
        raise ValidationError("life-table calibration bracket failed")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if excess(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return hi


@lru_cache(maxsize=1)
def trial_life_table() -> LifeTable:
    scale = _calibrated_scale()
    return LifeTable(
        {
            (age, Sex.MALE, year): scale * _base_rate(age, year)
            for age in range(_AGE_LO, _AGE_HI + 1)
            for year in range(_YEAR_LO, _YEAR_HI + 1)
        }
    )


def _death_times(n_deaths: int) -> list:
    return [TRIAL_HORIZON_YEARS * (j + 1) / (n_deaths + 1) for j in range(n_deaths)]


def _interleave(n_deaths: int, n_disease: int):
    """Spread disease deaths evenly through the death sequence."""
    flags = []
    for j in range(n_deaths):
        flags.append(
            (j + 1) * n_disease // n_deaths - j * n_disease // n_deaths == 1
        )
    return flags


@lru_cache(maxsize=1)
def trial_cohort() -> Cohort:
    profiles = _profiles()
    records = []
    i = 0
    for label, n, n_disease, n_other in _ARMS:
        n_deaths = n_disease + n_other
        times = _death_times(n_deaths)
        disease_flags = _interleave(n_deaths, n_disease)
        prefix = label[0]
        for j in range(n):
            if j < n_deaths:
                time = times[j]
                status = Status.DEATH_CANCER if disease_flags[j] else Status.DEATH_OTHER
            else:
                time = TRIAL_HORIZON_YEARS
                status = Status.CENSORED
            records.append(
                SubjectRecord(
                    id=f"{prefix}{j + 1:03d}",
                    profile=profiles[i],
                    time=time,
                    status=status,
                    arm=label,
                )
            )
            i += 1
    return Cohort(
        records,
        Provenance("ingested", "fixture:vacurg (margin reconstruction, synthetic times)"),
    )


FIXTURE_NAMES = ("vacurg",)


def fixture(name: str):
    """Return (cohort, life_table, horizon_years) for a packaged fixture."""
    if name != "vacurg":
        raise ValidationError(
            f"unknown fixture {name!r}; available: {', '.join(FIXTURE_NAMES)}"
        )
    return trial_cohort(), trial_life_table(), TRIAL_HORIZON_YEARS
