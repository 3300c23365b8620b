"""General-population life tables: the empirical population hazard.

A life table maps (integer age, sex, calendar year) to an other-cause
mortality rate.  Given a subject's age, sex and diagnosis year it induces
a piecewise-constant hazard over follow-up time: the rate changes whenever
the subject's attained integer age or attained calendar year ticks over.

Conventions (chosen for reproducibility, documented rather than inferred):
  * attained age floors to whole years: a subject aged 70.5 at t = 0.6
    has attained age 71.1 and reads the age-71 row
  * the diagnosis date is treated as the start of the diagnosis year, so
    the attained calendar year is diagnosis_year + floor(t)
  * rates are instantaneous hazards; annual death probabilities q can be
    ingested with ``from_probabilities=True``, converting via -ln(1 - q)
  * lookups outside the table's coverage raise ``CoverageError`` — there
    is no extrapolation, silent or otherwise
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import CoverageError, DataFormatError, ValidationError
from .hazards import PiecewiseConstantHazard

__all__ = [
    "Sex",
    "DemographicProfile",
    "LifeTable",
    "load_life_table",
    "write_life_table",
    "expected_hazard",
    "expected_survival",
    "profile_hazard",
    "coverage_gaps",
]


class Sex(enum.Enum):
    MALE = "male"
    FEMALE = "female"

    @classmethod
    def parse(cls, token: str) -> "Sex":
        try:
            return cls(token.strip().lower())
        except ValueError:
            raise ValidationError(
                f"unknown sex token {token!r}; expected 'male' or 'female'"
            ) from None


@dataclass(frozen=True)
class DemographicProfile:
    """Age at diagnosis (fractional years allowed), sex, diagnosis year."""

    age_at_diagnosis: float
    sex: Sex
    diagnosis_year: int

    def __post_init__(self):
        if not (math.isfinite(self.age_at_diagnosis) and self.age_at_diagnosis >= 0.0):
            raise ValidationError(
                f"age_at_diagnosis must be finite and >= 0, got {self.age_at_diagnosis!r}"
            )
        if not isinstance(self.sex, Sex):
            object.__setattr__(self, "sex", Sex.parse(str(self.sex)))
        if not isinstance(self.diagnosis_year, int):
            raise ValidationError("diagnosis_year must be an integer calendar year")

    def key_at(self, t: float):
        """Life-table key attained t years after diagnosis."""
        return (
            int(math.floor(self.age_at_diagnosis + t)),
            self.sex,
            self.diagnosis_year + int(math.floor(t)),
        )


class LifeTable:
    """Immutable mapping (age, sex, year) -> mortality rate (events/year)."""

    def __init__(self, entries):
        clean = {}
        for key, rate in dict(entries).items():
            age, sex, year = key
            if not isinstance(sex, Sex):
                sex = Sex.parse(str(sex))
            age = int(age)
            year = int(year)
            if not 0 <= age <= 110:
                raise ValidationError(f"age {age} outside the supported 0-110 range")
            rate = float(rate)
            if not (math.isfinite(rate) and rate >= 0.0):
                raise ValidationError(
                    f"rate for (age={age}, sex={sex.value}, year={year}) "
                    f"must be finite and >= 0, got {rate!r}"
                )
            clean[(age, sex, year)] = rate
        self._entries = clean
        if clean:
            ages = [k[0] for k in clean]
            years = [k[2] for k in clean]
            self._age_range = (min(ages), max(ages))
            self._year_range = (min(years), max(years))
            self._sexes = frozenset(k[1] for k in clean)
        else:
            self._age_range = None
            self._year_range = None
            self._sexes = frozenset()

    def __len__(self):
        return len(self._entries)

    def __eq__(self, other):
        if not isinstance(other, LifeTable):
            return NotImplemented
        return self._entries == other._entries

    def __repr__(self):
        if not self._entries:
            return "LifeTable(<empty>)"
        return (
            f"LifeTable({len(self._entries)} entries, "
            f"ages {self._age_range[0]}-{self._age_range[1]}, "
            f"years {self._year_range[0]}-{self._year_range[1]}, "
            f"sexes {{{', '.join(sorted(s.value for s in self._sexes))}}})"
        )

    @property
    def entries(self):
        return dict(self._entries)

    @property
    def age_range(self):
        return self._age_range

    @property
    def year_range(self):
        return self._year_range

    @property
    def sexes(self):
        return self._sexes

    def rate_at(self, age: int, sex: Sex, year: int) -> float:
        key = (int(age), sex, int(year))
        try:
            return self._entries[key]
        except KeyError:
            raise CoverageError(
                "life table has no entry for "
                f"age={key[0]}, sex={key[1].value}, year={key[2]}",
                key=key,
            ) from None

    def has_key(self, age: int, sex: Sex, year: int) -> bool:
        return (int(age), sex, int(year)) in self._entries


_COLUMNS = ("age", "sex", "year")


def _open_source(source):
    if hasattr(source, "read"):
        return source, False
    return open(source, "r", encoding="utf-8", newline=""), True


def load_life_table(source, *, from_probabilities: bool = False) -> LifeTable:
    """Read a life-table CSV.

    Schema: header ``age,sex,year,rate`` — or ``age,sex,year,qx`` together
    with ``from_probabilities=True``, in which case each annual death
    probability q is converted to a rate via -ln(1 - q).  Any other column
    is rejected.  Malformed rows are reported with their line number.
    """
    value_col = "qx" if from_probabilities else "rate"
    stream, owned = _open_source(source)
    try:
        reader = csv.DictReader(stream)
        if reader.fieldnames is None:
            raise DataFormatError("life table file is empty (no header row)")
        fields = [f.strip() for f in reader.fieldnames]
        expected = set(_COLUMNS) | {value_col}
        unknown = [f for f in fields if f not in expected]
        missing = sorted(expected - set(fields))
        if not from_probabilities and unknown == ["qx"] and missing == ["rate"]:
            raise DataFormatError(
                "life table has 'qx' (annual death probabilities) instead of "
                "'rate'; pass from_probabilities=True to convert"
            )
        if unknown:
            raise DataFormatError(
                f"unknown life table column(s) {unknown}; "
                f"expected exactly {sorted(expected)}"
            )
        if missing:
            raise DataFormatError(f"life table is missing column(s) {missing}")

        entries = {}
        for lineno, row in enumerate(reader, start=2):
            try:
                age = int(row["age"])
                year = int(row["year"])
                sex = Sex.parse(row["sex"])
                value = float(row[value_col])
            except (TypeError, ValueError, ValidationError) as exc:
                raise DataFormatError(f"life table line {lineno}: {exc}") from None
            if from_probabilities:
                if not 0.0 <= value < 1.0:
                    raise DataFormatError(
                        f"life table line {lineno}: qx must be in [0, 1), got {value!r}"
                    )
                rate = -math.log1p(-value)
            else:
                rate = value
            if not (math.isfinite(rate) and rate >= 0.0):
                raise DataFormatError(
                    f"life table line {lineno}: rate must be finite and >= 0, got {rate!r}"
                )
            key = (age, sex, year)
            if key in entries:
                raise DataFormatError(
                    f"life table line {lineno}: duplicate key "
                    f"(age={age}, sex={sex.value}, year={year})"
                )
            entries[key] = rate
    finally:
        if owned:
            stream.close()
    try:
        return LifeTable(entries)
    except ValidationError as exc:
        raise DataFormatError(str(exc)) from None


def write_life_table(table: LifeTable, dest) -> None:
    """Emit ``age,sex,year,rate`` rows at full precision (exact round-trip)."""
    stream, owned = (dest, False) if hasattr(dest, "write") else (
        open(dest, "w", encoding="utf-8", newline=""),
        True,
    )
    try:
        writer = csv.writer(stream)
        writer.writerow(["age", "sex", "year", "rate"])
        for (age, sex, year), rate in sorted(
            table.entries.items(), key=lambda kv: (kv[0][1].value, kv[0][2], kv[0][0])
        ):
            writer.writerow([age, sex.value, year, repr(rate)])
    finally:
        if owned:
            stream.close()


def expected_hazard(table: LifeTable, profile: DemographicProfile, t) -> float:
    """Population rate the profile experiences at follow-up time t."""
    arr = np.asarray(t, dtype=np.float64)
    if arr.ndim == 0:
        return table.rate_at(*profile.key_at(float(t)))
    return np.array([table.rate_at(*profile.key_at(float(x))) for x in arr])


def _segments(profile: DemographicProfile, horizon: float):
    """Break [0, horizon] where the attained integer age or year changes.

    Yields (lo, hi, key) per segment; ``key`` is the life-table key in
    force on the open interval (lo, hi), looked up at the midpoint.
    """
    age0 = profile.age_at_diagnosis
    # first age tick: smallest t > 0 with age0 + t integral
    first_age_tick = math.floor(age0) + 1.0 - age0
    ticks = set()
    k = first_age_tick
    while k < horizon:
        ticks.add(k)
        k += 1.0
    y = 1.0
    while y < horizon:
        ticks.add(y)
        y += 1.0
    bounds = [0.0] + sorted(ticks) + [horizon]
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        yield lo, hi, profile.key_at(0.5 * (lo + hi))


def profile_hazard(
    table: LifeTable, profile: DemographicProfile, horizon: float
) -> PiecewiseConstantHazard:
    """The profile's population hazard over [0, horizon] as a piecewise form.

    Breakpoints fall where the attained integer age or calendar year
    changes.  The result is only meaningful on [0, horizon]; beyond that
    its final rate extends indefinitely, which is an artifact, not data.
    """
    if not (math.isfinite(horizon) and horizon > 0.0):
        raise ValidationError(f"horizon must be finite and > 0, got {horizon!r}")
    cuts = []
    rates = []
    for lo, _hi, key in _segments(profile, horizon):
        if lo > 0.0:
            cuts.append(lo)
        rates.append(table.rate_at(*key))
    return PiecewiseConstantHazard(tuple(cuts), tuple(rates))


def expected_survival(table: LifeTable, profile: DemographicProfile, t):
    """exp(-cumulative population hazard) at t, exact over the segments."""
    arr = np.asarray(t, dtype=np.float64)
    horizon = float(arr) if arr.ndim == 0 else (float(arr.max()) if arr.size else 0.0)
    if horizon == 0.0:
        return 1.0 if arr.ndim == 0 else np.ones_like(arr)
    hz = profile_hazard(table, profile, horizon)
    return hz.survival(t)


def coverage_gaps(table: LifeTable, profiles, horizon: float):
    """All missing life-table keys the given profiles would need through
    ``horizon`` years of follow-up.  Empty list means full coverage."""
    if not (math.isfinite(horizon) and horizon > 0.0):
        raise ValidationError(f"horizon must be finite and > 0, got {horizon!r}")
    missing = set()
    for profile in profiles:
        for _lo, _hi, key in _segments(profile, horizon):
            if not table.has_key(*key):
                missing.add(key)
    return sorted(missing, key=lambda k: (k[1].value, k[2], k[0]))
