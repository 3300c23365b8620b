"""Subject-level cohorts: competing-risks simulation and CSV ingest.

The simulator is the package's independent oracle.  Because the four
cause components add on the hazard scale, the cohort model is exactly
equivalent to four independent latent failure times, one per component,
with the earliest one realized.  Each latent time comes from inverting
the component's cumulative hazard at an exponential deviate, so there is
no root-finding error anywhere in the oracle.

Randomness uses the counter-based Philox generator with a fixed slab of
``DRAWS_PER_SUBJECT`` doubles per subject: subject i's draws are a pure
function of (seed, i).  Simulation therefore produces byte-identical
cohorts no matter how the work is chunked or parallelized, and any slice
of subjects can be regenerated without drawing its predecessors.
"""

from __future__ import annotations

import csv
import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DataFormatError, ValidationError
from .hazards import ComponentModel, ConstantHazard, ZeroHazard
from .lifetable import DemographicProfile, Sex

__all__ = [
    "Status",
    "CauseComponent",
    "SubjectRecord",
    "Provenance",
    "Cohort",
    "simulate_cohort",
    "load_cohort",
    "write_cohort",
    "DEFAULT_PROFILE",
    "DRAWS_PER_SUBJECT",
]


class Status(enum.Enum):
    CENSORED = "censored"
    DEATH_CANCER = "death_cancer"
    DEATH_OTHER = "death_other"

    @property
    def is_death(self) -> bool:
        return self is not Status.CENSORED


class CauseComponent(enum.Enum):
    A = "A"  # cancer progression
    B = "B"  # baseline other-cause excess
    C = "C"  # treatment-induced other-cause
    D = "D"  # general-population other-cause


_STATUS_TOKENS = {s.value: s for s in Status}
_CAUSE_TOKENS = {c.value: c for c in CauseComponent}

#: Profile assigned to simulated subjects unless the caller supplies one.
DEFAULT_PROFILE = DemographicProfile(60.0, Sex.MALE, 1970)


@dataclass(frozen=True)
class SubjectRecord:
    id: str
    profile: DemographicProfile
    time: float
    status: Status
    true_cause: CauseComponent | None = None
    arm: str | None = None

    def __post_init__(self):
        if not (math.isfinite(self.time) and self.time > 0.0):
            raise ValidationError(
                f"subject {self.id!r}: follow-up time must be finite and > 0, "
                f"got {self.time!r}"
            )
        if self.true_cause is not None and not self.status.is_death:
            raise ValidationError(
                f"subject {self.id!r}: censored records cannot carry a true cause"
            )


@dataclass(frozen=True)
class Provenance:
    kind: str  # "simulated" | "ingested"
    detail: str


class Cohort:
    """An immutable, nonempty collection of subject records."""

    def __init__(self, records, provenance: Provenance):
        records = tuple(records)
        if not records:
            raise ValidationError("a cohort must contain at least one record")
        ids = set()
        for r in records:
            if r.id in ids:
                raise ValidationError(f"duplicate subject id {r.id!r}")
            ids.add(r.id)
        self.records = records
        self.provenance = provenance
        self._times = None
        self._status = None
        self._cause = None

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @property
    def times(self) -> np.ndarray:
        if self._times is None:
            self._times = np.array([r.time for r in self.records], dtype=np.float64)
        return self._times

    @property
    def status_codes(self) -> np.ndarray:
        """0 = censored, 1 = cancer death, 2 = other-cause death."""
        if self._status is None:
            code = {Status.CENSORED: 0, Status.DEATH_CANCER: 1, Status.DEATH_OTHER: 2}
            self._status = np.array([code[r.status] for r in self.records], dtype=np.int8)
        return self._status

    @property
    def cause_codes(self) -> np.ndarray:
        """-1 = unlabeled, 0..3 = components A..D."""
        if self._cause is None:
            code = {None: -1, CauseComponent.A: 0, CauseComponent.B: 1,
                    CauseComponent.C: 2, CauseComponent.D: 3}
            self._cause = np.array([code[r.true_cause] for r in self.records], dtype=np.int8)
        return self._cause

    def arms(self):
        return sorted({r.arm for r in self.records if r.arm is not None})

    def arm(self, name: str) -> "Cohort":
        subset = [r for r in self.records if r.arm == name]
        if not subset:
            raise ValidationError(f"no records in arm {name!r}")
        return Cohort(subset, self.provenance)


DRAWS_PER_SUBJECT = 8  # latent A,B,C,D + censoring + 3 reserved
_BLOCKS_PER_SUBJECT = DRAWS_PER_SUBJECT // 4  # Philox emits 4 words per counter block


def _draws(seed: int, start: int, stop: int) -> np.ndarray:
    """Uniform draw slab for subjects [start, stop), shape (stop-start, 8).

    Identical to the corresponding rows of ``_draws(seed, 0, n)``: the
    Philox counter is advanced past the first ``start`` subjects' blocks
    instead of generating them.
    """
    bits = np.random.Philox(seed)
    bits.advance(_BLOCKS_PER_SUBJECT * start)
    return np.random.Generator(bits).random((stop - start, DRAWS_PER_SUBJECT))


def _simulate_chunk(model, censoring, max_follow_up, seed, start, stop):
    u = _draws(seed, start, stop)
    mass = -np.log1p(-u[:, :5])
    latent = np.empty((stop - start, 5))
    latent[:, 0] = model.cancer.inverse_cumulative(mass[:, 0])
    latent[:, 1] = model.baseline_excess.inverse_cumulative(mass[:, 1])
    latent[:, 2] = model.treatment_excess.inverse_cumulative(mass[:, 2])
    latent[:, 3] = model.population.inverse_cumulative(mass[:, 3])
    latent[:, 4] = censoring.inverse_cumulative(mass[:, 4])
    # first minimum wins, so ties resolve A < B < C < D < censoring
    winner = np.argmin(latent, axis=1)
    time = latent[np.arange(stop - start), winner]
    admin = time > max_follow_up
    time = np.where(admin, max_follow_up, time)
    winner = np.where(admin | (winner == 4), -1, winner)  # -1 = censored
    return time, winner


_WINNER_STATUS = {
    -1: (Status.CENSORED, None),
    0: (Status.DEATH_CANCER, CauseComponent.A),
    1: (Status.DEATH_OTHER, CauseComponent.B),
    2: (Status.DEATH_OTHER, CauseComponent.C),
    3: (Status.DEATH_OTHER, CauseComponent.D),
}


def simulate_cohort(
    model: ComponentModel,
    n: int,
    max_follow_up: float,
    censoring_rate: float = 0.0,
    seed: int = 0,
    *,
    profile: DemographicProfile = DEFAULT_PROFILE,
    arm: str | None = None,
    id_prefix: str = "s",
    workers: int = 1,
    chunk_size: int = 16384,
) -> Cohort:
    """Draw n subjects from the competing-risks model.

    Each subject's observed time is the minimum of four latent component
    times, an exponential censoring time (``censoring_rate``; 0 disables),
    and administrative censoring at ``max_follow_up`` (which may be
    ``math.inf`` when something else guarantees finite times).
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValidationError(f"n must be a positive integer, got {n!r}")
    if not max_follow_up > 0.0:
        raise ValidationError(f"max_follow_up must be > 0, got {max_follow_up!r}")
    if not (math.isfinite(censoring_rate) and censoring_rate >= 0.0):
        raise ValidationError(f"censoring_rate must be finite and >= 0, got {censoring_rate!r}")
    if math.isinf(max_follow_up) and censoring_rate == 0.0:
        probe = 1e12
        if all(h.cumulative(probe) == 0.0 for h in model.components):
            raise ValidationError(
                "nothing can end follow-up: all hazards are zero, censoring is "
                "disabled, and max_follow_up is infinite"
            )

    censoring = ConstantHazard(censoring_rate) if censoring_rate > 0.0 else ZeroHazard()
    bounds = [(lo, min(lo + chunk_size, n)) for lo in range(0, n, chunk_size)]

    def run(span):
        return _simulate_chunk(model, censoring, max_follow_up, seed, *span)

    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, bounds))
    else:
        parts = [run(span) for span in bounds]

    time = np.concatenate([p[0] for p in parts])
    winner = np.concatenate([p[1] for p in parts])
    if not np.all(np.isfinite(time)):
        raise ValidationError(
            "simulation produced non-finite follow-up times; set a finite "
            "max_follow_up or a positive censoring_rate"
        )

    width = max(6, len(str(n)))
    records = []
    for i in range(n):
        status, cause = _WINNER_STATUS[int(winner[i])]
        records.append(
            SubjectRecord(
                id=f"{id_prefix}{i + 1:0{width}d}",
                profile=profile,
                time=float(time[i]),
                status=status,
                true_cause=cause,
                arm=arm,
            )
        )
    detail = (
        f"seed={seed} n={n} max_follow_up={max_follow_up} "
        f"censoring_rate={censoring_rate} model={_describe(model)}"
    )
    return Cohort(records, Provenance("simulated", detail))


def _describe(model: ComponentModel) -> str:
    return "/".join(type(h).__name__ for h in model.components)


_COHORT_COLUMNS = ("id", "age", "sex", "year", "time", "status", "arm")


def load_cohort(source) -> Cohort:
    """Read a cohort CSV: ``id,age,sex,year,time,status,arm`` with an
    optional trailing ``true_cause`` column (A/B/C/D, empty for none)."""
    stream, owned = (source, False) if hasattr(source, "read") else (
        open(source, "r", encoding="utf-8", newline=""),
        True,
    )
    try:
        reader = csv.DictReader(stream)
        if reader.fieldnames is None:
            raise DataFormatError("cohort file is empty (no header row)")
        fields = [f.strip() for f in reader.fieldnames]
        allowed = set(_COHORT_COLUMNS) | {"true_cause"}
        unknown = [f for f in fields if f not in allowed]
        if unknown:
            raise DataFormatError(
                f"unknown cohort column(s) {unknown}; expected {list(_COHORT_COLUMNS)}"
                " plus optional true_cause"
            )
        missing = [c for c in _COHORT_COLUMNS if c not in fields]
        if missing:
            raise DataFormatError(f"cohort file is missing column(s) {missing}")
        has_cause = "true_cause" in fields

        records = []
        seen = set()
        for lineno, row in enumerate(reader, start=2):
            rid = (row["id"] or "").strip()
            if not rid:
                raise DataFormatError(f"cohort line {lineno}: empty id")
            if rid in seen:
                raise DataFormatError(f"cohort line {lineno}: duplicate id {rid!r}")
            seen.add(rid)
            try:
                age = float(row["age"])
                year = int(row["year"])
                sex = Sex.parse(row["sex"])
                time = float(row["time"])
            except (TypeError, ValueError, ValidationError) as exc:
                raise DataFormatError(f"cohort line {lineno}: {exc}") from None
            token = (row["status"] or "").strip()
            if token not in _STATUS_TOKENS:
                raise DataFormatError(
                    f"cohort line {lineno}: unknown status {token!r}; allowed: "
                    f"{sorted(_STATUS_TOKENS)}"
                )
            status = _STATUS_TOKENS[token]
            if not (math.isfinite(time) and time > 0.0):
                raise DataFormatError(
                    f"cohort line {lineno}: time must be finite and > 0, got {row['time']!r}"
                )
            cause = None
            if has_cause:
                cause_token = (row["true_cause"] or "").strip()
                if cause_token:
                    if cause_token not in _CAUSE_TOKENS:
                        raise DataFormatError(
                            f"cohort line {lineno}: unknown true_cause {cause_token!r}; "
                            f"allowed: {sorted(_CAUSE_TOKENS)} or empty"
                        )
                    cause = _CAUSE_TOKENS[cause_token]
            arm = (row["arm"] or "").strip() or None
            try:
                records.append(
                    SubjectRecord(
                        id=rid,
                        profile=DemographicProfile(age, sex, year),
                        time=time,
                        status=status,
                        true_cause=cause,
                        arm=arm,
                    )
                )
            except ValidationError as exc:
                raise DataFormatError(f"cohort line {lineno}: {exc}") from None
    finally:
        if owned:
            stream.close()
    if not records:
        raise DataFormatError("cohort file contains a header but no records")
    name = getattr(source, "name", None) or str(source)
    return Cohort(records, Provenance("ingested", f"source={name}"))


def write_cohort(cohort: Cohort, dest) -> None:
    """Emit the cohort CSV at full precision (exact round-trip).

    The ``true_cause`` column is included whenever any record carries a
    label (always true for simulated cohorts).
    """
    stream, owned = (dest, False) if hasattr(dest, "write") else (
        open(dest, "w", encoding="utf-8", newline=""),
        True,
    )
    with_cause = any(r.true_cause is not None for r in cohort.records)
    try:
        writer = csv.writer(stream)
        header = list(_COHORT_COLUMNS) + (["true_cause"] if with_cause else [])
        writer.writerow(header)
        for r in cohort.records:
            row = [
                r.id,
                repr(r.profile.age_at_diagnosis),
                r.profile.sex.value,
                r.profile.diagnosis_year,
                repr(r.time),
                r.status.value,
                r.arm or "",
            ]
            if with_cause:
                row.append(r.true_cause.value if r.true_cause else "")
            writer.writerow(row)
    finally:
        if owned:
            stream.close()
