"""Estimand selection: a four-question decision tree over a cohort's
measurement situation, answered with a verdict naming the estimand the
analysis actually delivers and how to talk about it.

The questions, in order:
  1. has general-population other-cause mortality been removed?
  2. is the cohort's other-cause relative risk approximately 1?
  3. is cause-of-death coding reliable?
  4. do the life tables remove baseline differences (stratification)?

Each question short-circuits the rest of the tree when its answer settles
the matter, so later answers are ignored exactly where they are moot.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ValidationError
from .estimands import EstimandKind

__all__ = [
    "AdvisorAnswers",
    "Verdict",
    "advise",
    "rr_threshold_classify",
    "GUIDANCE",
    "REGISTRY_OTHER_CAUSE_RR",
    "registry_rr",
]

#: Guidance sentences keyed by verdict; the advisor returns keys, UIs render text.
GUIDANCE = {
    "overall_not_comparable": (
        "Overall survival measures the cohort's whole mortality burden; it is not "
        "comparable across populations with different background mortality."
    ),
    "net_matches_disease_specific": (
        "With no excess other-cause mortality, net survival coincides with "
        "disease-specific survival and the standard interpretation holds."
    ),
    "use_cause_specific": (
        "Reliable death-certificate coding supports cause-specific survival; note "
        "that treatment-induced deaths are counted only when coded to the disease."
    ),
    "use_disease_attributable": (
        "With baseline differences removed by stratified life tables, the remaining "
        "excess is treatment-induced and the estimate targets deaths the disease "
        "causes, directly or through treatment."
    ),
    "net_includes_excess": (
        "Net survival here retains both baseline and treatment-induced excess "
        "mortality; it does not equal disease-specific survival and should be "
        "interpreted as survival with population mortality removed, not as the "
        "survival that would occur if the disease were the only cause of death."
    ),
}

_CAUTIONS = {
    "elevated_rr_inflates_gap": (
        "The gap to disease-specific survival grows with the other-cause "
        "relative risk."
    ),
    "verify_baseline_removed": (
        "Confirming that stratification actually removed baseline excess requires "
        "external evidence (for example an other-cause SMR near 1)."
    ),
    "treatment_excess_irreducible": (
        "Treatment-induced other-cause mortality is a causal consequence of the "
        "disease; no life-table stratification can remove it."
    ),
}


@dataclass(frozen=True)
class AdvisorAnswers:
    """The four answers, plus an optional measured RR.

    When ``observed_rr`` is given it overrides ``rr_approximately_one`` via
    ``rr_threshold_classify`` at ``rr_threshold``.
    """

    removed_general_population_mortality: bool
    rr_approximately_one: bool
    reliable_cause_of_death: bool
    lifetables_remove_baseline: bool
    observed_rr: float | None = None
    rr_threshold: float = 1.1

    def __post_init__(self):
        for name in (
            "removed_general_population_mortality",
            "rr_approximately_one",
            "reliable_cause_of_death",
            "lifetables_remove_baseline",
        ):
            if not isinstance(getattr(self, name), bool):
                raise ValidationError(f"answer {name} must be True or False")
        if self.observed_rr is not None and not self.observed_rr >= 0.0:
            raise ValidationError(f"observed_rr must be >= 0, got {self.observed_rr!r}")

    @property
    def rr_is_near_one(self) -> bool:
        if self.observed_rr is not None:
            return (
                rr_threshold_classify(self.observed_rr, self.rr_threshold)
                == "approximately_one"
            )
        return self.rr_approximately_one


@dataclass(frozen=True)
class Verdict:
    estimand: EstimandKind
    components: str
    guidance_key: str
    caution_flags: tuple = ()

    def to_dict(self) -> dict:
        return {
            "estimand": self.estimand.value,
            "components": self.components,
            "guidance_key": self.guidance_key,
            "guidance": GUIDANCE[self.guidance_key],
            "cautions": {k: _CAUTIONS[k] for k in self.caution_flags},
        }


def rr_threshold_classify(observed_rr: float, threshold: float = 1.1) -> str:
    """'approximately_one' when observed_rr <= threshold (inclusive), else
    'elevated'.  The default cutoff 1.1 sits below the smallest clearly
    elevated registry estimates (~1.2)."""
    if not observed_rr >= 0.0:
        raise ValidationError(f"observed_rr must be >= 0, got {observed_rr!r}")
    if not threshold >= 1.0:
        raise ValidationError(f"threshold must be >= 1, got {threshold!r}")
    return "approximately_one" if observed_rr <= threshold else "elevated"


def advise(answers: AdvisorAnswers) -> Verdict:
    """Classify the four answers into one of five verdicts."""
    if not answers.removed_general_population_mortality:
        return Verdict(
            estimand=EstimandKind.OVERALL,
            components=EstimandKind.OVERALL.components,
            guidance_key="overall_not_comparable",
        )
    if answers.rr_is_near_one:
        return Verdict(
            estimand=EstimandKind.DISEASE_SPECIFIC,
            components=EstimandKind.DISEASE_SPECIFIC.components,
            guidance_key="net_matches_disease_specific",
        )
    if answers.reliable_cause_of_death:
        return Verdict(
            estimand=EstimandKind.CAUSE_SPECIFIC,
            components=EstimandKind.CAUSE_SPECIFIC.components,
            guidance_key="use_cause_specific",
        )
    if answers.lifetables_remove_baseline:
        return Verdict(
            estimand=EstimandKind.DISEASE_ATTRIBUTABLE,
            components=EstimandKind.DISEASE_ATTRIBUTABLE.components,
            guidance_key="use_disease_attributable",
            caution_flags=("verify_baseline_removed", "treatment_excess_irreducible"),
        )
    return Verdict(
        estimand=EstimandKind.NET,
        components=EstimandKind.NET.components,
        guidance_key="net_includes_excess",
        caution_flags=("elevated_rr_inflates_gap", "treatment_excess_irreducible"),
    )


#: Registry estimates of other-cause relative risk by cancer type, sex and
#: age band at diagnosis, from mixture cure models fitted to EUROCARE-6
#: registry data (Botta and colleagues, 2025).  Example guidance only.
REGISTRY_OTHER_CAUSE_RR = {
    ("head_and_neck", "male"): {"40-59": 4.0, "60-69": 2.6, "70-79": 1.6},
    ("head_and_neck", "female"): {"40-59": 4.5, "60-69": 2.9, "70-79": 1.8},
    ("breast", "female"): {"40-59": 1.3, "60-69": 1.4, "70-79": 1.2},
    ("colorectal", "male"): {"40-59": 1.0, "60-69": 1.0, "70-79": 1.0},
    ("colorectal", "female"): {"40-59": 1.0, "60-69": 1.0, "70-79": 1.0},
}


def registry_rr(cancer_type: str, sex: str, age_band: str) -> float:
    """Look up a registry RR estimate; raises ValidationError when absent."""
    try:
        return REGISTRY_OTHER_CAUSE_RR[(cancer_type, sex)][age_band]
    except KeyError:
        types = sorted({k[0] for k in REGISTRY_OTHER_CAUSE_RR})
        raise ValidationError(
            f"no registry RR for ({cancer_type!r}, {sex!r}, {age_band!r}); "
            f"known types: {types}, bands: 40-59, 60-69, 70-79"
        ) from None
