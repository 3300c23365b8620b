"""Arm-level mortality decomposition at a fixed horizon.

Splits observed death percentages into the four cause components:

    D  expected other-cause deaths (life table, pooled cohort average)
    B  reference-arm other-cause deaths beyond D
    C  treated-arm other-cause deaths beyond the reference arm
    A  deaths recorded as caused by the disease (reported per arm)

B and C are identified the way a randomized two-arm comparison licenses:
randomization balances baseline health across arms, so the reference-arm
excess over the life table is attributed to baseline differences (B) and
the treated-minus-reference difference to treatment (C).  The report
records that assumption; it is not checkable from the data alone.

All percentages are computed from unrounded counts and probabilities;
display rounding to one decimal happens only at serialization.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .cohort import Cohort
from .errors import UndefinedRatioError, ValidationError
from .estimators import expected_death_probability
from .lifetable import LifeTable

__all__ = [
    "ArmSummary",
    "DecompositionReport",
    "decompose_trial",
    "cause_a_contrast",
    "CAVEATS",
]

#: Narrative keys attached to reports; values are the display sentences.
CAVEATS = {
    "randomization_identifies_b_and_c": (
        "Attributing the reference-arm excess to baseline differences and the "
        "between-arm difference to treatment assumes randomization balanced "
        "baseline health across arms."
    ),
    "competing_risks_masking": (
        "A lower disease-specific death percentage in the treated arm is not by "
        "itself evidence of benefit: treatment-induced other-cause deaths remove "
        "patients before the disease can kill them, deflating the disease-specific "
        "count through competing risks."
    ),
    "one_arm_no_c": (
        "Single-arm decomposition cannot separate treatment-induced from baseline "
        "excess; only their sum is identified."
    ),
}


@dataclass(frozen=True)
class ArmSummary:
    label: str
    n: int
    deaths_cause_a: int
    deaths_other: int
    censored: int
    cause_a_pct: float
    other_cause_pct: float
    rr: float  # other-cause % over expected %


@dataclass(frozen=True)
class DecompositionReport:
    horizon: float
    reference: ArmSummary
    treated: ArmSummary | None
    component_d_pct: float
    component_b_pp: float
    component_c_pp: float | None
    scenario_row: str
    caveat_keys: tuple

    @property
    def one_arm(self) -> bool:
        return self.treated is None

    def to_dict(self) -> dict:
        def arm(s):
            if s is None:
                return None
            return {
                "label": s.label,
                "n": s.n,
                "deaths_cause_a": s.deaths_cause_a,
                "deaths_other": s.deaths_other,
                "censored": s.censored,
                "cause_a_pct": s.cause_a_pct,
                "other_cause_pct": s.other_cause_pct,
                "rr": s.rr,
            }

        return {
            "horizon_years": self.horizon,
            "reference": arm(self.reference),
            "treated": arm(self.treated),
            "component_d_pct": self.component_d_pct,
            "component_b_pp": self.component_b_pp,
            "component_c_pp": self.component_c_pp,
            "scenario_row": self.scenario_row,
            "caveats": {k: CAVEATS[k] for k in self.caveat_keys},
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def to_text(self) -> str:
        """Fixed-width decomposition table with one-decimal display."""

        def line(label, ref, trt=""):
            return f"{label:<42}{ref:>14}{trt:>14}"

        ref = self.reference
        trt = self.treated
        rows = [
            line("", ref.label, trt.label if trt else ""),
            line("Patients", str(ref.n), str(trt.n) if trt else ""),
            line(
                "Deaths, disease (A)",
                f"{ref.deaths_cause_a} ({ref.cause_a_pct:.1f}%)",
                f"{trt.deaths_cause_a} ({trt.cause_a_pct:.1f}%)" if trt else "",
            ),
            line(
                "Deaths, other cause (B+C+D)",
                f"{ref.deaths_other} ({ref.other_cause_pct:.1f}%)",
                f"{trt.deaths_other} ({trt.other_cause_pct:.1f}%)" if trt else "",
            ),
            line(
                "Expected other-cause deaths (D)",
                f"{self.component_d_pct:.1f}%",
                f"{self.component_d_pct:.1f}%" if trt else "",
            ),
            line(
                "Other-cause relative risk",
                f"{ref.rr:.1f}",
                f"{trt.rr:.1f}" if trt else "",
            ),
            line("Baseline excess (B)", f"{self.component_b_pp:.1f} pp"),
        ]
        if self.component_c_pp is not None:
            rows.append(line("Treatment-induced excess (C)", f"{self.component_c_pp:.1f} pp"))
        rows.append(line("Horizon", f"{self.horizon:g} y"))
        width = max(len(r.rstrip()) for r in rows)
        bar = "-" * width
        body = "\n".join(r.rstrip() for r in rows)
        return f"{bar}\n{body}\n{bar}"


def _summarize_arm(label, arm: Cohort, horizon: float, d_pct: float) -> ArmSummary:
    times = arm.times
    codes = arm.status_codes
    within = times <= horizon
    n = len(arm)
    a = int(np.sum((codes == 1) & within))
    other = int(np.sum((codes == 2) & within))
    censored = n - int(np.sum(within & (codes > 0)))
    a_pct = 100.0 * a / n
    other_pct = 100.0 * other / n
    if d_pct <= 0.0:
        raise UndefinedRatioError(
            "expected other-cause mortality is zero; the relative risk and "
            "components B/C are undefined"
        )
    return ArmSummary(
        label=label,
        n=n,
        deaths_cause_a=a,
        deaths_other=other,
        censored=censored,
        cause_a_pct=a_pct,
        other_cause_pct=other_pct,
        rr=other_pct / d_pct,
    )


def decompose_trial(
    reference: Cohort,
    treated: Cohort | None,
    table: LifeTable,
    horizon: float,
) -> DecompositionReport:
    """Decompose one or two cohort arms at ``horizon`` years.

    The expected percentage D is the average expected death probability by
    the common horizon, pooled over every subject in both arms — each
    subject contributes their full-horizon expectation regardless of when
    they died or left observation.
    """
    if not (math.isfinite(horizon) and horizon > 0.0):
        raise ValidationError(f"horizon must be finite and > 0, got {horizon!r}")

    pools = [expected_death_probability(reference, table, horizon)]
    if treated is not None:
        pools.append(expected_death_probability(treated, table, horizon))
    d_pct = 100.0 * float(np.mean(np.concatenate(pools)))

    ref = _summarize_arm("reference", reference, horizon, d_pct)
    trt = _summarize_arm("treated", treated, horizon, d_pct) if treated is not None else None

    b_pp = ref.other_cause_pct - d_pct
    c_pp = (trt.other_cause_pct - ref.other_cause_pct) if trt is not None else None

    b_on = b_pp > 0.0
    c_on = c_pp is not None and c_pp > 0.0
    scenario_row = {
        (False, False): "none",
        (True, False): "baseline_only",
        (False, True): "treatment_only",
        (True, True): "both_present",
    }[(b_on, c_on)]

    caveats = ["randomization_identifies_b_and_c"]
    if trt is None:
        caveats.append("one_arm_no_c")
    return DecompositionReport(
        horizon=horizon,
        reference=ref,
        treated=trt,
        component_d_pct=d_pct,
        component_b_pp=b_pp,
        component_c_pp=c_pp,
        scenario_row=scenario_row,
        caveat_keys=tuple(caveats),
    )


@dataclass(frozen=True)
class CauseAContrast:
    risk_difference_pp: float
    reference_pct: float
    treated_pct: float
    caveat_keys: tuple

    def to_dict(self) -> dict:
        return {
            "risk_difference_pp": self.risk_difference_pp,
            "reference_pct": self.reference_pct,
            "treated_pct": self.treated_pct,
            "caveats": {k: CAVEATS[k] for k in self.caveat_keys},
        }


def cause_a_contrast(
    reference: Cohort, treated: Cohort, horizon: float
) -> CauseAContrast:
    """Treated minus reference disease-death percentage at ``horizon``.

    Always carries the competing-risks caveat: this contrast can look
    favorable purely because treatment kills through other causes first.
    """
    if not (math.isfinite(horizon) and horizon > 0.0):
        raise ValidationError(f"horizon must be finite and > 0, got {horizon!r}")

    def a_pct(arm: Cohort) -> float:
        within = (arm.status_codes == 1) & (arm.times <= horizon)
        return 100.0 * float(np.sum(within)) / len(arm)

    ref_pct = a_pct(reference)
    trt_pct = a_pct(treated)
    return CauseAContrast(
        risk_difference_pp=trt_pct - ref_pct,
        reference_pct=ref_pct,
        treated_pct=trt_pct,
        caveat_keys=("competing_risks_masking",),
    )
