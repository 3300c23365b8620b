"""netsurv: survival estimands under a four-component mortality hazard
decomposition — closed forms, a competing-risks simulation oracle,
life-table-weighted nonparametric estimation, arm-level decomposition,
and an estimand-selection advisor.
"""

from ._kernels import BACKEND
from .advisor import AdvisorAnswers, Verdict, advise, registry_rr, rr_threshold_classify
from .cohort import (
    CauseComponent,
    Cohort,
    Provenance,
    Status,
    SubjectRecord,
    load_cohort,
    simulate_cohort,
    write_cohort,
)
from .decomposition import (
    CAVEATS,
    ArmSummary,
    DecompositionReport,
    cause_a_contrast,
    decompose_trial,
)
from .errors import (
    CoverageError,
    DataFormatError,
    MissingLabelError,
    NetsurvError,
    SingularEvaluationError,
    UndefinedRatioError,
    ValidationError,
)
from .estimands import (
    EstimandCurve,
    EstimandKind,
    GapCurve,
    RR_GRID,
    ScenarioSpec,
    build_scenario,
    default_grid,
    estimand_curve,
    gap_curve,
    scenario_table,
    survival,
    survival_cause_specific,
    survival_disease_attributable,
    survival_disease_specific,
    survival_net,
    survival_overall,
)
from .estimators import (
    StepCurve,
    cause_specific_km,
    disease_attributable_km,
    kaplan_meier,
    overall_km,
    pohar_perme,
    smr,
)
from .fixtures import fixture, trial_cohort, trial_life_table
from .hazards import (
    ComponentModel,
    ConstantHazard,
    HazardFunction,
    PiecewiseConstantHazard,
    RelativeRiskProfile,
    WeibullHazard,
    ZeroHazard,
    relative_risk,
)
from .lifetable import (
    DemographicProfile,
    LifeTable,
    Sex,
    coverage_gaps,
    expected_hazard,
    expected_survival,
    load_life_table,
    profile_hazard,
    write_life_table,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "__version__",
    # hazards
    "HazardFunction",
    "WeibullHazard",
    "ConstantHazard",
    "ZeroHazard",
    "PiecewiseConstantHazard",
    "ComponentModel",
    "RelativeRiskProfile",
    "relative_risk",
    # estimands
    "EstimandKind",
    "ScenarioSpec",
    "EstimandCurve",
    "GapCurve",
    "RR_GRID",
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
    # life tables
    "Sex",
    "DemographicProfile",
    "LifeTable",
    "load_life_table",
    "write_life_table",
    "expected_hazard",
    "expected_survival",
    "profile_hazard",
    "coverage_gaps",
    # cohorts
    "Status",
    "CauseComponent",
    "SubjectRecord",
    "Provenance",
    "Cohort",
    "simulate_cohort",
    "load_cohort",
    "write_cohort",
    # estimators
    "StepCurve",
    "kaplan_meier",
    "overall_km",
    "cause_specific_km",
    "disease_attributable_km",
    "pohar_perme",
    "smr",
    # decomposition
    "CAVEATS",
    "ArmSummary",
    "DecompositionReport",
    "decompose_trial",
    "cause_a_contrast",
    # advisor
    "AdvisorAnswers",
    "Verdict",
    "advise",
    "rr_threshold_classify",
    "registry_rr",
    # fixtures
    "fixture",
    "trial_cohort",
    "trial_life_table",
    # errors
    "NetsurvError",
    "ValidationError",
    "DataFormatError",
    "SingularEvaluationError",
    "UndefinedRatioError",
    "CoverageError",
    "MissingLabelError",
]
