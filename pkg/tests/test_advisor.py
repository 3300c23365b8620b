import itertools

import pytest

from netsurv import (
    AdvisorAnswers,
    EstimandKind,
    ValidationError,
    Verdict,
    advise,
    registry_rr,
    rr_threshold_classify,
)
from netsurv.advisor import GUIDANCE, REGISTRY_OTHER_CAUSE_RR


def answers(removed=True, rr_one=False, cod=False, strat=False, **kw):
    return AdvisorAnswers(
        removed_general_population_mortality=removed,
        rr_approximately_one=rr_one,
        reliable_cause_of_death=cod,
        lifetables_remove_baseline=strat,
        **kw,
    )


def test_all_sixteen_answer_vectors():
    """Exhaustive truth table: every combination lands on the right leaf."""
    for removed, rr_one, cod, strat in itertools.product([False, True], repeat=4):
        v = advise(answers(removed, rr_one, cod, strat))
        if not removed:
            expected = EstimandKind.OVERALL
        elif rr_one:
            expected = EstimandKind.DISEASE_SPECIFIC
        elif cod:
            expected = EstimandKind.CAUSE_SPECIFIC
        elif strat:
            expected = EstimandKind.DISEASE_ATTRIBUTABLE
        else:
            expected = EstimandKind.NET
        assert v.estimand is expected, (removed, rr_one, cod, strat)
        assert v.components == expected.components


class TestLeaves:
    def test_overall(self):
        v = advise(answers(removed=False, rr_one=True, cod=True, strat=True))
        assert v.estimand is EstimandKind.OVERALL
        assert v.guidance_key == "overall_not_comparable"
        assert v.caution_flags == ()

    def test_disease_specific(self):
        v = advise(answers(rr_one=True))
        assert v.estimand is EstimandKind.DISEASE_SPECIFIC
        assert v.components == "A"
        assert v.guidance_key == "net_matches_disease_specific"

    def test_cause_specific(self):
        v = advise(answers(cod=True))
        assert v.estimand is EstimandKind.CAUSE_SPECIFIC
        assert v.components == "A+some C"
        assert v.guidance_key == "use_cause_specific"

    def test_disease_attributable(self):
        v = advise(answers(strat=True))
        assert v.estimand is EstimandKind.DISEASE_ATTRIBUTABLE
        assert v.guidance_key == "use_disease_attributable"
        assert set(v.caution_flags) == {
            "verify_baseline_removed",
            "treatment_excess_irreducible",
        }

    def test_net_fallback(self):
        v = advise(answers())
        assert v.estimand is EstimandKind.NET
        assert v.guidance_key == "net_includes_excess"
        assert set(v.caution_flags) == {
            "elevated_rr_inflates_gap",
            "treatment_excess_irreducible",
        }

    def test_short_circuit_ignores_moot_answers(self):
        # once RR ~ 1 settles it, coding and stratification are irrelevant
        a = advise(answers(rr_one=True, cod=True, strat=True))
        b = advise(answers(rr_one=True, cod=False, strat=False))
        assert a == b


class TestThreshold:
    def test_boundary_is_inclusive(self):
        assert rr_threshold_classify(1.1) == "approximately_one"
        assert rr_threshold_classify(1.1000001) == "elevated"
        assert rr_threshold_classify(1.0) == "approximately_one"
        assert rr_threshold_classify(0.8) == "approximately_one"

    def test_custom_threshold(self):
        assert rr_threshold_classify(1.3, threshold=1.5) == "approximately_one"
        assert rr_threshold_classify(1.6, threshold=1.5) == "elevated"

    def test_validation(self):
        with pytest.raises(ValidationError):
            rr_threshold_classify(-0.5)
        with pytest.raises(ValidationError):
            rr_threshold_classify(2.0, threshold=0.9)

    def test_observed_rr_overrides_stated_answer(self):
        # the measured RR of 2.6 contradicts the claimed rr ~ 1 and wins
        v = advise(answers(rr_one=True, cod=True, observed_rr=2.6))
        assert v.estimand is EstimandKind.CAUSE_SPECIFIC
        # and the other way: a measured 1.02 overrides a claimed elevation
        v = advise(answers(rr_one=False, observed_rr=1.02))
        assert v.estimand is EstimandKind.DISEASE_SPECIFIC

    def test_observed_rr_with_custom_threshold(self):
        v = advise(answers(observed_rr=1.3, rr_threshold=1.4))
        assert v.estimand is EstimandKind.DISEASE_SPECIFIC


class TestAnswerValidation:
    def test_non_bool_rejected(self):
        with pytest.raises(ValidationError, match="True or False"):
            answers(removed="yes")

    def test_negative_observed_rr(self):
        with pytest.raises(ValidationError):
            answers(observed_rr=-1.0)


class TestVerdictSerialization:
    def test_to_dict_includes_rendered_text(self):
        d = advise(answers()).to_dict()
        assert d["estimand"] == "net"
        assert d["components"] == "A+B+C"
        assert d["guidance"] == GUIDANCE["net_includes_excess"]
        assert "elevated_rr_inflates_gap" in d["cautions"]

    def test_every_guidance_key_reachable(self):
        reached = {
            advise(answers(removed=False)).guidance_key,
            advise(answers(rr_one=True)).guidance_key,
            advise(answers(cod=True)).guidance_key,
            advise(answers(strat=True)).guidance_key,
            advise(answers()).guidance_key,
        }
        assert reached == set(GUIDANCE)


class TestRegistryRR:
    def test_lookup(self):
        assert registry_rr("head_and_neck", "male", "60-69") == 2.6
        assert registry_rr("breast", "female", "70-79") == 1.2

    def test_unknown_combination(self):
        with pytest.raises(ValidationError, match="no registry RR"):
            registry_rr("breast", "male", "60-69")
        with pytest.raises(ValidationError, match="bands"):
            registry_rr("breast", "female", "80-89")

    def test_registry_drives_the_tree(self):
        # elderly head-and-neck male: RR 1.6 stays elevated at the default cutoff
        rr = registry_rr("head_and_neck", "male", "70-79")
        v = advise(answers(observed_rr=rr))
        assert v.estimand is EstimandKind.NET
        # colorectal sits at RR 1.0 across bands: disease-specific is safe
        rr = registry_rr("colorectal", "female", "60-69")
        v = advise(answers(observed_rr=rr))
        assert v.estimand is EstimandKind.DISEASE_SPECIFIC

    def test_table_shape(self):
        for (cancer, sex), bands in REGISTRY_OTHER_CAUSE_RR.items():
            assert set(bands) == {"40-59", "60-69", "70-79"}
            assert all(rr >= 1.0 for rr in bands.values())


def test_verdict_is_plain_data():
    v = Verdict(
        estimand=EstimandKind.NET,
        components="A+B+C",
        guidance_key="net_includes_excess",
    )
    assert v.caution_flags == ()
    assert v.to_dict()["cautions"] == {}
