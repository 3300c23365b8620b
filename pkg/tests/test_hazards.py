import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from netsurv import (
    ComponentModel,
    ConstantHazard,
    PiecewiseConstantHazard,
    SingularEvaluationError,
    UndefinedRatioError,
    ValidationError,
    WeibullHazard,
    ZeroHazard,
)
from netsurv.hazards import RelativeRiskProfile, relative_risk, total_hazard

WEIBULL = WeibullHazard(shape=1.5, scale=5.3)


class TestClosedForms:
    def test_weibull_cumulative(self):
        # H(t) = (t/scale)^shape
        assert WEIBULL.cumulative(5.0) == pytest.approx(
            0.91630741731817375541, rel=1e-15
        )
        assert WEIBULL.survival(5.0) == pytest.approx(
            0.39999332587807302264, rel=1e-15
        )

    def test_weibull_rate(self):
        h = WeibullHazard(shape=2.0, scale=4.0)
        # h(t) = (2/4) * (t/4)
        assert h.rate(4.0) == pytest.approx(0.5)
        assert h.rate(0.0) == 0.0  # shape > 1: rate vanishes at the origin

    def test_exponential_special_case(self):
        w = WeibullHazard(shape=1.0, scale=8.0)
        c = ConstantHazard(rate_per_year=0.125)
        t = np.linspace(0, 20, 101)
        np.testing.assert_allclose(w.cumulative(t), c.cumulative(t), rtol=1e-14)
        assert c.survival(1.0) == pytest.approx(0.88249690258459540286, rel=1e-15)

    def test_piecewise_hand_case(self):
        h = PiecewiseConstantHazard(breakpoints=(1.0, 3.0), rates=(0.1, 0.2, 0.4))
        assert h.cumulative(0.5) == pytest.approx(0.05)
        assert h.cumulative(2.0) == pytest.approx(0.1 + 0.2)
        assert h.cumulative(5.0) == pytest.approx(0.1 + 0.4 + 0.8)
        # left-closed: the rate jumps at the breakpoint itself
        assert h.rate(1.0) == 0.2
        assert h.rate(3.0) == 0.4

    def test_zero_hazard(self):
        z = ZeroHazard()
        t = np.array([0.0, 1.0, 100.0])
        np.testing.assert_array_equal(z.rate(t), 0.0)
        np.testing.assert_array_equal(z.survival(t), 1.0)
        assert z.inverse_cumulative(0.0) == 0.0
        assert math.isinf(z.inverse_cumulative(0.4))


class TestValidation:
    @pytest.mark.parametrize("shape,scale", [(0.0, 5.0), (-1.0, 5.0), (1.5, 0.0),
                                             (math.nan, 5.0), (1.5, math.inf)])
    def test_weibull_params(self, shape, scale):
        with pytest.raises(ValidationError):
            WeibullHazard(shape=shape, scale=scale)

    def test_constant_rate_nonnegative(self):
        with pytest.raises(ValidationError):
            ConstantHazard(rate_per_year=-0.1)

    def test_zero_hazard_is_pinned(self):
        with pytest.raises(ValidationError):
            ZeroHazard(rate_per_year=0.01)

    @pytest.mark.parametrize(
        "bp,rates",
        [
            ((0.0, 1.0), (0.1, 0.2, 0.3)),     # breakpoint at 0
            ((2.0, 1.0), (0.1, 0.2, 0.3)),     # not increasing
            ((1.0, 1.0), (0.1, 0.2, 0.3)),     # not *strictly* increasing
            ((1.0,), (0.1,)),                  # wrong rate count
            ((1.0,), (0.1, -0.2)),             # negative rate
            ((math.inf,), (0.1, 0.2)),         # non-finite breakpoint
        ],
    )
    def test_piecewise_params(self, bp, rates):
        with pytest.raises(ValidationError):
            PiecewiseConstantHazard(breakpoints=bp, rates=rates)

    def test_negative_time_rejected(self):
        with pytest.raises(ValidationError):
            WEIBULL.cumulative(-0.5)
        with pytest.raises(ValidationError):
            WEIBULL.rate(np.array([1.0, -2.0]))

    def test_nan_time_rejected(self):
        with pytest.raises(ValidationError):
            WEIBULL.survival(math.nan)

    def test_model_requires_hazards(self):
        with pytest.raises(ValidationError, match="population"):
            ComponentModel(WEIBULL, ZeroHazard(), ZeroHazard(), 0.025)


class TestSingularWeibull:
    """shape < 1 diverges at t = 0: rate() refuses, the integral doesn't."""

    h = WeibullHazard(shape=0.7, scale=3.0)

    def test_rate_at_zero_raises(self):
        with pytest.raises(SingularEvaluationError):
            self.h.rate(0.0)
        with pytest.raises(SingularEvaluationError):
            self.h.rate(np.array([0.0, 1.0]))

    def test_rate_away_from_zero_ok(self):
        assert self.h.rate(1e-9) > 0

    def test_cumulative_fine_at_zero(self):
        assert self.h.cumulative(0.0) == 0.0
        assert self.h.survival(0.0) == 1.0


class TestScalarArrayContract:
    def test_scalar_in_scalar_out(self):
        out = WEIBULL.survival(2.0)
        assert isinstance(out, float)

    def test_shape_preserved(self):
        t = np.linspace(0.1, 4, 12).reshape(3, 4)
        assert WEIBULL.rate(t).shape == (3, 4)

    def test_python_list_accepted(self):
        out = WEIBULL.cumulative([1.0, 2.0])
        assert out.shape == (2,)


HAZARDS = [
    WEIBULL,
    WeibullHazard(shape=0.8, scale=2.0),
    ConstantHazard(rate_per_year=0.3),
    PiecewiseConstantHazard(breakpoints=(0.5, 2.0, 7.0), rates=(0.0, 0.4, 0.1, 0.9)),
]


@pytest.mark.parametrize("h", HAZARDS, ids=lambda h: type(h).__name__)
def test_cumulative_matches_quadrature(h):
    """H(t) must equal the integral of the rate (adaptive quadrature oracle)."""
    pts = getattr(h, "breakpoints", ())
    for t in (0.7, 1.9, 3.3, 8.5):
        ref, err = quad(lambda u: h.rate(u), 1e-12, t,
                        points=[p for p in pts if p < t], limit=200)
        assert h.cumulative(t) == pytest.approx(ref, rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("h", HAZARDS, ids=lambda h: type(h).__name__)
def test_inverse_roundtrip(h):
    mass = np.linspace(0.01, 2.5, 40)
    t = h.inverse_cumulative(mass)
    finite = np.isfinite(t)
    np.testing.assert_allclose(h.cumulative(t[finite]), mass[finite], rtol=1e-12)


@given(
    shape=st.floats(0.2, 5.0),
    scale=st.floats(0.1, 50.0),
    t=st.floats(0.0, 100.0),
)
@settings(max_examples=200, deadline=None)
def test_weibull_survival_bounds(shape, scale, t):
    s = WeibullHazard(shape=shape, scale=scale).survival(t)
    assert 0.0 <= s <= 1.0
    if t == 0.0:
        assert s == 1.0


@given(
    a=st.floats(0.0, 1.0),
    b=st.floats(0.0, 1.0),
    c=st.floats(0.0, 1.0),
    d=st.floats(1e-6, 1.0),
    t=st.floats(0.01, 30.0),
)
@settings(max_examples=200, deadline=None)
def test_relative_risk_identity(a, b, c, d, t):
    """RR(t) == 1 + (B(t) + C(t)) / D(t) for any constant components."""
    m = ComponentModel(
        cancer=ConstantHazard(a),
        baseline_excess=ConstantHazard(b),
        treatment_excess=ConstantHazard(c),
        population=ConstantHazard(d),
    )
    rr = m.relative_risk(t)
    assert rr == pytest.approx(1.0 + (b + c) / d, rel=1e-12)
    assert total_hazard(m, t) == pytest.approx(a + b + c + d, rel=1e-12)
    assert m.excess(t) == pytest.approx(a + b + c, rel=1e-12)


class TestComponentModel:
    m = ComponentModel(
        cancer=WEIBULL,
        baseline_excess=ConstantHazard(0.01),
        treatment_excess=ConstantHazard(0.0125),
        population=ConstantHazard(0.025),
    )

    def test_components_tuple(self):
        assert self.m.components == (
            self.m.cancer, self.m.baseline_excess,
            self.m.treatment_excess, self.m.population,
        )

    def test_other_cause_sum(self):
        assert self.m.other_cause(3.0) == pytest.approx(0.0475)

    def test_rr_undefined_when_population_zero(self):
        m = ComponentModel(WEIBULL, ZeroHazard(), ZeroHazard(), ZeroHazard())
        with pytest.raises(UndefinedRatioError):
            m.relative_risk(1.0)
        with pytest.raises(UndefinedRatioError):
            relative_risk(m, np.array([1.0, 2.0]))

    def test_rr_profile_grid(self):
        prof = RelativeRiskProfile(self.m)
        grid = np.array([0.5, 1.0, 5.0])
        np.testing.assert_allclose(prof.on_grid(grid), 1.9, rtol=1e-12)
