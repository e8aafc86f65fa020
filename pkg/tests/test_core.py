import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kirchoq import (
    CouplingError,
    ExponentRegime,
    ModelParams,
    RangeError,
    riesz_normalization,
    validate_params,
)


def make(**kw):
    base = {"lambda": 0.5, "V1": 1.0, "V2": 1.0, "alpha": 1.0, "p": 2.0, "q": 2.0}
    base.update(kw)
    return ModelParams.from_dict(base)


class TestValidate:
    def test_noncritical(self):
        assert validate_params(make()) is ExponentRegime.NONCRITICAL

    def test_upper_half_critical_symbolic(self):
        p = make(p=2.0, q="upper-critical")
        assert p.q == 4.0
        assert validate_params(p) is ExponentRegime.UPPER_HALF_CRITICAL

    def test_lower_half_critical_symbolic(self):
        p = make(p="lower-critical", q=2.0)
        assert p.p == pytest.approx(4.0 / 3.0)
        assert validate_params(p) is ExponentRegime.LOWER_HALF_CRITICAL

    def test_doubly_critical(self):
        assert (
            validate_params(make(p="upper-critical", q="upper-critical"))
            is ExponentRegime.DOUBLY_CRITICAL_UPPER
        )
        assert (
            validate_params(make(p="lower-critical", q="lower-critical"))
            is ExponentRegime.DOUBLY_CRITICAL_LOWER
        )

    def test_literal_criticality_detected_only_on_exact_match(self):
        # a nearby value stays noncritical: no epsilon-promotion
        near = make(p=2.0, q=4.0 - 1e-9)
        assert validate_params(near) is ExponentRegime.NONCRITICAL
        exact = make(p=2.0, q=4.0)
        assert validate_params(exact) is ExponentRegime.UPPER_HALF_CRITICAL

    def test_coupling_error(self):
        with pytest.raises(CouplingError):
            validate_params(make(**{"lambda": 1.0}))

    def test_alpha_range(self):
        with pytest.raises(RangeError):
            validate_params(make(alpha=3.0))
        with pytest.raises(RangeError):
            validate_params(make(alpha=0.0))

    def test_exponent_ordering(self):
        with pytest.raises(RangeError):
            validate_params(make(p=3.0, q=2.0))
        with pytest.raises(RangeError):
            validate_params(make(p=1.0, q=2.0))

    def test_nonpositive_coefficient(self):
        with pytest.raises(RangeError):
            validate_params(make(mu=0.0))
        with pytest.raises(RangeError):
            validate_params(make(b1=-1.0))

    def test_open_problem_corner_unreachable(self):
        # p = 3+alpha with q = (3+alpha)/3 violates p <= q by construction
        with pytest.raises(RangeError):
            validate_params(make(p=4.0, q=4.0 / 3.0))

    @given(
        st.floats(0.01, 2.99),
        st.floats(1.0, 4.0),
        st.floats(1.0, 4.0),
        st.floats(0.01, 3.0),
    )
    @settings(max_examples=200, deadline=None)
    def test_total_on_finite_inputs(self, alpha, p, q, lam):
        cfg = make(alpha=alpha, p=p, q=q, **{"lambda": lam})
        try:
            regime = validate_params(cfg)
        except (RangeError, CouplingError):
            return
        assert isinstance(regime, ExponentRegime)


class TestRieszNormalization:
    def test_newtonian(self):
        assert riesz_normalization(2.0) == pytest.approx(1.0 / (4.0 * math.pi), rel=1e-15)

    def test_alpha_one_against_high_precision_gamma(self):
        mp = pytest.importorskip("mpmath")
        mp.mp.dps = 50
        expected = float(
            mp.gamma(mp.mpf(1)) / (mp.gamma(mp.mpf("0.5")) * mp.pi ** mp.mpf("1.5") * 2)
        )
        assert riesz_normalization(1.0) == pytest.approx(expected, rel=1e-14)

    def test_endpoints_raise(self):
        with pytest.raises(RangeError):
            riesz_normalization(0.0)
        with pytest.raises(RangeError):
            riesz_normalization(3.0)

    def test_positive_on_dense_sample(self):
        for k in range(1, 60):
            a = 3.0 * k / 60.0
            if 0.0 < a < 3.0:
                assert riesz_normalization(a) > 0.0


class TestJsonRoundtrip:
    def test_lambda_key(self):
        p = ModelParams.from_json('{"lambda": 0.25, "alpha": 1.5}')
        assert p.lam == 0.25
        assert p.to_dict()["lambda"] == 0.25

    def test_delta_derived(self):
        p = make(V1=4.0, V2=1.0, **{"lambda": 1.0})
        assert p.delta == pytest.approx(0.5)

    def test_bad_symbolic_token(self):
        with pytest.raises(RangeError):
            ModelParams.from_dict({"p": "critical-ish"})
