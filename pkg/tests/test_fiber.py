import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kirchoq import (
    Breakdown,
    FiberPolynomial,
    ModelParams,
    NoNonlocalMass,
    RangeError,
    decomposition_check,
    energy,
    fiber_derivative,
    fiber_polynomial,
    fiber_value,
    np_functional,
    project_to_manifold,
    scale_breakdown,
    solve_fiber_max,
)
from kirchoq.fiber import g_correction
from kirchoq.oracle import fiber_scan

pos = st.floats(1e-3, 1e3)


def params_for(p=2.0, q=2.0, alpha=1.0, lam=0.5, mu=1.0, nu=1.0):
    return ModelParams.from_dict(
        {"lambda": lam, "mu": mu, "nu": nu, "p": p, "q": q, "alpha": alpha}
    )


def bd_random(rng, scale=1.0):
    v = rng.uniform(0.1, 2.0, size=8) * scale
    f = rng.uniform(-0.4, 0.4) * math.sqrt(v[2] * v[3])
    return Breakdown(
        A1=v[0], A2=v[1], B1=v[2], B2=v[3], K1=v[4], K2=v[5], D=v[6], E=v[7], F=f
    )


class TestScaleBreakdown:
    def test_identity_at_one(self):
        rng = np.random.default_rng(0)
        p = params_for()
        bd = bd_random(rng)
        s = scale_breakdown(bd, 1.0, p)
        assert s == bd

    def test_powers_at_two(self):
        p = params_for(p=2.0, q=2.5, alpha=1.0)
        unit = Breakdown(1, 1, 1, 1, 1, 1, 1, 1, 1)
        s = scale_breakdown(unit, 2.0, p)
        assert s.A1 == pytest.approx(16.0)
        assert s.B1 == s.K1 == s.F == pytest.approx(256.0)
        assert s.D == pytest.approx(2.0 ** (2 * (2.0 + 1.0 + 3.0)))
        assert s.E == pytest.approx(2.0 ** (2 * (2.5 + 1.0 + 3.0)))

    def test_energy_of_scaled_equals_fiber_value(self):
        rng = np.random.default_rng(1)
        p = params_for(p=2.0, q=2.7, alpha=1.4)
        for _ in range(50):
            bd = bd_random(rng)
            poly = fiber_polynomial(bd, p)
            for t in (0.5, 1.0, 1.7):
                assert energy(p, scale_breakdown(bd, t, p)) == pytest.approx(
                    fiber_value(poly, t), rel=1e-12
                )

    def test_nonpositive_t_rejected(self):
        p = params_for()
        with pytest.raises(RangeError):
            scale_breakdown(bd_random(np.random.default_rng(2)), 0.0, p)


class TestFiberDerivative:
    def test_t_times_derivative_is_np_functional_of_scaled(self):
        rng = np.random.default_rng(3)
        p = params_for(p=1.9, q=2.4, alpha=0.8)
        for _ in range(50):
            bd = bd_random(rng)
            poly = fiber_polynomial(bd, p)
            for t in (0.5, 1.0, 1.7):
                lhs = t * fiber_derivative(poly, t)
                rhs = np_functional(p, scale_breakdown(bd, t, p))
                assert lhs == pytest.approx(rhs, rel=1e-11, abs=1e-11)

    def test_manifold_breakdown_has_critical_point_at_one(self):
        rng = np.random.default_rng(4)
        p = params_for()
        bd = bd_random(rng)
        t, bd_m = project_to_manifold(bd, p)
        poly_m = fiber_polynomial(bd_m, p)
        scale = poly_m.coeff_scale
        assert abs(fiber_derivative(poly_m, 1.0)) <= 1e-9 * scale

    def test_simple_polynomial_value(self):
        poly = FiberPolynomial(c4=1.0, c8=1.0, cp=1.0, cq=0.0, ep=12.0, eq=12.0)
        assert fiber_value(poly, 1.0) == pytest.approx(1.0)


class TestSolveFiberMax:
    def test_closed_form_root_at_one(self):
        # c4 = c8 = 1, single nonlocal coefficient 1 at exponent 12:
        # substituting s = t^4 the stationarity is 3 s^2 - 2 s - 1 = 0, s = 1
        poly = FiberPolynomial(c4=1.0, c8=1.0, cp=1.0, cq=0.0, ep=12.0, eq=12.0)
        assert solve_fiber_max(poly) == pytest.approx(1.0, abs=1e-10)

    def test_split_nonlocal_coefficients_same_root(self):
        poly = FiberPolynomial(c4=1.0, c8=1.0, cp=0.25, cq=0.75, ep=12.0, eq=12.0)
        assert solve_fiber_max(poly) == pytest.approx(1.0, abs=1e-10)

    def test_no_nonlocal_mass(self):
        with pytest.raises(NoNonlocalMass):
            solve_fiber_max(FiberPolynomial(1.0, 1.0, 0.0, 0.0, 12.0, 12.0))

    def test_degenerate(self):
        with pytest.raises(Exception):
            solve_fiber_max(FiberPolynomial(0.0, 0.0, 1.0, 0.0, 12.0, 12.0))

    @given(pos, pos, pos, pos, st.floats(1.1, 3.9), st.floats(0.2, 2.8))
    @settings(max_examples=200, deadline=None)
    def test_root_is_maximum_with_unique_sign_change(self, c4, c8, cp, cq, pq, alpha):
        lo = (3.0 + alpha) / 3.0
        hi = 3.0 + alpha
        p_exp = min(max(pq, lo), hi)
        ep = 2.0 * (p_exp + alpha + 3.0)
        eq = 2.0 * (min(p_exp + 0.3, hi) + alpha + 3.0)
        poly = FiberPolynomial(c4=c4, c8=c8, cp=cp, cq=cq, ep=ep, eq=eq)
        t = solve_fiber_max(poly)
        scale = 4 * c4 + 8 * c8 + ep * cp + eq * cq
        assert abs(fiber_derivative(poly, t)) <= 1e-9 * scale * max(t, 1.0) ** 7
        # derivative positive below, negative above
        assert fiber_derivative(poly, 0.5 * t) > 0.0
        assert fiber_derivative(poly, 2.0 * t) < 0.0

    def test_matches_dense_scan(self):
        rng = np.random.default_rng(5)
        p = params_for(p=2.2, q=2.9, alpha=1.5)
        for _ in range(20):
            bd = bd_random(rng)
            poly = fiber_polynomial(bd, p)
            t = solve_fiber_max(poly)
            t_scan, _ = fiber_scan(poly, t / 8.0, t * 8.0, 400_001)
            assert math.log(t / t_scan) == pytest.approx(0.0, abs=2e-5)


class TestProjection:
    def test_projection_zeroes_np_functional(self):
        rng = np.random.default_rng(6)
        p = params_for(p=2.1, q=2.6, alpha=1.1)
        for _ in range(30):
            bd = bd_random(rng)
            t, bd_m = project_to_manifold(bd, p)
            scale = np_functional(p, scale_breakdown(bd, 1.0, p))
            jm = np_functional(p, bd_m)
            ref = sum(abs(x) for x in (bd_m.A1, bd_m.A2, bd_m.B1, bd_m.B2,
                                       bd_m.K1, bd_m.K2, bd_m.D, bd_m.E))
            assert abs(jm) <= 1e-10 * max(ref, abs(scale))

    def test_projection_idempotent(self):
        rng = np.random.default_rng(7)
        p = params_for()
        bd = bd_random(rng)
        t1, bd_m = project_to_manifold(bd, p)
        t2, _ = project_to_manifold(bd_m, p)
        assert t2 == pytest.approx(1.0, abs=1e-8)

    def test_manifold_point_maximizes_fiber(self):
        rng = np.random.default_rng(8)
        p = params_for()
        bd = bd_random(rng)
        _, bd_m = project_to_manifold(bd, p)
        poly = fiber_polynomial(bd_m, p)
        v1 = fiber_value(poly, 1.0)
        for t in np.geomspace(0.05, 20.0, 400):
            assert fiber_value(poly, float(t)) <= v1 + 1e-11 * abs(v1)


class TestDecomposition:
    def test_trivial_at_one(self):
        rng = np.random.default_rng(9)
        p = params_for()
        bd = bd_random(rng)
        lhs, rhs = decomposition_check(bd, 1.0, p)
        assert lhs == pytest.approx(rhs, rel=1e-14)

    @given(st.floats(0.2, 4.0))
    @settings(max_examples=200, deadline=None)
    def test_identity_fuzz(self, t):
        rng = np.random.default_rng(int(t * 1e6) % 2 ** 31)
        p = params_for(p=2.0, q=2.6, alpha=1.3)
        bd = bd_random(rng)
        lhs, rhs = decomposition_check(bd, t, p)
        assert abs(lhs - rhs) <= 1e-11 * max(1.0, abs(lhs))

    def test_g_positive_off_one(self):
        for alpha in (0.5, 1.0, 2.0):
            for r in ((3 + alpha) / 3.0, 2.0, 3.0 + alpha):
                assert g_correction(r, alpha, 1.0) == pytest.approx(0.0, abs=1e-12)
                for t in (0.3, 0.9, 1.5, 3.0):
                    if abs(t - 1.0) > 1e-12:
                        assert g_correction(r, alpha, t) > 0.0


class TestMonotoneCoupling:
    def test_max_decreases_in_nonlocal_weight(self):
        rng = np.random.default_rng(10)
        p1 = params_for(mu=1.0)
        p2 = params_for(mu=2.0)
        for _ in range(20):
            bd = bd_random(rng)
            m1 = fiber_value(fiber_polynomial(bd, p1), solve_fiber_max(fiber_polynomial(bd, p1)))
            m2 = fiber_value(fiber_polynomial(bd, p2), solve_fiber_max(fiber_polynomial(bd, p2)))
            assert m2 < m1
