"""The dilation fiber of the energy and its unique interior maximizer.

Along the family w^t(x) = t w(x / t^2) the energy becomes a generalized
polynomial

    zeta(t) = c4 t^4 + c8 t^8 - cp t^ep - cq t^eq,

with ep = 2(p + alpha + 3) and eq = 2(q + alpha + 3), both > 8 on the
admissible exponent range.  zeta has exactly one critical point on
(0, inf), a maximum; its value at the maximizer is the manifold value of
the pair, and t zeta'(t) equals the manifold functional J of the scaled
breakdown.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import ModelParams
from .errors import DegenerateInput, NoNonlocalMass, RangeError
from .functionals import Breakdown, energy, np_functional

__all__ = [
    "FiberPolynomial",
    "fiber_polynomial",
    "scale_breakdown",
    "fiber_value",
    "fiber_derivative",
    "solve_fiber_max",
    "project_to_manifold",
    "decomposition_check",
    "g_correction",
]


@dataclass(frozen=True)
class FiberPolynomial:
    """Coefficients and exponents of zeta(t) for one breakdown."""

    c4: float
    c8: float
    cp: float
    cq: float
    ep: float
    eq: float

    @property
    def coeff_scale(self) -> float:
        return max(abs(self.c4), abs(self.c8), self.cp, self.cq)


def fiber_polynomial(bd: Breakdown, params: ModelParams) -> FiberPolynomial:
    """c4 = A/2, c8 = B/2 + K/4 - lam F, cp = mu D/(2p), cq = nu E/(2q)."""
    return FiberPolynomial(
        c4=0.5 * (bd.A1 + bd.A2),
        c8=0.5 * (bd.B1 + bd.B2) + 0.25 * (bd.K1 + bd.K2) - params.lam * bd.F,
        cp=params.mu * bd.D / (2.0 * params.p),
        cq=params.nu * bd.E / (2.0 * params.q),
        ep=2.0 * (params.p + params.alpha + 3.0),
        eq=2.0 * (params.q + params.alpha + 3.0),
    )


def scale_breakdown(bd: Breakdown, t: float, params: ModelParams) -> Breakdown:
    """Breakdown of the dilated pair: A ~ t^4, B,K,F ~ t^8, D ~ t^ep, E ~ t^eq."""
    if not (t > 0.0):
        raise RangeError(f"scale parameter must be positive, got {t}")
    t4 = t ** 4
    t8 = t ** 8
    return Breakdown(
        A1=t4 * bd.A1,
        A2=t4 * bd.A2,
        B1=t8 * bd.B1,
        B2=t8 * bd.B2,
        K1=t8 * bd.K1,
        K2=t8 * bd.K2,
        D=t ** (2.0 * (params.p + params.alpha + 3.0)) * bd.D,
        E=t ** (2.0 * (params.q + params.alpha + 3.0)) * bd.E,
        F=t8 * bd.F,
    )


def fiber_value(poly: FiberPolynomial, t: float) -> float:
    if not (t > 0.0):
        raise RangeError(f"t must be positive, got {t}")
    return (
        poly.c4 * t ** 4
        + poly.c8 * t ** 8
        - poly.cp * t ** poly.ep
        - poly.cq * t ** poly.eq
    )


def fiber_derivative(poly: FiberPolynomial, t: float) -> float:
    if not (t > 0.0):
        raise RangeError(f"t must be positive, got {t}")
    return (
        4.0 * poly.c4 * t ** 3
        + 8.0 * poly.c8 * t ** 7
        - poly.ep * poly.cp * t ** (poly.ep - 1.0)
        - poly.eq * poly.cq * t ** (poly.eq - 1.0)
    )


def _phi(poly: FiberPolynomial, t: float) -> float:
    """zeta'(t) / t^3, better conditioned near zero."""
    return (
        4.0 * poly.c4
        + 8.0 * poly.c8 * t ** 4
        - poly.ep * poly.cp * t ** (poly.ep - 4.0)
        - poly.eq * poly.cq * t ** (poly.eq - 4.0)
    )


def solve_fiber_max(poly: FiberPolynomial, rel_tol: float = 1e-13) -> float:
    """Unique positive root of zeta', located by bracketed bisection/Newton.

    phi(t) = zeta'(t)/t^3 is positive near zero (c4, c8 >= 0, not both
    zero under the coupling bound) and negative at infinity because
    ep, eq > 8, so a sign-change bracket always exists.
    """
    if poly.cp + poly.cq <= 0.0:
        raise NoNonlocalMass("cp + cq = 0: zeta is increasing, no maximizer")
    if poly.c4 + poly.c8 <= 0.0:
        raise DegenerateInput("c4 + c8 <= 0: degenerate fiber polynomial")
    hi = 1.0
    guard = 0
    while _phi(poly, hi) > 0.0:
        hi *= 2.0
        guard += 1
        if guard > 2100:
            raise RangeError("fiber bracket expansion overflow")
    lo = hi * 0.5 if hi > 1.0 else 1.0
    while _phi(poly, lo) < 0.0:
        lo *= 0.5
        guard += 1
        if guard > 4200:
            raise RangeError("fiber bracket shrink underflow")
    # bisection with safeguarded Newton refinement on phi
    scale = 4.0 * poly.c4 + 8.0 * poly.c8 + poly.ep * poly.cp + poly.eq * poly.cq
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        pm = _phi(poly, mid)
        if pm > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    t = 0.5 * (lo + hi)
    for _ in range(4):  # Newton polish inside the bracket
        f = _phi(poly, t)
        df = (
            32.0 * poly.c8 * t ** 3
            - poly.ep * (poly.ep - 4.0) * poly.cp * t ** (poly.ep - 5.0)
            - poly.eq * (poly.eq - 4.0) * poly.cq * t ** (poly.eq - 5.0)
        )
        if df == 0.0:
            break
        t_new = t - f / df
        if not (lo <= t_new <= hi):
            break
        t = t_new
        if abs(f) <= rel_tol * scale:
            break
    return t


def project_to_manifold(
    bd: Breakdown, params: ModelParams
) -> tuple[float, Breakdown]:
    """Scale the breakdown to its manifold point: J(scaled) = 0."""
    poly = fiber_polynomial(bd, params)
    t = solve_fiber_max(poly)
    return t, scale_breakdown(bd, t, params)


def g_correction(r: float, alpha: float, t: float) -> float:
    """g(r, t) = (r+alpha+3)/(8r) (1 - t^8) - (1 - t^(2(r+alpha+3)))/(2r).

    Vanishes at t = 1 and is positive elsewhere on the admissible range
    (3+alpha)/3 <= r <= 3+alpha.
    """
    if not (t > 0.0):
        raise RangeError(f"t must be positive, got {t}")
    e = 2.0 * (r + alpha + 3.0)
    return (r + alpha + 3.0) / (8.0 * r) * (1.0 - t ** 8) - (1.0 - t ** e) / (2.0 * r)


def decomposition_check(
    bd: Breakdown, t: float, params: ModelParams
) -> tuple[float, float]:
    """Exact energy decomposition along the fiber.

    lhs = I(bd); rhs = I(scaled bd) + (1 - t^8)/8 J(bd)
    + (1 - t^4)^2/4 (A1 + A2) + g(p, t) mu D + g(q, t) nu E.
    The two sides agree to roundoff for every breakdown and t > 0.
    """
    if not (t > 0.0):
        raise RangeError(f"t must be positive, got {t}")
    lhs = energy(params, bd)
    scaled = scale_breakdown(bd, t, params)
    rhs = (
        energy(params, scaled)
        + (1.0 - t ** 8) / 8.0 * np_functional(params, bd)
        + (1.0 - t ** 4) ** 2 / 4.0 * (bd.A1 + bd.A2)
        + g_correction(params.p, params.alpha, t) * params.mu * bd.D
        + g_correction(params.q, params.alpha, t) * params.nu * bd.E
    )
    return lhs, rhs


def amplitude_for_target_t(
    bd: Breakdown, params: ModelParams, target_t: float
) -> float:
    """Amplitude c such that the pair (c u, c v) has fiber maximizer target_t.

    Amplitude scaling maps the breakdown to (c^2 A, c^2 B, c^4 K,
    c^(2p) D, c^(2q) E, c^2 F); the maximizer t*(c) decreases continuously
    in c from +inf to a limit, so the scalar equation is solved by
    bisection.  Used by the minimizer to steer the representative's
    position along its fiber without resampling any field.
    """
    if not (target_t > 0.0):
        raise RangeError(f"target t must be positive, got {target_t}")

    def t_of(c: float) -> float:
        c2 = c * c
        scaled = Breakdown(
            A1=c2 * bd.A1,
            A2=c2 * bd.A2,
            B1=c2 * bd.B1,
            B2=c2 * bd.B2,
            K1=c2 ** 2 * bd.K1,
            K2=c2 ** 2 * bd.K2,
            D=c ** (2.0 * params.p) * bd.D,
            E=c ** (2.0 * params.q) * bd.E,
            F=c2 * bd.F,
        )
        return solve_fiber_max(fiber_polynomial(scaled, params))

    lo = hi = 1.0
    guard = 0
    if t_of(1.0) < target_t:
        while t_of(lo) < target_t:
            lo *= 0.8
            guard += 1
            if guard > 500:
                raise RangeError("no amplitude reaches the requested fiber position")
        hi = lo / 0.8
    else:
        while t_of(hi) > target_t:
            hi *= 1.25
            guard += 1
            if guard > 500:
                raise RangeError("no amplitude reaches the requested fiber position")
        lo = hi / 1.25
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if t_of(mid) > target_t:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def log_fiber_gap(poly: FiberPolynomial) -> float:
    """|log t*| of the polynomial; zero when the pair sits on the manifold."""
    return abs(math.log(solve_fiber_max(poly)))
