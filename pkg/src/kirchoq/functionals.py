"""Scalar functionals of the coupled system, factored through nine integrals.

Every functional value (energy I, manifold functional J, dilation identity
value P, the self-pairing of the first variation) is an algebraic
combination of the Breakdown scalars, so scalar identities such as
J = <I'(u,v),(u,v)> + 2 P hold to roundoff once the spectral reductions are
fixed.  Field-level and breakdown-level evaluation paths are kept separate
and tested against each other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ModelParams
from .errors import GridMismatch
from .spectral import Field, RieszOperator, grad_norm_sq, inner, l2_norm_sq, laplacian

__all__ = [
    "Breakdown",
    "FieldPair",
    "breakdown",
    "energy",
    "np_functional",
    "np_scale",
    "pohozaev",
    "pairing_from_breakdown",
    "first_variation",
    "pair_inner",
    "pair_norm",
    "diagnostics_record",
]


@dataclass(frozen=True)
class Breakdown:
    """The nine scalars through which all functionals factor.

    A1 = a1 |grad u|^2, A2 = a2 |grad v|^2, B1 = V1 |u|^2, B2 = V2 |v|^2,
    K1 = b1 |grad u|^4, K2 = b2 |grad v|^4, D and E the two nonlocal
    integrals, F the coupling integral of u v.
    """

    A1: float
    A2: float
    B1: float
    B2: float
    K1: float
    K2: float
    D: float
    E: float
    F: float

    @property
    def norm_sq(self) -> float:
        """Weighted H1 norm squared of the pair: A1 + A2 + B1 + B2."""
        return self.A1 + self.A2 + self.B1 + self.B2

    def scaled(self, params: ModelParams, t: float) -> "Breakdown":
        from .fiber import scale_breakdown  # local import to avoid a cycle

        return scale_breakdown(self, t, params)


class FieldPair:
    """The two components (u, v) on a shared grid."""

    __slots__ = ("u", "v")

    def __init__(self, u: Field, v: Field):
        if u.grid != v.grid:
            raise GridMismatch("pair components live on different grids")
        self.u = u
        self.v = v

    @property
    def grid(self):
        return self.u.grid

    def copy(self) -> "FieldPair":
        return FieldPair(self.u.copy(), self.v.copy())


def pair_inner(x: FieldPair, y: FieldPair) -> float:
    return inner(x.u, y.u) + inner(x.v, y.v)


def pair_norm(x: FieldPair) -> float:
    return float(np.sqrt(l2_norm_sq(x.u) + l2_norm_sq(x.v)))


def _power(u: np.ndarray, e: float) -> np.ndarray:
    # sign(u) |u|^(e) with 0 -> 0; e > 0 throughout the admissible range
    return np.sign(u) * np.abs(u) ** e


def breakdown(params: ModelParams, op: RieszOperator, pair: FieldPair) -> Breakdown:
    """Evaluate the nine scalars with the spectral reductions."""
    if pair.grid != op.grid:
        raise GridMismatch("pair grid does not match operator grid")
    from .spectral import nonlocal_term

    gu = grad_norm_sq(pair.u)
    gv = grad_norm_sq(pair.v)
    return Breakdown(
        A1=params.a1 * gu,
        A2=params.a2 * gv,
        B1=params.V1 * l2_norm_sq(pair.u),
        B2=params.V2 * l2_norm_sq(pair.v),
        K1=params.b1 * gu ** 2,
        K2=params.b2 * gv ** 2,
        D=nonlocal_term(op, pair.u, params.p),
        E=nonlocal_term(op, pair.v, params.q),
        F=inner(pair.u, pair.v),
    )


def energy(params: ModelParams, bd: Breakdown) -> float:
    """I = (A+B)/2 + K/4 - (mu/2p) D - (nu/2q) E - lam F."""
    return (
        0.5 * (bd.A1 + bd.A2)
        + 0.5 * (bd.B1 + bd.B2)
        + 0.25 * (bd.K1 + bd.K2)
        - params.mu / (2.0 * params.p) * bd.D
        - params.nu / (2.0 * params.q) * bd.E
        - params.lam * bd.F
    )


def np_functional(params: ModelParams, bd: Breakdown) -> float:
    """J = 2A + 4B + 2K - ((p+alpha+3)/p) mu D - ((q+alpha+3)/q) nu E - 8 lam F."""
    cp = (params.p + params.alpha + 3.0) / params.p
    cq = (params.q + params.alpha + 3.0) / params.q
    return (
        2.0 * (bd.A1 + bd.A2)
        + 4.0 * (bd.B1 + bd.B2)
        + 2.0 * (bd.K1 + bd.K2)
        - cp * params.mu * bd.D
        - cq * params.nu * bd.E
        - 8.0 * params.lam * bd.F
    )


def np_scale(params: ModelParams, bd: Breakdown) -> float:
    """Sum of the absolute values of J's terms; reference for |J| residuals."""
    cp = (params.p + params.alpha + 3.0) / params.p
    cq = (params.q + params.alpha + 3.0) / params.q
    return (
        2.0 * (bd.A1 + bd.A2)
        + 4.0 * (bd.B1 + bd.B2)
        + 2.0 * (bd.K1 + bd.K2)
        + cp * params.mu * bd.D
        + cq * params.nu * bd.E
        + 8.0 * params.lam * abs(bd.F)
    )


def pohozaev(params: ModelParams, bd: Breakdown) -> float:
    """P = A/2 + 3B/2 + K/2 - ((3+a)/2p) mu D - ((3+a)/2q) nu E - 3 lam F."""
    c = 3.0 + params.alpha
    return (
        0.5 * (bd.A1 + bd.A2)
        + 1.5 * (bd.B1 + bd.B2)
        + 0.5 * (bd.K1 + bd.K2)
        - c / (2.0 * params.p) * params.mu * bd.D
        - c / (2.0 * params.q) * params.nu * bd.E
        - 3.0 * params.lam * bd.F
    )


def pairing_from_breakdown(params: ModelParams, bd: Breakdown) -> float:
    """<I'(u,v),(u,v)> as a breakdown combination: A + B + K - mu D - nu E - 2 lam F."""
    return (
        (bd.A1 + bd.A2)
        + (bd.B1 + bd.B2)
        + (bd.K1 + bd.K2)
        - params.mu * bd.D
        - params.nu * bd.E
        - 2.0 * params.lam * bd.F
    )


def first_variation(params: ModelParams, op: RieszOperator, pair: FieldPair) -> FieldPair:
    """Gradient fields (g_u, g_v) of the energy.

    g_u = -(a1 + b1 |grad u|^2) lap u + V1 u
          - mu (I_a * |u|^p) |u|^(p-2) u - lam v,
    and symmetrically for g_v.  The power |u|^(p-2) u is evaluated as
    sign(u) |u|^(p-1); since p > 1 this is continuous with 0 -> 0, so no
    singular-power error can occur on the admissible exponent range.
    """
    if pair.grid != op.grid:
        raise GridMismatch("pair grid does not match operator grid")
    from .spectral import _apply_raw

    u, v = pair.u.values, pair.v.values
    gu2 = grad_norm_sq(pair.u)
    gv2 = grad_norm_sq(pair.v)
    lu = laplacian(pair.u).values
    lv = laplacian(pair.v).values
    conv_u = _apply_raw(op, np.abs(u) ** params.p)
    conv_v = _apply_raw(op, np.abs(v) ** params.q)
    g_u = (
        -(params.a1 + params.b1 * gu2) * lu
        + params.V1 * u
        - params.mu * conv_u * _power(u, params.p - 1.0)
        - params.lam * v
    )
    g_v = (
        -(params.a2 + params.b2 * gv2) * lv
        + params.V2 * v
        - params.nu * conv_v * _power(v, params.q - 1.0)
        - params.lam * u
    )
    return FieldPair(Field(g_u, pair.grid), Field(g_v, pair.grid))


def diagnostics_record(params: ModelParams, op: RieszOperator, pair: FieldPair) -> dict:
    """Flat record of the scalars plus I, J, P and the self-pairing."""
    bd = breakdown(params, op, pair)
    return {
        "A1": bd.A1,
        "A2": bd.A2,
        "B1": bd.B1,
        "B2": bd.B2,
        "K1": bd.K1,
        "K2": bd.K2,
        "D": bd.D,
        "E": bd.E,
        "F": bd.F,
        "I": energy(params, bd),
        "J": np_functional(params, bd),
        "P": pohozaev(params, bd),
        "pairing_self": pairing_from_breakdown(params, bd),
    }
