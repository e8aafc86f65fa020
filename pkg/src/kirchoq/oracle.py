"""Slow, independent reference implementations used as ground truth.

Each oracle reimplements an operation by a different algorithm (explicit
summation instead of FFT, dense scan instead of root-finding, finite
differences instead of analytic gradients, plain loops instead of the
breakdown shortcuts) so agreement certifies the fast path.  They ship in
the library so certification can run on user hardware via the CLI.
"""

from __future__ import annotations

import math

import numpy as np

from .core import ModelParams
from .errors import RangeError, SizeError
from .fiber import FiberPolynomial
from .functionals import Breakdown, FieldPair, breakdown, energy
from .spectral import Field, Grid, RieszOperator, kernel_sample_array, riesz_apply

__all__ = [
    "riesz_direct",
    "fiber_scan",
    "fd_directional",
    "breakdown_direct",
    "energy_direct",
    "certify",
]

_DIRECT_MAX_N = 16


def riesz_direct(grid: Grid, alpha: float, f: Field) -> Field:
    """Free-space convolution by explicit summation over all point pairs.

    Uses exactly the same kernel samples as the FFT path (including the
    ball-averaged origin cell) but a different summation order; cost n^6.
    """
    if grid.n > _DIRECT_MAX_N:
        raise SizeError(f"direct summation limited to n <= {_DIRECT_MAX_N}")
    if f.grid != grid:
        raise RangeError("field grid does not match")
    n = grid.n
    K = kernel_sample_array(grid, alpha)
    out = np.empty((n, n, n))
    idx = np.arange(n)
    for i in range(n):
        di = (i - idx) % (2 * n)
        for j in range(n):
            dj = (j - idx) % (2 * n)
            for k in range(n):
                dk = (k - idx) % (2 * n)
                out[i, j, k] = np.sum(
                    K[np.ix_(di, dj, dk)] * f.values
                )
    return Field(grid.cell_volume * out, grid)


def fiber_scan(
    poly: FiberPolynomial, t_min: float, t_max: float, count: int
) -> tuple[float, np.ndarray]:
    """Dense log-spaced scan of zeta; returns the argmax and the full table.

    Table columns: t, zeta(t), zeta'(t).
    """
    if not (0.0 < t_min < t_max):
        raise RangeError("need 0 < t_min < t_max")
    t = np.geomspace(t_min, t_max, count)
    zeta = (
        poly.c4 * t ** 4
        + poly.c8 * t ** 8
        - poly.cp * t ** poly.ep
        - poly.cq * t ** poly.eq
    )
    dzeta = (
        4.0 * poly.c4 * t ** 3
        + 8.0 * poly.c8 * t ** 7
        - poly.ep * poly.cp * t ** (poly.ep - 1.0)
        - poly.eq * poly.cq * t ** (poly.eq - 1.0)
    )
    table = np.column_stack([t, zeta, dzeta])
    return float(t[np.argmax(zeta)]), table


def fd_directional(
    params: ModelParams,
    op: RieszOperator,
    pair: FieldPair,
    direction: FieldPair,
    eps: float,
    reduced: bool = False,
) -> float:
    """Central difference of the energy (or of the fiber-max value) at pair.

    (V(pair + eps w) - V(pair - eps w)) / (2 eps) with V = I, or V = the
    fiber-maximum value when ``reduced`` is set.
    """

    def value(x: FieldPair) -> float:
        bd = breakdown(params, op, x)
        if not reduced:
            return energy(params, bd)
        from .fiber import fiber_polynomial, fiber_value, solve_fiber_max

        poly = fiber_polynomial(bd, params)
        return fiber_value(poly, solve_fiber_max(poly))

    plus = FieldPair(
        Field(pair.u.values + eps * direction.u.values, pair.grid),
        Field(pair.v.values + eps * direction.v.values, pair.grid),
    )
    minus = FieldPair(
        Field(pair.u.values - eps * direction.u.values, pair.grid),
        Field(pair.v.values - eps * direction.v.values, pair.grid),
    )
    return (value(plus) - value(minus)) / (2.0 * eps)


def breakdown_direct(params: ModelParams, op: RieszOperator, pair: FieldPair) -> Breakdown:
    """Second arithmetic path for the nine scalars.

    Gradient norms by explicit centered Fourier sums over modes, integrals
    by plain Python accumulation over a flat iterator, nonlocal terms
    through riesz_apply on |u|^p as a field product.  Slow by intent.
    """
    g = pair.grid
    h3 = g.cell_volume

    def plain_sum(arr: np.ndarray) -> float:
        acc = 0.0
        for x in arr.ravel():
            acc += float(x)
        return acc

    def grad_sq(f: Field) -> float:
        spec = np.fft.fftn(f.values)
        k = 2.0 * np.pi * np.fft.fftfreq(g.n, d=g.h)
        KX, KY, KZ = np.meshgrid(k, k, k, indexing="ij", sparse=True)
        k2 = KX ** 2 + KY ** 2 + KZ ** 2
        return float(np.sum(k2 * np.abs(spec) ** 2).real * h3 / g.n ** 3)

    gu = grad_sq(pair.u)
    gv = grad_sq(pair.v)
    conv_u = riesz_apply(op, Field(np.abs(pair.u.values) ** params.p, g))
    conv_v = riesz_apply(op, Field(np.abs(pair.v.values) ** params.q, g))
    return Breakdown(
        A1=params.a1 * gu,
        A2=params.a2 * gv,
        B1=params.V1 * h3 * plain_sum(pair.u.values ** 2),
        B2=params.V2 * h3 * plain_sum(pair.v.values ** 2),
        K1=params.b1 * gu ** 2,
        K2=params.b2 * gv ** 2,
        D=h3 * plain_sum(conv_u.values * np.abs(pair.u.values) ** params.p),
        E=h3 * plain_sum(conv_v.values * np.abs(pair.v.values) ** params.q),
        F=h3 * plain_sum(pair.u.values * pair.v.values),
    )


def energy_direct(params: ModelParams, bd: Breakdown) -> float:
    """Independent re-evaluation of the energy formula (fractions first)."""
    halves = (bd.A1 + bd.B1 + bd.A2 + bd.B2) / 2.0
    quart = (bd.K1 + bd.K2) / 4.0
    nonloc = bd.D * params.mu / (2.0 * params.p) + bd.E * params.nu / (2.0 * params.q)
    return halves + quart - nonloc - params.lam * bd.F


def certify(seed: int = 0) -> dict:
    """Self-contained oracle certification on tiny grids; per-check booleans."""
    from .core import validate_params
    from .fiber import fiber_polynomial, solve_fiber_max
    from .functionals import np_functional, pairing_from_breakdown, pohozaev
    from .spectral import build_riesz, inner

    rng = np.random.default_rng(seed)
    report: dict[str, bool | float] = {}

    grid = Grid(8, 4.0)
    params = ModelParams.from_dict({"alpha": 1.0, "p": 2.0, "q": 2.2, "lambda": 0.4})
    validate_params(params)
    op = build_riesz(grid, params.alpha)

    f = Field(rng.standard_normal((8, 8, 8)), grid)
    fast = riesz_apply(op, f)
    slow = riesz_direct(grid, params.alpha, f)
    err = np.max(np.abs(fast.values - slow.values)) / np.max(np.abs(slow.values))
    report["riesz_direct_rel_err"] = float(err)
    report["riesz_direct_ok"] = bool(err < 1e-12)

    g2 = Field(rng.standard_normal((8, 8, 8)), grid)
    lin = riesz_direct(grid, params.alpha, Field(f.values + g2.values, grid))
    lin_sum = riesz_direct(grid, params.alpha, f).values + riesz_direct(
        grid, params.alpha, g2
    ).values
    lerr = np.max(np.abs(lin.values - lin_sum)) / np.max(np.abs(lin_sum))
    report["riesz_direct_linearity_ok"] = bool(lerr < 1e-12)

    pair = FieldPair(
        Field(np.exp(-rng.random() - (grid.coords()[0] ** 2 + grid.coords()[1] ** 2 + grid.coords()[2] ** 2)), grid),
        Field(np.exp(-(grid.coords()[0] ** 2 + grid.coords()[1] ** 2 + grid.coords()[2] ** 2) / 1.5), grid),
    )
    bd_fast = breakdown(params, op, pair)
    bd_slow = breakdown_direct(params, op, pair)
    deltas = [
        abs(getattr(bd_fast, k) - getattr(bd_slow, k))
        / max(1e-300, abs(getattr(bd_slow, k)))
        for k in ("A1", "A2", "B1", "B2", "K1", "K2", "D", "E", "F")
    ]
    report["breakdown_rel_err"] = float(max(deltas))
    report["breakdown_ok"] = bool(max(deltas) < 1e-11)

    ident = np_functional(params, bd_fast) - (
        pairing_from_breakdown(params, bd_fast) + 2.0 * pohozaev(params, bd_fast)
    )
    report["np_identity_ok"] = bool(
        abs(ident) < 1e-11 * max(1.0, abs(np_functional(params, bd_fast)))
    )

    poly = fiber_polynomial(bd_fast, params)
    t_solve = solve_fiber_max(poly)
    t_scan, _ = fiber_scan(poly, 1e-3, 1e3, 2_000_001)
    report["fiber_argmax_rel_err"] = float(abs(t_solve - t_scan) / t_scan)
    report["fiber_argmax_ok"] = bool(abs(math.log(t_solve / t_scan)) < 2e-5)

    from .functionals import first_variation, pair_inner

    direction = FieldPair(
        Field(rng.standard_normal((8, 8, 8)), grid),
        Field(rng.standard_normal((8, 8, 8)), grid),
    )
    fd = fd_directional(params, op, pair, direction, eps=1e-5)
    an = pair_inner(first_variation(params, op, pair), direction)
    report["gradient_fd_rel_err"] = float(abs(fd - an) / max(1e-300, abs(an)))
    report["gradient_fd_ok"] = bool(abs(fd - an) <= 1e-6 * max(1.0, abs(an)))

    report["all_ok"] = all(
        bool(v) for k, v in report.items() if k.endswith("_ok")
    )
    return report
