"""Field-level dilation w^t(x) = t w(x/t^2) by cubic interpolation.

Validation-only: the minimizer never resamples fields.  This module exists
so the breakdown scaling law can be cross-checked against actually
resampled fields, with interpolation (not spectral) accuracy.
"""

from __future__ import annotations

import numpy as np
from scipy import ndimage

from .errors import RangeError, SupportError
from .spectral import Field

__all__ = ["scale_field", "support_margin"]


def support_margin(f: Field, radius: float) -> float:
    """Fraction of the squared mass outside the cube |x|_inf <= radius."""
    g = f.grid
    x = np.abs(g.axis())
    X, Y, Z = np.meshgrid(x, x, x, indexing="ij", sparse=True)
    outside = np.maximum(np.maximum(X, Y), Z) > radius
    total = float(np.sum(f.values ** 2))
    if total == 0.0:
        return 0.0
    return float(np.sum((f.values ** 2) * outside) / total)


def scale_field(f: Field, t: float, margin_tol: float = 1e-8) -> Field:
    """Resample g(x) = t f(x/t^2) with tricubic (cubic-spline) interpolation.

    f is extended by zero outside the box, so f must carry negligible mass
    outside |x|_inf <= L * min(1, t^2); the margin check guards this.
    """
    if not (t > 0.0):
        raise RangeError(f"t must be positive, got {t}")
    g = f.grid
    margin = support_margin(f, g.L * min(1.0, t * t))
    if margin > margin_tol:
        raise SupportError(
            f"squared-mass fraction {margin:.3e} outside the dilation-safe cube "
            f"exceeds {margin_tol:.1e}"
        )
    # source index of output point x: (x / t^2 + L) / h
    x = g.axis()
    src = (x / (t * t) + g.L) / g.h
    IX, IY, IZ = np.meshgrid(src, src, src, indexing="ij")
    coords = np.stack([IX.ravel(), IY.ravel(), IZ.ravel()])
    vals = ndimage.map_coordinates(
        f.values, coords, order=3, mode="constant", cval=0.0, prefilter=True
    )
    return Field(t * vals.reshape((g.n,) * 3), g)
