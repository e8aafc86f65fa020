"""Periodic-box spectral discretization and the free-space Riesz convolution.

The box is [-L, L)^3 sampled at n points per axis (n a power of two),
x_i = -L + i*h with h = 2L/n.  Derivatives are Fourier multipliers, so the
discrete integration-by-parts identity inner(-laplacian(f), f) =
grad_norm_sq(f) holds to roundoff.  The Riesz convolution is free-space:
the kernel A_alpha |x|^(alpha-3) is sampled at cell centers of the
zero-padded (2n)^3 box (ball-averaged at the singular origin cell) and
applied by FFT, which is algebraically identical to direct summation with
the same samples.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy import fft as sfft

from .core import riesz_normalization
from .errors import AllocationError, GridMismatch, RangeError

__all__ = [
    "Grid",
    "Field",
    "RieszOperator",
    "build_riesz",
    "kernel_sample_array",
    "riesz_apply",
    "laplacian",
    "grad_norm_sq",
    "l2_norm_sq",
    "inner",
    "integrate",
    "nonlocal_term",
    "radial_scale_tangent",
    "inject_refine",
    "boundary_to_peak",
    "dump_field",
    "load_field",
]

# soft cap for padded work arrays; build_riesz raises AllocationError beyond it
DEFAULT_MEMORY_CAP_BYTES = 8 << 30


@dataclass(frozen=True)
class Grid:
    """Cubic periodic grid: n points per axis on [-L, L), spacing h = 2L/n."""

    n: int
    L: float

    def __post_init__(self):
        if self.n < 8 or (self.n & (self.n - 1)) != 0:
            raise RangeError(f"n must be a power of two >= 8, got {self.n}")
        if not (self.L > 0):
            raise RangeError(f"L must be positive, got {self.L}")

    @property
    def h(self) -> float:
        return 2.0 * self.L / self.n

    @property
    def cell_volume(self) -> float:
        return self.h ** 3

    def axis(self) -> np.ndarray:
        return -self.L + self.h * np.arange(self.n)

    def coords(self):
        """Sparse meshgrid (X, Y, Z) of cell-center coordinates."""
        x = self.axis()
        return np.meshgrid(x, x, x, indexing="ij", sparse=True)

    def wavenumbers(self):
        """Sparse (KX, KY, KZ) in the rfft layout (last axis halved)."""
        k = 2.0 * np.pi * sfft.fftfreq(self.n, d=self.h)
        kr = 2.0 * np.pi * sfft.rfftfreq(self.n, d=self.h)
        return np.meshgrid(k, k, kr, indexing="ij", sparse=True)

    def k_squared(self) -> np.ndarray:
        KX, KY, KZ = self.wavenumbers()
        return KX ** 2 + KY ** 2 + KZ ** 2


class Field:
    """Real scalar field sampled on a :class:`Grid` (row-major axis order)."""

    __slots__ = ("values", "grid")

    def __init__(self, values: np.ndarray, grid: Grid):
        v = np.asarray(values, dtype=float)
        if v.shape != (grid.n,) * 3:
            raise GridMismatch(f"field shape {v.shape} does not match grid n={grid.n}")
        self.values = v
        self.grid = grid

    def copy(self) -> "Field":
        return Field(self.values.copy(), self.grid)

    @classmethod
    def zeros(cls, grid: Grid) -> "Field":
        return cls(np.zeros((grid.n,) * 3), grid)

    @classmethod
    def from_function(cls, grid: Grid, fn) -> "Field":
        X, Y, Z = grid.coords()
        return cls(np.asarray(fn(X, Y, Z), dtype=float) + np.zeros((grid.n,) * 3), grid)


def _same_grid(*fields: Field) -> Grid:
    g = fields[0].grid
    for f in fields[1:]:
        if f.grid != g:
            raise GridMismatch("fields live on different grids")
    return g


@dataclass
class RieszOperator:
    """Free-space Riesz convolution of order alpha on a fixed grid.

    ``kernel_hat`` is the rfft of the real, index-even kernel sample array
    on the padded (2n)^3 box, hence real up to roundoff; applying the
    operator to a real field returns a real field.
    """

    alpha: float
    grid: Grid
    kernel_hat: np.ndarray
    a_alpha: float

    def kernel_samples(self) -> np.ndarray:
        """Real-space kernel array on the padded box (inverse of kernel_hat)."""
        m = 2 * self.grid.n
        return sfft.irfftn(self.kernel_hat, s=(m, m, m), workers=-1)


def kernel_sample_array(grid: Grid, alpha: float) -> np.ndarray:
    """Padded (2n)^3 kernel samples A_alpha |d|^(alpha-3), ball-averaged at 0.

    Index i along an axis encodes the displacement d = i*h for i <= n and
    (i - 2n)*h beyond, so the array is even under i -> 2n - i and covers
    every displacement between two points of the unpadded box.
    """
    a_alpha = riesz_normalization(alpha)
    n, h = grid.n, grid.h
    m = 2 * n
    idx = np.arange(m)
    d = np.where(idx <= n, idx, idx - m) * h
    DX, DY, DZ = np.meshgrid(d, d, d, indexing="ij", sparse=True)
    r = np.sqrt(DX ** 2 + DY ** 2 + DZ ** 2)
    with np.errstate(divide="ignore"):
        K = a_alpha * r ** (alpha - 3.0)
    # ball of the cell's volume: exact kernel integral over it / cell volume
    rho = (3.0 / (4.0 * np.pi)) ** (1.0 / 3.0) * h
    K[0, 0, 0] = a_alpha * 4.0 * np.pi * rho ** alpha / (alpha * h ** 3)
    return K


def build_riesz(
    grid: Grid, alpha: float, memory_cap_bytes: int = DEFAULT_MEMORY_CAP_BYTES
) -> RieszOperator:
    """Sample the kernel on the padded box and store its rfft."""
    if not (0.0 < alpha < 3.0):
        raise RangeError(f"alpha must lie in (0, 3), got {alpha}")
    m = 2 * grid.n
    need = m ** 3 * 8 * 3  # kernel + padded buffer + spectrum
    if need > memory_cap_bytes:
        raise AllocationError(
            f"padded grid ({m}^3) needs ~{need >> 20} MiB > cap {memory_cap_bytes >> 20} MiB"
        )
    K = kernel_sample_array(grid, alpha)
    return RieszOperator(
        alpha=alpha,
        grid=grid,
        kernel_hat=sfft.rfftn(K, workers=-1),
        a_alpha=riesz_normalization(alpha),
    )


def _apply_raw(op: RieszOperator, values: np.ndarray) -> np.ndarray:
    n = op.grid.n
    m = 2 * n
    fp = np.zeros((m, m, m))
    fp[:n, :n, :n] = values
    out = sfft.irfftn(sfft.rfftn(fp, workers=-1) * op.kernel_hat, s=(m, m, m), workers=-1)
    return op.grid.cell_volume * out[:n, :n, :n]


def riesz_apply(op: RieszOperator, f: Field) -> Field:
    """Free-space convolution h^3 * sum_y K(x - y) f(y)."""
    if f.grid != op.grid:
        raise GridMismatch("field grid does not match operator grid")
    return Field(_apply_raw(op, f.values), f.grid)


def nonlocal_term(op: RieszOperator, f: Field, s: float) -> float:
    """D_s(f) = integral of (I_alpha * |f|^s) |f|^s, nonnegative."""
    if s < 1.0:
        raise RangeError(f"s must be >= 1, got {s}")
    if f.grid != op.grid:
        raise GridMismatch("field grid does not match operator grid")
    g = np.abs(f.values) ** s
    return float(op.grid.cell_volume * np.sum(_apply_raw(op, g) * g))


# ---------------------------------------------------------------------------
# spectral differential operators and reductions


def laplacian(f: Field) -> Field:
    """Fourier-multiplier Laplacian (multiplier -|k|^2)."""
    g = f.grid
    fh = sfft.rfftn(f.values, workers=-1)
    out = sfft.irfftn(-g.k_squared() * fh, s=(g.n,) * 3, workers=-1)
    return Field(out, g)


def integrate(f: Field) -> float:
    """h^3 * sum of samples (midpoint rule on the periodic box)."""
    return float(f.grid.cell_volume * np.sum(f.values))


def inner(f: Field, g: Field) -> float:
    """L2 inner product h^3 * sum f g."""
    grid = _same_grid(f, g)
    return float(grid.cell_volume * np.sum(f.values * g.values))


def l2_norm_sq(f: Field) -> float:
    return float(f.grid.cell_volume * np.sum(f.values ** 2))


def grad_norm_sq(f: Field) -> float:
    """|grad f|_2^2 via Parseval on the rfft spectrum.

    Interior planes of the half spectrum stand for a conjugate pair, hence
    weight two; the k3 = 0 and Nyquist planes are self-conjugate.
    """
    g = f.grid
    fh = sfft.rfftn(f.values, workers=-1)
    w = np.full(fh.shape[-1], 2.0)
    w[0] = 1.0
    w[-1] = 1.0
    total = np.sum(w * g.k_squared() * (fh.real ** 2 + fh.imag ** 2))
    return float(g.cell_volume * total / g.n ** 3)


def radial_scale_tangent(f: Field) -> Field:
    """Generator of the dilation family t -> t f(x/t^2) at t = 1: f - 2 x.grad f.

    x.grad f is computed spectrally; the minimizer uses this direction to
    separate the (numerically nearly null) dilation mode from shape updates.
    """
    g = f.grid
    fh = sfft.rfftn(f.values, workers=-1)
    KX, KY, KZ = g.wavenumbers()
    X, Y, Z = g.coords()
    n3 = (g.n,) * 3
    xdg = (
        X * sfft.irfftn(1j * KX * fh, s=n3, workers=-1)
        + Y * sfft.irfftn(1j * KY * fh, s=n3, workers=-1)
        + Z * sfft.irfftn(1j * KZ * fh, s=n3, workers=-1)
    )
    return Field(f.values - 2.0 * xdg, g)


def _pad_spectrum_axis(spec: np.ndarray, axis: int) -> np.ndarray:
    """Zero-pad one fft axis to double length, splitting the Nyquist plane."""
    n = spec.shape[axis]
    n2 = 2 * n
    shape = list(spec.shape)
    shape[axis] = n2
    out = np.zeros(shape, dtype=complex)

    def sl(i):
        s = [slice(None)] * spec.ndim
        s[axis] = i
        return tuple(s)

    out[sl(slice(0, n // 2))] = spec[sl(slice(0, n // 2))]
    out[sl(slice(n2 - n // 2 + 1, n2))] = spec[sl(slice(n // 2 + 1, n))]
    ny = spec[sl(n // 2)]
    out[sl(n // 2)] = 0.5 * ny
    out[sl(n2 - n // 2)] = 0.5 * ny
    return out


def inject_refine(f: Field) -> Field:
    """Exact trigonometric interpolation onto the doubled grid (same box)."""
    g = f.grid
    spec = sfft.fftn(f.values, workers=-1)
    for axis in range(3):
        spec = _pad_spectrum_axis(spec, axis)
    vals = np.real(sfft.ifftn(spec, workers=-1)) * 8.0
    return Field(vals, Grid(2 * g.n, g.L))


def boundary_to_peak(f: Field) -> float:
    """Max |f| on the three i = 0 faces relative to the global max |f|."""
    v = np.abs(f.values)
    peak = float(v.max())
    if peak == 0.0:
        return 0.0
    b = max(float(v[0, :, :].max()), float(v[:, 0, :].max()), float(v[:, :, 0].max()))
    return b / peak


# ---------------------------------------------------------------------------
# field I/O: raw little-endian float64 + JSON sidecar


def dump_field(f: Field, path: str, alpha: float | None = None) -> None:
    """Write row-major little-endian float64 samples and a JSON sidecar."""
    arr = np.ascontiguousarray(f.values, dtype="<f8")
    with open(path, "wb") as fh:
        fh.write(arr.tobytes())
    sidecar = {
        "n": f.grid.n,
        "L": f.grid.L,
        "alpha": alpha,
        "axis_order": "xyz-row-major",
        "dtype": "<f8",
    }
    with open(path + ".json", "w") as fh:
        json.dump(sidecar, fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_field(path: str) -> tuple[Field, dict]:
    with open(path + ".json") as fh:
        meta = json.load(fh)
    n = int(meta["n"])
    raw = np.fromfile(path, dtype="<f8")
    if raw.size != n ** 3:
        raise ValueError(f"expected {n ** 3} samples, file holds {raw.size}")
    grid = Grid(n, float(meta["L"]))
    return Field(raw.reshape((n, n, n)).astype(float), grid), meta
