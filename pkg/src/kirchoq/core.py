"""Model parameters, exponent-regime classification, and the Riesz constant.

The system couples two Kirchhoff-type equations through a linear term
``lambda`` and feeds each component a Choquard nonlinearity built from the
Riesz potential of order ``alpha``.  Everything downstream (functionals,
fiber map, solver) reads its coefficients from :class:`ModelParams`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum

from .errors import CouplingError, RangeError

__all__ = [
    "ModelParams",
    "ExponentRegime",
    "validate_params",
    "riesz_normalization",
    "lower_critical",
    "upper_critical",
]


def lower_critical(alpha: float) -> float:
    """Lower critical Choquard exponent (3 + alpha)/3 in three dimensions."""
    return (3.0 + alpha) / 3.0


def upper_critical(alpha: float) -> float:
    """Upper critical Choquard exponent 3 + alpha in three dimensions."""
    return 3.0 + alpha


class ExponentRegime(Enum):
    NONCRITICAL = "noncritical"
    UPPER_HALF_CRITICAL = "upper-half-critical"
    LOWER_HALF_CRITICAL = "lower-half-critical"
    DOUBLY_CRITICAL_UPPER = "doubly-critical-upper"
    DOUBLY_CRITICAL_LOWER = "doubly-critical-lower"


@dataclass(frozen=True)
class ModelParams:
    """Coefficients of the coupled system.

    ``p`` and ``q`` may be given as numbers or as the symbolic strings
    ``"lower-critical"`` / ``"upper-critical"``, which resolve exactly to
    (3+alpha)/3 and 3+alpha.  Criticality is decided by the flags recorded
    at construction, never by floating-point closeness.
    """

    a1: float = 1.0
    a2: float = 1.0
    b1: float = 1.0
    b2: float = 1.0
    V1: float = 1.0
    V2: float = 1.0
    lam: float = 0.5
    mu: float = 1.0
    nu: float = 1.0
    p: float = 2.0
    q: float = 2.0
    alpha: float = 1.0
    # exact-criticality declarations, set by the constructor helpers
    p_lower_critical: bool = False
    p_upper_critical: bool = False
    q_lower_critical: bool = False
    q_upper_critical: bool = False

    @property
    def delta(self) -> float:
        """Coupling ratio lambda / sqrt(V1 V2); assumption (V) needs delta < 1."""
        return self.lam / math.sqrt(self.V1 * self.V2)

    @staticmethod
    def _resolve_exponent(value, alpha: float):
        if isinstance(value, str):
            if value == "lower-critical":
                return lower_critical(alpha), True, False
            if value == "upper-critical":
                return upper_critical(alpha), False, True
            raise RangeError(
                f"exponent must be a number, 'lower-critical' or 'upper-critical', got {value!r}"
            )
        x = float(value)
        # declared literals equal to the critical values count as critical
        return x, x == lower_critical(alpha), x == upper_critical(alpha)

    @classmethod
    def from_dict(cls, cfg: dict) -> "ModelParams":
        """Build from a JSON-style mapping; 'lambda' is accepted for ``lam``."""
        cfg = dict(cfg)
        if "lambda" in cfg:
            cfg["lam"] = cfg.pop("lambda")
        alpha = float(cfg.get("alpha", 1.0))
        p, plc, puc = cls._resolve_exponent(cfg.get("p", 2.0), alpha)
        q, qlc, quc = cls._resolve_exponent(cfg.get("q", 2.0), alpha)
        kwargs = {
            k: float(cfg[k])
            for k in ("a1", "a2", "b1", "b2", "V1", "V2", "lam", "mu", "nu")
            if k in cfg
        }
        return cls(
            alpha=alpha,
            p=p,
            q=q,
            p_lower_critical=plc,
            p_upper_critical=puc,
            q_lower_critical=qlc,
            q_upper_critical=quc,
            **kwargs,
        )

    @classmethod
    def from_json(cls, text: str) -> "ModelParams":
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        d = {
            "a1": self.a1,
            "a2": self.a2,
            "b1": self.b1,
            "b2": self.b2,
            "V1": self.V1,
            "V2": self.V2,
            "lambda": self.lam,
            "mu": self.mu,
            "nu": self.nu,
            "p": self.p,
            "q": self.q,
            "alpha": self.alpha,
        }
        return d


def validate_params(params: ModelParams) -> ExponentRegime:
    """Check admissibility and classify the exponent regime.

    Raises :class:`RangeError` for bad alpha, non-positive coefficients or
    a violated exponent ordering, and :class:`CouplingError` when
    lambda >= sqrt(V1 V2) (no delta < 1 can satisfy the coupling bound).
    """
    a = params.alpha
    if not (0.0 < a < 3.0) or not math.isfinite(a):
        raise RangeError(f"alpha must lie in (0, 3), got {a}")
    for name in ("a1", "a2", "b1", "b2", "V1", "V2", "lam", "mu", "nu"):
        val = getattr(params, name)
        if not (val > 0.0) or not math.isfinite(val):
            raise RangeError(f"coefficient {name} must be strictly positive, got {val}")
    lc, uc = lower_critical(a), upper_critical(a)
    p, q = params.p, params.q
    if not (math.isfinite(p) and math.isfinite(q)):
        raise RangeError("exponents must be finite")
    if not (lc <= p <= q <= uc):
        raise RangeError(
            f"exponents must satisfy {lc} <= p <= q <= {uc}, got p={p}, q={q}"
        )
    if params.lam >= math.sqrt(params.V1 * params.V2):
        raise CouplingError(
            "lambda >= sqrt(V1*V2): the coupling bound requires delta < 1"
        )

    p_lower = params.p_lower_critical or p == lc
    p_upper = params.p_upper_critical or p == uc
    q_lower = params.q_lower_critical or q == lc
    q_upper = params.q_upper_critical or q == uc
    if p_upper and q_upper:
        return ExponentRegime.DOUBLY_CRITICAL_UPPER
    if p_lower and q_lower:
        return ExponentRegime.DOUBLY_CRITICAL_LOWER
    if q_upper:
        return ExponentRegime.UPPER_HALF_CRITICAL
    if p_lower:
        return ExponentRegime.LOWER_HALF_CRITICAL
    return ExponentRegime.NONCRITICAL


def riesz_normalization(alpha: float) -> float:
    """Normalization A_alpha of the Riesz kernel A_alpha |x|^(alpha-3).

    A_alpha = Gamma((3-alpha)/2) / (Gamma(alpha/2) * pi^(3/2) * 2^alpha).
    With this constant the kernel's Fourier transform is |k|^(-alpha); for
    alpha = 2 it reduces to the Newtonian 1/(4 pi).
    """
    if not (0.0 < alpha < 3.0):
        raise RangeError(f"alpha must lie in (0, 3), got {alpha}")
    return math.gamma((3.0 - alpha) / 2.0) / (
        math.gamma(alpha / 2.0) * math.pi ** 1.5 * 2.0 ** alpha
    )
