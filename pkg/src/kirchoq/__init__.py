"""Spectral solver and verification suite for coupled Kirchhoff-Choquard systems.

Ground states are computed by minimizing the energy over the
Nehari-Pohozaev manifold through its dilation-fiber characterization; the
algebraic identities the construction rests on (manifold functional,
dilation identity, energy decomposition, coercivity) are exposed and
machine-checked by the test suite.
"""

__version__ = "0.1.0"

from .core import ExponentRegime, ModelParams, riesz_normalization, validate_params
from .errors import (
    AllocationError,
    CouplingError,
    DegenerateInput,
    GridMismatch,
    KirchoqError,
    NoNonlocalMass,
    RangeError,
    RegimeError,
    SizeError,
    SupportError,
)
from .fiber import (
    FiberPolynomial,
    decomposition_check,
    fiber_derivative,
    fiber_polynomial,
    fiber_value,
    project_to_manifold,
    scale_breakdown,
    solve_fiber_max,
)
from .functionals import (
    Breakdown,
    FieldPair,
    breakdown,
    energy,
    first_variation,
    np_functional,
    pairing_from_breakdown,
    pohozaev,
)
from .minimizer import (
    GroundStateResult,
    SolverConfig,
    minimize_ground_state,
    nonexistence_probe,
    reduced_value_and_gradient,
    sweep_mu,
    sweep_nu,
    verify_solution,
)
from .scaling import scale_field
from .spectral import (
    Field,
    Grid,
    RieszOperator,
    build_riesz,
    grad_norm_sq,
    inner,
    integrate,
    l2_norm_sq,
    laplacian,
    nonlocal_term,
    riesz_apply,
)

__all__ = [name for name in dir() if not name.startswith("_")]
