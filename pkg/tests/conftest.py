import numpy as np
import pytest

from kirchoq import Field, FieldPair, Grid, ModelParams, build_riesz


@pytest.fixture(scope="session")
def grid8():
    return Grid(8, 4.0)


@pytest.fixture(scope="session")
def grid16():
    return Grid(16, 6.0)


@pytest.fixture(scope="session")
def params_base():
    return ModelParams.from_dict(
        {"a1": 1, "a2": 1, "b1": 1, "b2": 1, "V1": 1, "V2": 1,
         "lambda": 0.5, "mu": 1, "nu": 1, "p": 2, "q": 2, "alpha": 1}
    )


@pytest.fixture(scope="session")
def op8(grid8, params_base):
    return build_riesz(grid8, params_base.alpha)


@pytest.fixture(scope="session")
def op16(grid16, params_base):
    return build_riesz(grid16, params_base.alpha)


def random_field(grid, rng, smooth=False, width=None):
    if not smooth:
        return Field(rng.standard_normal((grid.n,) * 3), grid)
    X, Y, Z = grid.coords()
    w = width or grid.L / 4.0
    x0, y0 = (rng.uniform(-grid.L / 8, grid.L / 8) for _ in range(2))
    bump = np.exp(-(((X - x0) ** 2 + (Y - y0) ** 2 + Z ** 2)) / (2 * w * w))
    noise = 0.1 * rng.standard_normal((grid.n,) * 3)
    return Field(bump * (1.0 + 0.2 * rng.standard_normal()) + noise * bump, grid)


def random_pair(grid, rng, smooth=False):
    return FieldPair(random_field(grid, rng, smooth), random_field(grid, rng, smooth))
