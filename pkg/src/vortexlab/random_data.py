"""Deterministic test-data families shared by the CLI and the experiments."""

import numpy as np

from .bb_lab import _random_scalar
from .fields import Grid, ScalarField, VectorField, spectral_refine
from .maxwell_wave import HarmonicCurrentDensity


def two_mode_vorticity(grid: Grid, amplitude: float) -> ScalarField:
    """Mean-zero low-mode pair, amplitude * (cos k1 x + cos 2 k1 y).

    The unequal wavenumbers keep the advective term active (an equal pair
    is a steady Euler state with v . grad w = 0).
    """
    x, y = grid.meshgrid()
    k1 = 2.0 * np.pi / grid.box_length
    return ScalarField(grid, amplitude * (np.cos(k1 * x) + np.cos(2.0 * k1 * y)))


def smooth_bump(grid: Grid, width_fraction: float = 1.0 / 32.0) -> ScalarField:
    """Localized mean-zero bump: the x-derivative of a Gaussian at the box
    center (odd symmetry makes the lattice mean cancel)."""
    if grid.dim != 2:
        raise ValueError("smooth_bump is 2D")
    L = grid.box_length
    sigma = width_fraction * L
    x = grid.axis_coords()
    d = (x - L / 2.0 + L / 2.0) % L - L / 2.0
    X, Y = np.meshgrid(d, d, indexing="ij")
    g = np.exp(-(X**2 + Y**2) / (2.0 * sigma**2))
    return ScalarField(grid, (X / sigma**2) * g)


def random_vector_field(grid: Grid, rng, beta: float = 2.0) -> VectorField:
    """Mean-zero random vector field with smooth spectral decay."""
    return VectorField([_random_scalar(grid, beta, rng) for _ in range(grid.dim)])


def wave_fixture_family(grid: Grid, seed: int, count: int, beta: float = 2.0,
                        n_eval: int | None = None):
    """Seeded (B0, B1, j) triples for the mixed-norm ratio experiments.

    B0, B1 are mean-zero with smooth decay; j oscillates harmonically in
    time with a seeded frequency, so its curl never vanishes identically.
    With ``n_eval`` the same fields (fixed mode content) are resampled on a
    finer grid, for refinement-stability runs.
    """
    if grid.dim != 3:
        raise ValueError("wave fixtures are 3D")

    def refine(v: VectorField) -> VectorField:
        if n_eval is None or n_eval == grid.n:
            return v
        return VectorField([spectral_refine(c, n_eval) for c in v.components])

    out = []
    for i in range(count):
        rng = np.random.default_rng((seed, i))
        B0 = refine(random_vector_field(grid, rng, beta))
        B1 = refine(random_vector_field(grid, rng, beta))
        j_cos = refine(random_vector_field(grid, rng, beta))
        j_sin = refine(random_vector_field(grid, rng, beta))
        sigma = float(rng.uniform(0.5, 2.0)) * 2.0 * np.pi / grid.box_length
        out.append((B0, B1, HarmonicCurrentDensity(j_cos, j_sin, sigma)))
    return out
