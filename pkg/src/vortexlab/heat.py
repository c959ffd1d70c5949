"""Heat semigroup and the derivative Duhamel term as spectral multipliers.

The Duhamel integrand carries an aggregate (t-s)^{-1/2} singularity at
s = t, removed by the substitution s = t - tau^2; the composite midpoint
rule in tau then sees a smooth integrand.  Node evaluation order (ascending
tau) is fixed for determinism.
"""

from dataclasses import dataclass

import numpy as np

from .fields import Grid, ScalarField, VectorField


def heat_evolve(f, t: float):
    """Apply exp(t * Laplacian) (viscosity 1) to a scalar or vector field."""
    if t < 0:
        raise ValueError(f"heat_evolve requires t >= 0, got {t}")
    if isinstance(f, VectorField):
        return VectorField([heat_evolve(c, t) for c in f.components])
    g = f.grid
    mult = np.exp(-g.ksq() * t)
    return ScalarField.from_spectrum(g, mult * f.spectrum())


@dataclass(frozen=True)
class DuhamelQuadrature:
    """Midpoint rule in the substituted variable tau = sqrt(t - s).

    Approximates integrals over s in (0, t) as sum(weights * F(nodes)),
    nodes strictly inside (0, t), weights positive.
    """

    t: float
    m: int

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError(f"quadrature horizon must be positive, got {self.t}")
        if self.m < 4:
            raise ValueError(f"need at least 4 quadrature nodes, got {self.m}")

    @property
    def nodes(self) -> np.ndarray:
        tau = (np.arange(self.m) + 0.5) * (np.sqrt(self.t) / self.m)
        return self.t - tau**2

    @property
    def weights(self) -> np.ndarray:
        root = np.sqrt(self.t)
        tau = (np.arange(self.m) + 0.5) * (root / self.m)
        return 2.0 * tau * (root / self.m)


def duhamel_derivative_term(
    g_of_s, t: float, quad: DuhamelQuadrature, grid: Grid
) -> ScalarField:
    """Integral over (0, t) of the heat-smoothed divergence of g.

    ``g_of_s(s)`` must return the spectra of the flux components (a list of
    dim complex arrays).  The per-mode multiplier is
    ``-i k_j exp(-|k|^2 (t-s))`` contracted over components, i.e. the term
    carries the sign that makes it the advective source of the vorticity
    equation.
    """
    if t <= 0:
        raise ValueError(f"duhamel_derivative_term requires t > 0, got {t}")
    ksq = grid.ksq()
    k = [grid.deriv_wavenumber(a) for a in range(grid.dim)]
    acc = np.zeros(grid.shape, dtype=np.complex128)
    for j in range(quad.m):  # ascending tau, fixed summation order
        s = quad.nodes[j]
        w = quad.weights[j]
        gh = g_of_s(s)
        div = sum(1j * k[a] * gh[a] for a in range(grid.dim))
        acc += (-w) * np.exp(-ksq * (t - s)) * div
    return ScalarField.from_spectrum(grid, acc)
