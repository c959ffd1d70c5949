"""Velocity recovery from vorticity and the divergence-free projection.

On the torus a nonzero-mean vorticity has no periodic stream function, so
mean-zero input is a hard precondition; experiments use zero-circulation
configurations (dipoles).  The inverse Laplacian zero mode is set to zero
(mean-zero gauge for the velocity).
"""

import numpy as np

from .fields import Grid, ScalarField, VectorField, divergence, lp_norm


class CirculationObstructionError(ValueError):
    """Raised for nonzero-mean vorticity: no periodic Biot-Savart velocity exists."""


def _check_mean_zero(f: ScalarField, what: str):
    scale = float(np.max(np.abs(f.samples)))
    if scale > 0 and abs(f.mean()) > 1e-10 * scale:
        raise CirculationObstructionError(
            f"circulation obstruction on torus: {what} has nonzero mean "
            f"{f.mean():.3e} (|mean| must be <= 1e-10 * max|field|)"
        )


def _inv_ksq(grid: Grid) -> np.ndarray:
    ksq = grid.ksq().copy()
    flat = ksq.ravel()
    flat[0] = 1.0  # zero mode handled separately (set to zero downstream)
    return 1.0 / ksq


class SolenoidalVectorField(VectorField):
    """VectorField whose discrete divergence is negligible relative to its size."""

    def __init__(self, components):
        super().__init__(components)
        size = lp_norm(self, 2)
        if size > 0:
            div = lp_norm(divergence(self), 2)
            if div > 1e-8 * size:
                raise ValueError(
                    f"field is not solenoidal: |div|_2 = {div:.3e} vs 1e-8 * |u|_2"
                )


def velocity_from_vorticity_2d(omega: ScalarField) -> SolenoidalVectorField:
    """2D Biot-Savart: v = (-Lap)^{-1} (d2 omega, -d1 omega)."""
    g = omega.grid
    if g.dim != 2:
        raise ValueError("velocity_from_vorticity_2d requires a 2D scalar field")
    _check_mean_zero(omega, "vorticity")
    what = omega.spectrum()
    inv = _inv_ksq(g)
    k0 = g.deriv_wavenumber(0)
    k1 = g.deriv_wavenumber(1)
    v0 = 1j * k1 * what * inv
    v1 = -1j * k0 * what * inv
    v0.ravel()[0] = 0.0
    v1.ravel()[0] = 0.0
    return SolenoidalVectorField(
        [ScalarField.from_spectrum(g, v0), ScalarField.from_spectrum(g, v1)]
    )


def velocity_from_vorticity_3d(omega: VectorField) -> SolenoidalVectorField:
    """3D Biot-Savart: v = (-Lap)^{-1} (curl omega)."""
    g = omega.grid
    if g.dim != 3:
        raise ValueError("velocity_from_vorticity_3d requires a 3D vector field")
    for c in omega.components:
        _check_mean_zero(c, "vorticity component")
    inv = _inv_ksq(g)
    k = [g.deriv_wavenumber(a) for a in range(3)]
    w = [c.spectrum() for c in omega.components]
    curl = [
        1j * (k[1] * w[2] - k[2] * w[1]),
        1j * (k[2] * w[0] - k[0] * w[2]),
        1j * (k[0] * w[1] - k[1] * w[0]),
    ]
    comps = []
    for c in curl:
        vc = c * inv
        vc.ravel()[0] = 0.0
        comps.append(ScalarField.from_spectrum(g, vc))
    return SolenoidalVectorField(comps)


def leray_project(u: VectorField) -> SolenoidalVectorField:
    """Remove the gradient part: u_hat -> u_hat - k (k . u_hat) / |k|^2.

    Uses the same Nyquist-zeroed wavenumbers as the divergence operator, so
    the output is solenoidal for that operator (Nyquist planes pass through
    untouched, as they carry no discrete derivative).
    """
    g = u.grid
    k = [g.deriv_wavenumber(a) for a in range(g.dim)]
    ksq = sum(ka**2 for ka in k)
    inv = np.where(ksq > 0, 1.0 / np.where(ksq > 0, ksq, 1.0), 0.0)
    uh = [c.spectrum() for c in u.components]
    kdotu = sum(k[a] * uh[a] for a in range(g.dim))
    proj = [uh[a] - k[a] * kdotu * inv for a in range(g.dim)]
    # pure-gradient inputs leave only roundoff; snap that to exact zero so
    # the solenoidal invariant is not tested against noise
    size_in = np.sqrt(sum(np.sum(np.abs(c) ** 2) for c in uh))
    size_out = np.sqrt(sum(np.sum(np.abs(c) ** 2) for c in proj))
    if size_out <= 1e-12 * size_in:
        proj = [np.zeros_like(c) for c in proj]
    return SolenoidalVectorField(
        [ScalarField.from_spectrum(g, ph) for ph in proj]
    )
