"""Velocity recovery from vorticity and the solenoidal projection."""

import numpy as np
import pytest

from vortexlab.biot_savart import (
    CirculationObstructionError,
    SolenoidalVectorField,
    leray_project,
    velocity_from_vorticity_2d,
    velocity_from_vorticity_3d,
)
from vortexlab.fields import (
    Grid,
    ScalarField,
    VectorField,
    curl2d,
    curl3d,
    divergence,
    gradient,
    lp_norm,
)

TWO_PI = 2.0 * np.pi


@pytest.fixture
def g2():
    return Grid(2, 64, TWO_PI)


@pytest.fixture
def g3():
    return Grid(3, 16, TWO_PI)


def random_mean_zero(grid, seed, beta=3.0):
    """Admissible random field: mean-zero, Nyquist-free, smooth decay."""
    rng = np.random.default_rng(seed)
    coeffs = np.fft.fftn(rng.standard_normal(grid.shape))
    coeffs *= (1.0 + grid.ksq()) ** (-beta / 2.0)
    coeffs.ravel()[0] = 0.0
    nyq = grid.n // 2
    for a in range(grid.dim):
        idx = [slice(None)] * grid.dim
        idx[a] = nyq
        coeffs[tuple(idx)] = 0.0
    return ScalarField.from_spectrum(grid, coeffs)


class Test2D:
    def test_zero_maps_to_zero(self, g2):
        v = velocity_from_vorticity_2d(ScalarField.zeros(g2))
        assert all(np.max(np.abs(c.samples)) == 0.0 for c in v.components)

    def test_single_mode_closed_form(self, g2):
        # w = cos x1 -> v = (0, sin x1)
        w = ScalarField.from_function(g2, lambda x, y: np.cos(x))
        v = velocity_from_vorticity_2d(w)
        x = g2.meshgrid()[0]
        assert np.max(np.abs(v.components[0].samples)) < 1e-10
        assert np.max(np.abs(v.components[1].samples - np.sin(x))) < 1e-10

    def test_curl_inverts(self, g2):
        w = random_mean_zero(g2, 2)
        v = velocity_from_vorticity_2d(w)
        back = curl2d(v)
        assert lp_norm(back - w, 2) < 1e-10 * lp_norm(w, 2)

    def test_divergence_free(self, g2):
        w = random_mean_zero(g2, 3)
        v = velocity_from_vorticity_2d(w)
        assert lp_norm(divergence(v), 2) < 1e-10 * lp_norm(v, 2)

    def test_nonzero_circulation_rejected(self, g2):
        w = ScalarField(g2, np.ones(g2.shape))
        with pytest.raises(CirculationObstructionError):
            velocity_from_vorticity_2d(w)


class Test3D:
    def _solenoidal(self, g3, seed):
        comps = [random_mean_zero(g3, seed + i) for i in range(3)]
        return leray_project(VectorField(comps))

    def test_zero_maps_to_zero(self, g3):
        v = velocity_from_vorticity_3d(VectorField.zeros(g3))
        assert all(np.max(np.abs(c.samples)) == 0.0 for c in v.components)

    def test_single_mode_closed_form(self, g3):
        # w = (0, 0, cos x1) -> v = (0, sin x1, 0)
        x = g3.meshgrid()[0]
        w = VectorField([
            ScalarField.zeros(g3),
            ScalarField.zeros(g3),
            ScalarField(g3, np.cos(x)),
        ])
        v = velocity_from_vorticity_3d(w)
        assert np.max(np.abs(v.components[0].samples)) < 1e-10
        assert np.max(np.abs(v.components[1].samples - np.sin(x))) < 1e-10
        assert np.max(np.abs(v.components[2].samples)) < 1e-10

    def test_curl_inverts_on_solenoidal_data(self, g3):
        w = self._solenoidal(g3, 40)
        v = velocity_from_vorticity_3d(w)
        back = curl3d(v)
        err = sum(lp_norm(b - a, 2) for a, b in zip(w.components, back.components))
        assert err < 1e-8 * lp_norm(w, 2)

    def test_linearity(self, g3):
        w1 = self._solenoidal(g3, 44)
        w2 = self._solenoidal(g3, 47)
        combo = velocity_from_vorticity_3d(
            VectorField([a * 2.0 + b * (-3.0)
                         for a, b in zip(w1.components, w2.components)])
        )
        parts = [
            velocity_from_vorticity_3d(w1),
            velocity_from_vorticity_3d(w2),
        ]
        for c, a, b in zip(combo.components, parts[0].components,
                           parts[1].components):
            expect = a * 2.0 + b * (-3.0)
            assert lp_norm(c - expect, 2) < 1e-10 * max(lp_norm(expect, 2), 1e-300)

    def test_nonzero_mean_component_rejected(self, g3):
        comps = [random_mean_zero(g3, 50 + i) for i in range(3)]
        comps[1] = comps[1] + ScalarField(g3, np.full(g3.shape, 0.5))
        with pytest.raises(CirculationObstructionError):
            velocity_from_vorticity_3d(VectorField(comps))


class TestLerayProjection:
    def test_gradient_field_annihilated(self, g2):
        f = random_mean_zero(g2, 7)
        p = leray_project(gradient(f))
        assert lp_norm(p, 2) < 1e-10 * max(lp_norm(gradient(f), 2), 1e-300)

    def test_idempotent(self, g3):
        u = VectorField([random_mean_zero(g3, 60 + i) for i in range(3)])
        p1 = leray_project(u)
        p2 = leray_project(p1)
        diff = sum(
            lp_norm(a - b, 2) for a, b in zip(p1.components, p2.components)
        )
        assert diff < 1e-12 * max(lp_norm(p1, 2), 1e-300)

    def test_output_divergence_free(self, g2):
        u = VectorField([random_mean_zero(g2, 70 + i) for i in range(2)])
        p = leray_project(u)
        assert lp_norm(divergence(p), 2) < 1e-10 * lp_norm(u, 2)

    def test_result_type_validates(self, g2):
        u = VectorField([random_mean_zero(g2, 80 + i) for i in range(2)])
        p = leray_project(u)
        assert isinstance(p, SolenoidalVectorField)
        with pytest.raises(ValueError):
            SolenoidalVectorField(u.components)
