import math

import numpy as np
import pytest
from scipy import special

from maskquant.errors import DomainError
from maskquant.modes import (
    BeamGeometry,
    GridSpec,
    ModeIndex,
    beam_width,
    gouy_phase,
    intensity_grid,
    lg_amplitude,
    lg_normalisation,
    norm_check,
)

G = BeamGeometry.from_rayleigh_range(0.025, 795e-9)


def test_geometry():
    assert G.rayleigh_range == pytest.approx(0.025, rel=1e-14)
    zr = G.rayleigh_range
    assert beam_width(G, 0.0) == G.w0
    assert beam_width(G, zr) == pytest.approx(math.sqrt(2) * G.w0, rel=1e-14)
    assert gouy_phase(G, zr) == pytest.approx(math.pi / 4, rel=1e-14)
    assert gouy_phase(G, -zr) == pytest.approx(-math.pi / 4, rel=1e-14)
    assert float(G.inverse_curvature(0.0)) == 0.0
    assert float(G.inverse_curvature(zr)) == pytest.approx(1 / (2 * zr))


def test_geometry_validation():
    with pytest.raises(DomainError):
        BeamGeometry(0.0)
    with pytest.raises(DomainError):
        ModeIndex(0, -1)
    with pytest.raises(DomainError):
        GridSpec(1.0, n=1)


def test_mode_index():
    assert str(ModeIndex(-2, 1)) == "(-2,1)"
    assert ModeIndex(0, 0) < ModeIndex(0, 1)


def test_amplitude_against_textbook_form():
    # independent evaluation with scipy's generalized Laguerre
    m = ModeIndex(-2, 3)
    z = 0.4 * G.rayleigh_range
    r = np.linspace(0, 3 * G.w0, 7)
    phi = 0.7
    w = beam_width(G, z)
    rc = z * (1 + (G.rayleigh_range / z) ** 2)
    k = 2 * math.pi / G.wavelength
    ref = (
        math.sqrt(2 / math.pi * math.factorial(3) / math.factorial(5)) / w
        * (math.sqrt(2) * r / w) ** 2
        * np.exp(-(r**2) / w**2)
        * special.eval_genlaguerre(3, 2, 2 * r**2 / w**2)
        * np.exp(-1j * k * r**2 / (2 * rc) - 2j * phi + 1j * (2 * 3 + 2 + 1) * gouy_phase(G, z))
    )
    np.testing.assert_allclose(lg_amplitude(G, m, r, phi, z), ref, rtol=1e-10, atol=1e-10 * abs(ref).max())


def test_normalisation_constant():
    assert lg_normalisation(ModeIndex(0, 0)) == pytest.approx(math.sqrt(2 / math.pi))


@pytest.mark.parametrize("m", [ModeIndex(0, 0), ModeIndex(0, 2), ModeIndex(1, 1), ModeIndex(-3, 0)])
@pytest.mark.parametrize("z", [-1.0, 0.0, 2.0])
def test_orthonormality(m, z):
    zz = z * G.rayleigh_range
    assert norm_check(G, m, zz) == pytest.approx(1.0, abs=1e-10)


def test_cross_overlaps_vanish():
    z = 0.5 * G.rayleigh_range
    assert norm_check(G, ModeIndex(0, 0), z, other=ModeIndex(1, 0)) == 0j
    assert abs(norm_check(G, ModeIndex(1, 0), z, other=ModeIndex(1, 2))) < 1e-10


def test_intensity_grid_symmetry_and_power():
    grid = GridSpec(4 * G.w0, 201)
    img = intensity_grid(G, ModeIndex(1, 0), 0.0, grid)
    assert img.shape == (201, 201)
    np.testing.assert_allclose(img, img[::-1, ::-1], rtol=1e-12, atol=1e-20)
    dx = grid.axis()[1] - grid.axis()[0]
    assert img.sum() * dx * dx == pytest.approx(1.0, rel=1e-6)
    assert img[100, 100] == 0.0  # doughnut centre
