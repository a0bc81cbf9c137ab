import numpy as np
import pytest

from maskquant.dilation import (
    TransferMatrix,
    alternative_completion,
    completion_invariance_check,
    dilate,
    random_unitary,
    verify_unitary,
)
from maskquant.errors import LabelMismatch, NotPassive
from maskquant.mask import CircularIris, GeneralAperture, basis_for, build_coupling_matrix
from maskquant.modes import BeamGeometry, ModeIndex

G = BeamGeometry.from_rayleigh_range()


def test_signal_block_is_bit_identical():
    b = build_coupling_matrix(G, CircularIris(0.8339 * G.w0, 0.3 * G.rayleigh_range))
    t = dilate(b)
    assert np.array_equal(t.signal_block, b.matrix)
    assert t.labels[2:] == ("A1", "A2")
    assert verify_unitary(t) < 1e-13


def test_l_block_structure():
    basis = basis_for(p_max=1, l_max=1)
    t = dilate(build_coupling_matrix(G, CircularIris(0.7 * G.w0, 0.2 * G.rayleigh_range), basis))
    assert verify_unitary(t) < 1e-13
    n = len(basis)
    for i, m in enumerate(basis):
        for j, m2 in enumerate(basis):
            if m.l != m2.l:
                for a, b in [(i, j), (i, n + j), (n + i, j), (n + i, n + j)]:
                    assert t.U[a, b] == 0


def test_general_mask_single_block():
    basis = (ModeIndex(0, 0), ModeIndex(1, 0))
    b = build_coupling_matrix(G, GeneralAperture(lambda r, phi: np.cos(phi) > 0), basis)
    t = dilate(b)
    assert verify_unitary(t) < 1e-12


def test_array_input_and_edge_cases():
    t = dilate(np.eye(2))
    assert np.allclose(t.U, np.block([[np.eye(2), np.zeros((2, 2))], [np.zeros((2, 2)), -np.eye(2)]]))
    t = dilate(np.zeros((2, 2)))
    assert verify_unitary(t) < 1e-14
    with pytest.raises(NotPassive):
        dilate(np.array([[1.1, 0], [0, 0.5]]))
    # within slack: clamped, still unitary to rounding
    t = dilate(np.array([[1 + 1e-12, 0], [0, 0.5]]))
    assert verify_unitary(t) < 1e-11


def test_random_contractions_dilate():
    rng = np.random.default_rng(4)
    for n in (1, 3, 5):
        a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        a /= np.linalg.norm(a, 2) * 1.01
        assert verify_unitary(dilate(a)) < 1e-12


def test_transfer_matrix_helpers():
    u = random_unitary(4, 0)
    assert np.linalg.norm(u @ u.conj().T - np.eye(4)) < 1e-13
    t = TransferMatrix(("x", "y", "A1", "A2"), u, 2)
    assert t.element("y", "A1") == u[1, 2]
    p = t.permuted([1, 0, 3, 2])
    assert p.element("y", "A1") == u[1, 2]
    with pytest.raises(LabelMismatch):
        t.index("z")
    with pytest.raises(LabelMismatch):
        TransferMatrix(("x",), u, 1)


def test_alternative_completion_is_different_and_unitary():
    b = build_coupling_matrix(G, CircularIris(0.8 * G.w0, 0.0))
    t = dilate(b)
    alt = alternative_completion(t, 1)
    assert verify_unitary(alt) < 1e-13
    assert np.array_equal(alt.signal_block, t.signal_block)
    assert np.abs(alt.U - t.U).max() > 0.1


@pytest.mark.parametrize("radius,z", [(0.4, -1.0), (1.0, 0.5), (1.5, 2.0)])
def test_completion_invariance(radius, z):
    b = build_coupling_matrix(G, CircularIris(radius * G.w0, z * G.rayleigh_range), basis_for(2, 0))
    assert completion_invariance_check(b) < 1e-12
