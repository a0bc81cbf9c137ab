import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from maskquant import fock
from maskquant.dilation import TransferMatrix, dilate, random_unitary
from maskquant.errors import CutoffExceeded, LabelMismatch, UnknownLabel
from maskquant.mask import DEFAULT_BASIS, CircularIris, build_coupling_matrix
from maskquant.modes import BeamGeometry

G = BeamGeometry.from_rayleigh_range()
M00, M01 = DEFAULT_BASIS


def iris_t(radius=0.8339, z=0.0):
    return dilate(build_coupling_matrix(G, CircularIris(radius * G.w0, z * G.rayleigh_range)))


def splitter_5050():
    return dilate(np.array([[1, 1j], [1j, 1]]) / math.sqrt(2))


def test_space_enumeration():
    space = fock.fock_space(3, 4)
    assert space.dim == math.comb(7, 3)
    assert space.basis[0] == (0, 0, 0)
    assert all(sum(o) <= 4 for o in space.basis)
    assert space.raise_idx.dtype == np.int64
    i = space.index[(1, 2, 0)]
    assert space.basis[space.raise_idx[1, i]] == (1, 3, 0)
    assert space.raise_sqrt[1, i] == pytest.approx(math.sqrt(3))
    assert space.raise_idx[0, space.index[(4, 0, 0)]] == -1


def test_squeezed_vacuum_amplitudes():
    s = fock.squeezed_vacuum_fock(1.0, 0.0, 24)
    # 1/cosh(1) and tanh^2(1) / (2 cosh(1)), mpmath
    assert abs(s.amplitude((0,))) ** 2 == pytest.approx(0.648054273663885399574977353226, rel=1e-14)
    assert abs(s.amplitude((2,))) ** 2 == pytest.approx(0.187944053375869627488406741183, rel=1e-14)
    assert s.amplitude((1,)) == 0
    assert s.amplitude((2,)).real < 0  # -e^{i theta} tanh r
    phase = fock.squeezed_vacuum_fock(1.0, 0.5, 4).amplitude((2,))
    assert np.angle(phase) == pytest.approx(0.5 - math.pi, abs=1e-14)
    assert fock.squeezed_vacuum_fock(0.0, 0.0, 8).amplitudes == {(0,): 1 + 0j}


@pytest.mark.parametrize(
    "n,tail",
    [
        (12, 0.0066301703708540853967071460382),
        (24, 0.000192348632656398289704947532868),
        (40, 0.00000197593465858370670861632586771),
    ],
)
def test_truncation_tail_frozen(n, tail):
    assert fock.truncation_tail(1.0, n) == pytest.approx(tail, rel=1e-9)


def test_squeezed_vacuum_validation():
    with pytest.raises(ValueError):
        fock.squeezed_vacuum_fock(1.0, 0.0, 5)
    with pytest.raises(CutoffExceeded):
        fock.FockVector((0,), {(3,): 1.0}, 2)
    with pytest.raises(ValueError):
        fock.FockVector((0,), {(-1,): 1.0}, 2)
    with pytest.raises(LabelMismatch):
        fock.FockVector((0, 0), {}, 2)


def test_identity_transfer_leaves_state():
    t = TransferMatrix((0, 1, "A1", "A2"), np.eye(4, dtype=complex), 2)
    state = fock.tensor_fock([fock.squeezed_vacuum_fock(0.6, 0.2, 8, label=0), fock.number_state((1,), (1,))], cutoff=9)
    out = fock.apply_transfer_fock(state, t)
    padded = fock.pad_vacuum(state, t.labels)
    assert set(out.amplitudes) == set(padded.amplitudes)
    for k, a in padded.amplitudes.items():
        assert out.amplitudes[k] == pytest.approx(a, abs=1e-15)


def test_hom_dip_on_lossless_splitter():
    t = splitter_5050()
    out = fock.apply_transfer_fock(fock.number_state(t.labels, (1, 1, 0, 0)), t)
    assert abs(out.amplitude((1, 1, 0, 0))) < 1e-15
    assert abs(out.amplitude((2, 0, 0, 0))) ** 2 == pytest.approx(0.5)
    assert fock.hom_coincidence(t).engine < 1e-30


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 4))
def test_norm_and_number_conservation(seed, photons):
    u = random_unitary(4, seed)
    t = TransferMatrix((0, 1, 2, 3), u, 2)
    rng = np.random.default_rng(seed)
    amps = {}
    for occ in fock.fock_space(4, photons).basis:
        if sum(occ) == photons:
            amps[occ] = complex(rng.normal(), rng.normal())
    norm = math.sqrt(sum(abs(a) ** 2 for a in amps.values()))
    state = fock.FockVector((0, 1, 2, 3), {k: a / norm for k, a in amps.items()}, photons)
    out = fock.apply_transfer_fock(state, t)
    assert out.norm2() == pytest.approx(1.0, abs=1e-12)
    assert all(sum(k) == photons for k, a in out.amplitudes.items() if abs(a) > 1e-14)


def test_two_photon_amplitude_is_permanent():
    u = random_unitary(4, 11)
    t = TransferMatrix((0, 1, 2, 3), u, 2)
    out = fock.apply_transfer_fock(fock.number_state(t.labels, (1, 1, 0, 0)), t)
    assert out.amplitude((0, 1, 1, 0)) == pytest.approx(u[1, 0] * u[2, 1] + u[2, 0] * u[1, 1], abs=1e-14)
    assert out.amplitude((0, 0, 2, 0)) == pytest.approx(math.sqrt(2) * u[2, 0] * u[2, 1], abs=1e-14)


def test_single_photon_reduced_densities():
    t = iris_t()
    j00, j01 = t.U[0, 0], t.U[1, 0]
    out = fock.apply_transfer_fock(fock.number_state(t.labels, (1, 0, 0, 0)), t)
    for lab, j in [(M00, j00), (M01, j01)]:
        rho = fock.reduced_density(out, [lab])
        np.testing.assert_allclose(rho.matrix, np.diag([1 - abs(j) ** 2, abs(j) ** 2]), atol=1e-14)
        full = fock.partial_trace_fock(fock.to_density(out), [lab])
        np.testing.assert_allclose(full.matrix, rho.matrix, atol=1e-15)


def test_single_photon_output_split():
    w, phi = fock.single_photon_output(iris_t(), M00)
    # 1 - C00^2 - C01^2 and the normalised (C01, C00), mpmath
    assert w == pytest.approx(0.316008775485703099465618142543, abs=1e-13)
    assert phi.amplitude((0, 1)) == pytest.approx(0.418528739123871192731693740478, abs=1e-13)
    assert phi.amplitude((1, 0)) == pytest.approx(0.908203553465511700978288999708, abs=1e-13)
    w, phi = fock.single_photon_output(TransferMatrix((0, 1, 2, 3), np.eye(4, dtype=complex), 2), 0)
    assert w == 0 and phi.amplitudes == {(1, 0): 1 + 0j}
    with pytest.raises(UnknownLabel):
        fock.single_photon_output(iris_t(), "A1")


def test_joint_distribution_input_and_output():
    parts = [fock.squeezed_vacuum_fock(1.0, 0.0, 24, label=m) for m in DEFAULT_BASIS]
    rho_in = fock.to_density(fock.tensor_fock(parts, cutoff=24))
    p = fock.joint_distribution(rho_in, M00, M01)
    odd = np.add.outer(np.arange(25) % 2, np.arange(25) % 2) > 0
    assert np.all(p[odd] == 0)
    # a joint cutoff clips the product's corner; only the unclipped product is uncorrelated
    product = fock.to_density(fock.tensor_fock(parts, cutoff=48))
    assert fock.photon_cov_fock(product, M00, M01) == pytest.approx(0.0, abs=1e-12)
    rho_out = fock.squeezed_pair_output(iris_t(), {m: (1.0, 0.0) for m in DEFAULT_BASIS}, 24)
    q = fock.joint_distribution(rho_out, M00, M01)
    assert q[1, 1] > 0.01
    assert q.min() >= -1e-15 and q.sum() <= 1 + 1e-12
    with pytest.raises(UnknownLabel):
        fock.joint_distribution(rho_out, M00, "nope")


def test_density_invariants():
    rho = fock.squeezed_pair_output(iris_t(0.6, 1.0), {M00: (0.8, 0.3), M01: (0.5, 1.0)}, 12)
    m = rho.matrix
    np.testing.assert_allclose(m, m.conj().T, atol=1e-12)
    assert rho.trace() <= 1 + 1e-12
    assert np.linalg.eigvalsh(m).min() >= -1e-9
    assert rho.element((0, 0), (0, 0)) == pytest.approx(rho.elements[((0, 0), (0, 0))])


def test_hom_frozen_values():
    t = iris_t()
    dist = fock.hom_coincidence(t, distinguishable=True)
    ind = fock.hom_coincidence(t)
    # C00^2 C11^2 + C01^4 and (C00 C11 + C01^2)^2, mpmath
    assert dist.engine == pytest.approx(0.0553970900757578812814193712672, abs=1e-13)
    assert ind.engine == pytest.approx(0.103942257648259491143858282145, abs=1e-13)
    c00, c01, c11 = t.U[0, 0].real, abs(t.U[0, 1]), t.U[1, 1].real
    assert fock.hom_closed_form_iris(c00, c11, c01, True) == pytest.approx(dist.engine, abs=1e-14)
    assert fock.hom_closed_form_iris(c00, c11, c01) == pytest.approx(ind.engine, abs=1e-14)


def test_wigner_single_photon():
    assert fock.wigner_fock(1, 0.0, 0.0) == pytest.approx(-1 / math.pi)
    assert fock.wigner_fock(0, 0.0, 0.0) == pytest.approx(1 / math.pi)
    assert fock.wigner_fock(1, math.sqrt(0.5), 0.0) == pytest.approx(0.0, abs=1e-16)
    total, _ = integrate.dblquad(lambda p, q: fock.wigner_fock(1, q, p), -8, 8, -8, 8, epsabs=1e-11)
    assert total == pytest.approx(1.0, abs=1e-9)
    with pytest.raises(ValueError):
        fock.wigner_fock(-1, 0.0, 0.0)


def test_ch_separable_states_respect_bound():
    vac = fock.to_density(fock.fock_vacuum((0, 1), 1))
    assert fock.ch_min(vac).value >= -1 - 1e-6
    prod = fock.tensor_fock([fock.number_state((0,), (1,)), fock.squeezed_vacuum_fock(0.5, 0.0, 10, label=1)], cutoff=11)
    assert fock.ch_min(fock.reduced_density(prod, (0, 1))).value >= -1 - 1e-6


def test_ch_balanced_single_photon_regression():
    phi = fock.FockVector((0, 1), {(1, 0): 1 / math.sqrt(2), (0, 1): 1 / math.sqrt(2)}, 1)
    res = fock.ch_min(fock.to_density(phi))
    # regression value of this implementation (seed 0, 12 starts)
    assert res.value == pytest.approx(-1.1720996601598785, abs=1e-6)
    g = fock.ch_function(fock.to_density(phi))
    x = np.array([v for d in res.displacements for v in (d.real, d.imag)])
    assert g(x) == pytest.approx(res.value, abs=1e-12)


def test_ch_needs_two_modes():
    with pytest.raises(LabelMismatch):
        fock.ch_min(fock.to_density(fock.fock_vacuum((0,), 1)))
