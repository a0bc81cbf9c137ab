"""Gaussian states on labelled modes and their propagation through a mask.

Conventions: a = (q + i p) / sqrt(2), so the vacuum has covariance I/2.
Phase-space vectors are ordered (q_1 .. q_M, p_1 .. p_M).  Noise in dB is
10 log10(variance / (1/2)).
"""

from dataclasses import dataclass

import numpy as np

from .dilation import TransferMatrix
from .errors import LabelCollision, LabelMismatch, NonZeroMean, UnknownLabel, ZeroVector
from .mask import CircularIris, DEFAULT_BASIS, build_coupling_matrix
from .modes import GridSpec

VACUUM_VARIANCE = 0.5


@dataclass(frozen=True)
class SqueezeSpec:
    """Squeezing r >= 0 at angle theta followed by a displacement alpha."""

    r: float = 0.0
    theta: float = 0.0
    alpha: complex = 0j

    def __post_init__(self):
        if self.r < 0:
            raise ValueError("squeezing parameter r must be >= 0")


@dataclass(frozen=True)
class GaussianState:
    labels: tuple
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        m = len(self.labels)
        if len(set(self.labels)) != m:
            raise LabelCollision("duplicate labels in Gaussian state")
        if self.mean.shape != (2 * m,) or self.cov.shape != (2 * m, 2 * m):
            raise LabelMismatch("mean/covariance shape does not match the labels")

    @property
    def n_modes(self):
        return len(self.labels)

    def index(self, label):
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownLabel(label) from None

    def mode_block(self, label):
        """Mean (q, p) and 2x2 covariance of one mode."""
        i, m = self.index(label), self.n_modes
        idx = [i, i + m]
        return self.mean[idx], self.cov[np.ix_(idx, idx)]

    def is_physical(self, tol=1e-9):
        m = self.n_modes
        omega = np.block([[np.zeros((m, m)), np.eye(m)], [-np.eye(m), np.zeros((m, m))]])
        sym = np.allclose(self.cov, self.cov.T, atol=1e-12)
        eig = np.linalg.eigvalsh(self.cov + 0.5j * omega)
        return bool(sym and eig.min() >= -tol)

    def purity(self):
        """Tr(rho^2) = 1 / (2^M sqrt(det cov))."""
        return float(1.0 / (2**self.n_modes * np.sqrt(np.linalg.det(self.cov))))

    def mean_photon_number(self, label=None):
        """<n> of one mode, or summed over all modes when ``label`` is None."""
        labels = self.labels if label is None else [label]
        total = 0.0
        for lab in labels:
            mu, v = self.mode_block(lab)
            total += 0.5 * (np.trace(v) + mu @ mu) - 0.5
        return float(total)


def vacuum(labels):
    labels = tuple(labels)
    m = len(labels)
    return GaussianState(labels, np.zeros(2 * m), VACUUM_VARIANCE * np.eye(2 * m))


def _rotation(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


def displaced_squeezed(spec, label=0):
    """Single-mode displaced squeezed vacuum D(alpha) S(xi) |0>, xi = r e^{i theta}."""
    rot = _rotation(spec.theta / 2.0)
    cov = rot @ np.diag([np.exp(-2 * spec.r), np.exp(2 * spec.r)]) @ rot.T * VACUUM_VARIANCE
    alpha = complex(spec.alpha)
    mean = np.sqrt(2.0) * np.array([alpha.real, alpha.imag])
    return GaussianState((label,), mean, 0.5 * (cov + cov.T))


def _split(state):
    m = state.n_modes
    return state.mean[:m], state.mean[m:], state.cov


def product(states):
    """Tensor product (direct sum of phase spaces) of Gaussian states."""
    labels = tuple(lab for s in states for lab in s.labels)
    if len(set(labels)) != len(labels):
        raise LabelCollision("product of states with overlapping labels")
    qs = np.concatenate([s.mean[: s.n_modes] for s in states])
    ps = np.concatenate([s.mean[s.n_modes :] for s in states])
    m = len(labels)
    cov = np.zeros((2 * m, 2 * m))
    offset = 0
    for s in states:
        k = s.n_modes
        src_idx = np.arange(2 * k)
        dst = np.concatenate([offset + np.arange(k), m + offset + np.arange(k)])
        cov[np.ix_(dst, dst)] = s.cov[np.ix_(src_idx, src_idx)]
        offset += k
    return GaussianState(labels, np.concatenate([qs, ps]), cov)


def reorder(state, labels):
    labels = tuple(labels)
    idx = [state.index(lab) for lab in labels]
    m = state.n_modes
    full = idx + [i + m for i in idx]
    return GaussianState(labels, state.mean[full], state.cov[np.ix_(full, full)])


def symplectic_of(u):
    """Real orthogonal-symplectic matrix of the passive map a' = U a.

    Output quadratures follow x' = S x.  Equivalently the Wigner function
    transforms as W_out(x') = W_in(S^T x'), with S^T built from Re/Im of U^dag.
    """
    re, im = u.real, u.imag
    return np.block([[re, -im], [im, re]])


def apply_transfer(state, t):
    """Propagate ``state`` through ``t``, padding missing absorption modes with vacuum."""
    missing = [lab for lab in t.labels if lab not in state.labels]
    extra = [lab for lab in state.labels if lab not in t.labels]
    if extra:
        raise LabelMismatch(f"state labels {extra} not in transfer matrix")
    absorption = set(t.absorption_labels)
    if any(lab not in absorption for lab in missing):
        raise LabelMismatch("state must cover every signal label of the transfer matrix")
    if missing:
        state = product([state, vacuum(missing)])
    state = reorder(state, t.labels)
    s = symplectic_of(t.U)
    cov = s @ state.cov @ s.T
    return GaussianState(t.labels, s @ state.mean, 0.5 * (cov + cov.T))


def partial_trace(state, keep):
    keep = tuple(keep)
    for lab in keep:
        if lab not in state.labels:
            raise UnknownLabel(lab)
    return reorder(state, keep)


def quadrature_block(state, lo_vector):
    """Mean and 2x2 covariance of the mode sum_k conj(v_k) a_k, v the normalised LO."""
    v = np.asarray(lo_vector, dtype=complex)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ZeroVector("local-oscillator vector is zero")
    v = v / norm
    m = state.n_modes
    if v.shape != (m,):
        raise LabelMismatch("LO vector length must equal the number of modes")
    x, y = v.real, v.imag
    rows = np.vstack([np.concatenate([x, y]), np.concatenate([-y, x])])
    return rows @ state.mean, rows @ state.cov @ rows.T


def to_db(variance):
    return 10.0 * np.log10(variance / VACUUM_VARIANCE)


def homodyne_min_noise(state, lo_vector):
    """Minimum quadrature noise (dB) in the mode picked out by ``lo_vector``.

    ``lo_vector`` may be an array over the state's labels or a dict label -> amplitude.
    """
    if isinstance(lo_vector, dict):
        vec = np.zeros(state.n_modes, dtype=complex)
        for lab, amp in lo_vector.items():
            vec[state.index(lab)] = amp
        lo_vector = vec
    _, block = quadrature_block(state, lo_vector)
    return float(to_db(np.linalg.eigvalsh(block)[0]))


def squeeze_antisqueeze(state, label):
    """(min dB, max dB) of one mode's quadrature variances."""
    _, block = state.mode_block(label)
    lo, hi = np.linalg.eigvalsh(block)
    return float(to_db(lo)), float(to_db(hi))


def _moments(state, i, j):
    """<a_i^dag a_j> and <a_i a_j> of a zero-mean state from its covariance."""
    m = state.n_modes
    v = state.cov
    qq, pp = v[i, j], v[i + m, j + m]
    qp, pq = v[i, j + m], v[i + m, j]
    n_ij = 0.5 * (qq + pp + 1j * qp - 1j * pq)
    a_ij = 0.5 * (qq - pp + 1j * qp + 1j * pq)
    return n_ij, a_ij


def photon_cov(state, label_i, label_j):
    """Cov(n_i, n_j) = |<a_i^dag a_j>|^2 + |<a_i a_j>|^2 for a zero-mean Gaussian state."""
    if np.linalg.norm(state.mean) > 1e-9:
        raise NonZeroMean("photon_cov supports zero-mean states only")
    i, j = state.index(label_i), state.index(label_j)
    if i == j:
        raise ValueError("photon_cov needs two distinct modes")
    n_ij, a_ij = _moments(state, i, j)
    return float(abs(n_ij) ** 2 + abs(a_ij) ** 2)


def wigner_grid(state, label, grid):
    """Wigner function of one mode sampled on ``grid``; rows index p, columns q."""
    mu, v = state.mode_block(label)
    ax = grid.axis() if isinstance(grid, GridSpec) else np.asarray(grid)
    q, p = np.meshgrid(ax, ax)
    d = np.stack([q - mu[0], p - mu[1]], axis=-1)
    inv = np.linalg.inv(v)
    quad = np.einsum("...i,ij,...j->...", d, inv, d)
    return np.exp(-0.5 * quad) / (2 * np.pi * np.sqrt(np.linalg.det(v)))


def lo_vector_after_mask(t):
    """Post-mask LO amplitudes on the signal modes for an LO entering the first signal mode."""
    return t.U[: t.signal_dim, 0].copy()


def output_signal_state(inputs, t):
    """Reduced signal-mode state for a dict label -> SqueezeSpec of inputs."""
    signal = list(t.signal_labels)
    states = [displaced_squeezed(inputs.get(lab, SqueezeSpec()), lab) for lab in signal]
    return partial_trace(apply_transfer(product(states), t), signal)


def noise_scan(inputs, g, radius, z0_list, basis=DEFAULT_BASIS, spec=None):
    """Homodyne minimum noise (dB) versus iris position for a co-propagating LO.

    ``inputs`` maps signal labels to SqueezeSpec (or is a pair for the default
    basis).  At each z0 the LO, launched in the first basis mode, is carried
    through the same mask and the detector measures its normalised projection
    on the signal modes.
    """
    from .dilation import dilate
    from .numerics import DEFAULT_QUADRATURE

    spec = spec or DEFAULT_QUADRATURE
    basis = tuple(basis)
    if not isinstance(inputs, dict):
        inputs = dict(zip(basis, inputs))
    out = []
    for z0 in z0_list:
        t = dilate(build_coupling_matrix(g, CircularIris(radius, z0), basis, spec))
        reduced = output_signal_state(inputs, t)
        out.append(homodyne_min_noise(reduced, lo_vector_after_mask(t)))
    return np.array(out)
