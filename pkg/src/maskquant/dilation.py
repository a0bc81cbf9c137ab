"""Unitary completion of a lossy coupling matrix with absorption modes.

For a contraction B the Halmos block matrix

    U = [[B,               sqrt(I - B B^dag)],
         [sqrt(I - B^dag B), -B^dag         ]]

is unitary.  Both square roots are evaluated from one SVD of B, so the
result is deterministic.  Absorption mode ``A{k}`` is paired with signal
mode ``k``; for an iris this keeps U block-diagonal in l.
"""

from dataclasses import dataclass

import numpy as np

from .errors import LabelMismatch, NotPassive
from .mask import CouplingMatrix

PASSIVITY_SLACK = 1e-9


def absorption_labels(n):
    return tuple(f"A{k + 1}" for k in range(n))


@dataclass(frozen=True)
class TransferMatrix:
    """Unitary over signal modes followed by absorption modes.

    Output operators follow a'_k = sum_j U[k, j] a_j.
    """

    labels: tuple
    U: np.ndarray
    signal_dim: int

    def __post_init__(self):
        n = len(self.labels)
        if self.U.shape != (n, n):
            raise LabelMismatch("transfer matrix shape does not match its labels")
        if len(set(self.labels)) != n:
            raise LabelMismatch("duplicate labels in transfer matrix")

    @property
    def signal_labels(self):
        return self.labels[: self.signal_dim]

    @property
    def absorption_labels(self):
        return self.labels[self.signal_dim :]

    @property
    def signal_block(self):
        return self.U[: self.signal_dim, : self.signal_dim]

    def index(self, label):
        try:
            return self.labels.index(label)
        except ValueError:
            raise LabelMismatch(f"label {label!r} not in transfer matrix") from None

    def element(self, out_label, in_label):
        return self.U[self.index(out_label), self.index(in_label)]

    def permuted(self, order):
        """Same transformation with labels re-ordered as ``order`` (a permutation of indices)."""
        order = list(order)
        return TransferMatrix(
            tuple(self.labels[i] for i in order),
            self.U[np.ix_(order, order)],
            self.signal_dim,
        )


def _halmos(b):
    n = b.shape[0]
    v, s, wh = np.linalg.svd(b)
    if s.size and s.max() > 1.0 + PASSIVITY_SLACK:
        raise NotPassive(f"largest singular value {s.max():.12g} exceeds 1")
    s = np.minimum(s, 1.0)
    defect = np.sqrt(np.clip(1.0 - s**2, 0.0, None))
    w = wh.conj().T
    top_right = (v * defect) @ v.conj().T
    bottom_left = (w * defect) @ wh
    u = np.zeros((2 * n, 2 * n), dtype=complex)
    u[:n, :n] = b
    u[:n, n:] = top_right
    u[n:, :n] = bottom_left
    u[n:, n:] = -b.conj().T
    return u


def _l_blocks(coupling):
    """Groups of basis indices sharing l, or None when B couples different l."""
    basis = coupling.basis
    groups = {}
    for i, m in enumerate(basis):
        groups.setdefault(getattr(m, "l", None), []).append(i)
    if None in groups or len(groups) == 1:
        return None
    b = coupling.matrix
    for i, m in enumerate(basis):
        for j, m2 in enumerate(basis):
            if m.l != m2.l and b[i, j] != 0:
                return None
    return list(groups.values())


def dilate(coupling):
    """Complete ``coupling`` (a CouplingMatrix or square array) to a TransferMatrix."""
    if isinstance(coupling, CouplingMatrix):
        b = np.asarray(coupling.matrix, dtype=complex)
        basis = tuple(coupling.basis)
    else:
        b = np.asarray(coupling, dtype=complex)
        basis = tuple(range(b.shape[0]))
        coupling = CouplingMatrix(basis, b)
    n = b.shape[0]

    blocks = _l_blocks(coupling)
    if blocks is None:
        u = _halmos(b)
    else:
        # One l-block at a time; absorption modes inherit their partner's l.
        u = np.zeros((2 * n, 2 * n), dtype=complex)
        for idx in blocks:
            ub = _halmos(b[np.ix_(idx, idx)])
            rows = idx + [n + i for i in idx]
            u[np.ix_(rows, rows)] = ub
    # Keep the signal block bit-identical to B.
    u[:n, :n] = b
    return TransferMatrix(basis + absorption_labels(n), u, n)


def verify_unitary(t):
    """Frobenius norm of U U^dag - I."""
    u = t.U if isinstance(t, TransferMatrix) else np.asarray(t)
    return float(np.linalg.norm(u @ u.conj().T - np.eye(u.shape[0])))


def random_unitary(n, seed):
    """Haar-random n x n unitary from a seeded generator."""
    rng = np.random.default_rng(seed)
    z = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def alternative_completion(t, seed=1):
    """Another valid completion: absorption outputs and inputs re-mixed by random unitaries."""
    n = t.signal_dim
    k = len(t.labels) - n
    left = np.eye(n + k, dtype=complex)
    right = np.eye(n + k, dtype=complex)
    left[n:, n:] = random_unitary(k, seed)
    right[n:, n:] = random_unitary(k, seed + 7919)
    return TransferMatrix(t.labels, left @ t.U @ right, n)


def regression_battery(signal_labels):
    """Input states used to compare completions: squeezed, displaced and mixed-phase sets."""
    from .gaussian import SqueezeSpec

    n = len(signal_labels)
    battery = []
    for r, theta, alpha in [
        (0.3, 0.0, 0.0),
        (1.0, 0.0, 0.0),
        (0.5, 0.25 * np.pi, 1.5 * np.exp(1j * np.pi)),
        (0.8, 0.75 * np.pi, 2.0 * np.exp(1.5j * np.pi)),
    ]:
        specs = [SqueezeSpec(r * (1 + 0.3 * i), theta + 0.4 * i, alpha * (1 - 0.2 * i)) for i in range(n)]
        battery.append(dict(zip(signal_labels, specs)))
    return battery


def completion_invariance_check(coupling, alt_seed=1):
    """Largest change in any reduced signal mean/covariance entry between two completions."""
    from .gaussian import apply_transfer, displaced_squeezed, partial_trace, product

    t = dilate(coupling)
    alt = alternative_completion(t, alt_seed)
    signal = list(t.signal_labels)
    worst = 0.0
    for inputs in regression_battery(signal):
        state = product([displaced_squeezed(inputs[lab], lab) for lab in signal])
        a = partial_trace(apply_transfer(state, t), signal)
        b = partial_trace(apply_transfer(state, alt), signal)
        worst = max(worst, float(np.max(np.abs(a.cov - b.cov))), float(np.max(np.abs(a.mean - b.mean))))
    return worst
