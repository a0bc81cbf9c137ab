"""Truncated Fock-space engine for linear optics on labelled modes.

States live on the occupation tuples of M modes with total photon number at
most ``cutoff``.  A passive transfer matrix acts by substituting every input
creation operator a_j^dag -> sum_k U[k, j] a_k'^dag and expanding on the
vacuum, which conserves total photon number, so the truncation is exact.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import CutoffExceeded, LabelMismatch, NonConvergence, UnknownLabel
from .numerics import minimize_multistart

# Dense vectors above this many basis kets are refused rather than swapping.
MAX_BASIS = 5_000_000


@dataclass(frozen=True)
class FockSpace:
    n_modes: int
    cutoff: int
    basis: tuple
    index: dict = field(repr=False)
    raise_idx: np.ndarray = field(repr=False)
    raise_sqrt: np.ndarray = field(repr=False)

    @property
    def dim(self):
        return len(self.basis)


def _compositions(n_modes, cutoff):
    if n_modes == 0:
        yield ()
        return
    for n in range(cutoff + 1):
        for rest in _compositions(n_modes - 1, cutoff - n):
            yield (n,) + rest


@lru_cache(maxsize=32)
def fock_space(n_modes, cutoff):
    """Enumerated basis (lexicographic) of ``n_modes`` modes with total <= cutoff."""
    size = math.comb(n_modes + cutoff, n_modes)
    if size > MAX_BASIS:
        raise CutoffExceeded(f"{n_modes} modes with cutoff {cutoff} need {size} basis kets")
    basis = tuple(_compositions(n_modes, cutoff))
    index = {occ: i for i, occ in enumerate(basis)}
    raise_idx = np.full((n_modes, len(basis)), -1, dtype=np.int64)
    raise_sqrt = np.zeros((n_modes, len(basis)))
    for i, occ in enumerate(basis):
        if sum(occ) >= cutoff:
            continue
        for k in range(n_modes):
            up = occ[:k] + (occ[k] + 1,) + occ[k + 1 :]
            raise_idx[k, i] = index[up]
            raise_sqrt[k, i] = math.sqrt(occ[k] + 1)
    return FockSpace(n_modes, cutoff, basis, index, raise_idx, raise_sqrt)


@dataclass(frozen=True)
class FockVector:
    labels: tuple
    amplitudes: dict
    cutoff: int

    def __post_init__(self):
        m = len(self.labels)
        if len(set(self.labels)) != m:
            raise LabelMismatch("duplicate labels in Fock vector")
        for occ in self.amplitudes:
            if len(occ) != m or min(occ, default=0) < 0:
                raise ValueError(f"bad occupation tuple {occ}")
            if sum(occ) > self.cutoff:
                raise CutoffExceeded(f"occupation {occ} exceeds cutoff {self.cutoff}")

    def norm2(self):
        return float(sum(abs(a) ** 2 for a in self.amplitudes.values()))

    def amplitude(self, occ):
        return self.amplitudes.get(tuple(occ), 0j)

    def to_array(self):
        space = fock_space(len(self.labels), self.cutoff)
        vec = np.zeros(space.dim, dtype=complex)
        for occ, amp in self.amplitudes.items():
            vec[space.index[occ]] = amp
        return vec

    @classmethod
    def from_array(cls, labels, vec, cutoff, threshold=0.0):
        space = fock_space(len(labels), cutoff)
        nz = np.flatnonzero(np.abs(vec) > threshold)
        return cls(tuple(labels), {space.basis[i]: complex(vec[i]) for i in nz}, cutoff)

    def reordered(self, labels):
        labels = tuple(labels)
        if set(labels) != set(self.labels) or len(labels) != len(self.labels):
            raise LabelMismatch("reordering must use the same label set")
        perm = [self.labels.index(lab) for lab in labels]
        amps = {tuple(occ[i] for i in perm): a for occ, a in self.amplitudes.items()}
        return FockVector(labels, amps, self.cutoff)


def fock_vacuum(labels, cutoff=0):
    labels = tuple(labels)
    return FockVector(labels, {(0,) * len(labels): 1.0 + 0j}, cutoff)


def number_state(labels, occupations, cutoff=None):
    labels = tuple(labels)
    occ = tuple(int(n) for n in occupations)
    return FockVector(labels, {occ: 1.0 + 0j}, sum(occ) if cutoff is None else cutoff)


def squeezed_vacuum_amplitudes(r, theta, n_max):
    """c_{2n} of S(xi)|0> for 2n <= n_max (odd entries zero)."""
    amps = np.zeros(n_max + 1, dtype=complex)
    t = -np.exp(1j * theta) * np.tanh(r)
    c = 1.0 / math.sqrt(math.cosh(r))
    for n in range(n_max // 2 + 1):
        amps[2 * n] = c
        # c_{2n+2} / c_{2n} = t * sqrt((2n+1)(2n+2)) / (2(n+1))
        c = c * t * math.sqrt((2 * n + 1) * (2 * n + 2)) / (2 * (n + 1))
    return amps


def squeezed_vacuum_fock(r, theta, n_max, label=0):
    """Single-mode squeezed vacuum truncated at ``n_max`` photons."""
    if n_max < 0 or n_max % 2:
        raise ValueError("n_max must be a non-negative even integer")
    amps = squeezed_vacuum_amplitudes(r, theta, n_max)
    return FockVector((label,), {(n,): complex(a) for n, a in enumerate(amps) if a != 0}, n_max)


def truncation_tail(r, n_max):
    """Probability weight of a squeezed vacuum lost above ``n_max`` photons."""
    amps = squeezed_vacuum_amplitudes(r, 0.0, n_max)
    return float(1.0 - np.sum(np.abs(amps) ** 2))


def tensor_fock(states, cutoff=None):
    """Product of Fock vectors; kets above ``cutoff`` total photons are dropped."""
    labels = tuple(lab for s in states for lab in s.labels)
    if len(set(labels)) != len(labels):
        raise LabelMismatch("tensor product of states with overlapping labels")
    if cutoff is None:
        cutoff = sum(s.cutoff for s in states)
    amps = {(): 1.0 + 0j}
    for s in states:
        nxt = {}
        for occ, a in amps.items():
            used = sum(occ)
            for occ2, b in s.amplitudes.items():
                if used + sum(occ2) <= cutoff:
                    nxt[occ + occ2] = a * b
        amps = nxt
    return FockVector(labels, amps, cutoff)


def pad_vacuum(state, labels):
    """Extend ``state`` with vacuum on the missing ``labels`` and order it like ``labels``."""
    labels = tuple(labels)
    missing = tuple(lab for lab in labels if lab not in state.labels)
    if any(lab not in labels for lab in state.labels):
        raise LabelMismatch("state has labels outside the requested set")
    if missing:
        state = tensor_fock([state, fock_vacuum(missing)], cutoff=state.cutoff)
    return state.reordered(labels)


def _expand(items, depth, columns, space):
    """sum over items of amp * prod_j (A_j^dag)^{n_j} / sqrt(n_j!) |0>, Horner in each mode."""
    if depth == len(columns):
        vec = np.zeros(space.dim, dtype=complex)
        vec[0] = sum(a for _, a in items)
        return vec
    groups = {}
    for occ, a in items:
        groups.setdefault(occ[depth], []).append((occ, a))
    if list(groups) == [0]:
        return _expand(items, depth + 1, columns, space)
    col = columns[depth]
    top = max(groups)
    acc = None
    for n in range(top, -1, -1):
        if acc is not None:
            acc = _kernels.raise_apply(acc, space.raise_idx, space.raise_sqrt, col)
        if n in groups:
            term = _expand(groups[n], depth + 1, columns, space) / math.sqrt(math.factorial(n))
            acc = term if acc is None else acc + term
    return acc


def apply_transfer_fock(state, t):
    """Output state for ``state`` (vacuum-padded to t's labels) through transfer matrix ``t``."""
    state = pad_vacuum(state, t.labels)
    for occ in state.amplitudes:
        if sum(occ) > state.cutoff:
            raise CutoffExceeded(f"input ket {occ} above cutoff {state.cutoff}")
    space = fock_space(len(t.labels), state.cutoff)
    columns = [np.ascontiguousarray(t.U[:, j], dtype=complex) for j in range(len(t.labels))]
    items = sorted(state.amplitudes.items())
    if not items:
        return FockVector(t.labels, {}, state.cutoff)
    vec = _expand(items, 0, columns, space)
    return FockVector.from_array(t.labels, vec, state.cutoff)


@dataclass(frozen=True)
class FockDensity:
    """Density matrix on an explicit list of occupation tuples."""

    labels: tuple
    basis: tuple
    matrix: np.ndarray
    cutoff: int

    def __post_init__(self):
        if self.matrix.shape != (len(self.basis), len(self.basis)):
            raise LabelMismatch("density matrix shape does not match its basis")

    @property
    def elements(self):
        rows, cols = np.nonzero(self.matrix)
        return {(self.basis[i], self.basis[j]): complex(self.matrix[i, j]) for i, j in zip(rows, cols)}

    def element(self, ket, bra):
        idx = {occ: i for i, occ in enumerate(self.basis)}
        try:
            return complex(self.matrix[idx[tuple(ket)], idx[tuple(bra)]])
        except KeyError:
            return 0j

    def trace(self):
        return float(np.real(np.trace(self.matrix)))

    def index(self, label):
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownLabel(label) from None


def to_density(state):
    basis = tuple(sorted(state.amplitudes))
    vec = np.array([state.amplitudes[occ] for occ in basis], dtype=complex)
    return FockDensity(state.labels, basis, np.outer(vec, vec.conj()), state.cutoff)


def _keep_positions(labels, keep):
    keep = tuple(keep)
    for lab in keep:
        if lab not in labels:
            raise UnknownLabel(lab)
    pos = [labels.index(lab) for lab in keep]
    rest = [i for i in range(len(labels)) if i not in pos]
    return keep, pos, rest


def reduced_density(state, keep):
    """Partial trace of the pure ``state`` onto ``keep`` without forming the full density."""
    keep, pos, rest = _keep_positions(state.labels, keep)
    kidx, didx = {}, {}
    entries = []
    for occ, a in state.amplitudes.items():
        k = tuple(occ[i] for i in pos)
        d = tuple(occ[i] for i in rest)
        entries.append((kidx.setdefault(k, len(kidx)), didx.setdefault(d, len(didx)), a))
    psi = np.zeros((len(kidx), max(len(didx), 1)), dtype=complex)
    for i, j, a in entries:
        psi[i, j] = a
    rho = psi @ psi.conj().T
    order = sorted(range(len(kidx)), key=lambda i: list(kidx)[i])
    basis = tuple(sorted(kidx))
    return FockDensity(keep, basis, rho[np.ix_(order, order)], state.cutoff)


def partial_trace_fock(rho, keep):
    keep, pos, rest = _keep_positions(rho.labels, keep)
    kept = [tuple(occ[i] for i in pos) for occ in rho.basis]
    disc = [tuple(occ[i] for i in rest) for occ in rho.basis]
    basis = tuple(sorted(set(kept)))
    kidx = {occ: i for i, occ in enumerate(basis)}
    out = np.zeros((len(basis), len(basis)), dtype=complex)
    by_disc = {}
    for i, d in enumerate(disc):
        by_disc.setdefault(d, []).append(i)
    for members in by_disc.values():
        rows = [kidx[kept[i]] for i in members]
        out[np.ix_(rows, rows)] += rho.matrix[np.ix_(members, members)]
    return FockDensity(keep, basis, out, rho.cutoff)


def joint_distribution(rho, label_i, label_j):
    """P[n_i, n_j] from the diagonal of ``rho``, marginalised over other modes."""
    i, j = rho.index(label_i), rho.index(label_j)
    table = np.zeros((rho.cutoff + 1, rho.cutoff + 1))
    diag = np.real(np.diag(rho.matrix))
    for occ, p in zip(rho.basis, diag):
        table[occ[i], occ[j]] += p
    return table


def photon_cov_from_table(table):
    """Covariance of the (renormalised) joint photon-number distribution."""
    total = table.sum()
    if total <= 0:
        return 0.0
    table = table / total
    n = np.arange(table.shape[0])
    e_i = np.sum(table.sum(axis=1) * n)
    e_j = np.sum(table.sum(axis=0) * n)
    e_ij = n @ table @ n
    return float(e_ij - e_i * e_j)


def photon_cov_fock(rho, label_i, label_j):
    return photon_cov_from_table(joint_distribution(rho, label_i, label_j))


def squeezed_pair_output(t, specs, n_max):
    """Reduced signal density for squeezed vacua (label -> (r, theta)) sent through ``t``.

    The input product is truncated at ``n_max`` total photons.
    """
    signal = list(t.signal_labels)
    parts = [squeezed_vacuum_fock(*specs.get(lab, (0.0, 0.0)), n_max, label=lab) for lab in signal]
    state = tensor_fock(parts, cutoff=n_max)
    out = apply_transfer_fock(state, t)
    return reduced_density(out, signal)


def single_photon_output(t, input_mode):
    """Split the reduced signal state of one photon in ``input_mode`` as vacuum + entangled part.

    Returns ``(vacuum_weight, phi)`` where ``phi`` is the normalised
    one-photon superposition over the signal modes, phased so that its
    largest amplitude is real and positive.
    """
    if input_mode not in t.signal_labels:
        raise UnknownLabel(input_mode)
    occ = [1 if lab == input_mode else 0 for lab in t.labels]
    out = apply_transfer_fock(number_state(t.labels, occ), t)
    signal = tuple(t.signal_labels)
    rho = reduced_density(out, signal)
    vac = (0,) * len(signal)
    vac_weight = rho.element(vac, vac).real
    ones = [i for i, o in enumerate(rho.basis) if sum(o) == 1]
    if not ones:
        return vac_weight, FockVector(signal, {}, 1)
    block = rho.matrix[np.ix_(ones, ones)]
    ref = int(np.argmax(np.real(np.diag(block))))
    weight = float(np.real(np.trace(block)))
    if weight == 0:
        return vac_weight, FockVector(signal, {}, 1)
    column = block[:, ref] / math.sqrt(block[ref, ref].real)
    phi = column / math.sqrt(weight)
    amps = {rho.basis[i]: complex(a) for i, a in zip(ones, phi)}
    return vac_weight, FockVector(signal, amps, 1)


def wigner_fock(n, q, p):
    """Wigner function of the number state |n>: (-1)^n / pi e^{-(q^2+p^2)} L_n(2(q^2+p^2))."""
    if n < 0:
        raise ValueError("photon number must be >= 0")
    s = np.asarray(q, dtype=float) ** 2 + np.asarray(p, dtype=float) ** 2
    lag = _kernels.laguerre(int(n), 0.0, np.asarray(2.0 * s, dtype=float))
    return (-1) ** n / math.pi * np.exp(-s) * lag


def _product_matrix(rho):
    """Two-mode density on the dense product basis n0 * d1 + n1, plus d0, d1."""
    if len(rho.labels) != 2:
        raise LabelMismatch("a two-mode density is required")
    d0 = max(o[0] for o in rho.basis) + 1
    d1 = max(o[1] for o in rho.basis) + 1
    idx = [o[0] * d1 + o[1] for o in rho.basis]
    dense = np.zeros((d0 * d1, d0 * d1), dtype=complex)
    dense[np.ix_(idx, idx)] = rho.matrix
    return dense, d0, d1


@dataclass(frozen=True)
class CHSettings:
    starts: int = 12
    seed: int = 0
    scale: float = 0.5
    maxfev: int = 6000
    # Residual distance from a stationary point that still counts as converged.
    tolerance: float = 1e-7


@dataclass(frozen=True)
class CHResult:
    value: float
    alpha1: complex
    alpha2: complex
    beta1: complex
    beta2: complex
    diagnostics: object

    @property
    def displacements(self):
        return (self.alpha1, self.alpha2, self.beta1, self.beta2)


def ch_function(rho):
    """Return g(x) giving the CH combination for eight real displacement parameters."""
    dense, d0, d1 = _product_matrix(rho)
    r4 = dense.reshape(d0, d1, d0, d1)
    rho_a = np.ascontiguousarray(np.einsum("ijkj->ik", r4))
    rho_b = np.ascontiguousarray(np.einsum("ijil->jl", r4))
    dense = np.ascontiguousarray(dense)

    def g(x):
        return _kernels.ch_value(dense, rho_a, rho_b, d0, d1, np.asarray(x, dtype=float))

    return g


def ch_min(rho, settings=None, x0=None):
    """Minimise the CH combination over the four complex displacements.

    Raises NonConvergence (carrying the best CHResult as ``estimate``) when no
    start finished inside the evaluation budget.
    """
    settings = settings or CHSettings()
    g = ch_function(rho)
    res = minimize_multistart(
        g, 8, starts=settings.starts, seed=settings.seed, scale=settings.scale, x0=x0, maxfev=settings.maxfev
    )
    x = res.x
    out = CHResult(
        value=res.fun,
        alpha1=complex(x[0], x[1]),
        alpha2=complex(x[2], x[3]),
        beta1=complex(x[4], x[5]),
        beta2=complex(x[6], x[7]),
        diagnostics=res,
    )
    if res.converged == 0:
        raise NonConvergence("no CH start converged", estimate=out, error=None)
    return out


@dataclass(frozen=True)
class HOMResult:
    engine: float
    closed_form: float


def hom_coincidence(t, distinguishable=False):
    """Coincidence probability of one photon in each of the first two signal modes.

    Indistinguishable photons use the engine value <1,1|rho_out|1,1> of the
    two-photon input; distinguishable photons combine two one-photon runs at
    the probability level.
    """
    if t.signal_dim < 2:
        raise LabelMismatch("HOM needs two signal modes")
    s0, s1 = t.signal_labels[:2]
    u = t.U
    i0, i1 = t.index(s0), t.index(s1)
    if distinguishable:
        p = {}
        for src in (s0, s1):
            occ = [1 if lab == src else 0 for lab in t.labels]
            out = apply_transfer_fock(number_state(t.labels, occ), t)
            rho = reduced_density(out, (s0, s1))
            p[src] = (rho.element((1, 0), (1, 0)).real, rho.element((0, 1), (0, 1)).real)
        engine = p[s0][0] * p[s1][1] + p[s0][1] * p[s1][0]
        closed = abs(u[i0, i0]) ** 2 * abs(u[i1, i1]) ** 2 + abs(u[i1, i0]) ** 2 * abs(u[i0, i1]) ** 2
    else:
        occ = [1 if lab in (s0, s1) else 0 for lab in t.labels]
        out = apply_transfer_fock(number_state(t.labels, occ), t)
        rho = reduced_density(out, (s0, s1))
        engine = rho.element((1, 1), (1, 1)).real
        closed = abs(u[i0, i0] * u[i1, i1] + u[i1, i0] * u[i0, i1]) ** 2
    return HOMResult(float(engine), float(closed))


def hom_closed_form_iris(c00, c11, c01, distinguishable=False):
    """Coincidence from real iris overlaps: C00^2 C11^2 + C01^4 (+ 2 C00 C11 C01^2)."""
    base = c00**2 * c11**2 + c01**4
    return base if distinguishable else base + 2 * c00 * c11 * c01**2
