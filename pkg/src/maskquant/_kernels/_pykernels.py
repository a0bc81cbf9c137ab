"""Pure-Python (numpy) versions of the hot kernels.

Every function here has a compiled twin in ``_ckernels.pyx`` with the same
signature and semantics; ``maskquant._kernels`` picks one at import time.
"""

import math

import numpy as np


def laguerre(p, alpha, x):
    """Associated Laguerre polynomial L_p^alpha evaluated elementwise."""
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if p == 0:
        return prev
    cur = 1.0 + alpha - x
    for k in range(1, p):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur


def raise_apply(psi, raise_idx, raise_sqrt, coeffs):
    """Apply sum_k coeffs[k] * b_k^dagger to a state on an enumerated Fock basis.

    ``raise_idx[k, i]`` is the index of basis ket ``i`` with one more photon in
    mode ``k`` (or -1 past the cutoff) and ``raise_sqrt[k, i]`` the matching
    sqrt(n_k + 1) factor.  Weight pushed past the cutoff is dropped.
    """
    out = np.zeros_like(psi)
    for k in range(raise_idx.shape[0]):
        c = coeffs[k]
        if c == 0:
            continue
        idx = raise_idx[k]
        ok = idx >= 0
        out[idx[ok]] += c * raise_sqrt[k][ok] * psi[ok]
    return out


def _coherent_overlaps(alpha, dim):
    # <n|alpha> for n < dim
    out = np.empty(dim, dtype=complex)
    out[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, dim):
        out[n] = out[n - 1] * alpha / math.sqrt(n)
    return out


def _vacuum_projection(rho, u):
    return float(np.real(np.vdot(u, rho @ u)))


def ch_value(rho, rho_a, rho_b, d0, d1, x):
    """Clauser-Horne combination for displaced on/off (vacuum-projection) detectors.

    ``rho`` is the two-mode density on the product basis n0 * d1 + n1, ``rho_a``
    and ``rho_b`` its single-mode marginals, ``x`` the eight real displacement
    parameters (a1, a2, b1, b2 as re/im pairs).
    """
    a1 = _coherent_overlaps(complex(x[0], x[1]), d0)
    a2 = _coherent_overlaps(complex(x[2], x[3]), d0)
    b1 = _coherent_overlaps(complex(x[4], x[5]), d1)
    b2 = _coherent_overlaps(complex(x[6], x[7]), d1)
    p11 = _vacuum_projection(rho, np.kron(a1, b1))
    p12 = _vacuum_projection(rho, np.kron(a1, b2))
    p21 = _vacuum_projection(rho, np.kron(a2, b1))
    p22 = _vacuum_projection(rho, np.kron(a2, b2))
    pa = _vacuum_projection(rho_a, a1)
    pb = _vacuum_projection(rho_b, b1)
    return p11 + p12 + p21 - p22 - pa - pb
