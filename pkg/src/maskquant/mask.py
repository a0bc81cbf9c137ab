"""Mode-coupling coefficients of binary spatial masks and classical propagation.

A mask at plane z0 maps the input mode coefficients A to A' = A . B with
B[m, m'] = integral over the open area of u_m u_m'^*.  For a circular iris
centred on the axis only equal-l modes couple and the integral reduces to a
one-dimensional Laguerre integral times a Gouy phase.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import BasisMismatch, DomainError
from .modes import ModeIndex, lg_amplitude
from .numerics import DEFAULT_QUADRATURE, integrate_1d, integrate_polar, laguerre_array, tail_cutoff

DEFAULT_BASIS = (ModeIndex(0, 0), ModeIndex(0, 1))


@dataclass(frozen=True)
class CircularIris:
    radius: float
    z0: float = 0.0

    def __post_init__(self):
        if self.radius < 0:
            raise DomainError("iris radius must be non-negative")

    def transmit(self, r, phi):
        return np.asarray(r) < self.radius


@dataclass(frozen=True)
class GeneralAperture:
    """Binary aperture given by a vectorised predicate ``transmit(r, phi)``.

    ``extent`` bounds the open region in metres; None integrates out to eight
    local beam widths.
    """

    transmit: Callable
    z0: float = 0.0
    extent: Optional[float] = None


def basis_for(p_max=1, l_max=0):
    """Signal basis with |l| <= l_max and p <= p_max, ordered by l then p."""
    ls = sorted(range(-l_max, l_max + 1), key=lambda l: (abs(l), -l))
    return tuple(ModeIndex(l, p) for l in ls for p in range(p_max + 1))


def radial_overlap(l, p, p2, upper, spec=DEFAULT_QUADRATURE):
    """Normalised integral of x^|l| e^{-x} L_p^|l| L_p2^|l| over [0, upper]."""
    al = abs(l)
    if upper <= 0:
        return 0.0
    upper = min(upper, tail_cutoff(al + p + p2))
    norm = math.sqrt(
        math.factorial(p) * math.factorial(p2) / (math.factorial(p + al) * math.factorial(p2 + al))
    )

    def f(x):
        return x**al * np.exp(-x) * laguerre_array(p, al, x) * laguerre_array(p2, al, x)

    return norm * integrate_1d(f, 0.0, upper, spec)


def iris_transmission_parameter(g, iris):
    """T = 2 a^2 / w(z0)^2, the radial integration limit for an iris."""
    return 2.0 * iris.radius**2 / float(g.width(iris.z0)) ** 2


def coupling_coefficient(g, mask, m, m2, spec=DEFAULT_QUADRATURE):
    """Coupling B_{m, m2} of mode m into mode m2 through ``mask``."""
    if isinstance(mask, CircularIris):
        if m.l != m2.l:
            return 0j
        c = radial_overlap(m.l, m.p, m2.p, iris_transmission_parameter(g, mask), spec)
        order = 2 * m.p - 2 * m2.p + abs(m.l) - abs(m2.l)
        return c * np.exp(1j * order * float(g.gouy(mask.z0)))
    return _aperture_overlap(g, mask, m, m2, spec)


def _aperture_overlap(g, mask, m, m2, spec):
    z0 = mask.z0
    r_max = mask.extent if mask.extent is not None else 8.0 * float(g.width(z0))

    def f(r, phi):
        return lg_amplitude(g, m, r, phi, z0) * np.conj(lg_amplitude(g, m2, r, phi, z0))

    return complex(integrate_polar(f, mask.transmit, spec, r_max=r_max))


@dataclass(frozen=True)
class CouplingMatrix:
    basis: tuple
    matrix: np.ndarray

    def __post_init__(self):
        n = len(self.basis)
        if self.matrix.shape != (n, n):
            raise BasisMismatch("coupling matrix shape does not match its basis")

    def index(self, m):
        try:
            return self.basis.index(m)
        except ValueError:
            raise BasisMismatch(f"mode {m} not in basis") from None

    def __getitem__(self, key):
        m, m2 = key
        return self.matrix[self.index(m), self.index(m2)]

    def singular_values(self):
        return np.linalg.svd(self.matrix, compute_uv=False)


def build_coupling_matrix(g, mask, basis=DEFAULT_BASIS, spec=DEFAULT_QUADRATURE, fast_path=True):
    """Assemble B over ``basis``; irises use the radial path unless ``fast_path`` is False."""
    basis = tuple(basis)
    if not basis:
        raise BasisMismatch("basis must be non-empty")
    if len(set(basis)) != len(basis):
        raise BasisMismatch("basis contains duplicate modes")
    n = len(basis)
    b = np.zeros((n, n), dtype=complex)
    target = mask
    if isinstance(mask, CircularIris) and not fast_path:
        target = GeneralAperture(mask.transmit, mask.z0, extent=mask.radius)
    # The overlap matrix is Hermitian, so only the upper triangle is integrated.
    for i, m in enumerate(basis):
        for j in range(i, n):
            val = coupling_coefficient(g, target, m, basis[j], spec)
            b[i, j] = val
            b[j, i] = np.conj(val)
        b[i, i] = b[i, i].real
    return CouplingMatrix(basis, b)


def propagate_classical(coeffs, b):
    """Output coefficients A'_{m'} = sum_m A_m B[m, m'] for a dict of input coefficients."""
    a = np.zeros(len(b.basis), dtype=complex)
    for m, amp in coeffs.items():
        if m not in b.basis:
            raise BasisMismatch(f"coefficient for {m} outside the coupling basis")
        a[b.basis.index(m)] = amp
    out = a @ b.matrix
    return {m: complex(out[i]) for i, m in enumerate(b.basis)}


def radius_from_transmission(g, fraction):
    """Iris radius at the focus passing ``fraction`` of the fundamental-mode power."""
    if not 0.0 < fraction < 1.0:
        raise DomainError("transmission fraction must lie in (0, 1)")
    return g.w0 * math.sqrt(-math.log1p(-fraction) / 2.0)
