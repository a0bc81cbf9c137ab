"""Special functions, quadrature and optimisation primitives.

Integrands passed to :func:`integrate_1d` and :func:`integrate_polar` must be
numpy-vectorised: they are called with arrays of abscissae.
"""

import heapq
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from . import _kernels
from .errors import DomainError, NonConvergence

__all__ = [
    "QuadratureSpec",
    "laguerre_assoc",
    "laguerre_array",
    "integrate_1d",
    "integrate_polar",
    "tail_cutoff",
    "minimize_scalar",
    "minimize_multistart",
    "MultistartResult",
]

# Gauss-Kronrod 7/15 abscissae and weights on [-1, 1] (QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KRONROD_W = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss points are the odd-indexed Kronrod abscissae (0-based 1, 3, 5 and the centre).
_GAUSS_W = np.zeros(15)
_GAUSS_W[[1, 3, 5]] = _WG[:3]
_GAUSS_W[7] = _WG[3]
_GAUSS_W[[13, 11, 9]] = _WG[:3]


@dataclass(frozen=True)
class QuadratureSpec:
    relative_tolerance: float = 1e-12
    absolute_tolerance: float = 1e-14
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not (self.relative_tolerance > 0 and self.absolute_tolerance > 0):
            raise DomainError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be at least 1")


DEFAULT_QUADRATURE = QuadratureSpec()


def laguerre_assoc(p, alpha, x):
    """Return L_p^alpha(x) via the three-term recurrence."""
    if p < 0 or alpha < 0:
        raise DomainError("laguerre_assoc needs p >= 0 and alpha >= 0")
    return float(_kernels.laguerre(int(p), float(alpha), np.asarray([x], dtype=float))[0])


def laguerre_array(p, alpha, x):
    if p < 0 or alpha < 0:
        raise DomainError("laguerre_array needs p >= 0 and alpha >= 0")
    return _kernels.laguerre(int(p), float(alpha), np.asarray(x, dtype=float))


def tail_cutoff(degree=0, ratio=1e-16):
    """Point beyond which exp(-x) * x**degree stays below ``ratio``.

    Used to truncate semi-infinite Laguerre-weighted integrals.
    """
    target = -math.log(ratio)
    x = max(target, 2.0 * degree, 1.0)
    for _ in range(200):
        x_new = target + degree * math.log(x)
        if abs(x_new - x) < 1e-12:
            break
        x = x_new
    return max(x, 2.0 * degree)


def _gk15(f, a, b):
    half = 0.5 * (b - a)
    centre = 0.5 * (a + b)
    vals = f(centre + half * _NODES)
    kronrod = half * np.dot(_KRONROD_W, vals)
    gauss = half * np.dot(_GAUSS_W, vals)
    return kronrod, abs(kronrod - gauss)


def integrate_1d(f, a, b, spec=DEFAULT_QUADRATURE, return_error=False):
    """Globally adaptive Gauss-Kronrod (7/15) integral of ``f`` over [a, b].

    The interval with the largest error estimate is bisected until the summed
    estimate drops below max(abs_tol, rel_tol * |result|).  Complex-valued
    integrands are fine.
    """
    if not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError("integrate_1d needs finite limits; truncate with tail_cutoff")
    if a > b:
        raise DomainError("integrate_1d needs a <= b")
    if a == b:
        return (0.0, 0.0) if return_error else 0.0

    value, err = _gk15(f, a, b)
    heap = [(-err, a, b, value)]
    total, total_err = value, err
    panels = 1
    while total_err > max(spec.absolute_tolerance, spec.relative_tolerance * abs(total)):
        if panels >= spec.max_subdivisions:
            raise NonConvergence(
                f"integrate_1d: {panels} panels, error {total_err:.3e} above tolerance",
                estimate=total,
                error=total_err,
            )
        neg_err, lo, hi, val = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        v1, e1 = _gk15(f, lo, mid)
        v2, e2 = _gk15(f, mid, hi)
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
        panels += 1
        # Re-sum instead of updating in place to avoid drift over many panels.
        total = sum(item[3] for item in heap)
        total_err = sum(-item[0] for item in heap)
    if isinstance(total, complex) or np.iscomplexobj(total):
        total = complex(total)
    else:
        total = float(total)
    return (total, float(total_err)) if return_error else total


def _radial_intervals(region, phi, r_max, samples=257):
    """Transmitting r-intervals of ``region`` along the ray at angle ``phi``."""
    if region is None:
        return [(0.0, r_max)]
    r = np.linspace(0.0, r_max, samples)
    inside = np.asarray(region(r, np.full_like(r, phi)), dtype=bool)
    if inside.all():
        return [(0.0, r_max)]
    if not inside.any():
        return []

    def edge(lo, hi):
        # lo and hi straddle a transition; bisect to machine resolution.
        state_lo = bool(region(np.array([lo]), np.array([phi]))[0])
        for _ in range(64):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if bool(region(np.array([mid]), np.array([phi]))[0]) == state_lo:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    intervals = []
    start = 0.0 if inside[0] else None
    for i in range(1, samples):
        if inside[i] != inside[i - 1]:
            x = edge(r[i - 1], r[i])
            if inside[i]:
                start = x
            else:
                intervals.append((start, x))
                start = None
    if start is not None:
        intervals.append((start, r_max))
    return intervals


def integrate_polar(f, region, spec=DEFAULT_QUADRATURE, r_max=1.0, angular_panels=8):
    """Integrate f(r, phi) * r dr dphi over the part of the disk r < r_max in ``region``.

    ``region`` is a vectorised predicate (r, phi) -> bool, or None for the whole
    disk.  Edges along each ray are located by sampling plus bisection, so
    features narrower than r_max / 256 can be missed.
    """
    inner_spec = QuadratureSpec(
        relative_tolerance=spec.relative_tolerance,
        absolute_tolerance=spec.absolute_tolerance / (2 * math.pi),
        max_subdivisions=spec.max_subdivisions,
    )

    def ray(phi):
        total = 0.0
        for lo, hi in _radial_intervals(region, phi, r_max):
            total += integrate_1d(lambda r: f(r, np.full_like(r, phi)) * r, lo, hi, inner_spec)
        return total

    def angular(phis):
        return np.array([ray(p) for p in np.atleast_1d(phis)])

    edges = np.linspace(0.0, 2 * math.pi, angular_panels + 1)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        total += integrate_1d(angular, lo, hi, QuadratureSpec(
            relative_tolerance=spec.relative_tolerance,
            absolute_tolerance=spec.absolute_tolerance / angular_panels,
            max_subdivisions=spec.max_subdivisions,
        ))
    return total


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def minimize_scalar(g, bracket, width=1e-10):
    """Golden-section search for the minimum of ``g`` on ``bracket = (lo, hi)``.

    Returns ``(argmin, min)``.  Assumes ``g`` is unimodal on the bracket; the
    smaller endpoint value wins if it beats the interior estimate.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if hi < lo:
        lo, hi = hi, lo
    c = hi - _INVPHI * (hi - lo)
    d = lo + _INVPHI * (hi - lo)
    gc, gd = g(c), g(d)
    while hi - lo > width:
        if gc < gd:
            hi, d, gd = d, c, gc
            c = hi - _INVPHI * (hi - lo)
            gc = g(c)
        else:
            lo, c, gc = c, d, gd
            d = lo + _INVPHI * (hi - lo)
            gd = g(d)
    x = 0.5 * (lo + hi)
    best = (x, g(x))
    for edge in (float(bracket[0]), float(bracket[1])):
        ge = g(edge)
        if ge < best[1]:
            best = (edge, ge)
    return best


@dataclass
class MultistartResult:
    x: np.ndarray
    fun: float
    starts: int
    converged: int
    nfev: int
    all_values: list = field(default_factory=list)


def minimize_multistart(g, n, starts=16, seed=0, scale=1.0, x0=None, maxfev=None, xatol=1e-10, fatol=1e-13):
    """Best Nelder-Mead result over ``starts`` deterministic pseudo-random starts.

    Start points are drawn from N(0, scale^2) with a fixed-seed generator
    (``x0`` is prepended when given); the winner is polished by one restart.
    """
    if n < 1 or n > 16:
        raise DomainError("minimize_multistart supports 1 <= n <= 16")
    rng = np.random.default_rng(seed)
    points = [rng.normal(0.0, scale, n) for _ in range(starts)]
    if x0 is not None:
        points.insert(0, np.asarray(x0, dtype=float))
    options = {"xatol": xatol, "fatol": fatol, "maxfev": maxfev or 400 * n * n}

    best = None
    nfev = 0
    converged = 0
    values = []
    for p in points:
        res = minimize(g, p, method="Nelder-Mead", options=options)
        nfev += res.nfev
        converged += int(res.success)
        values.append(float(res.fun))
        if best is None or res.fun < best.fun:
            best = res
    polish = minimize(g, best.x, method="Nelder-Mead", options=options)
    nfev += polish.nfev
    if polish.fun <= best.fun:
        best = polish
    return MultistartResult(
        x=np.asarray(best.x, dtype=float),
        fun=float(best.fun),
        starts=len(points),
        converged=converged,
        nfev=nfev,
        all_values=values,
    )
