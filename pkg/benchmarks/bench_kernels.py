"""Compare the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Each kernel runs on identical inputs under both backends; the script checks
that results agree and prints the best-of-N wall time and the speed-up.
"""

import argparse
import timeit

import numpy as np

from maskquant import _kernels
from maskquant.fock import _product_matrix, fock_space, squeezed_pair_output, single_photon_output, to_density
from maskquant.dilation import dilate
from maskquant.mask import CircularIris, build_coupling_matrix
from maskquant.modes import BeamGeometry


def _cases():
    g = BeamGeometry.from_rayleigh_range()
    t = dilate(build_coupling_matrix(g, CircularIris(0.8339 * g.w0, 0.0)))

    x = np.linspace(0.0, 30.0, 200_000)
    lag = (lambda k: k.laguerre(12, 0.0, x), "laguerre p=12, 2e5 points")

    space = fock_space(4, 24)
    rng = np.random.default_rng(0)
    psi = rng.normal(size=space.dim) + 1j * rng.normal(size=space.dim)
    col = t.U[:, 0].copy()
    raise_case = (
        lambda k: k.raise_apply(psi, space.raise_idx, space.raise_sqrt, col),
        f"raise_apply, 4 modes, {space.dim} kets",
    )

    rho = squeezed_pair_output(t, {m: (1.0, 0.0) for m in t.signal_labels}, 12)
    dense, d0, d1 = _product_matrix(rho)
    r4 = dense.reshape(d0, d1, d0, d1)
    ra = np.ascontiguousarray(np.einsum("ijkj->ik", r4))
    rb = np.ascontiguousarray(np.einsum("ijil->jl", r4))
    dense = np.ascontiguousarray(dense)
    xs = rng.normal(size=8)
    ch_case = (lambda k: k.ch_value(dense, ra, rb, d0, d1, xs), f"ch_value, {d0}x{d1} two-mode state")

    # The state the CH scan actually minimises over: one photon shared by two modes.
    _, phi = single_photon_output(t, t.signal_labels[0])
    small, s0, s1 = _product_matrix(to_density(phi))
    s4 = small.reshape(s0, s1, s0, s1)
    sa = np.ascontiguousarray(np.einsum("ijkj->ik", s4))
    sb = np.ascontiguousarray(np.einsum("ijil->jl", s4))
    small = np.ascontiguousarray(small)
    small_case = (lambda k: k.ch_value(small, sa, sb, s0, s1, xs), f"ch_value, {s0}x{s1} one-photon state")
    return [lag, raise_case, ch_case, small_case]


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    fast, slow = _kernels.compiled_backend, _kernels.python_backend
    if fast is None:
        print("compiled backend not built; only the numpy fallback is available")
        return 1
    print(f"{'kernel':45s} {'compiled':>12s} {'python':>12s} {'speed-up':>9s}")
    for fn, name in _cases():
        a, b = np.asarray(fn(fast)), np.asarray(fn(slow))
        if not np.allclose(a, b, rtol=1e-12, atol=1e-12):
            raise SystemExit(f"backends disagree on {name}")
        number = 3
        tf = min(timeit.repeat(lambda: fn(fast), number=number, repeat=args.repeat)) / number
        ts = min(timeit.repeat(lambda: fn(slow), number=number, repeat=args.repeat)) / number
        print(f"{name:45s} {tf * 1e3:10.3f}ms {ts * 1e3:10.3f}ms {ts / tf:8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
