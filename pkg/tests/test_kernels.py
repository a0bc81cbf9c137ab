import numpy as np
import pytest

from maskquant import _kernels
from maskquant.fock import fock_space

compiled = _kernels.compiled_backend
python = _kernels.python_backend
needs_ext = pytest.mark.skipif(compiled is None, reason="compiled extension not built")


def test_backend_flag():
    assert _kernels.BACKEND in ("compiled", "python")


@needs_ext
@pytest.mark.parametrize("p,alpha", [(0, 0.0), (1, 2.0), (7, 1.0), (25, 3.0)])
def test_laguerre_backends_agree(p, alpha):
    x = np.linspace(0, 60, 301)
    np.testing.assert_allclose(compiled.laguerre(p, alpha, x), python.laguerre(p, alpha, x), rtol=1e-13, atol=1e-13)


@needs_ext
def test_raise_apply_backends_agree():
    space = fock_space(4, 9)
    rng = np.random.default_rng(2)
    psi = rng.normal(size=space.dim) + 1j * rng.normal(size=space.dim)
    c = rng.normal(size=4) + 1j * rng.normal(size=4)
    a = compiled.raise_apply(psi, space.raise_idx, space.raise_sqrt, c)
    b = python.raise_apply(psi, space.raise_idx, space.raise_sqrt, c)
    np.testing.assert_allclose(a, b, rtol=1e-14, atol=1e-14)


@needs_ext
def test_ch_value_backends_agree():
    rng = np.random.default_rng(5)
    d0, d1 = 3, 4
    a = rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12))
    rho = a @ a.conj().T
    rho /= np.trace(rho)
    r4 = rho.reshape(d0, d1, d0, d1)
    ra = np.ascontiguousarray(np.einsum("ijkj->ik", r4))
    rb = np.ascontiguousarray(np.einsum("ijil->jl", r4))
    for _ in range(5):
        x = rng.normal(size=8)
        assert compiled.ch_value(rho, ra, rb, d0, d1, x) == pytest.approx(python.ch_value(rho, ra, rb, d0, d1, x), abs=1e-13)
