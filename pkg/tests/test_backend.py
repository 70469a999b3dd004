"""Parity between the compiled core and the pure-Python fallback."""

import numpy as np
import pytest

from wkreg import _backend, _fastpath_py
from wkreg.streams import Stream

try:
    from wkreg import _fastpath
except ImportError:
    _fastpath = None

needs_compiled = pytest.mark.skipif(_fastpath is None, reason="compiled core not built")


def test_active_backend_is_reported():
    assert _backend.BACKEND in ("compiled", "python")


def test_scalar_and_vector_normal_share_one_stream():
    # the fallback relies on vectorized draws consuming the bit stream
    # exactly like repeated scalar draws
    a = Stream(5).generator.standard_normal(256)
    g = Stream(5).generator
    b = np.array([g.standard_normal() for _ in range(256)])
    assert np.array_equal(a, b)


@needs_compiled
@pytest.mark.parametrize("alpha", [0.1, 0.25, 0.9, 1.0, 2.5, 17.0])
def test_gamma_bit_identical_across_backends(alpha):
    fast = _fastpath.standard_gamma(Stream(101).generator, alpha, 20000)
    slow = _fastpath_py.standard_gamma(Stream(101).generator, alpha, 20000)
    assert np.array_equal(fast, slow)


@needs_compiled
def test_kde_agrees_across_backends():
    rng = np.random.default_rng(3)
    samples = rng.normal(size=20000)
    support = np.linspace(-4.0, 4.0, 321)
    fast = _fastpath.kde_gaussian(samples, support, 0.1)
    slow = _fastpath_py.kde_gaussian(samples, support, 0.1)
    assert np.abs(fast - slow).max() <= 1e-12


@pytest.mark.parametrize("impl", [impl for impl in (_fastpath, _fastpath_py) if impl is not None])
class TestSamplerContract:
    def test_rejects_bad_alpha(self, impl):
        with pytest.raises(ValueError):
            impl.standard_gamma(Stream(0).generator, 0.0, 10)

    def test_rejects_negative_count(self, impl):
        with pytest.raises(ValueError):
            impl.standard_gamma(Stream(0).generator, 1.0, -1)

    def test_moments(self, impl):
        draws = impl.standard_gamma(Stream(77).generator, 2.5, 200000)
        assert abs(draws.mean() - 2.5) <= 0.05
        assert abs(draws.var(ddof=1) - 2.5) <= 0.1

    def test_kde_rejects_bad_bandwidth(self, impl):
        with pytest.raises(ValueError):
            impl.kde_gaussian(np.zeros(4), np.zeros(3), 0.0)

    def test_kde_normalization(self, impl):
        rng = np.random.default_rng(9)
        samples = rng.normal(size=5000)
        support = np.linspace(-6.0, 6.0, 601)
        dens = impl.kde_gaussian(samples, support, 0.2)
        assert abs(np.trapezoid(dens, support) - 1.0) <= 1e-3


def test_env_override_selects_python(monkeypatch):
    import importlib

    monkeypatch.setenv("WKREG_PURE_PYTHON", "1")
    import wkreg._backend as backend_module

    reloaded = importlib.reload(backend_module)
    try:
        assert reloaded.BACKEND == "python"
        assert reloaded.standard_gamma is _fastpath_py.standard_gamma
    finally:
        monkeypatch.delenv("WKREG_PURE_PYTHON")
        importlib.reload(backend_module)
