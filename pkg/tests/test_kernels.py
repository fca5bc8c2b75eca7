import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st

from catlyap import kernels

needs_core = pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled kernels not built")
lams = st.floats(1.0, 1e4)
energies = st.floats(-3e4, 3e4)
kinds = st.sampled_from(sorted(kernels.KINDS.values()))


def _values(seed, rows, cols):
    return np.random.default_rng(seed).random((rows, cols))


@needs_core
@given(st.integers(0, 2 ** 32), lams, st.floats(-1.0, 2.0), kinds, st.integers(1, 200))
def test_log_stretch_backends_agree(seed, lam, t, kind, n):
    V = _values(seed, 7, n + 9)
    r = kernels.renorm_interval(lam, lam * t)
    a = kernels.get_backend("cython").log_stretch(V, lam, lam * t, kind, n, 8, r, 1)
    b = kernels.get_backend("python").log_stretch(V, lam, lam * t, kind, n, 8, r, 1)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-10)


@needs_core
@given(st.integers(0, 2 ** 32), lams, energies, st.integers(1, 120))
def test_log_norms_backends_agree(seed, lam, energy, n):
    V = _values(seed, 5, n + 1)
    ck = kernels.as_checkpoints([1, max(1, n // 2), n])
    r = kernels.renorm_interval(lam, energy)
    a = kernels.get_backend("cython").log_norms(V, lam, energy, kernels.RAW, ck, r, 1)
    b = kernels.get_backend("python").log_norms(V, lam, energy, kernels.RAW, ck, r, 1)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-10)


@needs_core
@given(st.integers(0, 2 ** 32), lams, st.floats(-1.0, 2.0), st.integers(0, 12))
def test_theta_lift_backends_agree(seed, lam, t, n):
    V = _values(seed, 9, n + 1)
    a = kernels.get_backend("cython").theta_lift(V, lam, t, 1)
    b = kernels.get_backend("python").theta_lift(V, lam, t, 1)
    assert np.allclose(a, b, rtol=1e-13, atol=1e-12)


@pytest.mark.parametrize("name", ["python", "cython"])
def test_thread_count_does_not_change_bits(name):
    if name == "cython" and kernels.BACKEND != "cython":
        pytest.skip("compiled kernels not built")
    k = kernels.get_backend(name)
    V = _values(3, 600, 300)
    r = kernels.renorm_interval(100.0, 50.0)
    one = k.log_stretch(V, 100.0, 50.0, kernels.RAW, 250, 32, r, 1)
    many = k.log_stretch(V, 100.0, 50.0, kernels.RAW, 250, 32, r, 4)
    assert np.array_equal(one, many)


def test_renorm_interval_bounds():
    assert kernels.renorm_interval(0.0, 0.0) == kernels.MAX_RENORM
    assert 1 <= kernels.renorm_interval(1e6, 2e6) < kernels.MAX_RENORM
    # growth between renormalizations stays below ~1e150
    lam = 1e4
    r = kernels.renorm_interval(lam, 2 * lam)
    assert r * np.log10(3 * lam + 2) <= 151


def test_unknown_backend_and_kind():
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")
    with pytest.raises(ValueError):
        kernels.kind_code("sideways")
    with pytest.raises(ValueError):
        kernels.as_checkpoints([0, 3])


def test_pure_python_selected_by_env():
    env = dict(os.environ, CATLYAP_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from catlyap import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
