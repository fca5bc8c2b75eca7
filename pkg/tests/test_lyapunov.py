import math

import numpy as np
import pytest

from catlyap import kernels
from catlyap import lyapunov as ly
from catlyap import potential as pot
from catlyap.cocycle import CocycleParams

FREE3 = math.log((3.0 + math.sqrt(5.0)) / 2.0)
BACKENDS = ["python"] + (["cython"] if kernels.BACKEND == "cython" else [])


@pytest.mark.parametrize("estimator", ["vector_iteration", "norm_product"])
def test_free_hyperbolic(tmap, estimator):
    est = ly.estimate_torus(pot.constant(0.0), CocycleParams(0.0, 3.0), tmap, 10_000, 4, 1, estimator=estimator)
    tol = 1e-6 if estimator == "vector_iteration" else 1e-4  # norm_product carries an O(1/n) bias
    assert est.value == pytest.approx(FREE3, abs=tol)


@pytest.mark.parametrize("energy", [0.0, 1.0, -1.9])
def test_free_elliptic(tmap, energy):
    est = ly.estimate_torus(pot.constant(0.0), CocycleParams(0.0, energy), tmap, 10_000, 4, 1)
    assert abs(est.value) < 2e-3


def test_determinism_threads_and_backends(tmap, vexp):
    prm = CocycleParams.scaled(100.0, 0.5)
    a = ly.estimate_torus(vexp, prm, tmap, 300, 64, 9, threads=1)
    b = ly.estimate_torus(vexp, prm, tmap, 300, 64, 9, threads=3)
    assert a.value == b.value and np.array_equal(a.per_sample, b.per_sample)
    outs = [ly.estimate_torus(vexp, prm, tmap, 300, 64, 9, backend=be).value for be in BACKENDS]
    assert max(outs) - min(outs) < 1e-12


def test_seed_changes_sample(tmap, vexp):
    prm = CocycleParams.scaled(10.0, 0.5)
    a = ly.estimate_torus(vexp, prm, tmap, 100, 32, 1)
    b = ly.estimate_torus(vexp, prm, tmap, 100, 32, 2)
    assert a.value != b.value
    assert np.array_equal(ly.draw_phases(10, 5), ly.draw_phases(10, 5))


def test_estimators_agree(tmap, vexp):
    prm = CocycleParams.scaled(100.0, 1.0)
    vi = ly.estimate_torus(vexp, prm, tmap, 2000, 200, 3)
    nprod = ly.estimate_torus(vexp, prm, tmap, 2000, 200, 3, estimator="norm_product")
    assert abs(vi.value - nprod.value) < 3 * math.hypot(vi.stderr, nprod.stderr) + 2e-3


def test_block_processing_is_invisible(tmap, vexp, monkeypatch):
    prm = CocycleParams.scaled(10.0, 0.0)
    full = ly.estimate_torus(vexp, prm, tmap, 200, 50, 4)
    monkeypatch.setattr(ly, "BLOCK_ELEMENTS", 1000)
    blocked = ly.estimate_torus(vexp, prm, tmap, 200, 50, 4)
    assert np.array_equal(full.per_sample, blocked.per_sample)


def test_short_leaf_still_estimates(tmap, vexp):
    est = ly.estimate_leaf(vexp, CocycleParams.scaled(100.0, 0.5), tmap, 1e-3, 200, 50, 1)
    assert math.isfinite(est.value) and est.estimator == "leaf_restricted"


def test_subadditive_constant_matrix(tmap):
    # a_n = (1/n) log ||A^n|| for the constant matrix, from numpy
    A = np.array([[3.0, -1.0], [1.0, 0.0]])
    tr = ly.subadditive_trace(pot.constant(0.0), CocycleParams(0.0, 3.0), tmap, [1, 2, 5, 20], 3, 0)
    for n, a in zip(tr.word_lengths, tr.averages):
        assert a == pytest.approx(math.log(np.linalg.norm(np.linalg.matrix_power(A, n), 2)) / n, rel=1e-12)


def test_subadditive_trace_decreasing(tmap, vexp):
    tr = ly.subadditive_trace(vexp, CocycleParams.scaled(10.0, 0.5), tmap, [1, 2, 4, 8, 16, 32, 64, 128, 256],
                              400, 3, "reduced")
    assert tr.averages[0] >= tr.averages[-1]
    assert tr.max_increase() < 3.0


def test_certificate_shift_under_doubling():
    per = [-2.1, -2.4, -2.3]
    a = ly.certificate_value(per, 1.2, 50.0)
    b = ly.certificate_value(per, 1.2, 100.0)
    assert b - a == pytest.approx(math.log(2.0), abs=1e-15)


def test_certificate_is_lower_bound(tmap, vexp):
    prm = CocycleParams.scaled(100.0, 0.5)
    z = math.sqrt(2.0) / 2
    cert = ly.lower_bound_certificate(vexp, prm, tmap, z, 6)
    est = ly.estimate_leaf(vexp, prm, tmap, z, 1000, 300, 2, "reduced")
    assert len(cert.per_step) == 6
    assert all(math.isfinite(x) for x in cert.per_step)
    assert cert.value <= est.value + 3 * est.stderr


def test_log_cos_integral_without_singularity(tmap, vexp):
    # t outside the range of v: theta_0 stays away from pi/2, plain quadrature applies
    from catlyap.angle import AngleKernel
    from catlyap.leaves import leaf_from_z
    k = AngleKernel(vexp, CocycleParams.scaled(100.0, -1.0))
    leaf = leaf_from_z(0.5, tmap)
    (i0,) = ly.log_cos_integrals(k, tmap, leaf, 1, 1)
    s = (np.arange(200_000) + 0.5) * leaf.length / 200_000
    th = np.arctan2(1.0, -1.0 - vexp.value(leaf.point_array(s)))
    assert i0 == pytest.approx(np.mean(np.log(np.abs(np.cos(th)))) * leaf.length, rel=1e-6)


def test_invalid_arguments(tmap, vexp):
    prm = CocycleParams.scaled(10.0, 0.5)
    with pytest.raises(ValueError):
        ly.estimate_torus(vexp, prm, tmap, 0, 10, 1)
    with pytest.raises(ValueError):
        ly.estimate_torus(vexp, prm, tmap, 10, 0, 1)
    with pytest.raises(ValueError):
        ly.subadditive_trace(vexp, prm, tmap, [4, 2], 10, 1)
