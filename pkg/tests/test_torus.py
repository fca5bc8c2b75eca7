import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from catlyap.errors import NotHyperbolic, NotUnimodular
from catlyap.torus import (TorusPoint, apply, apply_array, apply_exact, frac, make_map, orbit, orbit_array)

from conftest import ALPHA, GOLDEN

unit = st.floats(0.0, 1.0, exclude_max=True, allow_nan=False)


def test_cat_map_eigendata(tmap):
    # closed-form eigendata of [2 1; 1 1]
    assert tmap.expansion == pytest.approx(ALPHA, rel=1e-15)
    assert tmap.unstable[0] == pytest.approx(GOLDEN, rel=1e-15)
    assert tmap.unstable[1] == 1.0
    assert tmap.unstable_norm == pytest.approx(math.hypot(GOLDEN, 1.0), rel=1e-15)
    u = np.array(tmap.unstable)
    assert np.allclose(tmap.matrix @ u, ALPHA * u, rtol=1e-14)


def test_other_map_eigendata(tmap31):
    assert tmap31.expansion == pytest.approx(2.0 + math.sqrt(3.0), rel=1e-15)
    u = np.array(tmap31.unstable)
    assert np.allclose(tmap31.matrix @ u, tmap31.expansion * u, rtol=1e-14)


def test_rejects_bad_matrices():
    with pytest.raises(NotUnimodular):
        make_map(2, 1, 1, 2)
    with pytest.raises(NotHyperbolic):
        make_map(1, 1, 0, 1)
    with pytest.raises(NotHyperbolic):
        make_map(0, -1, 1, 0)


def test_frac_range():
    assert frac(-1e-300) < 1.0
    assert frac(3.25) == 0.25
    assert frac(-0.25) == 0.75


def test_exact_periodic_orbit(tmap):
    # rational points are periodic; (1/5, 0) has cat-map period 10 by exact arithmetic
    p = (Fraction(1, 5), Fraction(0))
    q = p
    for k in range(1, 11):
        q = apply_exact(tmap, q)
        if q == p:
            break
    assert q == p and k == 10


def test_power_matches_matrix_power(tmap):
    for k in (-5, -1, 0, 1, 7, 20):
        a, b, c, d = tmap.power(k)
        m = np.linalg.matrix_power(np.array(tmap.matrix, dtype=object), abs(k)) if k >= 0 else None
        if m is not None:
            assert (a, b, c, d) == tuple(int(x) for x in m.ravel())
        else:
            inv = np.linalg.matrix_power(np.array(tmap.inverse().matrix, dtype=object), -k)
            assert (a, b, c, d) == tuple(int(x) for x in inv.ravel())


@given(unit, unit)
def test_inverse_roundtrip(tmap, x, y):
    p = TorusPoint(x, y)
    q = apply(tmap.inverse(), apply(tmap, p))
    d = np.abs(q.as_array() - p.as_array())
    assert np.all(np.minimum(d, 1.0 - d) < 1e-14)


@given(unit, unit)
def test_scalar_and_array_agree(tmap, x, y):
    p = TorusPoint(x, y)
    orb = orbit(tmap, p, 8)
    arr = orbit_array(tmap, np.array([[x, y]]), 8)[:, 0]
    assert np.allclose(arr, [q.as_array() for q in orb], atol=1e-12)
    assert np.all((arr >= 0.0) & (arr < 1.0))


def test_area_preservation_histogram(tmap, rng):
    # uniform points stay uniform: a 4x4 histogram after 5 steps is flat within noise
    pts = rng.random((200_000, 2))
    for _ in range(5):
        pts = apply_array(tmap, pts)
    h, _, _ = np.histogram2d(pts[:, 0], pts[:, 1], bins=4, range=[[0, 1], [0, 1]])
    expect = len(pts) / 16
    assert np.max(np.abs(h - expect)) < 5.0 * math.sqrt(expect)
