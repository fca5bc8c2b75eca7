import math

import numpy as np
import pytest
from hypothesis import example, given, strategies as st

from catlyap import leaves as lv
from catlyap.errors import OutOfRange
from catlyap.torus import TorusPoint, orbit_array

SQRT2 = math.sqrt(2.0)
zs = st.floats(1e-6, SQRT2 - 1e-6)


def _closed_form_count(tmap, leaf, n):
    # integers strictly inside the range of each coordinate of the unreduced image
    if n == 0:
        return 0
    x0, vel = lv.image_affine(tmap, leaf, n)
    total = 0
    for i in range(2):
        lo, hi = sorted((x0[i], x0[i] + vel[i] * leaf.length))
        total += max(0, math.ceil(hi) - math.floor(lo) - 1)
    return total


@given(zs)
def test_leaf_geometry(tmap, z):
    leaf = lv.leaf_from_z(z, tmap)
    a, s0 = leaf.anchor, leaf.start
    assert a.w1 + a.w2 == pytest.approx(1.0, abs=1e-15)
    assert math.hypot(a.w1, a.w2 - 1.0) == pytest.approx(z, rel=1e-12)
    assert min(s0.w1, s0.w2) == pytest.approx(0.0, abs=1e-15)
    end = leaf.point_array(leaf.length)
    assert max(end) == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(leaf.direction, tmap.unstable_unit)
    assert np.allclose(leaf.point_array(leaf.s_star), a.as_array(), atol=1e-14)


def test_central_leaf(tmap):
    leaf = lv.leaf_from_z(SQRT2 / 2, tmap)
    assert np.allclose(leaf.anchor.as_array(), [0.5, 0.5])


def test_z_out_of_range(tmap):
    for z in (0.0, SQRT2, -1.0):
        with pytest.raises(OutOfRange):
            lv.leaf_from_z(z, tmap)


def test_fubini_area_identity(tmap):
    # J * integral of leaf length over z covers the unit square
    m = 20000
    z = (np.arange(m) + 0.5) * SQRT2 / m
    lengths = np.array([lv.leaf_from_z(x, tmap).length for x in z])
    assert lv.fubini_jacobian(tmap) * lengths.sum() * SQRT2 / m == pytest.approx(1.0, abs=1e-6)


@given(st.floats(0.0, 1.0, exclude_max=True), st.floats(0.0, 1.0, exclude_max=True))
def test_leaf_of_point_roundtrip(tmap, x, y):
    leaf, s = lv.leaf_of_point(TorusPoint(x, y), tmap)
    assert np.allclose(leaf.point_array(s), [x, y], atol=1e-12)


@given(zs, st.integers(0, 12))
@example(6.103515625e-05, 10)  # near-corner leaf: two crossings 6e-13 apart
@example(1.414212562373095, 11)  # crossings that tie in float
def test_crossing_count_closed_form(tmap, z, n):
    leaf = lv.leaf_from_z(z, tmap)
    c = lv.image_crossings(tmap, leaf, n)
    assert c.count == _closed_form_count(tmap, leaf, n)
    assert c.count < lv.disc_bound(tmap, n)
    assert np.all((c.crossings > 0) & (c.crossings < leaf.length))


@pytest.mark.parametrize("z", [0.1, 0.7071, 1.3])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_crossings_against_sampled_orbit(tmap, z, n):
    # jumps of the reduced orbit between dense samples bracket the exact crossings
    leaf = lv.leaf_from_z(z, tmap)
    s = np.linspace(0.0, leaf.length, 400_001)[1:-1]
    img = orbit_array(tmap, leaf.point_array(s), n)[-1]
    jumps = np.flatnonzero(np.any(np.abs(np.diff(img, axis=0)) > 0.5, axis=1))
    exact = lv.crossing_params(tmap, leaf, n)
    assert len(jumps) == len(exact)
    assert np.all((s[jumps] <= exact) & (exact <= s[jumps + 1]))


def test_n0_has_no_crossings(tmap):
    for z in np.linspace(0.01, 1.4, 50):
        assert lv.image_crossings(tmap, lv.leaf_from_z(z, tmap), 0).count == 0


@pytest.mark.parametrize("n", [1, 3, 6])
def test_image_decomposition(tmap, n):
    leaf = lv.leaf_from_z(0.4, tmap)
    pieces = lv.image_decomposition(tmap, leaf, n)
    stretch = tmap.expansion ** n
    assert sum(p.image_length for p in pieces) == pytest.approx(stretch * leaf.length, rel=1e-12)
    for p in pieces:
        mid = 0.5 * (p.s_lo + p.s_hi)
        img = orbit_array(tmap, leaf.point_array(mid)[None], n)[-1, 0]
        tgt = p.target.point_array(p.offset + stretch * (mid - p.s_lo))
        assert np.allclose(img, tgt, atol=1e-9)
        assert -1e-9 <= p.offset and p.target_hi <= p.target.length + 1e-9


def test_accumulated_is_union(tmap):
    leaf = lv.leaf_from_z(0.9, tmap)
    acc = lv.accumulated_discontinuities(tmap, leaf, 5)
    parts = np.concatenate([lv.crossing_params(tmap, leaf, k) for k in range(6)])
    assert len(acc) == len(np.unique(np.round(parts, 11)))
    assert np.all(np.diff(acc) > 0)


def test_other_map(tmap31):
    leaf = lv.leaf_from_z(0.5, tmap31)
    for n in range(8):
        assert lv.image_crossings(tmap31, leaf, n).count == _closed_form_count(tmap31, leaf, n)
