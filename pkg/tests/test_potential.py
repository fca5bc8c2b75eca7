import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from catlyap import potential as pot
from catlyap.errors import ConfigError, NotMonotoneAlongUnstable
from catlyap.torus import TorusPoint

from conftest import GOLDEN

unit = st.floats(0.0, 1.0, exclude_max=True, allow_nan=False)


def test_exponential_values():
    v = pot.exponential()
    assert v.value(TorusPoint(0.0, 0.0)) == 1.0
    assert v.value(TorusPoint(0.5, 0.25)) == pytest.approx(math.exp(0.75), rel=1e-15)


def test_normalized_sup_norm(tmap):
    for v in (pot.exponential(True), pot.logarithm(True)):
        assert v.sup_norm <= 1.0 + 1e-15
        cert = pot.certify(v, tmap, grid=64)
        assert cert.sup_norm_measured <= v.sup_norm


def test_exponential_floor_closed_form(tmap):
    # D_u e^(w1+w2) = (u1 + 1) e^(w1+w2), minimized at the origin
    v = pot.exponential()
    assert v.deriv_floor(tmap) == pytest.approx(GOLDEN + 1.0, rel=1e-14)
    assert pot.certify(v, tmap).deriv_floor_measured == pytest.approx(GOLDEN + 1.0, rel=1e-12)


def test_constant_rejected(tmap):
    with pytest.raises(NotMonotoneAlongUnstable):
        pot.certify(pot.constant(0.5), tmap)


def test_decreasing_rejected(tmap):
    with pytest.raises(NotMonotoneAlongUnstable):
        pot.certify(pot.polynomial([0.0, -1.0], [0.0]), tmap)


@given(unit, unit)
def test_analytic_gradient_matches_fd(x, y):
    for v in (pot.exponential(True), pot.logarithm(True), pot.polynomial([0.1, 0.3, -0.2], [0.0, 0.5])):
        g = v.gradient(TorusPoint(x, y))
        h = 1e-6
        fd = [(v._value(x + h, y) - v._value(x - h, y)) / (2 * h),
              (v._value(x, y + h) - v._value(x, y - h)) / (2 * h)]
        assert np.allclose(g, fd, atol=1e-7)


def test_custom_table_potential(tmap):
    v = pot.from_config({"family": "custom", "table": [[0.0, 0.2], [0.3, 0.0]]})
    assert v.sup_norm == pytest.approx(0.5)
    assert np.isfinite(v.value(np.array([[0.3, 0.6]]))).all()


@pytest.mark.parametrize("block", [{}, {"family": "nope"}, {"family": "custom"}, [1, 2]])
def test_bad_config(block):
    with pytest.raises(ConfigError):
        pot.from_config(block)


def test_array_and_scalar_agree(vexp, rng):
    pts = rng.random((50, 2))
    arr = vexp.value(pts)
    assert np.allclose(arr, [vexp.value(TorusPoint(*p)) for p in pts], rtol=1e-15)
