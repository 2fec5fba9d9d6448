import math

import pytest
from hypothesis import given, strategies as st

from bcshubbard import (DensityVector, ModelParams, NonFinite, NonPositiveBeta,
                        NonPositiveGamma, hole_dual, validate)

reals = st.floats(-10, 10, allow_nan=False)


def test_valid():
    p = validate(1, 0, 0, 2.6, 0)
    assert p == ModelParams(1.0, 0.0, 0.0, 2.6, 0.0)


@pytest.mark.parametrize("raw,err", [
    ((-1, 0, 0, 2.6, 0), NonPositiveBeta),
    ((0, 0, 0, 2.6, 0), NonPositiveBeta),
    ((1, 1, 0.5, 0, 0), NonPositiveGamma),
    ((1, math.nan, 0, 1, 0), NonFinite),
    ((1, 0, math.inf, 1, 0), NonFinite),
    ((1, 0, 0, 1, "x"), NonFinite),
])
def test_rejections(raw, err):
    with pytest.raises(err) as ei:
        validate(*raw)
    assert ei.value.bound in str(ei.value) or err is NonFinite


def test_hole_dual_example():
    q = hole_dual(ModelParams(7, 1, 0.575, 2.6, 0.1))
    assert q.beta == 7 and q.lam == 0.575 and q.gamma == 2.6
    assert q.mu == pytest.approx(0.15, abs=1e-15) and q.h == -0.1


def test_hole_dual_fixed_point():
    q = hole_dual(ModelParams(2, 0.4, 0.4, 1, 0.3))
    assert q.mu == 0.4 and q.h == -0.3


@given(reals, reals, reals)
def test_hole_dual_involution(mu, lam, h):
    p = ModelParams(1.0, mu, lam, 1.0, h)
    q = hole_dual(hole_dual(p))
    assert q.mu == pytest.approx(p.mu, abs=1e-12) and q.h == p.h


def test_dict_roundtrip():
    p = ModelParams(7, 1, 0.575, 2.6, 0.1)
    assert ModelParams.from_dict(p.as_dict()) == p


def test_density_bounds():
    assert DensityVector(1.0, 0.5, 0.1).satisfies_bounds()
    assert not DensityVector(1.0, 0.0, 0.6).satisfies_bounds()
    assert not DensityVector(1.5, 0.8, 0.1).satisfies_bounds()
