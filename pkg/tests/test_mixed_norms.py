import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from platelab.gabor import Window, stft
from platelab.lattice import Field, Lattice
from platelab.mixed_norms import (IndexPoint, MixedNormSpec, dilation_slope_bracket, mixed_norm,
                                  modulation_norm, mu_branches, mu_exponents, parse_exponent,
                                  regions, wiener_norm)

INF = math.inf


def _field():
    lat = Lattice(1, 64, 8.0)
    return Field.gaussian(lat, 0.7, shift=0.5, frequency=1.0) + Field.gaussian(lat, 1.5, amplitude=0.5j)


@pytest.mark.parametrize("p", [1, 2, 3, INF])
def test_wiener_equals_modulation_on_diagonal(p):
    M = stft(_field())
    a = modulation_norm(M, MixedNormSpec.modulation(p, p))
    b = wiener_norm(M, MixedNormSpec.wiener(p, p))
    assert abs(a - b) <= 1e-13 * a


def test_m2_norm_is_product_of_l2_norms():
    f = _field()
    g = Window.gaussian(f.lattice)
    value = mixed_norm(stft(f, g), MixedNormSpec.modulation(2, 2))
    assert value == pytest.approx(f.l2_norm() * g.l2_norm, rel=1e-12)


def test_supremum_norm_is_grid_maximum():
    M = stft(_field())
    assert mixed_norm(M, MixedNormSpec.modulation(INF, INF)) == np.max(np.abs(M.values))


def test_frequency_weight_increases_norm_of_modulated_gaussian():
    lat = Lattice(1, 64, 8.0)
    M = stft(Field.gaussian(lat, frequency=2.0))
    plain = mixed_norm(M, MixedNormSpec.modulation(1, 1))
    weighted = mixed_norm(M, MixedNormSpec.modulation(1, 1, s=2))
    # the STFT concentrates at |w| = 2 where <w>^2 = 5
    assert 3.5 < weighted / plain < 5.5


def test_modulation_norm_needs_full_matrix():
    f = _field()
    with pytest.raises(ValueError, match="every grid position"):
        modulation_norm(stft(f, positions=[0, 1]), MixedNormSpec.modulation(1, 1))


def test_spec_validation():
    with pytest.raises(ValueError):
        MixedNormSpec.modulation(0.5, 1)
    with pytest.raises(ValueError, match="gamma"):
        MixedNormSpec(1, 1, 0, 1.0)
    assert parse_exponent("inf") == INF
    assert parse_exponent(" Infinity ") == INF
    assert MixedNormSpec.wiener("inf", 1).p == INF


def test_mu_table_values():
    assert mu_exponents(IndexPoint.from_exponents(INF, 1)) == (1, 0)
    assert mu_exponents(IndexPoint.from_exponents(2, 2)) == (Fraction(-1, 2), Fraction(-1, 2))
    assert mu_exponents(IndexPoint.from_exponents(1, INF)) == (-1, -2)
    assert mu_exponents(IndexPoint.from_exponents(1, 1)) == (0, -1)


def _grid_points(n=101):
    for i in range(n):
        for j in range(n):
            yield IndexPoint(Fraction(i, n - 1), Fraction(j, n - 1))


def test_branches_agree_on_the_grid():
    for pt in _grid_points():
        mu1, mu2 = mu_branches(pt)
        assert mu1 and mu2, pt
        assert len(set(mu1)) == 1 and len(set(mu2)) == 1, pt


fractions = st.fractions(min_value=0, max_value=1, max_denominator=1000)


@settings(max_examples=300, deadline=None)
@given(fractions, fractions)
def test_regions_cover_square_and_bracket_is_ordered(a, b):
    pt = IndexPoint(a, b)
    member = regions(pt)
    assert member["I1"] or member["I2"] or member["I3"]
    assert member["I1*"] or member["I2*"] or member["I3*"]
    mu1, mu2 = mu_exponents(pt)
    assert mu1 >= mu2


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 1), st.floats(0, 1))
def test_float_points_close_to_exact(a, b):
    exact = mu_exponents(IndexPoint(Fraction(a).limit_denominator(10**9), Fraction(b).limit_denominator(10**9)))
    approx = mu_exponents(IndexPoint(a, b))
    assert float(approx[0]) == pytest.approx(float(exact[0]), abs=1e-8)
    assert float(approx[1]) == pytest.approx(float(exact[1]), abs=1e-8)


def test_dilation_bracket():
    assert dilation_slope_bracket(MixedNormSpec.wiener(1, INF), 1) == (0.0, 1.0)
    assert dilation_slope_bracket(MixedNormSpec.wiener(1, INF), 2) == (0.0, 2.0)
    assert dilation_slope_bracket(MixedNormSpec.wiener(2, 2), 1) == (-0.5, -0.5)
    lo, hi = dilation_slope_bracket(MixedNormSpec.wiener(1, INF, s=1.0, gamma=2.0), 1)
    assert (lo, hi) == (-1.0, 3.0)
    with pytest.raises(ValueError):
        dilation_slope_bracket(MixedNormSpec.modulation(1, 1), 1)
