import math

import numpy as np
import pytest

from vorwaves import bernoulli
from vorwaves.errors import NoStreamError
from vorwaves.bernoulli import (
    analyze,
    conjugates,
    find_critical,
    head,
    second_critical,
)
from vorwaves.vorticity import VorticityDistribution as V


def test_irrotational_head_closed_form(w_zero):
    # R(s) = (s^2 + 2/s)/3
    for s in (0.5, 0.9, 1.0, 1.7):
        np.testing.assert_allclose(head(w_zero, s), (s * s + 2.0 / s) / 3.0,
                                   rtol=1e-12)


def test_irrotational_critical_point(w_zero):
    crit = find_critical(w_zero)
    np.testing.assert_allclose(crit.s_c, 1.0, atol=1e-10)
    np.testing.assert_allclose(crit.r_c, 1.0, atol=1e-12)
    np.testing.assert_allclose(crit.d_c, 1.0, atol=1e-10)
    assert abs(crit.phi_residual) < 1e-10


def test_constant_vorticity_head_closed_form(w_two):
    # d(s) = (s - sqrt(s^2-4))/2, u'(d)^2 = s^2 - 4
    for s in (2.2, 3.0, 4.0):
        d = (s - math.sqrt(s * s - 4.0)) / 2.0
        np.testing.assert_allclose(head(w_two, s), (s * s - 4.0 + 2.0 * d) / 3.0,
                                   rtol=1e-12)


def test_head_minimum_shape(w_two):
    # strictly decreasing into s_c, strictly increasing out of it
    crit = find_critical(w_two)
    below = [head(w_two, s) for s in np.linspace(2.001, crit.s_c, 5)]
    above = [head(w_two, s) for s in np.linspace(crit.s_c, 4.0, 5)]
    assert all(a > b for a, b in zip(below, below[1:]))
    assert all(a < b for a, b in zip(above, above[1:]))


def test_second_critical_closed_forms(w_two, w_minus_two, w_zero):
    sec = second_critical(w_two)
    np.testing.assert_allclose(sec.d0, 1.0, atol=1e-12)
    np.testing.assert_allclose(sec.r0, 2.0 / 3.0, atol=1e-12)

    secm = second_critical(w_minus_two)
    np.testing.assert_allclose(secm.d0, 1.0, atol=1e-12)
    np.testing.assert_allclose(secm.r0, 2.0, atol=1e-12)

    sec0 = second_critical(w_zero)
    assert sec0.d0 == math.inf
    assert sec0.r0 is None


def test_critical_below_second_critical(w_two, w_minus_two, w_tilted):
    for dist in (w_two, w_minus_two, w_tilted):
        an = analyze(dist)
        assert an.r0 is not None
        assert an.r_c < an.r0


def test_conjugate_pair_values(conj11):
    # bisection on (s^2 + 2/s)/3 = 1.1 reproduced independently in
    # test_acceptance; here the structural facts
    assert conj11.regime == "subcritical-pair"
    assert 0.0 < conj11.s_plus < 1.0 < conj11.s_minus
    np.testing.assert_allclose(conj11.d_plus, 1.0 / conj11.s_plus, rtol=1e-12)
    np.testing.assert_allclose(conj11.d_minus, 1.0 / conj11.s_minus, rtol=1e-12)
    assert conj11.d_plus > 1.0 > conj11.d_minus


def test_conjugates_share_the_head(w_zero, conj11):
    np.testing.assert_allclose(head(w_zero, conj11.s_plus), 1.1, atol=1e-12)
    np.testing.assert_allclose(head(w_zero, conj11.s_minus), 1.1, atol=1e-12)


def test_conjugates_critical_regime(w_zero):
    crit = find_critical(w_zero)
    pair = conjugates(w_zero, crit.r_c)
    assert pair.regime == "critical"
    assert pair.s_plus == pair.s_minus == crit.s_c


def test_conjugates_below_critical(w_zero):
    with pytest.raises(NoStreamError):
        conjugates(w_zero, 0.9)


def test_only_supercritical_regime(w_two):
    # r = 1 >= r0 = 2/3 cuts off the subcritical branch
    pair = conjugates(w_two, 1.0)
    assert pair.regime == "only-supercritical"
    assert pair.s_plus is None and pair.d_plus is None
    assert pair.s_minus is not None
    np.testing.assert_allclose(head(w_two, pair.s_minus), 1.0, atol=1e-11)
    crit = find_critical(w_two)
    assert pair.d_minus < crit.d_c


def test_subcritical_pair_with_vorticity(w_two):
    # head strictly between r_c ~ 0.59987 and r0 = 2/3
    pair = conjugates(w_two, 0.62)
    assert pair.regime == "subcritical-pair"
    crit = find_critical(w_two)
    assert 2.0 < pair.s_plus < crit.s_c < pair.s_minus
    assert pair.d_plus > crit.d_c > pair.d_minus
    np.testing.assert_allclose(head(w_two, pair.s_plus), 0.62, atol=1e-11)


def test_stationarity_at_the_critical_slope(w_zero, w_two, w_minus_two, w_tilted):
    from vorwaves.stream import phi
    for dist in (w_zero, w_two, w_minus_two, w_tilted):
        crit = find_critical(dist)
        assert abs(phi(dist, crit.s_c) - 1.0) < 1e-9


def test_analyze_record(w_two):
    an = analyze(w_two)
    assert an.condition == "iii"
    assert an.s0 == 2.0
    crit = find_critical(w_two)
    assert an.s_c == crit.s_c and an.r_c == crit.r_c and an.d_c == crit.d_c
    sec = second_critical(w_two)
    assert an.d0 == sec.d0 and an.r0 == sec.r0


def test_table_distribution_end_to_end():
    # piecewise-linear omega with a surface maximum; everything funnels
    # through the same quadratures, so one sanity pass suffices
    dist = V.from_table([(0.0, -1.0), (0.5, 0.5), (1.0, 3.0)])
    an = analyze(dist)
    assert an.condition == "iii"
    pair = conjugates(dist, an.r_c * 1.02)
    assert pair.regime == "subcritical-pair"
    np.testing.assert_allclose(head(dist, pair.s_plus), an.r_c * 1.02, atol=1e-10)
