import math

import numpy as np
import pytest

from vorwaves import stream
from vorwaves.errors import DivergenceError, DomainError
from vorwaves.stream import (
    depth,
    invert_profile,
    phi,
    profile,
    shoot_stream,
    solve_stream,
    surface_slope_squared,
)
from vorwaves.vorticity import VorticityDistribution as V

# closed forms used throughout:
#   omega == 0:  u = s y, d = 1/s, H(p) = p/s, Phi(p) = p/s^3
#   omega == 2:  u'^2 = s^2 - 4u, H(p) = (s - sqrt(s^2 - 4p))/2,
#                Phi(p) = ((s^2 - 4p)^{-1/2} - 1/s)/2


def test_irrotational_depth_and_profile(w_zero):
    for s in (0.5, 1.0, 2.0):
        np.testing.assert_allclose(depth(w_zero, s), 1.0 / s, rtol=1e-12)
        np.testing.assert_allclose(profile(w_zero, s, 0.37), 0.37 / s, rtol=1e-12)
        np.testing.assert_allclose(phi(w_zero, s), s ** -3, rtol=1e-12)


def test_constant_vorticity_closed_forms(w_two):
    s = 3.0
    np.testing.assert_allclose(depth(w_two, s), (3.0 - math.sqrt(5.0)) / 2.0,
                               rtol=1e-12)
    for p in (0.2, 0.5, 0.9):
        np.testing.assert_allclose(profile(w_two, s, p),
                                   (s - math.sqrt(s * s - 4.0 * p)) / 2.0,
                                   rtol=1e-12)
        np.testing.assert_allclose(
            phi(w_two, s, p),
            0.5 * ((s * s - 4.0 * p) ** -0.5 - 1.0 / s), rtol=1e-11)
    np.testing.assert_allclose(surface_slope_squared(w_two, s), 5.0, rtol=1e-14)


def test_threshold_depth_tie_case(w_tilted):
    # at s = s0 = 0 the margin vanishes at both endpoints;
    # d = int (6 tau (1 - tau))^{-1/2} = pi / sqrt(6)
    np.testing.assert_allclose(depth(w_tilted, 0.0), math.pi / math.sqrt(6.0),
                               rtol=1e-12)


def test_threshold_depth_surface_case(w_two):
    # s = s0 = 2: u'^2 = 4(1 - u), H(p) = 1 - sqrt(1 - p), d0 = 1
    np.testing.assert_allclose(depth(w_two, 2.0), 1.0, rtol=1e-12)
    st = solve_stream(w_two, 2.0)
    p = np.linspace(0.0, 1.0, 301)
    np.testing.assert_allclose(st.height_at(p), 1.0 - np.sqrt(1.0 - p),
                               atol=1e-12)


def test_below_threshold_rejected(w_two):
    with pytest.raises(DomainError):
        depth(w_two, 1.9)
    with pytest.raises(DomainError):
        solve_stream(w_two, -2.1)


def test_divergent_threshold_depth(w_zero):
    # condition "i": d(s0) = +inf, reported as divergence not a number
    with pytest.raises(DivergenceError):
        depth(w_zero, 0.0)


def test_phi_not_defined_at_threshold(w_two):
    with pytest.raises(DomainError):
        phi(w_two, 2.0)


def test_phi_decreasing_in_s(w_two):
    values = [phi(w_two, s) for s in (2.1, 2.5, 3.0, 4.0)]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_phi_cumulative_matches_pointwise(w_two):
    grid = np.linspace(0.0, 1.0, 17)
    cum = stream._phi_cumulative(w_two, 3.0, grid)
    want = [phi(w_two, 3.0, p) for p in grid]
    np.testing.assert_allclose(cum, want, rtol=1e-10, atol=1e-14)


def test_stream_solution_record(w_zero):
    st = solve_stream(w_zero, 2.0)
    np.testing.assert_allclose(st.d, 0.5, rtol=1e-13)
    np.testing.assert_allclose(st.u_prime_d, 2.0, rtol=1e-13)
    np.testing.assert_allclose(st.r, (4.0 + 1.0) / 3.0, rtol=1e-13)
    assert st.s0 == 0.0
    assert "StreamSolution" in repr(st)


def test_profile_interpolation_accuracy(w_two):
    st = solve_stream(w_two, 3.0)
    p = np.linspace(0.0, 1.0, 1001)
    exact = (3.0 - np.sqrt(9.0 - 4.0 * p)) / 2.0
    np.testing.assert_allclose(st.height_at(p), exact, atol=1e-12)
    assert st.height_at(0.0) == 0.0
    assert st.height_at(1.0) == st.d


def test_profile_sqrt_branch_accuracy(w_tilted):
    # s = s0 with maximizers at both endpoints: the profile has sqrt
    # branches at p = 0 and p = 1; interpolation must not lose digits
    st = solve_stream(w_tilted, 0.0)
    p = np.linspace(0.0, 1.0, 401)
    h_exact = np.arcsin(np.sqrt(p)) * 2.0 / math.sqrt(6.0)
    np.testing.assert_allclose(st.height_at(p), h_exact, atol=1e-11)


def test_inversion_round_trip(w_two, w_tilted):
    for dist, s in ((w_two, 3.0), (w_two, 2.0), (w_tilted, 0.0), (w_tilted, 1.0)):
        st = solve_stream(dist, s)
        y = np.linspace(0.0, st.d, 100)
        p = st.u_at(y)
        np.testing.assert_allclose(st.height_at(p), y, atol=1e-9)
    assert invert_profile(solve_stream(w_two, 3.0), 0.0) == 0.0


def test_velocity_along_profile(w_zero, w_two):
    st = solve_stream(w_zero, 2.0)
    y = np.linspace(0.0, st.d, 20)
    np.testing.assert_allclose(st.velocity_at(y), np.full(20, 2.0), rtol=1e-10)

    st2 = solve_stream(w_two, 3.0)
    y2 = np.linspace(0.0, st2.d, 20)
    u = st2.u_at(y2)
    np.testing.assert_allclose(st2.velocity_at(y2), np.sqrt(9.0 - 4.0 * u),
                               rtol=1e-10)


def test_slope_at_maximizer_is_inf(w_two):
    st = solve_stream(w_two, 2.0)
    assert np.isinf(st.slope_at(1.0))
    np.testing.assert_allclose(st.slope_at(0.0), 0.5, rtol=1e-14)


def test_u_at_domain_check(w_two):
    st = solve_stream(w_two, 3.0)
    with pytest.raises(DomainError):
        st.u_at(st.d * 1.5)
    with pytest.raises(DomainError):
        st.u_at(-0.1)


def test_shoot_matches_quadrature(w_two, w_tilted):
    for dist, s in ((w_two, 2.5), (w_two, 4.0), (w_tilted, 0.7)):
        sh = shoot_stream(dist, s)
        np.testing.assert_allclose(sh.d, depth(dist, s), atol=1e-9)
        assert sh.unidirectional
        assert not sh.sign_change
        st = solve_stream(dist, s)
        np.testing.assert_allclose(sh.r, st.r, atol=1e-9)


def test_shot_stream_evaluators(w_two):
    sh = shoot_stream(w_two, 3.0)
    y = np.linspace(0.0, sh.d, 50)
    u = sh.u_at(y)
    # closed form: u'' = -2 with u(0) = 0, u'(0) = 3
    exact = 3.0 * y - y ** 2
    np.testing.assert_allclose(u, exact, atol=1e-10)
    np.testing.assert_allclose(sh.velocity_at(y), 3.0 - 2.0 * y, atol=1e-10)
    with pytest.raises(DomainError):
        sh.u_at(sh.d + 1.0)


def test_counter_current_shot(w_minus_two):
    # u'' = 2, u = y^2 - y: dips to -1/4 at y = 1/2, reaches 1 at the
    # golden ratio, u'(d) = sqrt(5)
    sh = shoot_stream(w_minus_two, -1.0)
    gold = (1.0 + math.sqrt(5.0)) / 2.0
    np.testing.assert_allclose(sh.d, gold, atol=1e-10)
    np.testing.assert_allclose(sh.min_u, -0.25, atol=1e-10)
    np.testing.assert_allclose(sh.min_location, 0.5, atol=1e-8)
    assert sh.sign_change
    assert not sh.unidirectional
    np.testing.assert_allclose(sh.u_prime_d, math.sqrt(5.0), rtol=1e-10)
    np.testing.assert_allclose(sh.r, (6.0 + math.sqrt(5.0)) / 3.0, rtol=1e-10)
