import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dualblind import (
    DegenerateSceneError,
    DelayChannel,
    DomainError,
    ExtremalInterval,
    InfeasibleBoundError,
    beurling_majorant_sgn,
    condition_bound,
    empirical_condition,
    min_separation,
    selberg_integral,
    selberg_majorant,
    selberg_minorant,
)
from dualblind.extremal import beurling_tail_bound, fourier_energy_outside, indicator

# H(x) = sin^2(pi x)/pi^2 * (psi1(-x) - psi1(1 + x) + 2/x), evaluated with mpmath at 30 digits
BEURLING_REFERENCE = {
    -2.7: -0.9898083970554275466,
    -0.3: 0.18201295997578412315,
    0.25: 1.283969927425211103,
    0.5: 1.2158542037080532573,
    1.5: 1.0357276550105638859,
    3.2: 1.0030689458031191012,
    10.5: 1.0008898905741478957,
    0.0: 1.0,
}


def test_min_separation_mixed_example():
    s = min_separation([0.10, 0.30], [0.60, 0.95])
    assert s.delta_r == pytest.approx(0.20, abs=1e-15)
    assert s.delta_c == pytest.approx(0.35, abs=1e-15)
    assert s.delta_rc == pytest.approx(0.15, abs=1e-15)
    assert s.delta == pytest.approx(0.15, abs=1e-15)


def test_min_separation_no_pairs():
    s = min_separation([0.2], [])
    assert s.delta_r == s.delta_c == s.delta_rc == s.delta == np.inf


def test_min_separation_wraps():
    assert min_separation([0.05, 0.95], []).delta_r == pytest.approx(0.10, abs=1e-15)


def test_min_separation_domain():
    with pytest.raises(DomainError):
        min_separation([0.2, 1.0], [])


@given(st.lists(st.floats(0, 1, exclude_max=True), max_size=6),
       st.lists(st.floats(0, 1, exclude_max=True), max_size=6))
def test_min_separation_invariants(r, c):
    s = min_separation(r, c)
    assert s.delta == min(s.delta_r, s.delta_c, s.delta_rc)
    for v in (s.delta_r, s.delta_c, s.delta_rc):
        assert v == np.inf or 0 <= v <= 0.5


@pytest.mark.parametrize("x,expected", sorted(BEURLING_REFERENCE.items()))
def test_beurling_matches_closed_form(x, expected):
    assert beurling_majorant_sgn(x) == pytest.approx(expected, abs=1e-11)


def test_beurling_majorizes_at_10_5():
    assert beurling_majorant_sgn(10.5, 10_000) >= 1.0


def test_beurling_tends_to_one():
    xs = np.array([50.5, 200.25, 1000.5])
    vals = beurling_majorant_sgn(xs)
    # H(x) - 1 is sin^2(pi x) / (pi x)^2 to leading order
    lead = np.sin(np.pi * xs) ** 2 / (np.pi * xs) ** 2
    assert np.all(np.abs(vals - 1 - lead) <= 2 / xs**3 + beurling_tail_bound(xs, 10_000))
    assert abs(vals[-1] - 1) < 1e-6


def test_beurling_dense_grid_majorizes_sgn():
    x = np.round(np.arange(-5000, 5001) * 1e-3, 12)
    sgn = np.where(x >= 0, 1.0, -1.0)
    oracle = beurling_majorant_sgn(x, 100_000)
    value = beurling_majorant_sgn(x, 10_000)
    assert (oracle - sgn).min() >= -1e-9
    assert (value - sgn).min() >= -1e-9
    assert np.max(np.abs(value - oracle)) <= beurling_tail_bound(5.0, 10_000).max() + 1e-12


def test_beurling_scalar_and_array_agree():
    xs = np.array([-1.25, 0.0, 2.0, 7.75])
    np.testing.assert_array_equal(beurling_majorant_sgn(xs), [beurling_majorant_sgn(v) for v in xs])


def test_beurling_beyond_truncation_widens():
    # truncation 10 is widened to 2 * 121 terms
    err = abs(beurling_majorant_sgn(120.5, truncation=10) - 1.00000695862038210503)
    assert err <= beurling_tail_bound(120.5, 242)


@given(st.floats(-4, 4), st.floats(0.1, 6), st.floats(0.25, 4))
def test_sandwich_property(a, length, bw):
    iv = ExtremalInterval(a, a + length, bw)
    t = np.linspace(a - 3, a + length + 3, 301)
    maj, mino = selberg_majorant(iv, t, 2000), selberg_minorant(iv, t, 2000)
    ind = indicator(iv, t)
    assert (maj - ind).min() >= -1e-9
    assert (ind - mino).min() >= -1e-9


def test_deep_interior_values():
    iv = ExtremalInterval(0.0, 74.0, 0.2)
    assert selberg_majorant(iv, 37.0) >= 1.0
    assert selberg_minorant(iv, 37.0) <= 1.0


def test_integrals_length_74():
    iv = ExtremalInterval(0.0, 74.0, 0.2)
    assert selberg_integral(iv, "majorant") == pytest.approx(79.0, rel=1e-3)
    assert selberg_integral(iv, "minorant") == pytest.approx(69.0, rel=1e-3)


@pytest.mark.parametrize("a,b,bw", [(-1, 1, 1), (0, 3, 0.5), (-2, 0.5, 2.5)])
def test_integral_identities(a, b, bw):
    iv = ExtremalInterval(a, b, bw)
    assert selberg_integral(iv, "majorant") == pytest.approx(b - a + 1 / bw, rel=1e-3)
    assert selberg_integral(iv, "minorant") == pytest.approx(b - a - 1 / bw, rel=1e-3)


@pytest.mark.parametrize("which", ["majorant", "minorant"])
def test_fourier_support(which):
    assert fourier_energy_outside(ExtremalInterval(-1, 1, 1), which) <= 1e-6


@pytest.mark.parametrize("bad", [(1, 1, 1), (2, 1, 1), (0, 1, 0), (0, 1, -1)])
def test_interval_validation(bad):
    with pytest.raises(DomainError):
        ExtremalInterval(*bad)


def test_condition_bound_values():
    assert condition_bound(75, 0.2) == pytest.approx(np.sqrt(79 / 69), abs=1e-4)
    assert condition_bound(75, 0.2) == pytest.approx(1.0700, abs=1e-4)
    assert condition_bound(10, np.inf) == 1.0


def test_condition_bound_precondition():
    with pytest.raises(InfeasibleBoundError, match="N = 12"):
        condition_bound(11, 0.1)


def test_condition_bound_monotone():
    for n in range(15, 120, 7):
        vals = [condition_bound(n, d) for d in np.linspace(0.1, 0.5, 9)]
        assert np.all(np.diff(vals) < 0)
    for d in (0.1, 0.2, 0.35):
        ns = np.arange(int(1 + 1 / d) + 1, 200)
        vals = [condition_bound(int(n), d) for n in ns]
        assert np.all(np.diff(vals) < 0)


def test_empirical_condition_single_column():
    g = np.exp(2j * np.pi * np.random.default_rng(0).random(20))
    assert empirical_condition(DelayChannel([0.3], [1]), DelayChannel.empty(), g, g) == pytest.approx(1.0)


def test_empirical_condition_duplicate_column():
    g = np.exp(2j * np.pi * np.random.default_rng(0).random(20))
    with pytest.raises(DegenerateSceneError):
        empirical_condition(DelayChannel([0.3], [1]), DelayChannel([0.3], [1]), g, g)
