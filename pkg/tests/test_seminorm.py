import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sturmgordon.errors import InvalidParameter
from sturmgordon.measure import LocalMeasure, shift, subtract, unif_norm
from sturmgordon.sampling import random_measure
from sturmgordon.seminorm import (c_constant, distribution_function, flat_distance,
                                  oracle_grid_slack, seminorm_lower_oracle, seminorm_surrogate,
                                  window_flat_distance)

ZERO = LocalMeasure.zero()
LEB = LocalMeasure.lebesgue()
DELTA = LocalMeasure.dirac(0.0)


def quad_flat(mu, lo, hi, c, n=20001):
    """Midpoint rule for int_lo^hi |phi - c|."""
    h = (hi - lo) / n
    s = lo + h * (np.arange(n) + 0.5)
    return float(np.abs(mu.phi(s) - c).sum() * h)


def trapezoid_integral(mu, c, v, w):
    """int u dmu for the trapezoid of slope 1, plateau [c-v, c+v], support [c-w, c+w]."""
    def u(x):
        return np.clip(w - np.abs(x - c), 0.0, w - v)
    xs = np.linspace(c - w, c + w, 40001)
    mids = 0.5 * (xs[1:] + xs[:-1])
    total = float(np.sum(u(mids) * mu.density_at(mids)) * (xs[1] - xs[0]))
    restricted = mu.restrict(c - w - 1, c + w + 1) if mu.period is not None else mu
    total += sum(wt * float(u(x)) for x, wt in restricted.atoms if c - w < x < c + w)
    return total


def random_case(seed):
    rng = np.random.default_rng(seed)
    lo = float(rng.uniform(-2, 0))
    hi = lo + float(rng.uniform(2, 4))
    mu = random_measure(rng, n_pieces=int(rng.integers(0, 4)), n_atoms=int(rng.integers(0, 4)),
                        window=(lo - 0.5, hi + 0.5))
    return rng, mu, (lo, hi)


class TestWindowFlatDistance:
    def test_lebesgue(self):
        res = window_flat_distance(LEB, 0.0)
        assert res.value == pytest.approx(1.0)
        assert res.c_star == pytest.approx(0.0)

    def test_zero(self):
        res = window_flat_distance(ZERO, 0.3)
        assert (res.value, res.c_star) == (0.0, 0.0)

    def test_dirac_minimiser_interval(self):
        res = window_flat_distance(DELTA, 0.0)
        assert res.value == pytest.approx(1.0)
        assert (res.c_low, res.c_high) == pytest.approx((-1.0, 0.0))
        cs = np.linspace(-2, 1, 61)
        scan = [quad_flat(DELTA, -1, 1, c) for c in cs]
        assert min(scan) == pytest.approx(1.0, abs=1e-4)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10_000), st.floats(-2, 2))
    def test_median_beats_random_constants(self, seed, t):
        rng = np.random.default_rng(seed)
        mu = random_measure(rng, n_pieces=3, n_atoms=2, window=(-4.0, 4.0))
        res = window_flat_distance(mu, t)
        assert res.value == pytest.approx(quad_flat(mu, t - 1, t + 1, res.c_star), abs=1e-4)
        for c in rng.uniform(-3, 3, 100):
            assert res.value <= quad_flat(mu, t - 1, t + 1, c, 4001) + 1e-3


class TestCConstant:
    def test_examples(self):
        assert c_constant(ZERO) == 0.0
        assert c_constant(LEB) == pytest.approx(0.0)
        assert c_constant(DELTA) == pytest.approx(-0.5)

    @given(st.integers(0, 10_000))
    def test_bounded_by_unif_norm(self, seed):
        rng = np.random.default_rng(seed)
        mu = random_measure(rng, period=float(rng.choice([0.5, 1.0, 2.0])), n_pieces=3,
                            n_atoms=3, density=3.0, weight=2.0)
        assert abs(c_constant(mu)) <= unif_norm(mu) + 1e-12


class TestSurrogate:
    def test_zero(self):
        assert seminorm_surrogate(ZERO, (-3, 5)) == 0.0

    def test_lebesgue_single_window(self):
        assert seminorm_surrogate(LEB, (-1, 1)) == pytest.approx(1.0)

    def test_short_interval(self):
        with pytest.raises(InvalidParameter):
            seminorm_surrogate(LEB, (0, 1.5))

    def test_dipole_against_grid_scan(self):
        p = 0.1
        mu = subtract(DELTA, LocalMeasure.dirac(p))
        W = seminorm_surrogate(mu, (-1, 2))
        scan = max(min(quad_flat(mu, t - 1, t + 1, c, 4001) for c in np.linspace(-1, 1, 81))
                   for t in np.linspace(0, 1, 201))
        assert W == pytest.approx(0.1, abs=1e-9)
        assert W == pytest.approx(scan, abs=1e-3)

    @given(st.integers(0, 10_000))
    def test_shift_by_period_vanishes(self, seed):
        rng = np.random.default_rng(seed)
        mu = random_measure(rng, period=1.5, n_pieces=2, n_atoms=2)
        assert seminorm_surrogate(subtract(mu, shift(mu, 1.5)), (-2, 3)) == pytest.approx(0.0)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10_000))
    def test_dominates_test_functions(self, seed):
        rng, mu, (lo, hi) = random_case(seed)
        W = seminorm_surrogate(mu, (lo, hi))
        for _ in range(5):
            w = float(rng.uniform(0.05, 1.0))
            v = float(rng.uniform(0.0, w))
            c = float(rng.uniform(lo + w, hi - w))
            assert abs(trapezoid_integral(mu, c, v, w)) <= W + 1e-6


class TestLowerOracle:
    def test_zero(self):
        assert seminorm_lower_oracle(ZERO, (-1, 1), 64) == 0.0

    def test_dirac_approaches_one(self):
        vals = [seminorm_lower_oracle(DELTA, (-1, 1), n) for n in (5, 33, 257)]
        assert all(v <= 1.0 + 1e-12 for v in vals)
        assert vals == sorted(vals)
        assert vals[-1] == pytest.approx(1.0, abs=1e-2)

    def test_grid_size(self):
        with pytest.raises(InvalidParameter):
            seminorm_lower_oracle(LEB, (-1, 1), 1)

    def test_matches_direct_integral_on_lattice(self):
        rng, mu, (lo, hi) = random_case(7)
        n = 65
        L = seminorm_lower_oracle(mu, (lo, hi), n)
        centers = np.linspace(lo, hi, n)
        xs = np.linspace(0, 1, n)
        for _ in range(20):
            c = float(rng.choice(centers))
            reach = min(c - lo, hi - c)
            widths = xs[xs <= reach]
            if widths.size < 2:
                continue
            v, w = np.sort(rng.choice(widths, 2, replace=False))
            assert abs(trapezoid_integral(mu, c, v, w)) <= L + 1e-6

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10_000))
    def test_sandwich(self, seed):
        _, mu, I = random_case(seed)
        W = seminorm_surrogate(mu, I)
        L = seminorm_lower_oracle(mu, I, 129)
        eps = oracle_grid_slack(mu, I, 129)
        assert L <= W + 1e-9
        assert W <= 2 * L + 2 * eps + 1e-12


def test_distribution_function_integral():
    mu = LocalMeasure(((0.0, 1.0, 2.0),), ((0.5, -1.0),))
    df = distribution_function(mu, -1.0, 2.0)
    xs = np.linspace(-1, 2, 30001)
    ref = float(np.sum(mu.phi(0.5 * (xs[1:] + xs[:-1]))) * (xs[1] - xs[0]))
    assert df.integral(2.0) - df.integral(-1.0) == pytest.approx(ref, abs=1e-6)
    assert df.integral(2.0) - df.integral(-1.0) == pytest.approx(1.5)


def test_flat_distance_short_window():
    # lengths below 2 are allowed for the plain flat distance
    assert flat_distance(LEB, -0.25, 0.25).value == pytest.approx(0.0625)
