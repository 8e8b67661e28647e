import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sturmgordon.coefficients import StepFunction
from sturmgordon.errors import InvalidParameter
from sturmgordon.gronwall import GronwallInstance, gronwall_bound, gronwall_oracle, simplex_mass
from sturmgordon.measure import LocalMeasure
from sturmgordon.sampling import random_gronwall

ONE = StepFunction.constant(1.0)


def instance(kernel, alpha=ONE, T=2.0):
    return GronwallInstance(alpha, kernel, T)


def direct_bound(g, t, n=200_000):
    """alpha(t) + int_[0,t) alpha(s) exp(mu((s,t))) dmu(s) by midpoint sums."""
    k = g.kernel
    xs = t * (np.arange(n) + 0.5) / n
    # mu((s, t)) = phi_left(t) - phi(s)
    expo = k.phi_left(t) - k.phi(xs)
    total = float(np.sum(g.alpha(xs) * np.exp(expo) * k.density_at(xs)) * t / n)
    for x, w in k.atoms:
        if 0.0 <= x < t:
            total += float(g.alpha(x)) * w * math.exp(k.phi_left(t) - k.phi(x))
    return float(g.alpha(t)) + total


class TestClosedForm:
    def test_exponential(self):
        g = instance(LocalMeasure.lebesgue())
        for t in (0.0, 0.5, 1.0, 2.0):
            assert gronwall_bound(g, t) == pytest.approx(math.exp(t), rel=1e-14)

    def test_single_atom(self):
        g = instance(LocalMeasure.dirac(0.5, 1.5))
        assert gronwall_bound(g, 1.0) == pytest.approx(2.5)
        # the atom only acts on [0, t) with t > t0
        assert gronwall_bound(g, 0.5) == 1.0

    def test_zero_kernel(self):
        g = instance(LocalMeasure.zero())
        assert gronwall_bound(g, 1.3) == 1.0

    def test_two_atoms_open_interval(self):
        # the earlier atom sees the later one in exp(mu((s, t)))
        g = instance(LocalMeasure((), ((0.2, 1.0), (0.6, 0.5))))
        assert gronwall_bound(g, 1.0) == pytest.approx(1 + math.exp(0.5) + 0.5)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10_000))
    def test_against_direct_quadrature(self, seed):
        rng = np.random.default_rng(seed)
        g = random_gronwall(rng)
        t = float(rng.uniform(0.05, g.T))
        assert gronwall_bound(g, t) == pytest.approx(direct_bound(g, t), rel=1e-4)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10_000), st.floats(0.0, 1.0))
    def test_monotone(self, seed, extra):
        rng = np.random.default_rng(seed)
        g = random_gronwall(rng)
        t = float(rng.uniform(0.05, g.T))
        alpha2 = StepFunction(tuple((s, e, v + extra) for s, e, v in g.alpha.pieces), None, extra)
        heavier = LocalMeasure(g.kernel.pieces, g.kernel.atoms + ((0.5 * t, extra),))
        base = gronwall_bound(g, t)
        assert gronwall_bound(GronwallInstance(alpha2, g.kernel, g.T), t) >= base - 1e-12
        assert gronwall_bound(GronwallInstance(g.alpha, heavier, g.T), t) >= base - 1e-12

    def test_range(self):
        g = instance(LocalMeasure.lebesgue())
        with pytest.raises(InvalidParameter):
            gronwall_bound(g, 2.5)
        with pytest.raises(InvalidParameter):
            gronwall_bound(g, -0.1)

    def test_instance_validation(self):
        with pytest.raises(InvalidParameter):
            instance(LocalMeasure.dirac(0.5, -1.0))
        with pytest.raises(InvalidParameter):
            instance(LocalMeasure.lebesgue(), T=0.0)


class TestOracle:
    def test_zero_kernel(self):
        alpha = StepFunction(((0.0, 1.0, 0.5), (1.0, 2.0, 3.0)), None, 0.0)
        part, cap = gronwall_oracle(instance(LocalMeasure.zero(), alpha), 1.5)
        assert (part, cap) == (3.0, 0.0)

    def test_exponential(self):
        g = instance(LocalMeasure.lebesgue())
        for t in np.linspace(0.1, 2.0, 8):
            part, cap = gronwall_oracle(g, t, n_grid=2048, k_max=20)
            assert part == pytest.approx(math.exp(t), abs=1e-4)
            assert cap < 1e-8

    def test_cap_decreases_factorially(self):
        g = instance(LocalMeasure.lebesgue())
        caps = [gronwall_oracle(g, 2.0, 256, k)[1] for k in (4, 8, 12, 16)]
        assert all(b < a / 100 for a, b in zip(caps, caps[1:]))

    def test_atoms_exact(self):
        # equality case: u = 1 on [0, 0.2], 2 on (0.2, 0.6], then 1 + 1 * 1 + 0.5 * 2
        g = instance(LocalMeasure((), ((0.2, 1.0), (0.6, 0.5))))
        part, _ = gronwall_oracle(g, 1.0, 64, 10)
        assert part == pytest.approx(3.0, rel=1e-12)
        # exp(w) > 1 + w, so the closed bound is strict for atoms
        assert gronwall_bound(g, 1.0) > part

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10_000))
    def test_dominated_by_bound(self, seed):
        rng = np.random.default_rng(seed)
        g = random_gronwall(rng)
        t = float(rng.uniform(0.05, g.T))
        part, _ = gronwall_oracle(g, t)
        assert part <= gronwall_bound(g, t) + 1e-4

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 10_000))
    def test_sharp_for_densities(self, seed):
        # without atoms the bound solves the equality case, so the series converges to it
        rng = np.random.default_rng(seed)
        g0 = random_gronwall(rng, n_atoms=0)
        t = float(rng.uniform(0.05, g0.T))
        part, cap = gronwall_oracle(g0, t, 2048, 25)
        assert gronwall_bound(g0, t) == pytest.approx(part, abs=1e-4 + cap)

    def test_parameters(self):
        g = instance(LocalMeasure.lebesgue())
        with pytest.raises(InvalidParameter):
            gronwall_oracle(g, 1.0, n_grid=4)
        with pytest.raises(InvalidParameter):
            gronwall_oracle(g, 1.0, k_max=0)


@settings(max_examples=50)
@given(st.lists(st.tuples(st.floats(0.01, 0.99), st.floats(0.0, 2.0)), max_size=7),
       st.integers(1, 4))
def test_simplex_mass(atoms, k):
    mass, cap = simplex_mass(atoms, 0.0, 1.0, k)
    assert mass <= cap * (1 + 1e-12) + 1e-15
