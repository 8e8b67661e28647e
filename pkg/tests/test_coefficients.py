import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sturmgordon.coefficients import (Coefficients, StepFunction, add_steps, classical, jacobi,
                                      l1_distance, schroedinger, validate)
from sturmgordon.errors import InvalidParameter
from sturmgordon.measure import LocalMeasure, unif_norm
from sturmgordon.sampling import random_measure, random_step

ONE = StepFunction.constant(1.0)
LEB = LocalMeasure.lebesgue()


class TestStepFunction:
    def test_right_continuous(self):
        f = StepFunction(((0.0, 0.5, 1.0), (0.5, 1.0, 3.0)), 1.0)
        assert f(0.5) == 3.0
        assert f(0.4999) == 1.0
        assert f(1.0) == 1.0
        assert f(-0.25) == 3.0

    def test_non_periodic_default(self):
        f = StepFunction(((0.0, 1.0, 2.0),), None, 5.0)
        assert list(f(np.array([-1.0, 0.0, 0.99, 1.0]))) == [5.0, 2.0, 2.0, 5.0]

    def test_norms(self):
        f = StepFunction(((0.0, 0.5, 0.25), (0.5, 1.0, 4.0)), 1.0)
        assert (f.sup, f.inf, f.inv_sup) == (4.0, 0.25, 4.0)

    def test_zero_value_makes_inverse_unbounded(self):
        f = StepFunction(((0.0, 0.5, 0.0), (0.5, 1.0, 1.0)), 1.0)
        assert f.inv_sup == math.inf

    def test_negative_rejected(self):
        with pytest.raises(InvalidParameter):
            StepFunction(((0.0, 1.0, -1.0),), 1.0)

    def test_shift(self):
        f = StepFunction(((0.0, 0.5, 1.0), (0.5, 1.0, 3.0)), 1.0)
        g = f.shift(0.5)
        xs = np.linspace(-2, 2, 81)
        assert np.array_equal(g(xs), f(xs + 0.5))

    def test_l1_distance_exact(self):
        f = StepFunction(((0.0, 0.5, 1.0), (0.5, 1.0, 3.0)), 1.0)
        assert l1_distance(f, f.shift(0.25), 0.0, 1.0) == pytest.approx(1.0)
        assert l1_distance(f, f.shift(1.0), -3.0, 3.0) == 0.0

    @given(st.integers(0, 10_000), st.floats(-1.5, 1.5))
    def test_l1_distance_vs_midpoint_rule(self, seed, p):
        rng = np.random.default_rng(seed)
        f = random_step(rng, 1.0, 4)
        g = random_step(rng, 0.5, 3)
        n = 200_000
        xs = -1.0 + 3.0 * (np.arange(n) + 0.5) / n
        ref = float(np.abs(f(xs) - g.shift(p)(xs)).sum() * 3.0 / n)
        assert l1_distance(f, g.shift(p), -1.0, 2.0) == pytest.approx(ref, abs=1e-3)

    @given(st.integers(0, 10_000))
    def test_add_steps(self, seed):
        rng = np.random.default_rng(seed)
        f, g = random_step(rng, 1.0, 3), random_step(rng, 1.5, 2)
        xs = rng.uniform(-4, 4, 200)
        assert np.allclose(add_steps(f, g)(xs), f(xs) + g(xs))

    def test_dict_roundtrip(self):
        f = StepFunction(((0.0, 0.3, 1.5), (0.3, 1.0, 2.0)), 1.0, 1.5)
        assert StepFunction.from_dict(f.to_dict()) == f


class TestValidate:
    def test_free_triple(self):
        rep = validate(Coefficients(ONE, LEB, LocalMeasure.zero()))
        assert rep.ok
        assert rep.norms == pytest.approx((1, 1, 0, 1))

    def test_zero_diffusion(self):
        a = StepFunction(((0.0, 0.5, 0.0), (0.5, 1.0, 1.0)), 1.0)
        rep = validate(Coefficients(a, LEB, LocalMeasure.zero()))
        assert not rep.ok
        assert "1/a unbounded" in rep.messages

    def test_support(self):
        rep = validate(Coefficients(ONE, LocalMeasure.lattice(1.0), LocalMeasure.dirac(0.5)))
        assert not rep.ok
        assert rep.messages == ["spt mu not contained in spt rho"]
        assert validate(Coefficients(ONE, LocalMeasure.lattice(1.0), LocalMeasure.dirac(2.0))).ok

    def test_weight_checks(self):
        rep = validate(Coefficients(ONE, LocalMeasure.dirac(0.0), LocalMeasure.zero()))
        assert "rho not periodic" in rep.messages
        rep = validate(Coefficients(ONE, LocalMeasure.lebesgue(-1.0), LocalMeasure.zero()))
        assert "rho has negative parts" in rep.messages

    def test_density_potential_needs_density_weight(self):
        rho = LocalMeasure(((0.0, 0.5, 1.0),), (), 1.0)
        ok = LocalMeasure(((0.1, 0.4, 3.0),), ((0.25, 1.0),), 1.0)
        bad = LocalMeasure(((0.4, 0.6, 3.0),), (), 1.0)
        assert validate(Coefficients(ONE, rho, ok)).ok
        assert not validate(Coefficients(ONE, rho, bad)).ok

    @given(st.integers(0, 10_000))
    def test_schroedinger_always_valid(self, seed):
        rng = np.random.default_rng(seed)
        mu = random_measure(rng, period=float(rng.choice([0.5, 1.0, 2.0])), n_pieces=3,
                            n_atoms=3)
        assert validate(schroedinger(mu)).ok


class TestConstructors:
    def test_classical(self):
        free = classical(1, 1, 0)
        assert free.potential.is_zero()
        assert classical(1, 1, 1).potential.isclose(LEB)
        r = StepFunction(((0.0, 1.0, 2.0),), 1.0)
        c = classical(r, 1, 0)
        assert unif_norm(c.weight) == pytest.approx(2.0)
        assert not c.weight.atoms and not c.potential.atoms

    def test_classical_rejects(self):
        with pytest.raises(InvalidParameter):
            classical(0, 1, 0)
        with pytest.raises(InvalidParameter):
            classical(StepFunction(((0.0, 1.0, 2.0),), None), 1, 0)

    def test_schroedinger(self):
        c = schroedinger(LocalMeasure.lattice(1.0))
        assert c.diffusion == ONE
        assert c.weight.isclose(LEB)
        q = LocalMeasure(((0.0, 0.5, 2.0),), (), 1.0)
        d = classical(1, 1, q)
        assert schroedinger(q).potential == d.potential

    def test_jacobi_free(self):
        c = jacobi([1.0], [0.0])
        assert c.diffusion(np.array([0.3, 5.7])).tolist() == [1.0, 1.0]
        assert c.potential.is_zero()
        assert c.weight.isclose(LocalMeasure.lattice(1.0))
        assert validate(c).ok

    def test_jacobi_periodic(self):
        c = jacobi([1.0, 2.0], [0.0, 3.0])
        assert c.diffusion.period == 2.0
        assert c.diffusion.pieces == ((0.0, 1.0, 1.0), (1.0, 2.0, 2.0))
        assert c.potential.atoms == ((1.0, 3.0),)
        assert c.potential.period == 2.0

    def test_jacobi_lcm_period(self):
        c = jacobi([1.0, 2.0], [0.0, 1.0, 2.0])
        assert c.diffusion.period == 6.0

    def test_jacobi_rejects(self):
        with pytest.raises(InvalidParameter):
            jacobi([1.0, 0.0], [0.0])

    def test_dict_roundtrip(self):
        c = jacobi([1.0, 2.0], [0.5, 3.0])
        assert Coefficients.from_dict(c.to_dict()) == c
