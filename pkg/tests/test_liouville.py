import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from sturmgordon.bounds import gordon_distance
from sturmgordon.coefficients import StepFunction, schroedinger
from sturmgordon.errors import InvalidParameter, PrecisionError
from sturmgordon.liouville import liouville_alpha
from sturmgordon.measure import LocalMeasure
from sturmgordon.quasiperiodic import example_triple, quasiperiodic


def cf_value(quotients, tail=400):
    """Exact rational value of ``[a0; a1, ..., aK, 1, 1, ...]`` truncated after ``tail`` ones."""
    x = Fraction(1)
    for a in reversed(list(quotients) + [1] * tail):
        x = a + 1 / x
    return x


class TestLiouvilleAlpha:
    def test_b1_frozen(self):
        num = liouville_alpha(1.0, 4)
        assert num.partial_quotients == (1, 1, 1, 2, 41)
        assert num.convergents == ((1, 1), (2, 1), (3, 2), (8, 5))
        assert num.verify()

    def test_offsets_against_rational_oracle(self):
        num = liouville_alpha(1.0, 4)
        ref = cf_value(num.partial_quotients)
        with mpmath.workprec(400):
            alpha = mpmath.mpf(ref.numerator) / ref.denominator
            assert abs(num.value(400) - alpha) < mpmath.mpf(2) ** -300
        expected = [-0.5990480278060913, 0.4009519721939087, -0.19809605561218263,
                    0.004759860969543433]
        for m, (p, q) in enumerate(num.convergents, start=1):
            exact = float(p - ref * q)
            assert float(num.offset(m)) == pytest.approx(exact, abs=1e-15)
            assert float(num.offset(m)) == pytest.approx(expected[m - 1], abs=1e-15)

    def test_single_constraint(self):
        num = liouville_alpha(1.0, 1)
        assert num.m_max == 1 and num.verify()

    @pytest.mark.parametrize("B", [0.5, 1.0, 2.0, 10.0])
    def test_growth_condition(self, B):
        num = liouville_alpha(B, 4)
        # all convergents of the stored expansion, one beyond m_max
        conv = []
        pp, qp, p, q = 1, 0, num.partial_quotients[0], 1
        conv.append((p, q))
        for a in num.partial_quotients[1:]:
            pp, qp, p, q = p, q, a * p + pp, a * q + qp
            conv.append((p, q))
        assert tuple(conv[:4]) == num.convergents
        for m in range(1, num.m_max + 1):
            q_m, q_next = conv[m - 1][1], conv[m][1]
            assert q_next * q_m * B >= m ** q_m
        assert all(math.gcd(p, q) == 1 for p, q in conv)

    def test_certificate_is_checked_at_high_precision(self):
        num = liouville_alpha(1.0, 5)
        assert num.bits >= 128
        for m in range(1, 6):
            p, q = num.convergents[m - 1]
            ref = cf_value(num.partial_quotients, tail=50)
            with mpmath.workprec(num.bits + 64):
                err = abs(mpmath.mpf(ref.numerator) / ref.denominator - mpmath.mpf(p) / q)
                assert err <= mpmath.power(m, -q)

    def test_golden_ratio_fails_certificate(self):
        golden = (1 + 5 ** 0.5) / 2
        p5, q5 = cf_value([1, 1, 1, 1], tail=0).numerator, cf_value([1, 1, 1, 1], 0).denominator
        assert (p5, q5) == (8, 5)
        assert abs(golden - p5 / q5) > 5.0 ** -q5

    def test_precision_error(self):
        with pytest.raises(PrecisionError):
            liouville_alpha(1.0, 6)
        with pytest.raises(PrecisionError):
            liouville_alpha(1.0, 5, max_bits=512)
        with pytest.raises(PrecisionError):
            liouville_alpha(0.25, 4)

    def test_invalid(self):
        with pytest.raises(InvalidParameter):
            liouville_alpha(1.0, 0)
        with pytest.raises(InvalidParameter):
            liouville_alpha(-1.0, 2)


class TestQuasiperiodic:
    def test_constant_a2_is_exact(self):
        alpha = liouville_alpha(1.0, 3)
        qp = quasiperiodic(schroedinger(LocalMeasure.zero()), 0.5, None, alpha, h=0.1)
        assert qp.h == 0.0 and qp.sampling_error_bound == 0.0
        xs = np.linspace(-3, 3, 101)
        assert np.allclose(qp.window(-4, 4).diffusion(xs), 1.5)

    def test_periodic_when_second_part_vanishes(self):
        alpha = liouville_alpha(1.0, 3)
        base = schroedinger(LocalMeasure(((0.0, 0.5, 2.0),), ((0.75, -1.0),), 1.0))
        qp = quasiperiodic(base, None, None, alpha)
        c = qp.window(-12.0, 12.0)
        for p in (1.0, 2.0, 3.0):
            assert gordon_distance(c.diffusion, c.potential, p) == pytest.approx(0.0, abs=1e-12)

    def test_sampling_error(self):
        qp = example_triple(1.0, 3, h=1e-2)
        al = float(qp.alpha)
        c, beta = qp.holder
        assert c == pytest.approx(0.1 * 2 * np.pi / al) and beta == 1.0
        n = 400_000
        xs = (np.arange(n) + 0.5) / n
        exact = 0.1 * (1 + np.cos(2 * np.pi * xs / al))
        measured = float(np.abs(qp.a2(xs) - exact).mean())
        assert measured <= qp.sampling_error_bound <= c * qp.h ** beta
        assert qp.h <= 1e-2 and al / qp.h == pytest.approx(round(al / qp.h))

    def test_base_must_be_one_periodic(self):
        alpha = liouville_alpha(1.0, 2)
        base = schroedinger(LocalMeasure.lattice(0.7))
        with pytest.raises(InvalidParameter):
            quasiperiodic(base, None, None, alpha)

    def test_mu2_period(self):
        alpha = liouville_alpha(1.0, 2)
        with pytest.raises(InvalidParameter):
            quasiperiodic(schroedinger(LocalMeasure.zero()), None, LocalMeasure.lattice(1.0), alpha)

    def test_window_contains_both_lattices(self):
        qp = example_triple(1.0, 3)
        c = qp.window(-1.0, 5.0)
        locs = sorted(x for x, _ in c.potential.atoms)
        al = float(qp.alpha)
        expect = sorted(set([float(n) for n in range(0, 6)] + [n * al for n in range(0, 4) if n * al <= 5]))
        assert np.allclose(locs, expect)
        assert isinstance(qp.a2, StepFunction)
