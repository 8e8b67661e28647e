"""Liouville-type irrationals from greedy continued fractions.

The number is ``alpha = [a_0; a_1, ..., a_K, 1, 1, ...]``.  Partial
quotients are chosen greedily so that the convergent ``p_k / q_k`` with
``k = m - 1`` satisfies ``|alpha - p_k/q_k| <= B m^(-q_k)``: since
``|alpha - p_k/q_k| < 1 / (q_k q_{k+1})`` for every irrational with these
leading quotients, it suffices that ``q_k q_{k+1} >= m^(q_k) / B``.  The
tail of ones makes ``alpha`` a closed-form quadratic irrational shifted by
the leading convergents, so it can be evaluated at any precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath

from .errors import InvalidParameter, PrecisionError

MIN_BITS = 128
MAX_BITS = 1 << 20


@dataclass(frozen=True)
class LiouvilleNumber:
    """Continued fraction data plus the certified convergents.

    ``convergents[m - 1] = (p_m, q_m)`` for ``m = 1, ..., m_max``; the
    remaining fields describe the full expansion used to evaluate
    ``alpha``.
    """

    partial_quotients: tuple
    convergents: tuple
    B: float
    bits: int

    @property
    def m_max(self) -> int:
        return len(self.convergents)

    @property
    def _all_convergents(self):
        return _convergents(self.partial_quotients)

    def value(self, bits: int | None = None) -> mpmath.mpf:
        """``alpha`` at ``bits`` of working precision (default: ``self.bits``)."""
        with mpmath.workprec(bits or self.bits):
            (pk, qk), (pk1, qk1) = self._all_convergents[-1], self._all_convergents[-2]
            golden = (1 + mpmath.sqrt(5)) / 2
            return (pk * golden + pk1) / (qk * golden + qk1)

    @property
    def alpha(self) -> mpmath.mpf:
        return self.value()

    def __float__(self) -> float:
        return float(self.value())

    def offset(self, m: int) -> mpmath.mpf:
        """``p_m - alpha q_m`` at full working precision."""
        p, q = self.convergents[m - 1]
        with mpmath.workprec(self.bits):
            return p - self.value() * q

    def error(self, m: int) -> mpmath.mpf:
        p, q = self.convergents[m - 1]
        with mpmath.workprec(self.bits):
            return abs(self.value() - mpmath.mpf(p) / q)

    def certificate(self, m: int) -> bool:
        """Re-check ``|alpha - p_m/q_m| <= B m^(-q_m)`` at high precision."""
        p, q = self.convergents[m - 1]
        with mpmath.workprec(self.bits):
            return bool(self.error(m) <= mpmath.mpf(self.B) * mpmath.power(m, -q))

    def verify(self) -> bool:
        return all(math.gcd(p, q) == 1 for p, q in self.convergents) and all(
            self.certificate(m) for m in range(1, self.m_max + 1)
        )


def _convergents(quotients):
    p_prev, q_prev, p, q = 1, 0, quotients[0], 1
    out = [(p, q)]
    for a in quotients[1:]:
        p_prev, q_prev, p, q = p, q, a * p + p_prev, a * q + q_prev
        out.append((p, q))
    return out


def liouville_alpha(B: float = 1.0, m_max: int = 4, a0: int = 1,
                    max_bits: int = MAX_BITS) -> LiouvilleNumber:
    """Greedy construction certified for ``m = 1, ..., m_max``.

    ``a_{k+1}`` is the least positive integer with
    ``q_k q_{k+1} >= (k + 1)^(q_k) / B``.  The certificate is verified
    again at ``max(128, needed)`` bits.

    Raises
    ------
    PrecisionError
        If a convergent or the certificate needs more than ``max_bits``.
    """
    if m_max < 1:
        raise InvalidParameter("m_max must be >= 1")
    if not B > 0:
        raise InvalidParameter("B must be positive")
    if a0 < 1:
        raise InvalidParameter("a0 must be a positive integer")
    quotients = [int(a0)]
    p_prev, q_prev, p, q = 1, 0, int(a0), 1
    bits = MIN_BITS
    for k in range(m_max):
        m = k + 1
        need_log2 = q * math.log2(m) - math.log2(B) - math.log2(q)
        # the certificate's relative margin is about q_k / q_{k+1}, so the
        # check needs roughly 2 log2 q_{k+1} bits
        if 2 * need_log2 + 64 > max_bits:
            raise PrecisionError(f"convergent {m} needs about {2 * need_log2 + 64:.3g} bits")
        bits = max(bits, int(2 * need_log2) + 2 * q.bit_length() + 128)
        # smallest q_next = a q + q_prev with q * q_next >= m^q / B
        with mpmath.workprec(bits):
            target = mpmath.ceil(mpmath.power(m, q) / (mpmath.mpf(B) * q))
        a = max(1, -(-(int(target) - q_prev) // q))
        quotients.append(a)
        p_prev, q_prev, p, q = p, q, a * p + p_prev, a * q + q_prev
        bits = max(bits, 2 * q.bit_length() + 64)
    conv = tuple(_convergents(quotients)[:m_max])
    num = LiouvilleNumber(tuple(quotients), conv, float(B), bits)
    if not num.verify():
        raise PrecisionError("certificate failed on re-verification")
    return num
