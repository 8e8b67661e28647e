"""Two-frequency quasiperiodic coefficients ``(a1 + a2, mu1 + mu2)``.

``(a1, mu1)`` is 1-periodic and ``(a2, mu2)`` is ``alpha``-periodic for a
Liouville number ``alpha``.  A Hölder continuous ``a2`` is sampled to a step
function on an ``alpha``-periodic grid, so everything downstream stays
exact.  The two periods are incommensurable, so the sum is never stored as
a single periodic object; :meth:`QuasiperiodicCoefficients.window` builds
the sum on a bounded window instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .coefficients import Coefficients, StepFunction, add_steps
from .errors import InvalidParameter
from .liouville import LiouvilleNumber
from .measure import LocalMeasure, _linear_combination, common_period, unif_norm


def sample_periodic(f: Callable, period: float, h: float) -> StepFunction:
    """Midpoint sampling of ``f`` on ``ceil(period / h)`` equal cells of one period.

    The actual step ``period / N`` never exceeds ``h``.  For ``f`` Hölder
    with constants ``(c, beta)`` the L1 error per unit length is at most
    ``c (h / 2)^beta``.
    """
    if not h > 0:
        raise InvalidParameter("sampling step must be positive")
    n = max(int(math.ceil(period / h - 1e-12)), 1)
    edges = np.linspace(0.0, period, n + 1)
    vals = np.asarray(f(0.5 * (edges[:-1] + edges[1:])), dtype=float) * np.ones(n)
    return StepFunction(tuple(zip(edges[:-1], edges[1:], vals)), period, float(vals[0]))


@dataclass(frozen=True)
class QuasiperiodicCoefficients:
    """``(a1 + a2, rho, mu1 + mu2)`` with ``(a1, rho, mu1)`` 1-periodic.

    Attributes
    ----------
    base : Coefficients
        The 1-periodic part, including the weight ``rho``.
    a2 : StepFunction
        Sampled ``alpha``-periodic diffusion part (non-negative).
    mu2 : LocalMeasure
        ``alpha``-periodic potential part.
    alpha : LiouvilleNumber
    h : float
        Sampling step actually used (0 if ``a2`` was supplied exactly).
    holder : tuple
        Hölder constants ``(c, beta)`` of the unsampled ``a2``.
    """

    base: Coefficients
    a2: StepFunction
    mu2: LocalMeasure
    alpha: LiouvilleNumber
    h: float = 0.0
    holder: tuple = (0.0, 1.0)

    @property
    def periods(self) -> list:
        """Integer periods ``p_m`` of the 1-periodic part."""
        return [p for p, _ in self.alpha.convergents]

    def offsets(self) -> list:
        """``p_m - alpha q_m`` rounded to double after high-precision evaluation."""
        return [float(self.alpha.offset(m)) for m in range(1, self.alpha.m_max + 1)]

    @property
    def sampling_error_bound(self) -> float:
        """Bound on the L1 sampling error of ``a2`` per unit length."""
        c, beta = self.holder
        return c * (0.5 * self.h) ** beta if self.h > 0 else 0.0

    def window(self, lo: float, hi: float) -> Coefficients:
        """Exact coefficient triple on ``[lo, hi]`` (zero potential outside)."""
        a = add_steps(self.base.diffusion, self.a2, window=(lo, hi))
        mu = _linear_combination([(1.0, self.base.potential), (1.0, self.mu2)], (lo, hi))
        return Coefficients(a, self.base.weight, mu)

    def norms(self, span: Optional[float] = None):
        """``(||a||_inf, ||1/a||_inf, ||mu||_unif, ||rho||_unif)`` estimated on ``[0, span]``.

        The default span covers the largest stored period twice.
        """
        span = span or 2.0 * max(max(self.periods), 1) + 2.0
        c = self.window(-1.0, span + 1.0)
        mu = c.potential.restrict(-1.0, span + 1.0)
        return c.diffusion.sup, c.diffusion.inv_sup, unif_norm(mu), unif_norm(c.weight)


def quasiperiodic(base: Coefficients, a2: Union[Callable, StepFunction, float, None],
                  mu2: Optional[LocalMeasure], alpha: LiouvilleNumber, h: float = 1e-3,
                  holder: tuple = (0.0, 1.0)) -> QuasiperiodicCoefficients:
    """Assemble the two-frequency example.

    ``a2`` may be a callable (sampled at step ``h``), a step function with
    period ``alpha``, a constant or ``None``.  ``mu2`` must be zero or carry
    period ``alpha``.
    """
    for obj in (base.diffusion, base.potential, base.weight):
        if isinstance(obj, LocalMeasure) and obj.is_zero():
            continue
        if obj.period is None or common_period(obj.period, 1.0) != 1.0:
            raise InvalidParameter("base coefficients must be 1-periodic")
    period = float(alpha)
    used_h = 0.0
    if a2 is None or np.isscalar(a2):
        a2 = StepFunction.constant(float(a2 or 0.0), period)
    elif isinstance(a2, StepFunction):
        if a2.period is None or abs(a2.period - period) > 1e-12:
            raise InvalidParameter("a2 must have period alpha")
    else:
        a2 = sample_periodic(a2, period, h)
        used_h = period / max(int(math.ceil(period / h - 1e-12)), 1)
    if mu2 is None or (mu2.is_zero() and mu2.period is None):
        mu2 = LocalMeasure((), (), period)
    elif mu2.period is None or abs(mu2.period - period) > 1e-12:
        raise InvalidParameter("mu2 must have period alpha")
    if base.diffusion.inf + a2.inf <= 0:
        raise InvalidParameter("a1 + a2 must be bounded away from zero")
    return QuasiperiodicCoefficients(base, a2, mu2, alpha, used_h, tuple(holder))


def example_triple(B: float = 1.0, m_max: int = 4, h: float = 1e-3, amplitude: float = 0.1,
                   weight: float = 1.0) -> QuasiperiodicCoefficients:
    """Standard two-frequency example.

    ``a = 1 + amplitude (1 + cos(2 pi x / alpha))``, ``rho`` = Lebesgue and
    ``mu = sum_n delta_n + weight * sum_n delta_(n alpha)`` with ``alpha``
    from :func:`~sturmgordon.liouville.liouville_alpha`.
    """
    from .coefficients import schroedinger
    from .liouville import liouville_alpha

    alpha = liouville_alpha(B, m_max)
    al = float(alpha)

    def a2(x):
        return amplitude * (1.0 + np.cos(2.0 * np.pi * np.asarray(x) / al))

    mu2 = LocalMeasure.lattice(al, weight) if weight else None
    return quasiperiodic(schroedinger(LocalMeasure.lattice(1.0)), a2, mu2, alpha, h,
                         holder=(amplitude * 2.0 * np.pi / al, 1.0))
