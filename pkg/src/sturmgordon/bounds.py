"""Explicit constants, Gordon scans and eigenvalue-exclusion radii.

Exponentially large and small quantities are handled in log space:
``GordonReport.log_weighted[m] = C p_m + log D(p_m)`` and the plain
``weighted`` column is only exponentiated when that is finite.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .coefficients import Coefficients, StepFunction, l1_distance
from .errors import InvalidParameter
from .measure import LocalMeasure, _linear_combination, subtract, unif_norm, unif_norm_r
from .seminorm import flat_distance, seminorm_surrogate

LOG_CUTOFF = 700.0


def derivative_constant(r: float, a: StepFunction, mu: LocalMeasure) -> float:
    """``max{2 ||a||_inf / r, ||mu||_unif / 2} + ceil(r) ||mu||_unif``."""
    if not r > 0:
        raise InvalidParameter("r must be positive")
    m = unif_norm(mu)
    return max(2.0 * a.sup / r, 0.5 * m) + math.ceil(r) * m


def effective_unif(c: Coefficients, z: float, r: float = 1.0) -> float:
    """``||mu - z rho||_unif,r`` over the whole line."""
    if z == 0:
        return unif_norm_r(c.potential, r)
    try:
        nu = _linear_combination([(1.0, c.potential), (-float(z), c.weight)])
    except ValueError:
        # non-periodic potential: its support plus a period of margin on
        # each side shows every configuration of the sum
        pts = c.potential.breakpoints()
        P = c.weight.period
        pad = P + r + 1.0
        nu = _linear_combination([(1.0, c.potential), (-float(z), c.weight)],
                                 (float(pts.min()) - pad, float(pts.max()) + pad))
    return unif_norm_r(nu, r)


def derivative_constant_for(c: Coefficients, z: float, r: float = 1.0) -> float:
    """:func:`derivative_constant` for the potential ``mu - z rho`` of ``H u = z u``."""
    if not r > 0:
        raise InvalidParameter("r must be positive")
    m = effective_unif(c, z)
    return max(2.0 * c.diffusion.sup / r, 0.5 * m) + math.ceil(r) * m


# -- Gordon distances -------------------------------------------------------

class GordonTerms(NamedTuple):
    diffusion: float
    potential: float

    @property
    def total(self) -> float:
        return self.diffusion + self.potential


def gordon_terms(a: StepFunction, mu: LocalMeasure, p: float,
                 offset: Optional[float] = None) -> GordonTerms:
    """The two summands of ``D(p)``.

    The translate is by ``offset`` when given (otherwise by ``p``); this
    is how the integer-period part of a quasiperiodic pair is dropped and
    ``p - alpha q`` is supplied at high precision.  The window is always
    ``[-p, p]``.  For ``p < 1`` no window of length 2 fits, so the
    potential term is the flat distance on ``[-p, p]`` itself.
    """
    if not p > 0:
        raise InvalidParameter("p must be positive")
    sigma = float(p if offset is None else offset)
    l1 = l1_distance(a, a.shift(sigma), -p, p)
    diff = subtract(mu, mu.shift(sigma))
    if 2.0 * p >= 2.0:
        sem = seminorm_surrogate(diff, (-p, p))
    else:
        sem = flat_distance(diff, -p, p).value
    return GordonTerms(l1, sem)


def gordon_distance(a: StepFunction, mu: LocalMeasure, p: float,
                    offset: Optional[float] = None) -> float:
    """``D(p) = ||a - a(. + p)||_L1(-p, p) + W(mu - mu(. + p), [-p, p])``."""
    return gordon_terms(a, mu, p, offset).total


def _safe_log(x: float) -> float:
    return math.log(x) if x > 0 else -math.inf


def _safe_exp(x: float) -> float:
    if x == -math.inf:
        return 0.0
    return math.exp(x) if x <= LOG_CUTOFF else math.inf


def exponent_estimates(periods, distances) -> list:
    """``-log D(p) / p`` per period (``inf`` where ``D = 0``)."""
    return [math.inf if d <= 0 else -math.log(d) / p for p, d in zip(periods, distances)]


def running_max(periods, estimates, p_min: float = 0.0) -> list:
    """Running maximum of the exponents over the tail ``p >= p_min``."""
    out, best = [], -math.inf
    for p, e in zip(periods, estimates):
        if p >= p_min:
            best = max(best, e)
        out.append(best)
    return out


@dataclass
class GordonReport:
    periods: list
    distances: list
    weighted: list
    log_weighted: list
    C_used: float
    exponent_estimates: list
    C_hat: float
    bound_basic: float
    bound_refined: float
    sampling_step: float = 0.0
    offsets: list = field(default_factory=list)
    tol: float = 1e-6
    flags: list = field(default_factory=list)

    @property
    def strictly_decreasing(self) -> bool:
        lw = self.log_weighted
        return all(b < a for a, b in zip(lw, lw[1:]))

    @property
    def verdict(self) -> bool:
        """Tail (second half) non-increasing and last weighted value ``<= tol``."""
        lw = self.log_weighted
        if not lw:
            return False
        tail = lw[max(len(lw) // 2 - 1, 0):]
        mono = all(b <= a for a, b in zip(tail, tail[1:]))
        return mono and lw[-1] <= _safe_log(self.tol)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["verdict"] = self.verdict
        d["strictly_decreasing"] = self.strictly_decreasing
        return _jsonable(d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("# schema=1\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p", "D", "weighted", "log_weighted", "exponent"])
        for row in zip(self.periods, self.distances, self.weighted, self.log_weighted,
                       self.exponent_estimates):
            w.writerow([repr(float(v)) for v in row])
        return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    if isinstance(obj, (np.floating, np.integer)):
        return _jsonable(obj.item())
    return obj


def gordon_scan(a: StepFunction, mu: LocalMeasure, periods: Sequence[float], C: float,
                offsets: Optional[Sequence[float]] = None,
                coefficients: Optional[Coefficients] = None, norms=None,
                r_grid: Sequence[float] = (1.0,), sampling_step: float = 0.0,
                tol: float = 1e-6) -> GordonReport:
    """Distances, weighted values and exponent estimates along ``periods``.

    The exclusion radii need ``coefficients`` (or precomputed ``norms``
    ``(||a||_inf, ||1/a||_inf, ||mu||_unif, ||rho||_unif)``); otherwise
    they are ``nan``.
    """
    periods = [float(p) for p in periods]
    if any(b <= a_ for a_, b in zip(periods, periods[1:])):
        raise InvalidParameter("periods must be strictly increasing")
    if C < 0:
        raise InvalidParameter("C must be non-negative")
    offs = list(offsets) if offsets is not None else [None] * len(periods)
    dist = [gordon_distance(a, mu, p, o) for p, o in zip(periods, offs)]
    logw = [C * p + _safe_log(d) for p, d in zip(periods, dist)]
    expo = exponent_estimates(periods, dist)
    flags = []
    if any(math.isinf(e) for e in expo):
        flags.append("zero distance: exponent estimate is +inf")
    if any(lw > LOG_CUTOFF for lw in logw):
        flags.append("weighted values overflow; see log_weighted")
    if coefficients is not None:
        basic = eigenvalue_bound(C, coefficients)
        refined = eigenvalue_bound_refined(C, coefficients, r_grid).value
    elif norms is not None:
        basic = _radius(C, norms[1], norms[2], norms[3])
        refined = math.nan
    else:
        basic = refined = math.nan
    return GordonReport(
        periods=periods,
        distances=dist,
        weighted=[_safe_exp(lw) for lw in logw],
        log_weighted=logw,
        C_used=float(C),
        exponent_estimates=expo,
        C_hat=running_max(periods, expo)[-1] if expo else math.nan,
        bound_basic=basic,
        bound_refined=refined,
        sampling_step=float(sampling_step),
        offsets=[float(o) for o in offs] if offsets is not None else [],
        tol=tol,
        flags=flags,
    )


def quasiperiodic_scan(qp, C: float, tol: float = 1e-6) -> GordonReport:
    """Gordon scan of a :class:`~sturmgordon.quasiperiodic.QuasiperiodicCoefficients`.

    Along integer periods ``p_m`` the 1-periodic part cancels, so only
    ``(a2, mu2)`` enters, translated by the high-precision offset
    ``p_m - alpha q_m``.
    """
    return gordon_scan(qp.a2, qp.mu2, qp.periods, C, offsets=qp.offsets(), norms=qp.norms(),
                       sampling_step=qp.h, tol=tol)


def gordon_exponent_estimate(a: StepFunction, mu: LocalMeasure, p_grid: Sequence[float],
                             offsets: Optional[Sequence[float]] = None,
                             p_min: float = 0.0) -> float:
    """Desk-scale estimate of ``-liminf (1/p) log D(p)``.

    The per-period exponents ``-log D(p) / p`` are maximised over the grid
    points with ``p >= p_min``; no extrapolation, so this is a lower
    estimate.  ``+inf`` signals an exactly periodic pair.
    """
    if len(p_grid) == 0:
        raise InvalidParameter("p_grid must be nonempty")
    offs = list(offsets) if offsets is not None else [None] * len(p_grid)
    dist = [gordon_distance(a, mu, p, o) for p, o in zip(p_grid, offs)]
    return running_max(p_grid, exponent_estimates(p_grid, dist), p_min)[-1]


# -- eigenvalue bounds -----------------------------------------------------

def _radius(C, inv_a, mu_u, rho_u):
    if rho_u <= 0:
        raise InvalidParameter("weight must be nonzero")
    return max(0.0, (C * C / inv_a - mu_u) / rho_u)


def eigenvalue_bound(C: float, c: Coefficients) -> float:
    """``max(0, (C^2 / ||1/a||_inf - ||mu||_unif) / ||rho||_unif)``."""
    return _radius(C, c.diffusion.inv_sup, unif_norm(c.potential), unif_norm(c.weight))


class RefinedBound(NamedTuple):
    value: float
    argmin_r: float
    sup_value: float
    argmax_r: float
    at_r1: float


def eigenvalue_bound_refined(C: float, c: Coefficients, r_grid: Sequence[float]) -> RefinedBound:
    """The scale-``r`` radius evaluated on ``r_grid``.

    ``value``/``argmin_r`` give the grid infimum (the expression as
    printed), ``sup_value``/``argmax_r`` the grid supremum; ``at_r1`` is the
    ``r = 1`` radius, identical to :func:`eigenvalue_bound`.
    """
    r_grid = [float(r) for r in r_grid]
    if not r_grid or any(r <= 0 for r in r_grid):
        raise InvalidParameter("r_grid must hold positive values")
    inv_a = c.diffusion.inv_sup
    vals = [_radius(C, inv_a, unif_norm_r(c.potential, r), unif_norm_r(c.weight, r))
            for r in r_grid]
    i, j = int(np.argmin(vals)), int(np.argmax(vals))
    return RefinedBound(vals[i], r_grid[i], vals[j], r_grid[j], eigenvalue_bound(C, c))


def growth_envelopes(c: Coefficients, z: float, t: float, init) -> tuple:
    """Right-hand sides of the two growth bounds at ``t`` for data ``init`` at 0.

    ``basic = (|u0| + |w0|) exp((||1/a|| + ||nu||_unif)(|t| + 1))`` and
    ``optimized = (omega^2 u0^2 + w0^2)^(1/2) exp(omega ||1/a|| (|t| + 1/2))``
    with ``nu = mu - z rho`` and ``omega = (||nu||_unif / ||1/a||)^(1/2)``.
    """
    u0, w0 = (float(v) for v in init)
    inv_a = c.diffusion.inv_sup
    nu = effective_unif(c, z)
    omega = math.sqrt(nu / inv_a)
    basic = (abs(u0) + abs(w0)) * math.exp((inv_a + nu) * (abs(t) + 1.0))
    opt = math.hypot(omega * u0, w0) * math.exp(omega * inv_a * (abs(t) + 0.5))
    return basic, opt


def optimized_norm(c: Coefficients, z: float, vec) -> float:
    """``(omega^2 u^2 + w^2)^(1/2)``, the quantity bounded by the optimized envelope."""
    omega = math.sqrt(effective_unif(c, z) / c.diffusion.inv_sup)
    vec = np.asarray(vec, dtype=float)
    return np.hypot(omega * vec[..., 0], vec[..., 1])
