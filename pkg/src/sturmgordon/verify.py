"""Property suites behind the ``verify`` command.

Each suite draws seeded random instances (plus, for the propagation
suites, the user's own coefficients) and records the number of cases,
the number of violations and the worst observed ratio of left-hand to
right-hand side (``<= 1`` means satisfied).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np
from scipy.integrate import solve_ivp

from . import bounds, measure, propagator, seminorm
from .coefficients import Coefficients
from .gronwall import gronwall_bound, gronwall_oracle, simplex_mass
from .liouville import liouville_alpha
from .sampling import (random_density_triple, random_gronwall, random_jacobi, random_measure,
                       random_periodic_triple)


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    violations: int = 0
    worst: float = 0.0

    def record(self, lhs: float, rhs: float, tol: float = 0.0):
        """Count a case ``lhs <= rhs + tol``; ``worst`` tracks ``lhs / rhs``."""
        self.cases += 1
        if not lhs <= rhs + tol:
            self.violations += 1
        if rhs > 0:
            self.worst = max(self.worst, lhs / rhs)
        elif lhs > rhs + tol:
            self.worst = math.inf

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{status} {self.name}: cases={self.cases} violations={self.violations} worst={self.worst:.6g}"


# -- measure and seminorm -------------------------------------------------

def suite_measure(rng, n) -> List[SuiteResult]:
    add = SuiteResult("measure.additivity")
    cob = SuiteResult("measure.phi_cocycle")
    cb = SuiteResult("measure.c_bound")
    med = SuiteResult("measure.median_optimality")
    per = SuiteResult("measure.periodize")
    shf = SuiteResult("measure.shift_identity")
    for _ in range(n):
        mu = random_measure(rng, period=float(rng.choice([0.5, 1.0, 2.0])),
                            n_pieces=int(rng.integers(0, 4)), n_atoms=int(rng.integers(0, 4)))
        s, t, u = np.sort(rng.uniform(-3, 3, 3))
        tv = measure.tv_on_interval
        add.record(abs(tv(mu, s, u) - tv(mu, s, t) - tv(mu, t, u)), 1e-9)
        cob.record(abs(mu.phi(t) - mu.phi(s) - mu.mass(s, t)), 1e-9)
        cb.record(abs(seminorm.c_constant(mu)), measure.unif_norm(mu), 1e-12)
        c0 = float(rng.uniform(-2, 2))
        res = seminorm.window_flat_distance(mu, c0)
        xs = np.linspace(c0 - 1, c0 + 1, 4001)
        ph = mu.phi(xs)
        for c in rng.uniform(-3, 3, 20):
            dev = np.abs(ph - c)
            quad = float(np.sum(0.5 * (dev[1:] + dev[:-1])) * (xs[1] - xs[0]))
            med.record(res.value, quad, 1e-2)
        shf.record(seminorm.seminorm_surrogate(measure.subtract(mu, mu.shift(mu.period)), (-2, 2)),
                   1e-9)
        loose = random_measure(rng, n_pieces=2, n_atoms=2, window=(-1.0, 4.0))
        p = float(rng.uniform(1.0, 3.0))
        alpha = float(rng.uniform(0.05, p / 2))
        pm = measure.periodize(loose, p, alpha)
        per.record(measure.tv_on_interval(measure.subtract(loose, pm, window=(-1, 5)), alpha,
                                          p - alpha), 1e-12)
        per.record(measure.unif_norm(pm), 2.0 * measure.unif_norm(loose), 1e-12)
    return [add, cob, cb, med, per, shf]


def suite_sandwich(rng, n, n_grid=257) -> List[SuiteResult]:
    low = SuiteResult("seminorm.lower_le_surrogate")
    up = SuiteResult("seminorm.surrogate_le_2_lower")
    for _ in range(n):
        lo = float(rng.uniform(-2, 0))
        hi = lo + float(rng.uniform(2, 4))
        mu = random_measure(rng, n_pieces=int(rng.integers(0, 4)),
                            n_atoms=int(rng.integers(0, 4)), window=(lo - 0.5, hi + 0.5))
        W = seminorm.seminorm_surrogate(mu, (lo, hi))
        L = seminorm.seminorm_lower_oracle(mu, (lo, hi), n_grid)
        eps = seminorm.oracle_grid_slack(mu, (lo, hi), n_grid)
        low.record(L, W, 1e-9)
        up.record(W, 2 * L + 2 * eps, 1e-12)
    return [low, up]


# -- propagation ----------------------------------------------------------

def check_growth(c: Coefficients, z: float, v0, grid, est1: SuiteResult, est2: SuiteResult):
    sol = propagator.evaluate_solution(c, z, v0, grid)
    inv_a = c.diffusion.inv_sup
    nu = bounds.effective_unif(c, z)
    omega = math.sqrt(nu / inv_a)
    u0, w0 = v0
    t = np.abs(grid)
    lhs1 = np.abs(sol[:, 0]) + np.abs(sol[:, 1])
    rhs1 = (abs(u0) + abs(w0)) * np.exp((inv_a + nu) * (t + 1.0))
    lhs2 = np.hypot(omega * sol[:, 0], sol[:, 1])
    rhs2 = math.hypot(omega * u0, w0) * np.exp(omega * inv_a * (t + 0.5))
    i, j = int(np.argmax(lhs1 / rhs1)), int(np.argmax(lhs2 / np.maximum(rhs2, 1e-300)))
    est1.record(lhs1[i], rhs1[i], 1e-12 * rhs1[i])
    est2.record(lhs2[j], rhs2[j], 1e-12 * rhs2[j] + 1e-300)


def check_derivative(c: Coefficients, z: float, v0, res: SuiteResult, n_units=20, per_unit=1000,
                     start=-10.0):
    C = bounds.derivative_constant_for(c, z, 1.0)
    inv_a = c.diffusion.inv_sup
    grid = start + np.arange(n_units * per_unit + 1) / per_unit
    sol = propagator.evaluate_solution(c, z, v0, grid)
    h = 1.0 / per_unit
    for k in range(n_units):
        blk = sol[k * per_unit:(k + 1) * per_unit + 1]
        wmax = float(np.max(np.abs(blk[:, 1])))
        umax = float(np.max(np.abs(blk[:, 0])))
        # u is Lipschitz with constant ||1/a|| sup|w|: correct the sampled max
        res.record(wmax, C * (umax + 0.5 * h * inv_a * wmax), 1e-12 * C * umax)


def suite_propagator(rng, n, user: Optional[Coefficients] = None) -> List[SuiteResult]:
    det = SuiteResult("propagator.det")
    comp = SuiteResult("propagator.composition")
    tp = SuiteResult("propagator.three_point")
    e1 = SuiteResult("propagator.growth_est1")
    e2 = SuiteResult("propagator.growth_est2")
    der = SuiteResult("propagator.derivative_control")
    triples = [random_periodic_triple(rng) for _ in range(n)]
    if user is not None:
        triples.insert(0, user)
    for k, c in enumerate(triples):
        z = float(rng.uniform(-5, 5))
        v0 = rng.normal(size=2)
        s, r, t = np.sort(rng.uniform(-4, 4, 3))
        T = propagator.transfer(c, z, s, t)
        scale = max(1.0, float(np.abs(T.array).max())) ** 2
        det.record(abs(T.det - 1.0), 1e-10 * scale)
        P = propagator.transfer(c, z, r, t) @ propagator.transfer(c, z, s, r)
        comp.record(float(np.abs(P.array - T.array).max()), 1e-9 * scale)
        check_growth(c, z, v0, np.linspace(-10, 10, 401), e1, e2)
        if k < max(n // 5, 1):
            check_derivative(c, z, v0, der, n_units=4, per_unit=500)
        try:
            lhs, rhs, _ = propagator.three_point_check(c, z, v0)
            tp.record(rhs, lhs, 1e-12)
        except ValueError:
            pass
    return [det, comp, tp, e1, e2, der]


def jacobi_recursion(a: dict, b: dict, z: float, u0: float, w0: float, n_max: int = 50):
    """``u(n)`` for ``|n| <= n_max`` from the three-term recursion, seeded at 0."""
    u = {0: u0, 1: u0 + w0 / a[0]}
    for n in range(1, n_max):
        u[n + 1] = u[n] + (a[n - 1] * (u[n] - u[n - 1]) + (b[n] - z) * u[n]) / a[n]
    for n in range(0, -n_max, -1):
        u[n - 1] = u[n] - (a[n] * (u[n + 1] - u[n]) - (b[n] - z) * u[n]) / a[n - 1]
    return u


def suite_jacobi(rng, n) -> List[SuiteResult]:
    res = SuiteResult("propagator.jacobi_recursion")
    for _ in range(n):
        c, a, b = random_jacobi(rng)
        z = float(rng.uniform(-2, 2))
        u0, w0 = rng.normal(size=2)
        ref = jacobi_recursion(a, b, z, u0, w0)
        ns = np.arange(-50, 51)
        sol = propagator.evaluate_solution(c, z, (u0, w0), ns.astype(float))
        expect = np.array([ref[k] for k in ns])
        err = np.abs(sol[:, 0] - expect) / np.maximum(1.0, np.abs(expect))
        res.record(float(err.max()), 1e-10)
    return [res]


def rk_transfer(c: Coefficients, z: float, s: float, t: float, rtol=1e-12, atol=1e-14):
    """Transfer matrix of an atomless triple by DOP853, restarted at every breakpoint."""
    nu = propagator.effective_potential(c, z, s, t)
    if nu.atoms:
        raise ValueError("integration oracle needs an atomless potential")
    pts = np.unique(np.concatenate([[s, t], c.diffusion.breakpoints(s, t), nu.breakpoints()]))
    pts = pts[(pts >= s) & (pts <= t)]
    Y = np.eye(2)
    for x0, x1 in zip(pts[:-1], pts[1:]):
        mid = 0.5 * (x0 + x1)
        a, k = float(c.diffusion(mid)), float(nu.density_at(mid))

        def f(_, y):
            return [y[1] / a, k * y[0], y[3] / a, k * y[2]]

        sol = solve_ivp(f, (x0, x1), [Y[0, 0], Y[1, 0], Y[0, 1], Y[1, 1]], method="DOP853",
                        rtol=rtol, atol=atol)
        y = sol.y[:, -1]
        Y = np.array([[y[0], y[2]], [y[1], y[3]]])
    return Y


def suite_rk(rng, n) -> List[SuiteResult]:
    res = SuiteResult("propagator.rk_oracle")
    for _ in range(n):
        c = random_density_triple(rng)
        z = float(rng.uniform(-2, 2))
        T = propagator.transfer(c, z, 0.0, 10.0).array
        R = rk_transfer(c, z, 0.0, 10.0)
        res.record(float(np.abs(T - R).max()) / max(1.0, float(np.abs(R).max())), 1e-8)
    return [res]


# -- bounds, gronwall, liouville --------------------------------------------

def suite_bounds(rng, n) -> List[SuiteResult]:
    ident = SuiteResult("bounds.refined_r1_equals_basic")
    mono = SuiteResult("bounds.monotone_in_C")
    zero = SuiteResult("bounds.gordon_zero_at_period")
    for _ in range(n):
        c = random_periodic_triple(rng)
        C = float(rng.uniform(0, 5))
        basic = bounds.eigenvalue_bound(C, c)
        ident.record(abs(bounds.eigenvalue_bound_refined(C, c, [1.0]).value - basic), 0.0, 0.0)
        mono.record(basic, bounds.eigenvalue_bound(C + 0.5, c))
        P = propagator.common_coefficient_period(c)
        zero.record(bounds.gordon_distance(c.diffusion, c.potential, 2 * P), 1e-9)
    return [ident, mono, zero]


def suite_gronwall(rng, n) -> List[SuiteResult]:
    dom = SuiteResult("gronwall.bound_dominates_oracle")
    simp = SuiteResult("gronwall.simplex")
    for _ in range(n):
        g = random_gronwall(rng)
        t = float(rng.uniform(0.1, g.T))
        part, _ = gronwall_oracle(g, t, 1024, 25)
        dom.record(part, gronwall_bound(g, t), 1e-4)
        atoms = list(zip(rng.uniform(0, 1, 6), rng.uniform(0, 1, 6)))
        for k in (1, 2, 3):
            mass, cap = simplex_mass(atoms, 0.0, 1.0, k)
            simp.record(mass, cap, 1e-12)
    return [dom, simp]


def suite_liouville(rng, n) -> List[SuiteResult]:
    res = SuiteResult("liouville.certificate")
    for B in (0.5, 1.0, 2.0):
        for m_max in (1, 2, 3, 4):
            num = liouville_alpha(B, m_max)
            res.record(0.0 if num.verify() else 1.0, 0.0)
    return [res]


SUITES: dict = {
    "measure": suite_measure,
    "seminorm": suite_sandwich,
    "propagator": suite_propagator,
    "jacobi": suite_jacobi,
    "rk": suite_rk,
    "bounds": suite_bounds,
    "gronwall": suite_gronwall,
    "liouville": suite_liouville,
}


def run_all(seed: int = 0, n: int = 20, user: Optional[Coefficients] = None,
            progress: Optional[Callable[[SuiteResult], None]] = None) -> List[SuiteResult]:
    """Run every suite with ``n`` random cases each (the RK suite uses fewer)."""
    rng = np.random.default_rng(seed)
    out = []
    for name, fn in SUITES.items():
        if name == "propagator":
            results = fn(rng, n, user)
        elif name == "rk":
            results = fn(rng, max(n // 10, 2))
        else:
            results = fn(rng, n)
        for r in results:
            out.append(r)
            if progress:
                progress(r)
    return out
