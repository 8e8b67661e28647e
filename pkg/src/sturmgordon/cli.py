"""Command-line front end: ``python -m sturmgordon <command> [options]``.

Exit codes: 0 success, 1 input or validation error, 2 property violation,
3 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from . import bounds, propagator, seminorm
from .coefficients import validate
from .errors import InvalidCombination, InvalidParameter, PrecisionError
from .measure import unif_norm
from .quasiperiodic import QuasiperiodicCoefficients, example_triple
from .specfile import load_coefficients
from .verify import run_all

EXIT_OK, EXIT_INPUT, EXIT_VIOLATION, EXIT_NUMERIC = 0, 1, 2, 3
DEFAULT_SEED = 20240101
COMMANDS = ("solve", "transfer", "seminorm", "gordon-scan", "bound", "verify",
            "example-quasiperiodic")


@dataclass
class RunConfig:
    command: str
    input_path: Optional[str] = None
    output_path: Optional[str] = None
    output_format: str = "json"
    z: float = 0.0
    s: float = 0.0
    t: float = 1.0
    grid: int = 101
    init: tuple = (1.0, 0.0)
    C: float = 1.0
    periods: List[float] = field(default_factory=list)
    r_grid: List[float] = field(default_factory=lambda: [1.0])
    seed: int = DEFAULT_SEED
    tol: float = 1e-6
    n_cases: int = 20
    B: float = 1.0
    m_max: int = 4
    h: float = 1e-3


def _floats(text: str) -> List[float]:
    return [float(v) for v in text.replace(",", " ").split()]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sturmgordon", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", dest="input_path", help="coefficient-spec JSON file")
    p.add_argument("--output", dest="output_path", help="write the result here (default stdout)")
    p.add_argument("--format", dest="output_format", choices=("json", "csv"), default=None)
    p.add_argument("--z", type=float, default=0.0, help="spectral parameter (real)")
    p.add_argument("--from", dest="s", type=float, default=0.0)
    p.add_argument("--to", dest="t", type=float, default=1.0)
    p.add_argument("--grid", type=int, default=101, help="number of grid points")
    p.add_argument("--init", type=_floats, default=(1.0, 0.0), help="initial (u, au') at --from")
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--periods", type=_floats, default=[])
    p.add_argument("--r-grid", dest="r_grid", type=_floats, default=[1.0])
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--cases", dest="n_cases", type=int, default=20,
                   help="random cases per verify suite")
    p.add_argument("--B", type=float, default=1.0)
    p.add_argument("--m-max", dest="m_max", type=int, default=4)
    p.add_argument("--h", type=float, default=1e-3)
    return p


def parse_args(argv=None) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    fmt = ns.pop("output_format")
    cfg = RunConfig(**ns)
    cfg.output_format = fmt or ("csv" if cfg.command == "solve" else "json")
    cfg.init = tuple(cfg.init)
    return cfg


def _json(obj) -> str:
    return json.dumps(bounds._jsonable(obj), indent=2, sort_keys=True) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    buf.write("# schema=1\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def _load(cfg: RunConfig, window=None):
    if not cfg.input_path:
        raise InvalidParameter(f"{cfg.command} needs --input")
    c = load_coefficients(cfg.input_path)
    if isinstance(c, QuasiperiodicCoefficients):
        if window is None:
            return c
        c = c.window(*window)
    else:
        rep = validate(c)
        if not rep.ok:
            raise InvalidParameter("invalid coefficients: " + "; ".join(rep.messages))
    return c


def _window_for(cfg):
    lo, hi = min(cfg.s, cfg.t), max(cfg.s, cfg.t)
    return (lo - 1.0, hi + 1.0)


def cmd_solve(cfg):
    c = _load(cfg, _window_for(cfg))
    grid = np.linspace(cfg.s, cfg.t, max(cfg.grid, 2))
    sol = propagator.evaluate_solution(c, cfg.z, cfg.init, grid, s=cfg.s)
    rows = np.column_stack([grid, sol])
    if cfg.output_format == "csv":
        return _csv(["t", "u", "w"], rows), EXIT_OK
    return _json({"t": grid.tolist(), "u": sol[:, 0].tolist(), "w": sol[:, 1].tolist()}), EXIT_OK


def cmd_transfer(cfg):
    c = _load(cfg, _window_for(cfg))
    T = propagator.transfer(c, cfg.z, cfg.s, cfg.t)
    out = {"from": cfg.s, "to": cfg.t, "z": cfg.z, "matrix": T.array.tolist(), "det": T.det}
    if cfg.output_format == "csv":
        return _csv(["m11", "m12", "m21", "m22", "det"],
                    [[T.m11, T.m12, T.m21, T.m22, T.det]]), EXIT_OK
    return _json(out), EXIT_OK


def cmd_seminorm(cfg):
    c = _load(cfg, _window_for(cfg))
    mu = c.potential
    lo, hi = min(cfg.s, cfg.t), max(cfg.s, cfg.t)
    out = {
        "interval": [lo, hi],
        "surrogate": seminorm.seminorm_surrogate(mu, (lo, hi)),
        "c_mu": seminorm.c_constant(mu),
        "unif_norm": unif_norm(mu),
    }
    if cfg.output_format == "csv":
        return _csv(["lo", "hi", "surrogate", "c_mu", "unif_norm"],
                    [[lo, hi, out["surrogate"], out["c_mu"], out["unif_norm"]]]), EXIT_OK
    return _json(out), EXIT_OK


def _emit_report(cfg, report):
    text = report.to_csv() if cfg.output_format == "csv" else report.to_json() + "\n"
    return text, EXIT_OK


def cmd_gordon_scan(cfg):
    c = _load(cfg)
    if isinstance(c, QuasiperiodicCoefficients):
        return _emit_report(cfg, bounds.quasiperiodic_scan(c, cfg.C, cfg.tol))
    if not cfg.periods:
        raise InvalidParameter("gordon-scan needs --periods")
    rep = bounds.gordon_scan(c.diffusion, c.potential, cfg.periods, cfg.C, coefficients=c,
                             r_grid=cfg.r_grid, tol=cfg.tol)
    return _emit_report(cfg, rep)


def cmd_bound(cfg):
    c = _load(cfg)
    if isinstance(c, QuasiperiodicCoefficients):
        _, inv_a, mu_u, rho_u = c.norms()
        basic = bounds._radius(cfg.C, inv_a, mu_u, rho_u)
        out = {"C": cfg.C, "basic": basic}
    else:
        basic = bounds.eigenvalue_bound(cfg.C, c)
        ref = bounds.eigenvalue_bound_refined(cfg.C, c, cfg.r_grid)
        out = {"C": cfg.C, "basic": basic, "refined_inf": ref.value, "argmin_r": ref.argmin_r,
               "refined_sup": ref.sup_value, "argmax_r": ref.argmax_r, "at_r1": ref.at_r1,
               "r_grid": list(cfg.r_grid)}
    if cfg.output_format == "csv":
        keys = sorted(k for k in out if k != "r_grid")
        return _csv(keys, [[out[k] for k in keys]]), EXIT_OK
    return _json(out), EXIT_OK


def cmd_verify(cfg):
    user = None
    if cfg.input_path:
        c = _load(cfg)
        user = c.window(-12.0, 12.0) if isinstance(c, QuasiperiodicCoefficients) else c
    results = run_all(cfg.seed, cfg.n_cases, user)
    lines = [r.line() for r in results]
    bad = sum(not r.ok for r in results)
    lines.append(f"SUMMARY suites={len(results)} failed={bad}")
    if cfg.output_format == "csv":
        buf = io.StringIO()
        buf.write("# schema=1\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["suite", "cases", "violations", "worst"])
        for r in results:
            w.writerow([r.name, r.cases, r.violations, repr(float(r.worst))])
        text = buf.getvalue()
    else:
        text = "\n".join(lines) + "\n"
    return text, (EXIT_VIOLATION if bad else EXIT_OK)


def cmd_example_quasiperiodic(cfg):
    qp = example_triple(cfg.B, cfg.m_max, cfg.h)
    return _emit_report(cfg, bounds.quasiperiodic_scan(qp, cfg.C, cfg.tol))


HANDLERS = {
    "solve": cmd_solve,
    "transfer": cmd_transfer,
    "seminorm": cmd_seminorm,
    "gordon-scan": cmd_gordon_scan,
    "bound": cmd_bound,
    "verify": cmd_verify,
    "example-quasiperiodic": cmd_example_quasiperiodic,
}


def run(cfg: RunConfig) -> int:
    """Execute one command, write its artifact and return the exit code."""
    try:
        with np.errstate(over="raise", invalid="raise"):
            text, code = HANDLERS[cfg.command](cfg)
    except (InvalidParameter, InvalidCombination, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (PrecisionError, FloatingPointError, OverflowError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main(argv=None) -> int:
    return run(parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
