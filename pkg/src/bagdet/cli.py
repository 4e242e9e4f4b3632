"""Command-line front end.

One executable, four modes:

- ``determinant``: compute the log-determinant ratio and write it as
  JSON or CSV.
- ``verify``: run the cross-check suites (symbol identities, Green
  residuals, quadrature oracles) against named tolerances and write a
  pass/fail report.
- ``ellipticity``: rank checks for the disk boundary condition plus the
  four-dimensional chiral obstruction demonstration.
- ``sweep``: tabulate the determinant over a parameter grid as plot-ready
  CSV.

Configuration comes from an optional key = value file plus flag
overrides (flags win).  Exit codes: 0 ok, 1 usage error, 2 tolerance
failure, 3 domain error (e.g. w = 0).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field, asdict

import numpy as np

from . import calderon, determinant, greens, seeley
from .clifford import make_rep_2d
from .errors import BagdetError, DomainError
from .greens import DiskProblem, PlanePoint
from .profiles import PROFILES, make_profile

__all__ = ["RunConfig", "run", "main"]

DEFAULT_TOLERANCES = {
    "q_idempotent": 1e-12,
    "q_lambda_match": 1e-8,
    "d_tilde_match": 1e-8,
    "boundary_residual": 1e-10,
    "pde_residual": 1e-6,
    "singularity_rel": 1e-4,
    "w4_vs_w3_rel": 1e-6,
    "bulk_bessel_rel": 1e-6,
    "boundary_oracle_rel": 1e-6,
    "alpha_quadrature": 1e-8,
    "k_nu": 1e-6,
    "residue": 1e-8,
}

MODES = ("determinant", "verify", "ellipticity", "sweep")


@dataclass
class RunConfig:
    """Everything a run needs; mirrors the flag set."""

    radius: float = 1.0
    w_re: float = 1.0
    w_im: float = 0.0
    profile: str = "poly2"
    profile_params: list = field(default_factory=lambda: [1.0])
    alpha: float = 1.0
    mode: str = "determinant"
    sweep_spec: tuple | None = None          # (param name, list of values)
    tolerances: dict = field(default_factory=dict)
    output_path: str | None = None
    format: str = "json"

    @property
    def w(self) -> complex:
        return complex(self.w_re, self.w_im)

    def tol(self, name: str) -> float:
        return self.tolerances.get(name, DEFAULT_TOLERANCES[name])

    def problem(self) -> DiskProblem:
        gauge = make_profile(self.profile, self.profile_params, self.radius)
        return DiskProblem(R=self.radius, w=self.w, alpha=self.alpha,
                           gauge=gauge)


def _parse_config_file(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, val = (part.strip() for part in line.split("=", 1))
            out[key] = val
    return out


def _parse_sweep(text: str) -> tuple:
    if "=" not in text:
        raise ValueError("sweep spec must look like name=v1,v2,...")
    name, vals = text.split("=", 1)
    name = name.strip()
    if name not in ("w", "radius", "phi0"):
        raise ValueError(f"cannot sweep {name!r}; choose w, radius or phi0")
    values = [float(v) for v in vals.split(",") if v.strip()]
    if not values:
        raise ValueError("sweep grid is empty")
    return name, values


def _extract_tol_flags(argv):
    """Pull --tol.<name> flags out before argparse sees them."""
    tols = {}
    rest = []
    i = 0
    while i < len(argv):
        arg = argv[i]
        if arg.startswith("--tol."):
            body = arg[len("--tol."):]
            if "=" in body:
                name, val = body.split("=", 1)
            else:
                name = body
                i += 1
                if i >= len(argv):
                    raise ValueError(f"--tol.{name} needs a value")
                val = argv[i]
            if name not in DEFAULT_TOLERANCES:
                raise ValueError(f"unknown tolerance {name!r}")
            tols[name] = float(val)
        else:
            rest.append(arg)
        i += 1
    return tols, rest


def build_config(argv) -> RunConfig:
    tols, argv = _extract_tol_flags(argv)
    parser = argparse.ArgumentParser(
        prog="bagdet",
        description="Dirac-disk determinant under bag-like boundary "
                    "conditions")
    parser.add_argument("--config", help="key = value configuration file")
    parser.add_argument("--radius", type=float)
    parser.add_argument("--w", help="bag parameter, complex accepted "
                                    "(e.g. 1, 0.5, 1+0.5j)")
    parser.add_argument("--profile", choices=PROFILES)
    parser.add_argument("--params", help="comma-separated profile parameters")
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--mode", choices=MODES)
    parser.add_argument("--sweep", help="parameter grid, e.g. w=0.5,1,2")
    parser.add_argument("--out", help="output file path")
    parser.add_argument("--format", choices=("json", "csv"))
    args = parser.parse_args(argv)

    cfg = RunConfig()
    cfg.tolerances.update(tols)
    file_vals = _parse_config_file(args.config) if args.config else {}

    def pick(flag_val, key):
        return flag_val if flag_val is not None else file_vals.get(key)

    radius = pick(args.radius, "radius")
    if radius is not None:
        cfg.radius = float(radius)
    w = pick(args.w, "w")
    if w is not None:
        wc = complex(str(w).replace(" ", ""))
        cfg.w_re, cfg.w_im = wc.real, wc.imag
    profile = pick(args.profile, "profile")
    if profile is not None:
        cfg.profile = str(profile)
    params = pick(args.params, "params")
    if params is not None:
        cfg.profile_params = [float(v) for v in str(params).split(",")
                              if v.strip()]
    alpha = pick(args.alpha, "alpha")
    if alpha is not None:
        cfg.alpha = float(alpha)
    mode = pick(args.mode, "mode")
    if mode is not None:
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}")
        cfg.mode = str(mode)
    sweep = pick(args.sweep, "sweep")
    if sweep is not None:
        cfg.sweep_spec = _parse_sweep(str(sweep))
    out = pick(args.out, "out")
    if out is not None:
        cfg.output_path = str(out)
    fmt = pick(args.format, "format")
    if fmt is not None:
        if fmt not in ("json", "csv"):
            raise ValueError(f"unknown format {fmt!r}")
        cfg.format = str(fmt)
    for key, val in file_vals.items():
        if key.startswith("tol."):
            name = key[4:]
            if name not in DEFAULT_TOLERANCES:
                raise ValueError(f"unknown tolerance {name!r}")
            cfg.tolerances.setdefault(name, float(val))
    return cfg


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _run_determinant(cfg: RunConfig) -> int:
    result = determinant.ln_det_ratio(cfg.problem())
    if cfg.format == "json":
        _write_text(cfg.output_path,
                    json.dumps(result.to_json_dict(), indent=2))
    else:
        rows = [result.csv_header(), result.csv_row()]
        _write_csv(cfg.output_path, rows)
    print(f"bulk = {result.bulk_term:.12g}  "
          f"boundary = {result.boundary_term:.12g}  "
          f"total = {result.total:.12g}")
    diag = result.diagnostics
    within = (diag.get("w4_vs_w3_rel", 0.0) <= cfg.tol("w4_vs_w3_rel")
              and diag.get("alpha_quadrature_residual", 0.0)
              <= cfg.tol("alpha_quadrature")
              and diag.get("boundary_oracle_rel", 0.0)
              <= cfg.tol("boundary_oracle_rel"))
    if not within:
        print("oracle residuals exceeded their tolerances", file=sys.stderr)
        return 2
    return 0


def _write_csv(path: str | None, rows) -> None:
    if path is None:
        writer = csv.writer(sys.stdout)
        writer.writerows(rows)
    else:
        with open(path, "w", newline="") as fh:
            csv.writer(fh).writerows(rows)


def _run_sweep(cfg: RunConfig) -> int:
    if cfg.sweep_spec is None:
        raise ValueError("sweep mode needs --sweep name=v1,v2,...")
    name, values = cfg.sweep_spec
    rows = [[name, "bulk", "boundary_re", "boundary_im", "total_re",
             "total_im", "flux"]]
    for v in values:
        radius = cfg.radius
        w = cfg.w
        params = list(cfg.profile_params)
        if name == "w":
            w = complex(v)
        elif name == "radius":
            radius = float(v)
        elif name == "phi0":
            params[0] = float(v)
        gauge = make_profile(cfg.profile, params, radius)
        problem = DiskProblem(R=radius, w=w, alpha=cfg.alpha, gauge=gauge)
        r = determinant.ln_det_ratio(problem, run_oracles=False)
        rows.append([v, r.bulk_term, r.boundary_term.real,
                     r.boundary_term.imag, r.total.real, r.total.imag,
                     r.flux])
    _write_csv(cfg.output_path, rows)
    print(f"swept {name} over {len(values)} values")
    return 0


def _run_ellipticity(cfg: RunConfig) -> int:
    bc = calderon.disk_boundary_condition(cfg.w)
    samples = [(theta, xi) for theta in np.linspace(0.0, 2 * np.pi, 8,
                                                    endpoint=False)
               for xi in (1.0, -1.0, 2.0, -2.0)]
    disk_report = calderon.check_ellipticity(
        bc, lambda theta, xi: calderon.disk_q_lambda(theta, xi, 0.0), samples)

    rng = np.random.default_rng(11)
    obstruction = []
    for _ in range(8):
        b1, b2 = rng.uniform(0.2, 2.0, size=2)
        xi = calderon.chiral_obstruction_witness(b1, b2)
        row = np.array([[b1, b2]]) @ calderon.q_chiral(xi)
        obstruction.append({
            "beta": [b1, b2],
            "witness_xi": xi.tolist(),
            "bq_norm": float(np.max(np.abs(row))),
        })
    payload = {
        "disk": json.loads(disk_report.to_json()),
        "chiral_obstruction": obstruction,
        "passed": bool(disk_report.passed),
    }
    _write_text(cfg.output_path, json.dumps(payload, indent=2))
    print("ellipticity:", "pass" if disk_report.passed else "FAIL")
    return 0 if disk_report.passed else 2


def _verify_checks(cfg: RunConfig):
    """All cross-checks as (name, value, tolerance) triples."""
    problem = cfg.problem()
    rep = make_rep_2d()
    rng = np.random.default_rng(2024)
    checks = []

    worst_q = 0.0
    for _ in range(200):
        theta = rng.uniform(0, 2 * np.pi)
        n = np.array([np.cos(theta), np.sin(theta)])
        xi = rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 3.0)
        q = calderon.q_principal(rep, n, xi * np.array([-np.sin(theta),
                                                        np.cos(theta)]))
        worst_q = max(worst_q, float(np.max(np.abs(q @ q - q))),
                      abs(np.trace(q) - 1.0))
    checks.append(("q_idempotent", worst_q, cfg.tol("q_idempotent")))

    from .seeley import a1_symbol
    a1 = a1_symbol(rep)
    worst = 0.0
    for _ in range(12):
        theta = rng.uniform(0, 2 * np.pi)
        xi = rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 2.0)
        lam = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        closed = calderon.disk_q_lambda(theta, xi, lam)
        contour = calderon.q_lambda_contour(a1, theta, xi, lam)
        worst = max(worst, float(np.max(np.abs(closed - contour))))
    checks.append(("q_lambda_match", worst, cfg.tol("q_lambda_match")))

    worst = 0.0
    for _ in range(20):
        theta = rng.uniform(0, 2 * np.pi)
        t, u = rng.uniform(0.05, 1.0, size=2)
        xi = rng.choice([-1.0, 1.0]) * rng.uniform(0.6, 2.0)
        lam = complex(rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8))
        try:
            closed = seeley.d_tilde_minus1(theta, t, u, xi, lam, problem.w)
            oracle = seeley.d_tilde_minus1_contour(theta, t, u, xi, lam,
                                                   problem.w)
        except BagdetError:
            continue
        scale = max(float(np.max(np.abs(closed))), 1e-30)
        worst = max(worst, float(np.max(np.abs(closed - oracle))) / scale)
    checks.append(("d_tilde_match", worst, cfg.tol("d_tilde_match")))

    samples = greens.random_boundary_samples(problem, 50, seed=5)
    checks.append(("boundary_residual",
                   greens.boundary_residual(problem, samples),
                   cfg.tol("boundary_residual")))
    worst = 0.0
    for _ in range(5):
        x = PlanePoint(rng.uniform(0.2, 0.7) * problem.R,
                       rng.uniform(0, 2 * np.pi))
        y = PlanePoint(rng.uniform(0.2, 0.7) * problem.R,
                       rng.uniform(0, 2 * np.pi))
        if abs(x.X - y.X) < 0.2 * problem.R:
            continue
        worst = max(worst, greens.pde_residual(problem, x, y))
    checks.append(("pde_residual", worst, cfg.tol("pde_residual")))
    _, _, sing_rel = greens.diagonal_singularity_coefficient(
        problem, 0.55 * problem.R, 1.2)
    checks.append(("singularity_rel", sing_rel, cfg.tol("singularity_rel")))

    for nu in (2, 3, 4):
        err = abs(seeley.k_nu_bessel(nu) - seeley.k_nu(nu))
        checks.append((f"k_nu (nu={nu})", err, cfg.tol("k_nu")))

    result = determinant.ln_det_ratio(problem)
    diag = result.diagnostics
    checks.append(("w4_vs_w3_rel", diag["w4_vs_w3_rel"],
                   cfg.tol("w4_vs_w3_rel")))
    checks.append(("bulk_bessel_rel", diag["bulk_bessel_rel"],
                   cfg.tol("bulk_bessel_rel")))
    checks.append(("alpha_quadrature", diag["alpha_quadrature_residual"],
                   cfg.tol("alpha_quadrature")))
    if "boundary_oracle_rel" in diag:
        checks.append(("boundary_oracle_rel", diag["boundary_oracle_rel"],
                       cfg.tol("boundary_oracle_rel")))
    rc = determinant.residue_check(problem)
    checks.append(("residue", max(rc["interior_max_norm"],
                                  rc["boundary_contraction_abs"]),
                   cfg.tol("residue")))
    return checks, result


def _run_verify(cfg: RunConfig) -> int:
    checks, result = _verify_checks(cfg)
    entries = [{"name": name, "value": float(value), "tol": float(tol),
                "pass": bool(value <= tol)} for name, value, tol in checks]
    passed = all(e["pass"] for e in entries)
    payload = {
        "config": {k: v for k, v in asdict(cfg).items()
                   if k not in ("tolerances",)},
        "checks": entries,
        "determinant": result.to_json_dict(),
        "passed": passed,
    }
    _write_text(cfg.output_path, json.dumps(payload, indent=2))
    for e in entries:
        status = "pass" if e["pass"] else "FAIL"
        print(f"{status}  {e['name']:<22} {e['value']:.3e} <= {e['tol']:.1e}")
    print("verify:", "pass" if passed else "FAIL")
    return 0 if passed else 2


def run(cfg: RunConfig) -> int:
    """Execute one mode; returns the process exit status."""
    if cfg.mode == "determinant":
        return _run_determinant(cfg)
    if cfg.mode == "sweep":
        return _run_sweep(cfg)
    if cfg.mode == "ellipticity":
        return _run_ellipticity(cfg)
    if cfg.mode == "verify":
        return _run_verify(cfg)
    raise ValueError(f"unknown mode {cfg.mode!r}")


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        cfg = build_config(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        return run(cfg)
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 3
    except BagdetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
