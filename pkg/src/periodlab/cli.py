"""Command-line front end.

Subcommands wrap the library one-to-one (rep validate, maass check,
lewis transform/residual/roundtrip, zeta eval/asym, transfer
residual/continue, lfun check/fe, algebra decompose/unipotent) and emit
JSON or CSV reports.  Exit codes are scriptable: 0 pass, 1 mathematical
validation failure, 2 numeric non-convergence, 3 I/O or configuration
error.  All sampled checks draw from one generator seeded by --seed;
grid jobs fan out over --threads workers with deterministic output
ordering.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (BranchCut, ConvergenceFailure, DimensionMismatch,
                     DomainError, HalfIntegerNu, PeriodLabError, Pole,
                     RelationViolation, ResonantNu, SizeLimit,
                     SlowConvergence)
from .group_algebra import (GroupRingElement, build_eta_chi,
                            check_unipotent_order, generator_decomposition,
                            word_to_matrix)
from .l_functions import (completed_L, functional_equation_residual,
                          period_evaluator_from_form)
from .lewis import (f_from_coefficients, f_from_form, invert_bruggeman,
                    lewis_residual, period_from_boundary)
from .maass_forms import (automorphy_residual, form_from_json,
                          laplace_residual, load_form)
from .modular_group import MAT_S, MAT_T, Word
from .representations import (character_representation,
                              parabolic_triviality_check,
                              representation_from_json,
                              trivial_representation,
                              validate_representation)
from .transfer_operator import continue_psi, fixed_point_residual
from .zeta_asymptotics import (OperatorZetaConfig, asymptotic_zeta_eta,
                               zeta_eta)


class ConfigError(Exception):
    """Invalid job configuration (maps to exit code 3)."""


@dataclass(frozen=True)
class GridSpec:
    """Rectangular complex grid, row-major over (im, re)."""

    re_min: float
    re_max: float
    re_count: int
    im_min: float
    im_max: float
    im_count: int

    def points(self) -> list:
        res = np.linspace(self.re_min, self.re_max, self.re_count)
        ims = np.linspace(self.im_min, self.im_max, self.im_count)
        return [complex(re, im) for im in ims for re in res]

    def validate(self) -> None:
        if self.re_count < 1 or self.im_count < 1:
            raise ConfigError("grid counts must be positive")
        for z in self.points():
            if z.imag == 0.0 and z.real <= 0.0:
                raise ConfigError(
                    f"grid point {z} lies on the cut (-oo, 0]")


@dataclass(frozen=True)
class JobConfig:
    """Validated run parameters shared by all subcommands."""

    command: str
    inputs: tuple
    nu: complex | None
    k_max: int
    n_max: int
    m_order: int
    quad_tol: float
    grid: GridSpec | None
    out: str | None
    format: str
    tol: float | None
    seed: int
    threads: int

    def __post_init__(self) -> None:
        if self.format not in ("json", "csv"):
            raise ConfigError(f"unknown output format {self.format!r}")
        if self.threads < 1:
            raise ConfigError("--threads must be at least 1")
        if self.n_max < 10:
            raise ConfigError("--n-max must be at least 10")
        if self.grid is not None:
            self.grid.validate()

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "JobConfig":
        grid = None
        if getattr(args, "re_range", None) is not None \
                or getattr(args, "im_range", None) is not None:
            re_range = args.re_range or (0.3, 2.0, 15)
            im_range = args.im_range or (-1.0, 1.0, 15)
            grid = GridSpec(float(re_range[0]), float(re_range[1]),
                            int(re_range[2]), float(im_range[0]),
                            float(im_range[1]), int(im_range[2]))
        nu = getattr(args, "nu", None)
        return cls(
            command=args.command,
            inputs=tuple(getattr(args, "inputs", ()) or ()),
            nu=complex(nu) if nu is not None else None,
            k_max=int(getattr(args, "k", 6) or 6),
            n_max=int(getattr(args, "n_max", 10_000) or 10_000),
            m_order=int(getattr(args, "m", 4) or 4),
            quad_tol=float(getattr(args, "quad_tol", 1e-10) or 1e-10),
            grid=grid,
            out=getattr(args, "out", None),
            format=getattr(args, "format", "json") or "json",
            tol=getattr(args, "tol", None),
            seed=int(getattr(args, "seed", 0) or 0),
            threads=int(getattr(args, "threads", 1) or 1),
        )


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (complex, np.complexfloating)):
        z = complex(obj)
        return [z.real, z.imag]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def _emit(report: dict, cfg: JobConfig, as_json: bool) -> None:
    payload = _jsonable(report)
    if as_json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for key, value in sorted(payload.items()):
            if key == "rows":
                print(f"rows: {len(value)}")
            else:
                print(f"{key}: {json.dumps(value, sort_keys=True)}")
    if cfg.out:
        if cfg.format == "csv":
            rows = report.get("rows")
            if not rows:
                raise ConfigError("csv output needs a tabular report")
            flat = [_flatten_row(row) for row in rows]
            with open(cfg.out, "w", newline="") as handle:
                writer = csv.DictWriter(handle, fieldnames=list(flat[0]))
                writer.writeheader()
                writer.writerows(flat)
        else:
            Path(cfg.out).write_text(
                json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _flatten_row(row: dict) -> dict:
    flat = {}
    for key, value in row.items():
        value = _jsonable(value)
        if isinstance(value, list) and len(value) == 2 \
                and all(isinstance(v, float) for v in value):
            flat[f"{key}_re"], flat[f"{key}_im"] = value
        elif isinstance(value, list):
            for i, comp in enumerate(value):
                if isinstance(comp, list) and len(comp) == 2:
                    flat[f"{key}_{i}_re"], flat[f"{key}_{i}_im"] = comp
                else:
                    flat[f"{key}_{i}"] = comp
        else:
            flat[key] = value
    return flat


def _preset_eta(name: str):
    if name == "trivial":
        return trivial_representation()
    if name == "sixth-root":
        return character_representation(1)
    raise ConfigError(f"unknown eta preset {name!r}")


def _load_form(spec: str):
    path = Path(spec)
    if path.exists():
        return form_from_json(json.loads(path.read_text()))
    return load_form(spec)


def _tol(cfg: JobConfig, default: float) -> float:
    return default if cfg.tol is None else float(cfg.tol)


def _pool_map(cfg: JobConfig, fn, items):
    if cfg.threads == 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# handlers
# ---------------------------------------------------------------------------

def cmd_rep_validate(cfg: JobConfig, args) -> tuple[int, dict]:
    data = json.loads(Path(cfg.inputs[0]).read_text())
    try:
        rep = representation_from_json(data)
    except (ValueError, DimensionMismatch, KeyError, TypeError) as exc:
        return 1, {"passed": False, "error": f"not a representation: {exc}"}
    report = validate_representation(rep, tol=cfg.tol)
    failed = sorted(name for name, dev in report["deviations"].items()
                    if dev > report["tol"])
    parabolic = parabolic_triviality_check(rep, seed=cfg.seed)
    out = {
        "relations": report["deviations"],
        "failed_relations": failed,
        "max_deviation": report["max_deviation"],
        "parabolic_passed": parabolic["passed"],
        "passed": report["passed"] and parabolic["passed"],
    }
    if args.unipotent_q is not None:
        unip = check_unipotent_order(rep, int(args.unipotent_q),
                                     seed=cfg.seed)
        out["unipotent"] = unip
        out["passed"] = out["passed"] and unip["passed"]
    return (0 if out["passed"] else 1), out


def cmd_maass_check(cfg: JobConfig, args) -> tuple[int, dict]:
    form = _load_form(cfg.inputs[0])
    eta = _preset_eta(args.eta)
    tol = _tol(cfg, 1e-6)
    points = [0.3 + 1.1j, -0.4 + 0.9j, 0.1 + 1.4j]
    rows = [
        {"check": "automorphy_S",
         "residual": automorphy_residual(form, eta, MAT_S, points)},
        {"check": "automorphy_T",
         "residual": automorphy_residual(form, eta, MAT_T, points)},
    ]
    for z in (0.3 + 1.1j, -0.2 + 0.8j):
        rows.append({"check": f"laplace@{z}",
                     "residual": laplace_residual(form, z)})
    worst = max(row["residual"] for row in rows)
    report = {"rows": rows, "max_residual": worst, "tol": tol,
              "passed": worst <= tol}
    return (0 if report["passed"] else 1), report


def _lewis_setup(cfg: JobConfig, args):
    form = _load_form(args.form)
    if not form.coeffs:
        raise DomainError("fixture has no coefficients; not a cusp form")
    eta = _preset_eta(args.eta)
    nu = cfg.nu if cfg.nu is not None else form.nu
    psi = period_evaluator_from_form(form, eta=eta)
    return form, eta, nu, psi


def cmd_lewis(cfg: JobConfig, args) -> tuple[int, dict]:
    action = args.action
    if action == "roundtrip":
        return _lewis_roundtrip(cfg, args)
    form, eta, nu, psi = _lewis_setup(cfg, args)
    grid = cfg.grid or GridSpec(0.3, 2.0, 15, -1.0, 1.0, 15)
    grid.validate()
    points = grid.points()
    if action == "transform":
        values = _pool_map(cfg, lambda z: psi(z), points)
        rows = [{"re": z.real, "im": z.imag, "value": v}
                for z, v in zip(points, values)]
        return 0, {"rows": rows, "count": len(rows)}
    tol = _tol(cfg, 1e-4)
    norms = _pool_map(
        cfg, lambda z: float(np.linalg.norm(lewis_residual(psi, eta, nu, z))),
        points)
    rows = [{"re": z.real, "im": z.imag, "residual_norm": n}
            for z, n in zip(points, norms)]
    worst = max(norms)
    report = {"rows": rows, "max_residual": worst, "tol": tol,
              "passed": worst <= tol}
    return (0 if report["passed"] else 1), report


def _lewis_roundtrip(cfg: JobConfig, args) -> tuple[int, dict]:
    eta = _preset_eta(args.eta)
    nu = cfg.nu if cfg.nu is not None else 0.3 + 0.2j
    rng = np.random.default_rng(cfg.seed)
    if args.form:
        form = _load_form(args.form)
        if not form.coeffs:
            raise DomainError("fixture has no coefficients; not a cusp form")
        f = f_from_form(form, eta=eta)
        nu = cfg.nu if cfg.nu is not None else form.nu
    else:
        cls = 1 if eta.N > 1 else 0
        w_plus, w_minus = {}, {}
        for i in range(cfg.k_max):
            k = cls + i * eta.N if eta.N > 1 else i + 1
            if k == 0:
                continue
            w_plus[k] = [complex(rng.standard_normal(),
                                 rng.standard_normal()) * math.exp(-k)]
            km = (cls - (i + 1) * eta.N) if eta.N > 1 else -(i + 1)
            w_minus[km] = [complex(rng.standard_normal(),
                                   rng.standard_normal()) * math.exp(km)]
        f = f_from_coefficients(w_plus, w_minus, eta.N, eta.dim, eta=eta)
    psi = period_from_boundary(f, nu, eta)
    radii = rng.uniform(0.3, 2.0, 20)
    angles = rng.uniform(0.15, math.pi - 0.15, 20)
    errs, scale = [], 0.0
    for i in range(20):
        z = radii[i] * complex(math.cos(angles[i]), math.sin(angles[i]))
        if i % 2:
            z = z.conjugate()
        target, _ = f.evaluate(z)
        got = invert_bruggeman(psi, eta, nu, z)
        errs.append(float(np.linalg.norm(got - target)))
        scale = max(scale, float(np.linalg.norm(target)))
    tol = _tol(cfg, 1e-10)
    rel = max(errs) / max(scale, 1e-300)
    report = {"max_error": max(errs), "scale": scale,
              "relative_error": rel, "tol": tol, "passed": rel <= tol}
    return (0 if report["passed"] else 1), report


def cmd_zeta(cfg: JobConfig, args) -> tuple[int, dict]:
    eta = _preset_eta(args.eta)
    zcfg = OperatorZetaConfig(eta, complex(args.a))
    x = float(args.x)
    if args.action == "eval":
        value = zeta_eta(zcfg, x)
        return 0, {"a": complex(args.a), "x": x, "eta": args.eta,
                   "value": value}
    value, est = asymptotic_zeta_eta(zcfg, x, M=cfg.m_order)
    report = {"a": complex(args.a), "x": x, "eta": args.eta, "M": cfg.m_order,
              "value": value, "error_estimate": est}
    if complex(args.a).real > 1.0:
        gap = float(np.max(np.abs(value - zeta_eta(zcfg, x))))
        tol = _tol(cfg, 1e-8)
        report.update({"gap_vs_closed_form": gap, "tol": tol,
                       "passed": gap <= tol})
        return (0 if gap <= tol else 1), report
    return 0, report


def cmd_transfer(cfg: JobConfig, args) -> tuple[int, dict]:
    form, eta, nu, psi = _lewis_setup(cfg, args)
    if args.action == "continue":
        z = complex(args.z)
        n = int(args.n)
        a = continue_psi(psi, nu, eta, z, n)
        b = continue_psi(psi, nu, eta, z, n + 1)
        gap = float(np.linalg.norm(a - b))
        tol = _tol(cfg, 1e-6)
        report = {"z": z, "n": n, "value": a, "value_next": b,
                  "depth_gap": gap, "tol": tol, "passed": gap <= tol}
        return (0 if report["passed"] else 1), report
    tol = _tol(cfg, 1e-4)
    xs = [float(x) for x in args.x]

    def row(x: float) -> dict:
        res, est = fixed_point_residual(psi, nu, eta, x, n_max=cfg.n_max,
                                        which=args.which)
        return {"x": x, "residual_norm": float(np.linalg.norm(res)),
                "tail_estimate": est, "n_max": cfg.n_max}

    rows = _pool_map(cfg, row, xs)
    worst = max(r["residual_norm"] for r in rows)
    report = {"rows": rows, "which": args.which, "max_residual": worst,
              "tol": tol, "passed": worst <= tol}
    return (0 if report["passed"] else 1), report


def cmd_lfun(cfg: JobConfig, args) -> tuple[int, dict]:
    form = _load_form(args.form)
    eps_list = [0, 1] if args.eps is None else [int(args.eps)]
    if args.action == "check":
        s_values = [complex(s) for s in (args.s or ["2.5"])]
        tol = _tol(cfg, 1e-6)
        rows = []
        for s in s_values:
            for eps in eps_list:
                quad = completed_L(form, s, eps, method="quadrature")
                series = completed_L(form, s, eps, method="series")
                rows.append({
                    "s": s, "eps": eps, "value": quad.value,
                    "route_gap": float(np.linalg.norm(quad.value
                                                      - series.value)),
                    "error_estimate": quad.error_estimate,
                })
        worst = max(r["route_gap"] for r in rows)
        report = {"rows": rows, "max_route_gap": worst, "tol": tol,
                  "passed": worst <= tol}
        return (0 if report["passed"] else 1), report
    s_values = [complex(s) for s in (args.s or ["0.5", "0.5+1j", "0.5+2j"])]
    tol = _tol(cfg, 1e-6)
    rows = []
    for s in s_values:
        for eps in eps_list:
            res, scale = functional_equation_residual(form, s, eps)
            rows.append({"s": s, "eps": eps,
                         "fe_residual": float(np.linalg.norm(res)),
                         "scale": scale})
    worst = max(r["fe_residual"] for r in rows)
    report = {"rows": rows, "max_fe_residual": worst, "tol": tol,
              "passed": worst <= tol}
    return (0 if report["passed"] else 1), report


def cmd_algebra(cfg: JobConfig, args) -> tuple[int, dict]:
    if args.action == "decompose":
        word = Word.from_string(args.word)
        gamma = word_to_matrix(word)
        dec = generator_decomposition(gamma)
        exact = dec.reconstruct() == GroupRingElement.difference_of(gamma)
        report = {
            "word": args.word,
            "matrix": [[gamma.a, gamma.b], [gamma.c, gamma.d]],
            "summands": [[element.to_json(), letter.tag]
                         for element, letter in dec.summands],
            "reconstruction_exact": bool(exact),
            "passed": bool(exact),
        }
        return (0 if exact else 1), report
    eta = build_eta_chi({"S": complex(args.chi_s), "T": complex(args.chi_t)})
    unip = check_unipotent_order(eta, int(args.q), int(args.samples),
                                 seed=cfg.seed)
    unip = dict(unip)
    unip["passed"] = bool(unip["passed"])
    return (0 if unip["passed"] else 1), unip


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--json", action="store_true",
                        help="print the full JSON report")
    parser.add_argument("--tol", type=float, default=None,
                        help="pass/fail threshold (command-specific default)")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for all sampled checks")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker pool size for grid jobs")
    parser.add_argument("--out", default=None, help="write the report here")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--nu", default=None,
                        help="override the spectral parameter (complex)")
    parser.add_argument("--n-max", dest="n_max", type=int, default=10_000)
    parser.add_argument("--k", type=int, default=6,
                        help="coefficient truncation for synthetic data")
    parser.add_argument("--m", type=int, default=4,
                        help="asymptotic expansion order")
    parser.add_argument("--quad-tol", dest="quad_tol", type=float,
                        default=1e-10)


def _add_grid(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--re-range", dest="re_range", nargs=3, type=float,
                        metavar=("MIN", "MAX", "COUNT"), default=None)
    parser.add_argument("--im-range", dest="im_range", nargs=3, type=float,
                        metavar=("MIN", "MAX", "COUNT"), default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="period-lab",
        description="Numerical toolkit for period functions of Maass forms")
    top = parser.add_subparsers(dest="group", required=True)

    rep = top.add_parser("rep", help="representation checks")
    rep_sub = rep.add_subparsers(dest="action", required=True)
    p = rep_sub.add_parser("validate")
    p.add_argument("inputs", nargs=1, metavar="PATH")
    p.add_argument("--unipotent-q", dest="unipotent_q", type=int,
                   default=None)
    _add_common(p)
    p.set_defaults(handler=cmd_rep_validate, command="rep validate")

    maass = top.add_parser("maass", help="fixture checks")
    maass_sub = maass.add_subparsers(dest="action", required=True)
    p = maass_sub.add_parser("check")
    p.add_argument("inputs", nargs=1, metavar="FORM")
    p.add_argument("--eta", default="trivial")
    _add_common(p)
    p.set_defaults(handler=cmd_maass_check, command="maass check")

    lewis = top.add_parser("lewis", help="period-function pipelines")
    lewis_sub = lewis.add_subparsers(dest="action", required=True)
    for action in ("transform", "residual", "roundtrip"):
        p = lewis_sub.add_parser(action)
        p.add_argument("--form", default=None if action == "roundtrip"
                       else "even_13_78")
        p.add_argument("--eta", default="trivial")
        _add_grid(p)
        _add_common(p)
        p.set_defaults(handler=cmd_lewis, command=f"lewis {action}")

    zeta = top.add_parser("zeta", help="weighted Hurwitz zetas")
    zeta_sub = zeta.add_subparsers(dest="action", required=True)
    for action in ("eval", "asym"):
        p = zeta_sub.add_parser(action)
        p.add_argument("--eta", default="trivial")
        p.add_argument("--a", required=True)
        p.add_argument("--x", required=True, type=float)
        _add_common(p)
        p.set_defaults(handler=cmd_zeta, command=f"zeta {action}")

    transfer = top.add_parser("transfer", help="transfer operators")
    transfer_sub = transfer.add_subparsers(dest="action", required=True)
    p = transfer_sub.add_parser("residual")
    p.add_argument("--form", default="even_13_78")
    p.add_argument("--eta", default="trivial")
    p.add_argument("--which", choices=("L0", "Linf"), default="L0")
    p.add_argument("--x", nargs="+", default=["0.5", "1.0", "2.0"])
    _add_common(p)
    p.set_defaults(handler=cmd_transfer, command="transfer residual")
    p = transfer_sub.add_parser("continue")
    p.add_argument("--form", default="even_13_78")
    p.add_argument("--eta", default="trivial")
    p.add_argument("--z", default="1.0")
    p.add_argument("--n", type=int, default=2)
    _add_common(p)
    p.set_defaults(handler=cmd_transfer, command="transfer continue")

    lfun = top.add_parser("lfun", help="completed L-functions")
    lfun_sub = lfun.add_subparsers(dest="action", required=True)
    for action in ("check", "fe"):
        p = lfun_sub.add_parser(action)
        p.add_argument("--form", default="even_13_78")
        p.add_argument("--s", nargs="+", default=None)
        p.add_argument("--eps", choices=("0", "1"), default=None)
        _add_common(p)
        p.set_defaults(handler=cmd_lfun, command=f"lfun {action}")

    algebra = top.add_parser("algebra", help="exact group-ring checks")
    algebra_sub = algebra.add_subparsers(dest="action", required=True)
    p = algebra_sub.add_parser("decompose")
    p.add_argument("--word", required=True)
    _add_common(p)
    p.set_defaults(handler=cmd_algebra, command="algebra decompose")
    p = algebra_sub.add_parser("unipotent")
    p.add_argument("--chi-s", dest="chi_s", default="0")
    p.add_argument("--chi-t", dest="chi_t", default="1")
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--samples", type=int, default=200)
    _add_common(p)
    p.set_defaults(handler=cmd_algebra, command="algebra unipotent")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 3
    try:
        cfg = JobConfig.from_args(args)
        code, report = args.handler(cfg, args)
        report.setdefault("command", cfg.command)
        report.setdefault("exit_code", code)
        _emit(report, cfg, args.json)
        return code
    except (ConvergenceFailure, SlowConvergence, HalfIntegerNu,
            ResonantNu) as exc:
        print(json.dumps({"error": f"{type(exc).__name__}: {exc}",
                          "exit_code": 2}))
        return 2
    except (RelationViolation, DomainError, Pole, BranchCut,
            DimensionMismatch, SizeLimit, PeriodLabError) as exc:
        print(json.dumps({"error": f"{type(exc).__name__}: {exc}",
                          "exit_code": 1}))
        return 1
    except (OSError, json.JSONDecodeError, ValueError, KeyError,
            ConfigError) as exc:
        print(json.dumps({"error": f"{type(exc).__name__}: {exc}",
                          "exit_code": 3}))
        return 3


if __name__ == "__main__":
    sys.exit(main())
