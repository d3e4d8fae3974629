"""Command-line experiment driver.

Each subcommand writes a CSV or JSON data file (or prints to stdout) and
exits with 0 on success, 2 on configuration errors and 3 when ``--assert``
is given and a numerical check fails.

    mtspectral decay --function runge --N 64 --out runge.csv
    mtspectral compare-hermite --function wavepacket --N 100 --assert
    mtspectral pde-advect --N 64 --t 1.0 --format json
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import analysis, operators, transform
from .bases import evaluate_many
from .basis_core import BasisSpec, Family, GeneralMTParams
from .exceptions import MTSpectralError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ASSERT = 3

FLOAT_FMT = "%.17g"
EXPERIMENTS = (
    "orthonormality",
    "coeffs",
    "decay",
    "compare-hermite",
    "identities",
    "pde-advect",
    "rho-region",
)


class ConfigError(Exception):
    pass


# --- function registry -------------------------------------------------------


def _sech(x):
    # 2 e^{-|x|} / (1 + e^{-2|x|}) never overflows
    e = np.exp(-np.abs(x))
    return 2 * e / (1 + e * e)


@dataclass(frozen=True)
class FunctionRegistryEntry:
    key: str
    description: str
    evaluator: Callable
    expected_decay: Optional[analysis.DecayModel] = None


REGISTRY = {
    entry.key: entry
    for entry in [
        FunctionRegistryEntry(
            "runge", "1/(1+x^2)", lambda x: 1 / (1 + x * x), analysis.DecayModel.EXPONENTIAL
        ),
        FunctionRegistryEntry(
            "quartic", "1/(1+x^4)", lambda x: 1 / (1 + x**4), analysis.DecayModel.EXPONENTIAL
        ),
        FunctionRegistryEntry(
            "gauss", "exp(-x^2)", lambda x: np.exp(-x * x), analysis.DecayModel.STRETCHED_EXP
        ),
        FunctionRegistryEntry("sech", "sech(x)", _sech, analysis.DecayModel.STRETCHED_EXP),
        FunctionRegistryEntry(
            "sinc-runge",
            "sin(x)/(1+x^2)",
            lambda x: np.sin(x) / (1 + x * x),
            analysis.DecayModel.ALGEBRAIC,
        ),
        FunctionRegistryEntry(
            "sin-quartic",
            "sin(x)/(1+x^4)",
            lambda x: np.sin(x) / (1 + x**4),
            analysis.DecayModel.ALGEBRAIC,
        ),
        FunctionRegistryEntry(
            "wavepacket",
            "exp(-x^2) cos(10x)",
            lambda x: np.exp(-x * x) * np.cos(10 * x),
            analysis.DecayModel.STRETCHED_EXP,
        ),
    ]
}


def list_registry(out=None):
    out = out or sys.stdout
    for key, entry in REGISTRY.items():
        tag = entry.expected_decay.value if entry.expected_decay else "-"
        out.write(f"{key:<12} {entry.description:<20} {tag}\n")


def lookup(key: str) -> FunctionRegistryEntry:
    try:
        return REGISTRY[key]
    except KeyError:
        raise ConfigError(f"unknown function {key!r}; choose from {', '.join(REGISTRY)}") from None


# --- configuration -----------------------------------------------------------


def parse_basis(text: str) -> BasisSpec:
    """Parse ``mt``, ``gmt:re,im,omega,delta``, ``fl:alpha`` or ``hermite:alpha``."""
    name, _, arg = text.strip().partition(":")
    try:
        if name == "mt" and not arg:
            return BasisSpec.mt()
        if name == "fl":
            return BasisSpec.fourier_laguerre(float(arg))
        if name == "hermite":
            return BasisSpec.shifted_hermite(float(arg) if arg else 0.0)
        if name == "gmt":
            re_, im_, omega, delta = (float(v) for v in arg.split(","))
            return BasisSpec.general_mt(GeneralMTParams(complex(re_, im_), omega, delta))
    except (ValueError, MTSpectralError) as exc:
        raise ConfigError(f"bad basis {text!r}: {exc}") from None
    raise ConfigError(f"bad basis {text!r}")


def read_config_file(path: str) -> dict:
    """key = value lines; '#' starts a comment."""
    out = {}
    try:
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                key, sep, value = line.partition("=")
                if not sep:
                    raise ConfigError(f"{path}:{lineno}: expected key = value")
                out[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return out


DEFAULTS = {
    "basis": "mt",
    "N": "64",
    "function": "runge",
    "t": "1.0",
    "rho": "3.0",
    "out": None,
    "format": "csv",
    "assert_": False,
}


def resolve(args: argparse.Namespace) -> dict:
    """Merge flags over config-file values over defaults and validate."""
    cfg = dict(DEFAULTS)
    if args.config:
        file_cfg = read_config_file(args.config)
        if "assert" in file_cfg:
            file_cfg["assert_"] = file_cfg.pop("assert").lower() in ("1", "true", "yes")
        unknown = set(file_cfg) - set(DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        cfg.update(file_cfg)
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None and value is not False:
            cfg[key] = value
    try:
        cfg["N"] = int(cfg["N"])
        cfg["t"] = float(cfg["t"])
        cfg["rho"] = float(cfg["rho"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if cfg["N"] < 1:
        raise ConfigError("N must be >= 1")
    if cfg["format"] not in ("csv", "json"):
        raise ConfigError("format must be csv or json")
    cfg["basis"] = parse_basis(cfg["basis"]) if isinstance(cfg["basis"], str) else cfg["basis"]
    cfg["entry"] = lookup(cfg["function"])
    return cfg


def seed() -> int:
    raw = os.environ.get("MTSPECTRAL_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"MTSPECTRAL_SEED must be an integer, got {raw!r}") from None


# --- output ------------------------------------------------------------------


def fmt(v) -> str:
    return FLOAT_FMT % v


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        # round-trip through the fixed format so output is byte-stable
        return float(fmt(obj))
    return obj


def emit(cfg, header, rows, summary: dict):
    """Write rows as CSV, or rows plus summary as JSON, to --out or stdout."""
    if cfg["format"] == "json":
        payload = {"columns": list(header), "rows": [list(r) for r in rows], **summary}
        text = json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n"
    else:
        text = to_csv(header, rows)
    if cfg["out"]:
        try:
            with open(cfg["out"], "w", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise ConfigError(f"cannot write {cfg['out']}: {exc}") from None
        if cfg["format"] == "csv" and summary:
            sys.stdout.write(json.dumps(_jsonable(summary), sort_keys=True) + "\n")
    else:
        sys.stdout.write(text)
        if cfg["format"] == "csv" and summary:
            sys.stderr.write(json.dumps(_jsonable(summary), sort_keys=True) + "\n")


def coeff_rows(e: transform.Expansion):
    return [(int(n), abs(c), c.real, c.imag) for n, c in zip(e.indices, e.coeffs)]


COEFF_HEADER = ("n", "abs_coeff", "re_coeff", "im_coeff")


# --- experiments -------------------------------------------------------------


def _default_indices(spec: BasisSpec, N: int):
    return np.arange(-N, N + 1) if spec.indexed_over_z else np.arange(0, N + 1)


def run_orthonormality(cfg):
    spec, N = cfg["basis"], cfg["N"]
    idx = _default_indices(spec, N)
    G = transform.gram_matrix(spec, idx)
    dev = np.abs(G - np.eye(len(idx)))
    off = dev.copy()
    np.fill_diagonal(off, 0.0)
    summary = {
        "basis": str(spec),
        "N": N,
        "max_offdiag": float(off.max()),
        "max_diag_error": float(np.diag(dev).max()),
    }
    if spec.family is Family.MT:
        grid = transform.make_grid(N)
        n = np.arange(-N, N)
        V = evaluate_many(spec, n, grid.x)
        D = (V * grid.weight) @ V.conj().T
        summary["max_discrete_error"] = float(np.abs(D - np.eye(2 * N)).max())
    rows = [(int(n), float(np.abs(G[i, i] - 1)), float(off[i].max())) for i, n in enumerate(idx)]
    ok = summary["max_offdiag"] <= 1e-8 and summary["max_diag_error"] <= 1e-8
    return ("n", "diag_error", "max_offdiag"), rows, summary, ok


def expansion_for(cfg, f) -> transform.Expansion:
    spec, N = cfg["basis"], cfg["N"]
    if spec.family is Family.MT:
        return transform.analyze(f, transform.make_grid(N))
    if spec.family is Family.SHIFTED_HERMITE:
        return transform.hermite_analyze(f, N, spec.alpha)
    idx = _default_indices(spec, N)
    x, w = transform.quadrature_nodes()
    V = evaluate_many(spec, idx, x)
    return transform.Expansion(spec, int(idx[0]), (np.conj(V) * (w * f(x))).sum(axis=1))


def run_coeffs(cfg):
    e = expansion_for(cfg, cfg["entry"].evaluator)
    summary = {"basis": str(cfg["basis"]), "function": cfg["function"], "N": cfg["N"]}
    return COEFF_HEADER, coeff_rows(e), summary, True


def run_decay(cfg):
    entry, N = cfg["entry"], cfg["N"]
    e = analysis.mt_coefficients(entry.evaluator, N)
    summary = {"function": entry.key, "N": N}
    ok = True
    try:
        n, mags = analysis.slower_tail(e)
        fits = analysis.fit_all_models(n, mags)
        best = analysis.best_model(fits)
        summary["fits"] = {
            m.value: {**f.params, "residual": f.residual, "window": list(f.window)}
            for m, f in fits.items()
        }
        summary["best_model"] = best.value
        if entry.expected_decay is not None:
            ok = best is entry.expected_decay
    except analysis.InsufficientData as exc:
        summary["fit_error"] = str(exc)
        ok = False
    return COEFF_HEADER, coeff_rows(e), summary, ok


def run_compare_hermite(cfg):
    f, N = cfg["entry"].evaluator, cfg["N"]
    xs = np.linspace(-10, 10, 2001)
    # MT window [-N, N-1] against Hermite functions 0..N-1
    e_mt = transform.analyze(f, transform.make_grid(N))
    e_h = transform.hermite_analyze(f, N)
    err_mt = analysis.partial_sum_error(f, e_mt, xs)
    err_h = analysis.partial_sum_error(f, e_h, xs)
    rows = list(zip(xs.tolist(), err_mt.tolist(), err_h.tolist()))
    summary = {
        "function": cfg["function"],
        "N": N,
        "max_error_mt": float(err_mt.max()),
        "max_error_hermite": float(err_h.max()),
    }
    return ("x", "error_mt", "error_hermite"), rows, summary, err_mt.max() < err_h.max()


def identity_residuals(rng, n_points=50, width=16):
    """Max pointwise residuals of the product, x d/dx and Cayley identities."""
    x = np.tan(rng.uniform(-1.5, 1.5, n_points))
    mt = BasisSpec.mt()

    def random_expansion(n_min):
        c = rng.normal(size=width) + 1j * rng.normal(size=width)
        return transform.Expansion(mt, n_min, c / np.linalg.norm(c))

    a, b = random_expansion(-width // 2), random_expansion(-width // 4)
    fa, fb = transform.synthesize(a, x), transform.synthesize(b, x)
    prod = transform.synthesize(operators.mt_product(a, b), x)
    res_product = np.max(np.abs(prod - fa * fb)) / max(np.max(np.abs(fa * fb)), 1e-300)

    wide = (a.n_min - 1, a.n_max + 1)
    xd = transform.synthesize(operators.apply(operators.x_ddx_op(*wide), a), x)
    d = transform.synthesize(operators.apply(operators.diff_op(mt, *wide), a), x)
    res_xddx = np.max(np.abs(xd - x * d)) / max(np.max(np.abs(x * d)), 1e-300)

    cw = transform.synthesize(operators.apply(operators.cayley_weight_op(*wide), a), x)
    ref = 4j / (1 + 4 * x * x) * fa
    res_cayley = np.max(np.abs(cw - ref)) / max(np.max(np.abs(ref)), 1e-300)
    return {"product": res_product, "x_ddx": res_xddx, "cayley_weight": res_cayley}


def run_identities(cfg):
    res = identity_residuals(np.random.default_rng(seed()))
    rows = [(k, float(v)) for k, v in res.items()]
    ok = all(v <= 1e-10 for v in res.values())
    return ("identity", "max_residual"), rows, {"seed": seed()}, ok


def advection_errors(f, N, t, xs=None):
    """(norm drift, max shift error) for u_t = u_x started from f."""
    xs = np.linspace(-10, 10, 401) if xs is None else xs
    mt = BasisSpec.mt()
    e0 = transform.analyze(f, transform.make_grid(N))
    D = operators.diff_op(mt, -N, N - 1)
    et = operators.propagate(D, e0, t)
    drift = abs(et.norm() - e0.norm())
    err = np.max(np.abs(transform.synthesize(et, xs) - f(xs + t)))
    return float(drift), float(err)


def run_pde_advect(cfg):
    f, N, t = cfg["entry"].evaluator, cfg["N"], cfg["t"]
    sizes = sorted({16 * 2**k for k in range(8) if 16 * 2**k < N} | {N})
    rows = [(n, *advection_errors(f, n, t)) for n in sizes]
    drift = max(r[1] for r in rows)
    errs = [r[2] for r in rows]
    summary = {"function": cfg["function"], "t": t, "max_norm_drift": drift}
    ok = drift <= 1e-12 and all(b < a for a, b in zip(errs, errs[1:]))
    return ("N", "norm_drift", "shift_error"), rows, summary, ok


def run_rho_region(cfg):
    r = analysis.rho_region(cfg["rho"])
    rows = [(r.rho, r.center.imag, r.radius)]
    return ("rho", "center_im", "radius"), rows, {}, True


RUNNERS = {
    "orthonormality": run_orthonormality,
    "coeffs": run_coeffs,
    "decay": run_decay,
    "compare-hermite": run_compare_hermite,
    "identities": run_identities,
    "pde-advect": run_pde_advect,
    "rho-region": run_rho_region,
}


EXPERIMENT_HELP = {
    "orthonormality": "Gram-matrix deviation from the identity for a basis",
    "coeffs": "expansion coefficients of a registry function",
    "decay": "coefficient decay fits and the best-fitting model",
    "compare-hermite": "pointwise error of the rational basis against Hermite functions",
    "identities": "residuals of the operator and product identities",
    "pde-advect": "norm drift and shift error of the advection propagator",
    "rho-region": "centre and radius of the disc with decay rate rho",
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mtspectral", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="experiment", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--basis", help="mt | gmt:re,im,omega,delta | fl:alpha | hermite:alpha")
    common.add_argument("--N", type=int)
    common.add_argument("--function", help="registry key (see `mtspectral list`)")
    common.add_argument("--t", type=float, help="propagation time for pde-advect")
    common.add_argument("--rho", type=float, help="decay rate for rho-region")
    common.add_argument("--out", help="output file; stdout when omitted")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--assert", dest="assert_", action="store_true",
                        help="exit with status 3 if the experiment's check fails")
    common.add_argument("--config", help="key = value file; flags take precedence")
    for name in EXPERIMENTS:
        sub.add_parser(name, parents=[common], help=EXPERIMENT_HELP[name])
    sub.add_parser("list", help="show the function registry")
    return p


def run(cfg: dict) -> int:
    header, rows, summary, ok = RUNNERS[cfg["experiment"]](cfg)
    emit(cfg, header, rows, summary)
    if cfg["assert_"] and not ok:
        sys.stderr.write(f"{cfg['experiment']}: check failed\n")
        return EXIT_ASSERT
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.experiment == "list":
        list_registry()
        return EXIT_OK
    try:
        cfg = resolve(args)
        cfg["experiment"] = args.experiment
        return run(cfg)
    except ConfigError as exc:
        sys.stderr.write(f"mtspectral: {exc}\n")
        return EXIT_CONFIG
    except MTSpectralError as exc:
        sys.stderr.write(f"mtspectral: {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
