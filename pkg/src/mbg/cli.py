"""Command-line interface.

Exit codes: 0 success, 1 invalid input (schema or usage), 2 domain error,
3 non-convergence, unreliable estimator, or a failed verification.
Outputs are written to ``--out`` as JSON (scalars) or CSV (tables).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from pathlib import Path

import jsonschema
import numpy as np

from . import series
from .distributions import MbgParams, cdf_univariate, eigen_log_density, log_density
from .generator import parse_generator
from .errors import ConvergenceError, DomainError, EstimatorUnreliableError, MbgError
from .montecarlo import det_histogram, is_estimate, log_base_integral
from .verify import DESK_CONFIGS, run_desk

COMMANDS = ("constant", "density-curve", "eig-density", "moments", "entropy", "mgf", "cdf", "det-hist", "verify")

PARAMS_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["family", "m", "a", "b", "phi", "h"],
    "properties": {
        "family": {
            "oneOf": [
                {"type": "string", "enum": ["MBG1", "MBG2", "MBG3", "DETGEN1", "DETGEN2", "DETGEN3", "1", "2", "3"]},
                {"type": "integer", "enum": [1, 2, 3]},
            ]
        },
        "m": {"type": "integer", "minimum": 1},
        "a": {"type": "number"},
        "b": {"type": "number"},
        "phi": {
            "oneOf": [
                {"type": "number"},
                {"type": "array", "items": {"type": "number"}, "minItems": 1},
                {"type": "array", "items": {"type": "array", "items": {"type": "number"}}, "minItems": 1},
            ]
        },
        "h": {"type": "string", "minLength": 1},
    },
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mbg", description="Matrix-variate beta generator distributions.")
    p.add_argument("--command", required=True, choices=COMMANDS)
    p.add_argument("--params", type=Path, help="JSON parameter file")
    p.add_argument("--out", type=Path, default=Path("."), help="output directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--truncation", type=int, default=None, help="series truncation degree T")
    p.add_argument("--samples", type=int, default=10**6, help="Monte Carlo sample count")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--grid", default="0.01:0.99:99", help="START:STOP:NUM")
    p.add_argument("--r", default="1", help="comma separated moment orders")
    p.add_argument("--nu", default=None, help="comma separated Renyi orders")
    p.add_argument("--t-matrix", default=None, help="JSON matrix for the MGF")
    p.add_argument("--y-matrix", default=None, help="JSON matrix for the CDF")
    p.add_argument("--bins", type=int, default=50)
    p.add_argument("--suite", default="desk", choices=["desk"])
    return p


# --------------------------------------------------------------------------
# io helpers
# --------------------------------------------------------------------------


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return "%.17g" % float(x)
    return str(x)


def write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    path.write_text(buf.getvalue(), encoding="utf-8", newline="")


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else repr(x)
    return x


def write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_params(path: Path | None, **kw) -> MbgParams:
    if path is None:
        raise UsageError("--params is required for this command")
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read parameter file: {exc}") from exc
    jsonschema.validate(data, PARAMS_SCHEMA)
    try:
        parse_generator(data["h"])
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    try:
        return MbgParams.from_dict(data, **kw)
    except ValueError as exc:
        if isinstance(exc, DomainError):
            raise
        raise UsageError(str(exc)) from exc


def parse_grid(text: str) -> np.ndarray:
    try:
        start, stop, num = text.split(":")
        return np.linspace(float(start), float(stop), int(num))
    except ValueError as exc:
        raise UsageError(f"bad grid {text!r}; expected START:STOP:NUM") from exc


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"bad number list {text!r}") from exc


def _parse_matrix(text: str | None, m: int, name: str) -> np.ndarray:
    if text is None:
        raise UsageError(f"{name} is required for this command")
    try:
        a = np.asarray(json.loads(text), dtype=float)
    except (json.JSONDecodeError, ValueError) as exc:
        raise UsageError(f"bad {name}: {exc}") from exc
    if a.ndim == 0:
        a = a * np.eye(m)
    a = a.reshape(m, m) if a.size == m * m else a
    if a.shape != (m, m):
        raise UsageError(f"{name} must be {m}x{m}")
    if not np.allclose(a, a.T, rtol=1e-12, atol=0):
        raise UsageError(f"{name} must be symmetric")
    return a


def _series_diag(sv: series.SeriesValue) -> dict:
    return {
        "route": "series",
        "value": sv.value,
        "log_abs": sv.log_abs,
        "sign": sv.sign,
        "truncation_degree": sv.truncation_degree,
        "tail_estimate": sv.tail_estimate,
        "converged": sv.converged,
        "formal": sv.formal,
    }


def _mc_diag(est, scale: float = 1.0) -> dict:
    return {
        "route": "mc",
        "value": est.value * scale,
        "std_error": est.std_error * scale,
        "n_samples": est.n_samples,
        "effective_sample_size": est.effective_sample_size,
        "seed": est.seed,
    }


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def _params(args) -> MbgParams:
    return load_params(args.params, truncation=args.truncation, mc_samples=args.samples, mc_seed=args.seed)


def cmd_constant(args) -> int:
    p = _params(args)
    nc = p.norm_const()
    if nc.route == "series":
        out = _series_diag(nc.diagnostics)
        status = 0 if nc.diagnostics.converged else 3
    else:
        out = _mc_diag(nc.diagnostics, math.exp(log_base_integral(p)))
        status = 0
    out["log_norm_const"] = nc.log_zeta
    write_json(args.out / "constant.json", out)
    return status


def _norm_cols(p: MbgParams) -> list:
    nc = p.norm_const()
    d = nc.diagnostics
    err = d.tail_estimate if nc.route == "series" else d.std_error * math.exp(log_base_integral(p))
    return [nc.route, nc.log_zeta, err]


def cmd_density_curve(args) -> int:
    p = _params(args)
    rows = []
    for x in parse_grid(args.grid):
        X = np.array([[x]]) if p.m == 1 else x * np.eye(p.m)
        ld = log_density(p, X)
        rows.append([x, ld, math.exp(ld)] + _norm_cols(p))
    write_csv(args.out / "density-curve.csv",
              ["x", "log_density", "density", "route", "log_norm_const", "norm_const_error"], rows)
    return 0


def cmd_eig_density(args) -> int:
    p = _params(args)
    if p.m > 2:
        raise UsageError("eig-density grid output supports m <= 2")
    T = args.truncation if args.truncation is not None else series.DEFAULT_T
    grid = parse_grid(args.grid)
    rows = []
    if p.m == 1:
        for x in grid:
            ld = eigen_log_density(p, [x], T)
            rows.append([x, ld, math.exp(ld), T] + _norm_cols(p))
        header = ["lambda_1"]
    else:
        for l1 in grid:
            for l2 in grid:
                if l2 >= l1:
                    continue
                ld = eigen_log_density(p, [l1, l2], T)
                rows.append([l1, l2, ld, math.exp(ld), T] + _norm_cols(p))
        header = ["lambda_1", "lambda_2"]
    write_csv(args.out / "eig-density.csv",
              header + ["log_density", "density", "truncation_degree", "route", "log_norm_const", "norm_const_error"],
              rows)
    return 0


def cmd_moments(args) -> int:
    p = _params(args)
    results, status = [], 0
    for r in _parse_floats(args.r):
        if p.series_available():
            try:
                sv = series.det_moment(p.family, p.a, p.b, p.Phi, p.h, r, args.truncation)
                d = _series_diag(sv)
                status = status or (0 if sv.converged else 3)
            except series.FormalSeriesError:
                d = None
        else:
            d = None
        if d is None:
            d = _mc_diag(is_estimate(p, "det_moment", args.samples, seed=args.seed, threads=args.threads, r=r))
        d["r"] = r
        results.append(d)
    write_json(args.out / "moments.json", {"moments": results})
    return status


def cmd_entropy(args) -> int:
    p = _params(args)
    out = {}
    status = 0
    try:
        H = series.shannon_entropy(p.family, p.a, p.b, p.Phi, p.h, args.truncation)
        out["shannon"] = {"route": f"series-{H.method}", "value": H.value, "error_estimate": H.error_estimate}
    except (DomainError, ConvergenceError):
        est = is_estimate(p, "entropy_shannon", args.samples, seed=args.seed, threads=args.threads)
        out["shannon"] = _mc_diag(est)
    if args.nu:
        out["renyi"] = [
            {"nu": nu, "value": series.renyi_entropy(p.family, p.a, p.b, p.Phi, p.h, nu, args.truncation),
             "route": "series"}
            for nu in _parse_floats(args.nu)
        ]
    write_json(args.out / "entropy.json", out)
    return status


def cmd_mgf(args) -> int:
    p = _params(args)
    T = _parse_matrix(args.t_matrix, p.m, "--t-matrix")
    est = is_estimate(p, "mgf", args.samples, seed=args.seed, threads=args.threads, T=T)
    write_json(args.out / "mgf.json", dict(_mc_diag(est), t_matrix=T))
    return 0


def cmd_cdf(args) -> int:
    p = _params(args)
    Y = _parse_matrix(args.y_matrix, p.m, "--y-matrix")
    est = is_estimate(p, "cdf", args.samples, seed=args.seed, threads=args.threads, Y=Y)
    out = dict(_mc_diag(est), y_matrix=Y)
    if p.m == 1:
        out["quadrature"] = cdf_univariate(p, float(Y[0, 0]))
    write_json(args.out / "cdf.json", out)
    return 0


def cmd_det_hist(args) -> int:
    p = _params(args)
    hist = det_histogram(p, args.samples, bins=args.bins, seed=args.seed, threads=args.threads)
    rows = [
        [lo, hi, dens, hist.effective_sample_size, hist.n_samples, hist.seed]
        for lo, hi, dens in zip(hist.edges[:-1], hist.edges[1:], hist.density)
    ]
    write_csv(args.out / "det-hist.csv", ["bin_left", "bin_right", "density", "ess", "n_samples", "seed"], rows)
    moments = []
    for r, est in hist.moments.items():
        d = dict(_mc_diag(est), r=r)
        if p.series_available():
            try:
                d["series"] = _series_diag(series.det_moment(p.family, p.a, p.b, p.Phi, p.h, r, args.truncation))
            except series.FormalSeriesError:
                pass
        moments.append(d)
    write_json(args.out / "det-hist.json", {"moments": moments})
    return 0


def cmd_verify(args) -> int:
    results = run_desk(n=args.samples, seed=args.seed, threads=args.threads, configs=DESK_CONFIGS)
    header = ["config", "quantity", "series_value", "series_error", "mc_value", "mc_se", "z_score", "se_relative", "passed"]
    write_csv(args.out / "verify.csv", header, [[getattr(r, k) for k in header] for r in results])
    n_pass = sum(r.passed for r in results)
    write_json(args.out / "verify.json", {"suite": args.suite, "checks": len(results), "passed": n_pass,
                                          "ok": n_pass == len(results)})
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.config} {r.quantity} z={r.z_score:.2f} "
              f"se_rel={r.se_relative:.1e}")
    return 0 if n_pass == len(results) else 3


HANDLERS = {
    "constant": cmd_constant,
    "density-curve": cmd_density_curve,
    "eig-density": cmd_eig_density,
    "moments": cmd_moments,
    "entropy": cmd_entropy,
    "mgf": cmd_mgf,
    "cdf": cmd_cdf,
    "det-hist": cmd_det_hist,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    args = None
    try:
        args = build_parser().parse_args(argv)
        args.out.mkdir(parents=True, exist_ok=True)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            return HANDLERS[args.command](args)
    except (UsageError, jsonschema.ValidationError) as exc:
        msg = exc.message if isinstance(exc, jsonschema.ValidationError) else str(exc)
        print(f"mbg: input error: {msg}", file=sys.stderr)
        return 1
    except (ConvergenceError, EstimatorUnreliableError) as exc:
        print(f"mbg: {exc}", file=sys.stderr)
        if args is not None:
            write_json(args.out / "error.json", {"command": args.command, "error": type(exc).__name__,
                                                 "message": str(exc), "seed": args.seed})
        return 3
    except (DomainError, MbgError) as exc:
        print(f"mbg: domain error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
