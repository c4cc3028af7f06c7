"""Dual-route desk suite: series results against importance sampling."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import series
from .distributions import MbgParams
from .families import Family
from .generator import parse_generator
from .montecarlo import is_estimate, log_base_integral
from .zonal import SymMatrix

__all__ = ["DeskConfig", "CheckResult", "DESK_CONFIGS", "run_config", "run_desk", "SE_REL_MAX"]

SE_REL_MAX = 1e-3
N_SIGMA = 3.0
DESK_SAMPLES = 10**6


@dataclass(frozen=True)
class DeskConfig:
    name: str
    family: str
    m: int
    a: float
    b: float
    phi: tuple
    h: str

    def params(self) -> MbgParams:
        phi = np.asarray(self.phi, dtype=float).reshape(self.m, self.m)
        return MbgParams(Family.coerce(self.family), self.m, self.a, self.b, SymMatrix(phi), parse_generator(self.h))


def _cfg(name, family, m, a, b, phi, h):
    phi = np.atleast_2d(np.asarray(phi, dtype=float))
    if phi.shape == (1, 1) and m > 1:
        phi = phi[0, 0] * np.eye(m)
    return DeskConfig(name, family, m, a, b, tuple(phi.reshape(-1).tolist()), h)


# Shapes keep every relative standard error under SE_REL_MAX at 10^6 draws:
# entropies are kept away from zero, and type 3 keeps a + b small enough
# for the reflected series.
DESK_CONFIGS: tuple[DeskConfig, ...] = (
    _cfg("mbg1-m1-one", "MBG1", 1, 20, 20, 0.7, "one"),
    _cfg("mbg1-m1-expneg", "MBG1", 1, 20, 20, 0.7, "exp-neg"),
    _cfg("mbg1-m2-one", "MBG1", 2, 6, 6, np.diag([0.5, 1.0]), "one"),
    _cfg("mbg1-m2-expneg", "MBG1", 2, 6, 6, np.diag([0.5, 1.0]), "exp-neg"),
    _cfg("mbg2-m1-one", "MBG2", 1, 10, 40, 0.3, "one"),
    _cfg("mbg2-m1-poly", "MBG2", 1, 10, 40, 0.3, "poly:1,1"),
    _cfg("mbg2-m2-one", "MBG2", 2, 10, 30, 0.3, "one"),
    _cfg("mbg2-m2-poly", "MBG2", 2, 10, 30, 0.3, "poly:1,1"),
    _cfg("mbg3-m1-one", "MBG3", 1, 2, 8, 0.4, "one"),
    _cfg("mbg3-m1-expneg", "MBG3", 1, 2, 8, 0.4, "exp-neg"),
    _cfg("mbg3-m2-one", "MBG3", 2, 3, 3, 0.4, "one"),
    _cfg("mbg3-m2-expneg", "MBG3", 2, 3, 3, 0.4, "exp-neg"),
)


@dataclass(frozen=True)
class CheckResult:
    config: str
    quantity: str
    series_value: float
    series_error: float
    mc_value: float
    mc_se: float
    z_score: float
    se_relative: float
    passed: bool

    def as_dict(self) -> dict:
        return asdict(self)


def _judge(config, quantity, sv, s_err, mv, mse) -> CheckResult:
    diff = abs(sv - mv)
    # series truncation error enters additively; rounding guards the se = 0 case
    tol = N_SIGMA * mse + 2.0 * s_err + 1e-12 * abs(sv)
    z = diff / mse if mse > 0 else (0.0 if diff <= tol else math.inf)
    se_rel = mse / abs(mv) if mv != 0 else math.inf
    ok = diff <= tol and se_rel <= SE_REL_MAX
    return CheckResult(config, quantity, sv, s_err, mv, mse, z, se_rel, bool(ok))


def run_config(cfg: DeskConfig, n: int = DESK_SAMPLES, seed: int = 0, threads: int = 1) -> list[CheckResult]:
    p = cfg.params()
    fam = p.family
    out = []

    z = series.normalizing_integral(fam, p.a, p.b, p.Phi, p.h)
    est = is_estimate(p, "norm_const", n, seed=seed, threads=threads)
    scale = math.exp(log_base_integral(p))
    out.append(_judge(cfg.name, "constant", z.value, z.tail_estimate, est.value * scale, est.std_error * scale))

    d = series.det_moment(fam, p.a, p.b, p.Phi, p.h, 1.0)
    est = is_estimate(p, "det_moment", n, seed=seed + 1, threads=threads, r=1.0)
    out.append(_judge(cfg.name, "E[det X]", d.value, d.tail_estimate, est.value, est.std_error))

    H = series.shannon_entropy(fam, p.a, p.b, p.Phi, p.h)
    est = is_estimate(p, "entropy_shannon", n, seed=seed + 2, threads=threads)
    out.append(_judge(cfg.name, f"entropy ({H.method})", H.value, H.error_estimate, est.value, est.std_error))
    return out


def run_desk(n: int = DESK_SAMPLES, seed: int = 20240611, threads: int = 1, configs=DESK_CONFIGS) -> list[CheckResult]:
    results = []
    for i, cfg in enumerate(configs):
        results.extend(run_config(cfg, n=n, seed=seed + 10 * i, threads=threads))
    return results
