"""Base-law samplers and self-normalized importance sampling.

Draws come from the h = 1 member of the target's own kernel type with
the target's (a, b), so the weight is h alone.  Types 1 and 2 are the
classical matrix-beta laws.  For type 3 the map X = U (2I - U)^(-1) sends
a type-1 matrix beta U to the type-3 law with h = 1 (the Jacobian
2^(m(m+1)/2) det(2I - U)^(-(m+1)) cancels every det(2I - U) factor), whose
integral is 2^(-ma) B_m(a, b).  ``base="plain"`` keeps the type-1 base for
type 3 and moves det(I+X)^(-(a+b)) into the weight instead.

Streams are Philox generators keyed by (seed, chunk index), and chunks
have a fixed size, so every estimate is a function of the seed only,
whatever the thread count.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .distributions import MbgParams, _h_argument
from .errors import DensityUndefinedError, DomainError, EstimatorUnreliableError
from .mvgamma import mv_beta

__all__ = [
    "CHUNK_SIZE",
    "McEstimate",
    "DetHistogram",
    "chunk_rng",
    "sample_wishart",
    "sample_beta_base",
    "sample_haar",
    "draw_base",
    "sample_type3_base",
    "log_base_integral",
    "is_estimate",
    "det_histogram",
    "ks_distance",
    "rejection_sample",
]

CHUNK_SIZE = 1 << 16
ESS_WARN_FRACTION = 0.01
ESS_MIN = 10.0


@dataclass(frozen=True)
class McEstimate:
    """An importance-sampling estimate.

    ``value`` and ``std_error`` are arrays for matrix-valued functionals.
    """

    value: float
    std_error: float
    n_samples: int
    effective_sample_size: float
    seed: int
    functional: str = ""


def chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(chunk),))
    return np.random.Generator(np.random.Philox(ss))


# --------------------------------------------------------------------------
# samplers
# --------------------------------------------------------------------------


def sample_wishart(df: float, m: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """n draws of W_m(df, I) by the Bartlett decomposition, shape (n, m, m)."""
    if not df > m - 1:
        raise DomainError(f"Wishart needs df > m - 1 (df={df:g}, m={m})")
    L = np.zeros((n, m, m))
    for i in range(m):
        L[:, i, i] = np.sqrt(rng.chisquare(df - i, size=n))
    if m > 1:
        rows, cols = np.tril_indices(m, -1)
        L[:, rows, cols] = rng.standard_normal((n, rows.size))
    return L @ np.swapaxes(L, 1, 2)


def _inv_sqrt(S: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(S)
    return (v * w[:, None, :] ** -0.5) @ np.swapaxes(v, 1, 2)


def _sym(X: np.ndarray) -> np.ndarray:
    return 0.5 * (X + np.swapaxes(X, 1, 2))


def sample_beta_base(type_: int, m: int, a: float, b: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """Matrix-beta draws with h = 1.

    Type 1: (A+B)^(-1/2) A (A+B)^(-1/2); type 2: B^(-1/2) A B^(-1/2), with
    A ~ W(2a, I) and B ~ W(2b, I) independent.
    """
    if type_ not in (1, 2):
        raise ValueError("base type must be 1 or 2")
    A = sample_wishart(2.0 * a, m, n, rng)
    B = sample_wishart(2.0 * b, m, n, rng)
    if m == 1:
        return A / (A + B) if type_ == 1 else A / B
    R = _inv_sqrt(A + B if type_ == 1 else B)
    return _sym(R @ A @ R)


def sample_haar(m: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar orthogonal matrices from QR of Gaussian matrices, sign-fixed."""
    Z = rng.standard_normal((n, m, m))
    Q, R = np.linalg.qr(Z)
    d = np.sign(np.diagonal(R, axis1=1, axis2=2))
    d[d == 0] = 1.0
    return Q * d[:, None, :]


BASES = ("matched", "plain")


def _check_base(base: str) -> None:
    if base not in BASES:
        raise ValueError(f"base must be one of {BASES}")


def _base_kernel_type(params: MbgParams, base: str) -> int:
    kt = params.family.kernel_type
    return 1 if (kt == 3 and base == "plain") else kt


def log_base_integral(params: MbgParams, base: str = "matched") -> float:
    """log of the integral of the base kernel."""
    out = mv_beta(params.a, params.b, params.m)
    if _base_kernel_type(params, base) == 3:
        out -= params.m * params.a * math.log(2.0)
    return out


def _log_kernel_no_h(params: MbgParams, eigs: np.ndarray) -> np.ndarray:
    a, b, p = params.a, params.b, params.p
    kt = params.family.kernel_type
    out = (a - p) * np.sum(np.log(eigs), axis=-1)
    if kt != 2:
        out = out + (b - p) * np.sum(np.log1p(-eigs), axis=-1)
    if kt != 1:
        out = out - (a + b) * np.sum(np.log1p(eigs), axis=-1)
    return out


def _log_weight(params: MbgParams, X: np.ndarray, eigs: np.ndarray, base: str = "matched") -> np.ndarray:
    hv = np.asarray(params.h(_h_argument(params, X, eigs)), dtype=float)
    if np.any(hv <= 0):
        raise DensityUndefinedError("generator is non-positive at a sampled point")
    lw = np.log(hv)
    if params.family.kernel_type == 3 and base == "plain":
        lw = lw - (params.a + params.b) * np.sum(np.log1p(eigs), axis=-1)
    return lw


def sample_type3_base(m: int, a: float, b: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """Type-3 draws with h = 1: U (2I - U)^(-1) for U a type-1 matrix beta."""
    U = sample_beta_base(1, m, a, b, n, rng)
    if m == 1:
        return U / (2.0 - U)
    w, v = np.linalg.eigh(U)
    return _sym((v * (w / (2.0 - w))[:, None, :]) @ np.swapaxes(v, 1, 2))


def draw_base(params: MbgParams, n: int, rng: np.random.Generator, base: str = "matched"):
    """Base draws with eigenvalues, shapes (n, m, m) and (n, m)."""
    kt = _base_kernel_type(params, base)
    if kt == 3:
        X = sample_type3_base(params.m, params.a, params.b, n, rng)
    else:
        X = sample_beta_base(kt, params.m, params.a, params.b, n, rng)
    return X, np.linalg.eigvalsh(X)


def _run_chunks(params: MbgParams, n: int, seed: int, threads: int, per_chunk: Callable, base: str = "matched"):
    sizes = [CHUNK_SIZE] * (n // CHUNK_SIZE)
    if n % CHUNK_SIZE:
        sizes.append(n % CHUNK_SIZE)

    def job(item):
        idx, size = item
        X, eigs = draw_base(params, size, chunk_rng(seed, idx), base)
        return per_chunk(X, eigs)

    items = list(enumerate(sizes))
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(job, items))
    return [job(it) for it in items]


# --------------------------------------------------------------------------
# estimators
# --------------------------------------------------------------------------


def _functional(kind: str, params: MbgParams, **kw) -> Callable:
    if kind == "det_moment":
        r = float(kw.get("r", 1.0))
        return lambda X, e: np.exp(r * np.sum(np.log(e), axis=-1))
    if kind == "mgf":
        T = np.asarray(kw["T"], dtype=float)
        if T.shape != (params.m, params.m):
            raise DomainError("T must be m x m")
        return lambda X, e: np.exp(np.einsum("ij,nji->n", T, X))
    if kind == "cdf":
        Y = np.asarray(kw["Y"], dtype=float)
        if Y.shape != (params.m, params.m):
            raise DomainError("Y must be m x m")
        return lambda X, e: (np.linalg.eigvalsh(Y[None] - X)[:, 0] > 0).astype(float)
    if kind == "mean_matrix":
        return lambda X, e: X.reshape(len(X), -1)
    raise ValueError(f"unknown functional {kind!r}")


def _ess(w: np.ndarray) -> float:
    s = w.sum()
    return float(s * s / np.sum(w * w)) if s > 0 else 0.0


def _check_ess(ess: float, n: int) -> None:
    if not ess >= ESS_MIN:
        raise EstimatorUnreliableError(f"effective sample size {ess:.3g} is degenerate")
    if ess < ESS_WARN_FRACTION * n:
        warnings.warn(f"effective sample size {ess:.3g} below {ESS_WARN_FRACTION:g} n", RuntimeWarning)


def is_estimate(params: MbgParams, functional: str, n: int, seed: int = 0, *, threads: int = 1,
                base: str = "matched", **kw) -> McEstimate:
    """Importance-sampling estimate of a functional of the target law.

    ``norm_const`` returns the mean weight, i.e. the kernel integral divided
    by the base integral ``exp(log_base_integral(params, base))``.  ``entropy_shannon`` estimates its own constant from the
    same draws.  ``det_moment`` (``r``), ``mgf`` (``T``), ``cdf`` (``Y``)
    and ``mean_matrix`` are self-normalized.
    """
    _check_base(base)
    n = int(n)
    if n < 2:
        raise ValueError("need at least two samples")
    if functional == "norm_const":
        parts = _run_chunks(params, n, seed, threads, lambda X, e: _log_weight(params, X, e, base), base)
        lw = np.concatenate(parts)
        shift = float(lw.max())
        w = np.exp(lw - shift)
        ess = _ess(w)
        _check_ess(ess, n)
        scale = math.exp(shift)
        return McEstimate(float(w.mean()) * scale, float(w.std(ddof=1) / math.sqrt(n)) * scale, n, ess, seed, functional)

    if functional == "entropy_shannon":
        def chunk(X, e):
            lw = _log_weight(params, X, e, base)
            lh = lw if base == "matched" or params.family.kernel_type != 3 else np.log(
                params.h(_h_argument(params, X, e)))
            return np.stack([lw, _log_kernel_no_h(params, e) + lh])

        lw, lk = np.concatenate(_run_chunks(params, n, seed, threads, chunk, base), axis=1)
        shift = float(lw.max())
        w = np.exp(lw - shift)
        ess = _ess(w)
        _check_ess(ess, n)
        wbar = float(w.mean())
        mean_lk = float(np.sum(w * lk) / np.sum(w))
        log_z = log_base_integral(params, base) + math.log(wbar) + shift
        value = log_z - mean_lk
        u = w / wbar
        infl = u * (1.0 - (lk - mean_lk)) - 1.0
        return McEstimate(value, float(infl.std(ddof=1) / math.sqrt(n)), n, ess, seed, functional)

    g = _functional(functional, params, **kw)

    def chunk(X, e):
        return _log_weight(params, X, e, base), g(X, e)

    parts = _run_chunks(params, n, seed, threads, chunk, base)
    lw = np.concatenate([p[0] for p in parts])
    gv = np.concatenate([p[1] for p in parts], axis=0)
    w = np.exp(lw - lw.max())
    ess = _ess(w)
    _check_ess(ess, n)
    sw = w.sum()
    if gv.ndim == 1:
        mu = float(np.sum(w * gv) / sw)
        se = float(math.sqrt(np.sum((w * (gv - mu)) ** 2)) / sw)
    else:
        mu_v = (w @ gv) / sw
        se_v = np.sqrt(np.sum((w[:, None] * (gv - mu_v)) ** 2, axis=0)) / sw
        mu = mu_v.reshape(params.m, params.m)
        se = se_v.reshape(params.m, params.m)
    return McEstimate(mu, se, n, ess, seed, functional)


@dataclass(frozen=True)
class DetHistogram:
    edges: np.ndarray
    density: np.ndarray
    moments: dict
    effective_sample_size: float
    n_samples: int
    seed: int


def det_histogram(params: MbgParams, n: int, bins: int = 50, seed: int = 0, *, threads: int = 1,
                  range_: tuple[float, float] | None = None, orders=(1, 2, 3),
                  base: str = "matched") -> DetHistogram:
    """Weighted histogram of det(X) plus self-normalized E[det X^r]."""
    _check_base(base)

    def chunk(X, e):
        return _log_weight(params, X, e, base), np.prod(e, axis=-1)

    parts = _run_chunks(params, n, seed, threads, chunk, base)
    lw = np.concatenate([p[0] for p in parts])
    d = np.concatenate([p[1] for p in parts])
    w = np.exp(lw - lw.max())
    ess = _ess(w)
    _check_ess(ess, n)
    if range_ is None:
        if params.family.bounded:
            range_ = (0.0, 1.0)
        else:
            order = np.argsort(d)
            cw = np.cumsum(w[order]) / w.sum()
            range_ = (0.0, float(d[order][np.searchsorted(cw, 0.995)]))
    mass, edges = np.histogram(d, bins=bins, range=range_, weights=w)
    density = mass / (w.sum() * np.diff(edges))
    sw = w.sum()
    moments = {}
    for r in orders:
        g = d**r
        mu = float(np.sum(w * g) / sw)
        se = float(math.sqrt(np.sum((w * (g - mu)) ** 2)) / sw)
        moments[r] = McEstimate(mu, se, n, ess, seed, f"det_moment(r={r})")
    return DetHistogram(edges, density, moments, ess, n, seed)


def ks_distance(samples, cdf: Callable, weights=None) -> float:
    """Kolmogorov-Smirnov distance between a (weighted) sample and a CDF."""
    x = np.asarray(samples, dtype=float).reshape(-1)
    order = np.argsort(x)
    x = x[order]
    w = np.ones_like(x) if weights is None else np.asarray(weights, dtype=float).reshape(-1)[order]
    cw = np.cumsum(w) / w.sum()
    lower = np.concatenate([[0.0], cw[:-1]])
    F = np.asarray(cdf(x), dtype=float)
    return float(max(np.max(np.abs(cw - F)), np.max(np.abs(F - lower))))


def rejection_sample(params: MbgParams, n: int, h_sup: float, seed: int = 0, *, max_rounds: int = 1000) -> np.ndarray:
    """Exact draws from the target when sup h over the trace range is known.

    With the matched base the weight is h itself, so h_sup bounds it.
    """
    if not h_sup > 0:
        raise DomainError("h_sup must be positive")
    log_bound = math.log(h_sup)
    out, got, chunk = [], 0, 0
    while got < n:
        if chunk >= max_rounds:
            raise EstimatorUnreliableError("rejection sampler acceptance too low")
        rng = chunk_rng(seed, chunk)
        X, e = draw_base(params, CHUNK_SIZE, rng)
        lw = _log_weight(params, X, e)
        if np.any(lw > log_bound + 1e-12):
            raise DomainError("h_sup is not an upper bound of the weights")
        keep = np.log(rng.random(len(lw))) < lw - log_bound
        out.append(X[keep])
        got += int(keep.sum())
        chunk += 1
    return np.concatenate(out)[:n]
