"""Distribution objects: support, log-densities, transforms, eigenvalues."""

from __future__ import annotations

import json
import math
import threading
import warnings
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy import integrate

from . import series
from .errors import ConvergenceError, DensityUndefinedError, DomainError, SupportError
from .families import Family
from .generator import GeneratorH, exp_neg, parse_generator
from .mvgamma import mv_beta, mv_gamma
from .zonal import SymMatrix, _identity_values, as_sym, build_table

__all__ = [
    "PD_TOL",
    "MbgParams",
    "NormConst",
    "TransformParams",
    "in_support",
    "log_density",
    "log_kernel_batch",
    "transform_density",
    "transform_sample",
    "linear_transform",
    "eigen_log_density",
    "kummer",
    "cdf_univariate",
]

PD_TOL = 1e-12
DEFAULT_MC_SAMPLES = 10**6


@dataclass(frozen=True)
class NormConst:
    """log zeta = -log(integral of the kernel), with how it was obtained."""

    log_zeta: float
    route: str
    diagnostics: Any = None


@dataclass(eq=False)
class MbgParams:
    """Parameters of one member of the family.

    The normalizing constant is resolved lazily, once, on first use: by
    series when one is available for the family and generator, otherwise
    by importance sampling with ``mc_samples`` draws from ``mc_seed``.
    """

    family: Family
    m: int
    a: float
    b: float
    Phi: SymMatrix
    h: GeneratorH
    truncation: int | None = None
    mc_samples: int = DEFAULT_MC_SAMPLES
    mc_seed: int = 0
    _norm: NormConst | None = field(default=None, init=False, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False)
    _eigen_cache: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        self.family = Family.coerce(self.family)
        self.m = int(self.m)
        self.a = float(self.a)
        self.b = float(self.b)
        if np.ndim(self.Phi) == 0 and not isinstance(self.Phi, SymMatrix):
            self.Phi = SymMatrix.scalar(float(self.Phi), self.m)
        self.Phi = as_sym(self.Phi)
        if self.Phi.m != self.m:
            raise DomainError(f"Phi has dimension {self.Phi.m}, expected m={self.m}")
        lo = (self.m - 1) / 2.0
        if not (self.a > lo and self.b > lo):
            raise DomainError(f"a and b must exceed (m-1)/2 = {lo:g}; got a={self.a:g}, b={self.b:g}")

    @property
    def p(self) -> float:
        return (self.m + 1) / 2.0

    # -- normalizing constant ------------------------------------------------

    def norm_const(self) -> NormConst:
        if self._norm is None:
            with self._lock:
                if self._norm is None:
                    self._norm = self._resolve()
        return self._norm

    @property
    def log_norm_const(self) -> float:
        return self.norm_const().log_zeta

    def series_available(self) -> bool:
        f = self.family
        if f.kernel_type == 3 and not f.det_argument:
            return self.Phi.is_scalar()
        if f.kernel_type == 2:
            return self.h.is_polynomial
        return True

    def _resolve(self) -> NormConst:
        if self.series_available():
            try:
                sv = series.normalizing_integral(self.family, self.a, self.b, self.Phi, self.h, self.truncation)
            except series.FormalSeriesError:
                pass
            else:
                if sv.sign <= 0:
                    raise ConvergenceError("series normalizing integral is not positive")
                if not sv.converged:
                    warnings.warn(
                        f"normalizing series not converged at T={sv.truncation_degree}", RuntimeWarning
                    )
                return NormConst(-sv.log_abs, "series", sv)
        from .montecarlo import is_estimate, log_base_integral

        est = is_estimate(self, "norm_const", self.mc_samples, seed=self.mc_seed)
        if not est.value > 0:
            raise ConvergenceError("Monte Carlo normalizing integral is not positive")
        log_z = math.log(est.value) + log_base_integral(self)
        return NormConst(-log_z, "mc", est)

    def set_norm_const(self, nc: NormConst) -> None:
        with self._lock:
            self._norm = nc

    # -- serialization ---------------------------------------------------------

    def to_dict(self) -> dict:
        if self.h.spec is None:
            raise ValueError("generator has no spec string; cannot serialize")
        return {
            "family": self.family.value,
            "m": self.m,
            "a": self.a,
            "b": self.b,
            "phi": self.Phi.array.reshape(-1).tolist(),
            "h": self.h.spec,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict, **kw) -> "MbgParams":
        m = int(d["m"])
        phi = np.asarray(d["phi"], dtype=float)
        if phi.ndim == 0:
            phi = phi * np.eye(m)
        elif phi.ndim == 1:
            if phi.size != m * m:
                raise ValueError(f"phi needs {m * m} row-major entries, got {phi.size}")
            phi = phi.reshape(m, m)
        return cls(Family.coerce(d["family"]), m, d["a"], d["b"], SymMatrix(phi), parse_generator(d["h"]), **kw)

    @classmethod
    def from_json(cls, text: str, **kw) -> "MbgParams":
        return cls.from_dict(json.loads(text), **kw)


# --------------------------------------------------------------------------
# kernels and densities
# --------------------------------------------------------------------------


def _check_dim(params: MbgParams, X: SymMatrix) -> None:
    if X.m != params.m:
        raise DomainError(f"argument has dimension {X.m}, expected {params.m}")


def in_support(params: MbgParams, X) -> bool:
    X = as_sym(X)
    _check_dim(params, X)
    eig = X.eigenvalues
    if eig[-1] <= PD_TOL:
        return False
    if params.family.bounded and 1.0 - eig[0] <= PD_TOL:
        return False
    return True


def _h_argument(params: MbgParams, X: np.ndarray, eigs: np.ndarray) -> np.ndarray:
    """tr(Phi X) or det(Phi X) for a stack of matrices."""
    if params.family.det_argument:
        return float(np.prod(params.Phi.eigenvalues)) * np.prod(eigs, axis=-1)
    return np.einsum("ij,...ji->...", params.Phi.array, X)


def log_kernel_batch(params: MbgParams, X: np.ndarray, eigs: np.ndarray | None = None) -> np.ndarray:
    """Unnormalized log-density for a stack of in-support matrices."""
    X = np.asarray(X, dtype=float)
    if eigs is None:
        eigs = np.linalg.eigvalsh(X)
    a, b, p = params.a, params.b, params.p
    kt = params.family.kernel_type
    out = (a - p) * np.sum(np.log(eigs), axis=-1)
    if kt != 2:
        out = out + (b - p) * np.sum(np.log1p(-eigs), axis=-1)
    if kt != 1:
        out = out - (a + b) * np.sum(np.log1p(eigs), axis=-1)
    hv = np.asarray(params.h(_h_argument(params, X, eigs)), dtype=float)
    if np.any(hv <= 0):
        raise DensityUndefinedError("generator is non-positive at the argument")
    return out + np.log(hv)


def log_density(params: MbgParams, X) -> float:
    """Normalized log-density at X."""
    X = as_sym(X)
    if not in_support(params, X):
        raise SupportError("argument outside the support")
    lk = log_kernel_batch(params, X.array[None], X.eigenvalues[None])[0]
    return float(lk + params.log_norm_const)


@dataclass(frozen=True)
class TransformParams:
    """Y = (Omega - Psi)^(1/2) X (Omega - Psi)^(1/2) + Psi."""

    Psi: SymMatrix
    Omega: SymMatrix

    def __post_init__(self):
        object.__setattr__(self, "Psi", as_sym(self.Psi))
        object.__setattr__(self, "Omega", as_sym(self.Omega))
        if self.Psi.m != self.Omega.m:
            raise DomainError("Psi and Omega differ in dimension")
        if self.diff.eigenvalues[-1] <= PD_TOL:
            raise DomainError("Omega - Psi must be positive definite")

    @property
    def diff(self) -> SymMatrix:
        return SymMatrix(self.Omega.array - self.Psi.array)

    @property
    def scale(self) -> np.ndarray:
        return self.diff.power(0.5)

    @property
    def inv_scale(self) -> np.ndarray:
        return self.diff.power(-0.5)


def transform_sample(tp: TransformParams, X: np.ndarray) -> np.ndarray:
    """Map a matrix or stack of matrices X to Y."""
    s = tp.scale
    return s @ np.asarray(X) @ s + tp.Psi.array


def _pullback(tp: TransformParams, Y) -> SymMatrix:
    r = tp.inv_scale
    x = r @ (as_sym(Y).array - tp.Psi.array) @ r
    return SymMatrix(0.5 * (x + x.T), rtol=1e-8)


def transform_density(params: MbgParams, tp: TransformParams, Y) -> float:
    """Log-density of Y at Y, by pulling back to X and adding the Jacobian."""
    X = _pullback(tp, Y)
    if not in_support(params, X):
        raise SupportError("Y outside the transformed support")
    return log_density(params, X) - params.p * tp.diff.logdet()


def linear_transform(params: MbgParams, A) -> tuple[MbgParams, TransformParams]:
    """Law of A X A' for nonsingular A.

    With the polar split A = (A A')^(1/2) Q, A X A' is the transform with
    Psi = 0, Omega = A A' of Q X Q', whose law is the same family with
    Phi replaced by Q Phi Q'.
    """
    A = np.asarray(A, dtype=float)
    if A.shape != (params.m, params.m) or abs(np.linalg.det(A)) == 0.0:
        raise DomainError("A must be a nonsingular m x m matrix")
    omega = SymMatrix(A @ A.T, rtol=1e-10)
    q = omega.power(-0.5) @ A
    phi = q @ params.Phi.array @ q.T
    moved = MbgParams(params.family, params.m, params.a, params.b, SymMatrix(0.5 * (phi + phi.T)),
                      params.h, params.truncation, params.mc_samples, params.mc_seed)
    if params._norm is not None:
        # the constant depends on Phi only through its eigenvalues
        moved.set_norm_const(params._norm)
    return moved, TransformParams(SymMatrix(np.zeros((params.m, params.m))), omega)


# --------------------------------------------------------------------------
# eigenvalues
# --------------------------------------------------------------------------

def _eigen_weights(params: MbgParams, T: int):
    """Per-degree vectors a_k C_kappa(Phi) / C_kappa(I), cached on params."""
    hit = params._eigen_cache.get(T)
    if hit is not None:
        return hit
    m = params.m
    coeffs = params.h.coeffs(T)
    eig_phi = params.Phi.eigenvalues
    out = []
    for k, c in enumerate(coeffs):
        table = build_table(k, m)
        if c == 0.0:
            out.append((table, None))
            continue
        ident = _identity_values(k, m)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = np.where(ident > 0, c * table.values(eig_phi) / ident, 0.0)
        out.append((table, v))
    params._eigen_cache[T] = out
    return out


def eigen_log_density(params: MbgParams, lambdas, T: int | None = None) -> float:
    """Log joint density of the ordered eigenvalues.

    The orthogonal average of h(tr Phi H L H') is the zonal sum
    sum_k a_k sum_kappa C_kappa(Phi) C_kappa(L) / C_kappa(I), truncated at
    T.  For a determinant argument the average is h(det Phi det L) itself.
    """
    lam = np.asarray(lambdas, dtype=float).reshape(-1)
    m = params.m
    if lam.size != m:
        raise DomainError(f"expected {m} eigenvalues")
    if m > 1 and not np.all(np.diff(lam) < 0):
        raise DomainError("eigenvalues must be strictly decreasing")
    if lam[-1] <= 0 or (params.family.bounded and lam[0] >= 1):
        raise SupportError("eigenvalues outside the support")
    T = series.DEFAULT_T if T is None else T
    a, b, p = params.a, params.b, params.p
    kt = params.family.kernel_type
    out = params.log_norm_const
    out += m * m / 2.0 * math.log(math.pi) - mv_gamma(m / 2.0, m)
    for i in range(m):
        for j in range(i + 1, m):
            out += math.log(lam[i] - lam[j])
    out += (a - p) * float(np.sum(np.log(lam)))
    if kt != 2:
        out += (b - p) * float(np.sum(np.log1p(-lam)))
    if kt != 1:
        out -= (a + b) * float(np.sum(np.log1p(lam)))
    if params.family.det_argument:
        avg = float(params.h(float(np.prod(params.Phi.eigenvalues)) * float(np.prod(lam))))
    else:
        parts = []
        for table, v in _eigen_weights(params, T):
            if v is not None:
                parts.append(math.fsum((v * table.values(lam)).tolist()))
        avg = math.fsum(parts)
    if not avg > 0:
        raise DensityUndefinedError("orthogonal average of the generator is not positive")
    return out + math.log(avg)


# --------------------------------------------------------------------------
# constructors and univariate helpers
# --------------------------------------------------------------------------


def kummer(type_: int, m: int, a: float, b: float, Phi, *, T: int | None = None,
           rtol: float = 1e-8, **kw) -> MbgParams:
    """Kummer-beta law: h(x) = exp(-x).

    For type 1 the constant is computed twice, as the zonal series and as
    B_m(a, b) 1F1(a; a+b; -Phi); the two must agree to ``rtol``.
    """
    type_ = int(type_)
    if type_ not in (1, 2, 3):
        raise ValueError("Kummer type must be 1, 2 or 3")
    phi = SymMatrix.scalar(float(Phi), m) if np.ndim(Phi) == 0 and not isinstance(Phi, SymMatrix) else as_sym(Phi)
    params = MbgParams(Family(f"MBG{type_}"), m, a, b, phi, exp_neg(), truncation=T, **kw)
    if type_ == 1:
        T = series.DEFAULT_T if T is None else T
        sv = series.constant_type1(a, b, phi, params.h, T)
        f11 = series.hypergeom_1f1_matrix(a, a + b, SymMatrix(-phi.array), T)
        log_alt = mv_beta(a, b, m) + f11.log_value
        gap = abs(math.expm1(sv.log_value - log_alt))
        if gap > rtol:
            raise ConvergenceError(f"Kummer constant routes disagree (relative gap {gap:.3g})")
        params.set_norm_const(NormConst(-sv.log_value, "series", {"zonal": sv, "hypergeometric": f11, "gap": gap}))
    return params


def cdf_univariate(params: MbgParams, y: float) -> float:
    """P(X <= y) for m = 1 by adaptive quadrature of the density."""
    if params.m != 1:
        raise DomainError("univariate CDF needs m = 1")
    if y <= 0:
        return 0.0
    if params.family.bounded and y >= 1:
        return 1.0

    def f(x):
        return math.exp(log_density(params, [[x]]))

    pts = [0.0, y]
    val, _ = integrate.quad(f, *pts, limit=200, epsabs=1e-14, epsrel=1e-12)
    return val
