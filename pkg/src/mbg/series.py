"""Truncated zonal series for constants, moments and entropies.

All three kernel types reduce to one integral,

    K(alpha, beta, gamma) = int det(X)^(alpha-p) det(I-X)^(beta-p)
                                det(I+X)^(-gamma) g(tr Phi X) dX,

with p = (m+1)/2, where type 1 drops the det(I+X) factor, type 2 drops
det(I-X) and integrates over X > 0, and type 3 keeps all three on
0 < X < I.  Normalizing constants, determinant moments and Renyi
integrals are K at shifted exponents, with g = h or g = h**nu.

Type 3 is expanded around X = I: with Y = I - X,
det(I+X)^(-gamma) = 2^(-m gamma) det(I - Y/2)^(-gamma), whose zonal
series converges geometrically on the whole support.  The generator is
re-expanded at tr(Phi X) = phi*m and products C_kappa(Y) (tr Y)^s are
linearized in the zonal basis.  Only scalar Phi = phi I admits this
route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import integrate
from scipy.special import gammaln

from .errors import ConvergenceError, DensityUndefinedError, DomainError, PoleError
from .families import Family
from .generator import GeneratorH, constant_one, power_coeffs, series_power, taylor_shift
from .mvgamma import mv_beta, mv_gamma
from .partitions import log_gen_pochhammer
from .zonal import SymMatrix, _identity_values, as_sym, build_table, trace_power_product

__all__ = [
    "DEFAULT_T",
    "DEFAULT_T_TYPE3",
    "SeriesValue",
    "EntropyValue",
    "FormalSeriesError",
    "kernel_integral",
    "normalizing_integral",
    "constant_type1",
    "constant_type2",
    "constant_type3_scalar",
    "det_generator_constant",
    "det_moment",
    "renyi_entropy",
    "shannon_entropy",
    "hypergeom_pfq_matrix",
    "hypergeom_1f1_matrix",
]

DEFAULT_T = 30
DEFAULT_T_TYPE3 = 40
REL_TOL = 1e-10
TAIL_RATIO_CAP = 0.99


class FormalSeriesError(DomainError):
    """A type-2 series needs terms whose defining integrals diverge."""


@dataclass(frozen=True)
class SeriesValue:
    """A truncated series with its diagnostics.

    ``value`` is the linear sum; ``log_abs`` and ``sign`` carry the same
    number in signed-log form and stay finite when ``value`` overflows.
    """

    value: float
    log_abs: float
    sign: int
    truncation_degree: int
    per_degree_sums: tuple[float, ...] = field(repr=False)
    tail_estimate: float
    converged: bool
    formal: bool = False

    @property
    def log_value(self) -> float:
        if self.sign <= 0:
            raise DomainError("log of a non-positive series value")
        return self.log_abs


@dataclass(frozen=True)
class EntropyValue:
    value: float
    error_estimate: float
    method: str


def _tail_and_convergence(per: Sequence[float], total: float, rel_tol: float) -> tuple[float, bool]:
    mags = [abs(v) for v in per]
    if not mags:
        return 0.0, True
    last = mags[-1]
    if len(mags) >= 2:
        prev = mags[-2]
        if prev == 0.0:
            ratio = 0.0 if last == 0.0 else TAIL_RATIO_CAP
        else:
            ratio = min(last / prev, TAIL_RATIO_CAP)
    else:
        ratio = 0.0 if last == 0.0 else TAIL_RATIO_CAP
    tail = last * ratio / (1.0 - ratio)
    monotone = all(mags[i] >= mags[i + 1] for i in range(max(0, len(mags) - 3), len(mags) - 1))
    converged = last <= rel_tol * abs(total) and monotone
    return tail, converged


def _safe_exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def _finalize(
    degree_terms: Sequence[tuple[np.ndarray, np.ndarray]],
    log_prefactor: float = 0.0,
    rel_tol: float = REL_TOL,
    formal: bool = False,
) -> SeriesValue:
    """Sum per-degree signed-log terms with compensated summation."""
    finite = [l for _, logs in degree_terms for l in logs if np.isfinite(l)]
    shift = max(finite) if finite else 0.0
    per = [
        math.fsum((s * np.exp(l - shift)).tolist()) if len(l) else 0.0
        for s, l in degree_terms
    ]
    total = math.fsum(per)
    tail, converged = _tail_and_convergence(per, total, rel_tol)
    scale = shift + log_prefactor
    factor = _safe_exp(scale)
    if total == 0.0:
        sign, log_abs = 0, -math.inf
    else:
        sign, log_abs = (1 if total > 0 else -1), math.log(abs(total)) + scale
    return SeriesValue(
        value=total * factor if total else 0.0,
        log_abs=log_abs,
        sign=sign,
        truncation_degree=len(degree_terms) - 1,
        per_degree_sums=tuple(v * factor for v in per),
        tail_estimate=tail * factor,
        converged=converged and not formal,
        formal=formal,
    )


def _to_signed_logs(values: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    v = np.asarray(values, dtype=float)
    v = v[v != 0.0]
    with np.errstate(divide="ignore"):
        return np.sign(v), np.log(np.abs(v))


def _empty():
    return np.zeros(0), np.zeros(0)


def _coerce_phi(Phi, m: int | None = None) -> SymMatrix:
    if np.ndim(Phi) == 0 and not isinstance(Phi, SymMatrix):
        if m is None:
            raise ValueError("scalar Phi needs an explicit dimension")
        return SymMatrix.scalar(float(Phi), m)
    return as_sym(Phi)


# --------------------------------------------------------------------------
# kernel integrals
# --------------------------------------------------------------------------


def _type1_terms(alpha, beta, phi: SymMatrix, coeffs):
    m = phi.m
    eigs = phi.eigenvalues
    out = []
    for t, c in enumerate(coeffs):
        if c == 0.0:
            out.append(_empty())
            continue
        table = build_table(t, m)
        signs, logs = [], []
        for tau, cv in zip(table.partitions, table.values(eigs)):
            w = c * cv
            if w == 0.0:
                continue
            sa, la = log_gen_pochhammer(alpha, tau)
            if sa == 0:
                continue
            sb, lb = log_gen_pochhammer(alpha + beta, tau)
            if sb == 0:
                raise PoleError(f"(alpha+beta)_kappa vanishes at kappa={tuple(tau)}")
            signs.append(math.copysign(1.0, w) * sa * sb)
            logs.append(math.log(abs(w)) + la - lb)
        out.append((np.array(signs), np.array(logs)))
    return out, mv_beta(alpha, beta, m)


def _type2_terms(alpha, beta, phi: SymMatrix, coeffs, allow_formal: bool):
    """beta is the effective second shape gamma - alpha."""
    m = phi.m
    p = (m + 1) / 2.0
    eigs = phi.eigenvalues
    out = []
    formal = False
    used = 0
    for t, c in enumerate(coeffs):
        if c == 0.0:
            out.append(_empty())
            continue
        table = build_table(t, m)
        signs, logs = [], []
        for tau, cv in zip(table.partitions, table.values(eigs)):
            w = c * cv
            if w == 0.0:
                continue
            if not beta - (tau[0] if tau else 0) > (m - 1) / 2.0:
                if not allow_formal:
                    raise FormalSeriesError(
                        f"type-2 term kappa={tuple(tau)} needs b - kappa_1 > (m-1)/2 "
                        f"(b={beta:g}); the generator series is not admissible here"
                    )
                formal = True
                continue
            sa, la = log_gen_pochhammer(alpha, tau)
            if sa == 0:
                continue
            sb, lb = log_gen_pochhammer(p - beta, tau)
            if sb == 0:
                raise PoleError(f"pole of Gamma_m(b, -kappa) at kappa={tuple(tau)}")
            sgn = math.copysign(1.0, w) * sa * sb * (-1.0) ** t
            signs.append(sgn)
            logs.append(math.log(abs(w)) + la - lb)
            used += 1
        out.append((np.array(signs), np.array(logs)))
    if used == 0 and formal:
        raise FormalSeriesError("every retained type-2 term is invalid")
    return out, mv_beta(alpha, beta, m), formal


def _type3_terms(alpha, beta, gamma, m: int, shifted_coeffs, phi: float, T: int):
    """Reflected expansion; shifted_coeffs are those of y -> g(phi*m + y)."""
    out = []
    for n in range(T + 1):
        table = build_table(n, m)
        ident = _identity_values(n, m)
        weights = np.empty(len(table.partitions))
        for i, rho in enumerate(table.partitions):
            sb, lb = log_gen_pochhammer(beta, rho)
            sab, lab = log_gen_pochhammer(alpha + beta, rho)
            if sab == 0:
                raise PoleError(f"(alpha+beta)_rho vanishes at rho={tuple(rho)}")
            weights[i] = 0.0 if sb == 0 else sb * sab * math.exp(lb - lab) * ident[i]
        terms = []
        for k in range(n + 1):
            s = n - k
            bs = shifted_coeffs[s] if s < len(shifted_coeffs) else 0.0
            if bs == 0.0:
                continue
            gs = bs * (-phi) ** s if s else bs
            if gs == 0.0:
                continue
            lk = -k * math.log(2.0) - gammaln(k + 1)
            for kappa in build_table(k, m).partitions:
                sg, lg = log_gen_pochhammer(gamma, kappa)
                if sg == 0:
                    continue
                coef = sg * math.exp(lg + lk) * gs
                prod = trace_power_product(tuple(kappa), s, m)
                terms.append(coef * float(prod @ weights))
        out.append(_to_signed_logs(terms))
    return out, mv_beta(alpha, beta, m) - m * gamma * math.log(2.0)



def _shape_check(alpha: float, beta: float, m: int, what: str) -> None:
    if not alpha > (m - 1) / 2.0 or not beta > (m - 1) / 2.0:
        raise DomainError(
            f"{what}: shape arguments ({alpha:g}, {beta:g}) must exceed (m-1)/2={(m - 1) / 2:g}"
        )


def _trace_coeffs(h: GeneratorH, nu: float, T: int) -> np.ndarray:
    return h.coeffs(T) if nu == 1.0 else power_coeffs(h, nu, T)


def _shifted_coeffs(h: GeneratorH, x0: float, nu: float, T: int) -> np.ndarray:
    b = taylor_shift(h.coeff, x0, T, degree=h.degree)
    if nu != 1.0:
        if b[0] <= 0.0 and nu != int(nu):
            raise DensityUndefinedError(f"h({x0:g}) <= 0; h**nu not expandable there")
        b = series_power(b, nu, T)
    return b


def _det_terms(kind: int, alpha, beta, gamma, phi: SymMatrix, coeffs, allow_formal: bool, T3: int):
    m = phi.m
    detphi = float(np.prod(phi.eigenvalues))
    out = []
    formal = False
    inner_ok = True
    for t, c in enumerate(coeffs):
        w = c * detphi**t if t else c
        if w == 0.0:
            out.append(_empty())
            continue
        if kind == 1:
            _shape_check(alpha + t, beta, m, "det-generator kind 1")
            sgn, lg = math.copysign(1.0, w), math.log(abs(w)) + mv_beta(alpha + t, beta, m)
        elif kind == 2:
            b2 = gamma - alpha - t
            if not b2 > (m - 1) / 2.0:
                if not allow_formal:
                    raise FormalSeriesError(
                        f"det-generator kind 2 term t={t} needs b - t > (m-1)/2 (b - t = {b2:g})"
                    )
                formal = True
                out.append(_empty())
                continue
            sgn, lg = math.copysign(1.0, w), math.log(abs(w)) + mv_beta(alpha + t, b2, m)
        else:
            terms, pref = _type3_terms(alpha + t, beta, gamma, m, np.array([1.0]), 0.0, T3)
            inner = _finalize(terms, pref)
            inner_ok &= inner.converged
            sgn, lg = math.copysign(1.0, w) * inner.sign, math.log(abs(w)) + inner.log_abs
        out.append((np.array([sgn]), np.array([lg])))
    if formal and all(len(s) == 0 for s, _ in out):
        raise FormalSeriesError("every retained det-generator term is invalid")
    return out, formal, inner_ok


def kernel_integral(
    family,
    alpha: float,
    beta: float,
    gamma: float,
    Phi,
    h: GeneratorH,
    T: int | None = None,
    *,
    nu: float = 1.0,
    allow_formal: bool = False,
    rel_tol: float = REL_TOL,
) -> SeriesValue:
    """Integral of the type-specific kernel times h(.)**nu.

    ``beta`` is ignored for type 2 (the effective shape there is
    ``gamma - alpha``) and ``gamma`` for type 1.
    """
    family = Family.coerce(family)
    phi = as_sym(Phi)
    m = phi.m
    kt = family.kernel_type
    if T is None:
        T = DEFAULT_T_TYPE3 if kt == 3 else DEFAULT_T
    if family.det_argument:
        coeffs = _trace_coeffs(h, nu, T)
        terms, formal, inner_ok = _det_terms(
            kt, alpha, beta, gamma, phi, coeffs, allow_formal, DEFAULT_T_TYPE3
        )
        sv = _finalize(terms, 0.0, rel_tol, formal)
        if not inner_ok:
            sv = _replace(sv, converged=False)
        return sv
    if kt == 1:
        _shape_check(alpha, beta, m, "type-1 kernel")
        terms, pref = _type1_terms(alpha, beta, phi, _trace_coeffs(h, nu, T))
        return _finalize(terms, pref, rel_tol)
    if kt == 2:
        b_eff = gamma - alpha
        _shape_check(alpha, b_eff, m, "type-2 kernel")
        terms, pref, formal = _type2_terms(alpha, b_eff, phi, _trace_coeffs(h, nu, T), allow_formal)
        return _finalize(terms, pref, rel_tol, formal)
    _shape_check(alpha, beta, m, "type-3 kernel")
    if not phi.is_scalar():
        raise DomainError(
            "type-3 series needs a scalar Phi = phi*I; use the Monte Carlo estimator for general Phi"
        )
    ph = float(phi.array[0, 0])
    shifted = _shifted_coeffs(h, ph * m, nu, T)
    terms, pref = _type3_terms(alpha, beta, gamma, m, shifted, ph, T)
    return _finalize(terms, pref, rel_tol)


def _replace(sv: SeriesValue, **kw) -> SeriesValue:
    from dataclasses import replace

    return replace(sv, **kw)


def _family_exponents(family: Family, a: float, b: float, m: int, nu: float = 1.0, r: float = 0.0):
    p = (m + 1) / 2.0
    alpha = nu * (a - p) + p + r
    beta = nu * (b - p) + p
    gamma = nu * (a + b)
    return alpha, beta, gamma


def normalizing_integral(family, a, b, Phi, h: GeneratorH, T: int | None = None, *, allow_formal=False) -> SeriesValue:
    """1/zeta: the integral of the unnormalized density."""
    family = Family.coerce(family)
    phi = as_sym(Phi)
    alpha, beta, gamma = _family_exponents(family, a, b, phi.m)
    return kernel_integral(family, alpha, beta, gamma, phi, h, T, allow_formal=allow_formal)


def constant_type1(a, b, Phi, h: GeneratorH, T: int = DEFAULT_T) -> SeriesValue:
    """Inverse normalizing constant of MBG1."""
    return normalizing_integral(Family.MBG1, a, b, Phi, h, T)


def constant_type2(a, b, Phi, h: GeneratorH, T: int = DEFAULT_T, *, allow_formal: bool = False) -> SeriesValue:
    """Inverse normalizing constant of MBG2.

    Each term needs b - tau_1 > (m-1)/2.  With ``allow_formal`` the invalid
    terms are dropped and the result is flagged ``formal``.
    """
    return normalizing_integral(Family.MBG2, a, b, Phi, h, T, allow_formal=allow_formal)


def constant_type3_scalar(a, b, phi: float, h: GeneratorH, m: int, T: int = DEFAULT_T_TYPE3) -> SeriesValue:
    """Inverse normalizing constant of MBG3 with Phi = phi * I_m."""
    return normalizing_integral(Family.MBG3, a, b, SymMatrix.scalar(phi, m), h, T)


def det_generator_constant(kind: int, a, b, Phi, h: GeneratorH, T: int = DEFAULT_T, *, allow_formal=False) -> SeriesValue:
    """Inverse normalizing constant when h acts on det(Phi X).

    Kind 3 integrates det(I+X)^(-(a+b)) term by term, which is not the
    same as weighting B_m(a+t, b) by 2^(-m(a+t)).
    """
    family = Family(f"DETGEN{int(kind)}")
    return normalizing_integral(family, a, b, Phi, h, T, allow_formal=allow_formal)


def det_moment(family, a, b, Phi, h: GeneratorH, r: float, T: int | None = None) -> SeriesValue:
    """E[det(X)^r] as a ratio of two kernel integrals."""
    family = Family.coerce(family)
    phi = as_sym(Phi)
    m = phi.m
    alpha, beta, gamma = _family_exponents(family, a, b, m)
    if not alpha + r > (m - 1) / 2.0:
        raise DomainError(f"E[det X^r] needs a + r > (m-1)/2 (a + r = {a + r:g})")
    den = kernel_integral(family, alpha, beta, gamma, phi, h, T)
    if r == 0:
        num = den
    else:
        num = kernel_integral(family, alpha + r, beta, gamma, phi, h, T)
    return _ratio(num, den)


def _ratio(num: SeriesValue, den: SeriesValue) -> SeriesValue:
    if den.sign == 0:
        raise DomainError("zero denominator in series ratio")
    log_abs = num.log_abs - den.log_abs
    sign = num.sign * den.sign
    value = sign * _safe_exp(log_abs) if sign else 0.0
    rel = 0.0
    if num.sign:
        rel += num.tail_estimate / _safe_exp(num.log_abs)
    rel += den.tail_estimate / _safe_exp(den.log_abs)
    return SeriesValue(
        value=value,
        log_abs=log_abs,
        sign=sign,
        truncation_degree=max(num.truncation_degree, den.truncation_degree),
        per_degree_sums=tuple(v / den.value for v in num.per_degree_sums),
        tail_estimate=abs(value) * rel,
        converged=num.converged and den.converged,
        formal=num.formal or den.formal,
    )


def _renyi_admissible(family: Family, a: float, b: float, m: int) -> str:
    p = (m + 1) / 2.0
    lo, hi = 0.0, math.inf
    # nu (a - p) + p > (m-1)/2  <=>  nu (a - p) > -1
    if a < p:
        hi = min(hi, 1.0 / (p - a))
    if family.kernel_type == 2:
        # gamma' - alpha' = nu (b + p) - p > (m-1)/2
        lo = max(lo, m / (b + p))
    elif b < p:
        hi = min(hi, 1.0 / (p - b))
    return f"({lo:g}, {hi:g})"


def renyi_entropy(family, a, b, Phi, h: GeneratorH, nu: float, T: int | None = None) -> float:
    """Renyi entropy of order nu (nu > 0, nu != 1)."""
    family = Family.coerce(family)
    if not nu > 0 or nu == 1.0:
        raise DomainError("Renyi order must be positive and different from 1")
    phi = as_sym(Phi)
    m = phi.m
    alpha, beta, gamma = _family_exponents(family, a, b, m, nu=nu)
    b_eff = gamma - alpha if family.kernel_type == 2 else beta
    if not alpha > (m - 1) / 2.0 or not b_eff > (m - 1) / 2.0:
        raise DomainError(
            f"Renyi order nu={nu:g} outside the admissible range {_renyi_admissible(family, a, b, m)}"
        )
    z = normalizing_integral(family, a, b, phi, h, T)
    k_nu = kernel_integral(family, alpha, beta, gamma, phi, h, T, nu=nu)
    if z.sign <= 0 or k_nu.sign <= 0:
        raise ConvergenceError("non-positive truncated integral; increase the truncation degree")
    return (k_nu.log_abs - nu * z.log_abs) / (1.0 - nu)


def shannon_entropy(
    family, a, b, Phi, h: GeneratorH, T: int | None = None, *, method: str = "auto",
    deltas: tuple[float, float] = (1e-2, 5e-3),
) -> EntropyValue:
    """Shannon entropy -E[log f].

    ``method="renyi"`` extrapolates the Renyi entropy to order 1 from both
    sides (Richardson on the symmetric means at the two ``deltas``).
    ``method="quadrature"`` integrates over the eigenvalues (m <= 2) with
    the series constant; ``"auto"`` falls back to it when the Renyi series
    is not admissible (type 2 with a non-constant generator).
    """
    family = Family.coerce(family)
    if method not in ("auto", "renyi", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    if method in ("auto", "renyi"):
        try:
            d1, d2 = deltas
            mid = []
            for d in (d1, d2):
                lo = renyi_entropy(family, a, b, Phi, h, 1.0 - d, T)
                hi = renyi_entropy(family, a, b, Phi, h, 1.0 + d, T)
                mid.append(0.5 * (lo + hi))
            q = (d1 / d2) ** 2
            value = (q * mid[1] - mid[0]) / (q - 1.0)
            return EntropyValue(value, abs(value - mid[1]), "renyi")
        except FormalSeriesError:
            if method == "renyi":
                raise
    return _shannon_quadrature(family, a, b, as_sym(Phi), h, T)


_THETA_NODES = 64


def _shannon_quadrature(family: Family, a, b, phi: SymMatrix, h: GeneratorH, T) -> EntropyValue:
    m = phi.m
    if m > 2:
        raise DomainError("eigenvalue quadrature route is implemented for m <= 2")
    z = normalizing_integral(family, a, b, phi, h, T)
    log_z = z.log_value
    p = (m + 1) / 2.0
    kt = family.kernel_type
    c_m = math.exp(m * m / 2.0 * math.log(math.pi) - mv_gamma(m / 2.0, m))
    peig = phi.eigenvalues
    detphi = float(np.prod(peig))
    theta = np.pi * np.arange(_THETA_NODES) / _THETA_NODES
    cos2 = np.cos(theta) ** 2

    def h_moments(lams):
        if family.det_argument:
            x = np.array([detphi * float(np.prod(lams))])
        elif m == 1:
            x = np.array([peig[0] * lams[0]])
        else:
            l1, l2 = lams
            x = peig[0] * (l1 * cos2 + l2 * (1 - cos2)) + peig[1] * (l1 * (1 - cos2) + l2 * cos2)
        hv = np.asarray(h(x), dtype=float)
        if np.any(hv <= 0):
            raise DensityUndefinedError("generator is non-positive on the support")
        return float(np.mean(hv)), float(np.mean(hv * np.log(hv)))

    def log_k0(lams):
        out = 0.0
        for lam in lams:
            out += (a - p) * math.log(lam)
            if kt != 2:
                out += (b - p) * math.log1p(-lam)
            if kt != 1:
                out -= (a + b) * math.log1p(lam)
        return out

    def pieces(lams, jac):
        lk = log_k0(lams)
        vdm = lams[0] - lams[1] if m == 2 else 1.0
        hm, hlh = h_moments(lams)
        base = c_m * vdm * math.exp(lk - log_z) * jac
        return base * hm, base * (hm * lk + hlh)

    def to_lambda(u):
        if kt == 2:
            return u / (1.0 - u), 1.0 / (1.0 - u) ** 2
        return u, 1.0

    opts = dict(epsabs=1e-11, epsrel=1e-9)
    results = []
    for which in (0, 1):
        if m == 1:
            def f1(u):
                lam, jac = to_lambda(u)
                return pieces((lam,), jac)[which]
            val, err = integrate.quad(f1, 0.0, 1.0, limit=200, **opts)
        else:
            def f2(u2, u1):
                l1, j1 = to_lambda(u1)
                l2, j2 = to_lambda(u2)
                return pieces((l1, l2), j1 * j2)[which]
            val, err = integrate.dblquad(f2, 0.0, 1.0, 0.0, lambda u1: u1, **opts)
        results.append((val, err))
    (norm, norm_err), (e_logk, e_err) = results
    value = log_z - e_logk
    error = e_err + norm_err + abs(norm - 1.0) * (abs(e_logk) + 1.0)
    return EntropyValue(value, error, "quadrature")


def hypergeom_pfq_matrix(numer: Sequence[float], denom: Sequence[float], X, T: int = DEFAULT_T,
                         rel_tol: float = REL_TOL) -> SeriesValue:
    """pFq of a symmetric matrix argument: sum_kappa prod(a)_kappa/prod(c)_kappa C_kappa(X)/k!."""
    X = as_sym(X)
    m = X.m
    eigs = X.eigenvalues
    out = []
    for t in range(T + 1):
        table = build_table(t, m)
        signs, logs = [], []
        for kappa, cv in zip(table.partitions, table.values(eigs)):
            if cv == 0.0:
                continue
            sgn = math.copysign(1.0, cv)
            lg = math.log(abs(cv)) - gammaln(t + 1)
            for a in numer:
                s, l = log_gen_pochhammer(a, kappa)
                sgn *= s
                lg += l
            if sgn == 0:
                continue
            for c in denom:
                s, l = log_gen_pochhammer(c, kappa)
                if s == 0:
                    raise PoleError(f"(c)_kappa vanishes at c={c:g}, kappa={tuple(kappa)}")
                sgn *= s
                lg -= l
            signs.append(sgn)
            logs.append(lg)
        out.append((np.array(signs), np.array(logs)))
    return _finalize(out, 0.0, rel_tol)


def hypergeom_1f1_matrix(a: float, c: float, X, T: int = DEFAULT_T) -> SeriesValue:
    """Confluent hypergeometric function 1F1(a; c; X) of matrix argument."""
    return hypergeom_pfq_matrix([a], [c], X, T)
