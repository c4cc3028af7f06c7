"""The generator h: pointwise values plus its Taylor coefficient stream."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.special import gammaln

from .errors import ConvergenceError, DomainError

__all__ = [
    "GeneratorH",
    "exp_neg",
    "exp_pos",
    "constant_one",
    "polynomial",
    "geometric",
    "builtin",
    "parse_generator",
    "power_coeffs",
    "series_power",
    "taylor_shift",
    "taylor_tail_probe",
]


@dataclass(frozen=True)
class GeneratorH:
    """A generator h with an analytic Taylor expansion at the origin.

    Attributes
    ----------
    func : callable
        Vectorised pointwise evaluation ``x -> h(x)``.
    coeff : callable
        ``t -> h^{(t)}(0) / t!``.
    label : str
        Human readable name.
    positivity_domain : tuple of float
        Interval on which the caller asserts ``h > 0``.
    degree : int or None
        Polynomial degree when the expansion is finite, otherwise None.
    radius : float
        Radius of convergence of the expansion at 0.
    spec : str or None
        CLI spec string that reproduces this generator, if any.
    """

    func: Callable
    coeff: Callable[[int], float]
    label: str
    positivity_domain: tuple[float, float] = (-math.inf, math.inf)
    degree: int | None = None
    radius: float = math.inf
    spec: str | None = None

    def __call__(self, x):
        return self.func(x)

    @property
    def is_polynomial(self) -> bool:
        return self.degree is not None

    def coeffs(self, T: int) -> np.ndarray:
        """a_0, ..., a_T."""
        return np.array([float(self.coeff(t)) for t in range(T + 1)])


def exp_neg() -> GeneratorH:
    """h(x) = exp(-x): the Kummer-beta generator."""
    return GeneratorH(
        func=lambda x: np.exp(-np.asarray(x, dtype=float)),
        coeff=lambda t: (-1.0) ** t * math.exp(-gammaln(t + 1)),
        label="exp(-x)",
        spec="exp-neg",
    )


def exp_pos() -> GeneratorH:
    return GeneratorH(
        func=lambda x: np.exp(np.asarray(x, dtype=float)),
        coeff=lambda t: math.exp(-gammaln(t + 1)),
        label="exp(x)",
        spec="exp-pos",
    )


def constant_one() -> GeneratorH:
    return GeneratorH(
        func=lambda x: np.ones_like(np.asarray(x, dtype=float)),
        coeff=lambda t: 1.0 if t == 0 else 0.0,
        label="1",
        degree=0,
        spec="one",
    )


def polynomial(*c: float) -> GeneratorH:
    """h(x) = c0 + c1 x + ... + cd x^d."""
    if not c:
        raise DomainError("polynomial generator needs at least one coefficient")
    c = tuple(float(v) for v in c)
    deg = len(c) - 1
    while deg > 0 and c[deg] == 0.0:
        deg -= 1
    positive = all(v >= 0 for v in c) and c[0] > 0
    return GeneratorH(
        func=lambda x: np.polynomial.polynomial.polyval(np.asarray(x, dtype=float), c),
        coeff=lambda t: c[t] if t < len(c) else 0.0,
        label="poly(" + ",".join(f"{v:g}" for v in c) + ")",
        positivity_domain=(0.0, math.inf) if positive else (-math.inf, math.inf),
        degree=deg,
        spec="poly:" + ",".join(repr(v) for v in c),
    )


def geometric(p: float) -> GeneratorH:
    """h(x) = (1 + x)^(-p); the expansion only converges for |x| < 1."""
    p = float(p)
    if not p > 0:
        raise DomainError("geometric generator needs p > 0")

    def coeff(t: int) -> float:
        # (-1)^t (p)_t / t!
        return (-1.0) ** t * math.exp(gammaln(p + t) - gammaln(p) - gammaln(t + 1))

    return GeneratorH(
        func=lambda x: (1.0 + np.asarray(x, dtype=float)) ** (-p),
        coeff=coeff,
        label=f"(1+x)^-{p:g}",
        positivity_domain=(-1.0, math.inf),
        radius=1.0,
        spec=f"geom:{p!r}",
    )


def builtin(kind: str, *args: float) -> GeneratorH:
    kinds = {
        "exp_neg": exp_neg,
        "exp_pos": exp_pos,
        "constant_one": constant_one,
        "geometric": geometric,
        "polynomial": polynomial,
    }
    try:
        return kinds[kind](*args)
    except KeyError:
        raise DomainError(f"unknown generator kind {kind!r}") from None


def parse_generator(spec: str) -> GeneratorH:
    """Parse ``exp-neg``, ``exp-pos``, ``one``, ``poly:c0,c1,...`` or ``geom:p``."""
    spec = spec.strip()
    if spec == "exp-neg":
        return exp_neg()
    if spec == "exp-pos":
        return exp_pos()
    if spec == "one":
        return constant_one()
    head, _, tail = spec.partition(":")
    try:
        if head == "poly" and tail:
            return polynomial(*(float(v) for v in tail.split(",")))
        if head == "geom" and tail:
            return geometric(float(tail))
    except ValueError as exc:
        raise DomainError(f"bad generator spec {spec!r}: {exc}") from None
    raise DomainError(f"unknown generator spec {spec!r}")


def series_power(a: Sequence[float], nu: float, T: int) -> np.ndarray:
    """Coefficients of (sum_t a_t x^t)^nu up to x^T.

    Uses u_t = 1/(t a_0) sum_{j=1..t} ((nu + 1) j - t) a_j u_{t-j}.
    """
    a = np.asarray(a, dtype=float)
    a0 = float(a[0]) if len(a) else 0.0
    if a0 == 0.0:
        raise DomainError("generator vanishes at origin; Renyi series unavailable")
    if a0 < 0 and nu != int(nu):
        raise DomainError("fractional power of a generator negative at the origin")
    u = np.zeros(T + 1)
    u[0] = a0**nu
    for t in range(1, T + 1):
        j = np.arange(1, min(t, len(a) - 1) + 1)
        if len(j) == 0:
            continue
        u[t] = np.sum(((nu + 1.0) * j - t) * a[j] * u[t - j]) / (t * a0)
    return u


def power_coeffs(h: GeneratorH, nu: float, T: int) -> np.ndarray:
    """Taylor coefficients u_0..u_T of h(x)**nu."""
    if not nu > 0:
        raise DomainError("power must be positive")
    return series_power(h.coeffs(T), nu, T)


def taylor_shift(
    coeff: Callable[[int], float], x0: float, T: int, *, degree: int | None = None,
    max_terms: int = 600, tol: float = 1e-17,
) -> np.ndarray:
    """Coefficients of y -> h(x0 + y) from the expansion of h at 0.

    b_s = sum_{t >= s} a_t binom(t, s) x0^(t-s).  Finite for polynomials;
    otherwise summed until the terms fall below ``tol`` relative.
    """
    out = np.zeros(T + 1)
    if x0 == 0.0:
        return np.array([float(coeff(s)) for s in range(T + 1)])
    lx = math.log(abs(x0))
    for s in range(T + 1):
        if degree is not None and s > degree:
            break
        upper = degree if degree is not None else s + max_terms
        terms = []
        small = 0
        for t in range(s, upper + 1):
            a_t = float(coeff(t))
            if a_t == 0.0:
                term = 0.0
            else:
                mag = math.log(abs(a_t)) + math.lgamma(t + 1) - math.lgamma(s + 1) - math.lgamma(t - s + 1) + (t - s) * lx
                sgn = math.copysign(1.0, a_t) * (math.copysign(1.0, x0) ** (t - s))
                term = sgn * math.exp(mag)
            terms.append(term)
            if degree is None:
                total = abs(math.fsum(terms))
                if abs(term) <= tol * max(total, 1e-300) and t > s + 4:
                    small += 1
                    if small >= 5:
                        break
                else:
                    small = 0
        else:
            if degree is None:
                raise ConvergenceError(
                    f"Taylor re-expansion at x0={x0} did not converge (outside the radius?)"
                )
        out[s] = math.fsum(terms)
    return out


def taylor_tail_probe(h: GeneratorH, x: float, T: int) -> float:
    """|h(x) - sum_{t<=T} a_t x^t|."""
    partial = math.fsum(float(h.coeff(t)) * x**t for t in range(T + 1))
    return abs(float(h(x)) - partial)
