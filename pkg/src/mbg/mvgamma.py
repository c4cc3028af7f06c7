"""Multivariate gamma and beta functions and their partition shifts.

Everything is returned on the log scale; the shifted variants return
``(sign, log_abs)`` pairs in the style of :func:`numpy.linalg.slogdet`.
"""

from __future__ import annotations

import math
from typing import Sequence

from scipy.special import gammaln

from .errors import DomainError, PoleError
from .partitions import Partition, log_gen_pochhammer

__all__ = ["mv_gamma", "mv_beta", "mv_gamma_shifted", "mv_gamma_negshift"]


def _check_arg(a: float, m: int, name: str = "a") -> None:
    if m < 1:
        raise ValueError("dimension must be at least 1")
    if not a > (m - 1) / 2.0:
        raise DomainError(f"{name}={a} must exceed (m-1)/2={(m - 1) / 2} for m={m}")


def mv_gamma(a: float, m: int) -> float:
    r"""log Gamma_m(a) = m(m-1)/4 log(pi) + sum_i log Gamma(a - (i-1)/2)."""
    _check_arg(a, m)
    return m * (m - 1) / 4.0 * math.log(math.pi) + sum(
        float(gammaln(a - i / 2.0)) for i in range(m)
    )


def mv_beta(a: float, b: float, m: int) -> float:
    """log B_m(a, b) = log Gamma_m(a) + log Gamma_m(b) - log Gamma_m(a + b)."""
    _check_arg(a, m, "a")
    _check_arg(b, m, "b")
    return mv_gamma(a, m) + mv_gamma(b, m) - mv_gamma(a + b, m)


def mv_gamma_shifted(a: float, kappa: Sequence[int], m: int) -> tuple[int, float]:
    """Gamma_m(a, kappa) = (a)_kappa Gamma_m(a) as ``(sign, log_abs)``.

    A vanishing Pochhammer factor gives ``(0, -inf)``.
    """
    kappa = Partition(kappa)
    if kappa.length > m:
        raise DomainError(f"partition {tuple(kappa)} has more than m={m} parts")
    sign, log_p = log_gen_pochhammer(a, kappa)
    if sign == 0:
        return 0, -math.inf
    return sign, log_p + mv_gamma(a, m)


def mv_gamma_negshift(a: float, kappa: Sequence[int], m: int) -> tuple[int, float]:
    """Gamma_m(a, -kappa) = (-1)^|kappa| Gamma_m(a) / (-a + (m+1)/2)_kappa.

    Defined by an integral that converges only when ``a - kappa_1 > (m-1)/2``;
    outside that range a :class:`DomainError` is raised.
    """
    kappa = Partition(kappa)
    if kappa.length > m:
        raise DomainError(f"partition {tuple(kappa)} has more than m={m} parts")
    _check_arg(a, m)
    if kappa and not a - kappa[0] > (m - 1) / 2.0:
        raise DomainError(
            f"series term undefined: a - kappa_1 = {a - kappa[0]} <= (m-1)/2 for kappa={tuple(kappa)}"
        )
    sign, log_p = log_gen_pochhammer(-a + (m + 1) / 2.0, kappa)
    if sign == 0:
        raise PoleError(f"pole of Gamma_m({a}, -{tuple(kappa)})")
    if kappa.weight % 2:
        sign = -sign
    return sign, mv_gamma(a, m) - log_p
