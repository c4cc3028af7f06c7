"""Zonal polynomials of a symmetric matrix argument.

Zonal polynomials are stored through their expansion in monomial
symmetric functions,

    C_kappa(X) = sum_{lambda <= kappa} c[kappa, lambda] m_lambda(x_1, ..., x_m),

where ``x`` are the eigenvalues of ``X``.  The coefficients come from the
classical eigenfunction recurrence (James 1968; Muirhead 2005, ch. 7) and
are scaled so that ``sum_kappa C_kappa(X) = (tr X)**k``.  Only partitions
with at most ``m`` parts are kept, which is exact for ``m``-dimensional
arguments because both ``m_lambda`` and ``C_kappa`` vanish identically in
``m`` variables once the length exceeds ``m``.
"""

from __future__ import annotations

import json
import math
import threading
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import permutations
from typing import Mapping, Sequence

import numpy as np

from .errors import DomainError
from .partitions import Partition, dominance_leq, enumerate_partitions

__all__ = [
    "MAX_DEGREE",
    "SymMatrix",
    "as_sym",
    "ZonalTable",
    "build_table",
    "zonal_eval",
    "eval_identity",
    "zonal_identity_closed_form",
    "linearize_product",
    "trace_power_product",
    "monomial_product",
    "to_zonal_basis",
    "orthogonal_average",
    "dump_table",
    "load_table",
]

MAX_DEGREE = 40
TABLE_FORMAT_VERSION = 1


class SymMatrix:
    """Real symmetric matrix with a cached eigendecomposition.

    Eigenvalues are sorted non-increasing; ``eigenvectors[:, i]`` belongs to
    ``eigenvalues[i]``.
    """

    def __init__(self, entries, *, rtol: float = 1e-12):
        a = np.array(entries, dtype=float)
        if a.ndim == 0:
            a = a.reshape(1, 1)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
        if np.max(np.abs(a - a.T), initial=0.0) > rtol * scale:
            raise ValueError("matrix is not symmetric")
        a = 0.5 * (a + a.T)
        a.setflags(write=False)
        self.array = a

    @classmethod
    def diag(cls, values: Sequence[float]) -> "SymMatrix":
        return cls(np.diag(np.asarray(values, dtype=float)))

    @classmethod
    def scalar(cls, value: float, m: int) -> "SymMatrix":
        return cls(value * np.eye(m))

    @classmethod
    def identity(cls, m: int) -> "SymMatrix":
        return cls(np.eye(m))

    @property
    def m(self) -> int:
        return self.array.shape[0]

    @cached_property
    def _eigh(self):
        w, v = np.linalg.eigh(self.array)
        order = np.argsort(w)[::-1]
        w = w[order]
        v = v[:, order]
        w.setflags(write=False)
        v.setflags(write=False)
        return w, v

    @property
    def eigenvalues(self) -> np.ndarray:
        return self._eigh[0]

    @property
    def eigenvectors(self) -> np.ndarray:
        return self._eigh[1]

    @property
    def trace(self) -> float:
        return float(np.trace(self.array))

    def is_scalar(self, atol: float = 0.0) -> bool:
        a = self.array
        return bool(np.max(np.abs(a - a[0, 0] * np.eye(self.m))) <= atol)

    def power(self, p: float) -> np.ndarray:
        """Matrix power through the eigendecomposition (PD for fractional p)."""
        w, v = self._eigh
        if p != int(p) and np.any(w <= 0):
            raise DomainError("fractional power of a matrix that is not PD")
        return (v * w**p) @ v.T

    def logdet(self) -> float:
        w = self.eigenvalues
        if np.any(w <= 0):
            raise DomainError("log-determinant of a matrix that is not PD")
        return float(np.sum(np.log(w)))

    def __repr__(self) -> str:
        return f"SymMatrix({self.array.tolist()!r})"


def as_sym(x) -> SymMatrix:
    return x if isinstance(x, SymMatrix) else SymMatrix(x)


@lru_cache(maxsize=None)
def _distinct_perms(parts: tuple[int, ...], m: int) -> np.ndarray:
    padded = tuple(parts) + (0,) * (m - len(parts))
    perms = sorted(set(permutations(padded)), reverse=True)
    return np.array(perms, dtype=np.int64).reshape(len(perms), m)


@dataclass(frozen=True, eq=False)
class ZonalTable:
    """Monomial coefficients of every zonal polynomial of one degree.

    ``coeffs[i, j]`` is the coefficient of ``m_{partitions[j]}`` in
    ``C_{partitions[i]}``; partitions are in reverse lexicographic order,
    so the matrix is upper triangular.
    """

    degree: int
    m: int
    partitions: tuple[Partition, ...]
    coeffs: np.ndarray
    index: Mapping[Partition, int] = field(repr=False)

    @cached_property
    def _exponents(self):
        blocks = [_distinct_perms(tuple(p), self.m) for p in self.partitions]
        starts = np.cumsum([0] + [len(b) for b in blocks[:-1]])
        return np.concatenate(blocks, axis=0), starts

    def monomials(self, eigenvalues) -> np.ndarray:
        """m_lambda at eigenvalue vectors; shape ``(..., len(partitions))``."""
        x = np.asarray(eigenvalues, dtype=float)
        if x.shape[-1] != self.m:
            raise ValueError(f"expected {self.m} eigenvalues, got {x.shape[-1]}")
        exps, starts = self._exponents
        terms = np.prod(x[..., None, :] ** exps, axis=-1)
        return np.add.reduceat(terms, starts, axis=-1)

    def values(self, eigenvalues) -> np.ndarray:
        """All C_kappa of this degree at the given eigenvalue vectors."""
        return self.monomials(eigenvalues) @ self.coeffs.T

    def coeff_map(self, kappa: Sequence[int]) -> dict[Partition, float]:
        row = self.coeffs[self._row(kappa)]
        return {p: float(c) for p, c in zip(self.partitions, row) if c != 0.0}

    def _row(self, kappa: Sequence[int]) -> int:
        kappa = Partition(kappa)
        if kappa.weight != self.degree:
            raise ValueError(
                f"partition {tuple(kappa)} has weight {kappa.weight}, table degree is {self.degree}"
            )
        try:
            return self.index[kappa]
        except KeyError:
            raise DomainError(
                f"partition {tuple(kappa)} has more than {self.m} parts"
            ) from None


def _rho(parts: Sequence[int]) -> float:
    return float(sum(k * (k - i - 1) for i, k in enumerate(parts)))


def _multinomial(parts: Sequence[int]) -> float:
    out = math.factorial(sum(parts))
    for p in parts:
        out //= math.factorial(p)
    return float(out)


def _raise_pairs(lam: tuple[int, ...]):
    """Partitions reached by moving t boxes from row j up to row i < j."""
    n = len(lam)
    for i in range(n):
        for j in range(i + 1, n):
            for t in range(1, lam[j] + 1):
                mu = list(lam)
                mu[i] += t
                mu[j] -= t
                yield lam[i] - lam[j] + 2 * t, Partition(sorted((p for p in mu if p), reverse=True))


def _compute_table(k: int, m: int) -> ZonalTable:
    parts = tuple(enumerate_partitions(k, m))
    index = {p: i for i, p in enumerate(parts)}
    n = len(parts)
    d = np.zeros((n, n))
    for r, kappa in enumerate(parts):
        d[r, r] = 1.0
        rho_k = _rho(kappa)
        for c in range(r + 1, n):
            lam = parts[c]
            if not dominance_leq(lam, kappa):
                continue
            acc = 0.0
            for weight, mu in _raise_pairs(tuple(lam)):
                j = index.get(mu)
                if j is not None and j >= r:
                    acc += weight * d[r, j]
            d[r, c] = acc / (rho_k - _rho(lam))
    scale = np.zeros(n)
    for c, lam in enumerate(parts):
        scale[c] = _multinomial(lam) - float(scale[:c] @ d[:c, c])
    coeffs = scale[:, None] * d
    coeffs.setflags(write=False)
    return ZonalTable(degree=k, m=m, partitions=parts, coeffs=coeffs, index=index)


_TABLES: dict[tuple[int, int], ZonalTable] = {}
_TABLE_LOCK = threading.Lock()


def build_table(degree: int, m: int) -> ZonalTable:
    """Zonal table of one degree for ``m``-dimensional arguments (cached)."""
    if degree < 0 or m < 1:
        raise ValueError("need degree >= 0 and m >= 1")
    if degree > MAX_DEGREE:
        raise DomainError(f"zonal degree {degree} exceeds the cap {MAX_DEGREE}")
    key = (int(degree), int(m))
    table = _TABLES.get(key)
    if table is None:
        with _TABLE_LOCK:
            table = _TABLES.get(key)
            if table is None:
                table = _compute_table(*key)
                _TABLES[key] = table
    return table


def _eigs(X, m: int | None = None) -> np.ndarray:
    if isinstance(X, SymMatrix):
        return X.eigenvalues
    return as_sym(X).eigenvalues


def zonal_eval(table: ZonalTable, kappa: Sequence[int], X) -> float:
    """C_kappa(X); ``X`` may be a matrix or a :class:`SymMatrix`."""
    kappa = Partition(kappa)
    if kappa.weight == table.degree and kappa.length > table.m:
        return 0.0
    row = table._row(kappa)
    x = _eigs(X)
    if len(x) != table.m:
        raise ValueError(f"matrix dimension {len(x)} does not match table dimension {table.m}")
    return float(table.monomials(x) @ table.coeffs[row])


@lru_cache(maxsize=None)
def _identity_values(degree: int, m: int) -> np.ndarray:
    t = build_table(degree, m)
    v = t.values(np.ones(m))
    v.setflags(write=False)
    return v


def eval_identity(table: ZonalTable, kappa: Sequence[int], m: int | None = None) -> float:
    """C_kappa(I_m)."""
    if m is not None and m != table.m:
        table = build_table(table.degree, m)
    kappa = Partition(kappa)
    if kappa.weight == table.degree and kappa.length > table.m:
        return 0.0
    return float(_identity_values(table.degree, table.m)[table._row(kappa)])


def zonal_identity_closed_form(kappa: Sequence[int], m: int) -> float:
    """C_kappa(I_m) from its product formula; used as an independent check."""
    kappa = tuple(kappa)
    k = sum(kappa)
    ell = len(kappa)
    if ell > m:
        return 0.0
    from .partitions import gen_pochhammer

    num = 2.0 ** (2 * k) * math.factorial(k) * gen_pochhammer(m / 2.0, kappa)
    for i in range(ell):
        for j in range(i + 1, ell):
            num *= 2 * kappa[i] - 2 * kappa[j] - i + j
    den = 1.0
    for i in range(ell):
        den *= math.factorial(2 * kappa[i] + ell - i - 1)
    return num / den


@lru_cache(maxsize=None)
def _monomial_product_cached(mu: tuple[int, ...], nu: tuple[int, ...], m: int):
    counts: Counter = Counter()
    for alpha in _distinct_perms(mu, m):
        for beta in _distinct_perms(nu, m):
            counts[tuple(sorted(alpha + beta, reverse=True))] += 1
    out = {}
    for rho, c in counts.items():
        key = Partition(p for p in rho if p)
        out[key] = c / len(_distinct_perms(tuple(key), m))
    return out


def monomial_product(mu: Sequence[int], nu: Sequence[int], m: int) -> dict[Partition, float]:
    """Expansion of m_mu * m_nu in monomial symmetric functions of m variables."""
    return dict(_monomial_product_cached(tuple(mu), tuple(nu), m))


def to_zonal_basis(monomial_coeffs: Mapping[Sequence[int], float], degree: int, m: int) -> np.ndarray:
    """Rewrite a homogeneous symmetric polynomial in the zonal basis.

    Returns coefficients aligned with ``build_table(degree, m).partitions``.
    """
    table = build_table(degree, m)
    resid = np.zeros(len(table.partitions))
    for lam, c in monomial_coeffs.items():
        lam = Partition(lam)
        if lam.length > m:
            continue
        if lam.weight != degree:
            raise ValueError("polynomial is not homogeneous of the stated degree")
        resid[table.index[lam]] += c
    out = np.zeros_like(resid)
    for r in range(len(resid)):
        g = resid[r] / table.coeffs[r, r]
        out[r] = g
        resid[r:] -= g * table.coeffs[r, r:]
    return out


def _chop(vec: np.ndarray) -> np.ndarray:
    big = float(np.max(np.abs(vec), initial=0.0))
    return np.where(np.abs(vec) <= 1e-13 * big, 0.0, vec)


def linearize_product(
    table_j: ZonalTable, table_k: ZonalTable, kappa: Sequence[int], tau: Sequence[int]
) -> dict[Partition, float]:
    """Coefficients g with C_kappa * C_tau = sum_phi g[phi] C_phi."""
    if table_j.m != table_k.m:
        raise ValueError("tables built for different dimensions")
    m = table_j.m
    degree = table_j.degree + table_k.degree
    if degree > MAX_DEGREE:
        raise DomainError(f"product degree {degree} exceeds the cap {MAX_DEGREE}")
    poly: Counter = Counter()
    for lam, c1 in table_j.coeff_map(kappa).items():
        for mu, c2 in table_k.coeff_map(tau).items():
            for rho, c3 in _monomial_product_cached(tuple(lam), tuple(mu), m).items():
                poly[rho] += c1 * c2 * c3
    g = _chop(to_zonal_basis(poly, degree, m))
    target = build_table(degree, m)
    return {p: float(v) for p, v in zip(target.partitions, g) if v != 0.0}


@lru_cache(maxsize=None)
def _trace_power_monomials(kappa: tuple[int, ...], s: int, m: int) -> tuple[tuple[Partition, float], ...]:
    if s == 0:
        table = build_table(sum(kappa), m)
        return tuple(table.coeff_map(kappa).items())
    prev = _trace_power_monomials(kappa, s - 1, m)
    poly: Counter = Counter()
    for lam, c in prev:
        for rho, c2 in _monomial_product_cached(tuple(lam), (1,), m).items():
            poly[rho] += c * c2
    return tuple(poly.items())


@lru_cache(maxsize=None)
def trace_power_product(kappa: tuple[int, ...], s: int, m: int) -> np.ndarray:
    """Zonal coefficients of C_kappa(X) * (tr X)**s at degree |kappa| + s.

    Aligned with ``build_table(|kappa| + s, m).partitions``.
    """
    degree = sum(kappa) + s
    if degree > MAX_DEGREE:
        raise DomainError(f"product degree {degree} exceeds the cap {MAX_DEGREE}")
    out = _chop(to_zonal_basis(dict(_trace_power_monomials(tuple(kappa), s, m)), degree, m))
    out.setflags(write=False)
    return out


def orthogonal_average(table: ZonalTable, kappa: Sequence[int], A, B) -> float:
    """Haar average of C_kappa(A H B H') over O(m): C(A) C(B) / C(I)."""
    A, B = as_sym(A), as_sym(B)
    if A.m != B.m or A.m != table.m:
        raise ValueError("dimension mismatch")
    c_id = eval_identity(table, kappa)
    if c_id == 0.0:
        raise DomainError("C_kappa(I_m) vanishes")
    return zonal_eval(table, kappa, A) * zonal_eval(table, kappa, B) / c_id


def dump_table(table: ZonalTable) -> str:
    """Serialize a table to JSON (rows follow the enumeration order)."""
    return json.dumps(
        {
            "version": TABLE_FORMAT_VERSION,
            "k": table.degree,
            "m": table.m,
            "partitions": [list(p) for p in table.partitions],
            "rows": table.coeffs.tolist(),
        }
    )


def load_table(text: str) -> ZonalTable:
    data = json.loads(text)
    if data.get("version") != TABLE_FORMAT_VERSION:
        raise ValueError(f"unsupported table version {data.get('version')!r}")
    k, m = int(data["k"]), int(data["m"])
    parts = tuple(enumerate_partitions(k, m))
    if [list(p) for p in parts] != data["partitions"]:
        raise ValueError("partition order in file does not match enumeration order")
    coeffs = np.array(data["rows"], dtype=float).reshape(len(parts), len(parts))
    coeffs.setflags(write=False)
    return ZonalTable(degree=k, m=m, partitions=parts, coeffs=coeffs, index={p: i for i, p in enumerate(parts)})
