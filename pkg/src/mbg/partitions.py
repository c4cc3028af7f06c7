"""Integer partitions and partition-indexed Pochhammer symbols."""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterator, Sequence

__all__ = [
    "Partition",
    "enumerate_partitions",
    "partition_count",
    "gen_pochhammer",
    "log_gen_pochhammer",
    "dominance_leq",
]


class Partition(tuple):
    """A non-increasing tuple of positive integers.

    Behaves as a plain tuple (hashable, indexable, comparable) with the
    extra attributes ``weight`` and ``length``.
    """

    __slots__ = ()

    def __new__(cls, parts: Sequence[int] = ()):
        parts = tuple(int(p) for p in parts)
        if any(p <= 0 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"partition parts must be non-increasing: {parts}")
        return super().__new__(cls, parts)

    @property
    def weight(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def padded(self, m: int) -> tuple[int, ...]:
        """Parts padded with zeros to length ``m``."""
        if len(self) > m:
            raise ValueError(f"partition {tuple(self)} longer than {m}")
        return tuple(self) + (0,) * (m - len(self))

    def __repr__(self) -> str:
        return f"Partition({tuple(self)!r})"


def _gen(weight: int, max_part: int, max_length: int) -> Iterator[tuple[int, ...]]:
    if weight == 0:
        yield ()
        return
    if max_length == 0:
        return
    for first in range(min(weight, max_part), 0, -1):
        # remaining parts cannot absorb the rest
        if first * max_length < weight:
            break
        for rest in _gen(weight - first, first, max_length - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _enumerate_cached(weight: int, max_length: int) -> tuple[Partition, ...]:
    return tuple(Partition(p) for p in _gen(weight, weight, max_length))


def enumerate_partitions(weight: int, max_length: int | None = None) -> list[Partition]:
    """All partitions of ``weight`` with at most ``max_length`` parts.

    Partitions come in reverse lexicographic order, so ``(weight,)`` is
    first. Weight 0 yields the single empty partition.
    """
    if weight < 0:
        raise ValueError("weight must be non-negative")
    if max_length is None:
        max_length = max(weight, 1)
    if max_length < 1:
        raise ValueError("max_length must be at least 1")
    return list(_enumerate_cached(int(weight), int(min(max_length, max(weight, 1)))))


def partition_count(weight: int) -> int:
    """p(n) by Euler's pentagonal recurrence, independent of the enumerator."""
    p = [1] + [0] * weight
    for n in range(1, weight + 1):
        total, k = 0, 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[n - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p[n] = total
    return p[weight]


def gen_pochhammer(a: float, kappa: Sequence[int]) -> float:
    r"""Generalized rising factorial :math:`(a)_\kappa`.

    .. math:: (a)_\kappa = \prod_{i=1}^{\ell} \prod_{j=0}^{k_i-1} (a - (i-1)/2 + j)

    The exact signed product is returned, zeros included.
    """
    out = 1.0
    for i, k in enumerate(kappa):
        shift = a - i / 2.0
        for j in range(k):
            out *= shift + j
    return out


def log_gen_pochhammer(a: float, kappa: Sequence[int]) -> tuple[int, float]:
    """``(sign, log|(a)_kappa|)``; sign is 0 when the product vanishes."""
    sign = 1
    log_abs = 0.0
    for i, k in enumerate(kappa):
        shift = a - i / 2.0
        for j in range(k):
            f = shift + j
            if f == 0.0:
                return 0, -math.inf
            if f < 0:
                sign = -sign
            log_abs += math.log(abs(f))
    return sign, log_abs


def dominance_leq(lhs: Sequence[int], rhs: Sequence[int]) -> bool:
    """True iff ``lhs`` is dominated by ``rhs`` (all partial sums <=)."""
    if sum(lhs) != sum(rhs):
        raise ValueError("dominance order compares partitions of equal weight")
    s_l = s_r = 0
    for i in range(max(len(lhs), len(rhs))):
        s_l += lhs[i] if i < len(lhs) else 0
        s_r += rhs[i] if i < len(rhs) else 0
        if s_l > s_r:
            return False
    return True
