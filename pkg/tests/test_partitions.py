import math

import pytest
from hypothesis import given, strategies as st

from mbg.partitions import (
    Partition,
    dominance_leq,
    enumerate_partitions,
    gen_pochhammer,
    log_gen_pochhammer,
    partition_count,
)


def test_enumerate_small_cases():
    assert enumerate_partitions(3, 3) == [(3,), (2, 1), (1, 1, 1)]
    assert enumerate_partitions(0, 5) == [()]
    assert enumerate_partitions(4, 2) == [(4,), (3, 1), (2, 2)]


def test_partition_invariants():
    p = Partition((3, 1, 1))
    assert p.weight == 5 and p.length == 3
    assert Partition(()).weight == 0
    with pytest.raises(ValueError):
        Partition((1, 2))
    with pytest.raises(ValueError):
        Partition((2, 0))


@pytest.mark.parametrize("k", range(0, 21))
def test_counts_match_partition_function(k):
    assert len(enumerate_partitions(k, max(k, 1))) == partition_count(k)


def test_partition_function_known_values():
    assert partition_count(5) == 7
    assert partition_count(10) == 42


def test_reverse_lex_order():
    parts = enumerate_partitions(7, 7)
    assert parts == sorted(parts, reverse=True)


def test_pochhammer_examples():
    assert gen_pochhammer(5.0, ()) == 1.0
    assert gen_pochhammer(2.0, (2,)) == 6.0
    assert gen_pochhammer(2.0, (1, 1)) == 3.0


@given(st.floats(0.1, 20), st.integers(0, 8))
def test_single_row_is_rising_factorial(a, k):
    expect = math.exp(math.lgamma(a + k) - math.lgamma(a))
    assert gen_pochhammer(a, (k,) if k else ()) == pytest.approx(expect, rel=1e-12)


@given(st.floats(3.0, 30), st.integers(1, 10).flatmap(lambda k: st.sampled_from(enumerate_partitions(k, 3))))
def test_log_route_agrees(a, kappa):
    sign, log_abs = log_gen_pochhammer(a, kappa)
    assert sign == 1
    assert math.exp(log_abs) == pytest.approx(gen_pochhammer(a, kappa), rel=1e-12)


def test_pochhammer_exact_zero():
    assert gen_pochhammer(0.5, (1, 1)) == 0.0
    assert log_gen_pochhammer(0.5, (1, 1))[0] == 0


def test_dominance():
    assert dominance_leq((1, 1, 1), (3,))
    assert not dominance_leq((3,), (1, 1, 1))
    assert dominance_leq((2, 2), (3, 1))
    with pytest.raises(ValueError):
        dominance_leq((2,), (1,))
