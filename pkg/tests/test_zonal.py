import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mbg.errors import DomainError
from mbg.montecarlo import chunk_rng, sample_haar
from mbg.partitions import dominance_leq, enumerate_partitions
from mbg.zonal import (
    MAX_DEGREE,
    SymMatrix,
    build_table,
    dump_table,
    eval_identity,
    linearize_product,
    load_table,
    orthogonal_average,
    to_zonal_basis,
    trace_power_product,
    zonal_eval,
    zonal_identity_closed_form,
)


def _random_sym(rng, m, pd=False):
    a = rng.standard_normal((m, m))
    if pd:
        return SymMatrix(a @ a.T + 0.1 * np.eye(m))
    return SymMatrix(0.5 * (a + a.T))


def test_symmatrix_validation_and_eigs():
    with pytest.raises(ValueError):
        SymMatrix([[1.0, 2.0], [0.0, 1.0]])
    rng = np.random.default_rng(1)
    X = _random_sym(rng, 4)
    w, v = X.eigenvalues, X.eigenvectors
    assert np.all(np.diff(w) <= 0)
    np.testing.assert_allclose(v @ np.diag(w) @ v.T, X.array, rtol=1e-9, atol=1e-12)


def test_degree_one_and_two_tables():
    t1 = build_table(1, 3)
    assert t1.coeff_map((1,)) == {(1,): 1.0}
    t2 = build_table(2, 2)
    X = SymMatrix([[1.0, 0.3], [0.3, 2.0]])
    tr, tr2 = np.trace(X.array), np.trace(X.array @ X.array)
    assert zonal_eval(t2, (2,), X) == pytest.approx(tr**2 / 3 + 2 * tr2 / 3, rel=1e-13)
    assert zonal_eval(t2, (1, 1), X) == pytest.approx(2 / 3 * (tr**2 - tr2), rel=1e-13)


def test_eval_examples():
    assert zonal_eval(build_table(1, 2), (1,), SymMatrix.diag([2, 3])) == pytest.approx(5.0)
    assert zonal_eval(build_table(2, 2), (1, 1), SymMatrix.identity(2)) == pytest.approx(4 / 3)
    assert zonal_eval(build_table(3, 2), (2, 1), SymMatrix.diag([1, 0])) == 0.0


def test_zero_matrix():
    for k in range(1, 6):
        t = build_table(k, 3)
        assert np.all(t.values(np.zeros(3)) == 0.0)


def test_identity_values():
    assert eval_identity(build_table(1, 3), (1,), 3) == pytest.approx(3.0)
    assert eval_identity(build_table(2, 1), (2,), 1) == pytest.approx(1.0)
    assert eval_identity(build_table(2, 2), (1, 1), 2) == pytest.approx(4 / 3)


@pytest.mark.parametrize("k", [3, 4, 6, 8])
@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_identity_closed_form(k, m):
    table = build_table(k, m)
    for kappa in table.partitions:
        assert eval_identity(table, kappa, m) == pytest.approx(zonal_identity_closed_form(kappa, m), rel=1e-10)


def test_long_partitions_vanish():
    assert eval_identity(build_table(3, 2), (1, 1, 1), 2) == 0.0


def test_triangularity_wrt_dominance():
    for k in range(1, 9):
        t = build_table(k, k)
        for kappa in t.partitions:
            for lam, c in t.coeff_map(kappa).items():
                if c != 0.0:
                    assert dominance_leq(lam, kappa)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_normalization_identity(m):
    rng = np.random.default_rng(100 + m)
    for _ in range(20):
        X = _random_sym(rng, m, pd=True)
        for k in range(1, 9):
            total = math.fsum(build_table(k, m).values(X.eigenvalues))
            assert abs(total - X.trace**k) <= 1e-9 * abs(X.trace) ** k


@pytest.mark.parametrize("k,m", [(30, 2), (40, 2), (20, 3)])
def test_normalization_high_degree(k, m):
    eig = np.linspace(0.9, 0.2, m)
    total = math.fsum(build_table(k, m).values(eig))
    assert total == pytest.approx(eig.sum() ** k, rel=1e-9)


@settings(max_examples=30, deadline=None)
# eigenvalues stay clear of the subnormal range, where k-th powers lose relative precision
@given(st.lists(st.floats(-3, 3).filter(lambda v: v == 0 or abs(v) > 1e-6), min_size=2, max_size=3),
       st.floats(0.1, 4), st.integers(1, 6))
def test_scale_homogeneity(eig, c, k):
    eig = np.sort(np.asarray(eig))[::-1]
    t = build_table(k, len(eig))
    np.testing.assert_allclose(t.values(c * eig), c**k * t.values(eig), rtol=1e-11, atol=1e-11 * max(1, abs(c) ** k) * np.max(np.abs(eig)) ** k)


def test_cap():
    with pytest.raises(DomainError):
        build_table(MAX_DEGREE + 1, 2)


def test_degree_mismatch():
    with pytest.raises(ValueError):
        zonal_eval(build_table(2, 2), (3,), SymMatrix.identity(2))


def test_linearize_examples():
    t1 = build_table(1, 3)
    g = linearize_product(t1, t1, (1,), (1,))
    assert g[(2,)] == pytest.approx(1.0) and g[(1, 1)] == pytest.approx(1.0)
    g = linearize_product(build_table(0, 3), build_table(2, 3), (), (2,))
    assert g == pytest.approx({(2,): 1.0})


@pytest.mark.parametrize("j,k", [(1, 2), (2, 2), (3, 3), (2, 5), (4, 4), (1, 7)])
def test_linearize_by_evaluation(j, k):
    m = 3
    rng = np.random.default_rng(j * 10 + k)
    tj, tk, tjk = build_table(j, m), build_table(k, m), build_table(j + k, m)
    for kappa, tau in itertools.product(tj.partitions, tk.partitions):
        g = linearize_product(tj, tk, kappa, tau)
        for _ in range(5):
            eig = rng.uniform(0.1, 1.5, m)
            lhs = zonal_eval(tj, kappa, SymMatrix.diag(eig)) * zonal_eval(tk, tau, SymMatrix.diag(eig))
            rhs = math.fsum(c * zonal_eval(tjk, phi, SymMatrix.diag(eig)) for phi, c in g.items())
            assert rhs == pytest.approx(lhs, rel=1e-10)


def test_trace_power_product_matches_linearization():
    m = 2
    for kappa in enumerate_partitions(3, m):
        vec = trace_power_product(tuple(kappa), 2, m)
        eig = np.array([0.7, 0.3])
        lhs = zonal_eval(build_table(3, m), kappa, SymMatrix.diag(eig)) * eig.sum() ** 2
        assert float(vec @ build_table(5, m).values(eig)) == pytest.approx(lhs, rel=1e-12)


def test_orthogonal_average_examples():
    t1 = build_table(1, 2)
    assert orthogonal_average(t1, (1,), SymMatrix.diag([1, 2]), SymMatrix.diag([3, 4])) == pytest.approx(10.5)
    t2 = build_table(2, 2)
    A = SymMatrix.diag([1, 0])
    assert orthogonal_average(t2, (2,), A, SymMatrix.identity(2)) == pytest.approx(1.0)
    assert orthogonal_average(t2, (1, 1), SymMatrix.diag([2, 1]), SymMatrix.identity(2)) == pytest.approx(
        zonal_eval(t2, (1, 1), SymMatrix.diag([2, 1]))
    )


@pytest.mark.parametrize("m", [2, 3])
def test_orthogonal_average_haar(m):
    rng = chunk_rng(7, m)
    H = sample_haar(m, 100_000, rng)
    A = SymMatrix.diag(np.linspace(1.0, 0.2, m))
    B = SymMatrix.diag(np.linspace(0.5, 1.5, m))
    # A H B H' has the eigenvalues of the symmetric A^(1/2) H B H' A^(1/2)
    root = A.power(0.5)
    eig = np.linalg.eigvalsh(root @ H @ B.array @ np.swapaxes(H, 1, 2) @ root)[:, ::-1]
    for k in range(1, 4):
        t = build_table(k, m)
        vals_all = np.array([t.values(e) for e in eig])
        for kappa in t.partitions:
            vals = vals_all[:, t.index[kappa]]
            mean, se = vals.mean(), vals.std(ddof=1) / math.sqrt(len(vals))
            target = orthogonal_average(t, kappa, A, B)
            assert abs(mean - target) <= 3 * se + 1e-12, (kappa, mean, target, se)


def test_dump_load_roundtrip():
    t = build_table(6, 3)
    t2 = load_table(dump_table(t))
    np.testing.assert_array_equal(t.coeffs, t2.coeffs)
    assert t.partitions == t2.partitions


def test_to_zonal_basis_of_power_sum():
    # (tr X)^2 = m_2 + 2 m_11 = C_(2) + C_(1,1)
    vec = to_zonal_basis({(2,): 1.0, (1, 1): 2.0}, 2, 2)
    np.testing.assert_allclose(vec, [1.0, 1.0], rtol=1e-14)
