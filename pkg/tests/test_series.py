import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate
from scipy.special import betaln

from mbg import series
from mbg.errors import DomainError
from mbg.families import Family
from mbg.generator import constant_one, exp_neg, geometric, polynomial
from mbg.mvgamma import mv_beta
from mbg.series import FormalSeriesError
from mbg.zonal import SymMatrix


def scalar_kummer(a, c, x, terms=200):
    """1F1(a; c; x) by its own power series."""
    total, term = 1.0, 1.0
    for k in range(terms):
        term *= (a + k) / (c + k) * x / (k + 1)
        total += term
    return total


def quad01(f):
    return integrate.quad(f, 0.0, 1.0, epsabs=1e-15, epsrel=1e-13, limit=200)[0]


def eig_quad_m2(log_k0, h_of_trace, bounded=True):
    """Integral over 2x2 matrices of k0(X) h(tr X) through the eigenvalues."""
    def f(l2, l1):
        return math.pi * (l1 - l2) * math.exp(log_k0(l1) + log_k0(l2)) * h_of_trace(l1 + l2)
    if bounded:
        return integrate.dblquad(f, 0, 1, 0, lambda l1: l1, epsabs=1e-14, epsrel=1e-11)[0]
    def g(u2, u1):
        l1, l2 = u1 / (1 - u1), u2 / (1 - u2)
        return f(l2, l1) / ((1 - u1) ** 2 * (1 - u2) ** 2)
    return integrate.dblquad(g, 0, 1, 0, lambda u1: u1, epsabs=1e-14, epsrel=1e-11)[0]


# --- type 1 -----------------------------------------------------------------


@pytest.mark.parametrize("a,b,phi", [(2, 3, 0.4), (0.7, 1.3, 5.0)])
def test_type1_constant_one(a, b, phi):
    sv = series.constant_type1(a, b, SymMatrix.scalar(phi, 1), constant_one())
    assert sv.value == pytest.approx(math.exp(betaln(a, b)), rel=1e-13)
    assert sv.converged


def test_type1_scalar_kummer():
    sv = series.constant_type1(2, 3, SymMatrix.scalar(0.7, 1), exp_neg())
    expect = math.exp(betaln(2, 3)) * scalar_kummer(2, 5, -0.7)
    assert sv.value == pytest.approx(expect, rel=1e-12)
    assert sv.tail_estimate < 1e-12 * sv.value
    assert len(sv.per_degree_sums) == sv.truncation_degree + 1


def test_type1_m2_against_eigen_quadrature():
    a = b = 3.0
    sv = series.constant_type1(a, b, SymMatrix.scalar(0.5, 2), exp_neg())
    p = 1.5
    ref = eig_quad_m2(lambda l: (a - p) * math.log(l) + (b - p) * math.log1p(-l), lambda t: math.exp(-0.5 * t))
    assert sv.value == pytest.approx(ref, rel=1e-8)


# --- type 2 -----------------------------------------------------------------


def test_type2_constant_one():
    sv = series.constant_type2(2, 5, SymMatrix.scalar(0.3, 1), constant_one())
    assert sv.value == pytest.approx(math.exp(betaln(2, 5)), rel=1e-13)


def test_type2_linear_generator():
    phi = 0.3
    sv = series.constant_type2(2, 5, SymMatrix.scalar(phi, 1), polynomial(1, 1))
    expect = math.exp(betaln(2, 5)) + phi * math.exp(betaln(3, 4))
    assert sv.value == pytest.approx(expect, rel=1e-13)
    ref = integrate.quad(lambda x: x * (1 + x) ** -7 * (1 + phi * x), 0, np.inf, epsabs=1e-15)[0]
    assert sv.value == pytest.approx(ref, rel=1e-9)


def test_type2_m2_against_eigen_quadrature():
    a, b, phi = 2.0, 6.0, 0.3
    sv = series.constant_type2(a, b, SymMatrix.scalar(phi, 2), polynomial(1, 1))
    ref = eig_quad_m2(lambda l: (a - 1.5) * math.log(l) - (a + b) * math.log1p(l), lambda t: 1 + phi * t, bounded=False)
    assert sv.value == pytest.approx(ref, rel=1e-7)


def test_type2_invalid_terms():
    with pytest.raises(FormalSeriesError):
        series.constant_type2(2, 3, SymMatrix.scalar(0.3, 1), exp_neg())
    sv = series.constant_type2(2, 3, SymMatrix.scalar(0.3, 1), exp_neg(), allow_formal=True)
    assert sv.formal and not sv.converged


# --- type 3 -----------------------------------------------------------------


def test_type3_uniform_half():
    sv = series.constant_type3_scalar(1, 1, 0.0, constant_one(), 1)
    assert sv.value == pytest.approx(0.5, rel=1e-11)


def test_type3_m1_quadrature():
    sv = series.constant_type3_scalar(2, 2, 0.5, exp_neg(), 1)
    ref = quad01(lambda x: x * (1 - x) * (1 + x) ** -4 * math.exp(-0.5 * x))
    assert sv.value == pytest.approx(ref, rel=1e-10)


@pytest.mark.parametrize("m,a,b", [(1, 2.5, 1.5), (2, 2, 2), (2, 1.5, 3), (3, 2, 2)])
def test_type3_h_one_closed_form(m, a, b):
    # X = U (2I - U)^(-1) maps a type-1 matrix beta onto type 3
    sv = series.constant_type3_scalar(a, b, 0.0, constant_one(), m)
    expect = math.exp(mv_beta(a, b, m) - m * a * math.log(2))
    assert sv.value == pytest.approx(expect, rel=max(1e-9, 2 * sv.tail_estimate / sv.value))


def test_type3_m2_against_eigen_quadrature():
    a = b = 2.0
    sv = series.constant_type3_scalar(a, b, 0.4, exp_neg(), 2)
    ref = eig_quad_m2(lambda l: (a - 1.5) * math.log(l) + (b - 1.5) * math.log1p(-l) - (a + b) * math.log1p(l),
                      lambda t: math.exp(-0.4 * t))
    assert sv.value == pytest.approx(ref, rel=1e-8)


def test_type3_requires_scalar_phi():
    with pytest.raises(DomainError):
        series.normalizing_integral(Family.MBG3, 2, 2, SymMatrix.diag([0.3, 0.6]), exp_neg())


# --- determinant generators -------------------------------------------------


def test_detgen_kind1_one():
    sv = series.det_generator_constant(1, 2.0, 3.0, SymMatrix.diag([0.5, 0.7]), constant_one())
    assert sv.value == pytest.approx(math.exp(mv_beta(2, 3, 2)), rel=1e-13)


def test_detgen_kind1_m1_quadrature():
    sv = series.det_generator_constant(1, 2.0, 3.0, SymMatrix.scalar(0.8, 1), exp_neg())
    ref = quad01(lambda x: x * (1 - x) ** 2 * math.exp(-0.8 * x))
    assert sv.value == pytest.approx(ref, rel=1e-11)


def test_detgen_kind2_m1_quadrature_and_validity():
    sv = series.det_generator_constant(2, 2.0, 5.0, SymMatrix.scalar(0.3, 1), polynomial(1, 0, 1))
    ref = integrate.quad(lambda x: x * (1 + x) ** -7 * (1 + 0.09 * x * x), 0, np.inf, epsabs=1e-15)[0]
    assert sv.value == pytest.approx(ref, rel=1e-9)
    with pytest.raises(FormalSeriesError):
        series.det_generator_constant(2, 2.0, 1.5, SymMatrix.scalar(0.3, 1), polynomial(1, 0, 1))


def test_detgen_kind3_uniform_half():
    sv = series.det_generator_constant(3, 1.0, 1.0, SymMatrix.scalar(1.0, 1), constant_one())
    assert sv.value == pytest.approx(0.5, rel=1e-11)


def test_detgen_kind3_linear_generator():
    sv = series.det_generator_constant(3, 1.0, 1.0, SymMatrix.scalar(1.0, 1), polynomial(0, 1))
    ref = quad01(lambda x: x * (1 + x) ** -2)
    assert ref == pytest.approx(math.log(2) - 0.5, rel=1e-13)
    assert sv.value == pytest.approx(ref, rel=1e-11)
    rejected = 2.0**-2 * math.exp(betaln(2, 1))
    assert rejected == pytest.approx(0.125)
    assert abs(sv.value - rejected) > 0.05


# --- moments ----------------------------------------------------------------


@pytest.mark.parametrize("family", ["MBG1", "MBG2", "MBG3"])
def test_det_moment_zero_order(family):
    phi = SymMatrix.scalar(0.4, 2)
    h = polynomial(1, 1) if family == "MBG2" else exp_neg()
    sv = series.det_moment(family, 3.0, 6.0, phi, h, 0.0)
    assert sv.value == 1.0
    assert sv.log_abs == 0.0


def test_det_moment_beta_and_beta_prime():
    a, b = 2.5, 3.5
    one = constant_one()
    phi = SymMatrix.scalar(0.0, 1)
    assert series.det_moment(1, a, b, phi, one, 1).value == pytest.approx(a / (a + b), rel=1e-13)
    assert series.det_moment(2, a, b, phi, one, 1).value == pytest.approx(a / (b - 1), rel=1e-13)
    assert series.det_moment(1, a, b, phi, one, 2).value == pytest.approx(a * (a + 1) / ((a + b) * (a + b + 1)), rel=1e-13)


def test_det_moment_domain():
    with pytest.raises(DomainError):
        series.det_moment(1, 1.0, 1.0, SymMatrix.scalar(0.0, 1), constant_one(), -1.5)


def test_det_moment_type3_quadrature():
    sv = series.det_moment(3, 2.0, 2.0, SymMatrix.scalar(0.5, 1), exp_neg(), 1.0)
    k = lambda x: x * (1 - x) * (1 + x) ** -4 * math.exp(-0.5 * x)
    assert sv.value == pytest.approx(quad01(lambda x: x * k(x)) / quad01(k), rel=1e-9)


# --- entropies --------------------------------------------------------------


def test_renyi_uniform_zero():
    for nu in (0.5, 2.0, 3.3):
        assert series.renyi_entropy(1, 1, 1, SymMatrix.scalar(0.0, 1), constant_one(), nu) == pytest.approx(0.0, abs=1e-13)


def test_renyi_beta22_order2():
    val = series.renyi_entropy(1, 2, 2, SymMatrix.scalar(0.0, 1), constant_one(), 2.0)
    ref = -math.log(quad01(lambda x: (6 * x * (1 - x)) ** 2))
    assert ref == pytest.approx(-math.log(1.2), rel=1e-12)
    assert val == pytest.approx(ref, rel=1e-8)


@pytest.mark.parametrize("family,a,b,phi,h", [
    (1, 2.0, 3.0, 0.7, exp_neg()),
    (2, 2.0, 5.0, 0.0, constant_one()),
    (3, 2.0, 2.0, 0.4, exp_neg()),
])
def test_renyi_m1_quadrature(family, a, b, phi, h):
    nu = 1.7
    if family == 2:
        k = lambda x: x ** (a - 1) * (1 + x) ** -(a + b) * float(h(phi * x))
        integ = lambda f: integrate.quad(f, 0, np.inf, epsabs=1e-15, epsrel=1e-12, limit=200)[0]
    else:
        extra = (lambda x: (1 + x) ** -(a + b)) if family == 3 else (lambda x: 1.0)
        k = lambda x: x ** (a - 1) * (1 - x) ** (b - 1) * extra(x) * float(h(phi * x))
        integ = quad01
    z = integ(k)
    ref = math.log(integ(lambda x: (k(x) / z) ** nu)) / (1 - nu)
    val = series.renyi_entropy(family, a, b, SymMatrix.scalar(phi, 1), h, nu)
    assert val == pytest.approx(ref, rel=1e-8)


def test_renyi_domain_message():
    with pytest.raises(DomainError, match="admissible range"):
        series.renyi_entropy(1, 0.6, 2.0, SymMatrix.scalar(0.0, 1), constant_one(), 4.0)


def test_shannon_beta22():
    H = series.shannon_entropy(1, 2, 2, SymMatrix.scalar(0.0, 1), constant_one())
    f = lambda x: 6 * x * (1 - x)
    ref = -quad01(lambda x: f(x) * math.log(f(x)))
    assert H.value == pytest.approx(ref, abs=1e-6)
    assert H.error_estimate < 1e-5
    assert series.shannon_entropy(1, 1, 1, SymMatrix.scalar(0.0, 1), constant_one()).value == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("family,a,b,phi,h", [
    (1, 3.0, 3.0, np.diag([0.5, 1.0]), exp_neg()),
    (3, 2.0, 2.0, 0.4 * np.eye(2), exp_neg()),
])
def test_shannon_routes_agree(family, a, b, phi, h):
    phi = SymMatrix(phi)
    r = series.shannon_entropy(family, a, b, phi, h, method="renyi")
    q = series.shannon_entropy(family, a, b, phi, h, method="quadrature")
    assert r.value == pytest.approx(q.value, abs=10 * r.error_estimate + 1e-7)


def test_shannon_type2_polynomial_uses_quadrature():
    H = series.shannon_entropy(2, 2.0, 5.0, SymMatrix.scalar(0.3, 1), polynomial(1, 1))
    assert H.method == "quadrature"
    k = lambda x: x * (1 + x) ** -7 * (1 + 0.3 * x)
    z = integrate.quad(k, 0, np.inf, epsabs=1e-15)[0]
    ref = -integrate.quad(lambda x: k(x) / z * math.log(k(x) / z), 0, np.inf, epsabs=1e-14, limit=200)[0]
    assert H.value == pytest.approx(ref, abs=1e-8)


# --- hypergeometric ---------------------------------------------------------


def test_1f1_zero_argument():
    assert series.hypergeom_1f1_matrix(1.3, 2.7, SymMatrix(np.zeros((3, 3)))).value == 1.0


@pytest.mark.parametrize("a,c,x", [(2, 5, -0.7), (0.5, 1.5, 2.0), (3, 6, -4.0)])
def test_1f1_scalar(a, c, x):
    sv = series.hypergeom_1f1_matrix(a, c, SymMatrix.scalar(x, 1), T=40)
    assert sv.value == pytest.approx(float(mp.hyp1f1(a, c, x)), rel=1e-12)
    assert sv.value == pytest.approx(scalar_kummer(a, c, x), rel=1e-12)


@settings(max_examples=15, deadline=None)
@given(st.floats(0.6, 5), st.lists(st.floats(-1.5, 1.5), min_size=3, max_size=3))
def test_1f1_equal_parameters_is_etr(a, entries):
    x, y, z = entries
    X = SymMatrix([[x, y / 2], [y / 2, z]])
    sv = series.hypergeom_1f1_matrix(a, a, X, T=30)
    assert sv.value == pytest.approx(math.exp(x + z), rel=1e-8)


# --- diagnostics ------------------------------------------------------------


@pytest.mark.parametrize("builder", [
    lambda T: series.constant_type1(3, 3, SymMatrix.diag([0.5, 1.0]), exp_neg(), T),
    lambda T: series.constant_type3_scalar(2, 2, 0.4, exp_neg(), 1, T),
    lambda T: series.hypergeom_1f1_matrix(2, 4, SymMatrix.diag([-3.0, -1.0]), T),
])
def test_tail_bounds_later_truncations(builder):
    base = builder(25)
    more = builder(30)
    assert abs(more.value - base.value) <= max(base.tail_estimate, 1e-15 * abs(base.value))


def test_deterministic_reevaluation():
    f = lambda: series.constant_type3_scalar(2, 2, 0.4, exp_neg(), 2)
    assert f().value == f().value


def test_geometric_generator_type1():
    # (1 + 0.5 tr X)^(-1) on the unit interval: radius of the expansion is 2
    sv = series.constant_type1(2, 2, SymMatrix.scalar(0.5, 1), geometric(1.0))
    ref = quad01(lambda x: x * (1 - x) / (1 + 0.5 * x))
    assert sv.value == pytest.approx(ref, rel=1e-8)
