from math import gcd

import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from skcongruence.coeffring import CoefficientError, PrecisionError
from skcongruence.jacobi_kohnen import jacobi_cusp_basis, jacobi_eisenstein
from skcongruence.qseries import eisenstein, newforms
from skcongruence.sklift import (
    SiegelForm,
    complex_conjugate,
    maass_lift,
    maass_lift_eisenstein,
    maass_relation_check,
    reduce_triple,
    sk_lift,
)


def test_reduce_triple_examples():
    assert reduce_triple(1, 2, 2) == (1, 0, 1)
    assert reduce_triple(4, -3, 1) == (1, 1, 2)
    assert reduce_triple(2, 0, 0) == (0, 0, 2)
    assert reduce_triple(1, 4, 4) == (0, 0, 1)  # (x+2y)^2 represents 1
    assert reduce_triple(0, 0, 0) == (0, 0, 0)
    assert reduce_triple(3, 3, 3) == (3, 3, 3)


@st.composite
def _psd_triples(draw):
    n = draw(st.integers(0, 25))
    m = draw(st.integers(0, 25))
    rmax = int((4 * n * m) ** 0.5)
    r = draw(st.integers(-rmax, rmax))
    if 4 * n * m < r * r:  # float rounding guard
        r = 0
    return n, r, m


@given(_psd_triples(), st.lists(st.sampled_from("sft"), max_size=6))
def test_reduce_triple_class_invariant(T, word):
    # s = swap, f = flip r, t = unimodular shift (x,y) -> (x+y,y)
    n, r, m = T
    for move in word:
        if move == "s":
            n, m = m, n
        elif move == "f":
            r = -r
        else:
            n, r, m = n, r + 2 * n, n + r + m
    red = reduce_triple(n, r, m)
    assert red == reduce_triple(*T)
    rn, rr, rm = red
    assert 0 <= rr <= rn <= rm
    assert 4 * rn * rm - rr * rr == 4 * T[0] * T[2] - T[1] * T[1]


@pytest.mark.parametrize("k", [10, 12])
def test_lift_coefficient_formula(k):
    phi = jacobi_cusp_basis(k, 4 * 16 + 1)[0]
    F = maass_lift(phi, 4)
    assert F.A(1, 1, 1) == phi.c(3)
    assert F.A(2, 1, 1) == phi.c(7)
    assert F.A(2, 2, 2) == phi.c(12) + 2 ** (k - 1) * phi.c(3)
    assert F.is_cusp() and F.A(3, 0, 0) == 0


def test_symmetry_and_reduction():
    phi = jacobi_cusp_basis(10, 4 * 16 + 1)[0]
    F = maass_lift(phi, 4)
    for (n, r, m) in [(1, 1, 2), (2, 1, 3), (1, 0, 4)]:
        assert F.A(n, r, m) == F.A(m, r, n)
        assert F.A(n, -r, m) == F.A(n, r, m)
    # accessor agrees with the unreduced divisor sum
    assert F.A(3, 2, 1) == sum(
        d ** 9 * phi.c((4 * 3 - 4) // (d * d)) for d in [1])
    assert F.A(2, -2, 2) == F.A(2, 2, 2)


def test_lift_linearity():
    cb = jacobi_cusp_basis(20, 4 * 9 + 1)
    assert len(cb) == 2
    combo = cb[0].scale(2) + cb[1].scale(-3)
    lhs = maass_lift(combo, 3)
    rhs = maass_lift(cb[0], 3).scale(2) + maass_lift(cb[1], 3).scale(-3)
    assert lhs == rhs


def test_lift_input_validation():
    with pytest.raises(CoefficientError):
        maass_lift(jacobi_eisenstein(4, 100), 2)
    phi = jacobi_cusp_basis(10, 30)[0]
    with pytest.raises(PrecisionError):
        maass_lift(phi, 3)  # needs coefficients through 36


@pytest.mark.parametrize("k", [4, 6])
def test_eisenstein_lift_boundary(k):
    E = maass_lift_eisenstein(k, 6)
    ek = eisenstein(k, 6)
    assert E.A(0, 0, 0) == 1
    for n in range(1, 7):
        assert E.A(n, 0, 0) == ek.a(n)
    assert not E.is_cusp()


def test_eisenstein_lift_rank2_values():
    E4 = maass_lift_eisenstein(4, 3)
    assert E4.A(1, 1, 1) == 13440
    assert E4.A(1, 0, 1) == 30240
    assert E4.A(1, 0, 0) == 240


@pytest.mark.parametrize("k", [4, 6])
def test_eisenstein_lift_denominator_support(k):
    # small-prime denominators only: nothing beyond 2k-2 may appear
    import sympy
    E = maass_lift_eisenstein(k, 6)
    for v in E.coeffs.values():
        den = int(mpq(v).denominator)
        assert all(p <= 2 * k - 2 for p in sympy.factorint(den)), (v, k)


@pytest.mark.parametrize("k", [4, 6])
def test_eisenstein_lift_satisfies_relation(k):
    E = maass_lift_eisenstein(k, 9)
    assert maass_relation_check(E, 3)["holds"]


def test_relation_check_flags_synthetic_failure():
    # only the class of (1,1,1) nonzero: fine at bound 1, fails at (2,2,2)
    F = SiegelForm(10, {(1, 1, 1): mpq(1)}, 9)
    assert maass_relation_check(F, 1)["holds"]
    rep = maass_relation_check(F, 2)
    assert not rep["holds"]
    assert (2, 2, 2) in rep["witnesses"]


def test_relation_check_needs_square_box():
    phi = jacobi_cusp_basis(10, 4 * 16 + 1)[0]
    F = maass_lift(phi, 4)
    with pytest.raises(PrecisionError):
        maass_relation_check(F, 4)  # needs A(*,*,1) through 16 > 4
    with pytest.raises(PrecisionError):
        maass_relation_check(F, 5)


def test_sk_lift_is_the_jacobi_lift():
    (f18,) = newforms(18, 8)
    phi10 = jacobi_cusp_basis(10, 4 * 36 + 1)[0]
    F = sk_lift(f18, 6)
    assert F == maass_lift(phi10, 6)
    assert F.A(1, 1, 1) == 1
    assert F.weight == 10 and F.is_cusp()


def test_sk_lift_conjugate_pair():
    pair = newforms(38, 8)
    G0 = sk_lift(pair[0], 3)
    G1 = sk_lift(pair[1], 3)
    assert complex_conjugate(G0) == G1
    assert complex_conjugate(complex_conjugate(G0)) == G0
    assert G0.A(1, 1, 1) == 1
    # coefficients stay in f's Hecke field
    disc = pair[0].disc
    for v in G0.coeffs.values():
        assert getattr(v, "d", 0) in (0, disc)


def test_conjugate_fixes_rational_lift():
    (f18,) = newforms(18, 8)
    F = sk_lift(f18, 3)
    assert complex_conjugate(F) == F


def test_scalar_algebra_and_truncate():
    phi = jacobi_cusp_basis(10, 4 * 16 + 1)[0]
    F = maass_lift(phi, 4)
    G = 3 * F - F.scale(2)
    assert G == F and G is not F
    H = F.truncate(2)
    assert H.prec == 2 and H.A(1, 1, 2) == F.A(1, 1, 2)
    with pytest.raises(PrecisionError):
        H.A(1, 1, 3)
    with pytest.raises(AssertionError):
        F * F  # ring products live elsewhere


def test_zero_and_equality_semantics():
    Z = SiegelForm(10, {}, 5)
    assert Z.is_zero() and Z.is_cusp()
    phi = jacobi_cusp_basis(10, 4 * 16 + 1)[0]
    F = maass_lift(phi, 4)
    assert F - F == Z
    assert not F == Z
