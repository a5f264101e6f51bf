import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from skcongruence.coeffring import CoefficientError, PrecisionError, QuadElement
from skcongruence.qseries import (
    Newform,
    QExpansion,
    _int_poly_mul,
    _monomial_exponents,
    cusp_basis,
    delta,
    dim_cuspforms,
    dim_modforms,
    eisenstein,
    hecke_T,
    modforms_basis,
    newforms,
    ramanujan_check,
    satake,
    zero_form,
)


def test_eisenstein_values():
    e4 = eisenstein(4, 8)
    assert e4.coeffs[:3] == [1, 240, 2160]  # -8/B_4 = 240, sigma_3(2) = 9
    e6 = eisenstein(6, 8)
    assert e6.a(1) == -504  # -12/B_6
    for k in (8, 10, 14):
        assert eisenstein(k, 4).a(0) == 1
    with pytest.raises(ValueError):
        eisenstein(5, 4)
    with pytest.raises(ValueError):
        eisenstein(2, 4)


def test_delta_two_routes():
    # eta-product vs (E4^3 - E6^2)/1728
    P = 40
    d_eta = delta(P)
    e4, e6 = eisenstein(4, P), eisenstein(6, P)
    d_ring = (e4 ** 3 - e6 ** 2).scale(mpq(1, 1728))
    assert d_eta == d_ring
    assert d_eta.a(1) == 1 and d_eta.a(2) == -24
    assert d_eta.weight == 12 and d_eta.is_cusp()


def test_grading_and_addition():
    e4, e6 = eisenstein(4, 6), eisenstein(6, 6)
    assert (e4 * e6).weight == 10
    with pytest.raises(CoefficientError):
        e4 + e6
    f = delta(6)
    assert f + 0 == f
    assert (f + zero_form(12, 6)) == f
    assert (f - f).is_zero()


@given(A=st.lists(st.integers(-10**6, 10**6), min_size=1, max_size=25),
       B=st.lists(st.integers(-10**6, 10**6), min_size=1, max_size=25))
@settings(max_examples=120, deadline=None)
def test_packed_multiply_against_schoolbook(A, B):
    P = len(A) + len(B) - 2
    got = _int_poly_mul(A, B, P)
    naive = [0] * (P + 1)
    for i, x in enumerate(A):
        for j, y in enumerate(B):
            naive[i + j] += x * y
    assert got == naive


def test_quadratic_coefficient_series():
    w = QuadElement(0, 1, 5)
    f = QExpansion(1, [1, w, 0])
    g = QExpansion(1, [1, -w, 0])
    prod = f * g
    assert prod.coeffs[0] == 1
    assert prod.coeffs[1] == 0
    assert prod.coeffs[2] == -5


def test_precision_contracts():
    f = delta(10)
    with pytest.raises(PrecisionError):
        f.a(11)
    assert (eisenstein(4, 20) * eisenstein(4, 5)).prec == 5
    with pytest.raises(PrecisionError):
        hecke_T(QExpansion(12, [0, 1]), 2)


def test_hecke_examples():
    assert hecke_T(delta(24), 2) == delta(12).scale(-24)
    f = delta(30) * eisenstein(4, 30)
    assert hecke_T(f, 3).a(1) == f.a(3)
    # commutativity on the weight-24 cusp space
    for g in cusp_basis(24, 36):
        assert hecke_T(hecke_T(g, 2), 3) == hecke_T(hecke_T(g, 3), 2)


def test_dimensions_against_monomial_count():
    for k in range(0, 62, 2):
        assert dim_modforms(k) == len(_monomial_exponents(k))
    assert [dim_cuspforms(k) for k in (10, 12, 16, 18, 20, 22, 24, 26, 38)] == \
        [0, 1, 1, 1, 1, 1, 2, 1, 2]


def test_basis_echelon_shape():
    basis = modforms_basis(24, 10)
    for j, f in enumerate(basis):
        for i in range(len(basis)):
            assert f.a(i) == (1 if i == j else 0)
    cb = cusp_basis(24, 10)
    assert len(cb) == 2
    for j, f in enumerate(cb):
        assert f.a(0) == 0
        for i in range(1, 3):
            assert f.a(i) == (1 if i == j + 1 else 0)


def test_newforms_18_22():
    (f18,) = newforms(18, 16)
    assert f18.a(2) == -528
    # independent route: S_18 is spanned by Delta*E6
    g = delta(16) * eisenstein(6, 16)
    assert g.a(1) == 1 and g.a(2) == -528 and f18.qexp == g
    (f22,) = newforms(22, 8)
    assert f22.a(2) == -288
    h = delta(8) * eisenstein(4, 8) * eisenstein(6, 8)
    assert h.a(1) == 1 and f22.qexp == h


def test_newforms_38_quadratic_pair():
    pair = newforms(38, 12)
    assert len(pair) == 2
    f, g = pair
    assert f.disc == g.disc > 0
    # discriminant test: the T(2) eigenvalues really are irrational
    import sympy
    assert sympy.sqrt(f.disc).is_rational is False
    assert f.conjugate() == g
    for h in pair:
        assert h.a(4) == h.a(2) * h.a(2) - 2 ** 37
        assert h.a(6) == h.a(2) * h.a(3)


def test_newforms_24_known_field():
    pair = newforms(24, 10)
    assert len(pair) == 2 and pair[0].disc == 144169
    traces = pair[0].a(2) + pair[1].a(2)
    assert traces == 1080  # trace of T(2) on S_24


def test_hecke_multiplicativity_on_newforms():
    (f18,) = newforms(18, 36)
    (f22,) = newforms(22, 36)
    for f in (f18, f22):
        for p, q in ((2, 3), (2, 5), (3, 5), (2, 7)):
            assert f.a(p * q) == f.a(p) * f.a(q)
        for p in (2, 3, 5):
            assert f.a(p * p) == f.a(p) ** 2 - p ** (f.weight - 1)


def test_satake():
    (f18,) = newforms(18, 6)
    pair = satake(f18, 2)
    assert pair.trace == -528 and pair.norm == 2 ** 17
    assert pair.p == 2
    (f22,) = newforms(22, 8)
    for p in (2, 3):
        assert satake(f22, p).norm == p ** 21


def test_ramanujan_bound_sanity():
    (f18,) = newforms(18, 53)
    assert ramanujan_check(f18, 50) == []
    assert ramanujan_check(Newform(delta(53)), 50) == []


def test_conjugate_pair_symmetric_functions_rational():
    pair = newforms(24, 8)
    a, b = pair[0].a(2), pair[1].a(2)
    s, p = a + b, a * b
    assert s == 1080
    assert p == 540 ** 2 - 144 * 144169
    for n in (3, 5, 7):
        t = pair[0].a(n) + pair[1].a(n)
        assert isinstance(t, QuadElement) and t.b == 0


def _hurwitz_oracle(N):
    # weighted count of reduced positive binary forms [a,b,c] of disc -N
    if N == 0:
        return mpq(-1, 12)
    if N % 4 in (1, 2):
        return mpq(0)
    total = mpq(0)
    a = 1
    while 3 * a * a <= N:
        for b in range(-a + 1, a + 1):
            num = b * b + N
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (a == c and b < 0):
                continue
            if a == b == c:
                total += mpq(1, 3)
            elif b == 0 and a == c:
                total += mpq(1, 2)
            else:
                total += 1
        a += 1
    return total


def _trace_oracle(m, k):
    # Eichler-Selberg for level 1: trace of T(m) on S_k, k >= 4 even
    import sympy
    elliptic = mpq(0)
    t = 0
    while t * t <= 4 * m:
        u0, u1 = 1, t
        for _ in range(k - 3):
            u0, u1 = u1, t * u1 - m * u0
        pk = u1 if k > 3 else u0
        h = _hurwitz_oracle(4 * m - t * t)
        elliptic += pk * h * (1 if t == 0 else 2)
        t += 1
    hyperbolic = sum(min(d, m // d) ** (k - 1) for d in sympy.divisors(m))
    return -elliptic / 2 - mpq(hyperbolic, 2)


def test_traces_against_eichler_selberg():
    # the one genuinely external oracle for newform coefficients: nothing on
    # the trace-formula side touches q-expansions at all
    for k in (12, 16, 18, 20, 22, 26, 38):
        assert _trace_oracle(1, k) == dim_cuspforms(k)
    tau = delta(8)
    for m in (2, 3, 4, 5):
        assert _trace_oracle(m, 12) == tau.a(m)
    (f18,) = newforms(18, 8)
    (f22,) = newforms(22, 8)
    for m in (2, 3, 4, 5):
        assert _trace_oracle(m, 18) == f18.a(m)
        assert _trace_oracle(m, 22) == f22.a(m)
    pair = newforms(38, 8)
    for m in (2, 3, 4, 5):
        assert pair[0].a(m) + pair[1].a(m) == _trace_oracle(m, 38)
