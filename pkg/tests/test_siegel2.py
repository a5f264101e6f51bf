"""Genus-2 ring, Hecke action, eigen decomposition, congruence detection.

The frozen weight-20 eigendata below is internally certified three ways:
the T(2)/T(3) operators are validated on four independent eigenform
families (both Eisenstein lifts, both weight-one-generator cusp lifts),
the newform inputs are checked against the Eichler-Selberg trace formula
in test_qseries, and the non-Maass eigenvalues reappear as roots of the
full cusp-space Hecke matrices.
"""

import pytest
from gmpy2 import mpq

from skcongruence.coeffring import (CoefficientError, PrecisionError,
                                    PrimeIdeal, QuadElement, ord_at,
                                    split_prime)
from skcongruence.qseries import delta, dim_cuspforms, dim_modforms, eisenstein, newforms
from skcongruence.sklift import (SiegelForm, _reduced_box, maass_lift,
                                 maass_lift_eisenstein, maass_relation_check,
                                 sk_lift)
from skcongruence.siegel2 import (CongruenceReport, _eigenvalue, _generators,
                                  congruence_exponent, eigenforms, hecke_T,
                                  hecke_T2, monomial_exponents, phi,
                                  scan_congruences, siegel_mul, space)

D38 = 63737521  # Hecke field discriminant parameter of the weight-38 pair


def _one(P):
    return SiegelForm(0, {(0, 0, 0): mpq(1)}, P)


def test_ring_unit_and_grading():
    E4, E6, X10, X12 = _generators(4)
    assert siegel_mul(E4, _one(4)) == E4
    for F, G in [(E4, E6), (E4, X10), (E6, X12), (X10, X12)]:
        H = siegel_mul(F, G)
        assert H.weight == F.weight + G.weight
        assert H == siegel_mul(G, F)
        assert H.A(0, 0, 0) == F.A(0, 0, 0) * G.A(0, 0, 0)
    left = siegel_mul(siegel_mul(E4, E6), X10)
    right = siegel_mul(E4, siegel_mul(E6, X10))
    assert left == right


def test_siegel_mul_against_brute_force():
    from math import isqrt
    E4, E6 = _generators(3)[:2]
    H = siegel_mul(E4, E6)

    def brute(n, r, m):
        acc = mpq(0)
        for n1 in range(n + 1):
            for m1 in range(m + 1):
                for r1 in range(-2 * isqrt(n1 * m1), 2 * isqrt(n1 * m1) + 1):
                    r2 = r - r1
                    n2, m2 = n - n1, m - m1
                    if 4 * n2 * m2 >= r2 * r2:
                        acc += E4.A(n1, r1, m1) * E6.A(n2, r2, m2)
        return acc

    for T in [(1, 1, 1), (1, 0, 2), (2, 1, 2), (0, 0, 3), (2, 2, 3)]:
        assert H.A(*T) == brute(*T), T


def test_weight8_square_is_eisenstein_lift():
    # M_8(Sp4) is one-dimensional, so the square of the weight-4 lift must
    # reproduce the weight-8 Eisenstein lift coefficient by coefficient --
    # a ring identity connecting two completely different construction paths
    E4 = _generators(4)[0]
    E8 = maass_lift_eisenstein(8, 4)
    assert siegel_mul(E4, E4) == E8
    rel = maass_relation_check(E8, 2)
    assert rel["holds"]


def test_weight12_cube_fails_maass_relation():
    # E4^3 has a Klingen component attached to Delta, so it cannot satisfy
    # the lift relation even though each factor does
    E4 = _generators(4)[0]
    F = siegel_mul(siegel_mul(E4, E4), E4)
    rel = maass_relation_check(F, 2)
    assert not rel["holds"]
    assert rel["witnesses"]


def test_phi_boundary_and_ring_map():
    E4, E6, X10, _ = _generators(4)
    assert phi(E4) == eisenstein(4, 4)
    assert phi(E6) == eisenstein(6, 4)
    assert not phi(X10)  # cusp lift dies on the boundary
    assert phi(E4 + E4) == phi(E4) + phi(E4)
    assert phi(siegel_mul(E4, E6)) == phi(E4) * phi(E6)
    assert X10.is_cusp() and not E4.is_cusp()


def test_hecke_t2_on_sk_lift():
    (f18,) = newforms(18, 8)
    F = sk_lift(f18, 8)
    TF = hecke_T2(F)
    assert TF == F.truncate(2) * 240
    # 240 = a_f(2) + 2^9 + 2^8 with a_f(2) from an independent route
    g = delta(4) * eisenstein(6, 4)
    assert g.a(2) == -528
    assert 240 == -528 + 2 ** 9 + 2 ** 8


def test_hecke_eigenvalues_eisenstein_family():
    for k, lam2 in ((4, 45), (6, 561)):
        E = maass_lift_eisenstein(k, 8)
        assert _eigenvalue(E, 2) == lam2
        assert lam2 == 1 + 2 ** (k - 1) + 2 ** (k - 2) + 2 ** (2 * k - 3)
    E = maass_lift_eisenstein(4, 9)
    assert _eigenvalue(E, 3) == 280 == 1 + 3 ** 3 + 3 ** 2 + 3 ** 5


def test_hecke_t3_on_cusp_lift():
    from skcongruence.jacobi_kohnen import jacobi_cusp_basis
    (phi10,) = jacobi_cusp_basis(10, 4 * 81)
    F = maass_lift(phi10, 9)
    (f18,) = newforms(18, 4)
    assert _eigenvalue(F, 3) == 21960 == f18.a(3) + 3 ** 9 + 3 ** 8


def test_hecke_linearity_and_cusp_stability():
    E4, E6, X10, X12 = _generators(8)
    F = X12
    G = siegel_mul(siegel_mul(E4, E4), E4).truncate(8)
    lhs = hecke_T2(F * 2 + G * -3)
    assert lhs == hecke_T2(F) * 2 + hecke_T2(G) * -3
    C = siegel_mul(X10, E4).truncate(8)  # weight-14 cusp form
    assert not phi(hecke_T2(C))


def test_hecke_precision_contracts():
    X10 = _generators(8)[2]
    assert hecke_T2(X10).prec == 2
    with pytest.raises(PrecisionError):
        hecke_T(X10, 2, out_prec=3)
    with pytest.raises(PrecisionError):
        hecke_T(X10, 3, out_prec=1)  # needs 9x


def test_space_dimensions_two_ways():
    # monomial count on one side, Phi-rank + lift-span on the other
    for k, total, cusp in ((10, 2, 1), (12, 3, 1), (20, 5, 3)):
        sp = space(k)
        d = sp.dims()
        assert d["total"] == total == len(monomial_exponents(k))
        assert d["cusp"] == cusp == total - dim_modforms(k)
        assert d["maass"] == dim_cuspforms(2 * k - 2)
    assert space(20).dims()["nonmaass"] == 3 - 2 == 1
    assert monomial_exponents(10) == [(1, 1, 0, 0), (0, 0, 1, 0)]


def test_eigenforms_weight10():
    sp = space(10)
    ((F, lam, cls),) = eigenforms(sp)
    assert cls == "Maass" and lam == 240
    X10 = _generators(6)[2]
    # primitive integral eigenvector is proportional to the generator
    ratio = F.A(1, 1, 1) / X10.A(1, 1, 1)
    assert F == X10 * ratio


def test_eigenforms_weight20_frozen():
    sp = space(20)
    eig = eigenforms(sp)
    assert [cls for _, _, cls in eig] == ["non-Maass", "Maass", "Maass"]
    nm, lam_nm, _ = eig[0]
    assert lam_nm == -840960
    assert _eigenvalue(nm, 3) == 346935960
    # primitive integral Fourier data of the non-Maass form
    assert [nm.A(*T) for T in [(1, 1, 1), (1, 0, 1), (1, 1, 2), (1, 0, 2),
                               (2, 0, 2)]] == [1, 4, 56, 2616, -4412416]
    rel = maass_relation_check(nm, 2)
    assert not rel["holds"] and (2, 0, 2) in rel["witnesses"]
    # Maass eigenvalues match the spinor identity against the newform pair
    pair = newforms(38, 6)
    want = sorted(str(f.a(2) + 2 ** 19 + 2 ** 18) for f in pair)
    got = sorted(str(lam) for _, lam, cls in eig if cls == "Maass")
    assert got == want
    for F, lam, cls in eig[1:]:
        assert isinstance(lam, QuadElement) and lam.d == D38
        assert lam == _eigenvalue(F, 2)


def test_maass_lift_stays_eigen():
    sp = space(20)
    pair = newforms(38, 6)
    for L in sp.maass:
        lam = _eigenvalue(L, 2)  # certifies T(2)L = lam L on the whole box
        assert any(lam == f.a(2) + 2 ** 19 + 2 ** 18 for f in pair)


def test_congruence_self_capped():
    X12 = _generators(4)[3]
    rep = congruence_exponent(X12, X12, PrimeIdeal(7), 2)
    assert rep.capped and rep.exponent == 64
    assert "verified through bound 2" in repr(rep)
    rep = congruence_exponent(X12, X12, PrimeIdeal(7), 2, cap=10)
    assert rep.capped and rep.exponent == 10


def test_congruence_synthetic_exponent():
    F = _generators(4)[3]  # X12, integral with unit A(1,1,1)
    bump = SiegelForm(12, {(2, 1, 2): mpq(25)}, 4)
    G = F + bump
    rep = congruence_exponent(F, G, PrimeIdeal(5), 4)
    assert rep.exponent == 2 and not rep.capped
    assert rep.witness == (2, 1, 2)
    assert rep.mode == "fourier"
    # a prime coprime to the bump sees a unit difference there
    rep = congruence_exponent(F, G, PrimeIdeal(7), 4)
    assert rep.exponent == 0 and rep.witness == (2, 1, 2)
    # and a bound whose box misses the bump entirely reports capped
    rep = congruence_exponent(F, G, PrimeIdeal(7), 1)
    assert rep.capped


def test_congruence_error_branches():
    X10 = _generators(4)[2]
    rank1 = SiegelForm(10, {(0, 0, 1): mpq(1)}, 4)
    with pytest.raises(CoefficientError, match="common unit"):
        congruence_exponent(X10, rank1, PrimeIdeal(5), 2)
    third = SiegelForm(10, {(1, 1, 1): mpq(1, 5)}, 4)
    with pytest.raises(CoefficientError, match="integral"):
        congruence_exponent(X10, third, PrimeIdeal(5), 2)
    with pytest.raises(PrecisionError):
        congruence_exponent(X10, X10, PrimeIdeal(5), 9)


def test_weight20_scan_outcome():
    # Frozen outcome of the full lift / non-lift comparison at weight 20.
    # Through box bound 4 the two SK lifts and the non-Maass eigenform admit
    # NO Fourier congruence at any prime above 2k-2 = 38: the scan over all
    # split primes in (38, 200] comes back empty.  The classical-looking
    # candidate 379 (which does divide Norm(lambda_F(2) - lambda_G(2)))
    # fails already at lambda(3), so eigenvalue mode rejects it too.
    sp = space(20)
    nm = sp.nonmaass[0]
    maass = [F for F, _, cls in sp.eigen if cls == "Maass"]
    for L in maass:
        assert scan_congruences(L, nm, bound=4, lmax=200) == []

    lam2 = {id(L): _eigenvalue(L, 2) for L in maass}
    P0, P1 = split_prime(379, D38)
    near = 0
    for L in maass:
        for P in (P0, P1):
            v2 = ord_at(lam2[id(L)] - mpq(-840960), P)
            rep = congruence_exponent(L, nm, P, 4, mode="eigenvalue")
            assert rep.exponent == 0
            if v2 >= 1:
                near += 1
                assert rep.witness == 3  # lambda(3) is where it breaks
    assert near == 2  # one matched ideal per conjugate, no more

    # below the Eisenstein range congruences do exist; record them
    hits = {ell for L in maass
            for ell, _, _ in scan_congruences(L, nm, bound=4, lmax=37, lmin=1)}
    assert hits == {3, 7, 11}


def test_scan_on_rational_pair():
    # degenerate-field path: rational forms, plain rational primes
    F = _generators(4)[3]
    G = F + SiegelForm(12, {(1, 0, 2): mpq(41 * 41)}, 4)
    hits = scan_congruences(F, G, bound=4, lmax=50, lmin=1)
    assert [(ell, rep.exponent) for ell, _, rep in hits] == [(41, 2)]
