"""Even-weight genus-2 Siegel forms: the Igusa ring, Hecke action at small
primes, the Maass/non-Maass split, and prime-power congruence detection.

Weights 4..20 are covered by monomials in the four generators E4, E6, X10,
X12 (the two Eisenstein Maass lifts and the lifts of phi10, phi12).  Products
are exact convolutions over the box n, m <= P; the Hecke operator T(p)
consumes a factor p^2 of box precision, so spaces keep an internal basis at
4P for a nominal precision P.
"""

from functools import lru_cache
from math import isqrt
from operator import mul

import sympy
from gmpy2 import mpq

from . import cache
from .coeffring import (INFINITY, CoefficientError, PrecisionError, QuadElement,
                        ord_at, split_prime, squarefree_part)
from .jacobi_kohnen import jacobi_cusp_basis
from .qseries import _solve_eigenvector, QExpansion, dim_modforms, newforms
from .sklift import (SiegelForm, _reduced_box, maass_lift,
                     maass_lift_eisenstein, maass_relation_check, sk_lift)

SIEGEL_WEIGHTS = (4, 6, 10, 12)  # generator weights of the even Igusa ring


def _is_rational(v):
    return not isinstance(v, QuadElement)


def _dense_rows(F, den, reverse):
    """rows[n][m] = values A(n,r,m)*den for r = -s..s (reversed if asked)."""
    P = F.prec
    rows = []
    for n in range(P + 1):
        row = []
        for m in range(P + 1):
            s = isqrt(4 * n * m)
            vals = []
            for r in range(-s, s + 1):
                v = F.A(n, r, m)
                if den is not None:
                    v = v * den
                    assert v.denominator == 1, "denominator clearing failed"
                    v = int(v)
                vals.append(v)
            if reverse:
                vals.reverse()
            row.append(vals)
        rows.append(row)
    return rows


def siegel_mul(F, G):
    """Exact Fourier-coefficient convolution; box precision is preserved
    because T = T1 + T2 with both parts psd forces entries of T1 below T."""
    if F.prec != G.prec:
        raise PrecisionError(
            "box precision mismatch: %d vs %d" % (F.prec, G.prec))
    P = F.prec
    rational = (all(map(_is_rational, F.coeffs.values()))
                and all(map(_is_rational, G.coeffs.values())))
    if rational:
        denF = sympy.ilcm(1, 1, *(int(v.denominator) for v in F.coeffs.values()))
        denG = sympy.ilcm(1, 1, *(int(v.denominator) for v in G.coeffs.values()))
    else:
        denF = denG = None
    DF = _dense_rows(F, denF, reverse=False)
    DG = _dense_rows(G, denG, reverse=True)
    out = {}
    for n, r, m in _reduced_box(P):
        acc = 0
        for n1 in range(n + 1):
            rowF = DF[n1]
            rowG = DG[n - n1]
            for m1 in range(m + 1):
                L1 = rowF[m1]
                L2 = rowG[m - m1]
                s1 = (len(L1) - 1) >> 1
                s2 = (len(L2) - 1) >> 1
                lo = max(-s1, r - s2)
                hi = min(s1, r + s2)
                if hi >= lo:
                    acc += sum(map(mul, L1[lo + s1:hi + s1 + 1],
                                   L2[lo + s2 - r:hi + s2 - r + 1]))
        if acc:
            out[(n, r, m)] = acc if denF is None else mpq(acc, denF * denG)
    return SiegelForm(F.weight + G.weight, out, P)


def phi(F):
    """Siegel Phi-operator: the elliptic boundary form n -> A(n,0,0)."""
    return QExpansion(F.weight, [F.A(0, 0, n) for n in range(F.prec + 1)])


def hecke_T(F, p, out_prec=None):
    """Genus-2 T(p) in coefficient form.  Consumes box precision: the
    conservative contract is input >= p^2 * output.

    (T(p)F)(n,r,m) = A(pn,pr,pm)
        + p^(k-2) [ sum over alpha mod p with p | n+r*alpha+m*alpha^2 of
                      A((n+r*alpha+m*alpha^2)/p, r+2m*alpha, pm)
                    + (p | m) A(m/p, r, pn) ]
        + p^(2k-3) (p | n,r,m) A(n/p, r/p, m/p)
    """
    k = F.weight
    P = F.prec // (p * p) if out_prec is None else out_prec
    if P < 1 or F.prec < p * p * P:
        raise PrecisionError(
            "T(%d) needs box %d for output %s" % (p, p * p * max(P, 1), P))
    c1 = p ** (k - 2)
    c2 = p ** (2 * k - 3)
    out = {}
    for n, r, m in _reduced_box(P):
        acc = F.A(p * n, p * r, p * m)
        mid = 0
        for alpha in range(p):
            lam = n + r * alpha + m * alpha * alpha
            if lam % p == 0:
                mid += F.A(lam // p, r + 2 * m * alpha, p * m)
        if m % p == 0:
            mid += F.A(m // p, r, p * n)
        acc += c1 * mid
        if n % p == 0 and r % p == 0 and m % p == 0:
            acc += c2 * F.A(n // p, r // p, m // p)
        if acc:
            out[(n, r, m)] = acc
    return SiegelForm(k, out, P)


def hecke_T2(F, out_prec=None):
    return hecke_T(F, 2, out_prec)


@lru_cache(maxsize=4)
def _generators(P):
    """(E4, E6, X10, X12) at box precision P."""
    jp = 4 * P * P
    return (maass_lift_eisenstein(4, P),
            maass_lift_eisenstein(6, P),
            maass_lift(jacobi_cusp_basis(10, jp)[0], P),
            maass_lift(jacobi_cusp_basis(12, jp)[0], P))


def monomial_exponents(k):
    """All (a,b,c,d) with 4a + 6b + 10c + 12d = k; the dimension of M_k."""
    out = []
    for d in range(k // 12 + 1):
        for c in range((k - 12 * d) // 10 + 1):
            for b in range((k - 12 * d - 10 * c) // 6 + 1):
                rest = k - 12 * d - 10 * c - 6 * b
                if rest % 4 == 0:
                    out.append((rest // 4, b, c, d))
    return sorted(out, reverse=True)


def _monomial(exponents, P):
    e4, e6, x10, x12 = _generators(P)
    F = SiegelForm(0, {(0, 0, 0): mpq(1)}, P)
    for gen, e in zip((e4, e6, x10, x12), exponents):
        for _ in range(e):
            F = siegel_mul(F, gen)
    return F


def _serialize(F):
    return [[n, r, m, str(v)] for (n, r, m), v in sorted(F.coeffs.items())]


def _deserialize(k, rows, P):
    return SiegelForm(k, {(n, r, m): mpq(v) for n, r, m, v in rows}, P)


def _echelon_basis(k, P):
    """Echelonized monomial basis of M_k at box P, cached on disk."""
    def compute():
        monos = [_monomial(e, P) for e in monomial_exponents(k)]
        cols = _reduced_box(P)
        vecs = [[F.A(*T) for T in cols] for F in monos]
        dim = len(vecs)
        out = []
        ci = 0
        while len(out) < dim:
            piv = None
            while piv is None:
                if ci >= len(cols):
                    raise CoefficientError(
                        "monomials dependent at box %d; raise precision" % P)
                piv = next((i for i, v in enumerate(vecs) if v[ci]), None)
                if piv is None:
                    ci += 1
            v = vecs.pop(piv)
            inv = mpq(1) / v[ci]
            v = [x * inv for x in v]
            vecs = [[x - w[ci] * y for x, y in zip(w, v)] if w[ci] else w
                    for w in vecs]
            out = [[x - w[ci] * y for x, y in zip(w, v)] if w[ci] else w
                   for w in out]
            out.append(v)
        forms = []
        for v in out:
            coeffs = {T: x for T, x in zip(cols, v) if x}
            forms.append(SiegelForm(k, coeffs, P))
        return [_serialize(F) for F in forms]

    payload = cache.cached("siegel-basis", {"k": k, "prec": P}, compute)
    return [_deserialize(k, rows, P) for rows in payload]


def _coords(forms, target, P):
    """Exact coordinates of target in the span of forms, using box P rows."""
    cols = _reduced_box(P)
    d = len(forms)
    rows = [[f.A(*T) for f in forms] + [target.A(*T)] for T in cols]
    piv_rows = []
    pivots = []
    for row in rows:
        w = list(row)
        for pr, pc in zip(piv_rows, pivots):
            if w[pc]:
                w = [x - w[pc] * y for x, y in zip(w, pr)]
        lead = next((j for j in range(d) if w[j]), None)
        if lead is not None:
            w = [x / w[lead] for x in w]
            piv_rows.append(w)
            pivots.append(lead)
        elif w[d]:
            raise CoefficientError("target outside the span")
        if len(pivots) == d:
            break
    if len(pivots) < d:
        raise CoefficientError("basis rows dependent through box %d" % P)
    sol = [mpq(0)] * d
    for pr, pc in sorted(zip(piv_rows, pivots), key=lambda t: -t[1]):
        val = pr[d] - sum(pr[j] * sol[j] for j in range(pc + 1, d))
        sol[pc] = val
    # certify on every remaining row
    for T in cols:
        assert sum(f.A(*T) * s for f, s in zip(forms, sol)) == target.A(*T), T
    return sol


class SiegelSpace:
    """M_k(Sp4(Z)) with its cusp / Maass / non-Maass structure.

    basis: echelonized monomial basis at the internal box (4x nominal);
    cusp: the Phi-kernel rows of it; maass: the SK lifts of newforms(2k-2);
    eigen: T(2)-eigendata [(form, lambda2, "Maass"/"non-Maass"), ...].
    """

    def __init__(self, k, prec, iprec, basis, cusp, maass, eigen):
        self.weight = k
        self.prec = prec
        self.iprec = iprec
        self.basis = basis
        self.cusp = cusp
        self.maass = maass
        self.eigen = eigen

    @property
    def nonmaass(self):
        return [F for F, lam, cls in self.eigen if cls == "non-Maass"]

    def dims(self):
        return {"total": len(self.basis), "cusp": len(self.cusp),
                "maass": len(self.maass),
                "nonmaass": len(self.cusp) - len(self.maass)}

    def __repr__(self):
        return "SiegelSpace(weight=%d, dim=%d, cusp=%d, prec=%d)" % (
            self.weight, len(self.basis), len(self.cusp), self.prec)


def _charpoly_roots(M):
    """Eigenvalues of a rational matrix, allowing quadratic irrationalities."""
    lam = sympy.Symbol("lam")
    factors = sympy.factor_list(M.charpoly(lam).as_expr())[1]
    if any(mult > 1 for _, mult in factors):
        return None
    roots = []
    for poly, _ in factors:
        q = sympy.Poly(poly, lam)
        if q.degree() == 1:
            root = -q.nth(0) / q.nth(1)
            roots.append(mpq(int(root.p), int(root.q)))
        elif q.degree() == 2:
            lead = q.nth(2)
            t = sympy.Rational(-q.nth(1), lead)
            nrm = sympy.Rational(q.nth(0), lead)
            disc = t * t - 4 * nrm
            assert disc.q == 1 and disc.p > 0, "complex Hecke eigenvalue?"
            dsf = squarefree_part(int(disc.p))
            g = sympy.sqrt(int(disc.p) // dsf)
            assert g.is_Integer
            for sgn in (1, -1):
                roots.append(QuadElement(mpq(int(t.p), int(t.q)) / 2,
                                         sgn * mpq(int(g), 2), dsf))
        else:
            raise CoefficientError(
                "eigenvalue of degree %d > 2 not supported" % q.degree())
    return roots


def _primitive_integral(coeffs):
    """Rescale a coefficient map to content 1 with positive leading value."""
    nums = []
    dens = []
    for v in coeffs.values():
        if isinstance(v, QuadElement):
            for part in (v.a, v.b):
                nums.append(int(part.numerator))
                dens.append(int(part.denominator))
        else:
            nums.append(int(v.numerator))
            dens.append(int(v.denominator))
    scale = mpq(sympy.ilcm(1, *dens), sympy.igcd(0, *nums) or 1)
    first = coeffs[min(coeffs)]
    if isinstance(first, QuadElement):
        if first.a < 0 or (first.a == 0 and first.b < 0):
            scale = -scale
    elif first < 0:
        scale = -scale
    return {T: v * scale for T, v in coeffs.items()}


def space(k, P=6):
    """M_k(Sp4(Z)) for even 4 <= k <= 20, with internal box 4P."""
    assert k % 2 == 0 and 4 <= k <= 20
    iprec = 4 * P
    basis = _echelon_basis(k, iprec)
    # cusp rows: pivot beyond the rank-1 columns (an elliptic form of weight
    # <= 20 vanishing past them is zero by the valence bound)
    dM = dim_modforms(k)
    cusp = [F for F in basis
            if all(not F.coeffs.get((0, 0, j)) for j in range(iprec + 1))]
    if len(basis) - len(cusp) != dM:
        raise CoefficientError(
            "Phi-rank %d does not match dim M_%d(SL2) = %d"
            % (len(basis) - len(cusp), k, dM))
    lifts = [sk_lift(f, iprec) for f in newforms(2 * k - 2, max(P, 8))]
    eigen = []
    if cusp:
        d = len(cusp)
        mats = {}
        for p in (2, 3):
            cols = [_coords(cusp, hecke_T(F, p), iprec // (p * p))
                    for F in cusp]
            mats[p] = sympy.Matrix(
                [[sympy.Rational(int(cols[j][i].numerator),
                                 int(cols[j][i].denominator))
                  for j in range(d)] for i in range(d)])
            roots = _charpoly_roots(mats[p])
            if roots is not None:
                break
        else:
            raise CoefficientError(
                "repeated T(2) and T(3) eigenvalues at weight %d" % k)
        for lam in roots:
            v = _solve_eigenvector(mats[p], lam, d)
            coeffs = {}
            for j, F in enumerate(cusp):
                if not v[j]:
                    continue
                for T, c in F.coeffs.items():
                    coeffs[T] = coeffs.get(T, 0) + v[j] * c
            coeffs = _primitive_integral({T: c for T, c in coeffs.items() if c})
            E = SiegelForm(k, coeffs, iprec)
            lam2 = lam if p == 2 else _eigenvalue(E, 2)
            cls = "Maass" if maass_relation_check(E, min(4, isqrt(iprec)))["holds"] \
                else "non-Maass"
            eigen.append((E, lam2, cls))
        eigen.sort(key=lambda t: str(t[1]))
    return SiegelSpace(k, P, iprec, basis, cusp, lifts, eigen)


def eigenforms(sp):
    """The T(2)-eigenbasis of the cusp space: (form, lambda(2), class)."""
    return list(sp.eigen)


def _eigenvalue(F, p):
    """Hecke eigenvalue of an eigenform, certified on the whole output box."""
    TF = hecke_T(F, p)
    T1 = next(T for T in _reduced_box(TF.prec) if F.A(*T))
    lam = TF.A(*T1) / F.A(*T1)
    for T in _reduced_box(TF.prec):
        assert TF.A(*T) == lam * F.A(*T), "not a T(%d) eigenform at %s" % (p, T)
    return lam


class CongruenceReport:
    """Outcome of a coefficient (or eigenvalue) congruence comparison."""

    __slots__ = ("ideal", "exponent", "capped", "scaling", "bound", "mode",
                 "witness")

    def __init__(self, ideal, exponent, capped, scaling, bound, mode, witness):
        self.ideal = ideal
        self.exponent = exponent
        self.capped = capped
        self.scaling = scaling
        self.bound = bound
        self.mode = mode
        self.witness = witness

    def __repr__(self):
        head = ">= %d (capped)" % self.exponent if self.capped \
            else "= %d" % self.exponent
        return ("CongruenceReport(M %s mod %r, mode=%s, "
                "verified through bound %d)" % (head, self.ideal, self.mode,
                                                self.bound))


def congruence_exponent(F, G, prime, bound, mode="fourier", cap=64):
    """Largest M with F == G mod prime^M after unit normalization.

    fourier mode scans all reduced triples with n, m <= bound using the
    cross-difference A_F(T) A_G(T0) - A_G(T) A_F(T0), which needs no
    division once A(T0) is a unit on both sides; eigenvalue mode compares
    lambda(2) and (precision permitting) lambda(3) instead.  Both forms
    must be integral at the prime through the bound (so M >= 0 always);
    feed forms in primitive integral normalization when in doubt.  Any
    finite check only certifies a lower bound, hence the "verified
    through bound" label on the report.
    """
    assert F.weight == G.weight
    if mode == "eigenvalue":
        worst = INFINITY
        witness = None
        for p in (2, 3):
            if F.prec < p * p or G.prec < p * p:
                continue
            v = ord_at(_eigenvalue(F, p) - _eigenvalue(G, p), prime)
            if v < worst:
                worst = v
                witness = p
        capped = worst == INFINITY or worst > cap
        return CongruenceReport(prime, cap if capped else worst, capped,
                                mpq(1), bound, mode, witness)
    if bound > min(F.prec, G.prec):
        raise PrecisionError("bound %d beyond box precision" % bound)
    box = _reduced_box(bound)
    for form in (F, G):
        for T in box:
            if ord_at(form.A(*T), prime) < 0:
                raise CoefficientError(
                    "coefficient at %s not integral at %s" % (T, prime))
    T0 = None
    for T in box:
        if ord_at(F.A(*T), prime) == 0:
            if ord_at(G.A(*T), prime) == 0:
                T0 = T
                break
    if T0 is None:
        raise CoefficientError(
            "no common unit coefficient through bound %d" % bound)
    aF0 = F.A(*T0)
    aG0 = G.A(*T0)
    worst = INFINITY
    witness = None
    for T in box:
        delta = F.A(*T) * aG0 - G.A(*T) * aF0
        v = ord_at(delta, prime)
        if v < worst:
            worst = v
            witness = T
    capped = worst == INFINITY or worst > cap
    return CongruenceReport(prime, cap if capped else worst, capped,
                            aF0 / aG0, bound, mode, witness)


def _field_of(*forms):
    for F in forms:
        for v in F.coeffs.values():
            d = getattr(v, "d", 0)
            if d:
                return d
    return 0


def scan_congruences(F, G, bound=4, lmax=200, lmin=None, split_only=True):
    """All (ell, ideal, fourier report) with exponent >= 1 between F and G.

    Tries every rational prime lmin < ell <= lmax at each ideal above it in
    the coefficient field (detected from the forms; 0 = plain Q).  The
    default lmin = 2k - 2 excludes the small primes where denominators of
    the lift normalization and Eisenstein constants live.  Pairs that are
    not integral at an ideal, or have no common unit coefficient there,
    are skipped: neither can carry a congruence certificate.
    """
    if lmin is None:
        lmin = 2 * F.weight - 2
    d = _field_of(F, G)
    hits = []
    for ell in sympy.primerange(lmin + 1, lmax + 1):
        for P in split_prime(ell, d):
            if split_only and d and P.kind != "split":
                continue
            try:
                rep = congruence_exponent(F, G, P, bound)
            except CoefficientError:
                continue
            if rep.exponent >= 1:
                hits.append((ell, P, rep))
    return hits
