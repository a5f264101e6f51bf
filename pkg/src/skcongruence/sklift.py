"""Maass lifts: index-1 Jacobi cusp forms to genus-2 Siegel forms.

A genus-2 form is stored through its Fourier coefficients A(n,r,m),
indexed by positive semi-definite half-integral matrices [[n,r/2],[r/2,m]].
At level 1 the coefficient only depends on the GL2(Z)-class of the index,
so we store one value per reduced triple 0 <= r <= n <= m.  The lift of a
Jacobi form phi sends the class of determinant D = 4nm - r^2 to

    A(n,r,m) = sum over d | gcd(n,r,m) of d^(k-1) c_phi(D/d^2),

which lands in the Maass Spezialschar: A(n,r,m) = sum d^(k-1) A(nm/d^2, r/d, 1).
"""

from math import gcd

from gmpy2 import mpq
from sympy import divisors

from .coeffring import CoefficientError, PrecisionError, conj
from .jacobi_kohnen import inverse_shimura, jacobi_eisenstein, plus_to_ez
from .qseries import eisenstein


def reduce_triple(n, r, m):
    """Canonical GL2(Z)-representative of the psd form [n, r, m].

    Gaussian reduction: shift r into [-n, n), swap to n <= m, repeat; the
    final sign flip r -> |r| is the det(-1) move.  Output 0 <= r <= n <= m.
    """
    assert n >= 0 and m >= 0 and 4 * n * m >= r * r, (n, r, m)
    if n > m:
        n, m = m, n
    while n > 0 and not (-n <= r <= n and n <= m):
        if not -n <= r <= n:
            t = (r + n) // (2 * n)
            m += n * t * t - r * t
            r -= 2 * n * t
        if n > m:
            n, m = m, n
    if n == 0:
        return 0, 0, m
    return n, abs(r), m


def _reduced_box(P, rank2_only=False):
    """All reduced triples with m <= P, in (n, r, m) lexicographic order."""
    out = []
    lo = 1 if rank2_only else 0
    for n in range(lo, P + 1):
        for r in range(0, n + 1):
            for m in range(n, P + 1):
                out.append((n, r, m))
    return out


class SiegelForm:
    """Genus-2 form known on all reduced (n,r,m) with n, m <= prec."""

    __slots__ = ("weight", "coeffs", "prec")

    def __init__(self, weight, coeffs, prec):
        assert weight % 2 == 0 and weight >= 0
        self.weight = int(weight)
        self.coeffs = {T: v for T, v in coeffs.items() if v}
        self.prec = int(prec)

    def A(self, n, r, m):
        T = reduce_triple(n, r, m)
        if T[2] > self.prec:
            raise PrecisionError(
                "coefficient A%s beyond box precision %d" % (T, self.prec))
        return self.coeffs.get(T, mpq(0))

    def __eq__(self, other):
        if not isinstance(other, SiegelForm):
            return NotImplemented
        P = min(self.prec, other.prec)
        if self.weight != other.weight:
            return False
        return all(self.A(*T) == other.A(*T) for T in _reduced_box(P))

    def __add__(self, other):
        assert self.weight == other.weight
        P = min(self.prec, other.prec)
        out = {}
        for T in _reduced_box(P):
            v = self.A(*T) + other.A(*T)
            if v:
                out[T] = v
        return SiegelForm(self.weight, out, P)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return SiegelForm(self.weight,
                          {T: c * v for T, v in self.coeffs.items()},
                          self.prec)

    def __mul__(self, c):
        assert not isinstance(c, SiegelForm), "use siegel2.siegel_mul for products"
        return self.scale(c)

    __rmul__ = __mul__

    def truncate(self, P):
        assert P <= self.prec
        return SiegelForm(self.weight,
                          {T: v for T, v in self.coeffs.items() if T[2] <= P},
                          P)

    def is_cusp(self):
        # rank <= 1 classes are the reduced (0,0,m)
        return not any(self.coeffs.get((0, 0, m)) for m in range(self.prec + 1))

    def is_zero(self):
        return not self.coeffs

    def conjugate(self):
        return SiegelForm(self.weight,
                          {T: conj(v) for T, v in self.coeffs.items()},
                          self.prec)

    def __repr__(self):
        return "SiegelForm(weight=%d, box=%d, A(1,1,1)=%s)" % (
            self.weight, self.prec,
            self.coeffs.get((1, 1, 1), 0) if self.prec >= 1 else "?")


def maass_lift(phi, P):
    """Lift a Jacobi cusp form of weight k, index 1 to a Siegel cusp form."""
    if not phi.is_cusp():
        raise CoefficientError(
            "cusp Jacobi form required; see maass_lift_eisenstein")
    if phi.prec < 4 * P * P:
        raise PrecisionError(
            "need Jacobi coefficients through %d, have %d" % (4 * P * P, phi.prec))
    k = phi.weight
    coeffs = {}
    for n in range(1, P + 1):
        for r in range(0, n + 1):
            for m in range(n, P + 1):
                det = 4 * n * m - r * r
                val = mpq(0)
                for d in divisors(gcd(gcd(n, r), m)):
                    val += d ** (k - 1) * phi.c(det // (d * d))
                if val:
                    coeffs[(n, r, m)] = val
    return SiegelForm(k, coeffs, P)


def maass_lift_eisenstein(k, P):
    """Lift of E_{k,1}: the genus-2 Siegel Eisenstein series, A(0,0,0) = 1.

    One uniform rule covers rank 1 and rank 2: scale the divisor sum by
    a_{E_k}(1) = -2k/B_k, so that A(n,0,0) = a_{E_k}(n) and the image
    under the Siegel Phi-operator is the elliptic Eisenstein series.
    """
    assert k >= 4 and k % 2 == 0
    ek1 = jacobi_eisenstein(k, 4 * P * P)
    scale = eisenstein(k, 1).a(1)
    coeffs = {(0, 0, 0): mpq(1)}
    for n, r, m in _reduced_box(P):
        if m == 0:
            continue
        det = 4 * n * m - r * r
        val = mpq(0)
        for d in divisors(gcd(gcd(n, r), m)):
            val += d ** (k - 1) * ek1.c(det // (d * d))
        if val:
            coeffs[(n, r, m)] = scale * val
    return SiegelForm(k, coeffs, P)


def maass_relation_check(F, B):
    """Does A(n,r,m) = sum_{d | gcd} d^(k-1) A(nm/d^2, r/d, 1) hold on the box?

    Both sides are read back from the stored coefficient map, so for a lift
    this is an independent consistency check, not a tautology.  Returns
    {"holds": bool, "witnesses": [triples]} with every failing triple
    with n, m <= B.  The right side consults A(*, *, 1) up to index B^2,
    so F must carry box precision >= B^2.
    """
    if B > F.prec:
        raise PrecisionError("bound %d beyond box precision %d" % (B, F.prec))
    k = F.weight
    witnesses = []
    for n, r, m in _reduced_box(B):
        if m == 0:
            continue  # the divisor sum is empty only at (0,0,0)
        rhs = mpq(0)
        for d in divisors(gcd(gcd(n, r), m)):
            rhs += d ** (k - 1) * F.A(n * m // (d * d), r // d, 1)
        if F.A(n, r, m) != rhs:
            witnesses.append((n, r, m))
    return {"holds": not witnesses, "witnesses": witnesses}


def sk_lift(f, P, D=-3):
    """Saito-Kurokawa lift of a level-1 newform of weight 2k-2.

    Composes the inverse Shimura map (normalized c(|D|) = 1 on the plus
    form) with the Maass lift; no rescaling afterwards.  The coefficients
    stay in the Hecke order of f.
    """
    assert (f.weight + 2) % 4 == 0, "need even lift weight k = (weight+2)/2"
    k = (f.weight + 2) // 2
    g = inverse_shimura(f, k, D, 4 * P * P)
    return maass_lift(plus_to_ez(g, k), P)


def complex_conjugate(F):
    """Coefficientwise field conjugation; the lift of f's Galois conjugate."""
    return F.conjugate()
