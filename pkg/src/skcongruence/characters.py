"""Real quadratic Dirichlet characters and their exact L-value backbone.

Characters are Kronecker symbols attached to fundamental discriminants (or the
trivial character for Delta = 1).  Generalized Bernoulli numbers come from the
standard generating function

    sum_{a=1..N} chi(a) t e^{at} / (e^{Nt} - 1)  =  sum_k B_{k,chi} t^k / k!

by exact power-series division over Q, which gives L(-m, chi) = -B_{m+1,chi}/(m+1)
at non-positive integers.  For the trivial character this convention yields
B_1 = +1/2, matching zeta(0) = -1/2.

Gauss sums of real primitive characters are returned symbolically via the
classical evaluation tau(chi_Delta) = sqrt(Delta) (so sqrt(N) for positive
Delta and i*sqrt(N) for negative Delta).
"""

from collections import namedtuple
from functools import lru_cache

from gmpy2 import mpq, kronecker, isqrt
import mpmath
import sympy

from .coeffring import squarefree_part


def is_fundamental_discriminant(D):
    """True for discriminants of quadratic fields, and for D = 1."""
    D = int(D)
    if D == 1:
        return True
    if D == 0:
        return False
    if D % 4 == 1:
        return squarefree_part(abs(D)) == abs(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and squarefree_part(abs(m)) == abs(m)
    return False


def to_fundamental(D):
    """Write D = D0 * f**2 with D0 fundamental; returns (D0, f).

    D must be a nonzero integer = 0 or 1 mod 4 (a discriminant).
    """
    D = int(D)
    assert D != 0 and D % 4 in (0, 1), "not a discriminant: %r" % D
    s = squarefree_part(abs(D))
    if D < 0:
        s = -s
    D0 = s if s % 4 == 1 else 4 * s
    f2 = D // D0
    assert f2 > 0 and D0 * f2 == D
    f = int(isqrt(f2))
    assert f * f == f2
    return D0, f


class KroneckerCharacter:
    """chi_Delta(n) = Kronecker symbol (Delta / n), Delta fundamental or 1."""

    __slots__ = ("delta", "conductor")

    def __init__(self, delta):
        delta = int(delta)
        if not is_fundamental_discriminant(delta):
            raise ValueError("need a fundamental discriminant (or 1), got %r" % delta)
        self.delta = delta
        self.conductor = abs(delta)

    def __call__(self, n):
        return int(kronecker(self.delta, int(n)))

    def sign(self):
        """chi(-1): +1 for even characters, -1 for odd."""
        return 1 if self.delta > 0 else -1

    def is_trivial(self):
        return self.delta == 1

    def __eq__(self, other):
        if not isinstance(other, KroneckerCharacter):
            return NotImplemented
        return self.delta == other.delta

    def __hash__(self):
        return hash(("kronecker", self.delta))

    def __repr__(self):
        return "KroneckerCharacter(%d)" % self.delta


TRIVIAL = KroneckerCharacter(1)


def chi_eval(chi, n):
    """Kronecker symbol value chi(n) in {-1, 0, 1}."""
    return chi(n)


@lru_cache(maxsize=None)
def _bernoulli_series(chi, terms):
    """Coefficients q[0..terms] of sum_a chi(a) t e^{at}/(e^{Nt}-1), where
    the k-th generalized Bernoulli number is q[k] * k!."""
    N = chi.conductor
    chis = [chi(a) for a in range(1, N + 1)]
    # numerator / t : coefficient of t^j is sum_a chi(a) a^j / j!
    # denominator / t: coefficient of t^j is N^(j+1) / (j+1)!
    fact = [mpq(1)]
    for j in range(1, terms + 2):
        fact.append(fact[-1] * j)
    num = []
    for j in range(terms + 1):
        s = sum(c * a ** j for a, c in zip(range(1, N + 1), chis))
        num.append(mpq(s) / fact[j])
    den = [mpq(N ** (j + 1)) / fact[j + 1] for j in range(terms + 1)]
    q = []
    for i in range(terms + 1):
        acc = num[i]
        for j in range(i):
            acc -= q[j] * den[i - j]
        q.append(acc / den[0])
    return tuple(q[k] * fact[k] for k in range(terms + 1))


def generalized_bernoulli(k, chi):
    """B_{k,chi}, exact."""
    k = int(k)
    assert k >= 1
    # small conductors share one long cached series (covers every index the
    # package ever asks for); large conductors only pay for what they need
    terms = max(k, 60) if chi.conductor <= 60 else max(k, 8)
    return _bernoulli_series(chi, terms)[k]


def dirichlet_L_neg(m, chi, sigma=()):
    """L(-m, chi) = -B_{m+1,chi}/(m+1), with Euler factors at primes in sigma
    removed: L^sigma(-m, chi) = L(-m, chi) * prod_{l in sigma} (1 - chi(l) l^m)."""
    m = int(m)
    assert m >= 0
    value = -generalized_bernoulli(m + 1, chi) / (m + 1)
    for ell in sigma:
        value *= 1 - chi(ell) * mpq(ell) ** m
    return value


GaussSumValue = namedtuple("GaussSumValue", "sign conductor")
"""tau(chi) = sqrt(conductor) if sign=+1 else i*sqrt(conductor); exact tag."""


def gauss_sum(chi):
    """Classical evaluation of tau(chi) for real primitive chi, as a tag.

    The square is always the defining discriminant: tau(chi_Delta)^2 = Delta.
    """
    return GaussSumValue(chi.sign(), chi.conductor)


def gauss_sum_square(chi):
    """tau(chi)^2 = Delta, exact integer."""
    return chi.delta


def gauss_sum_numeric(chi, bits=64):
    """Direct-sum tau(chi) = sum_a chi(a) e(a/N) at the given precision (oracle)."""
    with mpmath.workprec(bits):
        N = chi.conductor
        return mpmath.fsum(
            mpmath.expjpi(mpmath.mpf(2 * a) / N) * chi(a) for a in range(1, N + 1))
