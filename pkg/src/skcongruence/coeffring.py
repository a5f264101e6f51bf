"""Coefficient arithmetic: rationals, real quadratic fields, prime ideals.

All exact coefficients in this package live in Q (as gmpy2.mpq) or in a real
quadratic field Q(sqrt(d)), d > 1 squarefree (as QuadElement).  Nothing of
higher degree is supported on purpose: callers that would need a bigger Hecke
field get a clean error instead of silently wrong arithmetic.

Valuations are taken at prime ideals.  For a rational prime p and a field
Q(sqrt(d)) the ideal(s) above p are classified by the Kronecker symbol of the
field discriminant; split-prime valuations go through a Hensel-lifted square
root of d in Z_p, inert and ramified ones through the norm.
"""

import math
import numbers
from functools import lru_cache

from gmpy2 import mpq, mpz, gcd, kronecker
import sympy

INFINITY = math.inf  # ord of 0

_MAX_QUAD_DISC = 10**12


class CoefficientError(ArithmeticError):
    """Arithmetic outside the supported coefficient rings."""


class PrecisionError(ValueError):
    """A coefficient outside the stored precision range was requested."""


def squarefree_part(n):
    """Largest squarefree divisor s of n > 0 with n = s * t^2."""
    assert n > 0
    s = 1
    for p, e in sympy.factorint(n).items():
        if e % 2:
            s *= p
    return int(s)


@lru_cache(maxsize=64)
def _valid_quad_d(d):
    if d <= 1 or d != squarefree_part(d):
        raise CoefficientError("field discriminant parameter must be squarefree and > 1, got %r" % d)
    if d > _MAX_QUAD_DISC:
        raise CoefficientError("quadratic field parameter too large: %r" % d)
    return True


def is_rational(x):
    # numbers.Rational picks up Fraction and sympy's Integer/Rational, which
    # register with the tower but which mpq() will not convert directly.
    return isinstance(x, (int, mpz, mpq, numbers.Rational))


def _as_mpq(x):
    if isinstance(x, (int, mpz, mpq)):
        return mpq(x)
    return mpq(int(x.numerator), int(x.denominator))


class QuadElement:
    """a + b*sqrt(d) with a, b in Q and d > 1 squarefree.

    Immutable in spirit; do not mutate .a/.b after construction.  Mixed
    arithmetic with int/mpq coerces into the field, but two QuadElements with
    different d refuse to combine.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d):
        d = int(d)
        _valid_quad_d(d)
        self.a = _as_mpq(a)
        self.b = _as_mpq(b)
        self.d = d

    def _coerce(self, other):
        if isinstance(other, QuadElement):
            if other.d != self.d:
                raise CoefficientError("cannot mix sqrt(%d) and sqrt(%d); only degree <= 2 over Q is supported"
                                       % (self.d, other.d))
            return other
        if is_rational(other):
            return QuadElement(other, 0, self.d)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElement(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElement(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElement(o.a - self.a, o.b - self.b, self.d)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElement(self.a * o.a + self.d * self.b * o.b,
                           self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(%d))" % self.d)
        inv = QuadElement(o.a / n, -o.b / n, self.d)
        return self * inv

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return QuadElement(-self.a, -self.b, self.d)

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            return 1 / (self ** (-n))
        result = QuadElement(1, 0, self.d)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, QuadElement):
            return self.d == other.d and self.a == other.a and self.b == other.b
        if is_rational(other):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def conjugate(self):
        return QuadElement(self.a, -self.b, self.d)

    def norm(self):
        """Field norm a^2 - d*b^2, a rational."""
        return self.a * self.a - self.d * self.b * self.b

    def trace(self):
        return 2 * self.a

    def __repr__(self):
        if self.b == 0:
            return "QuadElement(%s, 0, %d)" % (self.a, self.d)
        return "QuadElement(%s, %s, %d)" % (self.a, self.b, self.d)

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        return "%s + %s*sqrt(%d)" % (self.a, self.b, self.d)


def conj(x):
    """Galois conjugate; identity on rationals."""
    if isinstance(x, QuadElement):
        return x.conjugate()
    return x


def as_quad(x, d):
    """Coerce a rational or QuadElement into Q(sqrt(d))."""
    if isinstance(x, QuadElement):
        if x.d != d:
            raise CoefficientError("element of Q(sqrt(%d)) is not in Q(sqrt(%d))" % (x.d, d))
        return x
    return QuadElement(x, 0, d)


def _ord_int(n, p):
    # valuation of a nonzero integer
    n = int(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def ord_rational(x, p):
    """p-adic valuation of a rational; INFINITY for 0."""
    x = _as_mpq(x)
    if x == 0:
        return INFINITY
    return _ord_int(x.numerator, p) - _ord_int(x.denominator, p)


class PrimeIdeal:
    """A prime of Q (d = 0) or of Q(sqrt(d)) above the rational prime p.

    kind is 'rational', 'split', 'inert' or 'ramified'; e/f are ramification
    index and residue degree.  For split primes `branch` is 0 or 1 and selects
    which Hensel lift of sqrt(d) mod p defines the embedding into Z_p.
    """

    def __init__(self, p, d=0, kind="rational", branch=0):
        self.p = int(p)
        self.d = int(d) if d else 0
        self.kind = kind
        self.branch = branch
        if kind == "rational":
            assert self.d == 0
            self.e, self.f = 1, 1
        elif kind == "split":
            self.e, self.f = 1, 1
        elif kind == "inert":
            self.e, self.f = 1, 2
        elif kind == "ramified":
            self.e, self.f = 2, 1
        else:
            raise ValueError("unknown prime ideal kind %r" % kind)
        if kind != "rational":
            _valid_quad_d(self.d)
        self._root_cache = (0, 0)  # (precision exponent m, sqrt(d) mod p^m)

    def __repr__(self):
        if self.kind == "rational":
            return "PrimeIdeal(%d)" % self.p
        return "PrimeIdeal(%d, sqrt(%d), %s%s)" % (
            self.p, self.d, self.kind, "#%d" % self.branch if self.kind == "split" else "")

    def __eq__(self, other):
        if not isinstance(other, PrimeIdeal):
            return NotImplemented
        return (self.p, self.d, self.kind, self.branch) == (other.p, other.d, other.kind, other.branch)

    def __hash__(self):
        return hash((self.p, self.d, self.kind, self.branch))

    def residue_char(self):
        return self.p

    def residue_field_size(self):
        return self.p ** self.f

    def gens(self):
        """Generator description: (p,) for Q/inert, (p, x + y*sqrt(d)) otherwise."""
        if self.kind in ("rational", "inert"):
            return (self.p,)
        if self.kind == "ramified":
            if self.p == 2 and self.d % 4 == 3:
                return (self.p, QuadElement(1, 1, self.d))
            return (self.p, QuadElement(0, 1, self.d))
        if self.p == 2:
            # maximal order is Z[(1+sqrt(d))/2]; branch with sqrt(d) = 1 mod 4
            # is cut out by (-1+sqrt(d))/2, the other by (1+sqrt(d))/2
            sign = -1 if self.branch == 0 else 1
            return (2, QuadElement(mpq(sign, 2), mpq(1, 2), self.d))
        t0 = self._sqrt_d_mod(1)
        return (self.p, QuadElement(-t0, 1, self.d))

    def conjugate_ideal(self):
        if self.kind == "split":
            return PrimeIdeal(self.p, self.d, "split", 1 - self.branch)
        return self

    def _sqrt_d_mod(self, m):
        """sqrt(d) in Z/p^m on this ideal's branch, Hensel-lifted and cached."""
        if self._root_cache[0] >= m:
            return self._root_cache[1] % self.p ** m
        p, d = self.p, self.d
        if p == 2:
            # d = 1 mod 8 here; lift bit by bit
            t, e = 1, 3
            while e < m:
                if (t * t - d) % (1 << (e + 1)):
                    t += 1 << (e - 1)
                e += 1
            t %= 1 << m
            if t % 4 != 1:
                t = (1 << m) - t
            if self.branch == 1:
                t = (1 << m) - t
        else:
            t0 = int(sympy.ntheory.sqrt_mod(d % p, p))
            if t0 > p - t0:
                t0 = p - t0
            if self.branch == 1:
                t0 = p - t0
            t, pe = t0, p
            while pe < p ** m:
                pe = pe * pe
                # Newton step t <- (t + d/t)/2, doubling the precision
                t = (t + d * pow(t, -1, pe)) * pow(2, -1, pe) % pe
            t %= p ** m
        self._root_cache = (m, t)
        return t

    def ord(self, x):
        return ord_at(x, self)


def split_prime(p, d):
    """Prime ideals of Q(sqrt(d)) above p, classified by the field discriminant.

    d = 0 means Q itself.  Returns a list of PrimeIdeal: two for split p,
    one otherwise (the ramified one carrying multiplicity via e = 2).
    """
    p = int(p)
    assert sympy.isprime(p)
    if not d:
        return [PrimeIdeal(p)]
    d = int(d)
    _valid_quad_d(d)
    disc = d if d % 4 == 1 else 4 * d
    sym = int(kronecker(disc, p))
    if sym == 1:
        return [PrimeIdeal(p, d, "split", 0), PrimeIdeal(p, d, "split", 1)]
    if sym == -1:
        return [PrimeIdeal(p, d, "inert")]
    return [PrimeIdeal(p, d, "ramified")]


def _as_integer_triple(x, d):
    """Write x in Q(sqrt(d)) as (A + B*sqrt(d))/C with integers A, B, C > 0."""
    x = as_quad(x, d)
    ca, cb = x.a.denominator, x.b.denominator
    c = ca * cb // gcd(ca, cb)
    return int(x.a.numerator * (c // ca)), int(x.b.numerator * (c // cb)), int(c)


def ord_at(x, P):
    """Valuation of x at the prime ideal P, INFINITY for x = 0.

    x may be an int, mpq, or QuadElement of the matching field.  Rationals are
    accepted at quadratic ideals (ord = e * ord_p).
    """
    if isinstance(x, QuadElement) and P.kind == "rational":
        if x.b == 0:
            x = x.a
        else:
            raise CoefficientError("quadratic element at a rational prime")
    if P.kind == "rational":
        return ord_rational(x, P.p)
    if is_rational(x):
        v = ord_rational(x, P.p)
        return v if v is INFINITY else P.e * v
    x = as_quad(x, P.d)
    if not x:
        return INFINITY
    A, B, C = _as_integer_triple(x, P.d)
    p = P.p
    vC = _ord_int(C, p) if C % p == 0 else 0
    norm = A * A - P.d * B * B
    vN = _ord_int(norm, p)
    if P.kind == "inert":
        assert vN % 2 == 0
        return vN // 2 - vC
    if P.kind == "ramified":
        return vN - 2 * vC
    # split: embed via the branch's p-adic sqrt(d); v_P(A+B*sqrt(d)) <= v_p(norm)
    m = vN + 2
    t = P._sqrt_d_mod(m)
    z = (A + B * t) % p ** m
    if z == 0:
        vZ = m  # cannot happen for the true valuation; guarded below
    else:
        vZ = _ord_int(z, p)
    assert vZ <= vN, "split valuation exceeded its norm bound"
    return vZ - vC


def rational_reconstruct(x, den_bound, tol):
    """Best rational p/q with q <= den_bound and |x - p/q| <= tol, else None.

    x is an exact rational (mpq) or anything mpq() accepts -- callers convert
    binary floats to their exact dyadic value first.  Continued-fraction
    convergents; the last convergent within the denominator bound is tested
    against tol.
    """
    x = mpq(x)
    tol = mpq(tol)
    p0, q0 = mpz(1), mpz(0)
    p1, q1 = mpz(x.numerator // x.denominator), mpz(1)
    rem = x - p1
    while q1 <= den_bound:
        if rem == 0:
            break
        rest = 1 / rem
        a = rest.numerator // rest.denominator
        rem = rest - a
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
    if q1 > den_bound:
        p1, q1 = p0, q0
    if q1 == 0:
        return None
    cand = mpq(p1, q1)
    if abs(x - cand) < tol:
        return cand
    return None


def _q_str(q):
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return "%s/%s" % (q.numerator, q.denominator)


def elt_to_str(x):
    """Exact decimal-free form "a/b" or "a/b+c/e*sqrt(d)" (sign of c folded in)."""
    if isinstance(x, QuadElement):
        b = x.b
        sign = "+" if b >= 0 else "-"
        return "%s%s%s*sqrt(%d)" % (_q_str(x.a), sign, _q_str(abs(b)), x.d)
    return _q_str(_as_mpq(x))


_ELT_RE = None


def elt_from_str(s):
    """Inverse of elt_to_str; returns mpq or QuadElement."""
    global _ELT_RE
    s = s.replace(" ", "")
    if "sqrt" not in s:
        return mpq(s)
    if _ELT_RE is None:
        import re
        _ELT_RE = re.compile(r"^([+-]?\d+(?:/\d+)?)([+-]\d+(?:/\d+)?)\*sqrt\((\d+)\)$")
    m = _ELT_RE.match(s)
    if not m:
        raise ValueError("cannot parse field element %r" % s)
    return QuadElement(mpq(m.group(1).lstrip("+")), mpq(m.group(2).lstrip("+")),
                       int(m.group(3)))


# `ord` is the contract name for valuation; modules that import the short
# spelling shadow the builtin knowingly.
ord = ord_at
