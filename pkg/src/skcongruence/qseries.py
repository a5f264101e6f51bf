"""Truncated q-expansions of level-1 elliptic modular forms.

QExpansion stores a(0..P) exactly (ints, mpq, or QuadElement for quadratic
Hecke fields).  Products go through Kronecker substitution: clear denominators,
pack each integer coefficient array into one huge mpz with a safe limb width,
multiply once with GMP, and unpack with a balanced-digit trick that keeps
signed coefficients honest.  That makes weight-4/6 monomial products cheap even
at the several-thousand-coefficient precisions the Jacobi machinery wants.

Spaces are built from monomials in E4 and E6 (level 1 is a free polynomial
ring on those), echelonized a la Miller so coordinates can be read off leading
coefficients; newforms come from diagonalizing T(2) on the cusp part, passing
to Q(sqrt(d)) when the characteristic polynomial is an irreducible quadratic.
"""

from gmpy2 import mpq, mpz, lcm, pack, unpack
import sympy

from .coeffring import (
    CoefficientError,
    PrecisionError,
    QuadElement,
    conj,
    squarefree_part,
)


def _norm(c):
    """Collapse mpq with denominator 1 to int; leave QuadElement alone."""
    if isinstance(c, mpq) and c.denominator == 1:
        return int(c)
    return c


def _int_poly_mul(A, B, P):
    """Product of two signed integer coefficient lists, truncated at degree P."""
    if not A or not B:
        return [0] * (P + 1)
    maxA = max(abs(x) for x in A)
    maxB = max(abs(x) for x in B)
    if maxA == 0 or maxB == 0:
        return [0] * (P + 1)
    bound = maxA * maxB * min(len(A), len(B))
    b = bound.bit_length() + 2
    K = 1 << (b - 1)
    NA = pack([int(x) + K for x in A], b) - K * pack([1] * len(A), b)
    NB = pack([int(x) + K for x in B], b) - K * pack([1] * len(B), b)
    NC = NA * NB
    width = mpz(1) << (b * (P + 1))
    T = (NC % width + pack([K] * (P + 1), b)) % width
    limbs = unpack(T, b)
    limbs += [K] * (P + 1 - len(limbs))
    return [int(x) - K for x in limbs]


def _rat_mul(A, B, P):
    """Product of rational coefficient lists (ints and mpq mixed)."""
    LA = 1
    for x in A:
        if isinstance(x, mpq):
            LA = lcm(LA, x.denominator)
    LB = 1
    for x in B:
        if isinstance(x, mpq):
            LB = lcm(LB, x.denominator)
    intA = [int(x * LA) for x in A] if LA > 1 else [int(x) for x in A]
    intB = [int(x * LB) for x in B] if LB > 1 else [int(x) for x in B]
    C = _int_poly_mul(intA, intB, P)
    if LA == 1 and LB == 1:
        return C
    L = LA * LB
    return [_norm(mpq(c, L)) for c in C]


def _quad_parts(coeffs):
    """Split a coefficient list into (rational part, sqrt part, d)."""
    d = 0
    for c in coeffs:
        if isinstance(c, QuadElement):
            if d and c.d != d:
                raise CoefficientError("mixed quadratic fields in one series")
            d = c.d
    if not d:
        return coeffs, None, 0
    rat, irr = [], []
    for c in coeffs:
        if isinstance(c, QuadElement):
            rat.append(_norm(c.a))
            irr.append(_norm(c.b))
        else:
            rat.append(c)
            irr.append(0)
    return rat, irr, d


def _coeff_mul(A, B, P):
    A0, A1, dA = _quad_parts(A)
    B0, B1, dB = _quad_parts(B)
    if dA and dB and dA != dB:
        raise CoefficientError("cannot multiply series over different quadratic fields")
    d = dA or dB
    if not d:
        return _rat_mul(A0, B0, P)
    if A1 is None:
        A1 = [0] * len(A0)
    if B1 is None:
        B1 = [0] * len(B0)
    C0 = _rat_mul(A0, B0, P)
    C1a = _rat_mul(A0, B1, P)
    C1b = _rat_mul(A1, B0, P)
    Cd = _rat_mul(A1, B1, P)
    out = []
    for i in range(P + 1):
        out.append(QuadElement(mpq(C0[i]) + d * mpq(Cd[i]),
                               mpq(C1a[i]) + mpq(C1b[i]), d))
    return out


class QExpansion:
    """Weight-k form known through q^P: coefficients a(0), ..., a(P)."""

    __slots__ = ("weight", "coeffs", "prec")

    def __init__(self, weight, coeffs):
        self.weight = int(weight)
        self.coeffs = [_norm(c) for c in coeffs]
        self.prec = len(coeffs) - 1
        assert self.prec >= 0

    def a(self, n):
        if n < 0:
            return 0
        if n > self.prec:
            raise PrecisionError("coefficient a(%d) beyond stored precision %d" % (n, self.prec))
        return self.coeffs[n]

    def __eq__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        n = min(self.prec, other.prec)
        return (self.weight == other.weight
                and all(self.coeffs[i] == other.coeffs[i] for i in range(n + 1)))

    def __bool__(self):
        return any(self.coeffs)

    def __add__(self, other):
        if isinstance(other, (int, mpz)) and other == 0:
            return self
        if not isinstance(other, QExpansion):
            return NotImplemented
        if self.weight != other.weight:
            raise CoefficientError("cannot add weights %d and %d" % (self.weight, other.weight))
        n = min(self.prec, other.prec)
        return QExpansion(self.weight,
                          [self.coeffs[i] + other.coeffs[i] for i in range(n + 1)])

    __radd__ = __add__

    def __sub__(self, other):
        return self + (other * -1)

    def __mul__(self, other):
        if isinstance(other, QExpansion):
            P = min(self.prec, other.prec)
            return QExpansion(self.weight + other.weight,
                              _coeff_mul(self.coeffs[:P + 1], other.coeffs[:P + 1], P))
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c):
        if isinstance(c, float):
            raise CoefficientError("inexact scalar %r" % c)
        return QExpansion(self.weight, [c * x for x in self.coeffs])

    def __pow__(self, n):
        n = int(n)
        assert n >= 0
        result = QExpansion(0, [1] + [0] * self.prec)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def truncate(self, P):
        assert P <= self.prec
        return QExpansion(self.weight, self.coeffs[:P + 1])

    def is_cusp(self):
        return self.coeffs[0] == 0

    def is_zero(self):
        return all(not c for c in self.coeffs)

    def conjugate(self):
        return QExpansion(self.weight, [conj(c) for c in self.coeffs])

    def disc(self):
        for c in self.coeffs:
            if isinstance(c, QuadElement):
                return c.d
        return 0

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:4])
        return "QExpansion(weight=%d, prec=%d, [%s, ...])" % (self.weight, self.prec, head)


def zero_form(weight, P):
    return QExpansion(weight, [0] * (P + 1))


def eisenstein(k, P):
    """E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n, exact."""
    k = int(k)
    if k < 4 or k % 2:
        raise ValueError("eisenstein weight must be even and >= 4, got %r" % k)
    from .characters import TRIVIAL, generalized_bernoulli
    c = mpq(-2 * k) / generalized_bernoulli(k, TRIVIAL)
    sig = [0] * (P + 1)
    for d in range(1, P + 1):
        dk = d ** (k - 1)
        for n in range(d, P + 1, d):
            sig[n] += dk
    coeffs = [1] + [_norm(c * s) for s in sig[1:]]
    return QExpansion(k, coeffs)


def delta(P):
    """The discriminant cusp form as the eta product q prod (1-q^n)^24."""
    euler = [0] * (P + 1)
    euler[0] = 1
    # pentagonal number theorem: prod(1-q^n) = sum (-1)^j q^{j(3j-1)/2}
    j = 1
    while True:
        done = True
        for e in (j * (3 * j - 1) // 2, j * (3 * j + 1) // 2):
            if e <= P:
                euler[e] = (-1) ** j
                done = False
        if done:
            break
        j += 1
    e2 = _int_poly_mul(euler, euler, P)
    e4 = _int_poly_mul(e2, e2, P)
    e8 = _int_poly_mul(e4, e4, P)
    e16 = _int_poly_mul(e8, e8, P)
    e24 = _int_poly_mul(e16, e8, P)
    return QExpansion(12, [0] + e24[:P])


def dim_modforms(k):
    """dim M_k(SL2(Z)), classical floor formula."""
    if k < 0 or k % 2:
        return 0
    if k % 12 == 2:
        return k // 12
    return k // 12 + 1


def dim_cuspforms(k):
    if k < 12 or k % 2:
        return 0
    return dim_modforms(k) - 1


def _monomial_exponents(k):
    """All (a, b) with 4a + 6b = k, ordered by b."""
    out = []
    for b in range(k // 6 + 1):
        rest = k - 6 * b
        if rest >= 0 and rest % 4 == 0:
            out.append((rest // 4, b))
    return out


def modforms_basis(k, P):
    """Echelonized basis of M_k from E4^a E6^b monomials: row j has a(i) = delta_ij."""
    if k == 0:
        return [QExpansion(0, [1] + [0] * P)]
    dim = dim_modforms(k)
    expo = _monomial_exponents(k)
    assert len(expo) == dim, "monomial count disagrees with dimension formula at k=%d" % k
    if dim == 0:
        return []
    e4 = eisenstein(4, P)
    e6 = eisenstein(6, P)
    rows = [(e4 ** a) * (e6 ** b) for a, b in expo]
    return _echelonize(rows, dim)


def _echelonize(rows, ncols):
    """Gauss-Jordan on leading ncols coefficients; returns echelon rows.

    Assumes the rows restricted to the first ncols coefficients have full rank
    (true for monomial bases here); raises otherwise.
    """
    rows = list(rows)
    nrows = len(rows)
    out = []
    col = 0
    work = rows
    for j in range(nrows):
        piv = None
        while col < ncols and piv is None:
            for i, r in enumerate(work):
                if r.coeffs[col]:
                    piv = i
                    break
            if piv is None:
                col += 1
        if piv is None:
            raise CoefficientError("rank shortfall while echelonizing basis")
        r = work.pop(piv)
        c0 = r.coeffs[col]
        r = r.scale(mpq(1) / mpq(c0)) if not isinstance(c0, QuadElement) else r.scale(1 / c0)
        work = [w - w.coeffs[col] * r if w.coeffs[col] else w for w in work]
        out = [o - o.coeffs[col] * r if o.coeffs[col] else o for o in out]
        out.append(r)
        col += 1
    return out


def cusp_basis(k, P):
    """Echelonized basis of S_k: row j (0-based) has a(i) = delta_{i,j+1}."""
    basis = modforms_basis(k, P)
    return [f for f in basis if f.is_cusp()]


def hecke_T(f, p, weight=None):
    """a_{T(p)f}(n) = a_f(pn) + p^{k-1} a_f(n/p); output precision floor(P/p)."""
    k = f.weight if weight is None else weight
    assert sympy.isprime(p)
    Pout = f.prec // p
    if Pout < 1:
        raise PrecisionError("precision %d too small for T(%d)" % (f.prec, p))
    pk = p ** (k - 1)
    out = []
    for n in range(Pout + 1):
        c = f.coeffs[p * n]
        if n % p == 0:
            c = c + pk * f.coeffs[n // p]
        out.append(c)
    return QExpansion(k, out)


class Newform:
    """Normalized Hecke eigenform: a(1) = 1, coefficients in Q or Q(sqrt(d))."""

    def __init__(self, qexp, disc=0):
        assert qexp.coeffs[0] == 0 and qexp.coeffs[1] == 1
        self.qexp = qexp
        self.weight = qexp.weight
        self.disc = disc

    def a(self, n):
        return self.qexp.a(n)

    @property
    def prec(self):
        return self.qexp.prec

    def conjugate(self):
        """Galois conjugate newform (identity for rational coefficients)."""
        return Newform(self.qexp.conjugate(), self.disc)

    def __eq__(self, other):
        if not isinstance(other, Newform):
            return NotImplemented
        return self.qexp == other.qexp

    def __repr__(self):
        return "Newform(weight=%d, disc=%d, a2=%s)" % (
            self.weight, self.disc, self.qexp.coeffs[2] if self.prec >= 2 else "?")


def _hecke_matrix(basis, p, k):
    """Matrix of T(p) on an echelonized cusp basis (columns = images)."""
    d = len(basis)
    cols = []
    for f in basis:
        Tf = hecke_T(f, p, weight=k)
        assert Tf.prec >= d, "basis precision too small for T(%d) matrix" % p
        cols.append([mpq(Tf.coeffs[i + 1]) for i in range(d)])
    return sympy.Matrix([[sympy.Rational(int(cols[j][i].numerator), int(cols[j][i].denominator))
                          for j in range(d)] for i in range(d)])


def _solve_eigenvector(M, lam, d):
    """Kernel vector of (M - lam) over mpq or QuadElement entries."""
    if isinstance(lam, QuadElement):
        rows = [[QuadElement(mpq(int(M[i, j].p), int(M[i, j].q)), 0, lam.d) - (lam if i == j else 0)
                 for j in range(d)] for i in range(d)]
        zero = QuadElement(0, 0, lam.d)
        one = QuadElement(1, 0, lam.d)
    else:
        rows = [[mpq(int(M[i, j].p), int(M[i, j].q)) - (lam if i == j else 0)
                 for j in range(d)] for i in range(d)]
        zero = mpq(0)
        one = mpq(1)
    # Gaussian elimination tracking pivot columns
    pivots = []
    r = 0
    for c in range(d):
        piv = next((i for i in range(r, d) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = one / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(d):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(d) if c not in pivots]
    assert free, "eigenvalue produced a trivial kernel"
    c0 = free[0]
    v = [zero] * d
    v[c0] = one
    for rr, c in enumerate(pivots):
        v[c] = -rows[rr][c0]
    return v


def newforms(k, P):
    """All newforms of S_k(SL2(Z)) through precision P, over Q or Q(sqrt(d))."""
    dim = dim_cuspforms(k)
    if dim == 0:
        return []
    basis_prec = max(P, 3 * dim + 3)
    basis = cusp_basis(k, basis_prec)
    if dim == 1:
        f = basis[0].truncate(P) if basis[0].prec > P else basis[0]
        return [Newform(f)]
    for p in (2, 3):
        M = _hecke_matrix(basis, p, k)
        lam = sympy.Symbol("lam")
        charpoly = M.charpoly(lam)
        factors = sympy.factor_list(charpoly.as_expr())[1]
        if all(mult == 1 for _, mult in factors):
            break
    else:
        raise CoefficientError("T(2) and T(3) both have repeated eigenvalues at weight %d" % k)
    eigenvalues = []
    for poly, _ in factors:
        q = sympy.Poly(poly, lam)
        deg = q.degree()
        if deg == 1:
            root = -q.nth(0) / q.nth(1)
            eigenvalues.append(mpq(int(root.p), int(root.q)))
        elif deg == 2:
            # lam^2 - t lam + n, monic after clearing; roots (t +- g sqrt(dsf))/2
            cc = [q.nth(i) for i in range(3)]
            lead = cc[2]
            t = sympy.Rational(-cc[1], lead)
            nrm = sympy.Rational(cc[0], lead)
            disc = t * t - 4 * nrm
            assert disc.q == 1 and disc.p > 0, "unexpected eigenvalue discriminant %s" % disc
            dsf = squarefree_part(int(disc.p))
            g2 = int(disc.p) // dsf
            g = sympy.sqrt(g2)
            assert g.is_Integer
            half_t = mpq(int(t.p), int(t.q)) / 2
            for sgn in (1, -1):
                eigenvalues.append(QuadElement(half_t, sgn * mpq(int(g), 2), dsf))
        else:
            raise CoefficientError(
                "Hecke field degree %d > 2 at weight %d is not supported" % (deg, k))
    d = len(basis)
    out = []
    for lam_val in eigenvalues:
        v = _solve_eigenvector(M, lam_val, d)
        coeffs = [0] * (basis[0].prec + 1)
        for j, f in enumerate(basis):
            if not v[j]:
                continue
            for n, c in enumerate(f.coeffs):
                coeffs[n] = coeffs[n] + v[j] * c
        form = QExpansion(k, coeffs)
        a1 = form.coeffs[1]
        assert a1, "eigenvector has vanishing a(1)"
        form = form.scale(1 / a1 if isinstance(a1, QuadElement) else mpq(1) / mpq(a1))
        if form.prec > P:
            form = form.truncate(P)
        out.append(Newform(form, disc=form.disc()))
    out.sort(key=lambda f: str(f.qexp.coeffs[2]))
    return out


class SatakePair(tuple):
    """(p, trace, norm): alpha+beta = a_f(p), alpha*beta = p^(k-1)."""

    def __new__(cls, p, trace, norm):
        return super().__new__(cls, (p, trace, norm))

    p = property(lambda s: s[0])
    trace = property(lambda s: s[1])
    norm = property(lambda s: s[2])


def satake(f, p):
    """Satake parameters of f at p, exactly, as (sum, product) data."""
    return SatakePair(p, f.a(p), p ** (f.weight - 1))


def ramanujan_check(f, pmax=50):
    """Warn (never raise) if |a(p)| > 2 p^((k-1)/2) for some prime p <= pmax.

    Numeric sanity only; returns the list of violating primes.
    """
    import math
    import warnings

    bad = []
    for p in sympy.primerange(2, pmax + 1):
        if p > f.prec:
            break
        ap = f.a(p)
        if isinstance(ap, QuadElement):
            size = max(abs(float(ap.a) + float(ap.b) * math.sqrt(ap.d)),
                       abs(float(ap.a) - float(ap.b) * math.sqrt(ap.d)))
        else:
            size = abs(float(ap))
        if size > 2 * p ** ((f.weight - 1) / 2) * (1 + 1e-12):
            bad.append(p)
    if bad:
        warnings.warn("Hecke eigenvalue bound violated at primes %s" % bad)
    return bad

