"""Index-1 Jacobi forms, Hurwitz class-number series, and the Kohnen plus space.

For even weight and index 1 a Jacobi form's coefficient c(n, r) depends only on
the discriminant D = 4n - r^2, so forms are stored as D-indexed arrays with the
support condition D = 0, 3 mod 4.  The space J_{k,1} is M_{k-4} E_{4,1} (+)
M_{k-6} E_{6,1} over the level-1 elliptic ring, with the elliptic action
c_{f.phi}(D) = sum_j a_f(j) c_phi(D - 4j); the Jacobi-Eisenstein coefficients
are quotients of Cohen's H(r, N).

A Jacobi form of weight k relabels into the plus space of weight k - 1/2
(coefficient at n = |D|), and the discriminant-indexed maps

    zeta_D g(z) = sum_n ( sum_{d|n} (D/d) d^{k-2} c_g(|D| n^2 / d^2) ) q^n

carry the plus space to weight 2k-2.  The inverse direction solves a small
exact linear system: find the plus-space element whose zeta_D image equals a
given newform on the nose.
"""

from gmpy2 import mpq, kronecker
import sympy

from . import cache
from .characters import (
    TRIVIAL,
    KroneckerCharacter,
    dirichlet_L_neg,
    is_fundamental_discriminant,
    to_fundamental,
)
from .coeffring import CoefficientError, PrecisionError, QuadElement
from .qseries import QExpansion, dim_modforms, modforms_basis


def hurwitz_H(r, N):
    """Cohen's H(r, N): H(r,0) = zeta(1-2r); for N > 0 with -N = D0 f0^2,
    H(r,N) = L(1-r, chi_{D0}) sum_{d|f0} mu(d) chi_{D0}(d) d^{r-1} sigma_{2r-1}(f0/d);
    zero off the support N = 0, 3 mod 4."""
    r, N = int(r), int(N)
    assert r >= 1 and N >= 0
    if N == 0:
        return dirichlet_L_neg(2 * r - 1, TRIVIAL)
    if N % 4 in (1, 2):
        return mpq(0)
    D0, f0 = to_fundamental(-N)
    chi = KroneckerCharacter(D0)
    L = dirichlet_L_neg(r - 1, chi)
    s = mpq(0)
    for d in sympy.divisors(f0):
        mu = sympy.mobius(d)
        if mu:
            s += mu * chi(d) * d ** (r - 1) * sympy.divisor_sigma(f0 // d, 2 * r - 1)
    return L * s


def _hurwitz_array(r, bound):
    """[H(r,0), ..., H(r,bound)] with a disk cache."""
    def compute():
        return [str(hurwitz_H(r, N)) for N in range(bound + 1)]

    payload = cache.cached("hurwitz", {"r": r, "bound": bound}, compute)
    return [mpq(s) for s in payload]


def _valid_D(D):
    return D % 4 in (0, 3)


class JacobiForm:
    """Even-weight index-1 Jacobi form; coefficients c(D) for 0 <= D <= prec."""

    __slots__ = ("weight", "coeffs", "prec")

    def __init__(self, weight, coeffs):
        assert weight % 2 == 0, "odd-weight index-1 Jacobi forms are out of scope"
        self.weight = int(weight)
        self.coeffs = list(coeffs)
        self.prec = len(self.coeffs) - 1
        for D in range(self.prec + 1):
            if not _valid_D(D):
                assert not self.coeffs[D], "support violation at D=%d" % D

    def c(self, D):
        if D < 0 or not _valid_D(D):
            return 0
        if D > self.prec:
            raise PrecisionError("c(%d) beyond stored precision %d" % (D, self.prec))
        return self.coeffs[D]

    def is_cusp(self):
        return not self.coeffs[0]

    def __eq__(self, other):
        if not isinstance(other, JacobiForm):
            return NotImplemented
        n = min(self.prec, other.prec)
        return (self.weight == other.weight
                and all(self.coeffs[i] == other.coeffs[i] for i in range(n + 1)))

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        if not isinstance(other, JacobiForm):
            return NotImplemented
        if self.weight != other.weight:
            raise CoefficientError("cannot add Jacobi weights %d and %d"
                                   % (self.weight, other.weight))
        n = min(self.prec, other.prec)
        return JacobiForm(self.weight,
                          [self.coeffs[i] + other.coeffs[i] for i in range(n + 1)])

    __radd__ = __add__

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, a):
        return JacobiForm(self.weight, [a * c for c in self.coeffs])

    def __rmul__(self, a):
        return self.scale(a)

    def elliptic_mul(self, f):
        """Multiply by an elliptic form f: c'(D) = sum_j a_f(j) c(D - 4j)."""
        assert isinstance(f, QExpansion)
        P = min(self.prec, 4 * f.prec + 3)
        out = []
        for D in range(P + 1):
            if not _valid_D(D):
                out.append(0)
                continue
            acc = 0
            for j in range(D // 4 + 1):
                cj = self.coeffs[D - 4 * j]
                if cj:
                    acc = acc + f.coeffs[j] * cj
            out.append(acc)
        return JacobiForm(self.weight + f.weight, out)

    def __repr__(self):
        return "JacobiForm(weight=%d, prec=%d, c3=%s)" % (
            self.weight, self.prec, self.coeffs[3] if self.prec >= 3 else "?")


class PlusForm:
    """Kohnen plus-space form of weight k - 1/2 (k the even Jacobi weight)."""

    __slots__ = ("jacobi_weight", "coeffs", "prec")

    def __init__(self, jacobi_weight, coeffs):
        assert jacobi_weight % 2 == 0
        self.jacobi_weight = int(jacobi_weight)
        self.coeffs = list(coeffs)
        self.prec = len(self.coeffs) - 1
        for n in range(self.prec + 1):
            if n % 4 in (1, 2):
                assert not self.coeffs[n], "plus-space support violation at n=%d" % n

    def half_weight(self):
        return mpq(2 * self.jacobi_weight - 1, 2)

    def c(self, n):
        if n < 0 or n % 4 in (1, 2):
            return 0
        if n > self.prec:
            raise PrecisionError("c(%d) beyond stored precision %d" % (n, self.prec))
        return self.coeffs[n]

    def scale(self, a):
        return PlusForm(self.jacobi_weight, [a * c for c in self.coeffs])

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        assert self.jacobi_weight == other.jacobi_weight
        n = min(self.prec, other.prec)
        return PlusForm(self.jacobi_weight,
                        [self.coeffs[i] + other.coeffs[i] for i in range(n + 1)])

    __radd__ = __add__

    def __eq__(self, other):
        if not isinstance(other, PlusForm):
            return NotImplemented
        n = min(self.prec, other.prec)
        return (self.jacobi_weight == other.jacobi_weight
                and all(self.coeffs[i] == other.coeffs[i] for i in range(n + 1)))


def ez_to_plus(phi):
    """Relabel c(D) as the plus-space coefficient at n = D."""
    return PlusForm(phi.weight, list(phi.coeffs))


def plus_to_ez(g, k=None):
    """Inverse relabeling; k (if given) must match the stored Jacobi weight."""
    if k is not None and k != g.jacobi_weight:
        raise CoefficientError("weight mismatch: plus form belongs to Jacobi weight %d"
                               % g.jacobi_weight)
    return JacobiForm(g.jacobi_weight, list(g.coeffs))


def jacobi_eisenstein(k, P):
    """E_{k,1} with c(D) = H(k-1, D)/H(k-1, 0), normalized c(0) = 1."""
    k = int(k)
    assert k >= 4 and k % 2 == 0
    H = _hurwitz_array(k - 1, P)
    H0 = H[0]
    return JacobiForm(k, [c / H0 for c in H])


def dim_jacobi_cusp(k):
    return max(0, dim_modforms(k - 4) + dim_modforms(k - 6) - 1)


def _echelon_jacobi(forms, columns):
    """Gauss-Jordan a list of JacobiForms on the given coefficient columns."""
    work = list(forms)
    out = []
    cols = iter(columns)
    for _ in range(len(work)):
        piv = None
        while piv is None:
            col = next(cols)  # StopIteration = rank shortfall: raise precision
            for i, f in enumerate(work):
                if f.coeffs[col]:
                    piv = i
                    break
        f = work.pop(piv)
        f = f.scale(mpq(1) / mpq(f.coeffs[col]))
        work = [w - w.coeffs[col] * f if w.coeffs[col] else w for w in work]
        out = [o - o.coeffs[col] * f if o.coeffs[col] else o for o in out]
        out.append(f)
    return out


def jacobi_basis(k, P):
    """Echelonized basis of J_{k,1} (Eisenstein part first), cached on disk."""
    def compute():
        e41 = jacobi_eisenstein(4, P)
        e61 = jacobi_eisenstein(6, P)
        Pq = P // 4
        cands = [e41.elliptic_mul(f) for f in modforms_basis(k - 4, Pq)]
        cands += [e61.elliptic_mul(f) for f in modforms_basis(k - 6, Pq)]
        if not cands:
            return []
        columns = [0] + [D for D in range(3, P + 1) if _valid_D(D)]
        basis = _echelon_jacobi(cands, columns)
        return [[str(c) for c in f.coeffs] for f in basis]

    payload = cache.cached("jacobi-basis", {"k": k, "prec": P}, compute)
    return [JacobiForm(k, [mpq(s) for s in row]) for row in payload]


def jacobi_cusp_basis(k, P):
    """Cusp subspace of J_{k,1}, echelonized on the smallest discriminants.

    The weight-10 and weight-12 generators phi10, phi12 come out normalized
    with c(3) = 1 (they are the first rows at those weights).
    """
    return [f for f in jacobi_basis(k, P) if f.is_cusp()]


def shimura_zeta_D(g, D, P):
    """zeta_D: plus space to weight 2k-2, a(n) = sum_{d|n}(D/d) d^{k-2} c_g(|D|n^2/d^2).

    Needs (-1)^(k-1) D > 0 (even k: negative D), D fundamental, and enough of g:
    |D| P^2 within g's stored precision.
    """
    k = g.jacobi_weight
    D = int(D)
    if not is_fundamental_discriminant(D) or D == 1:
        raise CoefficientError("zeta_D needs a fundamental discriminant, got %r" % D)
    if D > 0:
        raise CoefficientError("sign condition violated: even weight needs D < 0")
    if abs(D) * P * P > g.prec:
        raise PrecisionError("plus form precision %d < |D| P^2 = %d"
                             % (g.prec, abs(D) * P * P))
    aD = abs(D)
    out = [0]
    for n in range(1, P + 1):
        acc = 0
        for d in sympy.divisors(n):
            chi = kronecker(D, d)
            if chi:
                cg = g.coeffs[aD * (n // d) ** 2]
                if cg:
                    acc = acc + int(chi) * d ** (k - 2) * cg
        out.append(acc)
    return QExpansion(2 * k - 2, out)


def _linear_solve(M, rhs, disc):
    """Solve the square system M x = rhs exactly over Q or Q(sqrt(disc))."""
    n = len(rhs)

    def lift(x):
        if disc:
            return x if isinstance(x, QuadElement) else QuadElement(x, 0, disc)
        return mpq(x)

    rows = [[lift(M[i][j]) for j in range(n)] + [lift(rhs[i])] for i in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c]), None)
        if piv is None:
            raise CoefficientError("singular system in inverse Shimura solve")
        rows[c], rows[piv] = rows[piv], rows[c]
        inv = lift(1) / rows[c][c]
        rows[c] = [x * inv for x in rows[c]]
        for i in range(n):
            if i != c and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return [rows[i][n] for i in range(n)]


def inverse_shimura(f, k, D, P):
    """The plus form g of weight k - 1/2 with zeta_D g = f exactly, through
    coefficient precision P on g.

    f must be a newform of weight 2k - 2; the solution has c_g(|D|) = a_f(1) = 1.
    """
    assert f.weight == 2 * k - 2
    dim = dim_jacobi_cusp(k)
    assert dim > 0, "no cusp forms at Jacobi weight %d" % k
    rows = dim + 2
    need = max(P, abs(D) * rows * rows)
    basis = jacobi_cusp_basis(k, need)
    assert len(basis) == dim
    imgs = [shimura_zeta_D(ez_to_plus(b), D, rows) for b in basis]
    M = [[imgs[j].coeffs[i + 1] for j in range(dim)] for i in range(dim)]
    rhs = [f.a(i + 1) for i in range(dim)]
    sol = _linear_solve(M, rhs, f.disc)
    # overdetermined rows certify the solve (and the Hecke equivariance)
    for i in range(dim, rows):
        lhs = sum(sol[j] * imgs[j].coeffs[i + 1] for j in range(dim))
        assert lhs == f.a(i + 1), "inverse Shimura image mismatch at a(%d)" % (i + 1)
    g = 0
    for j in range(dim):
        if sol[j]:
            g = g + ez_to_plus(basis[j]).scale(sol[j])
    assert g.c(abs(D)) == 1
    return g
