"""Truncated Puiseux series modelling elements of C_infinity.

An element is ``sum c_e * u**e`` with ``u = theta**(-1/m)``, coefficients in
a finite field tower over Fq, and a precision ``prec``: every exponent
``>= prec`` is unknown.  ``prec is None`` marks an exact value (a finite
sum); an exact value with no terms is the certified zero.  Norms are kept as
exact base-q logarithms: ``|x| = q**(-e0/m)`` for leading exponent e0.
"""

from fractions import Fraction
from math import gcd

from .basealg import ffield as ff
from .errors import DivisionByZero, NoContraction, PrecisionExhausted

__all__ = ['CInf', 'DEFAULT_U_PREC', 'additive_apply', 'cinf_arith', 'cinf_frobenius',
           'mat_det', 'mat_inverse', 'mat_mul', 'mat_vec', 'newton_additive', 'nth_root',
           'root_field', 'solve_artin_schreier']

DEFAULT_U_PREC = 60


def _lcm(a, b):
    return a * b // gcd(a, b)


def _pmin(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _padd(a, b):
    return None if a is None or b is None else a + b


def _common_field(F, G):
    if F == G:
        return F
    if F.contains(G):
        return F
    if G.contains(F):
        return G
    raise ValueError(f'incompatible coefficient fields {F} and {G}')


class CInf:
    """Immutable truncated element of C_infinity."""

    __slots__ = ('field', 'q', 'm', 'terms', 'prec')

    def __init__(self, field, q, m, terms, prec=None):
        self.field = field
        self.q = q
        self.m = m
        if prec is not None:
            terms = {e: c for e, c in terms.items() if c and e < prec}
        else:
            terms = {e: c for e, c in terms.items() if c}
        self.terms = terms
        self.prec = prec

    # constructors

    @classmethod
    def zero(cls, field, q, m=1, prec=None):
        return cls(field, q, m, {}, prec)

    @classmethod
    def const(cls, field, q, c, m=1):
        return cls(field, q, m, {0: c})

    @classmethod
    def theta_power(cls, field, q, k, m=1):
        """theta**k for k with k*m integral; exact."""
        k = Fraction(k)
        mm = _lcm(m, k.denominator)
        return cls(field, q, mm, {int(-k * mm): 1})

    @classmethod
    def from_theta_poly(cls, field, q, coeffs, m=1):
        """Exact value of sum coeffs[j] * theta**j (coefficients in a subfield)."""
        return cls(field, q, m, {-m * j: c for j, c in enumerate(coeffs) if c})

    # basic structure

    def _new(self, terms, prec, m=None, field=None):
        return CInf(field or self.field, self.q, m or self.m, terms, prec)

    @property
    def exact(self):
        return self.prec is None

    def is_certified_zero(self):
        return self.prec is None and not self.terms

    def is_zero_to_precision(self):
        return not self.terms

    def leading(self):
        """(exponent, coefficient) of the leading term."""
        if not self.terms:
            raise PrecisionExhausted('no known nonzero term')
        e = min(self.terms)
        return e, self.terms[e]

    def valuation(self):
        """Exact valuation e0/m, where v(1/theta) = 1."""
        return Fraction(self.leading()[0], self.m)

    def norm_log(self):
        """log_q of the norm; None for the certified zero."""
        if self.is_certified_zero():
            return None
        return -self.valuation()

    def floor_log(self):
        """log_q of the precision floor (None when exact)."""
        return None if self.prec is None else Fraction(-self.prec, self.m)

    def norm_log_bound(self):
        """Upper bound for log_q of the norm; None means the value is certified zero."""
        if self.terms:
            return -self.valuation()
        return self.floor_log()

    def rescale(self, m):
        """Same value written with ramification index m (a multiple of self.m)."""
        if m == self.m:
            return self
        if m % self.m:
            raise ValueError('ramification index must be a multiple')
        k = m // self.m
        return CInf(self.field, self.q, m, {e * k: c for e, c in self.terms.items()},
                    None if self.prec is None else self.prec * k)

    def with_field(self, field):
        if field == self.field:
            return self
        if not field.contains(self.field):
            raise ValueError('target field does not contain the coefficient field')
        return CInf(field, self.q, self.m, self.terms, self.prec)

    def truncate(self, prec):
        """Forget everything from exponent ``prec`` on."""
        return self._new(self.terms, _pmin(self.prec, prec))

    def truncate_log(self, bound_log):
        """Limit precision so that the unknown part has norm at most q**bound_log."""
        if bound_log is None:
            return self
        return self.truncate(_ceil(-bound_log * self.m))

    def _align(self, other):
        if isinstance(other, int):
            other = CInf.const(self.field, self.q, self.field.from_int(other), self.m)
        m = _lcm(self.m, other.m)
        field = _common_field(self.field, other.field)
        a = self.rescale(m).with_field(field)
        b = other.rescale(m).with_field(field)
        return a, b

    # arithmetic

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        a, b = self._align(other)
        prec = _pmin(a.prec, b.prec)
        F = a.field
        out = dict(a.terms)
        for e, c in b.terms.items():
            v = F.add(out.get(e, 0), c)
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return a._new(out, prec)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return self._new({e: F.neg(c) for e, c in self.terms.items()}, self.prec)

    def __sub__(self, other):
        if isinstance(other, int):
            other = CInf.const(self.field, self.q, self.field.from_int(other), self.m)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            c = self.field.from_int(other)
            return self.scale(c)
        a, b = self._align(other)
        return _mul(a, b)

    __rmul__ = __mul__

    def scale(self, c):
        """Multiply by an element c of the coefficient field."""
        if c == 0:
            return self._new({}, None)
        F = self.field
        return self._new({e: F.mul(v, c) for e, v in self.terms.items()}, self.prec)

    def shift(self, k):
        """Multiply by u**k."""
        return self._new({e + k: c for e, c in self.terms.items()}, _padd(self.prec, k))

    def mul_theta(self, k):
        """Multiply by theta**k (k integral)."""
        return self.shift(-k * self.m)

    def inverse(self, rel_prec=None):
        """1/self to relative precision ``rel_prec`` (required when self is exact)."""
        if not self.terms:
            raise DivisionByZero('division by a value with no known nonzero term')
        v, c = self.leading()
        if self.prec is not None:
            rel = self.prec - v
            rel_prec = rel if rel_prec is None else min(rel, rel_prec)
        elif len(self.terms) == 1:
            return self._new({-v: self.field.inv(c)}, None)
        elif rel_prec is None:
            raise ValueError('inverse of an exact non-monomial needs a precision')
        return _series_inverse(self, v, rel_prec)

    def __truediv__(self, other):
        if isinstance(other, int):
            other = CInf.const(self.field, self.q, self.field.from_int(other), self.m)
        return self.div(other)

    def div(self, other, prec=None):
        """self / other; ``prec`` caps the absolute precision when both are exact."""
        a, b = self._align(other)
        if b.is_zero_to_precision():
            raise DivisionByZero('division by a value with no known nonzero term')
        if not a.terms:
            vb = b.leading()[0]
            return a._new({}, None if a.prec is None else a.prec - vb)
        va, vb = a.leading()[0], b.leading()[0]
        rel = None
        for x, vx in ((a, va), (b, vb)):
            if x.prec is not None:
                rel = _pmin(rel, x.prec - vx)
        if rel is None:
            if len(b.terms) == 1:
                return _mul(a, b.inverse())
            if prec is None:
                raise ValueError('exact division needs a precision')
            rel = prec - (va - vb)
            res = _mul(a, b.inverse(rel))
            return res.truncate(prec)
        return _mul(a, b.inverse(rel))

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = CInf.const(self.field, self.q, 1, self.m)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def frobenius(self, k=1):
        return cinf_frobenius(self, k)

    # comparison and printing

    def agrees(self, other):
        """True when both values coincide on every exponent known to both."""
        a, b = self._align(other)
        prec = _pmin(a.prec, b.prec)
        keys = set(a.terms) | set(b.terms)
        return all(a.terms.get(e, 0) == b.terms.get(e, 0) for e in keys if prec is None or e < prec)

    def __eq__(self, other):
        if not isinstance(other, CInf):
            return NotImplemented
        a, b = self._align(other)
        return a.terms == b.terms and a.prec == b.prec

    def __hash__(self):
        return hash((tuple(sorted(self.terms.items())), self.prec, self.m))

    def dump(self):
        """Stable text form ``sum c_e * u^e [prec N, m M]``."""
        body = ' + '.join(f'{c}*u^{e}' for e, c in sorted(self.terms.items())) or '0'
        prec = 'exact' if self.prec is None else str(self.prec)
        return f'{body} [prec {prec}, m {self.m}]'

    def __repr__(self):
        return f'CInf({self.dump()})'


def _ceil(x):
    x = Fraction(x)
    return -((-x.numerator) // x.denominator)


def _mul(a, b):
    F = a.field
    if not a.terms or not b.terms:
        if a.prec is None and not a.terms or b.prec is None and not b.terms:
            return a._new({}, None)
        prec = None
        if a.prec is not None:
            prec = _pmin(prec, a.prec + (min(b.terms) if b.terms else b.prec))
        if b.prec is not None:
            prec = _pmin(prec, b.prec + (min(a.terms) if a.terms else a.prec))
        return a._new({}, prec)
    va, vb = min(a.terms), min(b.terms)
    prec = None
    if a.prec is not None:
        prec = a.prec + vb
    if b.prec is not None:
        prec = _pmin(prec, b.prec + va)
    out = {}
    add, mul = F.add, F.mul
    bt = sorted(b.terms.items())
    for e1, c1 in a.terms.items():
        for e2, c2 in bt:
            e = e1 + e2
            if prec is not None and e >= prec:
                break
            v = add(out.get(e, 0), mul(c1, c2))
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return a._new(out, prec)


def _series_inverse(x, v, rel_prec):
    """Inverse of x (leading exponent v) known to absolute precision -v + rel_prec."""
    F = x.field
    c0inv = F.inv(x.terms[v])
    rest = [(e - v, c) for e, c in sorted(x.terms.items()) if e != v and e - v < rel_prec]
    w = [0] * max(rel_prec, 0)
    if rel_prec > 0:
        w[0] = c0inv
    for k in range(1, rel_prec):
        acc = 0
        for i, c in rest:
            if i > k:
                break
            wk = w[k - i]
            if wk:
                acc = F.add(acc, F.mul(c, wk))
        if acc:
            w[k] = F.neg(F.mul(acc, c0inv))
    return x._new({k - v: c for k, c in enumerate(w) if c}, -v + rel_prec)


def cinf_arith(x, y, op):
    """Binary operation by name: 'add', 'sub', 'mul' or 'div'."""
    if op == 'add':
        return x + y
    if op == 'sub':
        return x - y
    if op == 'mul':
        return x * y
    if op == 'div':
        return x / y
    raise ValueError(f'unknown operation {op!r}')


def cinf_frobenius(x, k):
    """Apply c -> c**(q**k); exponents scale by q**k (m grows when k < 0 requires it)."""
    if k == 0:
        return x
    F, q = x.field, x.q
    N = F.order - 1
    if k > 0:
        s = q ** k
        e_pow = s % N if N else 1
        terms = {e * s: F.pow(c, e_pow) for e, c in x.terms.items()}
        return x._new(terms, None if x.prec is None else x.prec * s)
    s = q ** (-k)
    e_pow = pow(q, k, N) if N > 1 else 1
    terms = {e: F.pow(c, e_pow) for e, c in x.terms.items()}
    divisible = all(e % s == 0 for e in terms) and (x.prec is None or x.prec % s == 0)
    if divisible:
        return x._new({e // s: c for e, c in terms.items()},
                      None if x.prec is None else x.prec // s)
    return CInf(F, q, x.m * s, terms, x.prec)


def root_field(field, c, n):
    """Smallest tower extension of ``field`` holding an n-th root of c, and the roots there."""
    for k in range(1, n * 4 + 1):
        G = ff.extension(field, k) if k > 1 else field
        roots = G.nth_roots(c, n)
        if roots:
            return G, roots
    raise ValueError('no root found in small extensions')


def nth_root(x, n, branch=0):
    """An n-th root of x for n prime to p; branches are ordered by leading coefficient."""
    if n % x.field.p == 0:
        raise ValueError('root order must be prime to p')
    if x.is_certified_zero():
        return x
    v, c = x.leading()
    g = gcd(v, n)
    m = x.m * (n // g)
    x = x.rescale(m)
    v, c = x.leading()
    G, roots = root_field(x.field, c, n)
    if not 0 <= branch < len(roots):
        raise ValueError(f'branch {branch} out of range ({len(roots)} roots)')
    r0 = roots[branch]
    x = x.with_field(G)
    # x = c u^v (1 + z); root = r0 u^(v/n) (1 + z)^(1/n)
    z = x.shift(-v).scale(G.inv(c)) - 1
    prec = z.prec
    lead = CInf(G, x.q, m, {v // n: r0})
    if z.is_zero_to_precision():
        return lead * (z + 1)
    series = _binomial_series(z, Fraction(1, n), prec)
    return lead * series


def _binomial_series(z, alpha, prec):
    """(1 + z)**alpha for z of positive valuation, to absolute precision prec."""
    F = z.field
    p = F.p
    vz = min(z.terms) if z.terms else prec
    if prec is None:
        raise ValueError('binomial series of an exact value needs a precision')
    total = CInf.const(F, z.q, 1, z.m).truncate(prec)
    term = CInf.const(F, z.q, 1, z.m)
    coef = Fraction(1)
    k = 0
    while True:
        k += 1
        if vz * k >= prec:
            break
        coef = coef * (alpha - k + 1) / k
        term = (term * z).truncate(prec)
        cm = coef.numerator * pow(coef.denominator, -1, p) % p
        if cm:
            total = total + term.scale(F.from_int(cm))
    return total


def newton_additive(A, c, x0, max_iter=200):
    """Solve sum_k A[k] x^[q^k] = c by x <- x - A0^{-1}(rho(x) - c).

    ``A`` is a sequence of square matrices (lists of rows of CInf), ``c`` and
    ``x0`` are vectors.  The first step must strictly decrease the residual
    norm.  The returned vector has its precision capped by the distance to
    the true root implied by the final residual.
    """
    A0inv = mat_inverse(A[0])
    x = list(x0)
    r = _vsub(additive_apply(A, x), c)
    prev = _vnorm_bound(r)
    first = True
    for _ in range(max_iter):
        if all(ri.is_zero_to_precision() for ri in r):
            break
        step = mat_vec(A0inv, r)
        x_new = _vsub(x, step)
        r_new = _vsub(additive_apply(A, x_new), c)
        cur = _vnorm_bound(r_new)
        if first and not _decreases(cur, prev):
            raise NoContraction('first Newton step does not decrease the residual')
        first = False
        if not _decreases(cur, prev):
            break
        x, r, prev = x_new, r_new, cur
    if not all(ri.is_zero_to_precision() for ri in r):
        raise PrecisionExhausted('Newton iteration stalled above the precision floor')
    # the root lies within |A0^{-1}| * |residual| of x
    bound = _vnorm_bound(r)
    scale = max(_mnorm(A0inv), default=None)
    if bound is not None and scale is not None:
        x = [xi.truncate_log(bound + scale) for xi in x]
    return x


def _decreases(cur, prev):
    if cur is None:
        return True
    if prev is None:
        return False
    return cur < prev


def _vnorm_bound(v):
    vals = [x.norm_log_bound() for x in v]
    vals = [b for b in vals if b is not None]
    return max(vals) if vals else None


def _mnorm(M):
    out = []
    for row in M:
        for x in row:
            b = x.norm_log_bound()
            if b is not None:
                out.append(b)
    return out


def _vsub(a, b):
    return [x - y for x, y in zip(a, b)]


def additive_apply(A, x):
    """sum_k A[k] applied to the entrywise q**k-th power of x."""
    out = None
    for k, Ak in enumerate(A):
        xk = [cinf_frobenius(xi, k) for xi in x]
        term = mat_vec(Ak, xk)
        out = term if out is None else [a + b for a, b in zip(out, term)]
    return out


def mat_vec(M, v):
    out = []
    for row in M:
        acc = None
        for a, b in zip(row, v):
            if a.is_certified_zero():
                continue
            term = a * b
            acc = term if acc is None else acc + term
        if acc is None:
            acc = CInf.zero(v[0].field, v[0].q, v[0].m)
        out.append(acc)
    return out


def mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = None
            for l in range(k):
                if A[i][l].is_certified_zero() or B[l][j].is_certified_zero():
                    continue
                term = A[i][l] * B[l][j]
                acc = term if acc is None else acc + term
            if acc is None:
                acc = CInf.zero(A[0][0].field, A[0][0].q, A[0][0].m)
            row.append(acc)
        out.append(row)
    return out


def mat_inverse(M):
    """Inverse by Gauss-Jordan elimination with largest-norm pivots."""
    n = len(M)
    one = CInf.const(M[0][0].field, M[0][0].q, 1, M[0][0].m)
    zero = CInf.zero(M[0][0].field, M[0][0].q, M[0][0].m)
    aug = [list(M[i]) + [one if i == j else zero for j in range(n)] for i in range(n)]
    for col in range(n):
        best, best_norm = None, None
        for r in range(col, n):
            if aug[r][col].terms:
                nl = aug[r][col].norm_log()
                if best is None or nl > best_norm:
                    best, best_norm = r, nl
        if best is None:
            raise DivisionByZero('matrix is singular to working precision')
        aug[col], aug[best] = aug[best], aug[col]
        piv = aug[col][col]
        aug[col] = [x / piv if not x.is_certified_zero() else x for x in aug[col]]
        for r in range(n):
            if r != col and not aug[r][col].is_certified_zero():
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def mat_det(M):
    """Determinant by cofactor expansion (small matrices)."""
    n = len(M)
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    acc = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * mat_det(minor)
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    return acc


def solve_artin_schreier(y, prec=None):
    """A solution x of x - x**q = y.

    For |y| < 1 this is the branch sum y**(q**k), which has the same norm
    as y.  A constant term is handled in the residue field when solvable
    there.  Exact inputs need an explicit precision.
    """
    if prec is None:
        prec = y.prec
    if prec is None:
        if y.is_certified_zero():
            return y
        raise ValueError('exact input needs a precision')
    y = y.truncate(prec)
    if y.terms and min(y.terms) < 0:
        raise PrecisionExhausted('Artin-Schreier equation with |y| > 1 leaves the tame model')
    x = CInf.zero(y.field, y.q, y.m, prec)
    c0 = y.terms.get(0, 0)
    if c0:
        F, q = y.field, y.q
        sol = [a for a in F.elements() if F.sub(a, F.pow(a, q)) == c0]
        if not sol:
            raise PrecisionExhausted('constant term has no Artin-Schreier root '
                                     'in the coefficient field')
        x = x + CInf.const(F, q, sol[0], y.m)
        y = y - CInf.const(F, q, c0, y.m)
    term = y
    while term.terms:
        x = x + term
        term = cinf_frobenius(term, 1).truncate(prec)
    return x.truncate(prec)
