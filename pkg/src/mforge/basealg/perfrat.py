"""Rational functions in t and p-power roots of theta over Fq.

An element at root level e is a reduced fraction of bivariate polynomials
in t and y, where y stands for theta**(1/p**e).  Values are always stored at
their minimal level, so equality is structural.  The Frobenius twist raises
theta to the q-th power and fixes t; its inverse raises the level.
"""

from fractions import Fraction

from ..errors import ParseError
from . import ffield as ff
from .grammar import parse_expr
from .poly import format_coeff

# Bivariate polynomials are dicts {(i, j): c} for c * t**i * y**j.


def _b_add(F, a, b):
    out = dict(a)
    for k, c in b.items():
        v = F.add(out.get(k, 0), c)
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def _b_neg(F, a):
    return {k: F.neg(c) for k, c in a.items()}


def _b_mul(F, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = {}
    add, mul = F.add, F.mul
    for (i1, j1), c1 in b.items():
        for (i2, j2), c2 in a.items():
            k = (i1 + i2, j1 + j2)
            v = add(out.get(k, 0), mul(c1, c2))
            if v:
                out[k] = v
            else:
                out.pop(k, None)
    return out


def _b_scale(F, a, c):
    if c == 0:
        return {}
    return {k: F.mul(v, c) for k, v in a.items()}


def _b_lead(a):
    """Leading coefficient for the (t-degree, y-degree) lexicographic order."""
    return a[max(a)]


# recursive form: list indexed by t-degree of univariate y-polynomials

def _to_rec(a):
    if not a:
        return []
    n = max(i for i, _ in a)
    rec = [[] for _ in range(n + 1)]
    for (i, j), c in a.items():
        row = rec[i]
        if len(row) <= j:
            row.extend([0] * (j + 1 - len(row)))
        row[j] = c
    return rec


def _from_rec(rec):
    out = {}
    for i, row in enumerate(rec):
        for j, c in enumerate(row):
            if c:
                out[(i, j)] = c
    return out


def _rec_strip(rec):
    while rec and not rec[-1]:
        rec.pop()
    return rec


def _rec_content(F, rec):
    g = []
    for row in rec:
        if row:
            g = ff.pgcd(F, g, row) if g else ff.pmonic(F, row)
            if len(g) == 1:
                break
    return g


def _rec_div_scalar(F, rec, c):
    if c == [1]:
        return rec
    out = []
    for row in rec:
        if row:
            qt, r = ff.pdivmod(F, row, c)
            out.append(qt)
        else:
            out.append([])
    return out


def _rec_primitive(F, rec):
    rec = _rec_strip(rec)
    if not rec:
        return rec
    return _rec_div_scalar(F, rec, _rec_content(F, rec))


def _rec_prem(F, A, B):
    """Pseudo-remainder of A by B in Fq[y][t] (up to a factor in Fq[y])."""
    R = [list(r) for r in A]
    n = len(B) - 1
    lb = B[-1]
    while len(R) - 1 >= n and R:
        lr = R[-1]
        shift = len(R) - 1 - n
        R = [ff.pmul(F, lb, r) for r in R]
        for k, b in enumerate(B):
            if b:
                R[k + shift] = ff.psub(F, R[k + shift], ff.pmul(F, lr, b))
        _rec_strip(R)
    return R


def _rec_divexact(F, A, B):
    """Exact quotient A / B in Fq[y][t]."""
    R = [list(r) for r in A]
    n = len(B) - 1
    lb = B[-1]
    Q = [[] for _ in range(max(len(R) - n, 0))]
    while R and len(R) - 1 >= n:
        shift = len(R) - 1 - n
        c, rem = ff.pdivmod(F, R[-1], lb)
        if rem:
            raise ArithmeticError('inexact bivariate division')
        Q[shift] = c
        for k, b in enumerate(B):
            if b:
                R[k + shift] = ff.psub(F, R[k + shift], ff.pmul(F, c, b))
        _rec_strip(R)
    if R:
        raise ArithmeticError('inexact bivariate division')
    return Q


def _b_gcd(F, a, b):
    """Monic-normalized gcd of two bivariate polynomials."""
    if not a:
        return _b_normal(F, b)
    if not b:
        return _b_normal(F, a)
    A, B = _to_rec(a), _to_rec(b)
    ca, cb = _rec_content(F, A), _rec_content(F, B)
    c = ff.pgcd(F, ca, cb)
    A = _rec_div_scalar(F, A, ca)
    B = _rec_div_scalar(F, B, cb)
    if len(A) < len(B):
        A, B = B, A
    while B and len(B) > 1:
        R = _rec_primitive(F, _rec_prem(F, A, B))
        A, B = B, R
    if B:  # B is a nonzero constant in t: primitive parts are coprime
        A = [[1]]
    g = [ff.pmul(F, c, row) for row in A]
    return _b_normal(F, _from_rec(g))


def _b_normal(F, a):
    if not a:
        return a
    return _b_scale(F, a, F.inv(_b_lead(a)))


def _b_divexact(F, a, b):
    if len(b) == 1:
        (k, c), = b.items()
        inv = F.inv(c)
        out = {}
        for (i, j), v in a.items():
            if i < k[0] or j < k[1]:
                raise ArithmeticError('inexact bivariate division')
            out[(i - k[0], j - k[1])] = F.mul(v, inv)
        return out
    return _from_rec(_rec_divexact(F, _to_rec(a), _to_rec(b)))


def _b_scale_y(a, k):
    return {(i, j * k): c for (i, j), c in a.items()}


def _b_key(a):
    return tuple(sorted(a.items()))


class PerfRatFun:
    """Element of Fq(t, theta**(1/p**level)) as a reduced fraction.

    ``num`` and ``den`` are dicts {(i, j): c} in t and y = theta**(1/p**level);
    the denominator is normalized to leading coefficient 1.
    """

    __slots__ = ('field', 'level', 'num', 'den', '_hash')

    def __init__(self, field, num, den=None, level=0, reduce=True):
        self.field = field
        if den is None:
            den = {(0, 0): 1}
        if not den:
            raise ZeroDivisionError('zero denominator')
        if reduce:
            num, den, level = _canonical(field, num, den, level)
        self.num = num
        self.den = den
        self.level = level
        self._hash = None

    # constructors

    @classmethod
    def const(cls, field, c):
        """Embed an element of Fq given by its encoding."""
        return cls(field, {(0, 0): c} if c else {}, reduce=False)

    @classmethod
    def from_int(cls, field, n):
        c = field.from_int(n)
        return cls(field, {(0, 0): c} if c else {}, reduce=False)

    @classmethod
    def t(cls, field):
        return cls(field, {(1, 0): 1}, reduce=False)

    @classmethod
    def theta(cls, field):
        return cls(field, {(0, 1): 1}, reduce=False)

    @classmethod
    def theta_power(cls, field, e):
        """theta**e for a rational e whose denominator is a power of p."""
        e = Fraction(e)
        level, den = 0, e.denominator
        while den % field.p == 0:
            den //= field.p
            level += 1
        if den != 1:
            raise ValueError('theta exponent denominator must be a power of p')
        j = e.numerator * field.p ** level // e.denominator
        if j >= 0:
            return cls(field, {(0, j): 1}, level=level)
        return cls(field, {(0, 0): 1}, {(0, -j): 1}, level=level)

    @classmethod
    def from_poly_t(cls, poly):
        """Embed an element of A = Fq[t]."""
        return cls(poly.field, {(i, 0): c for i, c in enumerate(poly.coeffs) if c}, reduce=False)

    @classmethod
    def from_poly_theta(cls, field, coeffs):
        return cls(field, {(0, j): c for j, c in enumerate(coeffs) if c}, reduce=False)

    def _new(self, num, den, level):
        return PerfRatFun(self.field, num, den, level)

    # structure

    @property
    def q(self):
        return self.field.order

    def is_zero(self):
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_one(self):
        return self.num == {(0, 0): 1} and self.den == {(0, 0): 1}

    def is_constant(self):
        """True for elements of Fq."""
        return (not self.num or set(self.num) == {(0, 0)}) and set(self.den) == {(0, 0)}

    def constant_value(self):
        if not self.is_constant():
            raise ValueError('not a constant')
        return self.num.get((0, 0), 0)

    def t_degree(self):
        """(deg_t num, deg_t den)."""
        return (max((i for i, _ in self.num), default=-1), max(i for i, _ in self.den))

    def is_theta_only(self):
        return all(i == 0 for i, _ in self.num) and all(i == 0 for i, _ in self.den)

    def is_poly_t(self):
        """True when the denominator does not involve t."""
        return all(i == 0 for i, _ in self.den)

    def t_coeffs(self):
        """Coefficients of t**i, as theta-only values; requires is_poly_t()."""
        if not self.is_poly_t():
            raise ValueError('denominator involves t')
        rows = {}
        for (i, j), c in self.num.items():
            rows.setdefault(i, {})[(0, j)] = c
        n = max(rows, default=-1)
        return [self._new(rows.get(i, {}), self.den, self.level) for i in range(n + 1)]

    def numerator(self):
        return PerfRatFun(self.field, self.num, None, self.level)

    def denominator(self):
        return PerfRatFun(self.field, self.den, None, self.level)

    def lift(self, level):
        """(num, den) written at a higher root level."""
        if level < self.level:
            raise ValueError('cannot lower the root level')
        k = self.field.p ** (level - self.level)
        if k == 1:
            return self.num, self.den
        return _b_scale_y(self.num, k), _b_scale_y(self.den, k)

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, PerfRatFun):
            return other
        if isinstance(other, int):
            return PerfRatFun.from_int(self.field, other)
        return NotImplemented

    def _common(self, other):
        lv = max(self.level, other.level)
        return self.lift(lv), other.lift(lv), lv

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.num:
            return self
        if not self.num:
            return other
        F = self.field
        (n1, d1), (n2, d2), lv = self._common(other)
        if d1 == d2:
            return self._new(_b_add(F, n1, n2), d1, lv)
        num = _b_add(F, _b_mul(F, n1, d2), _b_mul(F, n2, d1))
        return self._new(num, _b_mul(F, d1, d2), lv)

    __radd__ = __add__

    def __neg__(self):
        return PerfRatFun(self.field, _b_neg(self.field, self.num), self.den, self.level,
                          reduce=False)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.num or not other.num:
            return PerfRatFun(self.field, {}, reduce=False)
        F = self.field
        (n1, d1), (n2, d2), lv = self._common(other)
        if d2 == {(0, 0): 1} and d1 == d2:
            return self._new(_b_mul(F, n1, n2), d1, lv)
        return self._new(_b_mul(F, n1, n2), _b_mul(F, d1, d2), lv)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError('inverse of zero')
        return self._new(self.den, self.num, self.level)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if isinstance(n, Fraction):
            if n.denominator == 1:
                n = int(n)
            else:
                return _root_power(self, n)
        if n < 0:
            return self.inverse() ** (-n)
        result = PerfRatFun.from_int(self.field, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def frobenius(self, k=1):
        """Apply theta -> theta**(q**k), fixing t and Fq."""
        return perf_frobenius(self, k)

    # comparison

    def __eq__(self, other):
        if isinstance(other, int):
            other = PerfRatFun.from_int(self.field, other)
        if not isinstance(other, PerfRatFun):
            return NotImplemented
        return (self.level == other.level and self.num == other.num and self.den == other.den)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.level, _b_key(self.num), _b_key(self.den)))
        return self._hash

    # printing

    def __str__(self):
        num = _format_b(self.num, self.level, self.field)
        if self.den == {(0, 0): 1}:
            return num
        den = _format_b(self.den, self.level, self.field)
        if len(self.num) > 1:
            num = f'({num})'
        if not _is_bare_symbol(self.den):
            den = f'({den})'
        return f'{num}/{den}'

    def __repr__(self):
        return f'PerfRatFun({self})'


def _canonical(F, num, den, level):
    num = {k: c for k, c in num.items() if c}
    den = {k: c for k, c in den.items() if c}
    if not den:
        raise ZeroDivisionError('zero denominator')
    if not num:
        return {}, {(0, 0): 1}, 0
    if len(den) == 1:
        (di, dj), = den
        if di or dj:
            mi = min(di, min(i for i, _ in num))
            mj = min(dj, min(j for _, j in num))
            if mi or mj:
                num = {(i - mi, j - mj): c for (i, j), c in num.items()}
                den = {(di - mi, dj - mj): den[(di, dj)]}
    elif len(num) > 1 or len(den) > 1:
        g = _b_gcd(F, num, den)
        if len(g) > 1 or (0, 0) not in g:
            num = _b_divexact(F, num, g)
            den = _b_divexact(F, den, g)
    lead = _b_lead(den)
    if lead != 1:
        inv = F.inv(lead)
        num = _b_scale(F, num, inv)
        den = _b_scale(F, den, inv)
    return _min_level(F.p, num, den, level)


def _min_level(p, num, den, level):
    while level > 0 and all(j % p == 0 for _, j in num) and all(j % p == 0 for _, j in den):
        num = {(i, j // p): c for (i, j), c in num.items()}
        den = {(i, j // p): c for (i, j), c in den.items()}
        level -= 1
    return num, den, level


def perf_frobenius(f, k):
    """Twist theta-coefficients by x -> x**(q**k); t and Fq are fixed.

    For k >= 0 the y-exponents are scaled by q**k; for k < 0 the same
    fraction is reinterpreted at a root level raised by k*log_p(q).
    """
    if k == 0 or not f.num:
        return f
    F = f.field
    q = F.order
    if k > 0:
        m = q ** k
        return PerfRatFun(F, _b_scale_y(f.num, m), _b_scale_y(f.den, m), f.level)
    e0 = 0
    while F.p ** e0 < q:
        e0 += 1
    num, den, level = _min_level(F.p, f.num, f.den, f.level + e0 * (-k))
    return PerfRatFun(F, num, den, level, reduce=False)


def _root_power(f, e):
    """f**e for a fractional e, defined when f is a monic monomial in theta."""
    if f.is_theta_only() and len(f.num) == 1 and len(f.den) == 1:
        (ij, c), = f.num.items()
        (ij2, c2), = f.den.items()
        if c == 1 and c2 == 1:
            r = Fraction(ij[1] - ij2[1], f.field.p ** f.level) * e
            return PerfRatFun.theta_power(f.field, r)
    raise ParseError('fractional powers are only defined for powers of th')


def _is_bare_symbol(b):
    if len(b) != 1:
        return False
    ((i, j), c), = b.items()
    return c == 1 and (i == 0 or j == 0)


def _format_b(b, level, F):
    if not b:
        return '0'
    scale = F.p ** level
    terms = []
    for (i, j) in sorted(b, reverse=True):
        c = b[(i, j)]
        parts = []
        if i:
            parts.append('t' if i == 1 else f't^{i}')
        if j:
            e = Fraction(j, scale)
            if e == 1:
                parts.append('th')
            elif e.denominator == 1:
                parts.append(f'th^{e.numerator}')
            else:
                parts.append(f'th^({e.numerator}/{e.denominator})')
        cs = format_coeff(c, F)
        if not parts:
            terms.append(cs)
        elif c == 1:
            terms.append('*'.join(parts))
        else:
            terms.append('*'.join([cs] + parts))
    return '+'.join(terms)


def perf_symbols(field):
    """Symbol table of the grammar: t, th and, for non-prime Fq, the generator g."""
    symbols = {'t': PerfRatFun.t(field), 'th': PerfRatFun.theta(field)}
    if field.base is not None:
        symbols['g'] = PerfRatFun.const(field, field.base.order)
    return symbols


def parse_perf(text, field):
    """Parse the polynomial grammar into a PerfRatFun over ``field``."""
    return parse_expr(str(text), perf_symbols(field), lambda n: PerfRatFun.from_int(field, n),
                      _perf_power)


def _perf_power(base, exp):
    return base ** exp
