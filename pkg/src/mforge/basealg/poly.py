"""Univariate polynomials over a finite field; PolyA is the case Fq[t]."""

from . import ffield as ff


class Poly:
    """Immutable dense polynomial over a FiniteField, coefficient i of t**i."""

    __slots__ = ('field', 'coeffs')

    def __init__(self, field, coeffs=()):
        self.field = field
        self.coeffs = tuple(ff.pstrip(coeffs))

    @classmethod
    def from_ints(cls, field, ints):
        """Coefficients given as integers, reduced mod p."""
        return cls(field, [field.from_int(c) for c in ints])

    @classmethod
    def monomial(cls, field, n, c=1):
        return cls(field, [0] * n + [c])

    @classmethod
    def t(cls, field):
        return cls(field, [0, 1])

    def _new(self, coeffs):
        return Poly(self.field, coeffs)

    # basic queries

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def lc(self):
        return self.coeffs[-1] if self.coeffs else 0

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly(self.field, [self.field.from_int(other)])
        return isinstance(other, Poly) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, int):
            return Poly(self.field, [self.field.from_int(other)])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._new(ff.padd(self.field, self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return self._new([self.field.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._new(ff.psub(self.field, self.coeffs, other.coeffs))

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._new(ff.pmul(self.field, self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def scale(self, c):
        return self._new(ff.pscale(self.field, self.coeffs, c))

    def __pow__(self, n):
        result = Poly(self.field, [1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        q, r = ff.pdivmod(self.field, self.coeffs, other.coeffs)
        return self._new(q), self._new(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other):
        return not (other % self)

    def monic(self):
        return self._new(ff.pmonic(self.field, self.coeffs))

    def gcd(self, other):
        return self._new(ff.pgcd(self.field, self.coeffs, other.coeffs))

    def __call__(self, x, field=None):
        """Evaluate at x, an element of ``field`` (a tower over the coefficient field)."""
        F = field or self.field
        r = 0
        for c in reversed(self.coeffs):
            r = F.add(F.mul(r, x), c)
        return r

    def compose(self, other):
        result = Poly(self.field, [])
        for c in reversed(self.coeffs):
            result = result * other + Poly(self.field, [c])
        return result

    def hyperderivative(self, n):
        """Divided-power derivative: t**i maps to binom(i, n) t**(i-n), binomials mod p."""
        F = self.field
        out = []
        for i in range(n, len(self.coeffs)):
            b = binom_mod(i, n, F.p)
            out.append(F.mul(F.from_int(b), self.coeffs[i]) if b else 0)
        return self._new(out)

    # printing

    def __str__(self):
        return format_poly(self.coeffs, 't', self.field)

    def __repr__(self):
        return f'Poly({self})'


def binom_mod(n, k, p):
    """Binomial coefficient modulo p via Lucas's theorem."""
    if k < 0 or k > n:
        return 0
    r = 1
    while n or k:
        a, b = n % p, k % p
        if b > a:
            return 0
        r = r * _small_binom(a, b) % p
        n //= p
        k //= p
    return r


def _small_binom(a, b):
    r = 1
    for i in range(b):
        r = r * (a - i) // (i + 1)
    return r


def format_coeff(c, field):
    """Base-field element as text: an integer for prime fields, else a polynomial in g."""
    if field.base is None:
        return str(c)
    digits = ff._int_to_vec(c, field.base.order, field.degree)
    parts = []
    for i in range(len(digits) - 1, -1, -1):
        d = digits[i]
        if not d:
            continue
        if i == 0:
            parts.append(format_coeff(d, field.base))
        elif d == 1:
            parts.append('g' if i == 1 else f'g^{i}')
        else:
            sd = format_coeff(d, field.base)
            parts.append(f'{sd}*g' if i == 1 else f'{sd}*g^{i}')
    return '(' + '+'.join(parts) + ')' if len(parts) > 1 else (parts[0] if parts else '0')


def format_poly(coeffs, var, field):
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        cs = format_coeff(c, field)
        if i == 0:
            terms.append(cs)
            continue
        mono = var if i == 1 else f'{var}^{i}'
        terms.append(mono if c == 1 else f'{cs}*{mono}')
    return '+'.join(terms) if terms else '0'
