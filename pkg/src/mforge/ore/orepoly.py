"""Twisted polynomials over the perfect closure of Fq(t, theta).

An OrePoly is ``sum c_k * x**k`` with coefficients on the left and
``x * c = c^[eps] * x``, where x is tau (eps = +1, written ``T``) or
tau**-1 (eps = -1, written ``Ti``) and c^[eps] is the Frobenius twist of
theta-coefficients.  Since the twist is an automorphism of the perfect
closure, negative exponents are allowed too, which turns the ring into a
skew Laurent ring; division is defined on the polynomial part.
"""

from fractions import Fraction

from ..basealg.grammar import parse_expr
from ..basealg.perfrat import PerfRatFun, perf_frobenius, perf_symbols
from ..errors import DivisionByZero, ParseError

TAU = 1
TAU_INV = -1


class OrePoly:
    """Immutable twisted (Laurent) polynomial with left coefficients."""

    __slots__ = ('field', 'twist', 'coeffs')

    def __init__(self, field, coeffs=None, twist=TAU):
        self.field = field
        self.twist = twist
        if coeffs is None:
            coeffs = {}
        elif not isinstance(coeffs, dict):
            coeffs = dict(enumerate(coeffs))
        self.coeffs = {k: c for k, c in coeffs.items() if c}

    # constructors

    @classmethod
    def const(cls, c, twist=TAU):
        return cls(c.field, {0: c}, twist)

    @classmethod
    def from_int(cls, field, n, twist=TAU):
        return cls(field, {0: PerfRatFun.from_int(field, n)}, twist)

    @classmethod
    def var(cls, field, k=1, twist=TAU):
        """x**k."""
        return cls(field, {k: PerfRatFun.from_int(field, 1)}, twist)

    def _new(self, coeffs):
        return OrePoly(self.field, coeffs, self.twist)

    # structure

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    @property
    def degree(self):
        return max(self.coeffs) if self.coeffs else -1

    @property
    def valuation(self):
        if not self.coeffs:
            raise ValueError('valuation of zero')
        return min(self.coeffs)

    @property
    def span(self):
        return self.degree - self.valuation if self.coeffs else -1

    def lc(self):
        return self.coeffs[self.degree]

    def coeff(self, k):
        return self.coeffs.get(k, PerfRatFun.from_int(self.field, 0))

    def is_constant(self):
        return not self.coeffs or set(self.coeffs) == {0}

    def is_unit(self):
        """Units of the polynomial ring are the nonzero constants."""
        return set(self.coeffs) == {0}

    def max_level(self):
        return max((c.level for c in self.coeffs.values()), default=0)

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, OrePoly):
            if other.twist != self.twist:
                raise ValueError('twist mismatch')
            return other
        if isinstance(other, PerfRatFun):
            return OrePoly(self.field, {0: other}, self.twist)
        if isinstance(other, int):
            return OrePoly.from_int(self.field, other, self.twist)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out[k] + c if k in out else c
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -c for k, c in self.coeffs.items()})

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
        eps = self.twist
        out = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                c = a * perf_frobenius(b, eps * i)
                k = i + j
                out[k] = out[k] + c if k in out else c
        return self._new(out)

    def __rmul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self

    def __truediv__(self, other):
        """Right division by a nonzero constant."""
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.is_unit():
            raise ParseError('only division by a nonzero constant is allowed')
        return self * other.coeffs[0].inverse()

    def __pow__(self, n):
        if n < 0:
            if len(self.coeffs) == 1:
                (k, c), = self.coeffs.items()
                # (c x^k)^-1 = x^-k c^-1 = (c^-1)^[-eps k] x^-k
                inv = OrePoly(self.field, {-k: perf_frobenius(c.inverse(), -self.twist * k)},
                              self.twist)
                return inv ** (-n)
            raise ValueError('only monomials are invertible')
        result = OrePoly.from_int(self.field, 1, self.twist)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def frobenius(self, k):
        """Twist every coefficient by k (the action of tau**k on coefficients)."""
        return self._new({i: perf_frobenius(c, k) for i, c in self.coeffs.items()})

    def shift(self, k):
        """Left multiplication by x**k."""
        eps = self.twist
        return self._new({i + k: perf_frobenius(c, eps * k) for i, c in self.coeffs.items()})

    def to_twist(self, twist):
        """Same element written in the other variable: x**k becomes y**-k."""
        if twist == self.twist:
            return self
        return OrePoly(self.field, {-k: c for k, c in self.coeffs.items()}, twist)

    def constant_term(self):
        return self.coeff(0)

    # comparison and printing

    def __eq__(self, other):
        if isinstance(other, int):
            other = OrePoly.from_int(self.field, other, self.twist)
        if not isinstance(other, OrePoly):
            return NotImplemented
        return self.twist == other.twist and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.twist, tuple(sorted(self.coeffs.items()))))

    def __str__(self):
        if not self.coeffs:
            return '0'
        sym = 'T' if self.twist == TAU else 'Ti'
        parts = []
        for k in sorted(self.coeffs, reverse=True):
            c = self.coeffs[k]
            cs = str(c)
            if k == 0:
                parts.append(cs if not cs.startswith('-') else f'({cs})')
                continue
            mono = sym if k == 1 else (f'{sym}^{k}' if k > 0 else f'{sym}^({k})')
            if c.is_one():
                parts.append(mono)
            else:
                if not _is_atom(cs):
                    cs = f'({cs})'
                parts.append(f'{cs}*{mono}')
        return ' + '.join(parts)

    def __repr__(self):
        return f'OrePoly({self})'


def _is_atom(s):
    return all(ch not in s for ch in '+-/')


def ore_symbols(field, twist):
    symbols = dict(perf_symbols(field))
    symbols = {k: OrePoly.const(v, twist) for k, v in symbols.items()}
    symbols['T' if twist == TAU else 'Ti'] = OrePoly.var(field, 1, twist)
    return symbols


def parse_ore(text, field, twist=TAU):
    """Parse ``c_k*T^k + ... + c_0`` (or with ``Ti``) into an OrePoly."""
    def power(base, exp):
        if isinstance(exp, Fraction):
            if base.is_constant() and base.coeffs:
                return OrePoly.const(base.coeffs[0] ** exp, twist)
            raise ParseError('fractional exponent on a non-constant')
        return base ** exp
    return parse_expr(str(text), ore_symbols(field, twist),
                      lambda n: OrePoly.from_int(field, n, twist), power)


def ore_divmod(a, b, side='left'):
    """Euclidean division on the polynomial part.

    side='left' returns (q, r) with a = q*b + r; side='right' returns
    a = b*q + r.  In both cases deg r < deg b.
    """
    if b.is_zero():
        raise DivisionByZero('Ore division by zero')
    if a.twist != b.twist:
        raise ValueError('twist mismatch')
    eps = a.twist
    m = b.degree
    bm = b.lc()
    quot = {}
    r = a
    while r.coeffs and r.degree >= m:
        n = r.degree
        an = r.lc()
        k = n - m
        if side == 'left':
            # c x^k * bm x^m = c * bm^[eps k] x^n
            c = an / perf_frobenius(bm, eps * k)
            term = OrePoly(a.field, {k: c}, eps)
            r = r - term * b
        elif side == 'right':
            # bm x^m * c x^k = bm * c^[eps m] x^n
            c = perf_frobenius(an / bm, -eps * m)
            term = OrePoly(a.field, {k: c}, eps)
            r = r - b * term
        else:
            raise ValueError(f'unknown side {side!r}')
        quot[k] = quot[k] + c if k in quot else c
        if r.coeffs and r.degree >= n:
            raise ArithmeticError('division failed to lower the degree')
    return OrePoly(a.field, quot, eps), r
