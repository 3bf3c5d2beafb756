"""Points over the Tate algebra and over its completion at a prime.

A ``TatePoint`` is a truncated series ``sum t**i * e_i`` with vectors e_i of
C_infinity values and a recorded bound on the norms of the discarded tail.
A ``PadicPoint`` is a truncated expansion ``sum w**n * f_n`` in powers of a
prime w, where each f_n lies in F_w (x) C_infinity**d and is stored by its
coordinates in the power basis (1, zeta, ...) of the residue field.

The bridge between the two is the expansion of t itself in F_w[[w]]: t is
the unique root of ``w(X) = w`` reducing to zeta, found by Newton iteration.
"""

import functools

from .basealg import residue_field
from .cinfty import CInf, mat_det
from .errors import Indeterminate, PrecisionExhausted

# power series in the prime over the residue field (lists of field elements)


def ps_add(F, a, b):
    n = max(len(a), len(b))
    return [F.add(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)]


def ps_mul(F, a, b, N):
    """Product truncated to length N + 1."""
    out = [0] * (N + 1)
    for i, x in enumerate(a[:N + 1]):
        if not x:
            continue
        for j, y in enumerate(b[:N + 1 - i]):
            if y:
                out[i + j] = F.add(out[i + j], F.mul(x, y))
    return out


def ps_inv(F, a, N):
    if not a or a[0] == 0:
        raise ZeroDivisionError('series is not a unit')
    inv0 = F.inv(a[0])
    out = [0] * (N + 1)
    out[0] = inv0
    for k in range(1, N + 1):
        acc = 0
        for i in range(1, min(k, len(a) - 1) + 1):
            if a[i] and out[k - i]:
                acc = F.add(acc, F.mul(a[i], out[k - i]))
        out[k] = F.neg(F.mul(acc, inv0))
    return out


def ps_compose_poly(rf, coeffs, X, N):
    """Polynomial with Fq coefficients evaluated at the series X."""
    F = rf.field
    out = [0] * (N + 1)
    for c in reversed(coeffs):
        out = ps_mul(F, out, X, N)
        out[0] = F.add(out[0], c)
    return out


@functools.cache
def _t_expansion_cached(rf, N):
    F = rf.field
    g = rf.prime.generator
    dg = g.hyperderivative(1)
    inv = F.inv(dg(rf.zeta, F))
    X = [rf.zeta, inv] + [0] * (N - 1) if N >= 1 else [rf.zeta]
    X = X[:N + 1]
    # Newton: X <- X - (g(X) - w) / g'(zeta); converges at least one order per step
    for _ in range(N + 1):
        r = ps_compose_poly(rf, g.coeffs, X, N)
        if N >= 1:
            r[1] = F.sub(r[1], 1)
        if not any(r):
            break
        X = [F.sub(x, F.mul(inv, y)) for x, y in zip(X, r)]
    return tuple(X)


def t_expansion(rf, N):
    """Coefficients of t in F_w[[w]] up to w**N."""
    return list(_t_expansion_cached(rf, N))


def poly_expansion(rf, f, N):
    """Expansion of a polynomial f in A at the prime, up to w**N."""
    return ps_compose_poly(rf, f.coeffs, t_expansion(rf, N), N)


@functools.cache
def _power_table(rf, N, imax):
    """Rows i = 0..imax of the expansions of t**i."""
    F = rf.field
    T = t_expansion(rf, N)
    rows = [[1] + [0] * N]
    for _ in range(imax):
        rows.append(ps_mul(F, rows[-1], T, N))
    return tuple(tuple(r) for r in rows)


# residue vectors: elements of F_w (x) C_infinity**d


class ResidueVector:
    """Element of F_w (x) C_infinity**d in the power basis.

    ``comps[k][j]`` is the zeta**k part of coordinate j.
    """

    __slots__ = ('rf', 'comps')

    def __init__(self, rf, comps):
        self.rf = rf
        self.comps = tuple(tuple(c) for c in comps)

    @property
    def prime(self):
        return self.rf.prime

    @property
    def d(self):
        return len(self.comps[0])

    @classmethod
    def zero(cls, rf, d, field, q, m=1):
        z = CInf.zero(field, q, m)
        return cls(rf, [[z] * d for _ in range(rf.degree)])

    @classmethod
    def from_residue(cls, rf, a, q, field=None, m=1):
        """The exact residue-field constant a (d = 1)."""
        F = field or rf.prime.field
        return cls(rf, [[CInf.const(F, q, c, m)] for c in rf.coords(a)])

    def __add__(self, other):
        return ResidueVector(self.rf, [[x + y for x, y in zip(a, b)]
                                       for a, b in zip(self.comps, other.comps)])

    def __neg__(self):
        return ResidueVector(self.rf, [[-x for x in a] for a in self.comps])

    def __sub__(self, other):
        return self + (-other)

    def scale_residue(self, a):
        """Multiply by an element a of the residue field."""
        if a == 0:
            return ResidueVector(self.rf, [[x.scale(0) for x in row] for row in self.comps])
        M = self.rf.mul_matrix(a)
        n = self.rf.degree
        out = []
        for i in range(n):
            row = []
            for j in range(self.d):
                acc = None
                for k in range(n):
                    if M[i][k]:
                        term = self.comps[k][j].scale(M[i][k])
                        acc = term if acc is None else acc + term
                if acc is None:
                    acc = self.comps[0][j].scale(0)
                row.append(acc)
            out.append(row)
        return ResidueVector(self.rf, out)

    def map(self, fn):
        """Apply a map of C_infinity**d vectors to every basis component."""
        return ResidueVector(self.rf, [fn(list(c)) for c in self.comps])

    def trace(self):
        """Image under trace (x) id: the vector sum_k tr(zeta**k) * comps[k]."""
        rf = self.rf
        acc = None
        for k, b in enumerate(rf.power_basis):
            tr = rf.trace(b)
            if not tr:
                continue
            term = [x.scale(tr) for x in self.comps[k]]
            acc = term if acc is None else [a + b for a, b in zip(acc, term)]
        if acc is None:
            acc = [x.scale(0) for x in self.comps[0]]
        return acc

    def is_zero_to_precision(self):
        return all(x.is_zero_to_precision() for row in self.comps for x in row)

    def norm_log_bound(self):
        vals = [x.norm_log_bound() for row in self.comps for x in row]
        vals = [v for v in vals if v is not None]
        return max(vals) if vals else None

    def floor_log(self):
        vals = [x.floor_log() for row in self.comps for x in row]
        vals = [v for v in vals if v is not None]
        return max(vals) if vals else None

    def agrees(self, other):
        return all(x.agrees(y) for a, b in zip(self.comps, other.comps) for x, y in zip(a, b))

    def dump(self):
        return [[x.dump() for x in row] for row in self.comps]

    def __repr__(self):
        return f'ResidueVector({self.dump()})'


def rv_mul(x, y):
    """Product of two scalar (d = 1) residue vectors."""
    rf = x.rf
    n = rf.degree
    F = rf.field
    basis = [F.pow(rf.zeta, k) for k in range(2 * n - 1)]
    out = [None] * n
    for i in range(n):
        for j in range(n):
            prod = x.comps[i][0] * y.comps[j][0]
            for k, c in enumerate(rf.coords(basis[i + j])):
                if c:
                    term = prod.scale(c)
                    out[k] = term if out[k] is None else out[k] + term
    zero = x.comps[0][0].scale(0)
    return ResidueVector(rf, [[o if o is not None else zero] for o in out])


# Tate algebra points


class TatePoint:
    """Truncated ``sum t**i e_i`` with a norm bound ``tail_log`` on all e_i beyond the stored range.

    ``tail_log is None`` means finite support: every later coefficient is zero.
    """

    __slots__ = ('coeffs', 'tail_log')

    def __init__(self, coeffs, tail_log=None):
        self.coeffs = [list(e) for e in coeffs]
        self.tail_log = tail_log

    @property
    def d(self):
        return len(self.coeffs[0])

    @property
    def t_prec(self):
        return len(self.coeffs) - 1

    @property
    def decay_witness(self):
        return [_vec_norm(e) for e in self.coeffs]

    @classmethod
    def from_poly(cls, f, q, field=None, m=1):
        """Exact scalar point for a polynomial f in A."""
        F = field or f.field
        coeffs = [[CInf.const(F, q, c, m)] for c in f.coeffs] or [[CInf.zero(F, q, m)]]
        return cls(coeffs)

    def component(self, j):
        return TatePoint([[e[j]] for e in self.coeffs], self.tail_log)

    def map_coeffs(self, fn, tail_log=None):
        return TatePoint([fn(e) for e in self.coeffs], tail_log)

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        out = []
        for i in range(n):
            a = self.coeffs[i] if i < len(self.coeffs) else None
            b = other.coeffs[i] if i < len(other.coeffs) else None
            out.append(a if b is None else b if a is None else [x + y for x, y in zip(a, b)])
        return TatePoint(out, _max_log(self.tail_log, other.tail_log))

    def __neg__(self):
        return self.map_coeffs(lambda e: [-x for x in e], self.tail_log)

    def __sub__(self, other):
        return self + (-other)

    def scalar_mul(self, a):
        """The A-factor action: multiply by a polynomial a in t."""
        out = []
        for k in range(len(self.coeffs) + a.degree):
            acc = None
            for i, c in enumerate(a.coeffs):
                if c and 0 <= k - i < len(self.coeffs):
                    term = [x.scale(c) for x in self.coeffs[k - i]]
                    acc = term if acc is None else [u + v for u, v in zip(acc, term)]
            if acc is None:
                acc = [x.scale(0) for x in self.coeffs[0]]
            out.append(acc)
        tail = self.tail_log
        if tail is not None:
            # coefficients from index n on mix in the unknown tail
            n = len(self.coeffs)
            for e in out[n:]:
                tail = _max_log(tail, _vec_norm(e))
            out = out[:n]
        return TatePoint(out, tail)

    def frobenius(self, k=1):
        """Twist id (x) Frobenius: coefficients raised to q**k, t fixed."""
        tail = None
        if self.tail_log is not None:
            tail = self.tail_log * self.coeffs[0][0].q ** k
        return self.map_coeffs(lambda e: [x.frobenius(k) for x in e], tail)

    def agrees(self, other):
        n = min(len(self.coeffs), len(other.coeffs))
        return all(x.agrees(y) for i in range(n) for x, y in zip(self.coeffs[i], other.coeffs[i]))

    def dump(self):
        return {'coeffs': [[x.dump() for x in e] for e in self.coeffs],
                'tail_log': None if self.tail_log is None else str(self.tail_log)}


def _vec_norm(e):
    vals = [x.norm_log_bound() for x in e]
    vals = [v for v in vals if v is not None]
    return max(vals) if vals else None


def _max_log(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)


class PadicPoint:
    """Truncated ``sum w**n f_n`` with residue vectors f_n; exact modulo w**(N+1)."""

    __slots__ = ('rf', 'coeffs')

    def __init__(self, rf, coeffs):
        self.rf = rf
        self.coeffs = list(coeffs)

    @property
    def prime(self):
        return self.rf.prime

    @property
    def p_prec(self):
        return len(self.coeffs) - 1

    @property
    def d(self):
        return self.coeffs[0].d

    @classmethod
    def from_series(cls, rf, series, q, field=None, m=1):
        """Scalar point for an F_w[[w]] series with residue-field coefficients."""
        return cls(rf, [ResidueVector.from_residue(rf, a, q, field, m) for a in series])

    def truncate(self, N):
        return PadicPoint(self.rf, self.coeffs[:N + 1])

    def __add__(self, other):
        n = min(len(self.coeffs), len(other.coeffs))
        return PadicPoint(self.rf, [a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n])])

    def __neg__(self):
        return PadicPoint(self.rf, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def scale_series(self, s):
        """Multiply by a series with residue-field coefficients (the A_w-factor action)."""
        N = self.p_prec
        out = []
        for n in range(N + 1):
            acc = None
            for k in range(n + 1):
                if k < len(s) and s[k]:
                    term = self.coeffs[n - k].scale_residue(s[k])
                    acc = term if acc is None else acc + term
            if acc is None:
                acc = self.coeffs[n].scale_residue(0)
            out.append(acc)
        return PadicPoint(self.rf, out)

    def scalar_mul(self, a):
        """Multiply by a polynomial a in A."""
        return self.scale_series(poly_expansion(self.rf, a, self.p_prec))

    def __mul__(self, other):
        """Product of scalar (d = 1) points."""
        N = min(self.p_prec, other.p_prec)
        out = []
        for n in range(N + 1):
            acc = None
            for k in range(n + 1):
                term = rv_mul(self.coeffs[k], other.coeffs[n - k])
                acc = term if acc is None else acc + term
            out.append(acc)
        return PadicPoint(self.rf, out)

    def map(self, fn):
        """Apply a map of C_infinity**d vectors (such as phi_a) to every component."""
        return PadicPoint(self.rf, [f.map(fn) for f in self.coeffs])

    def agrees(self, other):
        return all(a.agrees(b) for a, b in zip(self.coeffs, other.coeffs))

    def is_zero_to_precision(self):
        return all(f.is_zero_to_precision() for f in self.coeffs)

    def dump(self):
        return [f.dump() for f in self.coeffs]


def _prime_rf(prime):
    return residue_field(prime)


def to_padic(h, prime, N):
    """Expansion at the prime of a Tate point, to order N.

    f_n = sum_i [w**n](t**i) e_i.  The coefficients [w**n](t**i) lie in
    the residue field and have norm at most 1, so the unknown tail of h
    only limits the precision of each f_n by ``h.tail_log``.
    """
    if isinstance(h, PadicPoint):
        return h.truncate(N)
    rf = _prime_rf(prime)
    n_terms = len(h.coeffs)
    table = _power_table(rf, N, n_terms - 1)
    d = h.d
    sample = h.coeffs[0][0]
    zero = CInf.zero(sample.field, sample.q, sample.m)
    out = []
    for n in range(N + 1):
        comps = [[None] * d for _ in range(rf.degree)]
        for i in range(n_terms):
            a = table[i][n]
            if not a:
                continue
            for k, c in enumerate(rf.coords(a)):
                if not c:
                    continue
                for j in range(d):
                    term = h.coeffs[i][j].scale(c)
                    comps[k][j] = term if comps[k][j] is None else comps[k][j] + term
        comps = [[zero if x is None else x for x in row] for row in comps]
        if h.tail_log is not None:
            comps = [[x.truncate_log(h.tail_log) for x in row] for row in comps]
            if all(not x.terms and x.prec is not None and x.prec <= 0
                   for row in comps for x in row):
                raise PrecisionExhausted('Tate tail bound swamps the requested expansion')
        out.append(ResidueVector(rf, comps))
    return PadicPoint(rf, out)


def eval_at_prime(h, prime):
    """Image of h in F_w (x) C_infinity**d."""
    if isinstance(h, PadicPoint):
        return h.coeffs[0]
    return to_padic(h, prime, 0).coeffs[0]


def residue_det(v):
    """Determinant of multiplication by a scalar residue vector, as a C_infinity value."""
    rf = v.rf
    n = rf.degree
    F = rf.field
    basis = [F.pow(rf.zeta, k) for k in range(2 * n - 1)]
    zero = v.comps[0][0].scale(0)
    M = [[zero for _ in range(n)] for _ in range(n)]
    for j in range(n):
        for k in range(n):
            for i, c in enumerate(rf.coords(basis[j + k])):
                if c:
                    M[i][j] = M[i][j] + v.comps[k][0].scale(c)
    return mat_det(M)


def is_unit_at(h, prime):
    """Whether h is invertible in the localization at the prime (scalar points only)."""
    v = eval_at_prime(h, prime)
    if v.d != 1:
        raise ValueError('unit test needs a scalar point')
    det = residue_det(v)
    if det.terms:
        return True
    if det.is_certified_zero():
        return False
    raise Indeterminate('determinant is below the precision floor')


def poly_point(f, q, field=None, m=1):
    """Convenience: the exact scalar Tate point of a polynomial."""
    return TatePoint.from_poly(f, q, field, m)


def padic_of_poly(f, prime, N, q, field=None, m=1):
    """Exact expansion of a polynomial of A at the prime, as a scalar PadicPoint."""
    rf = _prime_rf(prime)
    return PadicPoint.from_series(rf, poly_expansion(rf, f, N), q, field, m)


__all__ = ['TatePoint', 'PadicPoint', 'ResidueVector', 'to_padic', 'eval_at_prime',
           'is_unit_at', 'residue_det', 't_expansion', 'poly_expansion', 'padic_of_poly',
           'poly_point', 'rv_mul']
