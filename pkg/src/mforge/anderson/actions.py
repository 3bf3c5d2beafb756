"""The phi-action and its relatives on every point type.

Elements of L = Fq(theta) are moved into the truncated model with their
numerator exact; a non-monomial denominator is divided out at whatever
precision the other factor supports, so conversions never limit a result.
"""

import functools
from fractions import Fraction
from math import gcd

from ..basealg import Poly
from ..basealg.perfrat import PerfRatFun
from ..cinfty import CInf
from ..ore.motive import phi_matrix
from ..ore.orepoly import OrePoly
from ..tate import PadicPoint, ResidueVector, TatePoint


def _lcm(a, b):
    return a * b // gcd(a, b)


def _bivariate_to_cinf(poly, level, field, q, m):
    p = field.p
    step = p ** level
    mm = _lcm(m, step)
    scale = mm // step
    return CInf(field, q, mm, {-scale * j: c for (i, j), c in poly.items()})


def l_valuation(c):
    """Valuation of a theta-only value, with v(1/theta) = 1."""
    num = max(j for _, j in c.num)
    den = max(j for _, j in c.den)
    return Fraction(den - num, c.field.p ** c.level)


def l_norm_log(c):
    return None if not c else -l_valuation(c)


def to_cinf(c, q, m=1, field=None, prec=None):
    """A theta-only value as a CInf; ``prec`` is needed for non-monomial denominators."""
    F = field or c.field
    num = _bivariate_to_cinf(c.num, c.level, F, q, m)
    den = _bivariate_to_cinf(c.den, c.level, F, q, m)
    if len(den.terms) == 1:
        return num * den.inverse()
    return num.div(den, prec)


def l_mul(c, x, prec=None):
    """c * x for a theta-only value c; the conversion never limits the precision."""
    if not c:
        return x.scale(0)
    num = _bivariate_to_cinf(c.num, c.level, x.field, x.q, x.m)
    den = _bivariate_to_cinf(c.den, c.level, x.field, x.q, x.m)
    prod = num * x
    if len(den.terms) == 1:
        return prod * den.inverse()
    if prod.exact and prec is None:
        raise ValueError('exact operand and rational coefficient need a precision')
    return prod.div(den, prec)


def l_mat_norm_log(M):
    vals = [l_norm_log(c) for row in M for c in row if c]
    return max(vals) if vals else None


@functools.lru_cache(maxsize=256)
def _phi_coefficients(E, a_coeffs):
    F = E.field
    a = Poly(F, list(a_coeffs))
    Phi = phi_matrix(E, a)
    deg = max((e.degree for row in Phi.rows for e in row), default=-1)
    return tuple(tuple(tuple(row) for row in Phi.coefficient(k)) for k in range(deg + 1))


def phi_coefficients(E, a=None):
    """phi_a = sum_k P_k tau**k as a tuple of d x d matrices over L."""
    if a is None:
        a = Poly.t(E.field)
    elif isinstance(a, int):
        a = Poly(E.field, [E.field.from_int(a)])
    return _phi_coefficients(E, tuple(a.coeffs))


def apply_coefficients(P, x, prec=None):
    """sum_k P_k x^[k] for a C_infinity vector x."""
    out = None
    for k, Pk in enumerate(P):
        xk = [xi.frobenius(k) for xi in x]
        term = []
        for row in Pk:
            acc = None
            for c, v in zip(row, xk):
                if c:
                    y = l_mul(c, v, prec)
                    acc = y if acc is None else acc + y
            term.append(acc)
        out = term if out is None else [a if b is None else b if a is None else a + b
                                        for a, b in zip(out, term)]
    if out is None:
        return [xi.scale(0) for xi in x]
    return [xi.scale(0) if o is None else o for o, xi in zip(out, x)]


def _tail_after(P, tail_log, q):
    """Norm bound of sum_k P_k y^[k] for |y| <= q**tail_log."""
    if tail_log is None:
        return None
    vals = []
    for k, Pk in enumerate(P):
        n = l_mat_norm_log(Pk)
        if n is not None:
            vals.append(n + tail_log * q ** k)
    return max(vals) if vals else None


def phi_act(E, a, P, prec=None):
    """phi_a applied to a C_infinity vector, a ResidueVector, a TatePoint or a PadicPoint."""
    coeffs = phi_coefficients(E, a)
    if isinstance(P, TatePoint):
        return P.map_coeffs(lambda e: apply_coefficients(coeffs, e, prec),
                            _tail_after(coeffs, P.tail_log, E.q))
    if isinstance(P, PadicPoint):
        return P.map(lambda v: apply_coefficients(coeffs, v, prec))
    if isinstance(P, ResidueVector):
        return P.map(lambda v: apply_coefficients(coeffs, v, prec))
    return apply_coefficients(coeffs, list(P), prec)


def scalar_act(a, P):
    """The A-factor action a * P on Tate and prime-adic points."""
    return P.scalar_mul(a)


def torsion_verify(E, v, a, prec=None):
    """(is_killed, margin): margin is log_q of the floor when killed, else log_q(norm/floor)."""
    w = phi_act(E, a, v, prec)
    comps = [x for row in w.comps for x in row] if isinstance(w, ResidueVector) else list(w)
    if all(x.is_certified_zero() for x in comps):
        return True, float('inf')
    floor = _max([x.floor_log() for x in comps])
    if all(x.is_zero_to_precision() for x in comps):
        return True, -floor
    norm = _max([x.norm_log() for x in comps if x.terms])
    return False, (norm - floor) if floor is not None else float('inf')


def _max(vals):
    vals = [v for v in vals if v is not None]
    return max(vals) if vals else None


# elements of A (x) L acting on scalar Tate points


def lt_mul(c, h, prec=None):
    """Multiply a scalar TatePoint by an element of L[t] (a PerfRatFun polynomial in t)."""
    parts = c.t_coeffs()
    N = len(h.coeffs)
    sample = h.coeffs[0][0]
    length = N if h.tail_log is not None else N + len(parts) - 1
    out = []
    for n in range(length):
        acc = None
        for i, ci in enumerate(parts):
            if ci and 0 <= n - i < N:
                y = l_mul(ci, h.coeffs[n - i][0], prec)
                acc = y if acc is None else acc + y
        out.append([sample.scale(0) if acc is None else acc])
    tail = None
    if h.tail_log is not None:
        vals = []
        for i, ci in enumerate(parts):
            if not ci:
                continue
            # coefficients past the stored range see e_j for j > N - 1 - i
            local = [h.tail_log] + [_vnorm(h.coeffs[j]) for j in range(max(N - i, 0), N)]
            vals.append(l_norm_log(ci) + _max(local))
        tail = _max(vals)
    return TatePoint(out, tail)


def _vnorm(e):
    return _max([x.norm_log_bound() for x in e])


def iota_pair(h, m, prec=None):
    """m(h) for m a d-vector of twisted polynomials over L[t]: a scalar TatePoint."""
    point = getattr(h, 'point', h)
    acc = None
    for j, mj in enumerate(m):
        comp = point.component(j)
        for k, c in mj.coeffs.items():
            if k < 0:
                raise ValueError('negative tau-powers are not maps on points')
            term = lt_mul(c, comp.frobenius(k), prec)
            acc = term if acc is None else acc + term
    if acc is None:
        acc = point.component(0).map_coeffs(lambda e: [x.scale(0) for x in e], None)
    return acc


def coordinate(E, j):
    """The coordinate projection kappa_j as a d-vector of twisted polynomials."""
    one = OrePoly.from_int(E.field, 1)
    zero = OrePoly(E.field, {})
    return [one if i == j else zero for i in range(E.d)]


def perf_const(F, c):
    return PerfRatFun.const(F, c)
