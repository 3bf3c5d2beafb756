"""The exponential of an Anderson module and the Carlitz period."""

from ..basealg.perfrat import PerfRatFun, perf_frobenius
from ..cinfty import DEFAULT_U_PREC, CInf, nth_root
from ..errors import Divergent
from ..ore.linalg import mat_inv, mat_mul
from .actions import l_mat_norm_log, l_mul, l_norm_log

MAX_EXP_TERMS = 12


def _mat_frob(M, k):
    return [[perf_frobenius(c, k) for c in row] for row in M]


def _mat_add(A, B):
    return [[a + b for a, b in zip(r, s)] for r, s in zip(A, B)]


class ExpSeries:
    """Coefficients Q_0 .. Q_K of the exponential, computed on demand."""

    __slots__ = ('E', 'Q')

    def __init__(self, E, K=0):
        self.E = E
        F = E.field
        d = E.d
        one = PerfRatFun.from_int(F, 1)
        zero = PerfRatFun.from_int(F, 0)
        self.Q = [[[one if i == j else zero for j in range(d)] for i in range(d)]]
        self.extend(K)

    @property
    def K(self):
        return len(self.Q) - 1

    def extend(self, K):
        while len(self.Q) <= K:
            self.Q.append(self._next())
        return self

    def __getitem__(self, k):
        self.extend(k)
        return self.Q[k]

    def _next(self):
        E = self.E
        k = len(self.Q)
        rhs = None
        for j in range(1, min(k, E.weight) + 1):
            term = mat_mul(E.theta[j], _mat_frob(self.Q[k - j], j))
            rhs = term if rhs is None else _mat_add(rhs, term)
        return solve_sylvester(E.theta[0], k, rhs)

    def residual(self, k):
        """Q_k dphi^[k] - sum_j Theta_j Q_{k-j}^[j], which must vanish exactly."""
        E = self.E
        lhs = mat_mul(self[k], _mat_frob(E.theta[0], k))
        for j in range(0, min(k, E.weight) + 1):
            term = mat_mul(E.theta[j], _mat_frob(self.Q[k - j], j))
            lhs = [[a - b for a, b in zip(r, s)] for r, s in zip(lhs, term)]
        return lhs

    def norm_log(self, k):
        return l_mat_norm_log(self[k])


def solve_sylvester(D, k, R):
    """The unique Q with Q D^[k] - D Q = R over L."""
    d = len(D)
    Dk = _mat_frob(D, k)
    F = D[0][0].field
    zero = PerfRatFun.from_int(F, 0)
    n = d * d
    M = [[zero] * n for _ in range(n)]
    for a in range(d):
        for b in range(d):
            row = a * d + b
            for c in range(d):
                # (Q Dk)[a][b] += Q[a][c] Dk[c][b];  (D Q)[a][b] += D[a][c] Q[c][b]
                M[row][a * d + c] = M[row][a * d + c] + Dk[c][b]
                M[row][c * d + b] = M[row][c * d + b] - D[a][c]
    Minv = mat_inv(M)
    flat = [[R[a][b]] for a in range(d) for b in range(d)]
    sol = mat_mul(Minv, flat)
    return [[sol[a * d + b][0] for b in range(d)] for a in range(d)]


def exp_coeffs(E, K):
    return ExpSeries(E, K)


def _term_bound(series, k, xnorms):
    qk = series.E.q ** k
    Qn = series[k]
    vals = []
    for row in Qn:
        for c, xn in zip(row, xnorms):
            if c and xn is not None:
                vals.append(l_norm_log(c) + qk * xn)
    return max(vals) if vals else None


def exp_bound(series, x, max_terms=MAX_EXP_TERMS):
    """Upper bound for log_q of every term Q_k x^[k] from the first decreasing point on."""
    xn = [xi.norm_log_bound() for xi in x]
    bounds = [_term_bound(series, k, xn) for k in range(max_terms)]
    return bounds


def exp_eval(E, x, series=None, prec=None, max_terms=MAX_EXP_TERMS):
    """e(x) = sum_k Q_k x^[k] with the tail bound folded into the precision.

    Summation stops at the first K whose next two term bounds are below the
    floor of the partial sum and decreasing.  Raises Divergent when that
    does not happen within ``max_terms`` terms.
    """
    series = series or ExpSeries(E)
    x = list(x)
    if all(xi.is_certified_zero() for xi in x):
        return x
    if prec is None and all(xi.exact for xi in x):
        prec = DEFAULT_U_PREC
    if prec is not None:
        x = [xi.truncate(prec) for xi in x]
    xn = [xi.norm_log_bound() for xi in x]
    total = list(x)
    for k in range(1, max_terms):
        floor = max((t.floor_log() for t in total if t.floor_log() is not None), default=None)
        b1 = _term_bound(series, k, xn)
        b2 = _term_bound(series, k + 1, xn)
        if b1 is None or (floor is not None and b1 <= floor and b2 is not None and b2 < b1):
            tail = b1
            return [t.truncate_log(tail) for t in total]
        Qk = series[k]
        xk = [xi.frobenius(k) for xi in x]
        for i, row in enumerate(Qk):
            for c, v in zip(row, xk):
                if c:
                    total[i] = total[i] + l_mul(c, v)
    raise Divergent(f'exponential terms do not decay within {max_terms} terms')


def carlitz_lambda(q, m=None, branch=0):
    """A (q-1)-th root of -theta, branches ordered by leading coefficient."""
    from ..basealg import base_field
    F = base_field(q)
    m = m or (q - 1)
    minus_theta = CInf(F, q, m, {-m: F.neg(1)})
    return nth_root(minus_theta, q - 1, branch)


def carlitz_period(q, prec=DEFAULT_U_PREC, m=None, branch=0):
    """(-theta)**(q/(q-1)) prod_{i>=1} (1 - theta**(1-q**i))**-1 to absolute u-precision prec."""
    lam = carlitz_lambda(q, m, branch)
    lead = lam.mul_theta(1).scale(lam.field.neg(1))
    v = lead.leading()[0]
    rel = prec - v
    mm = lead.m
    prod = CInf.const(lead.field, q, 1, mm).truncate(rel)
    i = 1
    while mm * (q ** i - 1) < rel:
        factor = CInf(lead.field, q, mm, {0: 1, mm * (q ** i - 1): lead.field.neg(1)})
        prod = prod * factor.inverse(rel)
        i += 1
    return (lead * prod).truncate(prec)


def period_certificate(E, pi, series=None):
    """(value of e(pi), floor) for a claimed period."""
    val = exp_eval(E, pi if isinstance(pi, list) else [pi], series)
    floors = [v.floor_log() for v in val]
    return val, max(f for f in floors if f is not None)
