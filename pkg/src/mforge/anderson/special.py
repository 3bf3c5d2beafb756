"""Special functions: points h over the Tate algebra with phi_a(h) = a * h.

Two producers are provided.  ``agf`` builds the generating function of a
period from values of the exponential; ``solve_sf`` solves the recursion
phi_t(e_i) = e_{i-1} coefficient by coefficient for d = 1.  Both attach a
tail bound for the coefficients past the stored range and a residual
certificate for phi_t(h) - t * h on the stored range.
"""

from fractions import Fraction
from math import gcd

from ..basealg import ffield as ff
from ..cinfty import DEFAULT_U_PREC, CInf, newton_additive
from ..errors import (AlgorithmError, BranchInvalid, DegenerateTorsion, Indeterminate, InputError,
                      PrecisionExhausted)
from ..hyperderiv import hd_padic
from ..ore.linalg import mat_inv
from ..tate import TatePoint, to_padic
from .actions import (apply_coefficients, l_mat_norm_log, l_mul, l_valuation, phi_act,
                      phi_coefficients, to_cinf)
from .exponential import ExpSeries, exp_bound, exp_eval


def log_q_ten(q):
    """Smallest a/8 with q**(a/8) >= 10: a rational upper bound for log_q(10)."""
    a = 0
    while q ** a < 10 ** 8:
        a += 1
    return Fraction(a, 8)


class SpecialFunction:
    """A certified special function: point, residual bound, floor and branch tag."""

    __slots__ = ('E', 'point', 'residual', 'floor', 'branch')

    def __init__(self, E, point, branch=None):
        self.E = E
        self.point = point
        self.branch = branch
        self.residual, self.floor = sf_residual(E, point)

    @property
    def certified(self):
        return self.residual is None or (self.floor is not None and self.residual <= self.floor)

    def scale(self, c):
        """Multiply by a constant of the coefficient field."""
        pt = self.point.map_coeffs(lambda e: [x.scale(c) for x in e], self.point.tail_log)
        return SpecialFunction(self.E, pt, self.branch)

    def as_dict(self):
        return {'branch': self.branch, 't_prec': self.point.t_prec,
                'tail_log': _s(self.point.tail_log), 'residual_log': _s(self.residual),
                'floor_log': _s(self.floor), 'certified': self.certified}


def _s(x):
    return None if x is None else str(x)


def sf_residual(E, point):
    """(max norm bound, floor) of phi_t(e_i) - e_{i-1} over the stored range."""
    P = phi_coefficients(E)
    worst, floor = None, None
    prev = None
    for e in point.coeffs:
        r = apply_coefficients(P, e)
        if prev is not None:
            r = [a - b for a, b in zip(r, prev)]
        prev = e
        for x in r:
            if x.terms:
                n = x.norm_log()
                worst = n if worst is None else max(worst, n)
            f = x.floor_log()
            if f is not None:
                floor = f if floor is None else max(floor, f)
    if worst is None:
        worst = floor
    return worst, floor


def _dphi_inverse(E):
    return mat_inv(E.theta[0])


def _apply_L(M, x):
    out = []
    for row in M:
        acc = None
        for c, v in zip(row, x):
            if c:
                y = l_mul(c, v)
                acc = y if acc is None else acc + y
        out.append(x[0].scale(0) if acc is None else acc)
    return out


def _vfloor(x):
    vals = [v.floor_log() for v in x if v.floor_log() is not None]
    return max(vals) if vals else None


def agf(E, lam, N_t=None, series=None, max_t=400):
    """The generating function sum t**i e(dphi_t**-(i+1) lam).

    With ``N_t = None`` coefficients are added until the tail bound drops
    below the floor of the first coefficient.
    """
    lam = list(lam)
    series = series or ExpSeries(E)
    inv = _dphi_inverse(E)
    inv_norm = l_mat_norm_log(inv)
    if inv_norm is None or inv_norm >= 0:
        raise AlgorithmError('dphi_t**-1 is not contracting')
    x = _apply_L(inv, lam)
    coeffs = []
    floor0 = None
    while True:
        e = exp_eval(E, x, series)
        coeffs.append(e)
        if floor0 is None:
            floor0 = _vfloor(e)
        x = _apply_L(inv, x)
        tail = _tail_bound(series, x)
        done = len(coeffs) - 1 >= N_t if N_t is not None else (
            tail is None or (floor0 is not None and tail <= floor0))
        if done:
            break
        if len(coeffs) > max_t:
            raise AlgorithmError('tail bound does not reach the floor')
    return SpecialFunction(E, TatePoint(coeffs, tail if tail is not None else floor0), 'agf')


def _tail_bound(series, x):
    """Bound for |e(y)| over all later arguments y, which shrink geometrically."""
    if all(v.is_certified_zero() for v in x):
        return None
    bounds = [b for b in exp_bound(series, x, 4) if b is not None]
    return max(bounds) if bounds else None


# solving the recursion for d = 1


def _newton_polygon(points):
    """Lower convex hull of (x, y) points sorted by x."""
    hull = []
    for p in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def kernel_seeds(E, max_degree=8):
    """Leading terms (valuation, root, field) of every nonzero kernel element of phi_t.

    Ordered by edge of the Newton polygon (smallest norm first), then by
    encoding of the leading coefficient.
    """
    if E.d != 1:
        raise InputError('kernel seeds are implemented for d = 1')
    F, q = E.field, E.q
    coeffs = [M[0][0] for M in E.theta]
    pts = [(q ** k, l_valuation(c), k) for k, c in enumerate(coeffs) if c]
    hull = _newton_polygon([(x, y) for x, y, _ in pts])
    seeds = []
    for (x0, y0), (x1, y1) in zip(hull, hull[1:]):
        slope = Fraction(y1 - y0, x1 - x0)
        v = -slope
        on_edge = [(x, k) for x, y, k in pts if x0 <= x <= x1 and y - y0 == slope * (x - x0)]
        k0 = next(k for x, k in on_edge if x == x0)
        lead = {}
        for x, k in on_edge:
            val = l_valuation(coeffs[k])
            mm = val.denominator
            cc = to_cinf(coeffs[k], q, mm, prec=mm * (val + 1) + 1)
            lead[k] = cc.terms[min(cc.terms)]
        expected = q ** (max(lead) - k0) - 1
        roots, G = [], F
        for s in range(1, max_degree + 1):
            G = ff.extension(F, s)
            roots = [X for X in range(1, G.order)
                     if not _edge_value(G, lead, X, q)]
            if len(roots) == expected:
                break
        else:
            raise AlgorithmError('kernel roots not found in small extensions')
        seeds.extend((v, X, G) for X in roots)
    return seeds


def _edge_value(G, lead, X, q):
    acc = 0
    for k, c in lead.items():
        acc = G.add(acc, G.mul(c, G.pow(X, q ** k)))
    return acc


def solve_sf(E, N_t=None, branch=0, prec=DEFAULT_U_PREC, m=1, max_t=400):
    """Special function with e_0 a kernel element of phi_t chosen by ``branch``.

    The ramification index is the least common multiple of ``m`` and the
    denominator of the kernel valuation.
    """
    if E.d != 1:
        raise InputError('solve_sf needs a module of dimension 1')
    seeds = kernel_seeds(E)
    if not 0 <= branch < len(seeds):
        raise BranchInvalid(f'branch {branch} outside 0..{len(seeds) - 1}')
    v, X, G = seeds[branch]
    m = m * v.denominator // gcd(m, v.denominator)
    q = E.q
    A = [[[to_cinf(M[0][0], q, m, G, prec=prec + 2 * m)]] for M in E.theta]
    seed = CInf(G, q, m, {int(v * m): X}, prec)
    e0 = newton_additive(A, [CInf.zero(G, q, m, prec)], [seed])[0]
    theta_inv_log = -1
    coeffs = [[e0]]
    floor0 = e0.floor_log()
    while True:
        prevx = coeffs[-1][0]
        x0 = prevx.mul_theta(-1)
        x = newton_additive(A, [prevx], [x0])[0]
        coeffs.append([x])
        tail = x.norm_log_bound() + theta_inv_log
        if N_t is not None:
            if len(coeffs) - 1 >= N_t:
                break
        elif tail <= floor0:
            break
        if len(coeffs) > max_t:
            raise AlgorithmError('tail bound does not reach the floor')
    return SpecialFunction(E, TatePoint(coeffs, tail), branch)


# torsion values


class TorsionValue:
    """Raw and traced torsion value at a prime power with its certificates."""

    __slots__ = ('n', 'raw', 'traced', 'kill_log', 'kill_floor', 'killed',
                 'nonzero_log', 'nonzero_floor', 'nonzero_margin', 'traced_margin')

    def __init__(self, **kw):
        for k, v in kw.items():
            setattr(self, k, v)

    @property
    def nonzero(self):
        return self.nonzero_margin is not None and self.nonzero_margin >= 0

    def as_dict(self):
        return {'n': self.n, 'raw': self.raw.dump(),
                'traced': [x.dump() for x in self.traced],
                'kill_log': _s(self.kill_log), 'kill_floor_log': _s(self.kill_floor),
                'killed': self.killed, 'nonzero_log': _s(self.nonzero_log),
                'nonzero_floor_log': _s(self.nonzero_floor),
                'nonzero_margin': _s(self.nonzero_margin),
                'traced_margin': _s(self.traced_margin)}


def _rv_stats(rv):
    comps = [x for row in rv.comps for x in row]
    norms = [x.norm_log() for x in comps if x.terms]
    floors = [x.floor_log() for x in comps if x.floor_log() is not None]
    return (max(norms) if norms else None), (max(floors) if floors else None)


def _margin(norm, floor, q):
    """log_q(norm / floor) - log_q(10); nonnegative means at least ten times the floor."""
    if norm is None:
        return None
    if floor is None:
        return Fraction(10 ** 6)
    return norm - floor - log_q_ten(q)


def torsion_from_sf(E, h, prime, n):
    """Value at the prime of the n-th prime-derivative of h, with kill and nonzero certificates."""
    point = getattr(h, 'point', h)
    if n > point.t_prec and point.tail_log is not None:
        raise PrecisionExhausted(f'order {n} exceeds the stored t-precision {point.t_prec}')
    hp = to_padic(point, prime, n)
    raw = hd_padic(n, hp).coeffs[0]
    traced = raw.trace()
    a = prime.generator
    killed_val = phi_act(E, a ** (n + 1), raw)
    kill_norm, kill_floor = _rv_stats(killed_val)
    killed = killed_val.is_zero_to_precision()
    nz_val = phi_act(E, a ** n, raw)
    nz_norm, nz_floor = _rv_stats(nz_val)
    tr_val = phi_act(E, a ** n, traced)
    tr_norm = max((x.norm_log() for x in tr_val if x.terms), default=None)
    tr_floor = max((x.floor_log() for x in tr_val if x.floor_log() is not None), default=None)
    out = TorsionValue(n=n, raw=raw, traced=traced,
                       kill_log=kill_norm if kill_norm is not None else kill_floor,
                       kill_floor=kill_floor, killed=killed,
                       nonzero_log=nz_norm, nonzero_floor=nz_floor,
                       nonzero_margin=_margin(nz_norm, nz_floor, E.q),
                       traced_margin=_margin(tr_norm, tr_floor, E.q))
    if not killed:
        raise AlgorithmError(f'phi of the prime power {n + 1} does not kill the value')
    if out.nonzero or (out.traced_margin is not None and out.traced_margin >= 0):
        return out
    if nz_val.is_zero_to_precision():
        raise DegenerateTorsion(f'phi of the prime power {n} kills the value at order {n}')
    raise Indeterminate(f'torsion value at order {n} is within ten times the precision floor')


def independent_branches(E, r):
    """First r branch indices whose kernel seeds are linearly independent over Fq."""
    seeds = kernel_seeds(E)
    chosen = []
    for b, (v, X, G) in enumerate(seeds):
        if len(chosen) == r:
            break
        # within one edge, independence of leading coefficients suffices
        span = _fq_span(G, [seeds[c][1] for c in chosen if seeds[c][0] == v], E.q)
        if X not in span:
            chosen.append(b)
    if len(chosen) < r:
        raise AlgorithmError('not enough independent kernel branches')
    return chosen


def _fq_span(G, vecs, q):
    span = {0}
    for x in vecs:
        span = {G.add(s, G.mul(c, x)) for s in span for c in range(q)}
    return span
