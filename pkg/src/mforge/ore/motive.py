"""Rank and localization of the motive of an Anderson module, and torsion counts.

The motive is the left module L{tau}^(1 x d) / (rows of D - t), with D the
matrix of phi_t.  ``motive_rank`` follows the constructive route: diagonalize
y**s (D - t) in the opposite variable y, normalize the diagonal to unit
constant terms, and transport back to get a matrix D' with

    D' (D - t) = N,   N = N_r x**r + ... + N_0,   N_r invertible,

so x**r kappa is expressed through lower twists once det(N_r) and the
denominators of D' are inverted.  The rank is the number of twists
x**i kappa_j (i < r) minus the dimension of the span of all remaining
relations, closed under x.
"""

from ..basealg import ffield as ff
from ..basealg.perfrat import (PerfRatFun, _b_divexact, _b_gcd, _b_mul, _b_normal,
                               perf_frobenius)
from ..basealg.poly import Poly
from ..errors import AlgorithmError, NonIntegralRank
from .linalg import Span, det, mat_inv, mat_mul
from .matrix import OreMatrix, ore_diagonalize
from .orepoly import TAU, TAU_INV, OrePoly


def phi_matrix(E, a=None):
    """phi_a as an OreMatrix in tau; a defaults to t."""
    field = E.field
    d = E.d
    D = OreMatrix([[OrePoly(field, {k: Th[i][j] for k, Th in enumerate(E.theta)}, TAU)
                    for j in range(d)] for i in range(d)], field, TAU)
    if a is None:
        return D
    result = OreMatrix.zeros(field, d, d, TAU)
    ident = OreMatrix.identity(field, d, TAU)
    for c in reversed(a.coeffs):
        result = result * D + ident * OrePoly.const(PerfRatFun.const(field, c), TAU)
    return result


def relation_matrix(E):
    """D - t as an OreMatrix in tau."""
    D = phi_matrix(E)
    t = OrePoly.const(PerfRatFun.t(E.field), TAU)
    return D - OreMatrix.identity(E.field, E.d, TAU) * t


def star(a):
    """Anti-involution c x**k -> c**(1/q**(eps*k)) x**-k for x = tau**eps.

    It exchanges the tau and tau**-1 rings.
    """
    return OrePoly(a.field, {k: perf_frobenius(c, -a.twist * k) for k, c in a.coeffs.items()},
                   -a.twist)


def dual_relation_matrix(E):
    M = relation_matrix(E)
    d = E.d
    return OreMatrix([[star(M.rows[j][i]) for j in range(d)] for i in range(d)], E.field, TAU_INV)


class MotiveReport:
    """Outcome of the rank pipeline."""

    __slots__ = ('rank', 'f', 'r', 'relations', 'twist', 'rank_direct', 'S_prime',
                 'D_prime', 'cert', '_span')

    def __init__(self, rank, f, r, relations, twist, rank_direct, S_prime, D_prime, cert, span):
        self.rank = rank
        self.f = f
        self.r = r
        self.relations = relations
        self.twist = twist
        self.rank_direct = rank_direct
        self.S_prime = S_prime
        self.D_prime = D_prime
        self.cert = cert
        self._span = span

    def f_is_unit(self):
        return self.f.is_constant() and not self.f.is_zero()

    def divides_prime(self, prime):
        """True when the prime of A shares a factor with f."""
        g = prime.generator
        F = g.field
        pg = {(i, 0): c for i, c in enumerate(g.coeffs) if c}
        h = _b_gcd(F, self.f.num, pg)
        return any(i > 0 for i, _ in h)

    def excluded_primes(self, max_degree):
        F = self.f.field
        return [p for p in monic_primes(F, max_degree) if self.divides_prime(p)]

    def relation_strings(self):
        sym = 'T' if self.twist == TAU else 'Ti'
        out = []
        for i, row in enumerate(self.relations):
            rhs = ' + '.join(f'({e})*k{j + 1}' for j, e in enumerate(row) if e) or '0'
            out.append(f'{sym}^{self.r}*k{i + 1} = {rhs}')
        return out

    def in_relation_module(self, vector):
        """Whether sum_j vector[j] kappa_j vanishes in the generic fibre."""
        v = _reduce(vector, self.relations, self.r)
        return self._span.contains(_flatten(v, self.r))

    def as_dict(self):
        return {'rank': self.rank, 'f': str(self.f), 'r': self.r,
                'relations': self.relation_strings(), 'rank_cross_check': self.rank_direct}


def monic_primes(F, max_degree):
    from ..basealg.primes import PrimeIdeal
    out = []
    Q = F.order
    for n in range(1, max_degree + 1):
        for code in range(Q ** n):
            g = ff._int_to_vec(code, Q, n) + [1]
            if ff.is_irreducible(F, g):
                out.append(PrimeIdeal(Poly(F, g)))
    return out


def _const_matrix(M, k=0):
    return [[a.coeff(k) for a in row] for row in M.rows]


def _inverse_transform(cert):
    """C**-1 from the column-operation log.

    C = E_1 ... E_k, so C**-1 = E_k**-1 ... E_1**-1, built by left
    multiplications, i.e. row operations on the identity.
    """
    n = len(cert.M.rows)
    R = OreMatrix.identity(cert.M.field, n, cert.M.twist)
    for op in cert.ops:
        kind = op[0]
        if kind == 'col_swap':
            _, i, j = op
            R.rows[i], R.rows[j] = R.rows[j], R.rows[i]
        elif kind == 'col_add':
            # E = 1 - q e_ji, so E**-1 R adds q * row_i to row_j
            _, i, j, q = op
            R.rows[j] = [a + q * b for a, b in zip(R.rows[j], R.rows[i])]
    if cert.C * R != OreMatrix.identity(cert.M.field, n, cert.M.twist):
        raise AlgorithmError('column transform inverse failed')
    return R


def motive_pipeline(Mrel, require_level0=True):
    """Run the rank pipeline on a square relation matrix in the variable x."""
    eps = Mrel.twist
    F = Mrel.field
    d = len(Mrel.rows)
    s = Mrel.degree()
    # y**s (D - t) is a polynomial matrix in y = x**-1
    Ys = Mrel.to_twist(-eps).shift(s)
    if Ys.valuation() < 0:
        raise AlgorithmError('shifted relation matrix is not polynomial')
    cert = ore_diagonalize(Ys, s)
    diag = cert.diag.diagonal_entries()
    vals = [e.valuation for e in diag]
    T = OreMatrix.diagonal([OrePoly.var(F, -v, -eps) for v in vals])
    TD = T * cert.diag
    S = _const_matrix(TD)
    Cinv = _inverse_transform(cert)
    C0 = _const_matrix(cert.C)
    C0inv = _const_matrix(Cinv)
    S_prime = mat_mul(mat_mul(C0, S), C0inv)
    if not det(S_prime):
        raise AlgorithmError('normalized constant term is singular')
    ys = OreMatrix.diagonal([OrePoly.var(F, s, -eps)] * d)
    P = (cert.C * T * cert.B * ys).to_twist(eps)
    r = max(0, -P.valuation())
    if require_level0 and eps == TAU:
        e0 = _log_p(F)
        lvl = P.max_level()
        r = max(r, -(-lvl // e0))
    D_prime = P.shift(r)
    N = D_prime * Mrel
    if N.valuation() < 0 or N.degree() > r:
        raise AlgorithmError('transported relation matrix has the wrong shape')
    top = _const_matrix(N, r)
    expected = [[perf_frobenius(c, eps * r) for c in row] for row in S_prime]
    if top != expected:
        raise AlgorithmError('top coefficient differs from the twisted constant term')
    top_inv = mat_inv(top)
    low = OreMatrix([[OrePoly(F, {k: c for k, c in a.coeffs.items() if k < r}, eps) for a in row]
                     for row in N.rows], F, eps)
    rel = [[-sum((OrePoly.const(top_inv[i][l], eps) * low.rows[l][j] for l in range(d)),
                 OrePoly(F, {}, eps)) for j in range(d)] for i in range(d)]
    span = Span()
    frontier = []
    for row in Mrel.rows:
        v = _flatten(_reduce(row, rel, r), r)
        if span.add(v):
            frontier.append(v)
    cap = 4 * d * max(r, 1)
    rounds = 0
    while frontier:
        rounds += 1
        if rounds > cap:
            raise AlgorithmError('relation span did not stabilize within the cap')
        new = []
        for v in frontier:
            w = _flatten(_reduce(_shift_vec(_unflatten(v, d, r, F, eps), 1), rel, r), r)
            if span.add(w):
                new.append(w)
        frontier = new
    rank = d * r - span.dim
    direct = ore_diagonalize(Mrel)
    rank_direct = sum(e.degree for e in direct.diag.diagonal_entries())
    if rank != rank_direct:
        raise AlgorithmError(f'rank {rank} disagrees with direct count {rank_direct}')
    f = _localization_element(det(top), D_prime)
    return MotiveReport(rank, f, r, rel, eps, rank_direct, S_prime, D_prime, cert, span)


def _log_p(F):
    e, q = 0, 1
    while q < F.order:
        q *= F.p
        e += 1
    return e


def _reduce(vector, rel, r):
    """Rewrite sum_j v_j kappa_j using x**r kappa = rel kappa until all degrees are below r."""
    v = list(vector)
    d = len(v)
    while True:
        j = next((j for j in range(d) if v[j] and v[j].degree >= r), None)
        if j is None:
            return v
        a = v[j]
        top = {k: c for k, c in a.coeffs.items() if k >= r}
        v[j] = OrePoly(a.field, {k: c for k, c in a.coeffs.items() if k < r}, a.twist)
        mult = OrePoly(a.field, {k - r: c for k, c in top.items()}, a.twist)
        for l in range(d):
            if rel[j][l]:
                v[l] = v[l] + mult * rel[j][l]


def _flatten(v, r):
    out = []
    for a in v:
        if a and a.valuation < 0:
            raise AlgorithmError('negative power in a reduced relation')
        out.extend(a.coeff(i) for i in range(r))
    return out


def _unflatten(flat, d, r, F, eps):
    return [OrePoly(F, {i: flat[j * r + i] for i in range(r)}, eps) for j in range(d)]


def _shift_vec(v, k):
    return [a.shift(k) for a in v]


def _localization_element(det_top, D_prime):
    """Numerator of det(top) times denominators of D', made primitive and squarefree in t."""
    F = det_top.field
    level = max([det_top.level] + [c.level for row in D_prime.rows for a in row
                                   for c in a.coeffs.values()])
    num, _ = det_top.lift(level)
    acc = num
    seen = set()
    for row in D_prime.rows:
        for a in row:
            for c in a.coeffs.values():
                _, den = c.lift(level)
                key = tuple(sorted(den.items()))
                if key in seen or key == (((0, 0), 1),):
                    continue
                seen.add(key)
                acc = _b_mul(F, acc, den)
    acc = _drop_theta_content(F, acc)
    acc = _squarefree_t(F, acc)
    return PerfRatFun(F, acc, None, level)


def _drop_theta_content(F, a):
    rows = {}
    for (i, j), c in a.items():
        rows.setdefault(i, []).append((j, c))
    g = []
    for i, terms in rows.items():
        n = max(j for j, _ in terms)
        poly = [0] * (n + 1)
        for j, c in terms:
            poly[j] = c
        g = ff.pgcd(F, g, poly) if g else ff.pmonic(F, poly)
    if len(g) > 1:
        gb = {(0, j): c for j, c in enumerate(g) if c}
        a = _b_divexact(F, a, gb)
    return _b_normal(F, a)


def _squarefree_t(F, a):
    da = {}
    for (i, j), c in a.items():
        k = F.mul(F.from_int(i), c) if i % F.p else 0
        if k:
            da[(i - 1, j)] = k
    if not da:
        return a
    g = _b_gcd(F, a, da)
    if any(i > 0 for i, _ in g):
        a = _b_divexact(F, a, g)
    return _b_normal(F, a)


def motive_rank(E):
    """Rank of the motive of E over Quot(A (x) L), with localization data."""
    return motive_pipeline(relation_matrix(E), require_level0=True)


def dual_motive_rank(E):
    """The same pipeline for the dual motive, with sides exchanged via the anti-involution."""
    return motive_pipeline(dual_relation_matrix(E), require_level0=False)


def torsion_count(E, a, prime_degree=None):
    """(N, p_rank) with q**N = #ker phi_a; p_rank = N / deg a when a is prime."""
    M = phi_matrix(E, a)
    cert = ore_diagonalize(M)
    N = sum(e.degree - e.valuation for e in cert.diag.diagonal_entries())
    deg = a.degree if prime_degree is None else prime_degree
    if N % deg:
        raise NonIntegralRank(f'kernel exponent {N} is not a multiple of {deg}')
    return N, N // deg
