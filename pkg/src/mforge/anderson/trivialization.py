"""Rigid analytic trivializations and invariant bases at a prime.

For motive basis m_1..m_r with tau(m) = Theta m and special functions
h_1..h_r, the matrix Psi[j][i] = m_j(h_i) satisfies tau(Psi) = Theta Psi,
and Upsilon = Psi**-1 makes Upsilon m tau-invariant.  At a prime the same
invariant basis is reached by successive Artin-Schreier lifts.
"""

from ..basealg.perfrat import PerfRatFun
from ..cinfty import DEFAULT_U_PREC, CInf, mat_inverse, nth_root, solve_artin_schreier
from ..errors import (AlgorithmError, Indeterminate, NotFreeAtPrime, PrecisionExhausted,
                      SingularTrivialization)
from ..ore.orepoly import OrePoly
from ..tate import (PadicPoint, ResidueVector, TatePoint, eval_at_prime, residue_det, rv_mul,
                    to_padic)
from .actions import iota_pair, l_mul, lt_mul


# scalar Tate point arithmetic


def _zero_like(x):
    return x.scale(0)


def _sup_log(h):
    vals = [x.norm_log_bound() for e in h.coeffs for x in e]
    if h.tail_log is not None:
        vals.append(h.tail_log)
    vals = [v for v in vals if v is not None]
    return max(vals) if vals else None


def _add_log(a, b):
    return None if a is None or b is None else a + b


def _max_log(*vals):
    vals = [v for v in vals if v is not None]
    return max(vals) if vals else None


def tate_mul(a, b):
    """Product of scalar Tate points with a sup bound for the unknown tail."""
    if a.tail_log is None and b.tail_log is None:
        N = len(a.coeffs) + len(b.coeffs) - 1
    else:
        N = min(len(a.coeffs) if a.tail_log is not None else 10 ** 9,
                len(b.coeffs) if b.tail_log is not None else 10 ** 9)
    zero = _zero_like(a.coeffs[0][0])
    out = []
    for n in range(N):
        acc = None
        for i in range(max(0, n - len(b.coeffs) + 1), min(n, len(a.coeffs) - 1) + 1):
            term = a.coeffs[i][0] * b.coeffs[n - i][0]
            acc = term if acc is None else acc + term
        out.append([zero if acc is None else acc])
    tail = None
    if a.tail_log is not None or b.tail_log is not None:
        # every term a_i b_j of a later coefficient is bounded by the two sups
        tail = _add_log(_sup_log(a), _sup_log(b))
    return TatePoint(out, tail)


def tate_matrix_inverse(Psi, length=None):
    """Inverse of a square matrix of scalar Tate points whose t**0 part dominates.

    Writing Psi = P0 (1 + Z) with |P0**-1 Psi_i| <= q**rho < 1 for every i >= 1
    (tail included), each coefficient of the inverse past t**0 has norm at
    most |P0**-1| q**rho; that is the sup tail bound attached.
    """
    r = len(Psi)
    N = length or min(len(h.coeffs) for row in Psi for h in row)
    P0 = [[Psi[i][j].coeffs[0][0] for j in range(r)] for i in range(r)]
    P0inv = mat_inverse(P0)
    inv_log = _max_log(*(x.norm_log_bound() for row in P0inv for x in row))

    def coeff(i, j, k):
        h = Psi[i][j]
        return h.coeffs[k][0] if k < len(h.coeffs) else _zero_like(h.coeffs[0][0])

    # Y_0 = P0^-1, Y_k = -P0^-1 sum_{i=1..k} Psi_i Y_{k-i}
    Y = [P0inv]
    for k in range(1, N):
        acc = [[None] * r for _ in range(r)]
        for i in range(1, k + 1):
            for a in range(r):
                for b in range(r):
                    for c in range(r):
                        term = coeff(a, c, i) * Y[k - i][c][b]
                        acc[a][b] = term if acc[a][b] is None else acc[a][b] + term
        Yk = [[None] * r for _ in range(r)]
        for a in range(r):
            for b in range(r):
                s = None
                for c in range(r):
                    term = P0inv[a][c] * acc[c][b]
                    s = term if s is None else s + term
                Yk[a][b] = -s
        Y.append(Yk)
    rho = None
    for row in Psi:
        for h in row:
            vals = [x.norm_log_bound() for e in h.coeffs[1:] for x in e] + [h.tail_log]
            rho = _max_log(rho, *vals)
    rho = _add_log(rho, inv_log)
    tail = None
    if rho is not None:
        if rho >= 0:
            raise AlgorithmError('the constant term of the matrix does not dominate')
        tail = inv_log + rho
    return [[TatePoint([[Y[k][a][b]] for k in range(N)], tail) for b in range(r)]
            for a in range(r)]


def det_at_prime(Psi, prime):
    """det Psi evaluated at the prime, as a scalar residue vector.

    Each entry is evaluated first, so only its own tail bound enters.
    """
    vals = [[eval_at_prime(h, prime) for h in row] for row in Psi]
    return _rv_det(vals)


def _rv_det(M):
    r = len(M)
    if r == 1:
        return M[0][0]
    acc = None
    for j in range(r):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = rv_mul(M[0][j], _rv_det(minor))
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    return acc


def unit_at(Psi, prime):
    """Whether det Psi is a unit at the prime; Indeterminate below the floor."""
    det = residue_det(det_at_prime(Psi, prime))
    if det.terms:
        return True
    if det.is_certified_zero():
        return False
    raise Indeterminate('determinant at the prime is below the precision floor')


# trivializations


def drinfeld_motive_data(E):
    """Basis kappa, tau kappa, ..., tau**(w-1) kappa and Theta for a module of dimension 1."""
    if E.d != 1:
        raise ValueError('companion data exists for dimension 1 only')
    F = E.field
    w = E.weight
    coeffs = [M[0][0] for M in E.theta]
    t = PerfRatFun.t(F)
    zero = PerfRatFun.from_int(F, 0)
    one = PerfRatFun.from_int(F, 1)
    top_inv = coeffs[w].inverse()
    Theta = [[zero] * w for _ in range(w)]
    for j in range(w - 1):
        Theta[j][j + 1] = one
    # tau**w kappa = top**-1 (t - theta_0) kappa - sum_{0<k<w} top**-1 theta_k tau**k kappa
    Theta[w - 1][0] = top_inv * (t - coeffs[0])
    for k in range(1, w):
        Theta[w - 1][k] = -(top_inv * coeffs[k])
    basis = [[OrePoly.var(F, j)] for j in range(w)]
    return basis, Theta


class Trivialization:
    """Psi, Upsilon = Psi**-1, relation matrix Theta and the difference-equation certificate."""

    __slots__ = ('Psi', 'Upsilon', 'Theta', 'residual', 'floor', 'units')

    def __init__(self, Psi, Upsilon, Theta, residual, floor, units):
        self.Psi = Psi
        self.Upsilon = Upsilon
        self.Theta = Theta
        self.residual = residual
        self.floor = floor
        self.units = units

    @property
    def certified(self):
        return self.residual is None or (self.floor is not None and self.residual <= self.floor)

    def as_dict(self):
        return {'rank': len(self.Psi), 'residual_log': _s(self.residual),
                'floor_log': _s(self.floor), 'certified': self.certified,
                'unit_at': {str(p): u for p, u in self.units},
                'Theta': [[str(c) for c in row] for row in self.Theta]}


def _s(x):
    return None if x is None else str(x)


def difference_residual(Psi, Theta):
    """(max norm, floor) of tau(Psi) - Theta Psi over the stored t-range."""
    r = len(Psi)
    worst, floor = None, None
    for j in range(r):
        for i in range(r):
            lhs = Psi[j][i].frobenius(1)
            acc = None
            for l in range(r):
                if Theta[j][l]:
                    term = lt_mul(Theta[j][l], Psi[l][i])
                    acc = term if acc is None else acc + term
            diff = lhs if acc is None else lhs - acc
            n = min(len(lhs.coeffs), len(diff.coeffs))
            for e in diff.coeffs[:n]:
                for x in e:
                    if x.terms:
                        worst = _max_log(worst, x.norm_log())
                    floor = _max_log(floor, x.floor_log())
    return (worst if worst is not None else floor), floor


def build_trivialization(E, sf_basis, motive_basis, Theta, primes=()):
    """Assemble Psi[j][i] = m_j(h_i), invert it and certify tau(Psi) = Theta Psi."""
    r = len(sf_basis)
    if len(motive_basis) != r or len(Theta) != r:
        raise ValueError('need as many special functions as motive basis elements')
    Psi = [[iota_pair(h, m) for h in sf_basis] for m in motive_basis]
    units = []
    for prime in primes:
        try:
            ok = unit_at(Psi, prime)
        except Indeterminate:
            ok = False
        if not ok:
            raise SingularTrivialization(f'det Psi is not a unit at {prime}')
        units.append((prime, ok))
    Upsilon = tate_matrix_inverse(Psi)
    residual, floor = difference_residual(Psi, Theta)
    return Trivialization(Psi, Upsilon, Theta, residual, floor, units)


# invariant bases at a prime


def _padic_const(rf, N, value, sample):
    """The prime-adic point with constant C_infinity value and no higher terms."""
    zero = _zero_like(sample)
    comps0 = [[value]] + [[zero] for _ in range(rf.degree - 1)]
    out = [ResidueVector(rf, comps0)]
    out += [ResidueVector(rf, [[zero] for _ in range(rf.degree)]) for _ in range(N)]
    return PadicPoint(rf, out)


def _pmat_mul(A, B):
    r, k, c = len(A), len(B), len(B[0])
    out = []
    for i in range(r):
        row = []
        for j in range(c):
            acc = None
            for l in range(k):
                term = A[i][l] * B[l][j]
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(row)
    return out


def _pmat_frob(A, k=1):
    return [[x.map(lambda v: [y.frobenius(k) for y in v]) for x in row] for row in A]


def _pmat_sub(A, B):
    return [[a - b for a, b in zip(r, s)] for r, s in zip(A, B)]


def _pmat_add(A, B):
    return [[a + b for a, b in zip(r, s)] for r, s in zip(A, B)]


def _pmat_identity(rf, r, N, sample):
    one = CInf.const(sample.field, sample.q, 1, sample.m)
    zero = _zero_like(sample)
    return [[_padic_const(rf, N, one if i == j else zero, sample) for j in range(r)]
            for i in range(r)]


def _theta_padic(Theta, prime, N, q, field, m, prec):
    """Expansion at the prime of an r x r matrix over L[t]."""
    out = []
    for row in Theta:
        prow = []
        for c in row:
            parts = c.t_coeffs() if c else []
            zero = CInf.zero(field, q, m)
            coeffs = []
            for ci in parts:
                if ci:
                    one = CInf.const(field, q, 1, m)
                    coeffs.append([l_mul(ci, one, prec)])
                else:
                    coeffs.append([zero])
            h = TatePoint(coeffs or [[zero]])
            prow.append(to_padic(h, prime, N))
        out.append(prow)
    return out


class InvariantBasis:
    """Transform U (mod prime**(N+1)) with tau(U m) = U m, and its certificate."""

    __slots__ = ('U', 'Theta_N', 'N', 'residual', 'floor')

    def __init__(self, U, Theta_N, N, residual, floor):
        self.U = U
        self.Theta_N = Theta_N
        self.N = N
        self.residual = residual
        self.floor = floor

    @property
    def certified(self):
        return self.residual is None or (self.floor is not None and self.residual <= self.floor)

    def as_dict(self):
        return {'N': self.N, 'residual_log': _s(self.residual), 'floor_log': _s(self.floor),
                'certified': self.certified}


def _deviation(T, r):
    """(max norm, floor) of T - 1 over all stored prime-adic coefficients."""
    worst, floor = None, None
    for i in range(r):
        for j in range(r):
            for n, f in enumerate(T[i][j].coeffs):
                for k, row in enumerate(f.comps):
                    x = row[0]
                    if i == j and n == 0 and k == 0:
                        x = x - 1
                    if x.terms:
                        worst = _max_log(worst, x.norm_log())
                    floor = _max_log(floor, x.floor_log())
    return (worst if worst is not None else floor), floor


def padic_invariant_basis(E, prime, N, Theta, initial=None, prec=DEFAULT_U_PREC, m=None,
                          field=None, check_free=True):
    """Lift a tau-invariant basis modulo prime**(N+1).

    Stage 0 needs U_0 with U_0^[1] Theta U_0**-1 = 1 modulo the prime.  It is
    solved here for rank one at a degree-one prime (a (q-1)-th root);
    otherwise ``initial`` must supply U_0 as a matrix of prime-adic points.
    Stage n solves Y - Y^[1] = -C entrywise, with Theta_{n-1} = 1 + w**n C,
    and replaces Theta by (1 - Y^[1] w**n) Theta (1 - Y w**n)**-1.
    """
    from ..ore.motive import motive_rank
    if check_free and motive_rank(E).divides_prime(prime):
        raise NotFreeAtPrime(f'the motive is not free at {prime}')
    q = E.q
    m = m or (q - 1)
    field = field or E.field
    r = len(Theta)
    T = _theta_padic(Theta, prime, N, q, field, m, prec)
    rf = T[0][0].rf
    sample = T[0][0].coeffs[0].comps[0][0]
    if initial is None:
        if r != 1 or rf.degree != 1:
            raise NotImplementedError(
                'the stage-0 Lang step is solved for rank one at degree-one primes')
        t0 = T[0][0].coeffs[0].comps[0][0]
        if not t0.terms:
            raise PrecisionExhausted('Theta at the prime vanishes to precision')
        u0 = nth_root(t0.inverse(prec - t0.leading()[0]), q - 1)
        U = [[_padic_const(rf, N, u0, u0)]]
        sample = u0
    else:
        U = initial
    one = _pmat_identity(rf, r, N, sample)
    T = _pmat_mul(_pmat_mul(_pmat_frob(U), T), _pmat_inverse(U, one))
    for n in range(1, N + 1):
        C = [[T[i][j].coeffs[n] for j in range(r)] for i in range(r)]
        Y = []
        for i in range(r):
            row = []
            for j in range(r):
                comps = [[solve_artin_schreier(-x[0])] for x in C[i][j].comps]
                zero = _zero_like(comps[0][0])
                coeffs = []
                for k in range(N + 1):
                    if k == n:
                        coeffs.append(ResidueVector(rf, comps))
                    else:
                        coeffs.append(ResidueVector(rf, [[zero] for _ in range(rf.degree)]))
                row.append(PadicPoint(rf, coeffs))
            Y.append(row)
        left = _pmat_sub(one, _pmat_frob(Y))
        # (1 - Y)**-1 = 1 + Y + Y**2 + ... modulo w**(N+1)
        inv = one
        power = one
        for _ in range(N // n):
            power = _pmat_mul(power, Y)
            inv = _pmat_add(inv, power)
        T = _pmat_mul(_pmat_mul(left, T), inv)
        U = _pmat_mul(_pmat_sub(one, Y), U)
    residual, floor = _deviation(T, r)
    return InvariantBasis(U, T, N, residual, floor)


def _pmat_inverse(U, one):
    """Inverse of a matrix of prime-adic points with invertible constant term (rank one)."""
    if len(U) != 1:
        raise NotImplementedError('inverse of the supplied stage-0 matrix needs rank one')
    u = U[0][0]
    rf = u.rf
    N = u.p_prec
    f0 = u.coeffs[0]
    if rf.degree != 1:
        raise NotImplementedError('stage-0 inverse is implemented at degree-one primes')
    c0 = f0.comps[0][0]
    inv0 = c0.inverse()
    # v = inv0 * sum_k (1 - inv0 u)**k
    z = one[0][0] - _scalar_times(u, inv0)
    acc = one[0][0]
    power = one[0][0]
    for _ in range(N):
        power = power * z
        acc = acc + power
    return [[_scalar_times(acc, inv0)]]


def _scalar_times(u, c):
    return u.map(lambda v: [x * c for x in v])


def invariance_check(basis, Psi_padic):
    """U Psi must be tau-invariant: its coefficients lie in the residue field.

    Returns (ok, max deviation log, floor) measuring the non-constant part.
    """
    G = _pmat_mul(basis.U, Psi_padic)
    worst, floor = None, None
    for row in G:
        for g in row:
            for f in g.coeffs:
                for comp in f.comps:
                    x = comp[0]
                    const = x.terms.get(0, 0)
                    rest = x - CInf.const(x.field, x.q, const, x.m) if const else x
                    if const and not _in_base(x.field, const, x.q):
                        return False, None, None
                    if rest.terms:
                        worst = _max_log(worst, rest.norm_log())
                    floor = _max_log(floor, rest.floor_log())
    ok = worst is None or (floor is not None and worst <= floor)
    return ok, (worst if worst is not None else floor), floor


def _in_base(F, c, q):
    return F.pow(c, q) == c
