"""Matrices of twisted polynomials and their diagonalization.

Diagonalization alternates left Euclidean division on the pivot column
(row operations) with right division on the pivot row (column operations).
Every step is logged, the transforms B and C are rebuilt from the log, and
``B * M * C == diag`` is checked exactly before a certificate is returned.
"""

from ..basealg.perfrat import PerfRatFun
from ..errors import SingularInput
from .orepoly import OrePoly, ore_divmod


class OreMatrix:
    """Rectangular matrix of OrePoly entries sharing one twist."""

    __slots__ = ('rows', 'field', 'twist')

    def __init__(self, rows, field=None, twist=None):
        self.rows = [list(r) for r in rows]
        first = self.rows[0][0]
        self.field = field or first.field
        self.twist = first.twist if twist is None else twist

    @classmethod
    def identity(cls, field, n, twist):
        one = OrePoly.from_int(field, 1, twist)
        zero = OrePoly(field, {}, twist)
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)], field, twist)

    @classmethod
    def zeros(cls, field, n, m, twist):
        zero = OrePoly(field, {}, twist)
        return cls([[zero] * m for _ in range(n)], field, twist)

    @classmethod
    def diagonal(cls, entries):
        field, twist = entries[0].field, entries[0].twist
        zero = OrePoly(field, {}, twist)
        n = len(entries)
        rows = [[entries[i] if i == j else zero for j in range(n)] for i in range(n)]
        return cls(rows, field, twist)

    @property
    def shape(self):
        return len(self.rows), len(self.rows[0])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def copy(self):
        return OreMatrix(self.rows, self.field, self.twist)

    def __add__(self, other):
        return OreMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                         self.field, self.twist)

    def __sub__(self, other):
        return OreMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                         self.field, self.twist)

    def __neg__(self):
        return OreMatrix([[-a for a in r] for r in self.rows], self.field, self.twist)

    def __mul__(self, other):
        if isinstance(other, OrePoly):
            return OreMatrix([[a * other for a in r] for r in self.rows], self.field, self.twist)
        n, k = self.shape
        k2, m = other.shape
        if k != k2:
            raise ValueError('shape mismatch')
        zero = OrePoly(self.field, {}, self.twist)
        out = []
        for i in range(n):
            row = []
            for j in range(m):
                acc = zero
                for l in range(k):
                    a, b = self.rows[i][l], other.rows[l][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return OreMatrix(out, self.field, self.twist)

    def __rmul__(self, other):
        if isinstance(other, OrePoly):
            return OreMatrix([[other * a for a in r] for r in self.rows], self.field, self.twist)
        return NotImplemented

    def __eq__(self, other):
        return isinstance(other, OreMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(tuple(tuple(r) for r in self.rows))

    def is_diagonal(self):
        return all(not self.rows[i][j] for i in range(len(self.rows))
                   for j in range(len(self.rows[0])) if i != j)

    def diagonal_entries(self):
        return [self.rows[i][i] for i in range(min(self.shape))]

    def to_twist(self, twist):
        return OreMatrix([[a.to_twist(twist) for a in r] for r in self.rows], self.field, twist)

    def coefficient(self, k):
        """Matrix of x**k coefficients (PerfRatFun entries)."""
        return [[a.coeff(k) for a in r] for r in self.rows]

    def degree(self):
        return max(a.degree for r in self.rows for a in r)

    def valuation(self):
        vals = [a.valuation for r in self.rows for a in r if a]
        return min(vals) if vals else 0

    def max_level(self):
        return max(a.max_level() for r in self.rows for a in r)

    def shift(self, k):
        """Left multiplication by x**k."""
        return OreMatrix([[a.shift(k) for a in r] for r in self.rows], self.field, self.twist)

    def __str__(self):
        return '[' + '; '.join('[' + ', '.join(str(a) for a in r) + ']' for r in self.rows) + ']'

    def __repr__(self):
        return f'OreMatrix({self})'


class DiagCert:
    """Certificate ``B * M * C == diag`` with the elementary operation log."""

    __slots__ = ('M', 'B', 'C', 'diag', 's', 'ops')

    def __init__(self, M, B, C, diag, ops, s=0):
        self.M = M
        self.B = B
        self.C = C
        self.diag = diag
        self.ops = ops
        self.s = s
        if B * M * C != diag:
            raise ArithmeticError('diagonalization certificate failed')

    def verify(self):
        return self.B * self.M * self.C == self.diag and self.diag.is_diagonal()

    def replay_inverse(self):
        """Undo the logged operations on diag, recovering M."""
        R = self.diag.copy()
        for op in reversed(self.ops):
            kind = op[0]
            if kind == 'row_swap':
                _, i, j = op
                R.rows[i], R.rows[j] = R.rows[j], R.rows[i]
            elif kind == 'col_swap':
                _, i, j = op
                for row in R.rows:
                    row[i], row[j] = row[j], row[i]
            elif kind == 'row_add':
                # forward: row_i -= q * row_j
                _, i, j, q = op
                R.rows[i] = [a + q * b for a, b in zip(R.rows[i], R.rows[j])]
            elif kind == 'col_add':
                # forward: col_i -= col_j * q
                _, i, j, q = op
                for row in R.rows:
                    row[i] = row[i] + row[j] * q
        return R

    def degrees(self):
        return sorted(e.degree for e in self.diag.diagonal_entries())


def _pivot_key(entry, i, j):
    return (entry.degree, entry.span, i, j)


def ore_diagonalize(M, s=0):
    """Diagonalize a square matrix by two-sided elementary operations.

    Pivot choice: minimal (degree, degree span, row, col) among nonzero
    entries of the remaining block.  Raises SingularInput (with the
    certificate attached as ``cert``) when a zero block remains.
    """
    n, m = M.shape
    A = M.copy()
    ops = []
    for k in range(min(n, m)):
        while True:
            best = None
            for i in range(k, n):
                for j in range(k, m):
                    e = A.rows[i][j]
                    if e:
                        key = _pivot_key(e, i, j)
                        if best is None or key < best[0]:
                            best = (key, i, j)
            if best is None:
                break
            _, i, j = best
            if i != k:
                A.rows[i], A.rows[k] = A.rows[k], A.rows[i]
                ops.append(('row_swap', i, k))
            if j != k:
                for row in A.rows:
                    row[j], row[k] = row[k], row[j]
                ops.append(('col_swap', j, k))
            piv = A.rows[k][k]
            clean = True
            for i in range(k + 1, n):
                if A.rows[i][k]:
                    q, r = ore_divmod(A.rows[i][k], piv, 'left')
                    if q:
                        A.rows[i] = [a - q * b for a, b in zip(A.rows[i], A.rows[k])]
                        ops.append(('row_add', i, k, q))
                    if r:
                        clean = False
            for j in range(k + 1, m):
                if A.rows[k][j]:
                    q, r = ore_divmod(A.rows[k][j], piv, 'right')
                    if q:
                        for row in A.rows:
                            row[j] = row[j] - row[k] * q
                        ops.append(('col_add', j, k, q))
                    if r:
                        clean = False
            if clean:
                break
    B, C = _build_transforms(M, ops)
    cert = DiagCert(M, B, C, A, ops, s)
    if any(not e for e in A.diagonal_entries()):
        err = SingularInput('matrix is singular: zero diagonal entry remains')
        err.cert = cert
        raise err
    return cert


def _build_transforms(M, ops):
    n, m = M.shape
    B = OreMatrix.identity(M.field, n, M.twist)
    C = OreMatrix.identity(M.field, m, M.twist)
    for op in ops:
        kind = op[0]
        if kind == 'row_swap':
            _, i, j = op
            B.rows[i], B.rows[j] = B.rows[j], B.rows[i]
        elif kind == 'col_swap':
            _, i, j = op
            for row in C.rows:
                row[i], row[j] = row[j], row[i]
        elif kind == 'row_add':
            _, i, j, q = op
            B.rows[i] = [a - q * b for a, b in zip(B.rows[i], B.rows[j])]
        elif kind == 'col_add':
            _, i, j, q = op
            for row in C.rows:
                row[i] = row[i] - row[j] * q
    return B, C


def perf_zero(field):
    return PerfRatFun.from_int(field, 0)
