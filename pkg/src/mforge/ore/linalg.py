"""Dense linear algebra over the field of PerfRatFun values."""

from ..basealg.perfrat import PerfRatFun


def zero(field):
    return PerfRatFun.from_int(field, 0)


def one(field):
    return PerfRatFun.from_int(field, 1)


def mat_mul(A, B):
    F = A[0][0].field
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = zero(F)
            for l in range(k):
                if A[i][l] and B[l][j]:
                    acc = acc + A[i][l] * B[l][j]
            row.append(acc)
        out.append(row)
    return out


def mat_inv(A):
    """Inverse by Gauss-Jordan elimination; ZeroDivisionError when singular."""
    F = A[0][0].field
    n = len(A)
    aug = [list(A[i]) + [one(F) if i == j else zero(F) for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c]), None)
        if piv is None:
            raise ZeroDivisionError('singular matrix')
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = aug[c][c].inverse()
        aug[c] = [x * inv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def det(A):
    """Determinant by fraction-preserving elimination."""
    F = A[0][0].field
    n = len(A)
    M = [list(r) for r in A]
    result = one(F)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            return zero(F)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            result = -result
        result = result * M[c][c]
        inv = M[c][c].inverse()
        for r in range(c + 1, n):
            if M[r][c]:
                f = M[r][c] * inv
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return result


class Span:
    """Incrementally maintained row-echelon basis of a subspace."""

    __slots__ = ('rows', 'pivots')

    def __init__(self):
        self.rows = []
        self.pivots = []

    def reduce(self, v):
        v = list(v)
        for row, p in zip(self.rows, self.pivots):
            if v[p]:
                f = v[p]
                v = [x - f * y for x, y in zip(v, row)]
        return v

    def add(self, v):
        """Insert v; returns True when the dimension grows."""
        v = self.reduce(v)
        p = next((i for i, x in enumerate(v) if x), None)
        if p is None:
            return False
        inv = v[p].inverse()
        v = [x * inv for x in v]
        # keep existing rows reduced against the new pivot
        self.rows = [[x - r[p] * y for x, y in zip(r, v)] if r[p] else r for r in self.rows]
        self.rows.append(v)
        self.pivots.append(p)
        return True

    def contains(self, v):
        return not any(self.reduce(v))

    @property
    def dim(self):
        return len(self.rows)
