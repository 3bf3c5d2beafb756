"""Anderson modules over L = Fq(theta): definition, validation and manifests."""

import json

from ..basealg import base_field
from ..basealg.perfrat import PerfRatFun, parse_perf
from ..errors import InputError, NotAndersonModule, ParseError


class AndersonModule:
    """phi_t = sum_k theta[k] tau**k with d x d matrices over L."""

    __slots__ = ('q', 'd', 'theta', 'field', 'name')

    def __init__(self, q, theta, name=None):
        self.q = q
        self.field = base_field(q)
        self.theta = [[list(row) for row in M] for M in theta]
        self.d = len(self.theta[0])
        self.name = name

    @property
    def weight(self):
        """Largest tau-power in phi_t."""
        return len(self.theta) - 1

    def dphi(self):
        return self.theta[0]

    # manifests

    @classmethod
    def from_manifest(cls, data, name=None):
        try:
            q = int(data['q'])
            d = int(data['d'])
            phi = data['phi_t']
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f'malformed manifest: {exc}') from exc
        if q > 9 or q < 2:
            raise InputError('q must be a prime power at most 9')
        try:
            F = base_field(q)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        if F.p > 7:
            raise InputError('characteristic must be at most 7')
        if not isinstance(phi, list) or not phi:
            raise InputError('phi_t must be a non-empty list of matrices')
        theta = []
        for M in phi:
            if len(M) != d or any(len(row) != d for row in M):
                raise InputError('every phi_t coefficient must be a d x d matrix')
            theta.append([[_parse_entry(x, F) for x in row] for row in M])
        return cls(q, theta, name or data.get('name'))

    def to_manifest(self):
        data = {'q': self.q, 'd': self.d,
                'phi_t': [[[str(x) for x in row] for row in M] for M in self.theta]}
        if self.name:
            data['name'] = self.name
        return data

    def __eq__(self, other):
        return (isinstance(other, AndersonModule) and self.q == other.q
                and self.theta == other.theta)

    def __hash__(self):
        return hash((self.q, str(self.theta)))

    def __repr__(self):
        return f'AndersonModule({self.name or ""} q={self.q}, d={self.d})'


def _parse_entry(x, F):
    value = parse_perf(str(x), F)
    if not value.is_theta_only() or value.level:
        raise ParseError(f'{x!r} is not an element of Fq(theta)')
    return value


def loads(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f'manifest is not valid JSON: {exc}') from exc
    return AndersonModule.from_manifest(data)


def dumps(E):
    """Canonical JSON text of a module."""
    return json.dumps(E.to_manifest())


def load_manifest(path):
    with open(path, encoding='utf-8') as fh:
        return loads(fh.read())


def validate_module(E):
    """Check that dphi_t - theta is nilpotent and the top coefficient is nonzero."""
    F = E.field
    d = E.d
    theta = PerfRatFun.theta(F)
    if not any(x for row in E.theta[-1] for x in row):
        raise NotAndersonModule('top tau-coefficient of phi_t is zero')
    if len(E.theta) < 2:
        raise NotAndersonModule('phi_t has no tau term')
    N = [[E.theta[0][i][j] - (theta if i == j else 0) for j in range(d)] for i in range(d)]
    P = N
    for _ in range(d - 1):
        P = _mm(P, N)
    if any(x for row in P for x in row):
        raise NotAndersonModule('dphi_t - theta is not nilpotent')
    return E


def _mm(A, B):
    n = len(A)
    return [[sum((A[i][k] * B[k][j] for k in range(n)), PerfRatFun.from_int(A[0][0].field, 0))
             for j in range(n)] for i in range(n)]


def carlitz(q=3):
    F = base_field(q)
    return AndersonModule(q, [[[PerfRatFun.theta(F)]], [[PerfRatFun.from_int(F, 1)]]], 'carlitz')


def drinfeld(q, g, delta):
    """Rank-2 Drinfeld module phi_t = theta + g tau + delta tau**2 (g, delta in the grammar)."""
    F = base_field(q)
    return AndersonModule(q, [[[PerfRatFun.theta(F)]], [[parse_perf(str(g), F)]],
                              [[parse_perf(str(delta), F)]]], 'drinfeld')


def example_t_division(q=3):
    """The two-dimensional module with phi_t = [[th,0],[th,th]] + [[1,1],[0,0]] tau."""
    return AndersonModule.from_manifest(
        {'q': q, 'd': 2, 'phi_t': [[['th', '0'], ['th', 'th']], [['1', '1'], ['0', '0']]]},
        'infinite-t-division')
