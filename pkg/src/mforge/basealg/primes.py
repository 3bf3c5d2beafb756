"""Primes of A = Fq[t], their residue fields and traces."""

from dataclasses import dataclass

from ..errors import InputError, NotIrreducible
from . import ffield as ff
from .poly import Poly


@dataclass(frozen=True)
class PrimeIdeal:
    generator: Poly

    @property
    def degree(self):
        return self.generator.degree

    @property
    def field(self):
        return self.generator.field

    def __str__(self):
        return str(self.generator)


def make_prime(f):
    """Wrap a monic irreducible polynomial as a prime ideal."""
    if not f or f.degree < 1 or not f.is_monic():
        raise InputError(f'{f} must be monic of degree at least 1')
    factor = ff.find_factor(f.field, list(f.coeffs))
    if factor is not None:
        raise NotIrreducible(f, Poly(f.field, factor))
    return PrimeIdeal(f)


@dataclass(frozen=True)
class ResidueField:
    """F_p = A/p as an explicit extension of Fq with t mapping to ``zeta``."""

    prime: PrimeIdeal
    field: ff.FiniteField
    zeta: int

    @property
    def degree(self):
        return self.prime.degree

    @property
    def power_basis(self):
        F = self.field
        return tuple(F.pow(self.zeta, i) for i in range(self.degree))

    def reduce(self, f):
        """Image of a polynomial of A in the residue field."""
        return f(self.zeta, self.field)

    def coords(self, x):
        """Coordinates of x in the power basis (1, zeta, ...)."""
        if self.degree == 1:
            return (x,)
        return tuple(ff._int_to_vec(x, self.prime.field.order, self.degree))

    def from_coords(self, cs):
        if self.degree == 1:
            return cs[0]
        return ff._vec_to_int(list(cs), self.prime.field.order)

    def trace(self, x):
        return trace_to_base(self, x)

    def mul_matrix(self, x):
        """Matrix of multiplication by x in the power basis; column j is x*zeta**j."""
        F = self.field
        cols = [self.coords(F.mul(x, b)) for b in self.power_basis]
        return [[cols[j][i] for j in range(self.degree)] for i in range(self.degree)]


def residue_field(prime):
    Fq = prime.field
    g = prime.generator
    if g.degree == 1:
        F = Fq
        zeta = Fq.neg(g.coeffs[0])
    else:
        F = ff.extension_by(Fq, g.coeffs)
        zeta = Fq.order  # the class of x, i.e. digit vector (0, 1, 0, ...)
    return ResidueField(prime, F, zeta)


def trace_to_base(rf, x):
    """Trace from the residue field down to Fq: sum of x**(q**i)."""
    F, q = rf.field, rf.prime.field.order
    acc, y = 0, x
    for _ in range(rf.degree):
        acc = F.add(acc, y)
        y = F.pow(y, q)
    return acc
