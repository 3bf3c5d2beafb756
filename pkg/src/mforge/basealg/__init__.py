"""Exact base arithmetic: finite fields, Fq[t], primes, and perfect-closure rational functions."""

from .ffield import FiniteField, base_field, extension, extension_by, prime_field
from .grammar import parse_expr
from .perfrat import PerfRatFun, parse_perf, perf_frobenius
from .poly import Poly, binom_mod
from .primes import PrimeIdeal, ResidueField, make_prime, residue_field, trace_to_base


def parse_polya(text, field):
    """Parse an element of A = Fq[t] written in the polynomial grammar."""
    from ..errors import ParseError
    value = parse_perf(text, field)
    if not value.is_poly_t() or value.level or any(j for _, j in value.num) \
            or value.den != {(0, 0): 1}:
        raise ParseError(f'{text!r} is not a polynomial in t')
    n = max((i for i, _ in value.num), default=-1)
    return Poly(field, [value.num.get((i, 0), 0) for i in range(n + 1)])


__all__ = [
    'FiniteField', 'base_field', 'extension', 'extension_by', 'prime_field',
    'parse_expr', 'PerfRatFun', 'parse_perf', 'perf_frobenius', 'Poly', 'binom_mod',
    'PrimeIdeal', 'ResidueField', 'make_prime', 'residue_field', 'trace_to_base',
    'parse_polya',
]
