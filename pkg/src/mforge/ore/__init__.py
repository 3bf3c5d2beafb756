"""Twisted polynomials, matrix diagonalization, motive ranks and torsion counts."""

from .linalg import Span
from .matrix import DiagCert, OreMatrix, ore_diagonalize
from .motive import (MotiveReport, dual_motive_rank, dual_relation_matrix, monic_primes,
                     motive_pipeline, motive_rank, phi_matrix, relation_matrix, star,
                     torsion_count)
from .orepoly import TAU, TAU_INV, OrePoly, ore_divmod, parse_ore

__all__ = [
    'Span', 'DiagCert', 'OreMatrix', 'ore_diagonalize', 'MotiveReport', 'dual_motive_rank',
    'dual_relation_matrix', 'monic_primes', 'motive_pipeline', 'motive_rank', 'phi_matrix',
    'relation_matrix', 'star', 'torsion_count', 'TAU', 'TAU_INV', 'OrePoly', 'ore_divmod',
    'parse_ore',
]
