"""Anderson modules over Fq(theta): actions, exponential, special functions, trivializations."""

from .actions import (coordinate, iota_pair, lt_mul, phi_act, phi_coefficients, scalar_act,
                      to_cinf, torsion_verify)
from .exponential import ExpSeries, carlitz_lambda, carlitz_period, exp_coeffs, exp_eval
from .module import (AndersonModule, carlitz, drinfeld, dumps, example_t_division,
                     load_manifest, loads, validate_module)
from .special import (SpecialFunction, TorsionValue, agf, independent_branches,
                      kernel_seeds, solve_sf, torsion_from_sf)
from .trivialization import (InvariantBasis, Trivialization, build_trivialization,
                             det_at_prime, drinfeld_motive_data, invariance_check,
                             padic_invariant_basis, tate_matrix_inverse, tate_mul, unit_at)

__all__ = [
    'coordinate', 'iota_pair', 'lt_mul', 'phi_act', 'phi_coefficients', 'scalar_act',
    'to_cinf', 'torsion_verify', 'ExpSeries', 'carlitz_lambda', 'carlitz_period',
    'exp_coeffs', 'exp_eval', 'AndersonModule', 'carlitz', 'drinfeld', 'dumps',
    'example_t_division', 'load_manifest', 'loads', 'validate_module', 'SpecialFunction',
    'TorsionValue', 'agf', 'independent_branches', 'kernel_seeds', 'solve_sf',
    'torsion_from_sf', 'InvariantBasis', 'Trivialization', 'build_trivialization',
    'det_at_prime', 'drinfeld_motive_data', 'invariance_check', 'padic_invariant_basis',
    'tate_matrix_inverse', 'tate_mul', 'unit_at',
]
