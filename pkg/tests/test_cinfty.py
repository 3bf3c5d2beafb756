"""Truncated Puiseux arithmetic, roots, Newton iteration and Artin-Schreier."""

import random
from fractions import Fraction

import pytest

from mforge.basealg import base_field
from mforge.cinfty import (CInf, mat_det, mat_inverse, mat_mul, newton_additive, nth_root,
                           solve_artin_schreier)
from mforge.errors import DivisionByZero, PrecisionExhausted

F3 = base_field(3)


def rand_cinf(rng, F=F3, q=3, m=2, low=-4, high=30, prec=40):
    terms = {e: rng.randrange(1, F.order) for e in rng.sample(range(low, high), rng.randint(1, 6))}
    return CInf(F, q, m, terms, prec)


def test_exact_zero_and_precision_zero():
    z = CInf.zero(F3, 3)
    assert z.is_certified_zero() and z.norm_log() is None
    w = CInf.zero(F3, 3, 1, 10)
    assert w.is_zero_to_precision() and not w.is_certified_zero()
    assert w.floor_log() == -10
    with pytest.raises(PrecisionExhausted):
        w.leading()


def test_norm_is_exact_log():
    x = CInf.theta_power(F3, 3, Fraction(3, 2))
    assert x.norm_log() == Fraction(3, 2)
    assert x.m == 2


def test_ring_laws_agree(rng):
    for _ in range(40):
        a, b, c = rand_cinf(rng), rand_cinf(rng), rand_cinf(rng)
        assert ((a + b) * c).agrees(a * c + b * c)
        assert ((a * b) * c).agrees(a * (b * c))
        assert (a - a).is_zero_to_precision()


def test_precision_propagation():
    a = CInf(F3, 3, 1, {-2: 1, 0: 2}, 10)
    b = CInf(F3, 3, 1, {1: 1}, 5)
    assert (a + b).prec == 5
    # relative precisions 12 and 4 give a product of valuation -1 known to -1 + 4
    assert (a * b).prec == 3


def test_ultrametric(rng):
    for _ in range(40):
        a, b = rand_cinf(rng), rand_cinf(rng)
        s = a + b
        if s.terms:
            assert s.norm_log() <= max(a.norm_log(), b.norm_log())
        assert (a * b).norm_log() == a.norm_log() + b.norm_log()


def test_inverse(rng):
    for _ in range(30):
        a = rand_cinf(rng)
        one = a * a.inverse()
        assert one.agrees(CInf.const(F3, 3, 1, 2))
    with pytest.raises(DivisionByZero):
        CInf.zero(F3, 3, 1, 5).inverse()
    with pytest.raises(ValueError):
        CInf(F3, 3, 1, {0: 1, 1: 1}).inverse()


def test_exact_monomial_inverse_is_exact():
    x = CInf(F3, 3, 2, {-3: 2})
    assert (x * x.inverse()) == CInf.const(F3, 3, 1, 2)


def test_frobenius_is_multiplicative(rng):
    for _ in range(30):
        a, b = rand_cinf(rng), rand_cinf(rng)
        assert (a * b).frobenius(1).agrees(a.frobenius(1) * b.frobenius(1))
        assert (a + b).frobenius(2).agrees(a.frobenius(2) + b.frobenius(2))
        assert a.frobenius(1).agrees(a ** 3)


@pytest.mark.parametrize('n', [2, 4, 5])
def test_nth_root(rng, n):
    F = base_field(3)
    for _ in range(10):
        x = rand_cinf(rng, F)
        r = nth_root(x, n)
        assert (r ** n).agrees(x)
        assert r.norm_log() * n == x.norm_log()


def test_root_branches_differ_by_roots_of_unity():
    x = CInf(F3, 3, 1, {-1: 2}, 30)
    roots = [nth_root(x, 2, b) for b in range(2)]
    assert not roots[0].agrees(roots[1])
    assert (roots[0] + roots[1]).is_zero_to_precision()
    with pytest.raises(ValueError):
        nth_root(x, 2, 5)


def test_newton_carlitz_kernel_root():
    # theta*x + x^3 = 0 has the nonzero roots x^2 = -theta
    q, m = 3, 2
    theta = CInf.theta_power(F3, q, 1, m).truncate(60)
    minus_theta = CInf(F3, q, m, {-m: 2}, 60)
    x0 = nth_root(minus_theta, 2).truncate(1)
    one = CInf.const(F3, q, 1, m)
    zero = CInf.zero(F3, q, m)
    x = newton_additive([[[theta]], [[one]]], [zero], [x0])[0]
    assert (x * x).agrees(minus_theta)
    assert x.norm_log() == Fraction(1, 2)


def test_matrix_inverse_and_det(rng):
    for _ in range(10):
        M = [[rand_cinf(rng) for _ in range(2)] for _ in range(2)]
        det = mat_det(M)
        if not det.terms:
            continue
        P = mat_mul(M, mat_inverse(M))
        assert P[0][0].agrees(CInf.const(F3, 3, 1, 2)) and P[0][1].is_zero_to_precision()


@pytest.mark.parametrize('q,m', [(2, 1), (3, 2), (4, 3), (5, 4)])
def test_artin_schreier(q, m):
    F = base_field(q)
    rng = random.Random(q * 101 + m)
    for _ in range(50):
        terms = {e: rng.randrange(1, q) for e in rng.sample(range(1, 40), rng.randint(1, 6))}
        y = CInf(F, q, m, terms, 60)
        x = solve_artin_schreier(y)
        residual = x - x.frobenius(1) - y
        assert residual.is_zero_to_precision()
        assert x.norm_log() == y.norm_log()
        for c in range(q):
            shifted = x + CInf.const(F, q, c, m)
            assert shifted - shifted.frobenius(1) - y == residual


def test_artin_schreier_rejects_large_input():
    y = CInf(F3, 3, 1, {-1: 1}, 20)
    with pytest.raises(PrecisionExhausted):
        solve_artin_schreier(y)


def test_dump_is_stable():
    x = CInf(F3, 3, 2, {3: 1, -1: 2}, 9)
    assert x.dump() == '2*u^-1 + 1*u^3 [prec 9, m 2]'
