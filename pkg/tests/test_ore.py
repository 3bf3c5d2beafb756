"""Twisted polynomials, division, diagonalization and the motive pipeline."""

import random

import pytest

from mforge.anderson import carlitz, drinfeld, example_t_division
from mforge.basealg import PerfRatFun, base_field, make_prime, parse_polya, perf_frobenius
from mforge.errors import DivisionByZero, SingularInput
from mforge.ore import (TAU, TAU_INV, OreMatrix, OrePoly, dual_motive_rank, monic_primes,
                        motive_rank, ore_diagonalize, ore_divmod, parse_ore, phi_matrix,
                        relation_matrix, star, torsion_count)

from conftest import division_instance, planted_instance, rand_ore, rand_perf

F3 = base_field(3)


def test_commutation_rule(rng):
    x = OrePoly.var(F3)
    for _ in range(20):
        c = rand_perf(F3, rng, level=rng.randint(0, 1))
        assert x * OrePoly.const(c) == OrePoly(F3, {1: perf_frobenius(c, 1)})
        y = OrePoly.var(F3, 1, TAU_INV)
        assert y * OrePoly.const(c, TAU_INV) == OrePoly(F3, {1: perf_frobenius(c, -1)}, TAU_INV)


def test_multiplication_is_associative(rng):
    for _ in range(20):
        a, b, c = (rand_ore(F3, rng, rng.randint(0, 2)) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert (a + b) * c == a * c + b * c


@pytest.mark.parametrize('twist', [TAU, TAU_INV], ids=['tau', 'tau_inv'])
@pytest.mark.parametrize('side', ['left', 'right'])
def test_division_reconstructs(twist, side):
    rng = random.Random(f'{twist}{side}')
    for _ in range(50):
        a, b, quot, rem = division_instance(F3, rng, twist, side)
        q, r = ore_divmod(a, b, side)
        assert q == quot and r == rem


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        ore_divmod(OrePoly.var(F3), OrePoly(F3, {}))


def test_parse_round_trip(rng):
    for twist in (TAU, TAU_INV):
        for _ in range(20):
            a = rand_ore(F3, rng, rng.randint(0, 3), twist, level=rng.randint(0, 1))
            assert parse_ore(str(a), F3, twist) == a


def test_star_is_an_anti_involution(rng):
    for _ in range(20):
        a, b = rand_ore(F3, rng, 2), rand_ore(F3, rng, 2)
        assert star(a * b) == star(b) * star(a)
        back = star(star(a))
        assert back == a


def test_twist_conversion_round_trip(rng):
    for _ in range(10):
        a = rand_ore(F3, rng, 2, low=0)
        assert a.to_twist(TAU_INV).to_twist(TAU) == a


def test_planted_diagonals_are_recovered():
    rng = random.Random(5)
    for _ in range(10):
        degrees, M = planted_instance(F3, rng)
        cert = ore_diagonalize(M)
        assert cert.verify()
        assert cert.degrees() == sorted(degrees)
        assert cert.replay_inverse() == M


def test_planted_diagonals_with_t_coefficients():
    rng = random.Random(6)
    for _ in range(4):
        degrees, M = planted_instance(F3, rng, t_deg=1, mult_deg=1)
        cert = ore_diagonalize(M)
        assert cert.verify() and cert.degrees() == sorted(degrees)


def test_singular_matrix_rejected():
    zero = OrePoly(F3, {})
    x = OrePoly.var(F3)
    with pytest.raises(SingularInput):
        ore_diagonalize(OreMatrix([[x, x], [x, x]]))
    with pytest.raises(SingularInput):
        ore_diagonalize(OreMatrix([[zero, zero], [zero, zero]], F3, TAU))


def test_phi_matrix_is_a_ring_map():
    E = example_t_division()
    a, b = parse_polya('t^2+1', F3), parse_polya('t+2', F3)
    assert phi_matrix(E, a * b) == phi_matrix(E, a) * phi_matrix(E, b)
    assert phi_matrix(E, a + b) == phi_matrix(E, a) + phi_matrix(E, b)


def test_relation_matrix_of_carlitz():
    E = carlitz(3)
    M = relation_matrix(E)
    th, t = PerfRatFun.theta(F3), PerfRatFun.t(F3)
    assert M.rows[0][0] == OrePoly(F3, {0: th - t, 1: PerfRatFun.from_int(F3, 1)})


@pytest.mark.parametrize('name,E,rank', [
    ('carlitz', carlitz(3), 1),
    ('drinfeld', drinfeld(3, '1', '1'), 2),
    ('carlitz_q5', carlitz(5), 1),
])
def test_ranks_of_drinfeld_modules(name, E, rank):
    rep = motive_rank(E)
    dual = dual_motive_rank(E)
    assert (rep.rank, dual.rank) == (rank, rank)
    assert rep.f_is_unit() and dual.f_is_unit()
    assert rep.cert.verify() and dual.cert.verify()


def test_infinite_division_module():
    E = example_t_division()
    rep = motive_rank(E)
    assert rep.rank == 1 and rep.rank_direct == 1
    assert dual_motive_rank(E).rank == 1
    assert [str(p.generator) for p in rep.excluded_primes(2)] == ['t']


def test_paper_relation_holds_in_generic_fibre():
    E = example_t_division()
    rep = motive_rank(E)
    t, th = PerfRatFun.t(F3), PerfRatFun.theta(F3)
    zero = OrePoly(F3, {})
    relation = OrePoly(F3, {1: t, 0: -((th ** 3 - t) * (th - t))})
    assert rep.in_relation_module([relation, zero])
    assert not rep.in_relation_module([OrePoly(F3, {1: t}), zero])
    wrong = OrePoly(F3, {1: t, 0: -((th ** 3 - t) * (th + t))})
    assert not rep.in_relation_module([wrong, zero])


def test_prime_ranks_of_infinite_division_module():
    E = example_t_division()
    table = {}
    for text in ('t', 't-1', 't+1', 't^2+1'):
        pr = make_prime(parse_polya(text, F3))
        table[text] = torsion_count(E, pr.generator, pr.degree)[1]
    assert table == {'t': 0, 't-1': 1, 't+1': 1, 't^2+1': 1}


def test_prime_ranks_equal_motive_rank_away_from_f():
    for E in (carlitz(3), drinfeld(3, '1', '1')):
        rep = motive_rank(E)
        for pr in monic_primes(F3, 2):
            assert torsion_count(E, pr.generator, pr.degree)[1] == rep.rank


def test_monic_primes_counts():
    # 3 monic linear and 3 monic irreducible quadratics over F3
    assert len(monic_primes(F3, 1)) == 3
    assert len(monic_primes(F3, 2)) == 6
