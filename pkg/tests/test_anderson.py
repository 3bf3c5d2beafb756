"""Anderson modules: actions, exponential, special functions, torsion, trivializations."""

import json
from fractions import Fraction

import pytest

from mforge.anderson import (AndersonModule, ExpSeries, agf, build_trivialization, carlitz,
                             carlitz_period, drinfeld, drinfeld_motive_data, dumps,
                             example_t_division, exp_eval, independent_branches,
                             invariance_check, kernel_seeds, load_manifest, loads,
                             padic_invariant_basis, phi_act, phi_coefficients, solve_sf,
                             torsion_from_sf, torsion_verify, validate_module)
from mforge.basealg import PerfRatFun, base_field, make_prime, parse_polya
from mforge.cinfty import CInf
from mforge.errors import (InputError, NotAndersonModule, NotFreeAtPrime, ParseError,
                           PrecisionExhausted)
from mforge.tate import to_padic

F3 = base_field(3)


def prime(text, F=F3):
    return make_prime(parse_polya(text, F))


@pytest.fixture(scope='module')
def carlitz_data():
    E = carlitz(3)
    pi = carlitz_period(3, 60, 2)
    return E, pi, agf(E, [pi])


# modules and manifests


def test_examples_validate():
    for E in (carlitz(3), carlitz(5), drinfeld(3, '1', '1'), example_t_division()):
        validate_module(E)


def test_invalid_modules_rejected():
    with pytest.raises(NotAndersonModule):
        validate_module(loads('{"q": 3, "d": 1, "phi_t": [[["th"]], [["0"]]]}'))
    with pytest.raises(NotAndersonModule):
        validate_module(loads('{"q": 3, "d": 1, "phi_t": [[["th"]]]}'))
    with pytest.raises(NotAndersonModule):
        validate_module(loads('{"q": 3, "d": 1, "phi_t": [[["th+1"]], [["1"]]]}'))


@pytest.mark.parametrize('text', [
    '{"q": 3, "d": 1}',
    '{"q": 6, "d": 1, "phi_t": [[["th"]], [["1"]]]}',
    '{"q": 3, "d": 2, "phi_t": [[["th"]], [["1"]]]}',
    'not json',
])
def test_malformed_manifests(text):
    with pytest.raises(InputError):
        loads(text)


def test_bad_entry_is_a_parse_error():
    with pytest.raises(ParseError):
        loads('{"q": 3, "d": 1, "phi_t": [[["th +"]], [["1"]]]}')


def test_manifest_round_trip():
    text = '{"q": 3, "d": 2, "phi_t": [[["th", "0"], ["th", "th"]], [["1", "1"], ["0", "0"]]]}'
    E = loads(text)
    assert E == example_t_division()
    assert dumps(E) == text
    for E in (carlitz(3), drinfeld(3, '1', '1'), example_t_division(), carlitz(9)):
        assert loads(dumps(E)) == E
        assert dumps(loads(dumps(E))) == dumps(E)


def test_shipped_manifests_are_canonical(tmp_path):
    import pathlib
    root = pathlib.Path(__file__).resolve().parent.parent / 'manifests'
    for path in sorted(root.glob('*.json')):
        text = path.read_text().strip()
        assert dumps(load_manifest(path)) == text
    out = tmp_path / 'm.json'
    out.write_text(dumps(example_t_division()))
    assert load_manifest(out) == example_t_division()
    assert json.loads(out.read_text())['d'] == 2


def test_module_accessors():
    E = example_t_division()
    assert isinstance(E, AndersonModule)
    assert E.d == 2 and E.weight == 1
    th = PerfRatFun.theta(F3)
    assert E.dphi()[0][0] == th


# phi-actions


def rand_vector(rng, d, m=2, prec=40):
    return [CInf(F3, 3, m, {e: rng.randrange(1, 3) for e in rng.sample(range(-6, 20), 3)}, prec)
            for _ in range(d)]


@pytest.mark.parametrize('E', [carlitz(3), example_t_division()], ids=['carlitz', 't_division'])
def test_phi_is_a_ring_action(E, rng):
    a, b = parse_polya('t^2+1', F3), parse_polya('t+2', F3)
    for _ in range(5):
        x = rand_vector(rng, E.d)
        ab = phi_act(E, a * b, x)
        a_b = phi_act(E, a, phi_act(E, b, x))
        assert all(u.agrees(v) for u, v in zip(ab, a_b))
        s = phi_act(E, a + b, x)
        s2 = [u + v for u, v in zip(phi_act(E, a, x), phi_act(E, b, x))]
        assert all(u.agrees(v) for u, v in zip(s, s2))


def test_phi_coefficients_of_constants():
    E = carlitz(3)
    coeffs = phi_coefficients(E, 2)
    assert len(coeffs) == 1
    assert coeffs[0][0][0] == PerfRatFun.from_int(F3, 2)


# exponential and period


def test_first_exponential_coefficient():
    E = carlitz(3)
    series = ExpSeries(E, 4)
    th = PerfRatFun.theta(F3)
    assert series[1][0][0] == (th ** 3 - th).inverse()
    for k in range(1, 5):
        assert all(not c for row in series.residual(k) for c in row)


def test_exponential_of_a_t_division_module():
    E = example_t_division()
    series = ExpSeries(E, 3)
    for k in range(1, 4):
        assert all(not c for row in series.residual(k) for c in row)


def test_period_is_in_the_kernel(carlitz_data):
    E, pi, _ = carlitz_data
    assert pi.norm_log() == Fraction(3, 2)
    val = exp_eval(E, [pi])[0]
    assert val.is_zero_to_precision()
    assert val.floor_log() <= -20


def test_period_over_theta_is_t_torsion(carlitz_data):
    E, pi, _ = carlitz_data
    v = exp_eval(E, [pi.mul_theta(-1)])
    killed, margin = torsion_verify(E, v, parse_polya('t', F3))
    assert killed and margin >= 20
    killed, margin = torsion_verify(E, v, parse_polya('1', F3))
    assert not killed and margin > 1


# special functions


def test_agf_is_a_special_function(carlitz_data):
    E, pi, w = carlitz_data
    assert w.certified
    assert w.point.tail_log is not None and w.point.tail_log <= w.floor
    for n in range(4):
        e = exp_eval(E, [pi.mul_theta(-(n + 1))])[0]
        assert e.agrees(w.point.coeffs[n][0])


def test_solved_branches_are_scalings(carlitz_data):
    E, _, w = carlitz_data
    sf0 = solve_sf(E, prec=60, m=2, branch=0)
    sf1 = solve_sf(E, prec=60, m=2, branch=1)
    assert sf0.certified and sf1.certified
    assert sf0.point.agrees(w.scale(2).point)
    assert sf1.point.agrees(sf0.scale(2).point)


def test_special_function_commutes_actions(carlitz_data):
    E, _, w = carlitz_data
    a = parse_polya('t^2+2', F3)
    lhs = phi_act(E, a, w.point)
    rhs = w.point.scalar_mul(a)
    n = min(lhs.t_prec, rhs.t_prec) - 3
    for i in range(n):
        assert lhs.coeffs[i][0].agrees(rhs.coeffs[i][0])


def test_kernel_seeds_of_rank_two_module():
    E = drinfeld(3, '1', '1')
    seeds = kernel_seeds(E)
    assert len(seeds) == 8
    assert len(independent_branches(E, 2)) == 2


def test_rank_two_special_function():
    E = drinfeld(3, '1', '1')
    sf = solve_sf(E, prec=80)
    assert sf.certified
    assert sf.point.coeffs[0][0].m % 8 == 0


# torsion


@pytest.mark.parametrize('text', ['t-1', 't', 't^2+1'])
def test_torsion_values(carlitz_data, text):
    E, _, w = carlitz_data
    pr = prime(text)
    for n in range(3):
        tv = torsion_from_sf(E, w, pr, n)
        assert tv.killed and tv.nonzero
        assert tv.kill_floor <= -20


def test_tate_module_chain(carlitz_data):
    E, _, w = carlitz_data
    for text in ('t-1', 't^2+1'):
        pr = prime(text)
        vs = [torsion_from_sf(E, w, pr, n) for n in range(4)]
        for n in range(3):
            image = phi_act(E, pr.generator, vs[n + 1].traced)
            assert all(a.agrees(b) for a, b in zip(image, vs[n].traced))


def test_torsion_beyond_stored_range(carlitz_data):
    E, _, w = carlitz_data
    with pytest.raises(PrecisionExhausted):
        torsion_from_sf(E, w, prime('t-1'), w.point.t_prec + 1)


# trivializations


def test_carlitz_trivialization(carlitz_data):
    E, _, w = carlitz_data
    basis, Theta = drinfeld_motive_data(E)
    triv = build_trivialization(E, [w], basis, Theta, [prime('t-1'), prime('t^2+1')])
    assert triv.certified
    assert all(ok for _, ok in triv.units)
    scaled = build_trivialization(E, [w.scale(2)], basis, Theta)
    for a, b in zip(scaled.Psi[0][0].coeffs, triv.Psi[0][0].coeffs):
        assert a[0] == b[0].scale(2)
    for a, b in zip(scaled.Upsilon[0][0].coeffs, triv.Upsilon[0][0].coeffs):
        assert a[0] == b[0].scale(2)


def test_rank_two_trivialization():
    E = drinfeld(3, '1', '1')
    basis, Theta = drinfeld_motive_data(E)
    sfs = [solve_sf(E, prec=160, branch=b) for b in independent_branches(E, 2)]
    triv = build_trivialization(E, sfs, basis, Theta, [prime('t-1')])
    assert triv.certified and triv.units[0][1]


def test_invariant_basis(carlitz_data):
    E, _, w = carlitz_data
    pr = prime('t-1')
    basis, Theta = drinfeld_motive_data(E)
    ib = padic_invariant_basis(E, pr, 2, Theta)
    assert ib.certified
    triv = build_trivialization(E, [w], basis, Theta)
    ok, dev, floor = invariance_check(ib, [[to_padic(triv.Psi[0][0], pr, 2)]])
    assert ok and dev <= floor


def test_invariant_basis_needs_a_free_prime():
    E = example_t_division()
    _, Theta = drinfeld_motive_data(carlitz(3))
    with pytest.raises(NotFreeAtPrime):
        padic_invariant_basis(E, prime('t'), 1, Theta)


def test_invariant_basis_lang_step_scope():
    E = carlitz(3)
    _, Theta = drinfeld_motive_data(E)
    with pytest.raises(NotImplementedError):
        padic_invariant_basis(E, prime('t^2+1'), 1, Theta)
