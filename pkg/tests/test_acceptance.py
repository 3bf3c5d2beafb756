"""Acceptance suite: one check per criterion, each printing a PASS or FAIL line.

Run with ``pytest tests/test_acceptance.py`` (the lines appear in the
terminal summary) or directly with ``python3 tests/test_acceptance.py``.
"""

import math
import random
import sys
import time

import pytest

from mforge.anderson import (agf, build_trivialization, carlitz, carlitz_period, drinfeld,
                             drinfeld_motive_data, exp_coeffs, exp_eval, example_t_division,
                             invariance_check, padic_invariant_basis, phi_act, torsion_from_sf,
                             torsion_verify)
from mforge.anderson.special import log_q_ten
from mforge.basealg import PerfRatFun, Poly, base_field, make_prime, parse_polya
from mforge.cinfty import CInf, solve_artin_schreier
from mforge.hyperderiv import from_taylor, hd_poly, hd_wrt, leading_chain_term, taylor
from mforge.ore import (TAU, TAU_INV, OrePoly, dual_motive_rank, motive_rank, ore_diagonalize,
                        ore_divmod, torsion_count)
from mforge.tate import is_unit_at, padic_of_poly, to_padic

from conftest import division_instance, planted_instance, rand_poly

Q = 3
F3 = base_field(Q)
U_PREC = 60
M_CARLITZ = Q - 1
RESULTS = {}


def prime(text):
    return make_prime(parse_polya(text, F3))


def status_line(number, ok, detail):
    return f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"


def report_lines():
    return [status_line(n, ok, detail) for n, (ok, detail) in sorted(RESULTS.items())]


# 1: the infinite t-division module


def check_infinite_division():
    start = time.perf_counter()
    E = example_t_division()
    rep = motive_rank(E)
    dual = dual_motive_rank(E)
    excluded = [str(p.generator) for p in rep.excluded_primes(2)]
    t, th = PerfRatFun.t(F3), PerfRatFun.theta(F3)
    zero = OrePoly(F3, {})
    relation = OrePoly(F3, {1: t, 0: -((th ** Q - t) * (th - t))})
    holds = rep.in_relation_module([relation, zero])
    elapsed = time.perf_counter() - start
    ok = (rep.rank == 1 and dual.rank == 1 and excluded == ['t'] and holds
          and rep.cert.verify() and dual.cert.verify() and elapsed < 5)
    return ok, (f'rank {rep.rank}, dual rank {dual.rank}, primes dividing f: {excluded}, '
                f't*T*k1 = (th^3-t)(th-t)*k1 holds: {holds}, {elapsed:.2f}s')


# 2: rank tables


def check_rank_tables():
    rows = []
    ok = True
    modules = (('carlitz', carlitz(Q), 1), ('drinfeld g=1 D=1', drinfeld(Q, '1', '1'), 2))
    for name, E, expected in modules:
        rep, dual = motive_rank(E), dual_motive_rank(E)
        ok &= (rep.rank, dual.rank) == (expected, expected)
        ok &= rep.f_is_unit() and dual.f_is_unit()
        rows.append(f'{name} ({rep.rank},{dual.rank}) f unit {rep.f_is_unit()}')
    E = example_t_division()
    rep = motive_rank(E)
    table = {}
    for text in ('t', 't-1', 't+1', 't^2+1'):
        pr = prime(text)
        p_rank = torsion_count(E, pr.generator, pr.degree)[1]
        table[text] = p_rank
        if not rep.divides_prime(pr):
            ok &= p_rank == rep.rank
    ok &= table == {'t': 0, 't-1': 1, 't+1': 1, 't^2+1': 1}
    return ok, '; '.join(rows) + f'; prime ranks {table}'


# 3: division and diagonalization


def check_division_and_diagonalization():
    start = time.perf_counter()
    rng = random.Random(3)
    counts = {}
    for twist, tname in ((TAU, 'tau'), (TAU_INV, 'tau^-1')):
        for side in ('left', 'right'):
            good = 0
            for _ in range(200):
                a, b, quot, rem = division_instance(F3, rng, twist, side)
                q, r = ore_divmod(a, b, side)
                good += q == quot and r == rem
            counts[f'{tname}/{side}'] = good
    recovered = certified = 0
    for _ in range(20):
        degrees, M = planted_instance(F3, rng)
        cert = ore_diagonalize(M)
        certified += cert.verify()
        recovered += cert.degrees() == sorted(degrees)
    elapsed = time.perf_counter() - start
    ok = all(v == 200 for v in counts.values()) and recovered == certified == 20 and elapsed < 30
    return ok, (f'divisions {counts}, certificates {certified}/20, '
                f'degree multisets {recovered}/20, {elapsed:.1f}s')


# 4: Carlitz torsion


def carlitz_setup(u_prec):
    E = carlitz(Q)
    pi = carlitz_period(Q, u_prec, M_CARLITZ)
    return E, pi, agf(E, [pi])


def torsion_values(u_prec=U_PREC):
    E, pi, w = carlitz_setup(u_prec)
    ten = log_q_ten(Q)
    values, checks = {}, []
    for text in ('t-1', 't'):
        pr = prime(text)
        for n in range(4):
            tv = torsion_from_sf(E, w, pr, n)
            v = tv.raw
            killed, _ = torsion_verify(E, v, pr.generator ** (n + 1))
            big = phi_act(E, pr.generator ** n, v)
            floor = max(c.floor_log() for row in big.comps for c in row)
            norm = max((c.norm_log() for row in big.comps for c in row if c.terms), default=None)
            nonzero = norm is not None and norm >= floor + ten
            checks.append(killed and tv.kill_floor <= -20 and nonzero)
            values[(text, n)] = v
            if text == 't':
                e = exp_eval(E, [pi.mul_theta(-(n + 1))])[0]
                checks.append(v.comps[0][0].agrees(e) and e.agrees(w.point.coeffs[n][0]))
    return all(checks), len(checks), values


def check_carlitz_torsion():
    start = time.perf_counter()
    ok, count, _ = torsion_values()
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 60
    return ok, (f'{count} checks at t-1 and t for n = 0..3 '
                f'(floor <= q^-20, 10x margin), {elapsed:.2f}s')


# 5: chain-rule congruence


def chain_rule_values(u_prec=U_PREC):
    E, _, w = carlitz_setup(u_prec)
    pr = prime('t^2+1')
    t = Poly.t(F3)
    values, checks = {}, []
    for n in range(3):
        hp = to_padic(w.point, pr, n)
        diff = hd_wrt(t, n, hp).coeffs[0] - leading_chain_term(t, n, hp)
        image = phi_act(E, pr.generator ** n, diff)
        floor = max(c.floor_log() for row in image.comps for c in row)
        checks.append(image.is_zero_to_precision() and floor <= -20)
        values[n] = diff
    return all(checks), values


def check_chain_rule():
    ok, values = chain_rule_values()
    nonzero = [n for n, d in values.items() if not d.is_zero_to_precision()]
    return ok, f'prime t^2+1, s = t, n = 0..2 killed to floor; nonzero differences at n = {nonzero}'


# 6: Taylor machinery


def check_taylor():
    rng = random.Random(6)
    failures = 0
    t = Poly.t(F3)
    for _ in range(50):
        f, g = rand_poly(F3, rng, 6), rand_poly(F3, rng, 6)
        n = rng.randint(0, 6)
        leibniz = Poly(F3, [])
        for i in range(n + 1):
            leibniz = leibniz + hd_poly(i, f) * hd_poly(n - i, g)
        failures += hd_poly(n, f * g) != leibniz
        i, j = rng.randint(0, 4), rng.randint(0, 4)
        c = F3.from_int(math.comb(i + j, i) % Q)
        failures += hd_poly(i, hd_poly(j, f)) != hd_poly(i + j, f).scale(c)
        pr = prime(rng.choice(['t-1', 't^2+1', 't^2+t+2']))
        k = rng.randint(0, 3)
        h = pr.generator ** k * g
        failures += any(not (pr.generator ** (k - m)).divides(hd_poly(m, h)) for m in range(k + 1))
        P = padic_of_poly(f, pr, 4, Q)
        failures += from_taylor(taylor(P), pr).dump() != P.dump()
        failures += not hd_wrt(t, 2, P).agrees(padic_of_poly(hd_poly(2, f), pr, 2, Q))
    return failures == 0, f'250 randomized identities, {failures} failures'


# 7: exponential and period


def exponential_values(u_prec=U_PREC):
    E, pi, _ = carlitz_setup(u_prec)
    th = PerfRatFun.theta(F3)
    q1 = exp_coeffs(E, 1)[1][0][0] == (th ** Q - th).inverse()
    val = exp_eval(E, [pi])[0]
    in_kernel = val.is_zero_to_precision() and val.floor_log() <= -20
    e = exp_eval(E, [pi.mul_theta(-1)])
    killed, kill_margin = torsion_verify(E, e, Poly.t(F3))
    _, margin = torsion_verify(E, e, Poly(F3, [1]))
    nonzero = margin >= log_q_ten(Q)
    ok = q1 and in_kernel and killed and kill_margin >= 20 and nonzero
    return ok, {'pi': pi, 'e(pi/theta)': e[0], 'e(pi)': val}, margin


def check_exponential():
    ok, values, margin = exponential_values()
    return ok, (f"Q1 = 1/(th^3-th) exact, |e(pi)| <= q^{values['e(pi)'].floor_log()}, "
                f'e(pi/th) killed by t, nonzero margin q^{margin}')


# 8: trivialization


def trivialization_values(u_prec=U_PREC):
    E, _, w = carlitz_setup(u_prec)
    pr = prime('t-1')
    basis, Theta = drinfeld_motive_data(E)
    triv = build_trivialization(E, [w], basis, Theta, [pr])
    unit = is_unit_at(triv.Psi[0][0], pr)
    scaled = build_trivialization(E, [w.scale(2)], basis, Theta)
    # 2 is its own inverse in F3, so Psi and Upsilon scale alike
    rescale = all(a[0] == b[0].scale(2)
                  for new, old in ((scaled.Psi, triv.Psi), (scaled.Upsilon, triv.Upsilon))
                  for a, b in zip(new[0][0].coeffs, old[0][0].coeffs))
    ib = padic_invariant_basis(E, pr, 2, Theta, prec=u_prec)
    consistent, _, _ = invariance_check(ib, [[to_padic(triv.Psi[0][0], pr, 2)]])
    ok = triv.certified and unit and rescale and ib.certified and consistent
    detail = (f'residual q^{triv.residual} <= floor q^{triv.floor}, unit at t-1 {unit}, '
              f'rescaling exact {rescale}, Theta_2 = 1 mod p^3 to q^{ib.floor}')
    return ok, detail, {'Psi': triv.Psi[0][0], 'U': ib.U[0][0], 'Theta_N': ib.Theta_N[0][0]}


def check_trivialization():
    ok, detail, _ = trivialization_values()
    return ok, detail


# 9: Artin-Schreier


def check_artin_schreier():
    rng = random.Random(9)
    m = M_CARLITZ
    good = 0
    for _ in range(50):
        terms = {e: rng.randrange(1, Q) for e in rng.sample(range(1, 50), rng.randint(1, 6))}
        y = CInf(F3, Q, m, terms, U_PREC)
        x = solve_artin_schreier(y)
        residual = x - x.frobenius(1) - y
        shifts = all((x + c) - (x + c).frobenius(1) - y == residual for c in range(Q))
        good += residual.is_zero_to_precision() and x.norm_log() == y.norm_log() and shifts
    return good == 50, f'{good}/50 random y with |y| < 1'


# 10: precision soundness


def check_precision_soundness():
    doubled = 2 * U_PREC
    disagreements = []
    _, _, low = torsion_values(U_PREC)
    ok4, _, high = torsion_values(doubled)
    disagreements += [k for k in low if not low[k].agrees(high[k])]
    _, low = chain_rule_values(U_PREC)
    ok5, high = chain_rule_values(doubled)
    disagreements += [('chain', n) for n in low if not low[n].agrees(high[n])]
    _, low, _ = exponential_values(U_PREC)
    ok7, high, _ = exponential_values(doubled)
    disagreements += [k for k in low if not low[k].agrees(high[k])]
    _, _, low = trivialization_values(U_PREC)
    ok8, _, high = trivialization_values(doubled)
    disagreements += [k for k in low if not low[k].agrees(high[k])]
    ok = ok4 and ok5 and ok7 and ok8 and not disagreements
    return ok, (f'criteria 4, 5, 7, 8 at u_prec {doubled} pass and agree: '
                f'disagreements {disagreements}')


CHECKS = {
    1: check_infinite_division,
    2: check_rank_tables,
    3: check_division_and_diagonalization,
    4: check_carlitz_torsion,
    5: check_chain_rule,
    6: check_taylor,
    7: check_exponential,
    8: check_trivialization,
    9: check_artin_schreier,
    10: check_precision_soundness,
}


@pytest.mark.parametrize('number', sorted(CHECKS))
def test_criterion(number):
    ok, detail = CHECKS[number]()
    RESULTS[number] = (ok, detail)
    print(status_line(number, ok, detail))
    assert ok, detail


if __name__ == '__main__':
    for number, check in sorted(CHECKS.items()):
        ok, detail = check()
        RESULTS[number] = (ok, detail)
        print(status_line(number, ok, detail), flush=True)
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
