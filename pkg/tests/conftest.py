"""Shared random generators for the property suites."""

import random
import sys

import pytest

from mforge.basealg import PerfRatFun, Poly
from mforge.ore import TAU, OreMatrix, OrePoly


def rand_poly(F, rng, max_deg=3):
    return Poly(F, [rng.randrange(F.order) for _ in range(rng.randint(0, max_deg) + 1)])


def rand_perf(F, rng, t_deg=1, th_deg=2, level=0, fraction=True):
    """A random nonzero element of Fq(t, theta**(1/p**level))."""
    def bivariate():
        return {(i, j): rng.randrange(F.order)
                for i in range(t_deg + 1) for j in range(th_deg + 1)}
    while True:
        num = bivariate()
        if any(num.values()):
            break
    den = None
    if fraction and rng.random() < 0.3:
        den = {(0, 0): 1, (0, rng.randint(1, th_deg)): rng.randrange(1, F.order)}
    return PerfRatFun(F, num, den, level)


def rand_ore(F, rng, deg, twist=TAU, level=0, low=0, **coeff_args):
    """A twisted polynomial of exact degree ``deg`` with random coefficients."""
    coeffs = {k: rand_perf(F, rng, level=level, **coeff_args) for k in range(low, deg + 1)
              if k == deg or rng.random() < 0.7}
    return OrePoly(F, coeffs, twist)


@pytest.fixture
def rng():
    return random.Random(20261016)


def elementary(F, x, lower):
    """The unimodular matrix [[1, 0], [x, 1]] (lower) or [[1, x], [0, 1]]."""
    one = OrePoly.from_int(F, 1, x.twist)
    zero = OrePoly(F, {}, x.twist)
    return OreMatrix([[one, zero], [x, one]] if lower else [[one, x], [zero, one]])


def planted_instance(F, rng, t_deg=0, mult_deg=2):
    """(tau-degrees, U * diag * V) for a monomial diagonal and random unimodular U, V."""
    degrees = [rng.randint(0, 3), rng.randint(0, 3)]
    diag = OreMatrix.diagonal([OrePoly(F, {k: rand_perf(F, rng, t_deg=0, th_deg=1, fraction=False)})
                               for k in degrees])

    def mult():
        return rand_ore(F, rng, rng.randint(0, mult_deg), t_deg=t_deg, th_deg=1, fraction=False)
    U = elementary(F, mult(), False) * elementary(F, mult(), True)
    V = elementary(F, mult(), True) * elementary(F, mult(), False)
    return degrees, U * diag * V


def division_instance(F, rng, twist, side):
    """(a, b, quotient, remainder) with a built from the other three."""
    b = rand_ore(F, rng, rng.randint(1, 3), twist)
    quot = rand_ore(F, rng, rng.randint(0, 3), twist)
    if rng.random() < 0.8:
        rem = rand_ore(F, rng, rng.randint(0, b.degree - 1), twist)
    else:
        rem = OrePoly(F, {}, twist)
    a = (quot * b if side == 'left' else b * quot) + rem
    return a, b, quot, rem


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get('test_acceptance')
    if module is None or not module.RESULTS:
        return
    terminalreporter.section('acceptance criteria')
    for line in module.report_lines():
        terminalreporter.write_line(line)
