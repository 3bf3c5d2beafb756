"""Command line front-end.

Every command reads a module manifest, runs one pipeline and writes a JSON
report holding the result, the precision floors and a ``certificates``
array.  With ``--out`` the report goes to that file and a short summary to
standard output; otherwise the report itself is printed.  Exit codes: 0 ok,
2 input error, 3 algorithm failure, 4 precision failure.
"""

import json
import sys
from fractions import Fraction

import click

from .anderson import (agf, build_trivialization, carlitz_period, drinfeld_motive_data,
                       independent_branches, invariance_check, load_manifest,
                       padic_invariant_basis, solve_sf, torsion_from_sf, validate_module)
from .basealg import make_prime, parse_polya
from .errors import InputError, MforgeError, PrecisionError
from .ore import (dual_motive_rank, monic_primes, motive_rank, ore_diagonalize,
                  relation_matrix, torsion_count)
from .tate import to_padic


class RunConfig:
    """Validated command configuration."""

    __slots__ = ('command', 'manifest', 'primes', 't_prec', 'u_prec', 'ramification',
                 'branch', 'n', 'out')

    def __init__(self, command, manifest, primes, t_prec, u_prec, ramification, branch, n, out):
        for name, value in (('t-prec', t_prec), ('u-prec', u_prec),
                            ('ramification', ramification)):
            if value is not None and value <= 0:
                raise InputError(f'--{name} must be positive')
        if n < 0:
            raise InputError('--n must be nonnegative')
        self.command = command
        self.manifest = manifest
        self.primes = tuple(primes)
        self.t_prec = t_prec
        self.u_prec = u_prec
        self.ramification = ramification
        self.branch = branch
        self.n = n
        self.out = out

    def as_dict(self):
        return {'command': self.command, 'manifest': self.manifest, 'primes': list(self.primes),
                't_prec': self.t_prec, 'u_prec': self.u_prec,
                'ramification': self.ramification, 'branch': self.branch, 'n': self.n}


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _cert(name, passed, **fields):
    entry = {'name': name, 'passed': bool(passed)}
    entry.update({k: _jsonable(v) for k, v in fields.items()})
    return entry


def _load(config):
    E = load_manifest(config.manifest)
    validate_module(E)
    return E


def _primes(config, E, default=()):
    texts = config.primes or default
    return [make_prime(parse_polya(p, E.field)) for p in texts]


# commands


def cmd_rank(config):
    """Motive rank, dual rank, localization element and relations."""
    E = _load(config)
    rep = motive_rank(E)
    dual = dual_motive_rank(E)
    result = rep.as_dict()
    result['dual_rank'] = dual.rank
    result['dual_f'] = str(dual.f)
    result['f_is_unit'] = rep.f_is_unit()
    result['excluded_primes_deg_le_2'] = [str(p.generator) for p in rep.excluded_primes(2)]
    certs = [
        _cert('diagonalization', rep.cert.verify()),
        _cert('dual_diagonalization', dual.cert.verify()),
        _cert('rank_cross_check', rep.rank == rep.rank_direct,
              rank=rep.rank, direct=rep.rank_direct),
    ]
    summary = f'rank {rep.rank}, dual rank {dual.rank}, f = {rep.f}'
    return result, certs, summary


def cmd_prank(config):
    """Prime ranks by kernel counting, compared with the motive rank."""
    E = _load(config)
    primes = _primes(config, E) or monic_primes(E.field, 1)
    rep = motive_rank(E)
    rows, certs = [], []
    for prime in primes:
        N, p_rank = torsion_count(E, prime.generator, prime.degree)
        excluded = rep.divides_prime(prime)
        rows.append({'prime': str(prime.generator), 'kernel_exponent': N, 'p_rank': p_rank,
                     'divides_f': excluded})
        if not excluded:
            certs.append(_cert(f'rank_equality[{prime.generator}]', p_rank == rep.rank,
                               p_rank=p_rank, motive_rank=rep.rank))
    summary = ', '.join(f"{r['prime']}: {r['p_rank']}" for r in rows)
    return {'motive_rank': rep.rank, 'f': str(rep.f), 'primes': rows}, certs, summary


def cmd_diagonalize(config):
    """Diagonalize the relation matrix with a verified certificate."""
    E = _load(config)
    M = relation_matrix(E)
    cert = ore_diagonalize(M)
    result = {'matrix': str(M), 'diagonal': [str(e) for e in cert.diag.diagonal_entries()],
              'degrees': cert.degrees(), 'operations': len(cert.ops),
              'B': str(cert.B), 'C': str(cert.C)}
    certs = [_cert('B*M*C == diag', cert.verify()),
             _cert('replay_inverse', cert.replay_inverse() == M)]
    return result, certs, f'diagonal degrees {cert.degrees()}'


def _special_function(E, config, branch=None):
    branch = config.branch if branch is None else branch
    return solve_sf(E, N_t=config.t_prec, branch=branch, prec=config.u_prec,
                    m=config.ramification or 1)


def _sf_cert(name, sf):
    return _cert(name, sf.certified, residual_log=sf.residual, floor_log=sf.floor)


def cmd_special_functions(config):
    """Solve for a special function (and the Carlitz period when applicable)."""
    E = _load(config)
    if E.d != 1:
        raise InputError('special functions are solved for modules of dimension 1')
    sf = _special_function(E, config)
    result = {'special_function': sf.as_dict(),
              'coefficients': [[x.dump() for x in e] for e in sf.point.coeffs]}
    certs = [_sf_cert('phi_t(h) - t*h', sf)]
    if E.weight == 1 and E.theta[1][0][0].is_one() and str(E.theta[0][0][0]) == 'th':
        pi = carlitz_period(E.q, config.u_prec, config.ramification)
        w = agf(E, [pi], config.t_prec)
        result['carlitz_period'] = pi.dump()
        result['agf'] = w.as_dict()
        certs.append(_sf_cert('agf: phi_t(h) - t*h', w))
    summary = f"t-precision {sf.point.t_prec}, residual certified: {sf.certified}"
    return result, certs, summary


def cmd_torsion(config):
    """Torsion values from derivatives of a special function at primes."""
    E = _load(config)
    if E.d != 1:
        raise InputError('torsion extraction from solved special functions needs dimension 1')
    primes = _primes(config, E, ('t-1',))
    sf = _special_function(E, config)
    rows, certs = [], [_sf_cert('phi_t(h) - t*h', sf)]
    for prime in primes:
        for n in range(config.n + 1):
            tv = torsion_from_sf(E, sf, prime, n)
            row = tv.as_dict()
            row['prime'] = str(prime.generator)
            rows.append(row)
            certs.append(_cert(f'kill[{prime.generator}, n={n}]', tv.killed,
                               norm_log=tv.kill_log, floor_log=tv.kill_floor))
            certs.append(_cert(f'nonzero[{prime.generator}, n={n}]', tv.nonzero,
                               norm_log=tv.nonzero_log, floor_log=tv.nonzero_floor,
                               margin=tv.nonzero_margin))
    summary = f'{len(rows)} torsion rows'
    return {'special_function': sf.as_dict(), 'rows': rows}, certs, summary


def cmd_trivialize(config):
    """Rigid analytic trivialization and invariant basis at a prime."""
    E = _load(config)
    if E.d != 1:
        raise InputError('trivializations are assembled for modules of dimension 1')
    primes = _primes(config, E, ('t-1',))
    basis, Theta = drinfeld_motive_data(E)
    r = len(basis)
    branches = independent_branches(E, r)
    sfs = [_special_function(E, config, b) for b in branches]
    triv = build_trivialization(E, sfs, basis, Theta, primes)
    result = {'trivialization': triv.as_dict(), 'branches': branches,
              'Upsilon': [[u.dump() for u in row] for row in triv.Upsilon]}
    certs = [_sf_cert(f'special function branch {b}', sf) for b, sf in zip(branches, sfs)]
    certs.append(_cert('tau(Psi) - Theta*Psi', triv.certified,
                       residual_log=triv.residual, floor_log=triv.floor))
    certs += [_cert(f'unit_at[{p.generator}]', ok) for p, ok in triv.units]
    prime = primes[0]
    if r == 1 and prime.degree == 1:
        ib = padic_invariant_basis(E, prime, config.n, Theta, prec=config.u_prec)
        ok, dev, floor = invariance_check(ib, [[to_padic(triv.Psi[0][0], prime, config.n)]])
        result['invariant_basis'] = ib.as_dict()
        certs.append(_cert(f'Theta_N == 1 mod prime^{config.n + 1}', ib.certified,
                           residual_log=ib.residual, floor_log=ib.floor))
        certs.append(_cert('U*Psi is tau-invariant', ok, residual_log=dev, floor_log=floor))
    summary = f'rank {r}, certificate passed: {triv.certified}'
    return result, certs, summary


COMMANDS = {
    'rank': cmd_rank,
    'prank': cmd_prank,
    'diagonalize': cmd_diagonalize,
    'special-functions': cmd_special_functions,
    'torsion': cmd_torsion,
    'trivialize': cmd_trivialize,
}


def run(config):
    """Run a command; returns the report dictionary."""
    result, certs, summary = COMMANDS[config.command](config)
    floors = [c.get('floor_log') for c in certs if c.get('floor_log') is not None]
    report = {
        'command': config.command,
        'config': config.as_dict(),
        'result': _jsonable(result),
        'certificates': certs,
        'precision_floor_log': max(floors, key=Fraction) if floors else None,
        'all_certificates_passed': all(c['passed'] for c in certs),
        'summary': summary,
    }
    return report


def render(report):
    return json.dumps(report, sort_keys=True, indent=2) + '\n'


def _options(fn):
    fn = click.option('--out', type=click.Path(dir_okay=False), default=None,
                      help='Write the JSON report here.')(fn)
    fn = click.option('--branch', type=int, default=0, show_default=True)(fn)
    fn = click.option('--ramification', type=int, default=None,
                      help='Ramification index m of the series model.')(fn)
    fn = click.option('--u-prec', type=int, default=60, show_default=True,
                      help='Absolute precision in powers of theta**(-1/m).')(fn)
    fn = click.option('--t-prec', type=int, default=None,
                      help='Stored t-coefficients '
                       '(default: until the tail is below the floor).')(fn)
    fn = click.option('--n', 'n', type=int, default=0, show_default=True,
                      help='Torsion order / lifting order.')(fn)
    fn = click.option('--prime', 'primes', multiple=True,
                      help='Monic irreducible polynomial in t; repeatable.')(fn)
    fn = click.option('--manifest', required=True, type=click.Path(exists=True, dir_okay=False))(fn)
    return fn


@click.group()
def main():
    """Exact computations with Anderson modules over Fq[t]."""


def _make_command(name):
    @_options
    def command(manifest, primes, n, t_prec, u_prec, ramification, branch, out):
        try:
            config = RunConfig(name, manifest, primes, t_prec, u_prec, ramification, branch, n, out)
            report = run(config)
        except MforgeError as exc:
            hint = ''
            if isinstance(exc, PrecisionError):
                hint = f' (try --u-prec {2 * u_prec} or a larger --t-prec)'
            click.echo(f'error: {exc}{hint}', err=True)
            sys.exit(exc.exit_code)
        except NotImplementedError as exc:
            click.echo(f'error: {exc}', err=True)
            sys.exit(3)
        text = render(report)
        if out:
            with open(out, 'w', encoding='utf-8') as fh:
                fh.write(text)
            status = 'ok' if report['all_certificates_passed'] else 'CERTIFICATE FAILURE'
            click.echo(f'{name}: {report["summary"]} [{status}]')
        else:
            click.echo(text, nl=False)
        if not report['all_certificates_passed']:
            sys.exit(3)
    command.__doc__ = COMMANDS[name].__doc__ or f'Run the {name} pipeline.'
    return command


for _name in COMMANDS:
    main.command(_name)(_make_command(_name))


if __name__ == '__main__':
    main()
