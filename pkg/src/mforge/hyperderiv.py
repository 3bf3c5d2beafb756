"""Hyperderivatives in t and in a prime, Taylor expansion at a prime, and the chain rule.

On the completion at a prime w, the ring is F_w[[w]] and the divided-power
derivatives with respect to w act by ``w**k f -> C(k, n) w**(k-n) f`` and
vanish on residue-field constants.  Derivatives with respect to another
separating element s are reached through the chain rule, with the
derivatives of w in s obtained by inverting the expansion of s at w.
"""

from .basealg import Poly, binom_mod, residue_field
from .errors import NotLocalUnit, NotSeparating
from .tate import PadicPoint, poly_expansion, ps_inv, ps_mul


def hd_poly(n, f):
    """n-th hyperderivative in t of a polynomial in A."""
    return f.hyperderivative(n)


def hd_rational(n, f, g):
    """n-th hyperderivative in t of f/g, returned as (numerator, g**(n+1)).

    The derivatives u_k of 1/g come from the triangular system
    0 = sum_{i+j=k} D_i(g) u_j, written with numerators over g**(k+1).
    """
    gd = [g.hyperderivative(i) for i in range(n + 1)]
    P = [Poly(g.field, [1])]
    for k in range(1, n + 1):
        acc = Poly(g.field, [])
        for i in range(1, k + 1):
            acc = acc + gd[i] * P[k - i] * g ** (i - 1)
        P.append(-acc)
    num = Poly(g.field, [])
    for j in range(n + 1):
        num = num + f.hyperderivative(n - j) * P[j] * g ** (n - j)
    return num, g ** (n + 1)


def hd_local(n, f, g, prime, N):
    """Expansion at the prime, to order N, of the n-th t-derivative of f/g."""
    rf = residue_field(prime)
    if not rf.reduce(g):
        raise NotLocalUnit(f'{g} is not a unit at {prime}')
    num, den = hd_rational(n, f, g)
    F = rf.field
    series = ps_mul(F, poly_expansion(rf, num, N), ps_inv(F, poly_expansion(rf, den, N), N), N)
    return PadicPoint.from_series(rf, series, f.field.order)


def hd_padic(n, h):
    """n-th derivative with respect to the prime, on an expansion at that prime."""
    N = h.p_prec
    if n > N:
        raise ValueError('derivative order exceeds the expansion order')
    p = h.rf.prime.field.p
    out = []
    for k in range(N - n + 1):
        c = binom_mod(k + n, n, p)
        out.append(h.coeffs[k + n] if c == 1 else h.coeffs[k + n].scale_residue(c))
    return PadicPoint(h.rf, out)


def taylor(h, N=None):
    """Values at the prime of the successive derivatives in the prime."""
    N = h.p_prec if N is None else N
    if N > h.p_prec:
        raise ValueError('requested more terms than the expansion holds')
    return list(h.coeffs[:N + 1])


def from_taylor(coeffs, prime=None):
    """Reassemble an expansion from its Taylor coefficients."""
    coeffs = list(coeffs)
    rf = coeffs[0].rf
    if prime is not None and prime != rf.prime:
        raise ValueError('coefficients belong to a different prime')
    return PadicPoint(rf, coeffs)


def _compose(F, outer, inner, N):
    """outer(inner) for an inner series without constant term, to order N."""
    out = [0] * (N + 1)
    power = [1] + [0] * N
    for k, c in enumerate(outer[:N + 1]):
        if k:
            power = ps_mul(F, power, inner, N)
        if c:
            out = [F.add(a, F.mul(c, b)) for a, b in zip(out, power)]
    return out


def invert_series(F, x, N):
    """Compositional inverse W of a series x with x[0] = 0 and x[1] a unit: x(W(X)) = X."""
    if len(x) < 2 or not x[1]:
        raise ZeroDivisionError('linear coefficient is not a unit')
    inv1 = F.inv(x[1])
    w = [0] * (N + 1)
    if N >= 1:
        w[1] = inv1
    for k in range(2, N + 1):
        comp = _compose(F, x, w, k)
        w[k] = F.neg(F.mul(comp[k], inv1))
    return w


def prime_derivatives(s, prime, n, N):
    """Expansions at the prime of the s-derivatives of the prime, orders 1..n, each to w**N.

    Returns a list indexed by j (entry 0 unused).
    """
    rf = residue_field(prime)
    F = rf.field
    M = N + n
    S = poly_expansion(rf, s, M)
    if M < 1 or not S[1]:
        raise NotSeparating(f'{s} is not separating at {prime}')
    X = [0] + S[1:]
    W = invert_series(F, X, M)
    p = F.p
    out = [None]
    for j in range(1, n + 1):
        # D_s^(j)(w) = sum_l w_l C(l, j) X**(l-j), then substitute X = s - s(zeta)
        Dj = [0] * (M + 1)
        for l in range(j, M + 1):
            c = binom_mod(l, j, p)
            if c and W[l]:
                Dj[l - j] = F.mul(F.from_int(c), W[l])
        out.append(_compose(F, Dj, X, N))
    return out


def hd_wrt(s, n, h):
    """n-th derivative with respect to s of an expansion at a prime, by the chain rule.

    D_s^(n) h = sum_k D_w^(k)(h) * sum_{j_1+...+j_k=n} prod D_s^(j_i)(w).
    """
    prime = h.rf.prime
    if n == 0:
        return h
    N = h.p_prec - n
    if N < 0:
        raise ValueError('derivative order exceeds the expansion order')
    if s == prime.generator:
        return hd_padic(n, h)
    F = h.rf.field
    D = prime_derivatives(s, prime, n, N)
    # G[k] = coefficient series of Y**n in (sum_j D_j Y**j)**k
    G = _chain_coefficients(F, D, n, N)
    acc = None
    for k in range(1, n + 1):
        if not any(G[k]):
            continue
        term = hd_padic(k, h).truncate(N).scale_series(G[k])
        acc = term if acc is None else acc + term
    if acc is None:
        acc = hd_padic(n, h).scale_series([0])
    return acc


def _chain_coefficients(F, D, n, N):
    zero = [0] * (N + 1)
    # powers[k][m] = series coefficient of Y**m in (sum_j D_j Y**j)**k
    cur = [zero] * (n + 1)
    cur[0] = [1] + [0] * N
    out = [zero] * (n + 1)
    for k in range(1, n + 1):
        nxt = [zero] * (n + 1)
        for m in range(n + 1):
            if not any(cur[m]):
                continue
            for j in range(1, n - m + 1):
                prod = ps_mul(F, cur[m], D[j], N)
                nxt[m + j] = [F.add(a, b) for a, b in zip(nxt[m + j], prod)]
        cur = nxt
        out[k] = cur[n]
    return out


def leading_chain_term(s, n, h):
    """The value at the prime of (D_w^(1) s)**(-n) * D_w^(n) h."""
    rf = h.rf
    S = poly_expansion(rf, s, 1)
    if not S[1]:
        raise NotSeparating(f'{s} is not separating at {rf.prime}')
    return h.coeffs[n].scale_residue(rf.field.pow(S[1], -n))


__all__ = ['hd_poly', 'hd_rational', 'hd_local', 'hd_padic', 'taylor', 'from_taylor',
           'hd_wrt', 'prime_derivatives', 'invert_series', 'leading_chain_term']
