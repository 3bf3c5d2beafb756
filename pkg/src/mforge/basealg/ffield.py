"""Finite fields as explicit towers.

A field is either a prime field F_p or an extension ``base[x]/(modulus)``.
Elements are plain ints: an element of an extension of degree s over a base
of size B is encoded as ``sum(c_i * B**i)`` with ``c_i`` base elements, so
every subfield of the tower embeds as the integers below its size, and the
encoding is F_p-linear in base-p digits.  Multiplication goes through
discrete log tables, which is fine for the small fields used here.

Low-level helpers on dense coefficient lists (lowest degree first) live in
this module as well, since building an extension already needs them.
"""

import functools

_ADD_TABLE_LIMIT = 243


class FiniteField:
    """Finite field given as a tower over a prime field."""

    __slots__ = ('p', 'base', 'modulus', 'degree', 'order',
                 '_exp', '_log', '_add', '_neg', '_digits', '_key')

    def __init__(self, p, base=None, modulus=None):
        self.p = p
        self.base = base
        if base is None:
            self.modulus = None
            self.degree = 1
            self.order = p
        else:
            modulus = tuple(modulus)
            if modulus[-1] != 1:
                raise ValueError('modulus must be monic')
            self.modulus = modulus
            self.degree = len(modulus) - 1
            self.order = base.order ** self.degree
        self._key = (p, None if base is None else base._key, self.modulus)
        self._build()

    # construction

    def _build(self):
        p, N = self.p, self.order
        k = 0
        while p ** k < N:
            k += 1
        self._digits = k
        g = _prime_generator(p) if self.base is None else None
        exp = [0] * (2 * N)
        log = [0] * N
        if self.base is not None and self.degree == 1:
            exp[:N - 1] = self.base._exp[:N - 1]
            log = list(self.base._log)
        elif self.base is None:
            x = 1
            for i in range(N - 1):
                exp[i] = x
                log[x] = i
                x = x * g % p
        else:
            exp, log = self._ext_tables()
        for i in range(N - 1, 2 * N):
            exp[i] = exp[i - (N - 1)]
        self._exp = exp
        self._log = log
        if N <= _ADD_TABLE_LIMIT:
            dig = [self._to_digits(a) for a in range(N)]
            pw = [p ** i for i in range(k)]
            table = []
            for a in range(N):
                da = dig[a]
                for b in range(N):
                    db = dig[b]
                    table.append(sum(((da[i] + db[i]) % p) * pw[i] for i in range(k)))
            self._add = table
            self._neg = [table.index(0, a * N, (a + 1) * N) - a * N for a in range(N)]
        else:
            self._add = None
            self._neg = [self._digit_neg(a) for a in range(N)]

    def _ext_tables(self):
        base, mod, s, N = self.base, self.modulus, self.degree, self.order
        B = base.order
        for cand in range(B, N):
            vec = _int_to_vec(cand, B, s)
            exp = [0] * (2 * N)
            log = [0] * N
            seen = bytearray(N)
            cur = [1] + [0] * (s - 1)
            ok = True
            for i in range(N - 1):
                code = _vec_to_int(cur, B)
                if seen[code]:
                    ok = False
                    break
                seen[code] = 1
                exp[i] = code
                log[code] = i
                cur = _pmulmod(base, cur, vec, mod)
            if ok and _vec_to_int(cur, B) == 1:
                return exp, log
        raise ValueError('modulus is not irreducible')

    def _to_digits(self, a):
        p = self.p
        out = []
        for _ in range(self._digits):
            out.append(a % p)
            a //= p
        return out

    def _digit_neg(self, a):
        p = self.p
        r, pw = 0, 1
        while a:
            r += ((-(a % p)) % p) * pw
            a //= p
            pw *= p
        return r

    # identity

    def __eq__(self, other):
        return isinstance(other, FiniteField) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        if self.base is None:
            return f'GF({self.p})'
        return f'GF({self.order}; {self.modulus})'

    # arithmetic

    def add(self, a, b):
        if self._add is not None:
            return self._add[a * self.order + b]
        if self.p == 2:
            return a ^ b
        p = self.p
        r, pw = 0, 1
        while a or b:
            r += ((a % p + b % p) % p) * pw
            a //= p
            b //= p
            pw *= p
        return r

    def neg(self, a):
        return self._neg[a]

    def sub(self, a, b):
        return self.add(a, self._neg[b])

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError('inverse of zero in finite field')
        return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n):
        if a == 0:
            if n < 0:
                raise ZeroDivisionError('inverse of zero in finite field')
            return 1 if n == 0 else 0
        return self._exp[(self._log[a] * n) % (self.order - 1)]

    def from_int(self, n):
        """Image of the integer n."""
        return n % self.p

    def elements(self):
        return range(self.order)

    def generator(self):
        """A fixed primitive element."""
        return self._exp[1] if self.order > 2 else 1

    def log(self, a):
        return self._log[a]

    def tower(self):
        """Fields from the prime field up to self."""
        chain = []
        f = self
        while f is not None:
            chain.append(f)
            f = f.base
        return chain[::-1]

    def contains(self, other):
        """True when ``other`` is a subfield of self in the tower sense."""
        return other in self.tower()

    def nth_roots(self, a, n):
        """All x with x**n == a, in increasing encoding order."""
        if a == 0:
            return [0]
        return [x for x in range(1, self.order) if self.pow(x, n) == a]


def _prime_generator(p):
    for g in range(1, p):
        x, seen = 1, set()
        for _ in range(p - 1):
            seen.add(x)
            x = x * g % p
        if len(seen) == p - 1:
            return g
    raise ValueError(f'{p} is not prime')


def _int_to_vec(a, B, s):
    out = []
    for _ in range(s):
        out.append(a % B)
        a //= B
    return out


def _vec_to_int(v, B):
    r = 0
    for c in reversed(v):
        r = r * B + c
    return r


# dense polynomial helpers over a FiniteField (lists, lowest degree first)

def pstrip(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def padd(F, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        if c:
            out[i] = F.add(out[i], c)
    return pstrip(out)


def psub(F, a, b):
    return padd(F, a, [F.neg(c) for c in b])


def pscale(F, a, c):
    if c == 0:
        return []
    return [F.mul(x, c) for x in a]


def pmul(F, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    add, mul = F.add, F.mul
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = add(out[i + j], mul(x, y))
    return pstrip(out)


def pdivmod(F, a, b):
    b = pstrip(b)
    if not b:
        raise ZeroDivisionError('polynomial division by zero')
    a = pstrip(a)
    if len(a) < len(b):
        return [], a
    inv = F.inv(b[-1])
    r = list(a)
    qt = [0] * (len(a) - len(b) + 1)
    for k in range(len(a) - len(b), -1, -1):
        c = r[k + len(b) - 1]
        if c:
            c = F.mul(c, inv)
            qt[k] = c
            for j, y in enumerate(b):
                if y:
                    r[k + j] = F.sub(r[k + j], F.mul(c, y))
    return pstrip(qt), pstrip(r[:len(b) - 1])


def pmod(F, a, b):
    return pdivmod(F, a, b)[1]


def pmonic(F, a):
    a = pstrip(a)
    if not a:
        return a
    return pscale(F, a, F.inv(a[-1]))


def pgcd(F, a, b):
    a, b = pstrip(a), pstrip(b)
    while b:
        a, b = b, pmod(F, a, b)
    return pmonic(F, a)


def ppow_mod(F, a, n, m):
    result = [1]
    a = pmod(F, a, m)
    while n:
        if n & 1:
            result = pmod(F, pmul(F, result, a), m)
        a = pmod(F, pmul(F, a, a), m)
        n >>= 1
    return result


def peval(F, a, x):
    """Evaluate a polynomial with coefficients in F at x (F or a tower above F)."""
    r = 0
    for c in reversed(a):
        r = F.add(F.mul(r, x), c)
    return r


def _pmulmod(F, a, b, m):
    return pmod(F, pmul(F, a, b), m)


def is_irreducible(F, f):
    """Irreducibility of a polynomial over F (Ben-Or style distinct-degree test)."""
    f = pstrip(f)
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    f = pmonic(F, f)
    Q = F.order
    x = [0, 1]
    h = x
    for _ in range(1, n // 2 + 1):
        h = ppow_mod(F, h, Q, f)
        g = pgcd(F, f, psub(F, h, x))
        if len(g) > 1:
            return False
    return True


def find_factor(F, f):
    """A proper monic factor of f, or None when f is irreducible."""
    f = pmonic(F, f)
    n = len(f) - 1
    if n <= 1:
        return None
    Q = F.order
    for c in range(Q):
        if peval(F, f, c) == 0:
            return [F.neg(c), 1]
    for d in range(2, n // 2 + 1):
        for code in range(Q ** d):
            g = _int_to_vec(code, Q, d) + [1]
            if not pmod(F, f, g):
                return g
    return None


def smallest_irreducible(F, s):
    """Lexicographically smallest monic irreducible polynomial of degree s over F.

    Candidates are ordered by the integer ``sum(c_i * |F|**i)`` over the
    non-leading coefficients, so higher coefficients are more significant.
    """
    Q = F.order
    for code in range(Q ** s):
        f = _int_to_vec(code, Q, s) + [1]
        if is_irreducible(F, f):
            return tuple(f)
    raise ValueError('no irreducible polynomial found')


@functools.cache
def prime_field(p):
    if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f'{p} is not prime')
    return FiniteField(p)


@functools.cache
def extension(base, s):
    """Degree-s extension of ``base`` by the smallest irreducible modulus."""
    if s == 1:
        return base
    return FiniteField(base.p, base, smallest_irreducible(base, s))


@functools.cache
def extension_by(base, modulus):
    return FiniteField(base.p, base, tuple(modulus))


@functools.cache
def base_field(q):
    """The field Fq, built over F_p when q is a proper prime power."""
    for p in (2, 3, 5, 7, 11, 13):
        e, r = 0, q
        while r % p == 0:
            r //= p
            e += 1
        if r == 1 and e >= 1:
            return extension(prime_field(p), e)
    raise ValueError(f'{q} is not a small prime power')
