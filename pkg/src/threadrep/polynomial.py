"""Univariate polynomials over the exact fields of :mod:`threadrep.exactla`.

A polynomial is a tuple of coefficients, lowest degree first, with no
trailing zeros.  The zero polynomial is the empty tuple.
"""

import random
from fractions import Fraction


def trim(field, coeffs):
    coeffs = list(coeffs)
    while coeffs and field.is_zero(coeffs[-1]):
        coeffs.pop()
    return tuple(coeffs)


def degree(f):
    return len(f) - 1


def add(field, f, g):
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        a = f[i] if i < len(f) else field.zero
        b = g[i] if i < len(g) else field.zero
        out.append(field.add(a, b))
    return trim(field, out)


def sub(field, f, g):
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        a = f[i] if i < len(f) else field.zero
        b = g[i] if i < len(g) else field.zero
        out.append(field.sub(a, b))
    return trim(field, out)


def scale(field, c, f):
    return trim(field, [field.mul(c, a) for a in f])


def mul(field, f, g):
    if not f or not g:
        return ()
    out = [field.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if field.is_zero(a):
            continue
        for j, b in enumerate(g):
            out[i + j] = field.add(out[i + j], field.mul(a, b))
    return trim(field, out)


def divmod_(field, f, g):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(f)
    q = [field.zero] * max(len(f) - len(g) + 1, 1)
    lead_inv = field.inv(g[-1])
    while len(r) >= len(g) and r:
        c = field.mul(r[-1], lead_inv)
        shift = len(r) - len(g)
        q[shift] = c
        for j, b in enumerate(g):
            r[shift + j] = field.sub(r[shift + j], field.mul(c, b))
        r = list(trim(field, r))
    return trim(field, q), trim(field, r)


def monic(field, f):
    if not f:
        return f
    return scale(field, field.inv(f[-1]), f)


def gcd(field, f, g):
    while g:
        f, g = g, divmod_(field, f, g)[1]
    return monic(field, f)


def xgcd(field, f, g):
    """Return (d, s, t) with s*f + t*g = d monic."""
    r0, r1 = f, g
    s0, s1 = (field.one,), ()
    t0, t1 = (), (field.one,)
    while r1:
        q, r = divmod_(field, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(field, s0, mul(field, q, s1))
        t0, t1 = t1, sub(field, t0, mul(field, q, t1))
    if not r0:
        return (), (), ()
    c = field.inv(r0[-1])
    return scale(field, c, r0), scale(field, c, s0), scale(field, c, t0)


def powmod(field, f, e, m):
    result = (field.one,)
    base = divmod_(field, f, m)[1]
    while e > 0:
        if e & 1:
            result = divmod_(field, mul(field, result, base), m)[1]
        base = divmod_(field, mul(field, base, base), m)[1]
        e >>= 1
    return result


def derivative(field, f):
    return trim(field, [field.mul(field.from_int(i), f[i]) for i in range(1, len(f))])


def evaluate(field, f, x):
    acc = field.zero
    for c in reversed(f):
        acc = field.add(field.mul(acc, x), c)
    return acc


def _pth_root(field, f):
    # f(x) = g(x^p) over a perfect field of characteristic p
    p = field.characteristic
    root = getattr(field, "frobenius_inverse", lambda a: a)
    return trim(field, [root(f[i]) for i in range(0, len(f), p)])


def squarefree_factors(field, f):
    """Yun-style decomposition over a finite field: list of (g, multiplicity)."""
    f = monic(field, f)
    out = []
    if degree(f) < 1:
        return out
    df = derivative(field, f)
    if not df:
        for g, m in squarefree_factors(field, _pth_root(field, f)):
            out.append((g, m * field.characteristic))
        return out
    c = gcd(field, f, df)
    w = divmod_(field, f, c)[0]
    i = 1
    while degree(w) >= 1:
        y = gcd(field, w, c)
        z = divmod_(field, w, y)[0]
        if degree(z) >= 1:
            out.append((z, i))
        i += 1
        w = y
        c = divmod_(field, c, y)[0]
    if degree(c) >= 1:
        for g, m in squarefree_factors(field, _pth_root(field, c)):
            out.append((g, m * field.characteristic))
    return out


def _distinct_degree(field, f):
    q = field.order
    out = []
    x = (field.zero, field.one)
    h = x
    d = 0
    rest = f
    while degree(rest) >= 2 * (d + 1):
        d += 1
        h = powmod(field, h, q, rest)
        g = gcd(field, rest, sub(field, h, x))
        if degree(g) >= 1:
            out.append((g, d))
            rest = divmod_(field, rest, g)[0]
            h = divmod_(field, h, rest)[1] if degree(rest) >= 1 else h
    if degree(rest) >= 1:
        out.append((rest, degree(rest)))
    return out


def _equal_degree(field, f, d, rng):
    n = degree(f)
    if n == d:
        return [f]
    q = field.order
    while True:
        a = trim(field, [field.random_element(rng) for _ in range(n)])
        if degree(a) < 1:
            continue
        g = gcd(field, a, f)
        if 0 < degree(g) < n:
            break
        b = powmod(field, a, (q ** d - 1) // 2, f)
        g = gcd(field, sub(field, b, (field.one,)), f)
        if 0 < degree(g) < n:
            break
    h = divmod_(field, f, g)[0]
    return _equal_degree(field, g, d, rng) + _equal_degree(field, h, d, rng)


def factor_finite(field, f, seed=0):
    """Monic irreducible factors with multiplicities over a finite field of odd order."""
    rng = random.Random(seed)
    out = []
    for g, m in squarefree_factors(field, f):
        for part, d in _distinct_degree(field, g):
            for irr in _equal_degree(field, part, d, rng):
                out.append((monic(field, irr), m))
    out.sort(key=lambda t: (degree(t[0]), [field.sort_key(c) for c in t[0]]))
    return out


def factor_rational(field, f):
    """Factorization over the rationals, delegated to sympy."""
    import sympy

    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x ** i for i, c in enumerate(f))
    _, facs = sympy.factor_list(expr, x, domain="QQ")
    out = []
    for g, m in facs:
        coeffs = sympy.Poly(g, x).all_coeffs()[::-1]
        poly = trim(field, [field.from_fraction(Fraction(int(sympy.Rational(c).p), int(sympy.Rational(c).q))) for c in coeffs])
        out.append((monic(field, poly), int(m)))
    out.sort(key=lambda t: (degree(t[0]), [field.sort_key(c) for c in t[0]]))
    return out


def factor(field, f, seed=0):
    if field.characteristic == 0:
        return factor_rational(field, f)
    return factor_finite(field, f, seed)
