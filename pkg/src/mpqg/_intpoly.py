"""Dense univariate polynomial helpers over Z (and Q where stated).

Polynomials are tuples of coefficients, index = degree, no trailing zeros;
the zero polynomial is the empty tuple.  Only the handful of operations the
coefficient ring needs: arithmetic, exact division, primitive-PRS gcd,
evaluation, and cyclotomic polynomials.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd


def pnorm(c):
    c = list(c)
    while c and not c[-1]:
        c.pop()
    return tuple(c)


def padd(a, b):
    n = max(len(a), len(b))
    return pnorm(
        (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
        for i in range(n)
    )


def pneg(a):
    return tuple(-x for x in a)


def psub(a, b):
    return padd(a, pneg(b))


def pmul(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return pnorm(out)


def pscale(a, c):
    if not c:
        return ()
    return tuple(x * c for x in a)


def pcontent(a) -> int:
    g = 0
    for x in a:
        g = gcd(g, abs(x))
    return g


def pprimitive(a):
    g = pcontent(a)
    if g in (0, 1):
        return a
    return tuple(x // g for x in a)


def pdivexact(a, b):
    """a // b when the division is exact over Z; raises otherwise."""
    if not b:
        raise ZeroDivisionError
    if not a:
        return ()
    if len(a) < len(b):
        raise ValueError("inexact polynomial division")
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    lb = b[-1]
    for k in range(len(q) - 1, -1, -1):
        c = a[k + len(b) - 1]
        if c % lb:
            raise ValueError("inexact polynomial division")
        q[k] = c // lb
        if q[k]:
            for j, y in enumerate(b):
                a[k + j] -= q[k] * y
    if any(a):
        raise ValueError("inexact polynomial division")
    return pnorm(q)


def _pseudo_rem(a, b):
    """Pseudo-remainder of a by b over Z (scaled remainder, stays integral)."""
    r = list(pnorm(a))
    db = len(b) - 1
    lb = b[-1]
    while r and len(r) - 1 >= db:
        c = r[-1]
        r = [lb * x for x in r]
        shift = len(r) - len(b)
        for j, y in enumerate(b):
            r[shift + j] -= c * y
        r.pop()
        while r and not r[-1]:
            r.pop()
    return tuple(r)


def pgcd(a, b):
    """gcd over Z, primitive PRS, result with positive leading coefficient."""
    a, b = pnorm(a), pnorm(b)
    if not a:
        g = b
    elif not b:
        g = a
    else:
        ca, cb = pcontent(a), pcontent(b)
        A, B = pprimitive(a), pprimitive(b)
        if len(A) < len(B):
            A, B = B, A
        while B:
            R = _pseudo_rem(A, B)
            A, B = B, pprimitive(R)
        g = pscale(pprimitive(A), gcd(ca, cb))
    if g and g[-1] < 0:
        g = pneg(g)
    return g


def peval(a, x):
    """Horner evaluation; works for any coefficient-compatible x."""
    out = 0
    for c in reversed(a):
        out = out * x + c
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int):
    """The n-th cyclotomic polynomial over Z."""
    if n == 1:
        return (-1, 1)
    num = tuple([-1] + [0] * (n - 1) + [1])  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            num = pdivexact(num, cyclotomic_poly(d))
    return num


def qdivmod(a, b):
    """Division with remainder over Q; a, b tuples of Fraction/int."""
    if not b:
        raise ZeroDivisionError
    r = [Fraction(x) for x in a]
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lb = Fraction(b[-1])
    for k in range(len(q) - 1, -1, -1):
        c = r[k + len(b) - 1] / lb
        q[k] = c
        if c:
            for j, y in enumerate(b):
                r[k + j] -= c * y
    return pnorm(q), pnorm(r)


def qgcd_ext(a, b):
    """Extended Euclid over Q: returns (g, s, t) with s*a + t*b = g."""
    r0, r1 = pnorm(tuple(Fraction(x) for x in a)), pnorm(
        tuple(Fraction(x) for x in b)
    )
    s0, s1 = (Fraction(1),), ()
    t0, t1 = (), (Fraction(1),)

    def f_sub(u, v):
        n = max(len(u), len(v))
        return pnorm(
            (u[i] if i < len(u) else 0) - (v[i] if i < len(v) else 0)
            for i in range(n)
        )

    def f_mul(u, v):
        if not u or not v:
            return ()
        out = [Fraction(0)] * (len(u) + len(v) - 1)
        for i, x in enumerate(u):
            for j, y in enumerate(v):
                out[i + j] += x * y
        return pnorm(out)

    while r1:
        q, r = qdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, f_sub(s0, f_mul(q, s1))
        t0, t1 = t1, f_sub(t0, f_mul(q, t1))
    return r0, s0, t0
