"""Pure-Python kernel for sparse Laurent arithmetic.

Elements are dicts mapping exponent tuples (one slot per variable) to
nonzero scalar coefficients; scalars are ints, Fractions, or cyclotomic
residues, anything supporting +, *, and truthiness.  A compiled twin of
this module (_laurent_c) is preferred at import time when available.
"""

IMPL = "python"


def lmul(a, b):
    """Product of two Laurent dicts."""
    if not a or not b:
        return {}
    if len(b) > len(a):
        a, b = b, a
    out = {}
    for eb, cb in b.items():
        for ea, ca in a.items():
            k = tuple(x + y for x, y in zip(ea, eb))
            v = out.get(k)
            if v is None:
                out[k] = ca * cb
            else:
                v = v + ca * cb
                if v:
                    out[k] = v
                else:
                    del out[k]
    return out


def ladd_into(acc, d, scale=1):
    """acc += scale * d, in place."""
    if not scale:
        return acc
    for k, c in d.items():
        v = acc.get(k)
        if v is None:
            acc[k] = c * scale if scale != 1 else c
        else:
            v = v + c * scale
            if v:
                acc[k] = v
            else:
                del acc[k]
    return acc


def lscale(d, c):
    """c * d as a new dict."""
    if not c:
        return {}
    if c == 1:
        return dict(d)
    return {k: v * c for k, v in d.items()}


def lshift(d, exp):
    """Multiply by the monomial with exponent tuple exp."""
    if not any(exp):
        return dict(d)
    return {tuple(x + y for x, y in zip(k, exp)): v for k, v in d.items()}


def lmul_spoly(d, poly, slot=0):
    """Multiply by a dense univariate polynomial living in variable `slot`."""
    out = {}
    for deg, c in enumerate(poly):
        if not c:
            continue
        for k, v in d.items():
            kk = list(k)
            kk[slot] += deg
            kk = tuple(kk)
            w = out.get(kk)
            if w is None:
                out[kk] = v * c
            else:
                w = w + v * c
                if w:
                    out[kk] = w
                else:
                    del out[kk]
    return out
