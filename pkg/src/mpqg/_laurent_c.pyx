# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernel for sparse Laurent arithmetic; mirrors _laurent_py."""

IMPL = "cython"


def lmul(dict a, dict b):
    cdef dict out = {}
    cdef tuple ea, eb, k
    cdef Py_ssize_t n, i
    if not a or not b:
        return out
    if len(b) > len(a):
        a, b = b, a
    for eb, cb in b.items():
        n = len(eb)
        for ea, ca in a.items():
            k = tuple([ea[i] + eb[i] for i in range(n)])
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


def ladd_into(dict acc, dict d, scale=1):
    cdef tuple k
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


def lscale(dict d, c):
    cdef dict out = {}
    cdef tuple k
    if not c:
        return out
    if c == 1:
        return dict(d)
    for k, v in d.items():
        out[k] = v * c
    return out


def lshift(dict d, tuple exp):
    cdef dict out = {}
    cdef tuple k
    cdef Py_ssize_t n = len(exp), i
    cdef bint trivial = 1
    for i in range(n):
        if exp[i]:
            trivial = 0
            break
    if trivial:
        return dict(d)
    for k, v in d.items():
        out[tuple([k[i] + exp[i] for i in range(n)])] = v
    return out


def lmul_spoly(dict d, tuple poly, Py_ssize_t slot=0):
    cdef dict out = {}
    cdef tuple k
    cdef Py_ssize_t deg
    cdef list kk
    for deg in range(len(poly)):
        c = poly[deg]
        if not c:
            continue
        for k, v in d.items():
            kk = list(k)
            kk[slot] = kk[slot] + deg
            key = tuple(kk)
            w = out.get(key)
            if w is None:
                out[key] = v * c
            else:
                w = w + v * c
                if w:
                    out[key] = w
                else:
                    del out[key]
    return out
