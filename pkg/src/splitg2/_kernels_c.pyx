# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twins of the pure-Python compute kernels.

Semantics must match `_kernels_py` exactly; the test suite runs both
backends on the same seeded inputs and compares results.  Coefficients
stay Python objects (ints can be arbitrarily large, wedge coefficients
can be any exact scalar), so only loop and dispatch overhead is
compiled away.
"""

from math import gcd as _gcd


cdef inline tuple _tuple_add(tuple ea, tuple eb):
    cdef Py_ssize_t n = len(ea)
    cdef Py_ssize_t idx
    cdef list out = [None] * n
    for idx in range(n):
        out[idx] = ea[idx] + eb[idx]
    return tuple(out)


def term_gcd(terms):
    """gcd of the absolute coefficient values, 0 for the empty map."""
    g = 0
    for c in terms.values():
        g = _gcd(g, c)
        if g == 1:
            return 1
    return g


def poly_mul(a, b):
    """Convolution of two integer term maps."""
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    cdef dict out = {}
    cdef tuple e
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = _tuple_add(<tuple> ea, <tuple> eb)
            v = out.get(e)
            if v is None:
                out[e] = ca * cb
            else:
                v = v + ca * cb
                if v:
                    out[e] = v
                else:
                    del out[e]
    return out


def poly_axpy(ma, a, mb, b):
    """ma*a + mb*b for integer term maps and nonzero int multipliers."""
    cdef dict out = {}
    for e, c in a.items():
        out[e] = ma * c
    for e, c in b.items():
        v = out.get(e)
        if v is None:
            out[e] = mb * c
        else:
            v = v + mb * c
            if v:
                out[e] = v
            else:
                del out[e]
    return out


cdef object _merge(tuple i, tuple j):
    cdef list out = []
    cdef Py_ssize_t swaps = 0
    cdef Py_ssize_t x = 0
    cdef Py_ssize_t y = 0
    cdef Py_ssize_t ni = len(i)
    cdef Py_ssize_t nj = len(j)
    cdef long u, v
    while x < ni and y < nj:
        u = <long> i[x]
        v = <long> j[y]
        if u == v:
            return None
        if u < v:
            out.append(i[x])
            x += 1
        else:
            out.append(j[y])
            y += 1
            swaps += ni - x
    while x < ni:
        out.append(i[x])
        x += 1
    while y < nj:
        out.append(j[y])
        y += 1
    return tuple(out), (1 if swaps % 2 == 0 else -1)


def merge_indices(i, j):
    """Merge two strictly increasing index tuples.

    Returns (merged, sign) where sign is the parity of the shuffle, or
    None when the tuples share an index.
    """
    if not i:
        return j, 1
    if not j:
        return i, 1
    return _merge(<tuple> i, <tuple> j)


def wedge_terms(a, b):
    """Wedge-product merge of two index maps."""
    cdef dict out = {}
    cdef Py_ssize_t sign
    for ia, ca in a.items():
        for ib, cb in b.items():
            if ia and ib:
                m = _merge(<tuple> ia, <tuple> ib)
                if m is None:
                    continue
                key, s = m
                sign = <Py_ssize_t> s
            elif ia:
                key, sign = ia, 1
            else:
                key, sign = ib, 1
            v = ca * cb
            if sign < 0:
                v = -v
            cur = out.get(key)
            if cur is None:
                out[key] = v
            else:
                cur = cur + v
                if cur:
                    out[key] = cur
                else:
                    del out[key]
    return out


def wedge_collect(a, b):
    """Wedge-product merge keeping per-key contribution lists.

    Callers fold each list themselves; deferring the summation lets
    quotient coefficients be grouped by denominator instead of
    compounding pairwise."""
    cdef dict out = {}
    cdef Py_ssize_t sign
    for ia, ca in a.items():
        for ib, cb in b.items():
            if ia and ib:
                m = _merge(<tuple> ia, <tuple> ib)
                if m is None:
                    continue
                key, s = m
                sign = <Py_ssize_t> s
            elif ia:
                key, sign = ia, 1
            else:
                key, sign = ib, 1
            v = ca * cb
            if sign < 0:
                v = -v
            bucket = out.get(key)
            if bucket is None:
                out[key] = [v]
            else:
                (<list> bucket).append(v)
    return out
