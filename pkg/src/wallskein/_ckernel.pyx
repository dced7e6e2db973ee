# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled term kernel; same contract as ``_kernel_py``."""

import heapq

from libc.stdlib cimport malloc, free

MAX_DIVISION_STEPS = 1_000_000


cdef long* _pack(list keys, Py_ssize_t width) except NULL:
    cdef Py_ssize_t nk = len(keys), r, i
    cdef long* buf = <long*> malloc((nk * width + 1) * sizeof(long))
    if buf == NULL:
        raise MemoryError()
    for r in range(nk):
        k = keys[r]
        for i in range(width):
            buf[r * width + i] = k[i]
    return buf


cdef tuple _make_key(long* vals, Py_ssize_t width):
    cdef Py_ssize_t i
    return tuple([vals[i] for i in range(width)])


def mul_terms(dict a, dict b, int n, form):
    """Twisted product of two term dicts."""
    cdef dict out = {}
    if not a or not b:
        return out
    cdef list akeys = list(a)
    cdef list bkeys = list(b)
    cdef list acoef = [a[k] for k in akeys]
    cdef list bcoef = [b[k] for k in bkeys]
    cdef Py_ssize_t width = len(akeys[0])
    cdef Py_ssize_t na = len(akeys), nb = len(bkeys)
    cdef Py_ssize_t ia, ib, i, j
    cdef long tw
    cdef long* ak = _pack(akeys, width)
    cdef long* bk = _pack(bkeys, width)
    cdef long* pf = <long*> malloc((n * n + 1) * sizeof(long))
    cdef long* wa = <long*> malloc((n + 1) * sizeof(long))
    cdef long* s = <long*> malloc((width + 1) * sizeof(long))
    try:
        for i in range(n):
            row = form[i]
            for j in range(n):
                pf[i * n + j] = row[j]
        for ia in range(na):
            for j in range(n):
                tw = 0
                for i in range(n):
                    tw += ak[ia * width + i] * pf[i * n + j]
                wa[j] = tw
            ca = acoef[ia]
            for ib in range(nb):
                for i in range(width):
                    s[i] = ak[ia * width + i] + bk[ib * width + i]
                if n:
                    tw = 0
                    for i in range(n):
                        tw += wa[i] * bk[ib * width + i]
                    s[n] += tw
                key = _make_key(s, width)
                prod = ca * bcoef[ib]
                old = out.get(key)
                if old is None:
                    out[key] = prod
                else:
                    out[key] = old + prod
    finally:
        free(ak)
        free(bk)
        free(pf)
        free(wa)
        free(s)
    return {k: v for k, v in out.items() if v}


cdef tuple _order_key(tuple k, int n):
    cdef long d = 0
    cdef int i
    for i in range(n):
        d += <long> k[i]
    return (d,) + k


cdef tuple _neg(tuple t):
    return tuple([-v for v in t])


def div_terms(dict num, dict den, int n, form, bint den_left):
    """Exact quotient ``c`` with ``c*den == num`` (or ``den*c`` if den_left).

    Returns None when no exact quotient exists.
    """
    if not den:
        raise ZeroDivisionError("division by the zero element")
    if not num:
        return {}
    cdef Py_ssize_t width = len(next(iter(den)))
    cdef Py_ssize_t i, j
    cdef long steps = 0
    cdef long tw
    dlead = max(den, key=lambda k: _order_key(k, n))
    dc = den[dlead]
    nlo = [min(k[i] for k in num) for i in range(width)]
    nhi = [max(k[i] for k in num) for i in range(width)]
    dlo = [min(k[i] for k in den) for i in range(width)]
    dhi = [max(k[i] for k in den) for i in range(width)]
    qlo = [nlo[i] - dlo[i] for i in range(width)]
    qhi = [nhi[i] - dhi[i] for i in range(width)]

    cdef dict rem = dict(num)
    heap = [(_neg(_order_key(k, n)), k) for k in rem]
    heapq.heapify(heap)
    cdef dict quot = {}
    while rem:
        steps += 1
        if steps > MAX_DIVISION_STEPS:
            return None
        while True:
            _, lk = heapq.heappop(heap)
            if lk in rem:
                break
        lc = rem[lk]
        if lc % dc:
            return None
        c = lc // dc
        t = [lk[i] - dlead[i] for i in range(width)]
        tw = 0
        for i in range(n):
            for j in range(n):
                if den_left:
                    tw += dlead[i] * form[i][j] * t[j]
                else:
                    tw += t[i] * form[i][j] * dlead[j]
        t[n] -= tw
        for i in range(width):
            if i != n and not (qlo[i] <= t[i] <= qhi[i]):
                return None
        tk = tuple(t)
        quot[tk] = quot.get(tk, 0) + c
        if den_left:
            prod = mul_terms(den, {tk: c}, n, form)
        else:
            prod = mul_terms({tk: c}, den, n, form)
        for k, v in prod.items():
            nv = rem.get(k, 0) - v
            if nv:
                if k not in rem:
                    heapq.heappush(heap, (_neg(_order_key(k, n)), k))
                rem[k] = nv
            else:
                rem.pop(k, None)
    return {k: v for k, v in quot.items() if v}
