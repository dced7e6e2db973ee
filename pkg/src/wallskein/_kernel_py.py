"""Pure-Python term kernel.

Polynomials are dicts from exponent tuples to nonzero ints. A key has the
layout ``(l_1, ..., l_n, q2, e_1, ..., e_m)``: ``n`` lattice coordinates, the
doubled exponent of ``q``, then doubled coefficient-symbol exponents. The
product of two basis terms adds keys and shifts ``q2`` by the skew pairing of
the lattice parts (``form`` is the n x n integer matrix, row-major tuples).

The compiled module ``_ckernel`` exposes the same two functions.
"""

from __future__ import annotations

import heapq

__all__ = ["mul_terms", "div_terms"]

MAX_DIVISION_STEPS = 1_000_000


def _pairing_rows(keys, n, form):
    # row vector lambda^T Pi for every key, so the twist is a dot product
    rows = []
    for k in keys:
        rows.append(tuple(sum(k[i] * form[i][j] for i in range(n) if k[i]) for j in range(n)))
    return rows


def mul_terms(a: dict, b: dict, n: int, form) -> dict:
    """Twisted product of two term dicts."""
    out: dict = {}
    if not a or not b:
        return out
    bitems = list(b.items())
    if n == 0:
        for ka, ca in a.items():
            for kb, cb in bitems:
                k = tuple([x + y for x, y in zip(ka, kb)])
                out[k] = out.get(k, 0) + ca * cb
    else:
        akeys = list(a)
        rows = _pairing_rows(akeys, n, form)
        for ka, wa in zip(akeys, rows):
            ca = a[ka]
            for kb, cb in bitems:
                s = [x + y for x, y in zip(ka, kb)]
                tw = 0
                for i in range(n):
                    if kb[i]:
                        tw += wa[i] * kb[i]
                s[n] += tw
                k = tuple(s)
                out[k] = out.get(k, 0) + ca * cb
    return {k: v for k, v in out.items() if v}


def _order_key(k, n):
    # graded-lex on the lattice part, then lex on q2 and coefficient exponents
    return (sum(k[:n]),) + tuple(k)


def _neg(t):
    return tuple([-v for v in t])


def _bounds(keys, width):
    lo = [min(k[i] for k in keys) for i in range(width)]
    hi = [max(k[i] for k in keys) for i in range(width)]
    return lo, hi


def div_terms(num: dict, den: dict, n: int, form, den_left: bool):
    """Exact quotient ``c`` with ``c*den == num`` (or ``den*c`` if den_left).

    Returns None when no exact quotient exists.
    """
    if not den:
        raise ZeroDivisionError("division by the zero element")
    if not num:
        return {}
    width = len(next(iter(den)))
    dlead = max(den, key=lambda k: _order_key(k, n))
    dc = den[dlead]

    # Newton-box bounds on every untwisted coordinate of the quotient
    nlo, nhi = _bounds(num, width)
    dlo, dhi = _bounds(den, width)
    qlo = [nlo[i] - dlo[i] for i in range(width)]
    qhi = [nhi[i] - dhi[i] for i in range(width)]

    rem = dict(num)
    heap = [(_neg(_order_key(k, n)), k) for k in rem]
    heapq.heapify(heap)
    quot: dict = {}
    dl = dlead[:n]
    steps = 0
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
        tl = t[:n]
        if den_left:
            tw = sum(dl[i] * form[i][j] * tl[j] for i in range(n) if dl[i] for j in range(n) if tl[j])
        else:
            tw = sum(tl[i] * form[i][j] * dl[j] for i in range(n) if tl[i] for j in range(n) if dl[j])
        t[n] -= tw
        for i in range(width):
            if i != n and not (qlo[i] <= t[i] <= qhi[i]):
                return None
        tk = tuple(t)
        quot[tk] = quot.get(tk, 0) + c
        prod = mul_terms(den, {tk: c}, n, form) if den_left else mul_terms({tk: c}, den, n, form)
        for k, v in prod.items():
            nv = rem.get(k, 0) - v
            if nv:
                if k not in rem:
                    heapq.heappush(heap, (_neg(_order_key(k, n)), k))
                rem[k] = nv
            else:
                rem.pop(k, None)
    return {k: v for k, v in quot.items() if v}
