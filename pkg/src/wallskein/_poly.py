"""Helpers shared by the coefficient ring and the quantum torus.

Both store terms keyed by dense exponent tuples whose trailing block lists
coefficient-symbol exponents in the order of a sorted symbol context.
"""

from __future__ import annotations


def merge_syms(sa: tuple, sb: tuple) -> tuple:
    if sa == sb:
        return sa
    return tuple(sorted(set(sa) | set(sb), key=lambda s: s.sort_key))


def rekey(terms: dict, prefix: int, old: tuple, new: tuple) -> dict:
    """Re-express keys over the larger symbol context ``new``."""
    if old == new:
        return terms
    pos = {s: i for i, s in enumerate(new)}
    where = [prefix + pos[s] for s in old]
    out = {}
    for k, v in terms.items():
        nk = list(k[:prefix]) + [0] * len(new)
        for j, w in enumerate(where):
            nk[w] = k[prefix + j]
        out[tuple(nk)] = v
    return out


def prune(terms: dict, prefix: int, syms: tuple):
    """Drop zero coefficients and symbols absent from every term."""
    terms = {k: v for k, v in terms.items() if v}
    if not syms:
        return syms, terms
    used = [j for j in range(len(syms)) if any(k[prefix + j] for k in terms)]
    if len(used) == len(syms):
        return syms, terms
    keep = list(range(prefix)) + [prefix + j for j in used]
    return tuple(syms[j] for j in used), {tuple(k[i] for i in keep): v for k, v in terms.items()}


def align(sa: tuple, ta: dict, sb: tuple, tb: dict, prefix: int):
    syms = merge_syms(sa, sb)
    return syms, rekey(ta, prefix, sa, syms), rekey(tb, prefix, sb, syms)
