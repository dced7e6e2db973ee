"""Independent commutative oracle: sympy rational functions and the
textbook tropical y-seed rule, sharing nothing with the library beyond the
input matrix."""

from __future__ import annotations

import sympy

from wallskein.coefrw import LaurentElem


def sym_name(s) -> str:
    return f"{s.kind}_{s.label}".replace("+", "p").replace("-", "m")


def laurent_to_sympy(c: LaurentElem, q=sympy.Symbol("q")):
    out = 0
    for q2, exps, coeff in c.items():
        term = sympy.Integer(coeff) * q ** sympy.Rational(q2, 2)
        for s, e in exps.items():
            term *= sympy.Symbol(sym_name(s)) ** sympy.Rational(e, 2)
        out += term
    return out


def torus_to_sympy(elem, labels):
    """Commutative image at q = 1: ``B_l -> prod x_i^l_i``."""
    xs = [sympy.Symbol(f"x_{a}") for a in labels]
    out = 0
    for lam, c in elem.coefficients().items():
        term = laurent_to_sympy(c.at_q1())
        for x, e in zip(xs, lam):
            term *= x**e
        out += term
    return sympy.expand(out)


def _trop_min(a: dict, b: dict) -> dict:
    keys = set(a) | set(b)
    return {k: min(a.get(k, 0), b.get(k, 0)) for k in keys}


def _trop_mul(a: dict, b: dict, k: int = 1) -> dict:
    out = dict(a)
    for s, e in b.items():
        out[s] = out.get(s, 0) + k * e
    return {s: e for s, e in out.items() if e}


class CommutativeSeed:
    """Columns of ``b`` index all edges, rows the mutable ones; ``b[i][j]``
    is the exponent of edge ``j`` on the ``p+`` side of row ``i``."""

    def __init__(self, labels, uf, b, y):
        self.labels = list(labels)
        self.uf = list(uf)
        self.b = [list(r) for r in b]
        self.y = [dict(v) for v in y]  # tropical y as exponent dicts of sympy symbols
        self.x = [sympy.Symbol(f"x_{a}") for a in labels]

    def p(self, i):
        one_plus = _trop_min(self.y[i], {})
        return _trop_mul(self.y[i], one_plus, -1), _trop_mul({}, one_plus, -1)

    def mutate(self, k):
        k = str(k)
        i = self.uf.index(k)
        col = self.labels.index(k)
        pp, pm = self.p(i)
        mono = lambda d: sympy.Mul(*[s**e for s, e in d.items()])  # noqa: E731
        plus = mono(pp) * sympy.Mul(*[x**e for x, e in zip(self.x, self.b[i]) if e > 0])
        minus = mono(pm) * sympy.Mul(*[x ** (-e) for x, e in zip(self.x, self.b[i]) if e < 0])
        new_x = sympy.cancel((plus + minus) / self.x[col])
        # textbook matrix mutation on the extended rectangular matrix
        m, n = len(self.b), len(self.labels)
        nb = [[0] * n for _ in range(m)]
        for r in range(m):
            for c in range(n):
                if r == i or c == col:
                    nb[r][c] = -self.b[r][c]
                else:
                    brk, bkc = self.b[r][col], self.b[i][c]
                    nb[r][c] = self.b[r][c] + (abs(brk) * bkc + brk * abs(bkc)) // 2
        yk = self.y[i]
        ny = []
        for r in range(m):
            if r == i:
                ny.append(_trop_mul({}, yk, -1))
                continue
            e = self.b[r][col]
            one_plus = _trop_min(yk, {})
            v = _trop_mul(self.y[r], yk, max(e, 0))
            ny.append(_trop_mul(v, one_plus, -e))
        self.b, self.y = nb, ny
        self.x[col] = new_x
        return self
