"""Exact coefficient ring Z[q^(1/2), z_(j,+-)^(+-1), u_j^(+-1)] and tropical monomials.

Every exponent, of ``q`` and of the coefficient symbols alike, is stored
doubled so that half-integer powers are exact integers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from . import kernel
from ._poly import align, prune

__all__ = [
    "Symbol",
    "LaurentElem",
    "TropMonomial",
    "ParseError",
    "SpecializationError",
    "laurent_mul",
    "laurent_add",
    "specialize",
    "trop_add",
    "embed_trop",
    "parse_laurent",
    "zp",
    "zm",
    "u",
    "Q",
]

KINDS = ("z+", "z-", "u", "u+", "u-")
_KIND_RANK = {k: i for i, k in enumerate(KINDS)}


class ParseError(ValueError):
    """Malformed textual expression."""


class SpecializationError(ValueError):
    """Invalid substitution (cyclic, or q sent to a non-power of q)."""


def _natural(label: str):
    return (0, int(label), "") if label.lstrip("-").isdigit() else (1, 0, label)


@dataclass(frozen=True)
class Symbol:
    """A coefficient variable such as ``z+[3]`` or ``u[1]``."""

    kind: str
    label: str

    def __post_init__(self):
        if self.kind not in _KIND_RANK:
            raise ValueError(f"unknown symbol kind {self.kind!r}")
        object.__setattr__(self, "label", str(self.label))

    @property
    def sort_key(self):
        return (_KIND_RANK[self.kind], _natural(self.label))

    def __str__(self):
        return f"{self.kind}[{self.label}]"

    def __repr__(self):
        return f"Symbol({self.kind!r}, {self.label!r})"


def zp(j) -> Symbol:
    return Symbol("z+", j)


def zm(j) -> Symbol:
    return Symbol("z-", j)


def u(j) -> Symbol:
    return Symbol("u", j)


Q = "q"  # key used for q in specialization maps


def _exp_text(e2: int) -> str:
    if e2 == 2:
        return ""
    if e2 % 2 == 0:
        k = e2 // 2
        return f"^{k}" if k > 0 else f"^{{{k}}}"
    return f"^{{{e2}/2}}"


def _monomial_text(q2: int, syms: tuple, exps) -> str:
    parts = []
    if q2:
        parts.append("q" + _exp_text(q2))
    for s, e in zip(syms, exps):
        if e:
            parts.append(str(s) + _exp_text(e))
    return "*".join(parts)


class LaurentElem:
    """Element of the commutative coefficient ring.

    Terms map ``(q2, e_1, ..., e_m)`` to nonzero ints, where ``e_i`` is the
    doubled exponent of ``syms[i]``.
    """

    __slots__ = ("syms", "terms", "_hash")

    def __init__(self, terms: Mapping | None = None, syms: tuple = ()):
        syms, t = prune(dict(terms or {}), 1, tuple(syms))
        self.syms = syms
        self.terms = t
        self._hash = None

    # constructors
    @classmethod
    def const(cls, c: int) -> "LaurentElem":
        return cls({(0,): c} if c else {})

    @classmethod
    def zero(cls) -> "LaurentElem":
        return cls()

    @classmethod
    def one(cls) -> "LaurentElem":
        return cls.const(1)

    @classmethod
    def qpow(cls, q2: int) -> "LaurentElem":
        """``q^(q2/2)``."""
        return cls({(q2,): 1})

    @classmethod
    def monomial(cls, exps: Mapping[Symbol, int] | None = None, q2: int = 0, coeff: int = 1) -> "LaurentElem":
        """Monomial from doubled exponents."""
        exps = {s: e for s, e in (exps or {}).items() if e}
        syms = tuple(sorted(exps, key=lambda s: s.sort_key))
        return cls({(q2,) + tuple(exps[s] for s in syms): coeff}, syms)

    @classmethod
    def symbol(cls, sym: Symbol, power: int = 1) -> "LaurentElem":
        return cls.monomial({sym: 2 * power})

    # ring structure
    def _coerce(self, other) -> "LaurentElem":
        if isinstance(other, LaurentElem):
            return other
        if isinstance(other, int):
            return LaurentElem.const(other)
        if isinstance(other, TropMonomial):
            return other.to_laurent()
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        syms, a, b = align(self.syms, self.terms, other.syms, other.terms, 1)
        out = dict(a)
        for k, v in b.items():
            out[k] = out.get(k, 0) + v
        return LaurentElem(out, syms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentElem({k: -v for k, v in self.terms.items()}, self.syms)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        syms, a, b = align(self.syms, self.terms, other.syms, other.terms, 1)
        return LaurentElem(kernel.mul_terms(a, b, 0, ()), syms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = LaurentElem.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_unit(self) -> bool:
        return self.is_monomial() and next(iter(self.terms.values())) in (1, -1)

    def inverse(self) -> "LaurentElem":
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not invertible")
        (k, c), = self.terms.items()
        return LaurentElem({tuple(-e for e in k): c}, self.syms)

    def divide(self, other: "LaurentElem") -> "LaurentElem":
        """Exact quotient in the Laurent ring; raises ArithmeticError otherwise."""
        other = self._coerce(other)
        syms, a, b = align(self.syms, self.terms, other.syms, other.terms, 1)
        out = kernel.div_terms(a, b, 0, ())
        if out is None:
            raise ArithmeticError(f"{other} does not divide {self}")
        return LaurentElem(out, syms)

    # comparison and hashing
    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentElem.const(other)
        if isinstance(other, TropMonomial):
            other = other.to_laurent()
        if not isinstance(other, LaurentElem):
            return NotImplemented
        return self.syms == other.syms and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.syms, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # inspection
    def monomial_exponents(self) -> tuple[int, dict, int]:
        """``(q2, {sym: e2}, coeff)`` of a one-term element."""
        if not self.is_monomial():
            raise ValueError("not a monomial")
        (k, c), = self.terms.items()
        return k[0], {s: e for s, e in zip(self.syms, k[1:]) if e}, c

    def items(self) -> Iterable[tuple[int, dict, int]]:
        for k, c in self.terms.items():
            yield k[0], {s: e for s, e in zip(self.syms, k[1:]) if e}, c

    def symbols(self) -> frozenset:
        return frozenset(self.syms)

    def coefficients(self) -> list[int]:
        return list(self.terms.values())

    def at_q1(self) -> "LaurentElem":
        """Specialize ``q^(1/2) -> 1``."""
        out: dict = {}
        for k, c in self.terms.items():
            nk = (0,) + k[1:]
            out[nk] = out.get(nk, 0) + c
        return LaurentElem(out, self.syms)

    def bar(self) -> "LaurentElem":
        """The involution ``q^(1/2) -> q^(-1/2)``."""
        return LaurentElem({(-k[0],) + k[1:]: c for k, c in self.terms.items()}, self.syms)

    # text
    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for k in sorted(self.terms, reverse=True):
            c = self.terms[k]
            mono = _monomial_text(k[0], self.syms, k[1:])
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"LaurentElem({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "LaurentElem":
        return parse_laurent(text)


@dataclass(frozen=True)
class TropMonomial:
    """Laurent monomial in coefficient symbols; ``+`` is the tropical sum.

    ``exps`` is a sorted tuple of ``(Symbol, doubled exponent)`` pairs with
    nonzero exponents. Multiplication adds exponents; the tropical sum takes
    the componentwise minimum.
    """

    exps: tuple = ()

    @classmethod
    def from_map(cls, m: Mapping[Symbol, int]) -> "TropMonomial":
        """From a map of doubled exponents."""
        items = sorted(((s, e) for s, e in m.items() if e), key=lambda p: p[0].sort_key)
        return cls(tuple(items))

    @classmethod
    def var(cls, sym: Symbol, power: int = 1) -> "TropMonomial":
        return cls.from_map({sym: 2 * power})

    @classmethod
    def one(cls) -> "TropMonomial":
        return cls()

    def as_map(self) -> dict:
        return dict(self.exps)

    def exponent(self, sym: Symbol) -> int:
        """Doubled exponent of ``sym``."""
        return dict(self.exps).get(sym, 0)

    def __mul__(self, other: "TropMonomial") -> "TropMonomial":
        m = self.as_map()
        for s, e in other.exps:
            m[s] = m.get(s, 0) + e
        return TropMonomial.from_map(m)

    def __truediv__(self, other: "TropMonomial") -> "TropMonomial":
        return self * other ** -1

    def __pow__(self, k: int) -> "TropMonomial":
        return TropMonomial.from_map({s: e * k for s, e in self.exps})

    def __add__(self, other: "TropMonomial") -> "TropMonomial":
        return trop_add(self, other)

    def is_one(self) -> bool:
        return not self.exps

    def symbols(self) -> frozenset:
        return frozenset(s for s, _ in self.exps)

    def to_laurent(self) -> LaurentElem:
        return LaurentElem.monomial(self.as_map())

    def __str__(self):
        if not self.exps:
            return "1"
        return "*".join(str(s) + _exp_text(e) for s, e in self.exps)


# operation-style API


def laurent_mul(a: LaurentElem, b: LaurentElem) -> LaurentElem:
    return a * b


def laurent_add(a: LaurentElem, b: LaurentElem) -> LaurentElem:
    return a + b


def trop_add(m1: TropMonomial, m2: TropMonomial) -> TropMonomial:
    """Tropical sum: componentwise minimum of exponents (absent means 0)."""
    a, b = m1.as_map(), m2.as_map()
    return TropMonomial.from_map({s: min(a.get(s, 0), b.get(s, 0)) for s in set(a) | set(b)})


def embed_trop(m: TropMonomial) -> LaurentElem:
    return m.to_laurent()


def _half_power(value: LaurentElem, e2: int) -> LaurentElem:
    """``value ** (e2/2)``; odd ``e2`` needs a monomial with even exponents."""
    if e2 % 2 == 0:
        return value ** (e2 // 2)
    if not value.is_monomial():
        raise SpecializationError(f"half-integer power of non-monomial {value}")
    q2, exps, c = value.monomial_exponents()
    if c != 1 or q2 % 2 or any(e % 2 for e in exps.values()):
        raise SpecializationError(f"no exact square root of {value}")
    return LaurentElem.monomial({s: e // 2 * e2 for s, e in exps.items()}, q2=q2 // 2 * e2)


def specialize(a: LaurentElem, assignment: Mapping) -> LaurentElem:
    """Simultaneous substitution of symbols (and optionally ``Q``).

    ``assignment`` maps :class:`Symbol` (or the string ``"q"``) to
    :class:`LaurentElem`, :class:`TropMonomial` or int values.
    """
    assignment = {k: (v.to_laurent() if isinstance(v, TropMonomial) else v) for k, v in assignment.items()}
    assignment = {k: (LaurentElem.const(v) if isinstance(v, int) else v) for k, v in assignment.items()}
    for key, val in assignment.items():
        if key == Q:
            if val.syms or not val.is_monomial() or val.monomial_exponents()[2] != 1:
                raise SpecializationError("q may only be sent to a power of q")
        elif set(val.syms) & {s for s in assignment if s != Q}:
            raise SpecializationError(f"cyclic assignment for {key}")
    qimg = assignment.get(Q)
    qstep = qimg.monomial_exponents()[0] if qimg is not None else 2
    cache: dict = {}
    keep = [s for s in a.syms if s not in assignment]
    keep_idx = {s: i for i, s in enumerate(keep)}
    result = LaurentElem.zero()
    for k, c in a.terms.items():
        if qstep * k[0] % 2:
            raise SpecializationError("q assignment produces a quarter power")
        base_key = [qstep * k[0] // 2] + [0] * len(keep)
        factor = LaurentElem.one()
        for s, e in zip(a.syms, k[1:]):
            if not e:
                continue
            if s in assignment:
                if (s, e) not in cache:
                    cache[(s, e)] = _half_power(assignment[s], e)
                factor = factor * cache[(s, e)]
            else:
                base_key[1 + keep_idx[s]] = e
        result = result + LaurentElem({tuple(base_key): c}, tuple(keep)) * factor
    return result


# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<sym>z\+|z-|u\+|u-|u)\[(?P<label>[^\]]+)\]|(?P<q>q)|(?P<basis>B)\[(?P<vec>[^\]]*)\]"
    r"|(?P<op>[-+*^(){}/]))"
)


def _tokenize(text: str) -> list:
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected input at {pos}: {text[pos:pos + 10]!r}")
        pos = m.end()
        if m.group("int"):
            out.append(("int", int(m.group("int"))))
        elif m.group("sym"):
            out.append(("sym", Symbol(m.group("sym"), m.group("label").strip())))
        elif m.group("q"):
            out.append(("q", None))
        elif m.group("basis"):
            vec = m.group("vec").strip()
            out.append(("basis", [int(v) for v in vec.split(",")] if vec else []))
        else:
            out.append(("op", m.group("op")))
    return out


class _Parser:
    def __init__(self, tokens, basis: Callable | None):
        self.toks = tokens
        self.i = 0
        self.basis = basis

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ParseError(f"expected {value or kind}, found {tok[1]!r}")
        self.i += 1
        return tok

    def expr(self):
        sign = 1
        if self.peek() == ("op", "-"):
            self.take()
            sign = -1
        elif self.peek() == ("op", "+"):
            self.take()
        total = self.term() * sign
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            t = self.term()
            total = total + t if op == "+" else total - t
        return total

    def term(self):
        val = self.factor()
        while True:
            tok = self.peek()
            if tok == ("op", "*"):
                self.take()
                val = val * self.factor()
            elif tok[0] in ("int", "sym", "q", "basis") or tok == ("op", "("):
                val = val * self.factor()
            else:
                return val

    def exponent2(self) -> int:
        """Doubled exponent after ``^``."""
        if self.peek() == ("op", "{"):
            self.take()
            neg = False
            if self.peek() == ("op", "-"):
                self.take()
                neg = True
            n = self.take("int")[1]
            if self.peek() == ("op", "/"):
                self.take()
                d = self.take("int")[1]
                if d != 2:
                    raise ParseError("only halves are allowed as fractional exponents")
                e2 = n
            else:
                e2 = 2 * n
            self.take("op", "}")
            return -e2 if neg else e2
        neg = False
        if self.peek() == ("op", "-"):
            self.take()
            neg = True
        n = self.take("int")[1]
        return -2 * n if neg else 2 * n

    def factor(self):
        kind, val = self.take()
        if kind == "int":
            base = LaurentElem.const(val)
            e2 = self._maybe_exp()
            if e2 % 2 or e2 < 0:
                raise ParseError("integer literals take nonnegative integer powers")
            return base ** (e2 // 2)
        if kind == "q":
            return LaurentElem.qpow(self._maybe_exp())
        if kind == "sym":
            return LaurentElem.monomial({val: self._maybe_exp()})
        if kind == "basis":
            if self.basis is None:
                raise ParseError("basis element outside a torus expression")
            return self.basis(val)
        if (kind, val) == ("op", "("):
            inner = self.expr()
            self.take("op", ")")
            e2 = self._maybe_exp()
            if e2 % 2:
                raise ParseError("parenthesized expressions take integer powers")
            return inner ** (e2 // 2) if e2 != 2 else inner
        raise ParseError(f"unexpected token {val!r}")

    def _maybe_exp(self) -> int:
        if self.peek() == ("op", "^"):
            self.take()
            return self.exponent2()
        return 2


def parse_expression(text: str, basis: Callable | None = None):
    p = _Parser(_tokenize(text), basis)
    if not p.toks:
        raise ParseError("empty expression")
    val = p.expr()
    if p.i != len(p.toks):
        raise ParseError(f"trailing input near token {p.i}")
    return val


def parse_laurent(text: str) -> LaurentElem:
    """Parse the textual coefficient grammar (``q^{1/2}``, ``z+[j]^k``, ``u[j]``...)."""
    val = parse_expression(text)
    if isinstance(val, int):
        val = LaurentElem.const(val)
    return val
