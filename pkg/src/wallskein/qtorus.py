"""Based quantum torus over a lattice with a skew-symmetric form.

Basis elements multiply as ``B_l * B_m = q^((l,m)/2) B_(l+m)`` where
``(l,m) = l^T Pi m``. Coefficients live in :mod:`wallskein.coefrw` and are
central.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from . import kernel
from ._poly import align, prune
from .coefrw import LaurentElem, TropMonomial, parse_expression, specialize

__all__ = [
    "SkewLattice",
    "TorusElem",
    "NotDivisible",
    "frame_monomial",
    "qt_mul",
    "qt_add",
    "divide_exact",
    "parse_torus",
]


class NotDivisible(ArithmeticError):
    """No exact quotient exists in the quantum torus."""


@dataclass(frozen=True)
class SkewLattice:
    """Lattice ``Z^N`` with skew form ``Pi`` (tuple of row tuples)."""

    form: tuple

    def __post_init__(self):
        form = tuple(tuple(int(v) for v in row) for row in self.form)
        object.__setattr__(self, "form", form)
        n = len(form)
        if n == 0 or any(len(r) != n for r in form):
            raise ValueError("form must be a nonempty square matrix")
        for i in range(n):
            for j in range(n):
                if form[i][j] != -form[j][i]:
                    raise ValueError("form is not skew-symmetric")

    @property
    def rank(self) -> int:
        return len(self.form)

    def pair(self, x: Sequence[int], y: Sequence[int]) -> int:
        return sum(x[i] * self.form[i][j] * y[j] for i in range(self.rank) if x[i] for j in range(self.rank) if y[j])


class TorusElem:
    """Finite sum of basis elements with coefficient-ring coefficients.

    Terms map ``(l_1..l_N, q2, e_1..e_m)`` to nonzero ints; see ``_kernel_py``.
    """

    __slots__ = ("lattice", "syms", "terms", "_hash")

    def __init__(self, lattice: SkewLattice, terms: Mapping | None = None, syms: tuple = ()):
        syms, t = prune(dict(terms or {}), lattice.rank + 1, tuple(syms))
        self.lattice = lattice
        self.syms = syms
        self.terms = t
        self._hash = None

    @property
    def n(self) -> int:
        return self.lattice.rank

    # constructors
    @classmethod
    def basis(cls, lattice: SkewLattice, lam: Sequence[int], coeff: LaurentElem | int = 1) -> "TorusElem":
        lam = tuple(int(v) for v in lam)
        if len(lam) != lattice.rank:
            raise ValueError(f"lattice vector of length {len(lam)} in rank {lattice.rank}")
        if isinstance(coeff, int):
            coeff = LaurentElem.const(coeff)
        return cls(lattice, {lam + k: c for k, c in coeff.terms.items()}, coeff.syms)

    @classmethod
    def scalar(cls, lattice: SkewLattice, coeff: LaurentElem | int) -> "TorusElem":
        return cls.basis(lattice, (0,) * lattice.rank, coeff)

    # arithmetic
    def _coerce(self, other) -> "TorusElem":
        if isinstance(other, TorusElem):
            if other.lattice != self.lattice:
                raise ValueError("lattice mismatch")
            return other
        if isinstance(other, (int, LaurentElem)):
            return TorusElem.scalar(self.lattice, other)
        if isinstance(other, TropMonomial):
            return TorusElem.scalar(self.lattice, other.to_laurent())
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        syms, a, b = align(self.syms, self.terms, other.syms, other.terms, self.n + 1)
        out = dict(a)
        for k, v in b.items():
            out[k] = out.get(k, 0) + v
        return TorusElem(self.lattice, out, syms)

    __radd__ = __add__

    def __neg__(self):
        return TorusElem(self.lattice, {k: -v for k, v in self.terms.items()}, self.syms)

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
        return _mul(self, other)

    def __rmul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return _mul(other, self)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = TorusElem.scalar(self.lattice, 1)
        for _ in range(k):
            result = result * self
        return result

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def inverse(self) -> "TorusElem":
        """Inverse of a unit (single term with coefficient +-1)."""
        if not self.is_monomial() or next(iter(self.terms.values())) not in (1, -1):
            raise NotDivisible("only units are invertible")
        return divide_exact(TorusElem.scalar(self.lattice, 1), self)

    # comparison
    def __eq__(self, other):
        if isinstance(other, (int, LaurentElem)):
            other = TorusElem.scalar(self.lattice, other)
        if not isinstance(other, TorusElem):
            return NotImplemented
        return self.lattice == other.lattice and self.syms == other.syms and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.lattice, self.syms, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # views
    def coefficients(self) -> dict:
        """Map lattice vector -> :class:`LaurentElem` coefficient."""
        n = self.n
        grouped: dict = {}
        for k, c in self.terms.items():
            grouped.setdefault(k[:n], {})[k[n:]] = c
        return {lam: LaurentElem(t, self.syms) for lam, t in grouped.items()}

    def coefficient(self, lam: Sequence[int]) -> LaurentElem:
        return self.coefficients().get(tuple(lam), LaurentElem.zero())

    def support(self) -> list:
        return sorted(self.coefficients())

    def map_coefficients(self, fn) -> "TorusElem":
        """Apply a coefficient-ring map termwise (keeps the lattice part)."""
        out = TorusElem(self.lattice)
        for lam, c in self.coefficients().items():
            out = out + TorusElem.basis(self.lattice, lam, fn(c))
        return out

    def specialize(self, assignment: Mapping) -> "TorusElem":
        return self.map_coefficients(lambda c: specialize(c, assignment))

    def at_q1(self) -> "TorusElem":
        return self.map_coefficients(LaurentElem.at_q1)

    def min_exponents(self) -> tuple:
        """Componentwise minimum of the lattice exponents (denominator vector)."""
        lams = self.support()
        return tuple(min(l[i] for l in lams) for i in range(self.n))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for lam, c in sorted(self.coefficients().items(), reverse=True):
            vec = "B[" + ",".join(str(v) for v in lam) + "]"
            text = str(c)
            if c == 1:
                parts.append(vec)
            elif len(c.terms) == 1 and not text.startswith("-"):
                parts.append(f"{text}*{vec}")
            else:
                parts.append(f"({text})*{vec}")
        return " + ".join(parts)

    def __repr__(self):
        return f"TorusElem({str(self)!r})"


def _mul(a: TorusElem, b: TorusElem) -> TorusElem:
    syms, ta, tb = align(a.syms, a.terms, b.syms, b.terms, a.n + 1)
    return TorusElem(a.lattice, kernel.mul_terms(ta, tb, a.n, a.lattice.form), syms)


def frame_monomial(lattice: SkewLattice, x: Sequence[int]) -> TorusElem:
    """The basis element ``B_x``."""
    if len(x) != lattice.rank:
        raise ValueError("dimension mismatch")
    return TorusElem.basis(lattice, x)


def qt_mul(a: TorusElem, b: TorusElem) -> TorusElem:
    if a.lattice != b.lattice:
        raise ValueError("lattice mismatch")
    return _mul(a, b)


def qt_add(a: TorusElem, b: TorusElem) -> TorusElem:
    if a.lattice != b.lattice:
        raise ValueError("lattice mismatch")
    return a + b


def divide_exact(num: TorusElem, den: TorusElem, den_left: bool = False) -> TorusElem:
    """Exact quotient ``c`` with ``c * den == num``.

    With ``den_left=True`` the quotient satisfies ``den * c == num`` instead.
    Raises :class:`NotDivisible` when no such ``c`` exists in the torus.
    """
    if num.lattice != den.lattice:
        raise ValueError("lattice mismatch")
    if not den:
        raise ZeroDivisionError("division by zero")
    syms, tn, td = align(num.syms, num.terms, den.syms, den.terms, num.n + 1)
    out = kernel.div_terms(tn, td, num.n, num.lattice.form, den_left)
    if out is None:
        raise NotDivisible("no exact quotient in the quantum torus")
    return TorusElem(num.lattice, out, syms)


def parse_torus(text: str, lattice: SkewLattice) -> TorusElem:
    """Parse ``coeff*B[l1,...,lN] + ...`` with coefficients in the coefficient grammar."""
    val = parse_expression(text, basis=lambda vec: TorusElem.basis(lattice, vec))
    if isinstance(val, (int, LaurentElem)):
        val = TorusElem.scalar(lattice, val)
    return val
