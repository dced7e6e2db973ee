"""Coefficient specializations and quasi-homomorphism checks.

A :class:`CoeffHom` sends coefficient symbols to monomials. Together with a
rescaling monomial per initial cluster variable it induces a ring map of the
initial quantum torus, ``c B_l -> psi(c) M^l B_l``, which is how source
cluster variables are carried to the target side.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

from .cluster import QuantumSeed, frame_product, mutate_seed, yhat
from .coefrw import LaurentElem, Symbol, TropMonomial, specialize, zm, zp
from .qtorus import NotDivisible, TorusElem, divide_exact
from .surface import Triangulation
from .walls import WallSystem

__all__ = [
    "CoeffHom",
    "QuasiReport",
    "principal_specialization",
    "check_quasi",
    "check_quasi_along",
    "infer_rescale",
    "specialize_minus",
    "forget_walls",
    "positivity_check",
]


def _as_laurent(m) -> LaurentElem:
    if isinstance(m, TropMonomial):
        return m.to_laurent()
    if isinstance(m, int):
        return LaurentElem.const(m)
    return m


@dataclass(frozen=True)
class CoeffHom:
    """Symbol -> monomial; symbols not listed are fixed."""

    assignment: Mapping = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for s, v in dict(self.assignment).items():
            if not isinstance(s, Symbol):
                raise TypeError("coefficient maps act on symbols only")
            v = _as_laurent(v)
            if not v.is_monomial():
                raise ValueError(f"image of {s} is not a monomial")
            clean[s] = v
        object.__setattr__(self, "assignment", clean)

    def __call__(self, value):
        if isinstance(value, TropMonomial):
            return self.trop(value)
        if isinstance(value, LaurentElem):
            return self._laurent(value)
        if isinstance(value, TorusElem):
            return self.torus(value)
        if isinstance(value, int):
            return LaurentElem.const(value)
        raise TypeError(f"cannot apply a coefficient map to {type(value).__name__}")

    def _laurent(self, value: LaurentElem) -> LaurentElem:
        # simultaneous substitution, so source and target symbols may overlap
        if not self.assignment or not set(value.syms) & set(self.assignment):
            return value
        images = {s: self.assignment[s].monomial_exponents() for s in value.syms if s in self.assignment}
        out = LaurentElem.zero()
        for k, c in value.terms.items():
            q2 = k[0]
            exps: dict = {}
            sign = 1
            for s, e in zip(value.syms, k[1:]):
                if not e:
                    continue
                if s not in images:
                    exps[s] = exps.get(s, 0) + e
                    continue
                iq2, iexps, ic = images[s]
                if (iq2 * e) % 2 or any((d * e) % 2 for d in iexps.values()) or (ic == -1 and e % 2):
                    raise ValueError(f"half power of the image of {s}")
                q2 += iq2 * e // 2
                sign *= ic ** (e // 2)
                for t, d in iexps.items():
                    exps[t] = exps.get(t, 0) + d * e // 2
            out = out + LaurentElem.monomial(exps, q2=q2, coeff=sign * c)
        return out

    def trop(self, m: TropMonomial) -> TropMonomial:
        img = self(m.to_laurent())
        q2, exps, c = img.monomial_exponents()
        if q2 or c != 1:
            raise ValueError("monomial image carries a scalar factor")
        return TropMonomial.from_map(exps)

    def torus(self, elem: TorusElem, rescale: Sequence | None = None) -> TorusElem:
        """Apply to coefficients; multiply ``B_l`` by ``prod M_i^{l_i}`` if given."""
        out = TorusElem(elem.lattice)
        for lam, c in elem.coefficients().items():
            c = self(c)
            if rescale is not None:
                for m, e in zip(rescale, lam):
                    if e:
                        c = c * _as_laurent(m) ** e
            out = out + TorusElem.basis(elem.lattice, lam, c)
        return out

    def compose(self, inner: "CoeffHom") -> "CoeffHom":
        """``self o inner``."""
        out = {s: self(v) for s, v in inner.assignment.items()}
        for s, v in self.assignment.items():
            out.setdefault(s, v)
        return CoeffHom(out)


def principal_specialization(t: Triangulation, w: WallSystem) -> CoeffHom:
    """Map from principal-wall coefficients to those of ``w``.

    ``z+[alpha]`` goes to the product over walls of
    ``z+[l]^[-x_alpha(plus)]_+ z-[l]^[-x_alpha(minus)]_+``; ``z-[alpha]``
    uses ``[+x]_+``.
    """
    if w.base != t:
        raise ValueError("wall system on a different triangulation")
    out = {}
    for i, alpha in enumerate(t.interior):
        for sym, sign in ((zp(alpha), -1), (zm(alpha), 1)):
            m = {}
            for wall in w.walls:
                for kind, c in (("z+", wall.plus), ("z-", wall.minus)):
                    if c is None:
                        continue
                    e = max(sign * c.x[i], 0)
                    if e:
                        s = Symbol(kind, wall.label)
                        m[s] = m.get(s, 0) + 2 * e
            out[sym] = TropMonomial.from_map(m)
    return CoeffHom(out)


@dataclass
class QuasiReport:
    ok: bool = True
    failures: list = field(default_factory=list)

    def fail(self, what: str):
        self.ok = False
        self.failures.append(what)


def _rescale_vector(seed: QuantumSeed, rescale: Mapping | None) -> list:
    rescale = rescale or {}
    return [_as_laurent(rescale.get(a, 1)) for a in seed.labels]


def check_quasi(
    source: QuantumSeed,
    target: QuantumSeed,
    psi: CoeffHom,
    rescale: Mapping | None = None,
    initial_rescale: Mapping | None = None,
) -> QuasiReport:
    """Check both quasi-homomorphism conditions at one seed.

    Source variables are pushed through the torus map defined by ``psi`` and
    ``initial_rescale`` (defaults to ``rescale``, which is right at the
    initial seed). Then ``Psi(A_a) = M_a Abar_a`` for every index and
    ``Psi(yhat_a) = yhatbar_a`` for every mutable index.
    """
    rep = QuasiReport()
    if (source.labels, source.uf, source.eps, source.pi) != (target.labels, target.uf, target.eps, target.pi):
        rep.fail("seeds differ in index sets or matrices")
        return rep
    if source.lattice != target.lattice:
        rep.fail("seeds live in different initial tori")
        return rep
    init = _rescale_vector(source, initial_rescale if initial_rescale is not None else rescale)
    now = _rescale_vector(source, rescale)

    def push(elem):
        return psi.torus(elem, init)

    for a, m, x, y in zip(source.labels, now, source.frame, target.frame):
        if push(x) != m * y:
            rep.fail(f"variable {a}: image is not {m} times the target variable")
    for a in source.uf:
        try:
            lhs, rhs = push(yhat(source, a)), yhat(target, a)
            same = lhs == rhs
        except NotDivisible:
            same = _yhat_cross_check(source, target, a, push, psi)
        if not same:
            rep.fail(f"yhat {a}: images differ")
    return rep


def _yhat_cross_check(source, target, a, push, psi) -> bool:
    # with yhat = r A(v+) A(v-)^-1, equality is
    # Abar(v-) Psi(A(v+)) = R q^{<v-,v+>} Abar(v+) Psi(A(v-)), R = rbar / psi(r)
    row = source.row(a)
    vp = [max(e, 0) for e in row]
    vm = [max(-e, 0) for e in row]
    pp, pm = source.p[source.uf.index(a)]
    tp, tm = target.p[target.uf.index(a)]
    ratio = (tp / tm).to_laurent() * psi(pm.to_laurent()) * psi(pp.to_laurent()).inverse()
    n = len(vp)
    q2 = 2 * sum(vm[i] * source.pi[i][j] * vp[j] for i in range(n) for j in range(n))
    lhs = frame_product(target, vm) * push(frame_product(source, vp))
    rhs = (ratio * LaurentElem.qpow(q2)) * (frame_product(target, vp) * push(frame_product(source, vm)))
    return lhs == rhs


def infer_rescale(source: QuantumSeed, target: QuantumSeed, psi: CoeffHom, initial_rescale: Mapping | None = None):
    """Monomials ``M_a`` with ``Psi(A_a) = M_a Abar_a``, or None where none exists."""
    init = _rescale_vector(source, initial_rescale)
    out = {}
    for a, x, y in zip(source.labels, source.frame, target.frame):
        img = psi.torus(x, init)
        try:
            quo = divide_exact(img, y)
        except NotDivisible:
            out[a] = None
            continue
        coeffs = quo.coefficients()
        zero = (0,) * len(source.labels)
        if list(coeffs) == [zero] and coeffs[zero].is_monomial():
            out[a] = coeffs[zero]
        else:
            out[a] = None
    return out


def check_quasi_along(
    source: QuantumSeed,
    target: QuantumSeed,
    psi: CoeffHom,
    flips: Iterable,
    initial_rescale: Mapping | None = None,
) -> QuasiReport:
    """Mutate both seeds in step and check every seed on the way.

    Rescaling monomials after the first flip are recovered by exact division
    and must be single monomials.
    """
    initial_rescale = dict(initial_rescale or {})
    rep = check_quasi(source, target, psi, initial_rescale, initial_rescale)
    for k in flips:
        source, target = mutate_seed(source, k), mutate_seed(target, k)
        rescale = infer_rescale(source, target, psi, initial_rescale)
        missing = [a for a, m in rescale.items() if m is None]
        if missing:
            rep.fail(f"after flipping {k}: variables {missing} are not proportional")
            continue
        sub = check_quasi(source, target, psi, rescale, initial_rescale)
        for f in sub.failures:
            rep.fail(f"after flipping {k}: {f}")
    return rep


def _minus_assignment(syms: Iterable[Symbol]) -> dict:
    return {s: 1 for s in syms if s.kind in ("z-", "u-")}


def _map_coefficients(obj, fn):
    if isinstance(obj, LaurentElem):
        return fn(obj)
    if isinstance(obj, TropMonomial):
        img = fn(obj.to_laurent())
        return TropMonomial.from_map(img.monomial_exponents()[1])
    if isinstance(obj, TorusElem):
        return obj.map_coefficients(fn)
    if isinstance(obj, QuantumSeed):
        frame = tuple(x.map_coefficients(fn) for x in obj.frame)
        p = tuple((_map_coefficients(a, fn), _map_coefficients(b, fn)) for a, b in obj.p)
        return replace(obj, frame=frame, p=p)
    if isinstance(obj, dict):
        return {k: tuple(_map_coefficients(v, fn) for v in pair) for k, pair in obj.items()}
    raise TypeError(f"cannot specialize {type(obj).__name__}")


def specialize_minus(obj):
    """Set every ``z-[j]`` (and ``u-[j]``) to 1."""
    return _map_coefficients(obj, lambda c: specialize(c, _minus_assignment(c.syms)))


def forget_walls(obj):
    """Set every ``z+-[j]`` to 1."""
    return _map_coefficients(obj, lambda c: specialize(c, {s: 1 for s in c.syms if s.kind in ("z+", "z-")}))


def positivity_check(values: Iterable) -> bool:
    """True iff every coefficient of every value is a nonnegative integer."""
    for v in values:
        if isinstance(v, TorusElem):
            coeffs = v.terms.values()
        else:
            coeffs = _as_laurent(v).terms.values()
        if any(c < 0 for c in coeffs):
            return False
    return True
