"""Quantum seeds with coefficients and their mutations.

Cluster variables are always kept as elements of the initial quantum torus,
so each mutation is an exact division there. A seed built from a
triangulation remembers it (and its wall system or lamination, if any) and
recomputes coefficients from the flipped geometry.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

from .coefrw import LaurentElem, TropMonomial
from .lamination import MultiLamination, lam_coeffs, rescale_prefix
from .qtorus import SkewLattice, TorusElem, divide_exact
from .surface import Triangulation, compatibility_matrix, exchange_matrix, flip
from .walls import WallSystem, is_normalized, wall_coeffs

__all__ = [
    "QuantumSeed",
    "MutationState",
    "NonNormalizedWithoutGeometry",
    "seed_from_triangulation",
    "seed_from_matrices",
    "mutate_matrices",
    "frame_product",
    "exchange_rhs",
    "mutate_seed",
    "expand_along",
    "yhat",
    "check_compatibility",
    "compatibility_degrees",
    "frame_commutation_errors",
]


class NonNormalizedWithoutGeometry(ValueError):
    """Mutated coefficients are not determined without wall or lamination data."""


@dataclass(frozen=True)
class QuantumSeed:
    labels: tuple
    uf: tuple
    eps: tuple
    pi: tuple
    frame: tuple
    p: tuple
    triangulation: Triangulation | None = field(default=None, compare=False)
    source: object = field(default=None, compare=False)

    @property
    def lattice(self) -> SkewLattice:
        return self.frame[0].lattice

    def var(self, label) -> TorusElem:
        return self.frame[self.labels.index(str(label))]

    def coeffs(self) -> dict:
        return dict(zip(self.uf, self.p))

    def row(self, k) -> tuple:
        return self.eps[self.uf.index(str(k))]

    def same_data(self, other: "QuantumSeed") -> bool:
        """Equal matrices, frames and coefficients (labels compared as sets of pairs)."""
        return (
            self.labels == other.labels
            and self.uf == other.uf
            and self.eps == other.eps
            and self.pi == other.pi
            and self.frame == other.frame
            and self.p == other.p
        )


@dataclass(frozen=True)
class MutationState:
    seed: QuantumSeed
    history: tuple = ()

    @property
    def initial_lattice(self) -> SkewLattice:
        return self.seed.lattice

    def mutate(self, k, sign: int = 1) -> "MutationState":
        return MutationState(mutate_seed(self.seed, k, sign), self.history + (str(k),))


def _tuplize(m) -> tuple:
    return tuple(tuple(int(v) for v in row) for row in m)


def seed_from_matrices(labels, uf, eps, pi, p=None) -> QuantumSeed:
    """Seed with the standard frame of the torus defined by ``pi``."""
    labels = tuple(str(v) for v in labels)
    uf = tuple(str(v) for v in uf)
    lattice = SkewLattice(_tuplize(pi))
    n = len(labels)
    frame = tuple(TorusElem.basis(lattice, [int(i == j) for j in range(n)]) for i in range(n))
    if p is None:
        p = tuple((TropMonomial.one(), TropMonomial.one()) for _ in uf)
    return QuantumSeed(labels, uf, _tuplize(eps), lattice.form, frame, tuple(p))


def _coeffs_from_source(t: Triangulation, source) -> tuple:
    if source is None:
        return tuple((TropMonomial.one(), TropMonomial.one()) for _ in t.interior)
    if isinstance(source, WallSystem):
        c = wall_coeffs(t, source)
    elif isinstance(source, MultiLamination):
        c = lam_coeffs(t, source)
    else:
        raise TypeError(f"unsupported coefficient source {type(source).__name__}")
    return tuple(c[a] for a in t.interior)


def seed_from_triangulation(t: Triangulation, source=None) -> QuantumSeed:
    """Initial seed of ``t`` with coefficients from a wall system or lamination."""
    if source is not None and source.base != t:
        raise ValueError("coefficient source lives on a different triangulation")
    seed = seed_from_matrices(t.edges, t.interior, exchange_matrix(t), compatibility_matrix(t))
    frame = seed.frame
    if isinstance(source, MultiLamination):
        frame = tuple(rescale_prefix(t, source, e).to_laurent() * a for e, a in zip(t.edges, frame))
    return replace(seed, frame=frame, p=_coeffs_from_source(t, source), triangulation=t, source=source)


def _matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def _transpose(a):
    return [list(r) for r in zip(*a)]


def mutate_matrices(eps, pi, k, sign: int = 1, labels=None, uf=None):
    """``(eps', pi') = (F^T eps E^T, E^T pi E)`` for mutation at ``k``.

    ``k`` is a label when ``labels``/``uf`` are given, otherwise the
    interior position (which must coincide with the column position).
    """
    n = len(pi)
    m = len(eps)
    if labels is None:
        kr = kc = int(k)
    else:
        labels = list(labels)
        kr = list(uf).index(str(k))
        kc = labels.index(str(k))
    row = eps[kr]
    e = [[int(i == j) for j in range(n)] for i in range(n)]
    for i in range(n):
        e[i][kc] = -1 if i == kc else max(0, -sign * row[i])
    f = [[int(i == j) for j in range(m)] for i in range(m)]
    for j in range(m):
        f[kr][j] = -1 if j == kr else max(0, sign * eps[j][kc])
    new_eps = _matmul(_matmul(_transpose(f), eps), _transpose(e))
    new_pi = _matmul(_matmul(_transpose(e), pi), e)
    return _tuplize(new_eps), _tuplize(new_pi)


def frame_product(seed: QuantumSeed, v: Sequence[int]) -> TorusElem:
    """Frame monomial ``q^{-1/2 sum_{i<j} v_i v_j pi_ij} A_1^{v_1} ... A_n^{v_n}``.

    Negative exponents need the corresponding variable to be a unit.
    """
    n = len(seed.labels)
    q2 = -sum(v[i] * v[j] * seed.pi[i][j] for i in range(n) if v[i] for j in range(i + 1, n) if v[j])
    out = TorusElem.scalar(seed.lattice, LaurentElem.qpow(q2))
    for i, vi in enumerate(v):
        if vi > 0:
            out = out * seed.frame[i] ** vi
        elif vi < 0:
            out = out * seed.frame[i].inverse() ** (-vi)
    return out


def _exchange_parts(seed: QuantumSeed, k):
    row = seed.row(k)
    kc = seed.labels.index(str(k))
    vp = [max(e, 0) for e in row]
    vm = [max(-e, 0) for e in row]
    qp = sum(v * seed.pi[kc][j] for j, v in enumerate(vp))
    qm = sum(v * seed.pi[kc][j] for j, v in enumerate(vm))
    pp, pm = seed.p[seed.uf.index(str(k))]
    return (pp, qp, vp), (pm, qm, vm)


def exchange_rhs(seed: QuantumSeed, k) -> TorusElem:
    """``p+ q^{..} A(sum [eps]_+ f) + p- q^{..} A(sum [-eps]_+ f)``."""
    total = TorusElem(seed.lattice)
    for coeff, q2, v in _exchange_parts(seed, k):
        total = total + (coeff.to_laurent() * LaurentElem.qpow(q2)) * frame_product(seed, v)
    return total


def _trop_inverse_sum(r: TropMonomial):
    one_plus = r + TropMonomial.one()
    return r / one_plus, TropMonomial.one() / one_plus


def _rule_coeffs(seed: QuantumSeed, k) -> tuple:
    if not is_normalized(seed.coeffs()):
        raise NonNormalizedWithoutGeometry(
            "coefficients of a non-normalized seed need wall or lamination data to mutate"
        )
    kr = seed.uf.index(str(k))
    kc = seed.labels.index(str(k))
    pk_plus, pk_minus = seed.p[kr]
    out = []
    for i, (pp, pm) in enumerate(seed.p):
        if i == kr:
            out.append((pk_minus, pk_plus))
            continue
        e = seed.eps[i][kc]
        r = pp / pm
        r = r * (pk_plus ** e if e >= 0 else pk_minus ** e)
        out.append(_trop_inverse_sum(r))
    return tuple(out)


def mutate_seed(seed, k, sign: int = 1):
    """Mutate at ``k``; accepts a :class:`QuantumSeed` or :class:`MutationState`.

    The new variable ``A'`` solves ``A_k A' = exchange_rhs`` exactly in the
    initial torus; :class:`NotDivisible` propagates if it does not exist.
    """
    if isinstance(seed, MutationState):
        return seed.mutate(k, sign)
    k = str(k)
    if k not in seed.uf:
        raise ValueError(f"{k} is not a mutable index")
    kc = seed.labels.index(k)
    rhs = exchange_rhs(seed, k)
    new_var = divide_exact(rhs, seed.frame[kc], den_left=True)
    eps, pi = mutate_matrices(seed.eps, seed.pi, k, sign, seed.labels, seed.uf)
    frame = seed.frame[:kc] + (new_var,) + seed.frame[kc + 1:]
    t = seed.triangulation
    source = seed.source
    if t is not None:
        t, _ = flip(t, k)
        if source is not None:
            source = source.mutate(k)
            p = _coeffs_from_source(t, source)
        else:
            p = seed.p
    else:
        p = _rule_coeffs(seed, k)
    return QuantumSeed(seed.labels, seed.uf, eps, pi, frame, p, t, source)


def expand_along(seed, flips: Sequence, target) -> TorusElem:
    """Laurent expansion of ``target`` after the flip sequence."""
    if isinstance(seed, MutationState):
        seed = seed.seed
    for k in flips:
        seed = mutate_seed(seed, k)
    return seed.var(target)


def yhat(seed: QuantumSeed, alpha) -> TorusElem:
    """``(p+/p-) A(sum_beta eps_{alpha beta} f_beta)``; needs unit frame entries
    wherever the exponent is negative."""
    pp, pm = seed.p[seed.uf.index(str(alpha))]
    return (pp / pm).to_laurent() * frame_product(seed, seed.row(alpha))


def check_compatibility(seed: QuantumSeed) -> list:
    """Pairs ``(alpha, gamma)`` where ``sum_k eps_{alpha k} pi_{k gamma}`` is off.

    Diagonal entries must be positive, everything else zero.
    """
    bad = []
    n = len(seed.labels)
    for i, alpha in enumerate(seed.uf):
        for j, gamma in enumerate(seed.labels):
            s = sum(seed.eps[i][k] * seed.pi[k][j] for k in range(n))
            if gamma == alpha:
                if s <= 0:
                    bad.append((alpha, gamma))
            elif s:
                bad.append((alpha, gamma))
    return bad


def compatibility_degrees(seed: QuantumSeed) -> dict:
    n = len(seed.labels)
    return {
        a: sum(seed.eps[i][k] * seed.pi[k][seed.labels.index(a)] for k in range(n)) for i, a in enumerate(seed.uf)
    }


def frame_commutation_errors(seed: QuantumSeed) -> list:
    """Pairs whose frame elements fail ``A_i A_j = q^{pi_ij} A_j A_i``."""
    bad = []
    n = len(seed.labels)
    for i in range(n):
        for j in range(i + 1, n):
            left = seed.frame[i] * seed.frame[j]
            right = LaurentElem.qpow(2 * seed.pi[i][j]) * (seed.frame[j] * seed.frame[i])
            if left != right:
                bad.append((seed.labels[i], seed.labels[j]))
    return bad

