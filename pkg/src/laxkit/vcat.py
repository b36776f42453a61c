"""Small V-categories, V-functors, V-modules and the module of a functor."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .quantale import Quantale
from .report import DEFAULT_CAP, LawReport, StructureError
from .vrel import FinMap, FinSet, VRel, all_vrels, cograph, compose, identity, rel_le


@dataclass(frozen=True)
class VCat:
    carrier: FinSet
    hom: VRel

    def __post_init__(self):
        if self.hom.source != self.carrier or self.hom.target != self.carrier:
            raise StructureError("structure relation must be an endo-relation on the carrier")

    @property
    def quantale(self) -> Quantale:
        return self.hom.quantale


@dataclass(frozen=True)
class VMod:
    source: VCat
    target: VCat
    rel: VRel


def is_reflexive(a: VRel) -> bool:
    return rel_le(identity(a.source, a.quantale), a)


def is_transitive(a: VRel) -> bool:
    return rel_le(compose(a, a), a)


def check_vcat(X: FinSet, a: VRel) -> bool:
    if a.source != X or a.target != X:
        raise StructureError("structure relation does not live on X")
    return is_reflexive(a) and is_transitive(a)


def vcat_report(X: FinSet, a: VRel) -> LawReport:
    rep = LawReport("vcat")
    Q = a.quantale
    n = len(X)
    M = a.matrix
    rep.check(
        "reflexive",
        range(n),
        lambda i: Q.leq[Q.unit][M[i][i]],
        lambda i: f"x={X[i]} a(x,x)={Q.labels[M[i][i]]}",
    )
    rep.check(
        "transitive",
        ((i, j, l) for i in range(n) for j in range(n) for l in range(n)),
        lambda i, j, l: Q.leq[Q.t[M[i][j]][M[j][l]]][M[i][l]],
        lambda i, j, l: f"x={X[i]} y={X[j]} z={X[l]}",
    )
    return rep


def check_vfunctor(f: FinMap, A: VCat, B: VCat) -> bool:
    """``a(x, y) <= b(f x, f y)`` for all x, y."""
    if f.source != A.carrier or f.target != B.carrier:
        raise StructureError("map boundaries do not match the V-categories")
    Q = A.quantale
    idx = [B.carrier.index(y) for y in f.images]
    a, b = A.hom.matrix, B.hom.matrix
    return all(Q.leq[a[i][j]][b[idx[i]][idx[j]]] for i in range(len(idx)) for j in range(len(idx)))


def induced_order(A: VCat) -> tuple[tuple[bool, ...], ...]:
    """``x <= y`` iff ``k <= a(x, y)``, as a boolean matrix."""
    Q = A.quantale
    return tuple(tuple(Q.leq[Q.unit][v] for v in row) for row in A.hom.matrix)


def is_preorder(order) -> bool:
    n = len(order)
    return all(order[i][i] for i in range(n)) and all(
        order[i][l] or not (order[i][j] and order[j][l]) for i in range(n) for j in range(n) for l in range(n)
    )


def is_partial_order(order) -> bool:
    n = len(order)
    return is_preorder(order) and all(
        i == j or not (order[i][j] and order[j][i]) for i in range(n) for j in range(n)
    )


def check_vmodule(r: VRel, A: VCat, B: VCat) -> bool:
    """``r . a = r`` and ``b . r = r`` for ``r: (X, a) -|-> (Y, b)``."""
    if r.source != A.carrier or r.target != B.carrier:
        raise StructureError("module boundaries do not match")
    return compose(r, A.hom) == r and compose(B.hom, r) == r


def module_of_functor(f: FinMap, A: VCat, B: VCat) -> VMod:
    """``f^* = f^o . b : (Y, b) -|-> (X, a)``, so ``f^*(y, x) = b(y, f x)``."""
    if f.source != A.carrier or f.target != B.carrier:
        raise StructureError("map boundaries do not match the V-categories")
    return VMod(B, A, compose(cograph(f, A.quantale), B.hom))


def compose_modules(s: VMod, r: VMod) -> VMod:
    if r.target != s.source:
        raise StructureError("modules do not compose")
    return VMod(r.source, s.target, compose(s.rel, r.rel))


def discrete(X: FinSet, Q: Quantale) -> VCat:
    return VCat(X, identity(X, Q))


def all_vcats(X: FinSet, Q: Quantale, cap: int = DEFAULT_CAP) -> Iterator[VCat]:
    for a in all_vrels(X, X, Q, cap):
        if check_vcat(X, a):
            yield VCat(X, a)
