"""Lax algebras, Kleisli monoids and the counting cross-checks between them."""

from __future__ import annotations

import itertools
from typing import Sequence

from .finmonad import (
    Enrichment,
    compose_morphisms,
    lax_hom_morphism,
)
from .quantale import LaxHom
from .report import DEFAULT_CAP, CapExceeded, LawReport, StructureError
from .urel import (
    Context,
    PresheafEnrichment,
    PresheafMonad,
    TVRel,
    all_tvrels,
    column,
    convolve,
    is_unitary,
    kleisli_context,
    nbhd,
    unit_sharp,
)
from .vrel import FinMap, FinSet, all_maps, cograph, compose_all, fset, graph, rel_le

ALGEBRA_CAP = 2 ** 18


# -- lax algebras -------------------------------------------------------------


def is_lax_algebra(a: TVRel) -> bool:
    """``1^# <= a`` and ``a o a <= a``."""
    if a.source != a.target:
        raise StructureError("a lax algebra structure is an endo-relation")
    return unit_sharp(a.ctx, a.source) <= a and convolve(a, a) <= a


def is_tv_functor(f: FinMap, a: TVRel, b: TVRel) -> bool:
    """``a <= f^o . b . Tf``"""
    if a.ctx is not b.ctx:
        raise StructureError("structures from different contexts")
    if f.source != a.source or f.target != b.source:
        raise StructureError("map does not match the carriers")
    ctx = a.ctx
    Tf = ctx.T.fmap_map(f)
    return rel_le(a.rel, compose_all(cograph(f, ctx.V), b.rel, graph(Tf, ctx.V)))


def enumerate_lax_algebras(ctx: Context, X: FinSet, cap: int = ALGEBRA_CAP) -> list[TVRel]:
    """All lax algebra structures on ``X`` in canonical (matrix) order."""
    out = []
    for a in all_tvrels(ctx, X, X, cap):
        if is_lax_algebra(a):
            out.append(a)
    return out


def check_lax_algebras(ctx: Context, sizes: Sequence[int] = (0, 1, 2), cap: int = ALGEBRA_CAP) -> LawReport:
    """Every enumerated lax algebra is unitary and idempotent; identity maps are (T,V)-functors."""
    rep = LawReport(f"lax-algebras:{ctx.name}")
    algs = [a for n in sizes for a in enumerate_lax_algebras(ctx, fset(n), cap)]
    rep.check("discrete-is-algebra", [fset(n) for n in sizes], lambda X: is_lax_algebra(unit_sharp(ctx, X)), lambda X: f"|X|={len(X)}")
    rep.check("unitary", algs, is_unitary, lambda a: f"a={a.rel.pretty()}")
    rep.check("idempotent", algs, lambda a: convolve(a, a) == a, lambda a: f"a={a.rel.pretty()}")
    rep.check(
        "identity-functor",
        algs,
        lambda a: is_tv_functor(FinMap.identity(a.source), a, a),
        lambda a: f"a={a.rel.pretty()}",
    )
    return rep


# -- Kleisli monoids ----------------------------------------------------------


def _le_maps(enr: Enrichment, X: FinSet, f: FinMap, g: FinMap) -> bool:
    order = enr.order(X)
    TX = enr.T.obj(X)
    return all(order[TX.index(p)][TX.index(q)] for p, q in zip(f.images, g.images))


def is_kleisli_monoid(enr: Enrichment, X: FinSet, nu: FinMap) -> bool:
    """``e_X <= nu`` and ``nu <> nu <= nu`` in the order on ``TX``."""
    TX = enr.T.obj(X)
    if nu.source != X or nu.target != TX:
        raise StructureError("a Kleisli monoid structure is a map X -> TX")
    return _le_maps(enr, X, enr.T.unit_map(X), nu) and _le_maps(enr, X, enr.kleisli(nu, nu), nu)


def is_monoid_hom(enr: Enrichment, f: FinMap, nu: FinMap, xi: FinMap) -> bool:
    """``Tf . nu <= xi . f``"""
    X, Y = f.source, f.target
    T = enr.T
    lhs = FinMap(X, T.obj(Y), [T.fmap(f, t) for t in nu.images])
    rhs = FinMap(X, T.obj(Y), [xi(f(x)) for x in X])
    return _le_maps(enr, Y, lhs, rhs)


def enumerate_kleisli_monoids(enr: Enrichment, X: FinSet, cap: int = DEFAULT_CAP) -> list[FinMap]:
    TX = enr.T.obj(X)
    if len(TX) ** len(X) > cap:
        raise CapExceeded(f"maps from a {len(X)}-point set into TX", len(TX) ** len(X), cap)
    return [nu for nu in all_maps(X, TX) if is_kleisli_monoid(enr, X, nu)]


# -- independent oracles ------------------------------------------------------


def count_preorders(n: int) -> int:
    """Reflexive transitive relations on an ``n``-set, by brute force over off-diagonal bits."""
    off = [(i, j) for i in range(n) for j in range(n) if i != j]
    count = 0
    for bits in itertools.product((False, True), repeat=len(off)):
        rel = {p for p, b in zip(off, bits) if b} | {(i, i) for i in range(n)}
        if all((i, l) in rel for (i, j) in rel for (j2, l) in rel if j == j2):
            count += 1
    return count


def count_topologies(n: int) -> int:
    """Families of subsets of an ``n``-set containing both extremes and closed under union and intersection."""
    full = (1 << n) - 1
    middle = [s for s in range(1 << n) if s not in (0, full)]
    count = 0
    for bits in itertools.product((False, True), repeat=len(middle)):
        fam = {0, full} | {s for s, b in zip(middle, bits) if b}
        if all((a | b) in fam and (a & b) in fam for a in fam for b in fam):
            count += 1
    return count


# -- Cats(T,V) against Mons(Π) ------------------------------------------------


def algebra_to_monoid(a: TVRel, Pi: PresheafMonad) -> FinMap:
    """``x |-> x^o . a``, a map ``X -> ΠX``."""
    X = a.source
    return FinMap(X, Pi.obj(X), [column(a, x).rel for x in X])


def check_cats_mons_iso(ctx: Context, sizes: Sequence[int] = (0, 1, 2), cap: int = ALGEBRA_CAP, pair_cap: int = 4096) -> LawReport:
    """Lax algebras on ``X`` and Kleisli monoids of ``(Π, pi)`` on ``X`` correspond, and so do their morphisms."""
    Pi = PresheafMonad(ctx)
    penr = PresheafEnrichment(Pi)
    rep = LawReport(f"cats-mons:{ctx.name}")
    sets = [fset(n) for n in sizes]
    algs = {X: enumerate_lax_algebras(ctx, X, cap) for X in sets}
    mons = {X: enumerate_kleisli_monoids(penr, X, cap) for X in sets}

    def bijective(X):
        images = [algebra_to_monoid(a, Pi) for a in algs[X]]
        return len(set(images)) == len(images) and set(images) == set(mons[X])

    rep.check(
        "objects-bijective",
        sets,
        bijective,
        lambda X: f"|X|={len(X)} algebras={len(algs[X])} monoids={len(mons[X])}",
    )

    def hom_cases():
        for X in sets:
            for Y in sets:
                if len(algs[X]) * len(algs[Y]) * len(Y) ** len(X) > pair_cap:
                    continue
                for f in all_maps(X, Y):
                    for a in algs[X]:
                        for b in algs[Y]:
                            yield f, a, b

    rep.check(
        "morphisms-correspond",
        hom_cases(),
        lambda f, a, b: is_tv_functor(f, a, b) == is_monoid_hom(penr, f, algebra_to_monoid(a, Pi), algebra_to_monoid(b, Pi)),
        lambda f, a, b: f"f={f!r} a={a.rel.pretty()} b={b.rel.pretty()}",
    )
    for X in sets:
        rep.record(f"count-{len(X)}", len(algs[X]) == len(mons[X]), cases=len(algs[X]), note=f"{len(algs[X])} structures")
    return rep


# -- change of enrichment -----------------------------------------------------


def change_of_enrichment(enr: Enrichment, h: LaxHom) -> Enrichment:
    """``(T, tau . P_h)`` for a lax homomorphism ``h : W -> V``; refused if ``h`` is not one."""
    if h.target is not enr.V and h.target.name != enr.V.name:
        raise StructureError("lax homomorphism must land in the enrichment's quantale")
    kappa = lax_hom_morphism(h, PV=enr.PV)
    return Enrichment(enr.T, compose_morphisms(enr.tau, kappa))


def check_change_of_enrichment(enr: Enrichment, h: LaxHom, sizes: Sequence[int] = (0, 1), cap: int = ALGEBRA_CAP) -> LawReport:
    """Lax algebras for both Kleisli extensions match the same Kleisli monoids via nbhd."""
    enrW = change_of_enrichment(enr, h)
    ctxV = kleisli_context(enr)
    ctxW = kleisli_context(enrW)
    rep = LawReport(f"change-of-enrichment:{enr.name}<-{h.source.name}")
    sets = [fset(n) for n in sizes]
    rep.check(
        "same-order",
        sets,
        lambda X: enr.order(X) == enrW.order(X),
        lambda X: f"|X|={len(X)}",
    )
    for X in sets:
        algV = enumerate_lax_algebras(ctxV, X, cap)
        algW = enumerate_lax_algebras(ctxW, X, cap)
        monV = set(enumerate_kleisli_monoids(enr, X))
        viaV = [nbhd(a) for a in algV]
        viaW = [nbhd(a) for a in algW]
        ok = (
            len(algV) == len(algW)
            and len(set(viaV)) == len(viaV)
            and len(set(viaW)) == len(viaW)
            and set(viaV) == set(viaW) == monV
        )
        rep.record(
            f"bijection-{len(X)}",
            ok,
            witness="" if ok else f"V-side={len(algV)} W-side={len(algW)} monoids={len(monV)}",
            cases=len(algV) + len(algW),
            note=f"{len(algV)} structures",
        )
    return rep


def check_two_enrichment_order(enr: Enrichment, h: LaxHom, sizes: Sequence[int] = (0, 1, 2)) -> LawReport:
    """The order on ``TX`` from ``tau`` equals the one from ``tau`` restricted along ``h``."""
    enrW = change_of_enrichment(enr, h)
    rep = LawReport(f"two-enrichment:{enr.name}")
    rep.check(
        "order-equal",
        [fset(n) for n in sizes],
        lambda X: enr.order(X) == enrW.order(X),
        lambda X: f"|X|={len(X)}",
    )
    return rep


# -- counting -----------------------------------------------------------------


def crosscheck_counts(contexts: dict, monoid_enrichments: dict, sizes: Sequence[int] = (0, 1, 2)) -> LawReport:
    """Structure counts per formalism against the preorder and topology oracles."""
    rep = LawReport("crosscheck:top-preorder")
    for n in sizes:
        pre, top = count_preorders(n), count_topologies(n)
        rep.record(f"oracles-agree-{n}", pre == top, witness="" if pre == top else f"{pre} vs {top}", cases=1, note=f"{pre} preorders, {top} topologies")
        X = fset(n)
        for name, ctx in contexts.items():
            c = len(enumerate_lax_algebras(ctx, X))
            rep.record(f"algebras-{name}-{n}", c == pre, witness="" if c == pre else f"count={c}", cases=1, note=f"count {c}")
        for name, enr in monoid_enrichments.items():
            c = len(enumerate_kleisli_monoids(enr, X))
            rep.record(f"monoids-{name}-{n}", c == top, witness="" if c == top else f"count={c}", cases=1, note=f"count {c}")
    return rep


def count_table(contexts: dict, monoid_enrichments: dict, sizes: Sequence[int]) -> list[tuple[str, int, int]]:
    rows = [("preorders", n, count_preorders(n)) for n in sizes]
    rows += [("topologies", n, count_topologies(n)) for n in sizes]
    for name, ctx in contexts.items():
        rows += [(f"algebras:{name}", n, len(enumerate_lax_algebras(ctx, fset(n)))) for n in sizes]
    for name, enr in monoid_enrichments.items():
        rows += [(f"monoids:{name}", n, len(enumerate_kleisli_monoids(enr, fset(n)))) for n in sizes]
    return rows


__all__ = [
    "algebra_to_monoid",
    "change_of_enrichment",
    "check_cats_mons_iso",
    "check_change_of_enrichment",
    "check_lax_algebras",
    "check_two_enrichment_order",
    "count_preorders",
    "count_table",
    "count_topologies",
    "crosscheck_counts",
    "enumerate_kleisli_monoids",
    "enumerate_lax_algebras",
    "is_kleisli_monoid",
    "is_lax_algebra",
    "is_monoid_hom",
    "is_tv_functor",
]
