import itertools

import pytest

from laxkit.finmonad import Enrichment, FilterMonad, PVMonad, PowersetMonad, identity_morphism, two_to_filter, two_to_powerset
from laxkit.laxalg import (
    algebra_to_monoid,
    change_of_enrichment,
    check_cats_mons_iso,
    check_change_of_enrichment,
    check_lax_algebras,
    check_two_enrichment_order,
    count_preorders,
    count_table,
    count_topologies,
    crosscheck_counts,
    enumerate_kleisli_monoids,
    enumerate_lax_algebras,
    is_kleisli_monoid,
    is_lax_algebra,
    is_monoid_hom,
    is_tv_functor,
)
from laxkit.laxext import barr_ultrafilter_extension, identity_extension
from laxkit.quantale import LaxHom, canonical_two_embedding, chain_min, two
from laxkit.report import StructureError
from laxkit.urel import Context, PresheafMonad, kleisli_context, unit_sharp
from laxkit.vrel import FinMap, all_maps, fset

from oracles import preorders

B = two()
C3 = chain_min(3)

# preorders (equivalently finite topologies) on 0..4 points, by the oracles below
PREORDER_COUNTS = [1, 1, 4, 29, 355]


def powerset_enr():
    P = PowersetMonad()
    return Enrichment(P, two_to_powerset(PVMonad(B), P))


def filter_enr():
    F = FilterMonad()
    return Enrichment(F, two_to_filter(PVMonad(B), F))


def _topologies_oracle(n):
    subsets = [frozenset(c) for k in range(n + 1) for c in itertools.combinations(range(n), k)]
    full, empty = frozenset(range(n)), frozenset()
    middle = [s for s in subsets if s not in (full, empty)]
    count = 0
    for bits in itertools.product((0, 1), repeat=len(middle)):
        fam = {full, empty} | {s for s, b in zip(middle, bits) if b}
        if all(a | b in fam and a & b in fam for a in fam for b in fam):
            count += 1
    return count


@pytest.mark.parametrize("n", range(5))
def test_frozen_counts(n):
    assert len(preorders(n)) == PREORDER_COUNTS[n]
    assert count_preorders(n) == PREORDER_COUNTS[n]
    assert count_topologies(n) == PREORDER_COUNTS[n]


@pytest.mark.parametrize("n", range(4))
def test_topology_oracle(n):
    assert _topologies_oracle(n) == PREORDER_COUNTS[n]


def test_identity_algebras_are_preorders():
    ctx = Context(identity_extension(B))
    for n in range(4):
        X = fset(n)
        algs = enumerate_lax_algebras(ctx, X)
        got = {frozenset((i, j) for i in range(n) for j in range(n) if a.rel.matrix[i][j]) for a in algs}
        assert got == set(preorders(n))


def test_barr_algebras_count_preorders():
    ctx = Context(barr_ultrafilter_extension(B))
    assert [len(enumerate_lax_algebras(ctx, fset(n))) for n in range(4)] == PREORDER_COUNTS[:4]


def test_empty_carrier_has_one_structure():
    for ctx in (Context(identity_extension(C3)), kleisli_context(powerset_enr())):
        assert len(enumerate_lax_algebras(ctx, fset(0))) == 1
    assert len(enumerate_kleisli_monoids(filter_enr(), fset(0))) == 1


@pytest.mark.parametrize(
    "make",
    [lambda: Context(identity_extension(B)), lambda: Context(identity_extension(C3)),
     lambda: kleisli_context(powerset_enr()), lambda: Context(barr_ultrafilter_extension(B))],
    ids=["identity-two", "identity-chain3", "kleisli-powerset", "barr-two"],
)
def test_algebra_invariants(make):
    ctx = make()
    sizes = (0, 1) if ctx.V.n > 2 else (0, 1, 2)
    assert check_lax_algebras(ctx, sizes).passed
    for n in sizes:
        X = fset(n)
        assert is_lax_algebra(unit_sharp(ctx, X))


def test_functor_condition_identity_context():
    ctx = Context(identity_extension(B))
    X = fset(2)
    algs = enumerate_lax_algebras(ctx, X)
    for a in algs:
        for b in algs:
            for f in all_maps(X, X):
                monotone = all(
                    not a.rel.matrix[i][j] or b.rel.matrix[X.index(f(x))][X.index(f(y))]
                    for i, x in enumerate(X)
                    for j, y in enumerate(X)
                )
                assert is_tv_functor(f, a, b) == monotone


def test_functor_boundary_errors():
    ctx = Context(identity_extension(B))
    a = unit_sharp(ctx, fset(2))
    with pytest.raises(StructureError):
        is_tv_functor(FinMap.identity(fset(1)), a, a)
    with pytest.raises(StructureError):
        is_tv_functor(FinMap.identity(fset(2)), a, unit_sharp(Context(identity_extension(B)), fset(2)))


def test_powerset_monoids_are_up_set_maps():
    enr = powerset_enr()
    X = fset(2)
    mons = enumerate_kleisli_monoids(enr, X)
    assert len(mons) == 4
    found = set()
    for nu in mons:
        rel = frozenset((i, j) for i, x in enumerate(X) for j, y in enumerate(X) if y in nu(x))
        found.add(rel)
    assert found == set(preorders(2))
    assert is_kleisli_monoid(enr, X, enr.T.unit_map(X))


def test_filter_monoids_count_topologies():
    enr = filter_enr()
    assert [len(enumerate_kleisli_monoids(enr, fset(n))) for n in range(4)] == PREORDER_COUNTS[:4]


def test_monoid_hom_identity():
    enr = filter_enr()
    X = fset(2)
    for nu in enumerate_kleisli_monoids(enr, X):
        assert is_monoid_hom(enr, FinMap.identity(X), nu, nu)


def test_non_monoid_rejected():
    enr = powerset_enr()
    X = fset(2)
    empty = FinMap(X, enr.T.obj(X), [frozenset(), frozenset()])
    assert not is_kleisli_monoid(enr, X, empty)
    with pytest.raises(StructureError):
        is_kleisli_monoid(enr, X, FinMap.identity(X))


def test_cats_mons_identity_context():
    rep = check_cats_mons_iso(Context(identity_extension(B)), sizes=(0, 1, 2))
    assert rep.passed
    assert rep["count-2"].cases == 4
    assert rep["morphisms-correspond"].cases > 0


def test_cats_mons_powerset_context():
    rep = check_cats_mons_iso(kleisli_context(powerset_enr()), sizes=(0, 1))
    assert rep.passed


def test_algebra_to_monoid_columns():
    ctx = Context(identity_extension(B))
    Pi = PresheafMonad(ctx)
    X = fset(2)
    for a in enumerate_lax_algebras(ctx, X):
        nu = algebra_to_monoid(a, Pi)
        for j, x in enumerate(X):
            assert tuple(r[0] for r in nu(x).matrix) == tuple(row[j] for row in a.rel.matrix)


def _pv_enr(V):
    PV = PVMonad(V)
    return Enrichment(PV, identity_morphism(PV))


def test_change_of_enrichment_chain3_to_two():
    rep = check_change_of_enrichment(_pv_enr(C3), canonical_two_embedding(C3), sizes=(0, 1))
    assert rep.passed
    assert rep["bijection-1"].cases > 0


def test_change_of_enrichment_trivial():
    enr = _pv_enr(B)
    h = canonical_two_embedding(B)
    assert check_change_of_enrichment(enr, h, sizes=(0, 1, 2)).passed
    assert check_two_enrichment_order(powerset_enr(), h).passed


def test_change_of_enrichment_refuses_bad_hom():
    with pytest.raises(StructureError):
        change_of_enrichment(_pv_enr(B), LaxHom(C3, B, (0, 1, 0)))
    with pytest.raises(StructureError):
        change_of_enrichment(_pv_enr(C3), LaxHom(C3, B, (0, 0, 1)))


def test_crosscheck_and_table():
    contexts = {"identity": Context(identity_extension(B)), "barr": Context(barr_ultrafilter_extension(B))}
    monoids = {"filter": filter_enr(), "powerset": powerset_enr()}
    rep = crosscheck_counts(contexts, monoids, sizes=(0, 1, 2, 3))
    assert rep.passed
    table = count_table(contexts, monoids, (2,))
    assert all(count == 4 for _, _, count in table)
    assert [name for name, _, _ in table] == ["preorders", "topologies", "algebras:identity", "algebras:barr", "monoids:filter", "monoids:powerset"]


def test_change_of_enrichment_with_equal_quantale_copy():
    # the embedding may target a separately constructed copy of the quantale
    assert check_change_of_enrichment(_pv_enr(C3), canonical_two_embedding(chain_min(3)), sizes=(0, 1)).passed
