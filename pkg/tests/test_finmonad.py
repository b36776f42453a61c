import itertools

import pytest

from laxkit.finmonad import (
    CorruptedMultMonad,
    Enrichment,
    FilterMonad,
    IdentityMonad,
    PVMonad,
    PowersetMonad,
    UltrafilterMonad,
    broken_naturality,
    builtin_monads,
    check_enrichment,
    check_monad_laws,
    check_monad_morphism,
    check_power_enriched,
    check_vaction,
    compose_morphisms,
    identity_morphism,
    lax_hom_morphism,
    monad_by_name,
    search_morphisms_to_identity,
    tau_correspondences,
    two_to_filter,
    two_to_powerset,
)
from laxkit.quantale import LaxHom, canonical_two_embedding, chain_min, two
from laxkit.report import StructureError
from laxkit.vcat import VCat, check_vcat, induced_order, is_partial_order
from laxkit.vrel import ONE, all_maps, extension, fset, values, vector

B = two()
C3 = chain_min(3)


def _pv_enrichment(V):
    PV = PVMonad(V)
    return Enrichment(PV, identity_morphism(PV))


def _powerset_enrichment():
    P = PowersetMonad()
    return Enrichment(P, two_to_powerset(PVMonad(B), P))


def _filter_enrichment():
    F = FilterMonad()
    return Enrichment(F, two_to_filter(PVMonad(B), F))


@pytest.mark.parametrize("T", [IdentityMonad(), PowersetMonad(), PVMonad(B), PVMonad(C3), FilterMonad(), UltrafilterMonad()],
                         ids=lambda T: T.name)
def test_builtin_monad_laws(T):
    sizes = (0, 1) if isinstance(T, PVMonad) and T.quantale.n > 2 else (0, 1, 2)
    assert check_monad_laws(T, sizes).passed


def test_catalog_names():
    cat = builtin_monads(C3)
    assert set(cat) == {"identity", "powerset", "pv(chain_min(3))", "filter", "ultrafilter"}
    assert monad_by_name("pv(chain_min(3))").quantale.n == 3
    assert isinstance(monad_by_name("filter_fin"), FilterMonad)
    with pytest.raises(StructureError):
        monad_by_name("list")


def _filters_oracle(n):
    """Families of subsets of range(n) that contain the whole set and are up-closed and meet-closed."""
    subsets = [frozenset(c) for k in range(n + 1) for c in itertools.combinations(range(n), k)]
    full = frozenset(range(n))
    count = 0
    for bits in itertools.product((0, 1), repeat=len(subsets)):
        fam = {s for s, b in zip(subsets, bits) if b}
        if full not in fam:
            continue
        if any(a <= b and b not in fam for a in fam for b in subsets):
            continue
        if any(a & b not in fam for a in fam for b in fam):
            continue
        count += 1
    return count


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_filter_carrier_size(n):
    assert len(FilterMonad().obj(fset(n))) == _filters_oracle(n)


def test_filter_on_two_points_has_four():
    assert len(FilterMonad().obj(fset(2))) == 4


def test_ultrafilter_is_identity_on_points():
    U = UltrafilterMonad()
    for n in range(4):
        X = fset(n)
        assert [u.point for u in U.obj(X)] == list(X)
        assert all(U.unit(X, x).point == x for x in X)


def test_p2_agrees_with_powerset():
    rep = check_power_enriched(_powerset_enrichment())
    assert rep.passed
    alpha = two_to_powerset(PVMonad(B), PowersetMonad())
    assert check_monad_morphism(alpha).passed
    for n in range(3):
        X = fset(n)
        images = [alpha.component(X, phi) for phi in PVMonad(B).obj(X)]
        assert sorted(images, key=sorted) == sorted(PowersetMonad().obj(X).elements, key=sorted)


def test_corrupted_mult_fails_with_witness():
    rep = check_monad_laws(CorruptedMultMonad(PowersetMonad()))
    assert "mult-associative" in rep.failed_laws()
    assert "unit-left" not in rep.failed_laws() and "unit-right" not in rep.failed_laws()
    assert "|X|=1" in rep["mult-associative"].witness


def test_monad_morphisms():
    for alpha in (
        identity_morphism(PowersetMonad()),
        two_to_filter(),
        lax_hom_morphism(canonical_two_embedding(C3)),
    ):
        assert check_monad_morphism(alpha, sizes=(0, 1)).passed
    P2 = PVMonad(B)
    chain = compose_morphisms(identity_morphism(PowersetMonad()), two_to_powerset(P2, PowersetMonad()))
    assert chain.target.name == "powerset"


def test_broken_naturality_detected():
    rep = check_monad_morphism(broken_naturality(two_to_powerset()))
    assert {"natural", "mult"} <= rep.failed_laws()


def test_non_lax_hom_refused():
    with pytest.raises(StructureError):
        lax_hom_morphism(LaxHom(C3, B, (0, 1, 0)))


def test_no_morphism_into_identity():
    for V in (B, C3):
        rep = search_morphisms_to_identity(V, (0, 1, 2))
        assert not rep["exists-at-2"].passed
        assert not rep["exists-at-0"].passed


def test_tau_must_land_in_monad():
    P = PowersetMonad()
    with pytest.raises(StructureError):
        Enrichment(PowersetMonad(), two_to_powerset(PVMonad(B), P))
    with pytest.raises(StructureError):
        Enrichment(P, broken_naturality(two_to_powerset(PVMonad(B), P)))


def test_free_action_is_tensor():
    for V in (B, C3):
        enr = _pv_enrichment(V)
        for n in (0, 1, 2):
            X = fset(n)
            for phi in enr.T.obj(X):
                for v in V.elements:
                    got = enr.act(X, phi, v)
                    assert values(got) == tuple(V.t[a][v] for a in values(phi))
                assert enr.act(X, phi, V.unit) == phi


def test_powerset_action():
    enr = _powerset_enrichment()
    X = fset(2)
    for A in enr.T.obj(X):
        assert enr.act(X, A, B.unit) == A
        assert enr.act(X, A, B.bottom) == frozenset()


def test_powerset_hom_is_inclusion():
    enr = _powerset_enrichment()
    for n in (0, 1, 2):
        X = fset(n)
        H = enr.hom(X)
        TX = H.source
        for i, A in enumerate(TX):
            for j, Bs in enumerate(TX):
                assert H.matrix[i][j] == (B.unit if A <= Bs else B.bottom)
        assert enr.order(X) == tuple(tuple(A <= Bs for Bs in TX) for A in TX)


def test_free_hom_is_relation_extension():
    for V in (B, C3):
        enr = _pv_enrichment(V)
        X = fset(2)
        H = enr.hom(X)
        for i, phi in enumerate(H.source):
            for j, psi in enumerate(H.source):
                assert H.matrix[i][j] == extension(psi, phi).matrix[0][0]


@pytest.mark.parametrize(
    "make,sizes",
    [
        (lambda: _pv_enrichment(B), (0, 1, 2)),
        (lambda: _pv_enrichment(C3), (0, 1)),
        (_powerset_enrichment, (0, 1, 2)),
        (_filter_enrichment, (0, 1, 2)),
    ],
    ids=["pv2", "pv3", "powerset", "filter"],
)
def test_enrichment_laws(make, sizes):
    enr = make()
    rep = check_enrichment(enr, sizes)
    assert rep.passed, rep.failures()[:3]
    assert check_power_enriched(enr, sizes).passed
    assert tau_correspondences(enr, sizes).passed
    for n in sizes:
        X = fset(n)
        H = enr.hom(X)
        assert check_vcat(H.source, H)
        assert is_partial_order(induced_order(VCat(H.source, H)))


def test_vaction_report_flags_bad_action():
    enr = _powerset_enrichment()
    X = fset(1)
    A = enr.vaction(X)
    A.act = lambda x, v: x
    assert "act-bottom-scalar" in check_vaction(A).failed_laws()


def test_kleisli_composition_matches_mult():
    enr = _powerset_enrichment()
    X = fset(2)
    PX = enr.T.obj(X)
    for f in all_maps(X, PX):
        for g in all_maps(X, PX):
            h = enr.kleisli(f, g)
            for x in X:
                assert h(x) == frozenset().union(*(f(y) for y in g(x)))


def test_flat_of_vector():
    enr = _pv_enrichment(C3)
    X = fset(2)
    phi = vector(X, C3, [0, 2])
    assert enr.flat(phi).source == ONE
    assert enr.flat(phi).images[0] == phi

