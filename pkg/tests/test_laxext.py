import pytest

from laxkit.finmonad import Enrichment, FilterMonad, PVMonad, PowersetMonad, identity_morphism, two_to_filter, two_to_powerset
from laxkit.laxext import (
    DroppedUnitExtension,
    KleisliExtension,
    MutatedExtension,
    barr_ultrafilter_extension,
    check_associative,
    check_kleisli_decomposition,
    check_lax_extension,
    identity_extension,
    kleisli_extension,
)
from laxkit.quantale import chain_min, two
from laxkit.report import StructureError
from laxkit.vrel import all_maps, all_vrels, cograph, fset, identity, rel_le, values

from oracles import meet_of, join_of, right_residual_bf

B = two()
C3 = chain_min(3)


def powerset_kleisli():
    P = PowersetMonad()
    return kleisli_extension(P, two_to_powerset(PVMonad(B), P))


def pv_kleisli(V):
    PV = PVMonad(V)
    return kleisli_extension(PV, identity_morphism(PV))


def filter_kleisli():
    F = FilterMonad()
    return kleisli_extension(F, two_to_filter(PVMonad(B), F))


EXTENSIONS = [
    ("identity-two", lambda: identity_extension(B), (0, 1, 2)),
    ("identity-chain3", lambda: identity_extension(C3), (0, 1, 2)),
    ("barr-two", lambda: barr_ultrafilter_extension(B), (0, 1, 2)),
    ("barr-chain3", lambda: barr_ultrafilter_extension(C3), (0, 1, 2)),
    ("kleisli-powerset", powerset_kleisli, (0, 1, 2)),
    ("kleisli-filter", filter_kleisli, (0, 1, 2)),
    ("kleisli-pv-two", lambda: pv_kleisli(B), (0, 1, 2)),
    ("kleisli-pv-chain3", lambda: pv_kleisli(C3), (0, 1)),
]


@pytest.mark.parametrize("name,make,sizes", EXTENSIONS, ids=[e[0] for e in EXTENSIONS])
def test_six_conditions_and_associativity(name, make, sizes):
    E = make()
    rep = check_lax_extension(E, sizes)
    assert rep.passed, rep.failures()[:2]
    assoc = check_associative(E, sizes)
    assert assoc.passed, assoc.failures()[:2]


@pytest.mark.parametrize("make", [lambda: identity_extension(C3), lambda: barr_ultrafilter_extension(C3)])
def test_sampled_size_three(make):
    E = make()
    rep = check_lax_extension(E, sizes=(0, 1, 2), sample_sizes=(3,), samples=1000, seed=7)
    assert rep.passed
    assert "sampled" in rep["4-composition-lax"].note


def test_powerset_kleisli_formula():
    E = powerset_kleisli()
    for X in (fset(1), fset(2)):
        for Y in (fset(1), fset(2)):
            for r in all_vrels(X, Y, B):
                Er = E(r)
                for i, A in enumerate(Er.source):
                    for j, Bs in enumerate(Er.target):
                        want = all(any(r.at(x, y) == B.unit for y in Bs) for x in A)
                        assert Er.matrix[i][j] == (B.unit if want else B.bottom)


def _pv_oracle(V, r, phi, psi):
    # r^tau(psi)(x) = join_y r(x, y) (x) psi(y); then the pointwise hom from phi
    X, Y = r.source, r.target
    rt = [join_of(V, (V.t[r.at(x, y)][values(psi)[j]] for j, y in enumerate(Y))) for x in X]
    return meet_of(V, (right_residual_bf(V, values(phi)[i], rt[i]) for i in range(len(X))))


def test_pv_chain3_kleisli_against_oracle():
    E = pv_kleisli(C3)
    X = fset(1)
    for Y in (fset(1), fset(2)):
        for r in all_vrels(X, Y, C3):
            Er = E(r)
            for i, phi in enumerate(Er.source):
                for j, psi in enumerate(Er.target):
                    assert Er.matrix[i][j] == _pv_oracle(C3, r, phi, psi)


def test_graph_specialisation():
    for E in (powerset_kleisli(), pv_kleisli(B)):
        T = E.monad
        for n in (1, 2):
            for m in (1, 2):
                for f in all_maps(fset(n), fset(m)):
                    assert rel_le(cograph(T.fmap_map(f), B), E(cograph(f, B)))


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_barr_on_principal_ultrafilters(n):
    X = fset(n)
    E = barr_ultrafilter_extension(C3)
    for Y in (fset(0), fset(1), fset(2)):
        if len(X) * len(Y) > 6:
            continue
        for r in all_vrels(X, Y, C3):
            Er = E(r)
            for i, u in enumerate(Er.source):
                for j, w in enumerate(Er.target):
                    assert Er.matrix[i][j] == r.at(u.point, w.point)
    assert E.identity_on(X) == identity(E.monad.obj(X), C3)


def test_transpose_mutation_fails_whisker():
    E = MutatedExtension(powerset_kleisli())
    rep = check_lax_extension(E, (0, 1, 2))
    assert "3-map-whisker" in rep.failed_laws()
    assert rep["3-map-whisker"].witness


def test_transpose_mutation_refused_as_associative():
    with pytest.raises(StructureError):
        MutatedExtension(identity_extension(B)).require_associative((0, 1, 2))


def test_dropped_unit_breaks_lax_unit():
    E = DroppedUnitExtension(powerset_kleisli())
    rep = check_lax_extension(E, (0, 1, 2))
    assert not rep.passed


def test_kleisli_decomposition():
    for K in (powerset_kleisli(), pv_kleisli(B), pv_kleisli(C3)):
        assert check_kleisli_decomposition(K).passed


def test_kleisli_certificate_cached():
    P = PowersetMonad()
    enr = Enrichment(P, two_to_powerset(PVMonad(B), P))
    K = KleisliExtension(enr)
    rep = K.certify()
    assert rep.passed and K.certify() is rep


def test_quantale_mismatch_rejected():
    E = identity_extension(B)
    with pytest.raises(StructureError):
        E(identity(fset(1), C3))
