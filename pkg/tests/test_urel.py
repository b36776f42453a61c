import pytest

from laxkit.finmonad import (
    Enrichment,
    FilterMonad,
    PVMonad,
    PowersetMonad,
    identity_morphism,
    two_to_filter,
    two_to_powerset,
)
from laxkit.laxext import MutatedExtension, barr_ultrafilter_extension, identity_extension
from laxkit.quantale import chain_min, two
from laxkit.report import CapExceeded, StructureError
from laxkit.urel import (
    Context,
    PresheafMonad,
    TVRel,
    all_unitary,
    check_adjunction,
    check_convolution_monoid,
    check_functor_F,
    check_laxext_morphism,
    check_nbhd_conv,
    check_presheaf_enrichment,
    check_presheaf_monad,
    check_urel_structure,
    check_yoneda,
    check_yoneda_morphism,
    conv,
    convolve,
    dropped_unit,
    is_unitary,
    kappa_morphism,
    kleisli_context,
    map_sharp,
    nbhd,
    pi_morphism,
    spot_check_fullness,
    unit_sharp,
    yoneda_morphism,
)
from laxkit.vrel import ONE, FinMap, VRel, all_maps, all_vrels, cograph, compose, fset, values

B = two()
C3 = chain_min(3)


def powerset_enr():
    P = PowersetMonad()
    return Enrichment(P, two_to_powerset(PVMonad(B), P))


def pv_enr(V):
    PV = PVMonad(V)
    return Enrichment(PV, identity_morphism(PV))


def filter_enr():
    F = FilterMonad()
    return Enrichment(F, two_to_filter(PVMonad(B), F))


CONTEXTS = {
    "identity-two": lambda: Context(identity_extension(B)),
    "identity-chain3": lambda: Context(identity_extension(C3)),
    "barr-two": lambda: Context(barr_ultrafilter_extension(B)),
    "kleisli-powerset": lambda: kleisli_context(powerset_enr()),
    "kleisli-pv-two": lambda: kleisli_context(pv_enr(B)),
    "kleisli-filter": lambda: kleisli_context(filter_enr()),
}
KLEISLI = {
    "kleisli-powerset": powerset_enr,
    "kleisli-pv-two": lambda: pv_enr(B),
    "kleisli-filter": filter_enr,
}


@pytest.fixture(scope="module", params=sorted(CONTEXTS))
def ctx(request):
    return CONTEXTS[request.param]()


def test_urel_structure(ctx):
    rep = check_urel_structure(ctx)
    assert rep.passed, rep.failures()[:2]


def test_convolution_monoid(ctx):
    rep = check_convolution_monoid(ctx, sizes=(0, 1, 2))
    assert rep.passed, rep.failures()[:2]
    assert rep["associative"].cases > 0


def test_presheaf_monad(ctx):
    sizes = (0, 1) if ctx.name.startswith("identity[chain") else (0, 1, 2)
    Pi = PresheafMonad(ctx)
    rep = check_presheaf_monad(Pi, sizes)
    assert rep.passed, rep.failures()[:2]
    assert check_presheaf_enrichment(Pi, sizes).passed


def test_yoneda(ctx):
    Pi = PresheafMonad(ctx)
    assert check_yoneda(Pi, sizes=(0, 1, 2)).passed
    assert check_yoneda_morphism(Pi, sizes=(0, 1)).passed


def test_identity_context_convolution_is_composition():
    c = Context(identity_extension(C3))
    X = fset(2)
    for r in all_vrels(X, X, C3):
        for s in all_vrels(X, fset(1), C3):
            assert convolve(TVRel(c, X, fset(1), s), TVRel(c, X, X, r)).rel == compose(s, r)
    for f in all_maps(X, fset(1)):
        assert map_sharp(c, f).rel == cograph(f, C3)


@pytest.mark.parametrize("V", [B, C3], ids=["two", "chain3"])
def test_identity_context_presheaf_is_pv(V):
    c = Context(identity_extension(V))
    Pi = PresheafMonad(c)
    PV = PVMonad(V)
    for n in (0, 1, 2):
        X = fset(n)
        assert Pi.obj(X).elements == PV.obj(X).elements
        for x in X:
            assert Pi.unit(X, x) == PV.unit(X, x)
        for m in (0, 1, 2):
            for f in all_maps(X, fset(m)):
                for phi in Pi.obj(X):
                    assert Pi.fmap(f, phi) == PV.fmap(f, phi)
    X = fset(1)
    for Phi in Pi.obj(Pi.obj(X)):
        assert Pi.mult(X, Phi) == PV.mult(X, Phi)
    pi = pi_morphism(Pi)
    assert all(pi.component(fset(2), phi) == phi for phi in PV.obj(fset(2)))


def test_powerset_unit_sharp_against_formula():
    # E1(A, {x}) is the inclusion of A in {x}
    c = kleisli_context(powerset_enr())
    for n in (0, 1, 2, 3):
        X = fset(n)
        u = unit_sharp(c, X)
        for i, A in enumerate(c.T.obj(X)):
            for j, x in enumerate(X):
                assert u.rel.matrix[i][j] == (B.unit if A <= {x} else B.bottom)


def test_powerset_presheaf_carrier_sizes():
    c = kleisli_context(powerset_enr())
    Pi = PresheafMonad(c)
    assert len(Pi.obj(fset(1))) == 2
    for n in (0, 1, 2):
        assert len(Pi.obj(fset(n))) == 2 ** n
        assert len({Pi.unit(fset(n), x) for x in fset(n)}) == n


def test_powerset_size_one_associativity_exhaustive():
    c = kleisli_context(powerset_enr())
    X = fset(1)
    us = all_unitary(c, X, X)
    assert len(us) == 2
    for r in us:
        for s in us:
            for t in us:
                assert convolve(t, convolve(s, r)) == convolve(convolve(t, s), r)


def test_bottom_unitarity_per_context():
    # direct evaluation of both reduced equations on the bottom relation
    for make in CONTEXTS.values():
        c = make()
        for n in (0, 1, 2):
            X = fset(n)
            TX = c.T.obj(X)
            zero = VRel(TX, ONE, c.V, [[c.V.bottom]] * len(TX))
            direct = compose(zero, c.E1(X)) == zero and compose(c.e_op(ONE), compose(c.E(zero), c.m_op(X))) == zero
            assert is_unitary(TVRel(c, X, ONE, zero)) == direct


@pytest.mark.parametrize("name", sorted(KLEISLI))
def test_adjunction(name):
    enr = KLEISLI[name]()
    rep = check_adjunction(enr, sizes=(0, 1, 2))
    assert rep.passed, rep.failures()[:2]
    assert "presheaf carriers" in rep["carrier-strategy"].note


def test_adjunction_pv_chain3_partial():
    rep = check_adjunction(pv_enr(C3), sizes=(0, 1))
    assert rep.passed


@pytest.mark.parametrize("name", sorted(KLEISLI))
def test_nbhd_conv(name):
    enr = KLEISLI[name]()
    c = kleisli_context(enr)
    rep = check_nbhd_conv(c, sizes=(0, 1, 2))
    assert rep.passed, rep.failures()[:2]
    for n in (0, 1, 2):
        X = fset(n)
        assert nbhd(unit_sharp(c, X)) == c.T.unit_map(X)


def test_nbhd_needs_kleisli_context():
    c = Context(identity_extension(B))
    with pytest.raises(StructureError):
        nbhd(unit_sharp(c, fset(1)))
    with pytest.raises(StructureError):
        conv(c, fset(1), FinMap(fset(1), fset(1), [0]))


def test_kappa_is_inverse_to_yoneda():
    enr = powerset_enr()
    c = kleisli_context(enr)
    Pi = PresheafMonad(c)
    k, y = kappa_morphism(Pi, enr), yoneda_morphism(Pi)
    for n in (0, 1, 2):
        X = fset(n)
        for t in c.T.obj(X):
            assert k.component(X, y.component(X, t)) == t
        for psi in Pi.obj(X):
            assert y.component(X, k.component(X, psi)) == psi


def test_yoneda_lemma_identity_context():
    for V in (B, C3):
        c = Context(identity_extension(V))
        Pi = PresheafMonad(c)
        X = fset(2)
        y = yoneda_morphism(Pi)
        for x in X:
            yx = y.component(X, x)
            assert values(yx) == tuple(V.unit if z == x else V.bottom for z in X)


def test_morphism_of_lax_extensions():
    P2 = PVMonad(B)
    P = PowersetMonad()
    S_enr = Enrichment(P2, identity_morphism(P2))
    T_enr = Enrichment(P, two_to_powerset(P2, P))
    cS, cT = kleisli_context(S_enr), kleisli_context(T_enr)
    alpha = two_to_powerset(P2, P)
    assert check_laxext_morphism(alpha, cS, cT, sizes=(0, 1, 2)).passed
    assert check_laxext_morphism(identity_morphism(P), cT, cT, sizes=(0, 1, 2)).passed
    rep = check_functor_F(alpha, cS, cT, sizes=(0, 1))
    assert rep.passed, rep.failures()[:2]
    with pytest.raises(StructureError):
        check_laxext_morphism(alpha, cT, cS)


def test_fullness_spot_check():
    P2 = PVMonad(B)
    P = PowersetMonad()
    rep = spot_check_fullness(Enrichment(P2, identity_morphism(P2)), Enrichment(P, two_to_powerset(P2, P)), sizes=(0, 1))
    assert rep.passed
    assert rep["morphisms-respect-structure"].cases >= 1


def test_non_associative_extension_refused():
    with pytest.raises(StructureError):
        Context(MutatedExtension(identity_extension(B)), sizes=(0, 1, 2))


def test_non_associative_extension_breaks_convolution():
    c = Context(MutatedExtension(identity_extension(B)), check=False)
    rep = check_convolution_monoid(c, sizes=(0, 1, 2))
    assert "associative" in rep.failed_laws()


def test_dropped_unit_detected():
    c = kleisli_context(powerset_enr())
    rep = check_convolution_monoid(c, sizes=(0, 1), unit=dropped_unit)
    assert {"unit-left", "unit-right"} <= rep.failed_laws()


def test_context_mismatch_refused():
    a, b = Context(identity_extension(B)), Context(identity_extension(B))
    X = fset(1)
    with pytest.raises(StructureError):
        convolve(unit_sharp(a, X), unit_sharp(b, X))
    with pytest.raises(StructureError):
        TVRel(a, X, X, VRel(fset(2), X, B, [[0], [0]]))


def test_carrier_strategies():
    c = kleisli_context(powerset_enr())
    with pytest.raises(StructureError):
        PresheafMonad(Context(identity_extension(B)), carrier="yoneda")
    with pytest.raises(StructureError):
        PresheafMonad(c, carrier="guess")
    auto, yon = PresheafMonad(c), PresheafMonad(c, carrier="yoneda")
    for n in (0, 1, 2):
        assert auto.obj(fset(n)).elements == yon.obj(fset(n)).elements
    assert yon.strategy[fset(2)] == "yoneda"
    tiny = PresheafMonad(Context(identity_extension(C3)), filter_cap=8)
    with pytest.raises(CapExceeded):
        tiny.obj(fset(2))
