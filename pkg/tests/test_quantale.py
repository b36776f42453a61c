import itertools

import pytest
from hypothesis import given, strategies as st

from laxkit.quantale import (
    LaxHom,
    Quantale,
    builtin_quantales,
    canonical_two_embedding,
    chain_min,
    check_lax_hom,
    check_quantale_laws,
    check_residuals,
    cyclic_monoid,
    left_zero_monoid,
    pow_monoid,
    quantale_by_name,
    swap_residuals,
    trop,
    truncated_free_monoid,
    two,
)
from laxkit.report import StructureError

CATALOG = builtin_quantales()


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_builtins_pass_all_laws(name):
    Q = CATALOG[name]
    assert check_quantale_laws(Q).passed
    assert check_residuals(Q).passed


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_canonical_two_embedding_is_lax_hom(name):
    Q = CATALOG[name]
    h = canonical_two_embedding(Q)
    assert check_lax_hom(h).passed
    assert h.table == (Q.bottom, Q.unit)


def test_two_chain_with_bottom_unit_fails_unit_law():
    bad = Quantale("bad", ["0", "1"], [[1, 1], [0, 1]], [[0, 0], [0, 1]], 0)
    rep = check_quantale_laws(bad)
    assert rep.failed_laws() == {"unit-left", "unit-right"}
    assert rep["unit-left"].witness.startswith("a=1")


def test_non_total_table_is_structural_error():
    with pytest.raises(StructureError):
        Quantale("short", ["0", "1"], [[1, 1], [0, 1]], [[0, 0]], 1)


def test_boolean_residuals():
    B = two()
    zero, one = B.element("0"), B.element("1")
    assert B.left_residual(zero, one) == zero
    assert B.left_residual(one, zero) == one
    assert B.right_residual(one, zero) == zero


def test_chain3_residuals():
    C = chain_min(3)
    m, top = C.element("1"), C.element("2")
    assert C.left_residual(m, m) == top
    assert C.left_residual(m, top) == m


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_residual_edge_cases(name):
    Q = CATALOG[name]
    for b in Q.elements:
        assert Q.left_residual(b, Q.bottom) == Q.top
        assert Q.right_residual(b, Q.top) == Q.top


def test_residuals_by_brute_force_join():
    # oracle: the join formula evaluated directly
    for Q in CATALOG.values():
        for a, b in itertools.product(Q.elements, repeat=2):
            lo = Q.join_all(v for v in Q.elements if Q.leq[Q.t[v][a]][b])
            ro = Q.join_all(v for v in Q.elements if Q.leq[Q.t[a][v]][b])
            assert Q.left_residual(b, a) == lo
            assert Q.right_residual(a, b) == ro


def test_noncommutative_residuals_differ():
    Q = pow_monoid(left_zero_monoid(2))
    assert not Q.is_commutative()
    assert any(Q.left_residual(b, a) != Q.right_residual(a, b) for a in Q.elements for b in Q.elements)


def test_free_monoid_truncations():
    # at length 1 both mixed products overflow to the same word
    assert pow_monoid(truncated_free_monoid("ab", 1)).is_commutative()
    M = truncated_free_monoid("ab", 2)
    ab = M.mul[M.labels.index("a")][M.labels.index("b")]
    ba = M.mul[M.labels.index("b")][M.labels.index("a")]
    assert M.labels[ab] == "ab" and M.labels[ba] == "ba"
    Q = pow_monoid(M)
    sa, sb = Q.element("{a}"), Q.element("{b}")
    assert Q.t[sa][sb] != Q.t[sb][sa]


def test_trop2_table():
    T = trop(2)
    assert T.labels == ("0", "1", "2", "inf")
    lab = lambda a, b: T.labels[T.t[T.element(a)][T.element(b)]]
    assert lab("1", "1") == "2"
    assert lab("1", "2") == "inf"
    assert T.labels[T.bottom] == "inf" and T.labels[T.top] == "0" and T.labels[T.unit] == "0"
    assert canonical_two_embedding(T).table == (T.element("inf"), T.element("0"))


def test_chain3_embedding():
    C = chain_min(3)
    assert canonical_two_embedding(C).table == (C.element("0"), C.element("2"))


def test_chain_min_2_is_two():
    assert chain_min(2).fingerprint() == two().fingerprint()


def test_canonical_embedding_of_two_is_identity():
    B = two()
    assert canonical_two_embedding(B).table == (B.element("0"), B.element("1"))


def test_swapped_residuals_detected():
    rep = check_residuals(swap_residuals(pow_monoid(left_zero_monoid(2))))
    assert "left-adjunction" in rep.failed_laws()
    assert rep["left-adjunction"].witness


def test_non_lax_hom_rejected():
    C = chain_min(3)
    bad = LaxHom(C, two(), (0, 1, 0))
    assert not check_lax_hom(bad).passed


@pytest.mark.parametrize(
    "name,size",
    [("two", 2), ("chain_min(4)", 4), ("trop(3)", 5), ("pow_monoid(left_zero(2))", 8), ("pow_monoid(cyclic(2))", 4)],
)
def test_catalog_names(name, size):
    assert quantale_by_name(name).n == size


@pytest.mark.parametrize("bad", ["nope", "chain_min(x)", "pow_monoid(what(2))", "chain_min"])
def test_bad_names(bad):
    with pytest.raises(StructureError):
        quantale_by_name(bad)


def test_spec_round_trip():
    for Q in CATALOG.values():
        R = Quantale.from_spec(Q.to_spec())
        assert R.fingerprint() == Q.fingerprint()


def test_spec_reflexive_pairs_optional():
    spec = {"elements": ["0", "1"], "leq": [["0", "1"]], "tensor": [["0", "0", "0"], ["0", "1", "0"], ["1", "0", "0"], ["1", "1", "1"]], "unit": "1"}
    assert Quantale.from_spec(spec).fingerprint() == two().fingerprint()


def test_cyclic_powerset_commutative():
    Q = pow_monoid(cyclic_monoid(3))
    assert Q.is_commutative()
    assert check_residuals(Q)["residuals-coincide"].passed


quantales = st.sampled_from(sorted(CATALOG)).map(CATALOG.__getitem__)


@given(quantales, st.data())
def test_adjunction_property(Q, data):
    a, b, v = (data.draw(st.sampled_from(Q.elements)) for _ in range(3))
    assert Q.leq[Q.t[v][a]][b] == Q.leq[v][Q.left_residual(b, a)]
    assert Q.leq[Q.t[a][v]][b] == Q.leq[v][Q.right_residual(a, b)]


@given(quantales, st.data())
def test_residual_monotone_property(Q, data):
    a, b, c = (data.draw(st.sampled_from(Q.elements)) for _ in range(3))
    if Q.leq[b][c]:
        assert Q.leq[Q.left_residual(b, a)][Q.left_residual(c, a)]
    if Q.leq[a][c]:
        assert Q.leq[Q.left_residual(b, c)][Q.left_residual(b, a)]


@given(quantales, st.data())
def test_unit_and_bottom_property(Q, data):
    a = data.draw(st.sampled_from(Q.elements))
    assert Q.t[Q.unit][a] == a == Q.t[a][Q.unit]
    assert Q.t[Q.bottom][a] == Q.bottom == Q.t[a][Q.bottom]
