"""Lax extensions of finite-set monads to V-relations and their law checker."""

from __future__ import annotations

import itertools
import random
from typing import Callable, Sequence

from .finmonad import Enrichment, FinMonad, IdentityMonad, UltrafilterMonad, check_power_enriched
from .quantale import Quantale
from .report import CapExceeded, LawReport, StructureError
from .vrel import (
    FinMap,
    FinSet,
    VRel,
    all_maps,
    all_vrels,
    cograph,
    compose,
    count_vrels,
    fset,
    random_vrel,
    rel_le,
)


class LaxExtension:
    """A per-hom-set assignment ``r: X -|-> Y  |->  Er: TX -|-> TY``, memoised per relation."""

    name = "extension"

    def __init__(self, monad: FinMonad, quantale: Quantale):
        self.monad = monad
        self.quantale = quantale
        self._cache: dict[VRel, VRel] = {}
        self._certificate: LawReport | None = None

    def _compute(self, r: VRel) -> VRel:
        raise NotImplementedError

    def __call__(self, r: VRel) -> VRel:
        out = self._cache.get(r)
        if out is None:
            if r.quantale is not self.quantale and r.quantale.fingerprint() != self.quantale.fingerprint():
                raise StructureError("relation is over a different quantale than the extension")
            out = self._compute(r)
            self._cache[r] = out
        return out

    def identity_on(self, X: FinSet) -> VRel:
        """``E 1_X``"""
        from .vrel import identity

        return self(identity(X, self.quantale))

    def certify(self, sizes: Sequence[int] | None = None, **kw) -> LawReport:
        """Run the six conditions and the associativity equalities once and keep the report."""
        if self._certificate is None:
            if sizes is None:
                sizes = (0, 1, 2) if self.quantale.n <= 2 else (0, 1)
            rep = check_lax_extension(self, sizes=sizes, **kw)
            rep.extend(check_associative(self, sizes=sizes, **kw))
            rep.suite = f"certificate:{self.name}"
            self._certificate = rep
        return self._certificate

    def require_associative(self, sizes: Sequence[int] | None = None) -> LawReport:
        rep = self.certify(sizes)
        if not rep.passed:
            bad = rep.failures()[0]
            raise StructureError(f"{self.name} is not an associative lax extension ({bad.law}: {bad.witness})")
        return rep

    def __repr__(self) -> str:
        return self.name


class IdentityExtension(LaxExtension):
    def __init__(self, V: Quantale):
        super().__init__(IdentityMonad(), V)
        self.name = f"identity[{V.name}]"

    def _compute(self, r):
        return r


BARR_PAIR_CAP = 2 ** 14


class BarrExtension(LaxExtension):
    """Ultrafilter extension evaluated literally as a meet over members of joins.

    Each principal ultrafilter on an n-set has 2^(n-1) members, so the
    literal evaluation is refused once the member pairs exceed ``BARR_PAIR_CAP``.
    """

    def __init__(self, V: Quantale, monad: UltrafilterMonad | None = None):
        super().__init__(monad or UltrafilterMonad(), V)
        self.name = f"barr[{V.name}]"

    def _compute(self, r):
        U = self.monad
        V = self.quantale
        X, Y = r.source, r.target
        if X and Y and 2 ** (len(X) + len(Y) - 2) > BARR_PAIR_CAP:
            raise CapExceeded(f"Barr extension on {len(X)}x{len(Y)}", 2 ** (len(X) + len(Y) - 2), BARR_PAIR_CAP)
        UX, UY = U.obj(X), U.obj(Y)
        members_x = {u: [[X.index(a) for a in A] for A in UltrafilterMonad.members(X, u)] for u in UX}
        members_y = {w: [[Y.index(b) for b in B] for B in UltrafilterMonad.members(Y, w)] for w in UY}
        rows = []
        for u in UX:
            row = []
            for w in UY:
                acc = V.top
                for A in members_x[u]:
                    for B in members_y[w]:
                        acc = V.m[acc][V.join_all(r.matrix[a][b] for a in A for b in B)]
                row.append(acc)
            rows.append(row)
        return VRel(UX, UY, V, rows)


class KleisliExtension(LaxExtension):
    """``Er(x, y) = (r^tau(y) (/) x)`` with the internal hom of the enrichment."""

    def __init__(self, enr: Enrichment, validate: bool = True, sizes: Sequence[int] = (0, 1)):
        super().__init__(enr.T, enr.V)
        self.enrichment = enr
        self.name = f"kleisli{enr.name}"
        if validate:
            rep = check_power_enriched(enr, sizes=sizes)
            if not rep.passed:
                bad = rep.failures()[0]
                raise StructureError(f"monad is not power-enriched by tau ({bad.law}: {bad.witness})")

    def _compute(self, r):
        enr = self.enrichment
        X = r.source
        H = enr.hom(X)
        rt = enr.r_tau(r)
        cols = rt.indices()
        TX, TY = H.source, rt.source
        return VRel.trusted(TX, TY, self.quantale, tuple(tuple(hrow[c] for c in cols) for hrow in H.matrix))


class MutatedExtension(LaxExtension):
    """Mutation fixture: transposes the output of ``base`` on endo-relations."""

    def __init__(self, base: LaxExtension, kind: str = "transpose"):
        super().__init__(base.monad, base.quantale)
        if kind != "transpose":
            raise StructureError(f"unknown extension mutation {kind!r}")
        self.base = base
        self.name = f"transpose({base.name})"

    def _compute(self, r):
        out = self.base(r)
        if r.source == r.target:
            out = VRel(out.target, out.source, out.quantale, list(zip(*out.matrix)))
        return out


class DroppedUnitExtension(LaxExtension):
    """Mutation fixture: ``E 1_X`` collapses to the bottom relation, everything else unchanged."""

    def __init__(self, base: LaxExtension):
        super().__init__(base.monad, base.quantale)
        self.base = base
        self.name = f"drop-unit({base.name})"

    def _compute(self, r):
        from .vrel import bottom, identity

        out = self.base(r)
        if r.source == r.target and r == identity(r.source, self.quantale):
            return bottom(out.source, out.target, self.quantale)
        return out


def identity_extension(V: Quantale) -> IdentityExtension:
    return IdentityExtension(V)


def barr_ultrafilter_extension(V: Quantale) -> BarrExtension:
    return BarrExtension(V)


def kleisli_extension(T: FinMonad, tau, validate: bool = True) -> KleisliExtension:
    enr = tau if isinstance(tau, Enrichment) else Enrichment(T, tau)
    return KleisliExtension(enr, validate=validate)


# -- law checking -------------------------------------------------------------


class _Cases:
    """Enumerates relation/map tuples exhaustively under a cap, and samples beyond it."""

    def __init__(self, V: Quantale, rng: random.Random, combo_cap: int, samples: int):
        self.V = V
        self.rng = rng
        self.combo_cap = combo_cap
        self.samples = samples
        self.sampled = False

    def product(self, kinds: Sequence[tuple]):
        """``kinds`` entries are ``("rel", X, Y)`` or ``("map", X, Y)``."""
        counts = 1
        for k, X, Y in kinds:
            counts *= count_vrels(X, Y, self.V) if k == "rel" else len(Y) ** len(X)
        if counts <= self.combo_cap:
            pools = [list(all_vrels(X, Y, self.V)) if k == "rel" else list(all_maps(X, Y)) for k, X, Y in kinds]
            return itertools.product(*pools)
        self.sampled = True
        return (tuple(self.draw(k, X, Y) for k, X, Y in kinds) for _ in range(self.samples))

    def draw(self, k, X, Y):
        if k == "rel":
            return random_vrel(X, Y, self.V, self.rng)
        return FinMap(X, Y, [Y[self.rng.randrange(len(Y))] for _ in X])


def _tuples(sizes: Sequence[int], sample_sizes: Sequence[int], arity: int):
    """Set tuples for exhaustive checking, and for sampled checking (at least one sampled size)."""
    exhaustive = list(itertools.product([fset(n) for n in sizes], repeat=arity))
    every = sorted(set(sizes) | set(sample_sizes))
    extra = [
        t
        for t in itertools.product([fset(n) for n in every], repeat=arity)
        if any(len(X) in sample_sizes and len(X) not in sizes for X in t)
    ]
    return exhaustive, extra


def _rel_text(r: VRel) -> str:
    return r.pretty()


def _runner(E: LaxExtension, sizes, sample_sizes, samples, seed, combo_cap):
    rng = random.Random(seed)
    V = E.quantale

    def run(rep: LawReport, law: str, arity: int, kinds: Callable, pred: Callable, describe: Callable, admit=None, note=""):
        exhaustive, extra = _tuples(sizes, sample_sizes, arity)
        cases = _Cases(V, rng, combo_cap, samples)

        def gen():
            for t in exhaustive:
                if admit and not admit(*t):
                    continue
                for inst in cases.product(kinds(*t)):
                    yield inst
            admitted = [
                t
                for t in extra
                if (not admit or admit(*t)) and all(k == "rel" or len(Y) or not len(X) for k, X, Y in kinds(*t))
            ]
            if admitted:
                for _ in range(samples):
                    t = admitted[rng.randrange(len(admitted))]
                    yield tuple(cases.draw(k, X, Y) for k, X, Y in kinds(*t))

        res = rep.check(law, gen(), pred, describe)
        notes = [note] if note else []
        if cases.sampled:
            notes.append("large hom-sets sampled")
        if extra:
            notes.append(f"sizes {','.join(map(str, sample_sizes))} sampled")
        res.note = "; ".join(n for n in notes if n)
        return res

    return run


def check_lax_extension(
    E: LaxExtension,
    sizes: Sequence[int] = (0, 1, 2),
    sample_sizes: Sequence[int] = (),
    samples: int = 1000,
    seed: int = 0,
    tt_cap: int = 1024,
    combo_cap: int = 2 ** 16,
) -> LawReport:
    """The six defining conditions, each over all relations and maps between the test sets."""
    T = E.monad
    V = E.quantale
    rep = LawReport(f"lax-extension:{E.name}")
    run = _runner(E, sizes, sample_sizes, samples, seed, combo_cap)

    def monotone_pairs(X, Y):
        return [("rel", X, Y), ("rel", X, Y)]

    run(
        rep,
        "1-monotone",
        2,
        monotone_pairs,
        lambda r, r2: not rel_le(r, r2) or rel_le(E(r), E(r2)),
        lambda r, r2: f"r={_rel_text(r)} r'={_rel_text(r2)}",
    )
    run(
        rep,
        "2-map-opposite",
        2,
        lambda X, Y: [("map", X, Y)],
        lambda f: rel_le(cograph(T.fmap_map(f), V), E(cograph(f, V))),
        lambda f: f"f={f!r}",
    )
    run(
        rep,
        "3-map-whisker",
        3,
        lambda X, Y, Z: [("rel", X, Y), ("map", Z, Y)],
        lambda r, f: E(compose(cograph(f, V), r)) == compose(cograph(T.fmap_map(f), V), E(r)),
        lambda r, f: f"r={_rel_text(r)} f={f!r}",
    )
    run(
        rep,
        "4-composition-lax",
        3,
        lambda X, Y, Z: [("rel", X, Y), ("rel", Y, Z)],
        lambda r, s: rel_le(compose(E(s), E(r)), E(compose(s, r))),
        lambda r, s: f"r={_rel_text(r)} s={_rel_text(s)}",
    )

    def tt_ok(X, Y):
        return T.size(T.obj(X)) <= tt_cap and T.size(T.obj(Y)) <= tt_cap

    mx = {}

    def m_op(X):
        if X not in mx:
            mx[X] = cograph(T.mult_map(X), V)
        return mx[X]

    def lhs5(r):
        return compose(E(E(r)), m_op(r.source))

    def rhs5(r):
        return compose(m_op(r.target), E(r))

    res = run(
        rep,
        "5-mult-lax",
        2,
        lambda X, Y: [("rel", X, Y)],
        lambda r: rel_le(lhs5(r), rhs5(r)),
        lambda r: f"r={_rel_text(r)}",
        admit=tt_ok,
    )
    _note_tt(res, T, sizes, sample_sizes, tt_cap)

    def unit_op(X):
        return cograph(T.unit_map(X), V)

    run(
        rep,
        "6-unit-lax",
        2,
        lambda X, Y: [("rel", X, Y)],
        lambda r: rel_le(compose(r, unit_op(r.source)), compose(unit_op(r.target), E(r))),
        lambda r: f"r={_rel_text(r)}",
    )
    return rep


def _note_tt(res, T, sizes, sample_sizes, tt_cap):
    skipped = [n for n in sorted(set(sizes) | set(sample_sizes)) if T.size(T.obj(fset(n))) > tt_cap]
    if skipped:
        extra = f"skipped at sizes {','.join(map(str, skipped))} (|TTX| over {tt_cap})"
        res.note = "; ".join(x for x in (res.note, extra) if x)


def check_associative(
    E: LaxExtension,
    sizes: Sequence[int] = (0, 1, 2),
    sample_sizes: Sequence[int] = (),
    samples: int = 1000,
    seed: int = 0,
    tt_cap: int = 1024,
    combo_cap: int = 2 ** 16,
) -> LawReport:
    """Equality versions of conditions (4) and (5)."""
    T = E.monad
    V = E.quantale
    rep = LawReport(f"associative:{E.name}")
    run = _runner(E, sizes, sample_sizes, samples, seed + 1, combo_cap)
    run(
        rep,
        "4-composition-equal",
        3,
        lambda X, Y, Z: [("rel", X, Y), ("rel", Y, Z)],
        lambda r, s: compose(E(s), E(r)) == E(compose(s, r)),
        lambda r, s: f"r={_rel_text(r)} s={_rel_text(s)}",
    )
    mx = {}

    def m_op(X):
        if X not in mx:
            mx[X] = cograph(T.mult_map(X), V)
        return mx[X]

    res = run(
        rep,
        "5-mult-equal",
        2,
        lambda X, Y: [("rel", X, Y)],
        lambda r: compose(E(E(r)), m_op(r.source)) == compose(m_op(r.target), E(r)),
        lambda r: f"r={_rel_text(r)}",
        admit=lambda X, Y: T.size(T.obj(X)) <= tt_cap and T.size(T.obj(Y)) <= tt_cap,
    )
    _note_tt(res, T, sizes, sample_sizes, tt_cap)
    return rep


def check_kleisli_decomposition(K: KleisliExtension, sizes: Sequence[int] = (0, 1), cap: int = 2 ** 16) -> LawReport:
    """Column ``y`` of ``Er`` equals ``a^-|(r^tau(y))``, with the adjoint found by enumeration."""
    enr = K.enrichment
    V = K.quantale
    rep = LawReport(f"kleisli-decomposition:{K.name}")

    def cases():
        for X in (fset(n) for n in sizes):
            if enr.PV.size(enr.T.obj(X)) > cap:
                continue
            for Y in (fset(n) for n in sizes):
                if count_vrels(X, Y, V) > 4096:
                    continue
                for r in all_vrels(X, Y, V):
                    yield r

    def ok(r):
        Er = K(r)
        rt = enr.r_tau(r)
        for j, t in enumerate(rt.source):
            col = tuple(row[j] for row in Er.matrix)
            adj = enr.right_adjoint_enumerated(r.source, rt(t), cap)
            if col != tuple(row[0] for row in adj.matrix):
                return False
        return True

    rep.check("flat-equals-adjoint-after-rtau", cases(), ok, lambda r: f"r={_rel_text(r)}")
    return rep
