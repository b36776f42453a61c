"""Monads on finite sets, monad morphisms, and power-enrichment.

A :class:`FinMonad` computes ``TX`` for an explicit :class:`FinSet` and acts
elementwise: ``fmap(f, t)``, ``unit(X, x)`` and ``mult(X, tt)`` never need the
iterated carriers to be enumerated, so laws on ``TTTX`` can be sampled when the
carrier is too large to list.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

from .quantale import LaxHom, Quantale, check_lax_hom, two
from .report import DEFAULT_CAP, CapExceeded, LawReport, StructureError
from .vrel import FinMap, FinSet, VRel, all_maps, fmt, fset, values, vector

# Iterated carriers up to this size are enumerated by law checks; larger ones are sampled.
ENUM_LIMIT = 4096
DEFAULT_SAMPLES = 200


class FinMonad:
    """Base class; subclasses give ``size``, ``_enumerate`` and the elementwise structure."""

    name = "monad"

    def __init__(self):
        self._obj_cache: dict[FinSet, FinSet] = {}
        self._hosts: dict[int, FinSet] = {}

    def size(self, X: FinSet) -> int:
        raise NotImplementedError

    def _enumerate(self, X: FinSet) -> Iterable:
        raise NotImplementedError

    def obj(self, X: FinSet, cap: int = DEFAULT_CAP) -> FinSet:
        TX = self._obj_cache.get(X)
        if TX is None:
            n = self.size(X)
            if n > cap:
                raise CapExceeded(f"{self.name} applied to a {len(X)}-point set", n, cap)
            TX = FinSet(self._enumerate(X))
            self._obj_cache[X] = TX
            self._hosts[id(TX)] = X
        return TX

    def fmap(self, f: FinMap, t):
        raise NotImplementedError

    def unit(self, X: FinSet, x):
        raise NotImplementedError

    def mult(self, X: FinSet, tt):
        raise NotImplementedError

    def sample(self, X: FinSet, rng: random.Random):
        TX = self.obj(X)
        return TX[rng.randrange(len(TX))]

    def fmap_map(self, f: FinMap) -> FinMap:
        TY = self.obj(f.target)
        return FinMap(self.obj(f.source), TY, [self.fmap(f, t) for t in self.obj(f.source)])

    def unit_map(self, X: FinSet) -> FinMap:
        return FinMap(X, self.obj(X), [self.unit(X, x) for x in X])

    def mult_map(self, X: FinSet) -> FinMap:
        TTX = self.obj(self.obj(X))
        return FinMap(TTX, self.obj(X), [self.mult(X, tt) for tt in TTX])

    def __repr__(self) -> str:
        return self.name


class IdentityMonad(FinMonad):
    name = "identity"

    def size(self, X):
        return len(X)

    def obj(self, X, cap=DEFAULT_CAP):
        return X

    def _enumerate(self, X):
        return X.elements

    def fmap(self, f, t):
        return f(t)

    def unit(self, X, x):
        return x

    def mult(self, X, tt):
        return tt


def _subsets(X: FinSet) -> Iterator[frozenset]:
    n = len(X)
    for mask in range(1 << n):
        yield frozenset(X[i] for i in range(n) if mask >> i & 1)


class PowersetMonad(FinMonad):
    """Subsets as frozensets, listed in bitmask order of the host set."""

    name = "powerset"

    def size(self, X):
        return 2 ** len(X)

    def _enumerate(self, X):
        return _subsets(X)

    def fmap(self, f, t):
        return frozenset(f(x) for x in t)

    def unit(self, X, x):
        return frozenset((x,))

    def mult(self, X, tt):
        return frozenset().union(*tt)

    def sample(self, X, rng):
        return frozenset(x for x in X if rng.random() < 0.5)


class PVMonad(FinMonad):
    """``P_V X = V^X`` with elements stored as V-relations ``X -|-> 1``."""

    def __init__(self, V: Quantale):
        super().__init__()
        self.quantale = V
        self.name = f"pv({V.name})"

    def size(self, X):
        return self.quantale.n ** len(X)

    def _enumerate(self, X):
        V = self.quantale
        for vals in itertools.product(V.elements, repeat=len(X)):
            yield vector(X, V, vals)

    def fmap(self, f, t):
        V = self.quantale
        j = V.j
        out = [V.bottom] * len(f.target)
        for i, y in enumerate(f.indices()):
            out[y] = j[out[y]][t.matrix[i][0]]
        return vector(f.target, V, out)

    def unit(self, X, x):
        V = self.quantale
        i = X.index(x)
        return vector(X, V, [V.unit if k == i else V.bottom for k in range(len(X))])

    def mult(self, X, tt):
        """``mu(R)(x) = V_s s(x) (x) R(s)``"""
        V = self.quantale
        t, j, bot = V.t, V.j, V.bottom
        acc = [bot] * len(X)
        for s, row in zip(tt.source.elements, tt.matrix):
            w = row[0]
            if w == bot:
                continue
            for i, srow in enumerate(s.matrix):
                acc[i] = j[acc[i]][t[srow[0]][w]]
        return vector(X, V, acc)

    def sample(self, X, rng):
        V = self.quantale
        return vector(X, V, [rng.randrange(V.n) for _ in X])


@dataclass(frozen=True)
class Up:
    """The principal filter of all supersets of ``base``; ``Up(frozenset())`` is the improper filter."""

    base: frozenset

    def __str__(self) -> str:
        return "up" + fmt(self.base)


class FilterMonad(FinMonad):
    """Filters on a finite set, each principal; ordered by bitmask of the generator."""

    name = "filter"

    def size(self, X):
        return 2 ** len(X)

    def _enumerate(self, X):
        return (Up(A) for A in _subsets(X))

    def fmap(self, f, t):
        return Up(frozenset(f(x) for x in t.base))

    def unit(self, X, x):
        return Up(frozenset((x,)))

    def mult(self, X, tt):
        # a set belongs to the result iff every generator in tt's base lies inside it
        return Up(frozenset().union(*(F.base for F in tt.base)))

    def sample(self, X, rng):
        return Up(frozenset(x for x in X if rng.random() < 0.5))


@dataclass(frozen=True)
class Principal:
    point: object

    def __str__(self) -> str:
        return "u(" + fmt(self.point) + ")"


class UltrafilterMonad(FinMonad):
    """On finite sets every ultrafilter is principal."""

    name = "ultrafilter"

    def size(self, X):
        return len(X)

    def _enumerate(self, X):
        return (Principal(x) for x in X)

    def fmap(self, f, t):
        return Principal(f(t.point))

    def unit(self, X, x):
        return Principal(x)

    def mult(self, X, tt):
        return tt.point

    @staticmethod
    def members(X: FinSet, u: Principal) -> Iterator[frozenset]:
        """All ``A`` in the ultrafilter: subsets containing the point."""
        return (A for A in _subsets(X) if u.point in A)


class CorruptedMultMonad(FinMonad):
    """Mutation fixture: ``mult`` at one chosen ``tt`` returns a wrong element.

    The corrupted input lies on sets of size ``at_size`` and is neither of the form
    ``e(t)`` nor ``Te(t)``, so the unit laws are untouched. Among those candidates
    the first (input, wrong value) pair that provably breaks associativity on the
    enumerated ``TTTX`` is used.
    """

    def __init__(self, base: FinMonad, at_size: int = 1):
        super().__init__()
        self.base = base
        self.name = f"corrupt-mult({base.name})"
        self.at_size = at_size
        self._target: dict[FinSet, tuple] = {}

    def size(self, X):
        return self.base.size(X)

    def _enumerate(self, X):
        return self.base.obj(X).elements

    def fmap(self, f, t):
        return self.base.fmap(f, t)

    def unit(self, X, x):
        return self.base.unit(X, x)

    def sample(self, X, rng):
        return self.base.sample(X, rng)

    def _breaks_assoc(self, X, tt, wrong) -> bool:
        b = self.base
        TX = b.obj(X)
        TTX = b.obj(TX)
        if b.size(TTX) > ENUM_LIMIT:
            return True
        mX = b.mult_map(X)

        def m(t2):
            return wrong if t2 == tt else b.mult(X, t2)

        return any(m(b.mult(TX, ttt)) != m(b.fmap(mX, ttt)) for ttt in b.obj(TTX))

    def _bad(self, X):
        if X not in self._target:
            hit = None
            if len(X) == self.at_size:
                b = self.base
                TX = b.obj(X)
                TTX = b.obj(TX)
                units = {b.unit(TX, t) for t in TX} | {b.fmap(b.unit_map(X), t) for t in TX}
                for tt in TTX:
                    if tt in units:
                        continue
                    true = b.mult(X, tt)
                    for wrong in TX:
                        if wrong != true and self._breaks_assoc(X, tt, wrong):
                            hit = (tt, wrong)
                            break
                    if hit:
                        break
            self._target[X] = hit
        return self._target[X]

    def mult(self, X, tt):
        bad = self._bad(X)
        if bad is not None and tt == bad[0]:
            return bad[1]
        return self.base.mult(X, tt)


def builtin_monads(V: Quantale | None = None) -> dict[str, FinMonad]:
    V = V or two()
    return {
        "identity": IdentityMonad(),
        "powerset": PowersetMonad(),
        f"pv({V.name})": PVMonad(V),
        "filter": FilterMonad(),
        "ultrafilter": UltrafilterMonad(),
    }


def monad_by_name(name: str, V: Quantale | None = None) -> FinMonad:
    from .quantale import quantale_by_name

    key = name.strip()
    if key.startswith("pv(") and key.endswith(")"):
        return PVMonad(quantale_by_name(key[3:-1]))
    if key in ("pv", "pv_monad"):
        return PVMonad(V or two())
    table = {
        "identity": IdentityMonad,
        "id": IdentityMonad,
        "powerset": PowersetMonad,
        "filter": FilterMonad,
        "filter_fin": FilterMonad,
        "ultrafilter": UltrafilterMonad,
        "ultrafilter_fin": UltrafilterMonad,
    }
    if key not in table:
        raise StructureError(f"unknown monad {name!r}")
    return table[key]()


# -- law checking -------------------------------------------------------------


def _elements_or_sample(T: FinMonad, X: FinSet, rng: random.Random, samples: int, limit: int):
    """All of ``TX`` when small, otherwise ``samples`` random elements; second value tags the mode."""
    if T.size(X) <= limit:
        return list(T.obj(X)), "exhaustive"
    return [T.sample(X, rng) for _ in range(samples)], "sampled"


def _test_sets(sizes: Sequence[int]) -> list[FinSet]:
    return [fset(n) for n in sizes]


def check_monad_laws(
    T: FinMonad,
    sizes: Sequence[int] = (0, 1, 2),
    limit: int = ENUM_LIMIT,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
) -> LawReport:
    rng = random.Random(seed)
    rep = LawReport(f"monad:{T.name}")
    sets = _test_sets(sizes)

    if not isinstance(T, IdentityMonad):
        for X in sets:
            if T.size(X) <= limit:
                a, b = tuple(T._enumerate(X)), tuple(T._enumerate(X))
                if a != b or len(set(a)) != len(a):
                    raise StructureError(f"{T.name}: carrier labeling is not deterministic at |X|={len(X)}")
        rep.record("labeling-deterministic", True, cases=len(sets))

    def unit_left():
        for X in sets:
            TX = T.obj(X)
            for t in TX:
                yield X, t

    rep.check(
        "unit-left",
        unit_left(),
        lambda X, t: T.mult(X, T.unit(T.obj(X), t)) == t,
        lambda X, t: f"|X|={len(X)} t={fmt(t)} m(e(t))={fmt(T.mult(X, T.unit(T.obj(X), t)))}",
    )
    rep.check(
        "unit-right",
        unit_left(),
        lambda X, t: T.mult(X, T.fmap(T.unit_map(X), t)) == t,
        lambda X, t: f"|X|={len(X)} t={fmt(t)} m(Te(t))={fmt(T.mult(X, T.fmap(T.unit_map(X), t)))}",
    )

    modes = []

    def assoc_cases():
        for X in sets:
            TX = T.obj(X)
            try:
                TTX = T.obj(TX)
                T.size(TTX)
            except CapExceeded:
                modes.append(f"skipped |X|={len(X)}")
                continue
            # each sampled element of TTTX costs |TTX| work; keep the total bounded
            k = samples if len(TTX) <= 1024 else max(16, samples * 1024 // len(TTX))
            ts, mode = _elements_or_sample(T, TTX, rng, k, limit)
            modes.append(mode)
            mX = T.mult_map(X)
            for ttt in ts:
                yield X, TX, mX, ttt

    rep.check(
        "mult-associative",
        assoc_cases(),
        lambda X, TX, mX, ttt: T.mult(X, T.mult(TX, ttt)) == T.mult(X, T.fmap(mX, ttt)),
        lambda X, TX, mX, ttt: f"|X|={len(X)} ttt={fmt(ttt)}",
    )
    notes = []
    if "sampled" in modes:
        notes.append("TTTX sampled where larger than enumeration limit")
    notes += [m + " (TTTX beyond cap)" for m in modes if m.startswith("skipped")]
    if notes:
        rep.results[-1].note = "; ".join(notes)

    def maps():
        for X in sets:
            for Y in sets:
                for f in all_maps(X, Y):
                    yield f

    rep.check(
        "unit-natural",
        ((f, x) for f in maps() for x in f.source),
        lambda f, x: T.fmap(f, T.unit(f.source, x)) == T.unit(f.target, f(x)),
        lambda f, x: f"f={f!r} x={fmt(x)}",
    )

    def mult_nat():
        for f in maps():
            X = f.source
            Tf = T.fmap_map(f)
            ts, _ = _elements_or_sample(T, T.obj(X), rng, samples, limit)
            for tt in ts:
                yield f, Tf, tt

    rep.check(
        "mult-natural",
        mult_nat(),
        lambda f, Tf, tt: T.fmap(f, T.mult(f.source, tt)) == T.mult(f.target, T.fmap(Tf, tt)),
        lambda f, Tf, tt: f"f={f!r} tt={fmt(tt)}",
    )
    return rep


# -- monad morphisms ----------------------------------------------------------


class MonadMorphism:
    """A family of components ``alpha_X : SX -> TX``."""

    def __init__(self, source: FinMonad, target: FinMonad, name: str, fn: Callable[[FinSet, object], object]):
        self.source = source
        self.target = target
        self.name = name
        self._fn = fn
        self._maps: dict[FinSet, FinMap] = {}

    def component(self, X: FinSet, s):
        return self._fn(X, s)

    def component_map(self, X: FinSet) -> FinMap:
        if X not in self._maps:
            SX = self.source.obj(X)
            self._maps[X] = FinMap(SX, self.target.obj(X), [self._fn(X, s) for s in SX])
        return self._maps[X]

    def __repr__(self) -> str:
        return self.name


def identity_morphism(T: FinMonad) -> MonadMorphism:
    return MonadMorphism(T, T, f"id[{T.name}]", lambda X, s: s)


def two_to_powerset(P2: PVMonad | None = None, P: PowersetMonad | None = None) -> MonadMorphism:
    """``P_2 -> P``: a two-valued function goes to the set where it is true."""
    P2 = P2 or PVMonad(two())
    P = P or PowersetMonad()
    if P2.quantale.n != 2:
        raise StructureError("two_to_powerset needs the two-element quantale")
    k = P2.quantale.unit
    return MonadMorphism(
        P2, P, "two_to_powerset", lambda X, phi: frozenset(x for x, row in zip(X, phi.matrix) if row[0] == k)
    )


def two_to_filter(P2: PVMonad | None = None, F: FilterMonad | None = None) -> MonadMorphism:
    """``P_2 -> F``: a subset goes to its principal filter."""
    P2 = P2 or PVMonad(two())
    F = F or FilterMonad()
    if P2.quantale.n != 2:
        raise StructureError("two_to_filter needs the two-element quantale")
    k = P2.quantale.unit
    return MonadMorphism(
        P2, F, "two_to_filter", lambda X, phi: Up(frozenset(x for x, row in zip(X, phi.matrix) if row[0] == k))
    )


def lax_hom_morphism(h: LaxHom, PW: PVMonad | None = None, PV: PVMonad | None = None) -> MonadMorphism:
    """``P_W -> P_V, phi |-> h . phi``; refused unless ``h`` passes the lax-hom check."""
    rep = check_lax_hom(h)
    if not rep.passed:
        bad = rep.failures()[0]
        raise StructureError(f"not a lax homomorphism ({bad.law}: {bad.witness})")
    PW = PW or PVMonad(h.source)
    PV = PV or PVMonad(h.target)
    tab = h.table
    # build over PV's own quantale instance, which may be an equal copy of h.target
    V = PV.quantale
    return MonadMorphism(
        PW, PV, f"lax_hom({h.source.name}->{h.target.name})", lambda X, phi: vector(X, V, [tab[v] for v in values(phi)])
    )


def compose_morphisms(beta: MonadMorphism, alpha: MonadMorphism) -> MonadMorphism:
    """``beta . alpha``"""
    return MonadMorphism(
        alpha.source, beta.target, f"{beta.name}.{alpha.name}", lambda X, s: beta.component(X, alpha.component(X, s))
    )


def broken_naturality(alpha: MonadMorphism) -> MonadMorphism:
    """Mutation fixture: on nonempty sets, send the bottom element to the unit at the first point."""
    S, T = alpha.source, alpha.target

    def fn(X, s):
        if len(X) and s == S.obj(X)[0]:
            return T.unit(X, X[0])
        return alpha.component(X, s)

    return MonadMorphism(S, T, f"broken({alpha.name})", fn)


def check_monad_morphism(
    alpha: MonadMorphism,
    sizes: Sequence[int] = (0, 1, 2),
    limit: int = ENUM_LIMIT,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
) -> LawReport:
    S, T = alpha.source, alpha.target
    rng = random.Random(seed)
    rep = LawReport(f"morphism:{alpha.name}")
    sets = _test_sets(sizes)

    def nat_cases():
        for X in sets:
            for Y in sets:
                for f in all_maps(X, Y):
                    for s in S.obj(X):
                        yield f, s

    rep.check(
        "natural",
        nat_cases(),
        lambda f, s: alpha.component(f.target, S.fmap(f, s)) == T.fmap(f, alpha.component(f.source, s)),
        lambda f, s: f"f={f!r} s={fmt(s)}",
    )
    rep.check(
        "unit",
        ((X, x) for X in sets for x in X),
        lambda X, x: alpha.component(X, S.unit(X, x)) == T.unit(X, x),
        lambda X, x: f"|X|={len(X)} x={fmt(x)}",
    )
    modes = []

    def mult_cases():
        for X in sets:
            SX = S.obj(X)
            ss_list, mode = _elements_or_sample(S, SX, rng, samples, limit)
            modes.append(mode)
            aX = alpha.component_map(X)
            for ss in ss_list:
                yield X, SX, aX, ss

    def mult_ok(X, SX, aX, ss):
        lhs = alpha.component(X, S.mult(X, ss))
        rhs = T.mult(X, T.fmap(aX, alpha.component(SX, ss)))
        return lhs == rhs

    rep.check("mult", mult_cases(), mult_ok, lambda X, SX, aX, ss: f"|X|={len(X)} ss={fmt(ss)}")
    if "sampled" in modes:
        rep.results[-1].note = "SSX sampled where larger than enumeration limit"
    return rep


def search_morphisms_to_identity(V: Quantale, sizes: Sequence[int] = (0, 1, 2)) -> LawReport:
    """Exhaustively look for natural, unit-compatible families ``P_V X -> X``."""
    PV = PVMonad(V)
    rep = LawReport(f"search:pv({V.name})->identity")
    for n in sizes:
        X = fset(n)
        PX = PV.obj(X)
        endos = list(all_maps(X, X))
        count = 0
        for imgs in itertools.product(X.elements, repeat=len(PX)):
            comp = dict(zip(PX, imgs))
            if any(comp[PV.unit(X, x)] != x for x in X):
                continue
            if all(comp[PV.fmap(f, s)] == f(comp[s]) for f in endos for s in PX):
                count += 1
        rep.record(
            f"exists-at-{n}",
            count > 0,
            witness=f"no natural unit-compatible map V^X -> X for |X|={n} ({len(PX)} inputs)",
            cases=len(X) ** len(PX),
        )
    return rep


# -- V-actions and power-enrichment ------------------------------------------


@dataclass
class VAction:
    """A right V-action on a finite complete lattice given by its binary join and bottom."""

    carrier: FinSet
    quantale: Quantale
    act: Callable[[object, int], object]
    join: Callable[[object, object], object]
    bottom: object

    def le(self, x, y) -> bool:
        return self.join(x, y) == y


def check_vaction(A: VAction, name: str = "vaction") -> LawReport:
    Q = A.quantale
    rep = LawReport(name)
    C = A.carrier.elements
    rep.check(
        "act-assoc",
        ((x, v, u) for x in C for v in Q.elements for u in Q.elements),
        lambda x, v, u: A.act(x, Q.t[v][u]) == A.act(A.act(x, v), u),
        lambda x, v, u: f"x={fmt(x)} v={Q.labels[v]} u={Q.labels[u]}",
    )
    rep.check("act-unit", C, lambda x: A.act(x, Q.unit) == x, lambda x: f"x={fmt(x)}")
    rep.check(
        "act-join-scalar",
        ((x, v, u) for x in C for v in Q.elements for u in Q.elements),
        lambda x, v, u: A.act(x, Q.j[v][u]) == A.join(A.act(x, v), A.act(x, u)),
        lambda x, v, u: f"x={fmt(x)} v={Q.labels[v]} u={Q.labels[u]}",
    )
    rep.check("act-bottom-scalar", C, lambda x: A.act(x, Q.bottom) == A.bottom, lambda x: f"x={fmt(x)}")
    rep.check(
        "act-join-point",
        ((x, y, v) for x in C for y in C for v in Q.elements),
        lambda x, y, v: A.act(A.join(x, y), v) == A.join(A.act(x, v), A.act(y, v)),
        lambda x, y, v: f"x={fmt(x)} y={fmt(y)} v={Q.labels[v]}",
    )
    rep.check("act-bottom-point", Q.elements, lambda v: A.act(A.bottom, v) == A.bottom, lambda v: f"v={Q.labels[v]}")
    return rep


def algebra_from_action(A: VAction) -> Callable[[VRel], object]:
    """``a(phi) = V_x x * phi(x)``"""

    def a(phi: VRel):
        acc = A.bottom
        for x, row in zip(A.carrier, phi.matrix):
            acc = A.join(acc, A.act(x, row[0]))
        return acc

    return a


class Enrichment:
    """A monad ``T`` together with ``tau : P_V -> T``, and everything it induces on ``TX``.

    The internal hom ``hom(X)[x][y]`` is the value ``(y (/) x)`` with ``x`` first,
    computed from the action as the largest ``v`` with ``x * v <= y``.
    """

    def __init__(self, T: FinMonad, tau: MonadMorphism, validate: bool = True, sizes: Sequence[int] = (0, 1, 2)):
        if not isinstance(tau.source, PVMonad):
            raise StructureError("tau must start at a V-powerset monad")
        if tau.target is not T:
            raise StructureError("tau must land in the given monad")
        self.T = T
        self.tau = tau
        self.PV: PVMonad = tau.source
        self.V: Quantale = tau.source.quantale
        self.name = f"({T.name}, {tau.name})"
        self._hom: dict[FinSet, VRel] = {}
        self._order: dict[FinSet, tuple] = {}
        self._join_cache: dict[FinSet, dict] = {}
        if validate:
            rep = check_monad_morphism(tau, sizes=sizes)
            if not rep.passed:
                bad = rep.failures()[0]
                raise StructureError(f"tau is not a monad morphism ({bad.law}: {bad.witness})")

    # structure map a = m_X . tau_TX
    def algebra(self, X: FinSet, phi: VRel):
        TX = self.T.obj(X)
        return self.T.mult(X, self.tau.component(TX, phi))

    def _vec(self, X: FinSet, entries: dict):
        TX = self.T.obj(X)
        V = self.V
        vals = [V.bottom] * len(TX)
        for t, v in entries.items():
            i = TX.index(t)
            vals[i] = V.j[vals[i]][v]
        return vector(TX, V, vals)

    def act(self, X: FinSet, x, v: int):
        """``x * v = a(eta(x) (x) v)``"""
        return self.algebra(X, self._vec(X, {x: v}))

    def join(self, X: FinSet, x, y):
        cache = self._join_cache.setdefault(X, {})
        key = (x, y)
        if key not in cache:
            cache[key] = self.algebra(X, self._vec(X, {x: self.V.unit, y: self.V.unit}))
        return cache[key]

    def bottom(self, X: FinSet):
        TX = self.T.obj(X)
        return self.algebra(X, vector(TX, self.V, [self.V.bottom] * len(TX)))

    def le(self, X: FinSet, x, y) -> bool:
        return self.join(X, x, y) == y

    def order(self, X: FinSet) -> tuple[tuple[bool, ...], ...]:
        if X not in self._order:
            TX = self.T.obj(X)
            self._order[X] = tuple(tuple(self.le(X, x, y) for y in TX) for x in TX)
        return self._order[X]

    def vaction(self, X: FinSet) -> VAction:
        return VAction(self.T.obj(X), self.V, lambda x, v: self.act(X, x, v), lambda x, y: self.join(X, x, y), self.bottom(X))

    def hom(self, X: FinSet) -> VRel:
        if X not in self._hom:
            TX = self.T.obj(X)
            V = self.V
            order = self.order(X)
            rows = []
            for x in TX:
                acts = [TX.index(self.act(X, x, v)) for v in V.elements]
                rows.append(
                    [V.join_all(v for v in V.elements if order[acts[v]][yi]) for yi in range(len(TX))]
                )
            self._hom[X] = VRel(TX, TX, V, rows)
        return self._hom[X]

    def hom_enumerated(self, X: FinSet, cap: int = DEFAULT_CAP) -> VRel:
        """``K(a^-|)(x, y) = V { phi(x) | a(phi) = y }`` by enumerating ``V^TX``."""
        TX = self.T.obj(X)
        V = self.V
        PTX = self.PV.obj(TX, cap)
        rows = [[V.bottom] * len(TX) for _ in TX]
        for phi in PTX:
            yi = TX.index(self.algebra(X, phi))
            for xi, row in enumerate(phi.matrix):
                rows[xi][yi] = V.j[rows[xi][yi]][row[0]]
        return VRel(TX, TX, V, rows)

    def right_adjoint(self, X: FinSet, y) -> VRel:
        """``a^-|(y)``, the largest ``phi`` with ``a(phi) <= y``."""
        H = self.hom(X)
        yi = H.target.index(y)
        return vector(H.source, self.V, [row[yi] for row in H.matrix])

    def right_adjoint_enumerated(self, X: FinSet, y, cap: int = DEFAULT_CAP) -> VRel:
        TX = self.T.obj(X)
        V = self.V
        acc = [V.bottom] * len(TX)
        for phi in self.PV.obj(TX, cap):
            if self.le(X, self.algebra(X, phi), y):
                acc = [V.j[a][row[0]] for a, row in zip(acc, phi.matrix)]
        return vector(TX, V, acc)

    def flat(self, r: VRel) -> FinMap:
        """``tau_X . r^flat : Y -> TX``, the column of ``r`` at each ``y`` pushed along tau."""
        X, Y = r.source, r.target
        cols = [vector(X, self.V, [row[j] for row in r.matrix]) for j in range(len(Y))]
        return FinMap(Y, self.T.obj(X), [self.tau.component(X, c) for c in cols])

    def r_tau(self, r: VRel) -> FinMap:
        """``r^tau = m_X . T(tau_X . r^flat) : TY -> TX``"""
        g = self.flat(r)
        X = r.source
        TY = self.T.obj(r.target)
        return FinMap(TY, self.T.obj(X), [self.T.mult(X, self.T.fmap(g, t)) for t in TY])

    def lift(self, f: FinMap, X: FinSet) -> FinMap:
        """``L f = m_Y . Tf : TX -> TY`` for a Kleisli arrow ``f : X -> TY`` (``f.target`` is ``TY``)."""
        Y = _host_of(self.T, f.target)
        TX = self.T.obj(X)
        return FinMap(TX, f.target, [self.T.mult(Y, self.T.fmap(f, t)) for t in TX])

    def kleisli(self, f: FinMap, g: FinMap) -> FinMap:
        """``f <> g = m . Tf . g`` for ``g : Z -> TY`` and ``f : Y -> TX``."""
        X = _host_of(self.T, f.target)
        return FinMap(g.source, f.target, [self.T.mult(X, self.T.fmap(f, t)) for t in g.images])


def _host_of(T: FinMonad, TX: FinSet) -> FinSet:
    """Recover ``X`` from a carrier ``TX`` produced by ``T.obj``."""
    if isinstance(T, IdentityMonad):
        return TX
    X = T._hosts.get(id(TX))
    if X is None:
        for X0, C in T._obj_cache.items():
            if C == TX:
                return X0
        raise StructureError("set is not a known monad carrier")
    return X


def host_set(T: FinMonad, TX: FinSet) -> FinSet:
    return _host_of(T, TX)


def check_enrichment(
    enr: Enrichment,
    sizes: Sequence[int] = (0, 1, 2),
    limit: int = ENUM_LIMIT,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    dual_route_cap: int = 2 ** 16,
) -> LawReport:
    """Algebra laws for ``a = m . tau T``, the action, the internal hom and the adjoint retract."""
    rng = random.Random(seed)
    T, V, PV = enr.T, enr.V, enr.PV
    rep = LawReport(f"enrichment:{enr.name}")
    sets = _test_sets(sizes)

    rep.check(
        "algebra-unit",
        ((X, x) for X in sets for x in T.obj(X)),
        lambda X, x: enr.algebra(X, PV.unit(T.obj(X), x)) == x,
        lambda X, x: f"|X|={len(X)} x={fmt(x)}",
    )

    assoc_sets = [X for X in sets if PV.size(T.obj(X)) <= 2 ** 16]

    def assoc_cases():
        for X in assoc_sets:
            TX = T.obj(X)
            PTX = PV.obj(TX)
            k = samples if len(PTX) <= 1024 else max(16, samples * 1024 // len(PTX))
            Phis, _ = _elements_or_sample(PV, PTX, rng, k, limit)
            amap = FinMap(PTX, TX, [enr.algebra(X, phi) for phi in PTX])
            for Phi in Phis:
                yield X, TX, amap, Phi

    rep.check(
        "algebra-assoc",
        assoc_cases(),
        lambda X, TX, amap, Phi: enr.algebra(X, PV.mult(TX, Phi)) == enr.algebra(X, PV.fmap(amap, Phi)),
        lambda X, TX, amap, Phi: f"|X|={len(X)} Phi={fmt(Phi)}",
        note="" if len(assoc_sets) == len(sets) else "skipped where V^TX exceeds 2^16",
    )

    for X in sets:
        sub = check_vaction(enr.vaction(X), f"action@{len(X)}")
        rep.extend(sub, prefix=f"|X|={len(X)}:")

    def hom_cases():
        for X in sets:
            TX = T.obj(X)
            H = enr.hom(X)
            for xi, x in enumerate(TX):
                for yi, y in enumerate(TX):
                    for v in V.elements:
                        yield X, x, y, v, H.matrix[xi][yi]

    rep.check(
        "hom-adjunction",
        hom_cases(),
        lambda X, x, y, v, h: enr.le(X, enr.act(X, x, v), y) == V.leq[v][h],
        lambda X, x, y, v, h: f"|X|={len(X)} x={fmt(x)} y={fmt(y)} v={V.labels[v]}",
    )

    def join_identity(X, y):
        TX = T.obj(X)
        H = enr.hom(X)
        yi = TX.index(y)
        acc = enr.bottom(X)
        for xi, x in enumerate(TX):
            acc = enr.join(X, acc, enr.act(X, x, H.matrix[xi][yi]))
        return acc == y

    rep.check(
        "hom-join-identity",
        ((X, y) for X in sets for y in T.obj(X)),
        join_identity,
        lambda X, y: f"|X|={len(X)} y={fmt(y)}",
    )
    rep.check(
        "hom-reflexive",
        ((X, i) for X in sets for i in range(len(T.obj(X)))),
        lambda X, i: V.leq[V.unit][enr.hom(X).matrix[i][i]],
        lambda X, i: f"|X|={len(X)} x={fmt(T.obj(X)[i])}",
    )
    rep.check(
        "hom-transitive",
        ((X,) for X in sets),
        lambda X: all(
            V.leq[V.t[H[a][b]][H[b][c]]][H[a][c]]
            for H in [enr.hom(X).matrix]
            for a in range(len(H))
            for b in range(len(H))
            for c in range(len(H))
        ),
        lambda X: f"|X|={len(X)}",
    )
    rep.check(
        "order-antisymmetric",
        ((X,) for X in sets),
        lambda X: all(
            i == j or not (o[i][j] and o[j][i]) for o in [enr.order(X)] for i in range(len(o)) for j in range(len(o))
        ),
        lambda X: f"|X|={len(X)}",
    )

    checked = [X for X in sets if PV.size(T.obj(X)) <= dual_route_cap]
    rep.check(
        "hom-dual-route",
        checked,
        lambda X: enr.hom(X) == enr.hom_enumerated(X),
        lambda X: f"|X|={len(X)} action={enr.hom(X).compact()} enumerated={enr.hom_enumerated(X).compact()}",
        note="" if len(checked) == len(sets) else "enumeration route skipped where V^TX exceeds its cap",
    )

    def retract_cases():
        for X in checked:
            for y in T.obj(X):
                yield X, y

    rep.check(
        "adjoint-dual-route",
        retract_cases(),
        lambda X, y: enr.right_adjoint(X, y) == enr.right_adjoint_enumerated(X, y),
        lambda X, y: f"|X|={len(X)} y={fmt(y)}",
    )
    rep.check(
        "adjoint-retract",
        ((X, y) for X in sets for y in T.obj(X)),
        lambda X, y: enr.algebra(X, enr.right_adjoint(X, y)) == y,
        lambda X, y: f"|X|={len(X)} y={fmt(y)}",
    )

    def unit_cases():
        for X in sets:
            phis, _ = _elements_or_sample(PV, T.obj(X), rng, samples, limit)
            for phi in phis:
                yield X, phi

    from .vrel import rel_le

    rep.check(
        "adjoint-inflationary",
        unit_cases(),
        lambda X, phi: rel_le(phi, enr.right_adjoint(X, enr.algebra(X, phi))),
        lambda X, phi: f"|X|={len(X)} phi={fmt(phi)}",
    )
    return rep


def check_power_enriched(enr: Enrichment, sizes: Sequence[int] = (0, 1, 2), arrow_cap: int = 256) -> LawReport:
    """``f <= g  =>  m . Tf <= m . Tg`` for all Kleisli arrows ``f, g : X -> TY``.

    Hom-sets with more than ``arrow_cap`` arrows are skipped and listed in a note.
    """
    T = enr.T
    rep = LawReport(f"power-enriched:{enr.name}")
    sets = _test_sets(sizes)
    skipped = []
    for X in sets:
        for Y in sets:
            TY = T.obj(Y)
            if len(TY) ** len(X) > arrow_cap:
                skipped.append(f"X={len(X)} Y={len(Y)}")
                continue
            order = enr.order(Y)
            arrows = list(all_maps(X, TY))
            lifted = {f: enr.lift(f, X).indices() for f in arrows}
            idx = {f: f.indices() for f in arrows}

            def le_map(a, b):
                return all(order[i][j] for i, j in zip(a, b))

            rep.check(
                f"monotone-lift X={len(X)} Y={len(Y)}",
                ((f, g) for f in arrows for g in arrows if le_map(idx[f], idx[g])),
                lambda f, g: le_map(lifted[f], lifted[g]),
                lambda f, g: f"f={f!r} g={g!r}",
            )
    if skipped:
        rep.record("skipped-hom-sets", True, cases=0, note="over arrow cap: " + ", ".join(skipped))
    return rep


def tau_correspondences(
    enr: Enrichment,
    sizes: Sequence[int] = (0, 1, 2),
    rel_cap: int = 4096,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
) -> LawReport:
    """The functor ``E``, the lifting ``L`` and equivariance of ``Tf`` and ``m``."""
    from .vrel import all_vrels, cograph, compose, count_vrels, random_vrel

    rng = random.Random(seed)
    T, V, PV = enr.T, enr.V, enr.PV
    rep = LawReport(f"correspondences:{enr.name}")
    sets = _test_sets(sizes)

    rep.check(
        "E-extends-unit",
        (f for X in sets for Y in sets for f in all_maps(X, Y)),
        lambda f: enr.flat(cograph(f, V)).images == tuple(T.unit(f.target, f(x)) for x in f.source),
        lambda f: f"f={f!r}",
    )

    def comp_cases():
        for X in sets:
            for Y in sets:
                for Z in sets:
                    if count_vrels(X, Y, V) * count_vrels(Y, Z, V) <= rel_cap:
                        for r in all_vrels(X, Y, V):
                            for s in all_vrels(Y, Z, V):
                                yield r, s
                    else:
                        for _ in range(samples):
                            yield random_vrel(X, Y, V, rng), random_vrel(Y, Z, V, rng)

    rep.check(
        "E-functorial",
        comp_cases(),
        lambda r, s: enr.flat(compose(s, r)) == enr.kleisli(enr.flat(r), enr.flat(s)),
        lambda r, s: f"r={r.pretty()} s={s.pretty()}",
    )
    rep.check(
        "E-recovers-tau",
        ((X, phi) for X in sets for phi in PV.obj(X)),
        lambda X, phi: enr.flat(phi).images[0] == enr.tau.component(X, phi),
        lambda X, phi: f"|X|={len(X)} phi={fmt(phi)}",
    )

    def lift_cases():
        for X in sets:
            for Y in sets:
                TY = T.obj(Y)
                if len(TY) ** len(X) > 256:
                    continue
                for f in all_maps(X, TY):
                    yield X, Y, f, enr.lift(f, X)

    def equivariant(Xa, Ya, h: FinMap) -> bool:
        src = h.source
        for x in src:
            for v in V.elements:
                if h(enr.act(Xa, x, v)) != enr.act(Ya, h(x), v):
                    return False
        for x in src:
            for y in src:
                if h(enr.join(Xa, x, y)) != enr.join(Ya, h(x), h(y)):
                    return False
        return h(enr.bottom(Xa)) == enr.bottom(Ya)

    rep.check(
        "L-equivariant-sup",
        lift_cases(),
        lambda X, Y, f, Lf: equivariant(X, Y, Lf),
        lambda X, Y, f, Lf: f"f={f!r}",
    )
    rep.check(
        "Tf-equivariant-sup",
        (f for X in sets for Y in sets for f in all_maps(X, Y)),
        lambda f: equivariant(f.source, f.target, T.fmap_map(f)),
        lambda f: f"f={f!r}",
    )

    def mult_equivariant(X) -> bool:
        TX = T.obj(X)
        TTX = T.obj(TX)
        # acting at TX costs |TTX| per call, so fewer samples on large carriers
        k = samples if len(TTX) <= 256 else 24
        pts, _ = _elements_or_sample(T, TX, rng, k, 64)
        for tt in pts:
            for v in V.elements:
                if T.mult(X, enr.act(TX, tt, v)) != enr.act(X, T.mult(X, tt), v):
                    return False
        for a in pts[:16]:
            for b in pts[:16]:
                if T.mult(X, enr.join(TX, a, b)) != enr.join(X, T.mult(X, a), T.mult(X, b)):
                    return False
        return T.mult(X, enr.bottom(TX)) == enr.bottom(X)

    rep.check(
        "mult-equivariant-sup",
        [X for X in sets if T.size(T.obj(X)) <= DEFAULT_CAP],
        mult_equivariant,
        lambda X: f"|X|={len(X)}",
    )
    return rep
