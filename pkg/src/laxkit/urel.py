"""Unitary (T,V)-relations, the discrete presheaf monad and the Yoneda/adjunction checks.

A (T,V)-relation ``X -|-> Y`` is a V-relation ``TX -|-> Y``. Everything here is
parameterised by a :class:`Context` holding an associative lax extension.

ΠX is listed either by filtering ``V^TX`` through the unitarity test, or, for
Kleisli extensions where that is too large, as the image of the Yoneda map
``TX -> ΠX`` (which is onto in that case). The carrier strategy used for each
set is recorded in ``PresheafMonad.strategy``.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from .finmonad import (
    Enrichment,
    FinMonad,
    MonadMorphism,
    PVMonad,
    check_monad_morphism,
)
from .laxext import KleisliExtension, LaxExtension
from .quantale import Quantale
from .report import DEFAULT_CAP, CapExceeded, LawReport, StructureError
from .vrel import (
    ONE,
    FinMap,
    FinSet,
    VRel,
    all_maps,
    all_vrels,
    cograph,
    compose,
    compose_all,
    count_vrels,
    extension,
    fmt,
    fset,
    identity,
    point,
    rel_le,
    rel_meet,
)

FILTER_CAP = 2 ** 16
YONEDA_CAP = 4096


class Context:
    """A monad with an associative lax extension; refuses non-associative ones unless told not to check."""

    def __init__(self, ext: LaxExtension, check: bool = True, sizes: Sequence[int] | None = None):
        if check:
            ext.require_associative(sizes)
        self.ext = ext
        self.T: FinMonad = ext.monad
        self.V: Quantale = ext.quantale
        self.name = ext.name
        self._e1: dict[FinSet, VRel] = {}
        self._mop: dict[FinSet, VRel] = {}
        self._eop: dict[FinSet, VRel] = {}

    @property
    def enrichment(self) -> Enrichment | None:
        return self.ext.enrichment if isinstance(self.ext, KleisliExtension) else None

    def E(self, r: VRel) -> VRel:
        return self.ext(r)

    def E1(self, X: FinSet) -> VRel:
        if X not in self._e1:
            self._e1[X] = self.ext(identity(X, self.V))
        return self._e1[X]

    def m_op(self, X: FinSet) -> VRel:
        """``m_X^o : TX -|-> TTX``"""
        if X not in self._mop:
            self._mop[X] = cograph(self.T.mult_map(X), self.V)
        return self._mop[X]

    def e_op(self, X: FinSet) -> VRel:
        """``e_X^o : TX -|-> X``"""
        if X not in self._eop:
            self._eop[X] = cograph(self.T.unit_map(X), self.V)
        return self._eop[X]

    def __repr__(self) -> str:
        return f"Context({self.name})"


class TVRel:
    """A (T,V)-relation ``X -|-> Y`` carried by its underlying V-relation ``TX -|-> Y``."""

    __slots__ = ("ctx", "source", "target", "rel")

    def __init__(self, ctx: Context, X: FinSet, Y: FinSet, rel: VRel):
        if rel.source != ctx.T.obj(X) or rel.target != Y:
            raise StructureError("underlying relation must be TX -|-> Y")
        self.ctx = ctx
        self.source = X
        self.target = Y
        self.rel = rel

    def __eq__(self, other) -> bool:
        return isinstance(other, TVRel) and self.ctx is other.ctx and self.rel == other.rel

    def __hash__(self) -> int:
        return hash(self.rel)

    def __le__(self, other: "TVRel") -> bool:
        _same_ctx(self, other)
        return rel_le(self.rel, other.rel)

    def __repr__(self) -> str:
        return f"TVRel({self.rel.compact()})"


def _same_ctx(*rs: TVRel) -> Context:
    ctx = rs[0].ctx
    for r in rs[1:]:
        if r.ctx is not ctx:
            raise StructureError("(T,V)-relations from different contexts")
    return ctx


def lift(ctx: Context, X: FinSet, Y: FinSet, rel: VRel) -> TVRel:
    return TVRel(ctx, X, Y, rel)


def convolve(s: TVRel, r: TVRel) -> TVRel:
    """``s o r = s . Er . m_X^o``"""
    ctx = _same_ctx(s, r)
    if r.target != s.source:
        raise StructureError("(T,V)-relations do not chain")
    return TVRel(ctx, r.source, s.target, compose_all(s.rel, ctx.E(r.rel), ctx.m_op(r.source)))


def unit_sharp(ctx: Context, X: FinSet) -> TVRel:
    """``1_X^# = e_X^o . E1_X``"""
    return TVRel(ctx, X, X, compose(ctx.e_op(X), ctx.E1(X)))


def map_sharp(ctx: Context, f: FinMap) -> TVRel:
    """``f^# = e_X^o . E(f^o) : Y -|-> X`` for ``f : X -> Y``."""
    X = f.source
    return TVRel(ctx, f.target, X, compose(ctx.e_op(X), ctx.E(cograph(f, ctx.V))))


def rel_sharp(ctx: Context, r: VRel) -> TVRel:
    """``r_# = e_Y^o . Er : X -|-> Y``"""
    return TVRel(ctx, r.source, r.target, compose(ctx.e_op(r.target), ctx.E(r)))


def is_unitary(r: TVRel) -> bool:
    """Reduced form: ``r . E1_X = r`` and ``e_Y^o . Er . m_X^o = r``."""
    ctx = r.ctx
    X, Y = r.source, r.target
    if compose(r.rel, ctx.E1(X)) != r.rel:
        return False
    return compose_all(ctx.e_op(Y), ctx.E(r.rel), ctx.m_op(X)) == r.rel


def is_unitary_convolution(r: TVRel) -> bool:
    """``r o 1^# = r`` and ``1^# o r = r``."""
    ctx = r.ctx
    return convolve(r, unit_sharp(ctx, r.source)) == r and convolve(unit_sharp(ctx, r.target), r) == r


def unitary_extension(psi: TVRel, phi: TVRel) -> TVRel:
    """``(psi -o phi) = psi (/) (E phi . m_X^o) : Y -|-> Z``, right adjoint to ``(-) o phi``."""
    ctx = _same_ctx(psi, phi)
    if psi.source != phi.source:
        raise StructureError("unitary extension needs a shared source")
    along = compose(ctx.E(phi.rel), ctx.m_op(phi.source))
    return TVRel(ctx, phi.target, psi.target, extension(psi.rel, along))


def infimum(family: Sequence[TVRel], ctx: Context | None = None, X: FinSet | None = None, Y: FinSet | None = None) -> TVRel:
    family = list(family)
    if family:
        ctx = _same_ctx(*family)
        X, Y = family[0].source, family[0].target
    if ctx is None or X is None or Y is None:
        raise StructureError("empty infimum needs explicit context and boundaries")
    rel = rel_meet([r.rel for r in family], ctx.T.obj(X), Y, ctx.V)
    return TVRel(ctx, X, Y, rel)


def tupling(ctx: Context, Y: FinSet, X: FinSet, components: dict) -> TVRel:
    """The (T,V)-relation ``Y -|-> X`` whose column at ``x`` is ``components[x] : Y -|-> 1``."""
    TY = ctx.T.obj(Y)
    cols = []
    for x in X:
        c = components[x]
        if c.source != Y or c.target != ONE:
            raise StructureError("tuple components must be (T,V)-relations Y -|-> 1")
        cols.append([row[0] for row in c.rel.matrix])
    rows = [[cols[j][i] for j in range(len(X))] for i in range(len(TY))]
    return TVRel(ctx, Y, X, VRel(TY, X, ctx.V, rows))


def projection(ctx: Context, X: FinSet, x) -> TVRel:
    """``x^# : X -|-> 1``, the projection of the product ``1^X = X``."""
    return map_sharp(ctx, FinMap(ONE, X, [x]))


def column(r: TVRel, y) -> TVRel:
    """``y^o . r : X -|-> 1``"""
    j = r.target.index(y)
    return TVRel(r.ctx, r.source, ONE, VRel.trusted(r.rel.source, ONE, r.ctx.V, tuple((row[j],) for row in r.rel.matrix)))


def all_tvrels(ctx: Context, X: FinSet, Y: FinSet, cap: int = DEFAULT_CAP) -> Iterable[TVRel]:
    TX = ctx.T.obj(X)
    for rel in all_vrels(TX, Y, ctx.V, cap):
        yield TVRel(ctx, X, Y, rel)


def all_unitary(ctx: Context, X: FinSet, Y: FinSet, cap: int = DEFAULT_CAP) -> list[TVRel]:
    return [r for r in all_tvrels(ctx, X, Y, cap) if is_unitary(r)]


def is_unitary_pointwise(r: TVRel) -> bool:
    """Unitarity of every column ``y^o . r``."""
    return all(is_unitary(column(r, y)) for y in r.target)


# -- the discrete presheaf monad ----------------------------------------------


def _yoneda_column(ctx: Context, X: FinSet, t) -> VRel:
    """``t^# = t^o . E1_X : TX -|-> 1`` for ``t`` in ``TX``."""
    E1 = ctx.E1(X)
    j = E1.target.index(t)
    return VRel.trusted(E1.source, ONE, ctx.V, tuple((row[j],) for row in E1.matrix))


def _bounded_power(base: int, exp: int, cap: int) -> int | None:
    """``base ** exp`` if it is at most ``cap``, else None, without building huge integers."""
    if base <= 1:
        return 1
    acc = 1
    for _ in range(exp):
        acc *= base
        if acc > cap:
            return None
    return acc


class PresheafMonad(FinMonad):
    """ΠX = unitary (T,V)-relations ``X -|-> 1``, stored as V-relations ``TX -|-> 1``."""

    def __init__(self, ctx: Context, carrier: str = "auto", filter_cap: int = FILTER_CAP, yoneda_cap: int = YONEDA_CAP):
        super().__init__()
        if carrier not in ("auto", "filter", "yoneda"):
            raise StructureError(f"unknown carrier strategy {carrier!r}")
        if carrier == "yoneda" and ctx.enrichment is None:
            raise StructureError("the Yoneda carrier is only complete for Kleisli extensions")
        self.ctx = ctx
        self.carrier = carrier
        self.filter_cap = filter_cap
        self.yoneda_cap = yoneda_cap
        self.name = f"presheaf[{ctx.name}]"
        self.strategy: dict[FinSet, str] = {}

    def _choose(self, X: FinSet) -> str:
        T, V = self.ctx.T, self.ctx.V
        nTX = T.size(X)
        candidates = _bounded_power(V.n, nTX, self.filter_cap)
        kleisli = self.ctx.enrichment is not None
        filter_ok = candidates is not None and (not kleisli or T.size(T.obj(X)) <= self.yoneda_cap)
        yoneda_ok = kleisli and nTX <= self.yoneda_cap
        if self.carrier == "filter" or (self.carrier == "auto" and filter_ok):
            if candidates is None:
                raise CapExceeded(f"presheaf carrier on a {len(X)}-point set", f"{V.n}^{nTX}", self.filter_cap)
            return "filter"
        if yoneda_ok:
            return "yoneda"
        raise CapExceeded(f"presheaf carrier on a {len(X)}-point set", f"{V.n}^{nTX}", self.filter_cap)

    def obj(self, X: FinSet, cap: int = DEFAULT_CAP) -> FinSet:
        PX = self._obj_cache.get(X)
        if PX is not None:
            return PX
        how = self._choose(X)
        ctx = self.ctx
        TX = ctx.T.obj(X)
        if how == "filter":
            elems = []
            for phi in all_vrels(TX, ONE, ctx.V, self.filter_cap):
                if is_unitary(TVRel(ctx, X, ONE, phi)):
                    elems.append(phi)
        else:
            elems = sorted({_yoneda_column(ctx, X, t) for t in TX}, key=lambda r: r.matrix)
        PX = FinSet(elems)
        self.strategy[X] = how
        self._obj_cache[X] = PX
        self._hosts[id(PX)] = X
        return PX

    def _enumerate(self, X):
        return self.obj(X).elements

    def size(self, X):
        return len(self.obj(X))

    def fmap(self, f: FinMap, psi: VRel) -> VRel:
        """``Πf(psi) = psi o f^#``, evaluated as ``psi . E(f^o)``."""
        return compose(psi, self.ctx.E(cograph(f, self.ctx.V)))

    def fmap_generic(self, f: FinMap, psi: VRel) -> VRel:
        """``psi o f^#`` by the convolution formula."""
        ctx = self.ctx
        return convolve(TVRel(ctx, f.source, ONE, psi), map_sharp(ctx, f)).rel

    def unit(self, X: FinSet, x) -> VRel:
        """``x^# = e_1^o . E(x^o)``"""
        ctx = self.ctx
        return compose(ctx.e_op(ONE), ctx.E(point(X, ctx.V, x)))

    def evaluation(self, X: FinSet) -> VRel:
        """``eps_X : TX -|-> ΠX``, ``eps(t, psi) = psi(t)``."""
        PX = self.obj(X)
        TX = self.ctx.T.obj(X)
        return VRel(TX, PX, self.ctx.V, [[psi.matrix[i][0] for psi in PX] for i in range(len(TX))])

    def mult(self, X: FinSet, Psi: VRel) -> VRel:
        """``Psi o eps_X = Psi . E(eps_X) . m_X^o``"""
        ctx = self.ctx
        return compose_all(Psi, ctx.E(self.evaluation(X)), ctx.m_op(X))

    def sample(self, X, rng):
        PX = self.obj(X)
        return PX[rng.randrange(len(PX))]


def pi_morphism(Pi: PresheafMonad) -> MonadMorphism:
    """``pi_X(phi) = e_1^o . E(phi)`` from ``P_V``."""
    ctx = Pi.ctx
    PV = PVMonad(ctx.V)
    return MonadMorphism(PV, Pi, "pi", lambda X, phi: compose(ctx.e_op(ONE), ctx.E(phi)))


def yoneda_morphism(Pi: PresheafMonad) -> MonadMorphism:
    """``TX -> ΠX``, ``t |-> t^o . E1_X``."""
    ctx = Pi.ctx
    return MonadMorphism(ctx.T, Pi, "yoneda", lambda X, t: _yoneda_column(ctx, X, t))


def kappa_morphism(Pi: PresheafMonad, enr: Enrichment) -> MonadMorphism:
    """``kappa_X = m_X . tau_TX`` restricted to ΠX ⊆ V^TX."""
    return MonadMorphism(Pi, enr.T, "kappa", lambda X, psi: enr.algebra(X, psi))


class PresheafEnrichment(Enrichment):
    """``(Π, pi)`` with its hom and ``r^pi`` given in closed form.

    The hom on ΠX is the pointwise relational hom ``(psi (/) phi)`` and
    ``r^pi(psi) = psi . Er``. The inherited ``hom_enumerated``/action routes stay
    available for cross-checking.
    """

    def __init__(self, Pi: PresheafMonad, validate: bool = False):
        super().__init__(Pi, pi_morphism(Pi), validate=validate)
        self.Pi = Pi
        self.name = f"(presheaf, pi)[{Pi.ctx.name}]"

    def hom_generic(self, X: FinSet) -> VRel:
        return Enrichment.hom(self, X)

    def hom(self, X: FinSet) -> VRel:
        if X not in self._hom:
            PX = self.Pi.obj(X)
            V = self.V
            rows = []
            for phi in PX:
                row = []
                for psi in PX:
                    acc = V.top
                    for a, b in zip(phi.matrix, psi.matrix):
                        acc = V.m[acc][V.rres[a[0]][b[0]]]
                    row.append(acc)
                rows.append(row)
            self._hom[X] = VRel(PX, PX, V, rows)
        return self._hom[X]

    def r_tau_generic(self, r: VRel) -> FinMap:
        return Enrichment.r_tau(self, r)

    def r_tau(self, r: VRel) -> FinMap:
        ctx = self.Pi.ctx
        PY = self.Pi.obj(r.target)
        PX = self.Pi.obj(r.source)
        Er = ctx.E(r)
        return FinMap(PY, PX, [compose(psi, Er) for psi in PY])


def presheaf_kleisli_extension(Pi: PresheafMonad) -> KleisliExtension:
    return KleisliExtension(PresheafEnrichment(Pi), validate=False)


# -- nbhd / conv --------------------------------------------------------------


def _need_kleisli(ctx: Context) -> Enrichment:
    enr = ctx.enrichment
    if enr is None:
        raise StructureError("nbhd/conv need a Kleisli-extension context")
    return enr


def nbhd(r: TVRel) -> FinMap:
    """``Y -> TX``, ``y |-> a(r(-, y))`` with ``a = m_X . tau_TX``."""
    enr = _need_kleisli(r.ctx)
    X = r.source
    TX = r.ctx.T.obj(X)
    imgs = []
    for j in range(len(r.target)):
        col = VRel.trusted(TX, ONE, r.ctx.V, tuple((row[j],) for row in r.rel.matrix))
        imgs.append(enr.algebra(X, col))
    return FinMap(r.target, TX, imgs)


def conv(ctx: Context, X: FinSet, f: FinMap) -> TVRel:
    """``f^o . E1_X : X -|-> Y`` for ``f : Y -> TX``."""
    _need_kleisli(ctx)
    return TVRel(ctx, X, f.source, compose(cograph(f, ctx.V), ctx.E1(X)))


# -- morphisms of lax extensions ----------------------------------------------


def _mTalpha_op(ctxT: Context, alpha: MonadMorphism, X: FinSet) -> VRel:
    """``(m_X . T alpha_X)^o : TX -|-> TSX``"""
    T = ctxT.T
    aX = alpha.component_map(X)
    TSX = T.obj(alpha.source.obj(X))
    return cograph(FinMap(TSX, T.obj(X), [T.mult(X, T.fmap(aX, t)) for t in TSX]), ctxT.V)


def check_laxext_morphism(
    alpha: MonadMorphism,
    ctxS: Context,
    ctxT: Context,
    sizes: Sequence[int] = (0, 1),
    rel_cap: int = 4096,
    kleisli_inequality: bool | None = None,
) -> LawReport:
    """Naturality of ``(m . T alpha)^o . T1 : T -> T S`` and, for Kleisli pairs, ``Sr . alpha^o <= alpha^o . Tr``."""
    if alpha.source is not ctxS.T or alpha.target is not ctxT.T:
        raise StructureError("morphism does not match the contexts")
    V = ctxT.V
    rep = LawReport(f"laxext-morphism:{alpha.name}")
    sets = [fset(n) for n in sizes]

    def cases():
        for X in sets:
            for Y in sets:
                if count_vrels(X, Y, V) > rel_cap:
                    continue
                for r in all_vrels(X, Y, V):
                    yield r

    def natural(r):
        X, Y = r.source, r.target
        lhs = compose_all(_mTalpha_op(ctxT, alpha, Y), ctxT.E1(Y), ctxT.E(r))
        rhs = compose_all(ctxT.E(ctxS.E(r)), _mTalpha_op(ctxT, alpha, X), ctxT.E1(X))
        return lhs == rhs

    rep.check("natural", cases(), natural, lambda r: f"r={r.pretty()}")
    if kleisli_inequality is None:
        kleisli_inequality = ctxS.enrichment is not None and ctxT.enrichment is not None
    if kleisli_inequality:

        def ineq(r):
            aX = cograph(alpha.component_map(r.source), V)
            aY = cograph(alpha.component_map(r.target), V)
            return rel_le(compose(ctxS.E(r), aX), compose(aY, ctxT.E(r)))

        rep.check("kleisli-inequality", cases(), ineq, lambda r: f"r={r.pretty()}")
    return rep


def functor_A(alpha: MonadMorphism, ctxS: Context, ctxT: Context, r: TVRel) -> TVRel:
    """``Ar = e_Y^o . Tr . (m_X . T alpha_X)^o . T1_X``"""
    if r.ctx is not ctxS:
        raise StructureError("relation is not in the source context")
    X, Y = r.source, r.target
    rel = compose_all(ctxT.e_op(Y), ctxT.E(r.rel), _mTalpha_op(ctxT, alpha, X), ctxT.E1(X))
    return TVRel(ctxT, X, Y, rel)


def functor_F_on_morphism(alpha: MonadMorphism, PiS: PresheafMonad, PiT: PresheafMonad) -> MonadMorphism:
    """``Π(alpha)_X(r) = e_1^o . Tr . (m_X . T alpha_X)^o . T1_X`` as a map ``Π_S X -> Π_T X``."""
    ctxS, ctxT = PiS.ctx, PiT.ctx
    return MonadMorphism(
        PiS, PiT, f"F({alpha.name})", lambda X, r: functor_A(alpha, ctxS, ctxT, TVRel(ctxS, X, ONE, r)).rel
    )


# -- bundled checks -----------------------------------------------------------


def kleisli_context(enr: Enrichment, sizes: Sequence[int] | None = None, check: bool = True) -> Context:
    return Context(KleisliExtension(enr, validate=check), check=check, sizes=sizes)


def check_yoneda(Pi: PresheafMonad, sizes: Sequence[int] = (0, 1, 2), rel_cap: int = 256) -> LawReport:
    """Yoneda lemma ``(psi (/) t^#) = psi(t)`` and ``Er(x, y) = Π^r(x^#, y^#)``."""
    ctx = Pi.ctx
    V = ctx.V
    penr = PresheafEnrichment(Pi)
    PiK = KleisliExtension(penr, validate=False)
    Y_ = yoneda_morphism(Pi)
    rep = LawReport(f"yoneda:{ctx.name}")
    sets = [fset(n) for n in sizes]

    def lemma_cases():
        for X in sets:
            PX = Pi.obj(X)
            H = penr.hom(X)
            for t in ctx.T.obj(X):
                ti = PX.index(Y_.component(X, t))
                for pj, psi in enumerate(PX):
                    yield X, t, ti, pj, psi, H

    rep.check(
        "lemma",
        lemma_cases(),
        lambda X, t, ti, pj, psi, H: H.matrix[ti][pj] == psi.matrix[ctx.T.obj(X).index(t)][0],
        lambda X, t, ti, pj, psi, H: f"|X|={len(X)} t={fmt(t)} psi={fmt(psi)}",
    )

    def prop_cases():
        for X in sets:
            for Yset in sets:
                if count_vrels(X, Yset, V) > rel_cap:
                    continue
                for r in all_vrels(X, Yset, V):
                    yield r

    def prop(r):
        Er = ctx.E(r)
        Pr = PiK(r)
        X, Yset = r.source, r.target
        PX, PY = Pi.obj(X), Pi.obj(Yset)
        xs = [PX.index(Y_.component(X, t)) for t in ctx.T.obj(X)]
        ys = [PY.index(Y_.component(Yset, t)) for t in ctx.T.obj(Yset)]
        return all(Er.matrix[i][j] == Pr.matrix[xs[i]][ys[j]] for i in range(len(xs)) for j in range(len(ys)))

    rep.check("extension-restricts", prop_cases(), prop, lambda r: f"r={r.pretty()}")
    rep.check(
        "yoneda-injective",
        sets,
        lambda X: len({Y_.component(X, t) for t in ctx.T.obj(X)}) == len(ctx.T.obj(X)),
        lambda X: f"|X|={len(X)}",
    )
    return rep


def _computable(thunk) -> bool:
    try:
        thunk()
    except CapExceeded:
        return False
    return True


def check_adjunction(
    enr: Enrichment,
    sizes: Sequence[int] = (0, 1),
    ctx: Context | None = None,
    samples: int = 200,
    seed: int = 0,
) -> LawReport:
    """Counit ``kappa`` is an iso of enriched monads; both triangle identities hold."""
    ctx = ctx or kleisli_context(enr)
    Pi = PresheafMonad(ctx)
    V, T = enr.V, enr.T
    rep = LawReport(f"adjunction:{enr.name}")
    sets = [fset(n) for n in sizes]
    kappa = kappa_morphism(Pi, enr)
    Yo = yoneda_morphism(Pi)
    pi = pi_morphism(Pi)

    rep.check(
        "carrier-sizes",
        sets,
        lambda X: len(Pi.obj(X)) == len(T.obj(X)),
        lambda X: f"|X|={len(X)} |ΠX|={len(Pi.obj(X))} |TX|={len(T.obj(X))}",
    )
    rep.check(
        "kappa-bijective",
        sets,
        lambda X: len({kappa.component(X, psi) for psi in Pi.obj(X)}) == len(T.obj(X)) == len(Pi.obj(X)),
        lambda X: f"|X|={len(X)}",
    )
    mm_sizes = [len(X) for X in sets if _computable(lambda X=X: Pi.size(Pi.obj(X)))]
    mm = check_monad_morphism(kappa, sizes=mm_sizes, samples=samples, seed=seed)
    skipped = [str(n) for n in sizes if n not in mm_sizes]
    if skipped:
        for res in mm.results:
            res.note = (res.note + "; " if res.note else "") + f"|X|={','.join(skipped)} skipped: ΠΠX beyond cap"
    rep.extend(mm, prefix="kappa-")
    rep.check(
        "kappa-under-PV",
        ((X, phi) for X in sets for phi in PVMonad(V).obj(X)),
        lambda X, phi: kappa.component(X, pi.component(X, phi)) == enr.tau.component(X, phi),
        lambda X, phi: f"|X|={len(X)} phi={fmt(phi)}",
    )
    rep.check(
        "triangle-counit-after-yoneda",
        ((X, t) for X in sets for t in T.obj(X)),
        lambda X, t: kappa.component(X, Yo.component(X, t)) == t,
        lambda X, t: f"|X|={len(X)} t={fmt(t)}",
    )

    # second triangle: kappa of (Π, pi) after F(yoneda)
    penr = PresheafEnrichment(Pi)
    ctxPi = Context(KleisliExtension(penr, validate=False), check=False)
    PiPi = PresheafMonad(ctxPi)
    Fy = functor_F_on_morphism(Yo, Pi, PiPi)

    def kappa_pi(X, Phi):
        return penr.algebra(X, Phi)

    def tri2(X, psi):
        return kappa_pi(X, Fy.component(X, psi)) == psi

    tri_sets = [X for X in sets if _computable(lambda X=X: Pi.obj(T.obj(X)))]
    rep.check(
        "triangle-kappa-after-F-yoneda",
        ((X, psi) for X in tri_sets for psi in Pi.obj(X)),
        tri2,
        lambda X, psi: f"|X|={len(X)} psi={fmt(psi)}",
    )
    if len(tri_sets) < len(sets):
        gone = ",".join(str(len(X)) for X in sets if X not in tri_sets)
        rep.results[-1].note = f"|X|={gone} skipped: Π(TX) beyond cap"
    strategies = sorted({f"{len(X)}:{s}" for X, s in Pi.strategy.items()})
    rep.record("carrier-strategy", True, cases=0, note="presheaf carriers " + " ".join(strategies))
    return rep


def check_nbhd_conv(ctx: Context, sizes: Sequence[int] = (0, 1, 2), cap: int = 2 ** 16) -> LawReport:
    """Round trips, monotonicity, units and functoriality of nbhd and conv."""
    enr = _need_kleisli(ctx)
    T, V = ctx.T, ctx.V
    rep = LawReport(f"nbhd-conv:{ctx.name}")
    sets = [fset(n) for n in sizes]
    pairs = [(X, Y) for X in sets for Y in sets if V.n ** (len(T.obj(X)) * len(Y)) <= cap]
    unitary = {(X, Y): all_unitary(ctx, X, Y) for X, Y in pairs}
    arrows = {(X, Y): list(all_maps(Y, T.obj(X))) for X, Y in pairs}

    rep.check(
        "conv-after-nbhd",
        (r for k in pairs for r in unitary[k]),
        lambda r: conv(ctx, r.source, nbhd(r)) == r,
        lambda r: f"r={r.rel.pretty()}",
    )
    rep.check(
        "nbhd-after-conv",
        ((X, f) for (X, Y) in pairs for f in arrows[(X, Y)]),
        lambda X, f: nbhd(conv(ctx, X, f)) == f,
        lambda X, f: f"f={f!r}",
    )
    rep.check(
        "conv-unitary",
        ((X, f) for (X, Y) in pairs for f in arrows[(X, Y)]),
        lambda X, f: is_unitary(conv(ctx, X, f)),
        lambda X, f: f"f={f!r}",
    )

    def le_maps(X, f, g):
        o = enr.order(X)
        TX = T.obj(X)
        return all(o[TX.index(a)][TX.index(b)] for a, b in zip(f.images, g.images))

    rep.check(
        "nbhd-monotone",
        ((r, s) for k in pairs for r in unitary[k] for s in unitary[k] if r <= s),
        lambda r, s: le_maps(r.source, nbhd(r), nbhd(s)),
        lambda r, s: f"r={r.rel.pretty()} s={s.rel.pretty()}",
    )
    rep.check(
        "conv-monotone",
        ((X, f, g) for (X, Y) in pairs for f in arrows[(X, Y)] for g in arrows[(X, Y)] if le_maps(X, f, g)),
        lambda X, f, g: conv(ctx, X, f) <= conv(ctx, X, g),
        lambda X, f, g: f"f={f!r} g={g!r}",
    )
    rep.check(
        "nbhd-unit",
        sets,
        lambda X: nbhd(unit_sharp(ctx, X)) == T.unit_map(X),
        lambda X: f"|X|={len(X)}",
    )
    rep.check(
        "conv-unit",
        sets,
        lambda X: conv(ctx, X, T.unit_map(X)) == unit_sharp(ctx, X),
        lambda X: f"|X|={len(X)}",
    )

    def comp_cases():
        for X, Y in pairs:
            for Y2, Z in pairs:
                if Y2 != Y:
                    continue
                for r in unitary[(X, Y)]:
                    for s in unitary[(Y, Z)]:
                        yield r, s

    rep.check(
        "nbhd-functorial",
        comp_cases(),
        lambda r, s: nbhd(convolve(s, r)) == enr.kleisli(nbhd(r), nbhd(s)),
        lambda r, s: f"r={r.rel.pretty()} s={s.rel.pretty()}",
    )
    rep.check(
        "sharp-commutes",
        (f for X in sets for Y in sets for f in all_maps(X, Y) if (Y, X) in pairs),
        lambda f: nbhd(map_sharp(ctx, f)) == FinMap(f.source, T.obj(f.target), [T.unit(f.target, f(x)) for x in f.source]),
        lambda f: f"f={f!r}",
    )
    return rep


def dropped_unit(ctx: Context, X: FinSet) -> TVRel:
    """Mutation fixture: the bottom relation offered as the convolution unit."""
    TX = ctx.T.obj(X)
    return TVRel(ctx, X, X, VRel.trusted(TX, X, ctx.V, tuple((ctx.V.bottom,) * len(X) for _ in TX)))


def check_convolution_monoid(
    ctx: Context,
    sizes: Sequence[int] = (0, 1, 2),
    cap: int = 2 ** 16,
    triple_cap: int = 50000,
    unit=unit_sharp,
) -> LawReport:
    """Unit and associativity of Kleisli convolution on unitary relations."""
    V, T = ctx.V, ctx.T
    tag = "" if unit is unit_sharp else f"[unit={getattr(unit, '__name__', 'custom')}]"
    rep = LawReport(f"convolution:{ctx.name}{tag}")
    sets = [fset(n) for n in sizes]
    unitary = {}
    for X in sets:
        for Y in sets:
            if V.n ** (len(T.obj(X)) * len(Y)) <= cap:
                unitary[(X, Y)] = all_unitary(ctx, X, Y)
    rep.check(
        "unit-sharp-unitary",
        sets,
        lambda X: is_unitary(unit(ctx, X)),
        lambda X: f"|X|={len(X)}",
    )
    rep.check(
        "unit-left",
        (r for rs in unitary.values() for r in rs),
        lambda r: convolve(unit(ctx, r.target), r) == r,
        lambda r: f"r={r.rel.pretty()}",
    )
    rep.check(
        "unit-right",
        (r for rs in unitary.values() for r in rs),
        lambda r: convolve(r, unit(ctx, r.source)) == r,
        lambda r: f"r={r.rel.pretty()}",
    )

    skipped: list = []

    def triples():
        for (X, Y), rs in unitary.items():
            for (Y2, Z), ss in unitary.items():
                if Y2 != Y:
                    continue
                for (Z2, W), ts in unitary.items():
                    if Z2 != Z:
                        continue
                    if len(rs) * len(ss) * len(ts) > triple_cap:
                        skipped.append((len(X), len(Y), len(Z), len(W)))
                        continue
                    for r in rs:
                        for s in ss:
                            for t in ts:
                                yield r, s, t

    rep.check(
        "associative",
        triples(),
        lambda r, s, t: convolve(t, convolve(s, r)) == convolve(convolve(t, s), r),
        lambda r, s, t: f"r={r.rel.pretty()} s={s.rel.pretty()} t={t.rel.pretty()}",
    )
    if skipped:
        rep.results[-1].note = "skipped boundary chains over cap: " + " ".join("-".join(map(str, c)) for c in skipped)
    rep.check(
        "closed",
        ((r, s) for (X, Y), rs in unitary.items() for (Y2, Z), ss in unitary.items() if Y2 == Y for r in rs for s in ss),
        lambda r, s: is_unitary(convolve(s, r)),
        lambda r, s: f"r={r.rel.pretty()} s={s.rel.pretty()}",
    )
    return rep


def check_presheaf_monad(Pi: PresheafMonad, sizes: Sequence[int] = (0, 1), seed: int = 0) -> LawReport:
    """Monad laws for Π, the shortcut ``Πf`` against the convolution formula, and ``pi`` as a monad morphism."""
    from .finmonad import check_monad_laws

    rep = check_monad_laws(Pi, sizes=sizes, seed=seed)
    rep.suite = f"presheaf:{Pi.ctx.name}"
    sets = [fset(n) for n in sizes]
    rep.check(
        "fmap-shortcut",
        ((f, psi) for X in sets for Y in sets for f in all_maps(X, Y) for psi in Pi.obj(X)),
        lambda f, psi: Pi.fmap(f, psi) == Pi.fmap_generic(f, psi),
        lambda f, psi: f"f={f!r} psi={fmt(psi)}",
    )
    rep.check(
        "unit-injective",
        sets,
        lambda X: len({Pi.unit(X, x) for x in X}) == len(X),
        lambda X: f"|X|={len(X)}",
    )
    rep.extend(check_monad_morphism(pi_morphism(Pi), sizes=sizes, seed=seed), prefix="pi-")
    return rep


def check_presheaf_enrichment(Pi: PresheafMonad, sizes: Sequence[int] = (0, 1)) -> LawReport:
    """The order from ``pi`` is pointwise, and the closed-form hom and ``r^pi`` match the generic ones."""
    penr = PresheafEnrichment(Pi)
    ctx = Pi.ctx
    V = ctx.V
    rep = LawReport(f"presheaf-enrichment:{ctx.name}")
    sets = [fset(n) for n in sizes]
    rep.check(
        "order-pointwise",
        ((X, a, b) for X in sets for a in Pi.obj(X) for b in Pi.obj(X)),
        lambda X, a, b: penr.le(X, a, b) == rel_le(a, b),
        lambda X, a, b: f"|X|={len(X)} phi={fmt(a)} psi={fmt(b)}",
    )
    rep.check(
        "hom-closed-form",
        sets,
        lambda X: penr.hom(X) == penr.hom_generic(X),
        lambda X: f"|X|={len(X)}",
    )
    rep.check(
        "action-closed-form",
        ((X, phi, v) for X in sets for phi in Pi.obj(X) for v in V.elements),
        lambda X, phi, v: penr.act(X, phi, v)
        == compose_all(ctx.e_op(ONE), ctx.E(_tensor(phi, v)), ctx.m_op(X)),
        lambda X, phi, v: f"|X|={len(X)} phi={fmt(phi)} v={V.labels[v]}",
    )
    rep.check(
        "rpi-closed-form",
        (r for X in sets for Y in sets if count_vrels(X, Y, V) <= 256 for r in all_vrels(X, Y, V)),
        lambda r: penr.r_tau(r) == penr.r_tau_generic(r),
        lambda r: f"r={r.pretty()}",
    )
    return rep


def _tensor(phi: VRel, v: int) -> VRel:
    t = phi.quantale.t
    return VRel.trusted(phi.source, phi.target, phi.quantale, tuple(tuple(t[a][v] for a in row) for row in phi.matrix))


def _natural_unital(alpha: MonadMorphism, sets: Sequence[FinSet]) -> bool:
    S, T = alpha.source, alpha.target
    for X in sets:
        if any(alpha.component(X, S.unit(X, x)) != T.unit(X, x) for x in X):
            return False
        for Y in sets:
            for f in all_maps(X, Y):
                if any(alpha.component(Y, S.fmap(f, s)) != T.fmap(f, alpha.component(X, s)) for s in S.obj(X)):
                    return False
    return True


def spot_check_fullness(
    S_enr: Enrichment, T_enr: Enrichment, sizes: Sequence[int] = (0, 1), ctxS: Context | None = None, ctxT: Context | None = None
) -> LawReport:
    """Every family ``SX -> TX`` (at the given sizes) that is a monad morphism and a lax-extension
    morphism between the Kleisli extensions also satisfies ``alpha . sigma = tau``."""
    ctxS = ctxS or kleisli_context(S_enr)
    ctxT = ctxT or kleisli_context(T_enr)
    S, T = S_enr.T, T_enr.T
    sets = [fset(n) for n in sizes]
    rep = LawReport(f"fullness:{S_enr.name}->{T_enr.name}")
    slots = [(X, s) for X in sets for s in S.obj(X)]
    choices = [list(T.obj(X)) for X, _ in slots]
    found = 0
    good = 0
    bad = ""
    for imgs in itertools.product(*choices):
        table = dict(zip(slots, imgs))
        alpha = MonadMorphism(S, T, "candidate", lambda X, s, table=table: table[(X, s)])
        if not _natural_unital(alpha, sets):
            continue
        lx = check_laxext_morphism(alpha, ctxS, ctxT, sizes=sizes, kleisli_inequality=False)
        if not lx.passed:
            continue
        found += 1
        ok = all(
            alpha.component(X, S_enr.tau.component(X, phi)) == T_enr.tau.component(X, phi)
            for X in sets
            for phi in S_enr.PV.obj(X)
        )
        if ok:
            good += 1
        elif not bad:
            bad = " ".join(f"{fmt(s)}->{fmt(t)}" for (X, s), t in table.items())
    rep.record(
        "morphisms-respect-structure",
        good == found,
        witness=bad,
        cases=found,
        note="candidates filtered by naturality, unit and lax-extension naturality within the listed sizes",
    )
    return rep


def check_urel_structure(ctx: Context, sizes: Sequence[int] = (0, 1, 2), cap: int = 4096, pair_cap: int = 20000) -> LawReport:
    """Sharp maps, the two unitarity tests, right adjoints of convolution, infima and tupling."""
    V, T = ctx.V, ctx.T
    rep = LawReport(f"urel:{ctx.name}")
    sets = [fset(n) for n in sizes]
    homs = {}
    for X in sets:
        for Y in sets:
            if _bounded_power(V.n, len(T.obj(X)) * len(Y), cap) is not None:
                homs[(X, Y)] = list(all_tvrels(ctx, X, Y))
    unitary = {k: [r for r in rs if is_unitary(r)] for k, rs in homs.items()}

    rep.check(
        "unitary-forms-agree",
        (r for rs in homs.values() for r in rs),
        lambda r: is_unitary(r) == is_unitary_convolution(r),
        lambda r: f"r={r.rel.pretty()}",
    )
    rep.check(
        "unitary-pointwise",
        (r for rs in homs.values() for r in rs),
        lambda r: is_unitary(r) == is_unitary_pointwise(r),
        lambda r: f"r={r.rel.pretty()}",
    )
    maps = [f for X in sets for Y in sets for f in all_maps(X, Y)]
    rep.check("sharp-unitary", maps, lambda f: is_unitary(map_sharp(ctx, f)), lambda f: f"f={f!r}")
    rep.check(
        "sharp-identity",
        sets,
        lambda X: map_sharp(ctx, FinMap.identity(X)) == unit_sharp(ctx, X),
        lambda X: f"|X|={len(X)}",
    )
    rep.check(
        "sharp-functorial",
        ((f, g) for f in maps for g in maps if f.target == g.source),
        lambda f, g: convolve(map_sharp(ctx, f), map_sharp(ctx, g)) == map_sharp(ctx, f.then(g)),
        lambda f, g: f"f={f!r} g={g!r}",
    )

    def after_sharp(f, phi):
        lhs = convolve(map_sharp(ctx, f), phi)
        return lhs.rel == compose(cograph(f, V), phi.rel)

    rep.check(
        "sharp-after-unitary",
        ((f, phi) for f in maps for (X, Y), rs in unitary.items() if Y == f.target for phi in rs),
        after_sharp,
        lambda f, phi: f"f={f!r} phi={phi.rel.pretty()}",
    )

    def adj_cases():
        for (X, Z), psis in unitary.items():
            for (X2, Y), phis in unitary.items():
                if X2 != X or (Y, Z) not in homs:
                    continue
                gammas = unitary[(Y, Z)]
                if len(psis) * len(phis) * len(gammas) > pair_cap:
                    continue
                for psi in psis:
                    for phi in phis:
                        yield psi, phi, gammas

    def adj(psi, phi, gammas):
        ext = unitary_extension(psi, phi)
        return is_unitary(ext) and all((convolve(g, phi) <= psi) == (g <= ext) for g in gammas)

    rep.check(
        "unitary-extension-adjoint",
        adj_cases(),
        adj,
        lambda psi, phi, gammas: f"psi={psi.rel.pretty()} phi={phi.rel.pretty()}",
    )
    rep.check(
        "unitary-extension-unit",
        (psi for rs in unitary.values() for psi in rs),
        lambda psi: unitary_extension(psi, unit_sharp(ctx, psi.source)) == psi,
        lambda psi: f"psi={psi.rel.pretty()}",
    )
    rep.check(
        "infimum-unitary",
        ((a, b) for rs in unitary.values() if len(rs) ** 2 <= pair_cap for a in rs for b in rs),
        lambda a, b: is_unitary(infimum([a, b])),
        lambda a, b: f"a={a.rel.pretty()} b={b.rel.pretty()}",
    )
    rep.check(
        "infimum-empty-unitary",
        list(homs),
        lambda X, Y: is_unitary(infimum([], ctx, X, Y)),
        lambda X, Y: f"|X|={len(X)} |Y|={len(Y)}",
    )

    def tuple_cases():
        for (Y, X), rs in unitary.items():
            if (Y, ONE) not in homs and (Y, fset(1)) not in homs:
                continue
            for r in rs:
                yield r

    def tuple_ok(r):
        comps = {x: column(r, x) for x in r.target}
        t = tupling(ctx, r.source, r.target, comps)
        proj_ok = all(convolve(projection(ctx, r.target, x), t) == comps[x] for x in r.target)
        return t == r and proj_ok

    rep.check("tupling-unique", tuple_cases(), tuple_ok, lambda r: f"r={r.rel.pretty()}")
    return rep


def check_yoneda_morphism(Pi: PresheafMonad, sizes: Sequence[int] = (0, 1), seed: int = 0) -> LawReport:
    """The Yoneda map is a monad morphism ``T -> Π`` and a morphism of lax extensions."""
    Yo = yoneda_morphism(Pi)
    rep = LawReport(f"yoneda-morphism:{Pi.ctx.name}")
    mm_sizes = [n for n in sizes if _computable(lambda n=n: Pi.size(Pi.obj(fset(n))))]
    rep.extend(check_monad_morphism(Yo, sizes=mm_sizes, seed=seed), prefix="monad-")
    ctxPi = Context(presheaf_kleisli_extension(Pi), check=False)
    lx = check_laxext_morphism(Yo, Pi.ctx, ctxPi, sizes=sizes, kleisli_inequality=False)
    rep.extend(lx, prefix="laxext-")
    return rep


def check_functor_F(
    alpha: MonadMorphism, ctxS: Context, ctxT: Context, sizes: Sequence[int] = (0, 1), cap: int = 4096, seed: int = 0
) -> LawReport:
    """``A`` fixes sharp maps and preserves convolution; ``Π(alpha)`` is a monad morphism under the pi-structures."""
    PiS, PiT = PresheafMonad(ctxS), PresheafMonad(ctxT)
    V = ctxS.V
    rep = LawReport(f"functor-F:{alpha.name}")
    sets = [fset(n) for n in sizes]

    def A(r):
        return functor_A(alpha, ctxS, ctxT, r)

    maps = [f for X in sets for Y in sets for f in all_maps(X, Y)]
    rep.check("A-fixes-sharp", maps, lambda f: A(map_sharp(ctxS, f)) == map_sharp(ctxT, f), lambda f: f"f={f!r}")
    rep.check("A-unit", sets, lambda X: A(unit_sharp(ctxS, X)) == unit_sharp(ctxT, X), lambda X: f"|X|={len(X)}")
    unitary = {}
    for X in sets:
        for Y in sets:
            if _bounded_power(V.n, len(ctxS.T.obj(X)) * len(Y), cap) is not None:
                unitary[(X, Y)] = all_unitary(ctxS, X, Y)
    rep.check(
        "A-unitary",
        (r for rs in unitary.values() for r in rs),
        lambda r: is_unitary(A(r)),
        lambda r: f"r={r.rel.pretty()}",
    )
    rep.check(
        "A-convolution",
        ((r, s) for (X, Y), rs in unitary.items() for (Y2, Z), ss in unitary.items() if Y2 == Y for r in rs for s in ss),
        lambda r, s: A(convolve(s, r)) == convolve(A(s), A(r)),
        lambda r, s: f"r={r.rel.pretty()} s={s.rel.pretty()}",
    )
    F = functor_F_on_morphism(alpha, PiS, PiT)
    mm_sizes = [n for n in sizes if _computable(lambda n=n: PiS.size(PiS.obj(fset(n))))]
    rep.extend(check_monad_morphism(F, sizes=mm_sizes, seed=seed), prefix="F-monad-")
    piS, piT = pi_morphism(PiS), pi_morphism(PiT)
    rep.check(
        "F-under-pi",
        ((X, phi) for X in sets for phi in piS.source.obj(X)),
        lambda X, phi: F.component(X, piS.component(X, phi)) == piT.component(X, phi),
        lambda X, phi: f"|X|={len(X)} phi={fmt(phi)}",
    )
    return rep
