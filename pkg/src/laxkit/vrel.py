"""V-relations as dense quantale-valued matrices, and the category Rel_V.

Composition follows the convention ``(s . r)(x, z) = V_y r(x, y) (x) s(y, z)``:
``r`` is applied first and its value sits on the left of the tensor.
"""

from __future__ import annotations

import itertools
import random
from functools import reduce
from typing import Callable, Iterable, Iterator, Sequence

from .quantale import Quantale
from .report import DEFAULT_CAP, CapExceeded, StructureError


class FinSet:
    """An ordered finite set of distinct hashable points."""

    __slots__ = ("elements", "_index", "_hash")

    def __init__(self, elements: Iterable):
        self.elements = tuple(elements)
        self._index = {e: i for i, e in enumerate(self.elements)}
        if len(self._index) != len(self.elements):
            raise StructureError("FinSet labels must be distinct")
        self._hash = None

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in self._index

    def index(self, x) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise StructureError(f"{x!r} is not an element of this set") from None

    def __getitem__(self, i: int):
        return self.elements[i]

    def __eq__(self, other) -> bool:
        return self is other or (isinstance(other, FinSet) and self.elements == other.elements)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(("FinSet", self.elements))
        return self._hash

    def __repr__(self) -> str:
        if len(self) <= 6:
            return "{" + ", ".join(fmt(e) for e in self.elements) + "}"
        return f"FinSet(<{len(self)} points>)"


_STD_SETS: dict[int, FinSet] = {}


def fset(n: int) -> FinSet:
    """The standard n-point set {0, ..., n-1} (interned)."""
    if n not in _STD_SETS:
        _STD_SETS[n] = FinSet(range(n))
    return _STD_SETS[n]


ONE = FinSet(("*",))
STAR = "*"


def fmt(x) -> str:
    """Deterministic rendering of points, independent of hash seeds."""
    if isinstance(x, frozenset):
        return "{" + ",".join(sorted(fmt(e) for e in x)) + "}"
    if isinstance(x, tuple):
        return "(" + ",".join(fmt(e) for e in x) + ")"
    if isinstance(x, VRel):
        return x.compact()
    return str(x)


class FinMap:
    """A total map between finite sets, stored as the tuple of images."""

    __slots__ = ("source", "target", "images", "_hash", "_idx")

    def __init__(self, source: FinSet, target: FinSet, images: Sequence):
        self.source = source
        self.target = target
        self.images = tuple(images)
        if len(self.images) != len(source):
            raise StructureError("map is not total on its source")
        for y in self.images:
            if y not in target:
                raise StructureError(f"image {fmt(y)} is not in the target")
        self._hash = None
        self._idx = None

    def indices(self) -> tuple[int, ...]:
        """Target positions of the images, aligned with the source order."""
        if self._idx is None:
            self._idx = tuple(self.target.index(y) for y in self.images)
        return self._idx

    @classmethod
    def from_function(cls, source: FinSet, target: FinSet, fn: Callable) -> "FinMap":
        return cls(source, target, [fn(x) for x in source])

    @classmethod
    def identity(cls, X: FinSet) -> "FinMap":
        return cls(X, X, X.elements)

    def __call__(self, x):
        return self.images[self.source.index(x)]

    def at(self, i: int):
        return self.images[i]

    def then(self, g: "FinMap") -> "FinMap":
        """``g . self``"""
        if g.source != self.target:
            raise StructureError("maps do not compose")
        return FinMap(self.source, g.target, [g(y) for y in self.images])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FinMap)
            and self.source == other.source
            and self.target == other.target
            and self.images == other.images
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.source, self.target, self.images))
        return self._hash

    def __repr__(self) -> str:
        return "[" + ", ".join(f"{fmt(x)}->{fmt(y)}" for x, y in zip(self.source, self.images)) + "]"


def all_maps(X: FinSet, Y: FinSet) -> Iterator[FinMap]:
    for imgs in itertools.product(Y.elements, repeat=len(X)):
        yield FinMap(X, Y, imgs)


class VRel:
    """A V-relation ``r: X -|-> Y``; ``matrix[i][j]`` is the value at ``(X[i], Y[j])``."""

    __slots__ = ("source", "target", "quantale", "matrix", "_hash")

    def __init__(self, source: FinSet, target: FinSet, quantale: Quantale, matrix):
        self.source = source
        self.target = target
        self.quantale = quantale
        self.matrix = tuple(tuple(row) for row in matrix)
        if len(self.matrix) != len(source) or any(len(row) != len(target) for row in self.matrix):
            raise StructureError("relation matrix is not total over X x Y")
        self._hash = None

    @classmethod
    def trusted(cls, source: FinSet, target: FinSet, quantale: Quantale, matrix: tuple) -> "VRel":
        """Build from an already-validated tuple-of-tuples matrix without re-checking it."""
        r = object.__new__(cls)
        r.source = source
        r.target = target
        r.quantale = quantale
        r.matrix = matrix
        r._hash = None
        return r

    def _check(self) -> "VRel":
        n = self.quantale.n
        for row in self.matrix:
            for v in row:
                if not (isinstance(v, int) and 0 <= v < n):
                    raise StructureError(f"entry {v!r} is not an element of {self.quantale.name}")
        return self

    @classmethod
    def from_function(cls, X: FinSet, Y: FinSet, Q: Quantale, fn: Callable) -> "VRel":
        return cls(X, Y, Q, [[fn(x, y) for y in Y] for x in X])._check()

    def at(self, x, y) -> int:
        return self.matrix[self.source.index(x)][self.target.index(y)]

    def __getitem__(self, ij) -> int:
        i, j = ij
        return self.matrix[i][j]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, VRel)
            and self.quantale is other.quantale
            and self.matrix == other.matrix
            and self.source == other.source
            and self.target == other.target
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.source, self.target, self.matrix))
        return self._hash

    def __le__(self, other: "VRel") -> bool:
        return rel_le(self, other)

    def compact(self) -> str:
        """Entries row by row, rows separated by '/', e.g. ``10/01``."""
        L = self.quantale.labels
        sep = "" if all(len(lab) == 1 for lab in L) else ","
        return "/".join(sep.join(L[v] for v in row) for row in self.matrix) or "-"

    def pretty(self) -> str:
        L = self.quantale.labels
        rows = [
            f"{fmt(x)}: [" + " ".join(L[v] for v in row) + "]" for x, row in zip(self.source, self.matrix)
        ]
        return f"rel {repr(self.source)} -> {repr(self.target)} " + "; ".join(rows)

    def __repr__(self) -> str:
        if len(self.source) * len(self.target) <= 16:
            return f"VRel({self.compact()})"
        return f"VRel(<{len(self.source)}x{len(self.target)}>)"


# -- basic constructors ---------------------------------------------------


def _same_quantale(*rels: VRel) -> Quantale:
    Q = rels[0].quantale
    for r in rels[1:]:
        if r.quantale is not Q and r.quantale.fingerprint() != Q.fingerprint():
            raise StructureError("relations over different quantales")
    return Q


def identity(X: FinSet, Q: Quantale) -> VRel:
    k, b = Q.unit, Q.bottom
    n = len(X)
    return VRel(X, X, Q, [[k if i == j else b for j in range(n)] for i in range(n)])


def bottom(X: FinSet, Y: FinSet, Q: Quantale) -> VRel:
    return VRel(X, Y, Q, [[Q.bottom] * len(Y) for _ in range(len(X))])


def top(X: FinSet, Y: FinSet, Q: Quantale) -> VRel:
    return VRel(X, Y, Q, [[Q.top] * len(Y) for _ in range(len(X))])


def constant(X: FinSet, Y: FinSet, Q: Quantale, v: int) -> VRel:
    return VRel(X, Y, Q, [[v] * len(Y) for _ in range(len(X))])


def compose(s: VRel, r: VRel) -> VRel:
    """``s . r`` for ``r: X -|-> Y`` and ``s: Y -|-> Z``."""
    Q = _same_quantale(s, r)
    if s.source != r.target:
        raise StructureError("relations do not compose: codomain/domain mismatch")
    t, j, bot = Q.t, Q.j, Q.bottom
    cols = list(zip(*s.matrix)) if s.matrix else [()] * len(s.target)
    out = []
    for rx in r.matrix:
        nz = [(y, v) for y, v in enumerate(rx) if v != bot]
        row = []
        for col in cols:
            acc = bot
            for y, v in nz:
                acc = j[acc][t[v][col[y]]]
            row.append(acc)
        out.append(tuple(row))
    return VRel.trusted(r.source, s.target, Q, tuple(out))


def compose_all(*rels: VRel) -> VRel:
    """``compose_all(a, b, c) = a . b . c`` (rightmost applied first)."""
    return reduce(lambda acc, r: compose(acc, r), rels)


def rel_le(r: VRel, r2: VRel) -> bool:
    Q = _same_quantale(r, r2)
    if r.source != r2.source or r.target != r2.target:
        raise StructureError("order comparison across different hom-sets")
    le = Q.leq
    return all(le[a][b] for ra, rb in zip(r.matrix, r2.matrix) for a, b in zip(ra, rb))


def _pointwise(op, family: Sequence[VRel], X, Y, Q, unit_value) -> VRel:
    family = list(family)
    if family:
        Q = _same_quantale(*family)
        X, Y = family[0].source, family[0].target
        for r in family:
            if r.source != X or r.target != Y:
                raise StructureError("pointwise operation across different hom-sets")
    elif X is None or Y is None or Q is None:
        raise StructureError("empty family needs explicit boundaries")
    m = [[unit_value(Q)] * len(Y) for _ in range(len(X))]
    tab = op(Q)
    for r in family:
        for i, row in enumerate(r.matrix):
            mi = m[i]
            for k, v in enumerate(row):
                mi[k] = tab[mi[k]][v]
    return VRel(X, Y, Q, m)


def rel_join(family: Iterable[VRel], X: FinSet | None = None, Y: FinSet | None = None, Q: Quantale | None = None) -> VRel:
    return _pointwise(lambda q: q.j, list(family), X, Y, Q, lambda q: q.bottom)


def rel_meet(family: Iterable[VRel], X: FinSet | None = None, Y: FinSet | None = None, Q: Quantale | None = None) -> VRel:
    return _pointwise(lambda q: q.m, list(family), X, Y, Q, lambda q: q.top)


def extension(s: VRel, r: VRel) -> VRel:
    """``s <- r : Y -|-> Z`` for ``r: X -|-> Y``, ``s: X -|-> Z``; right adjoint to ``(-) . r``."""
    Q = _same_quantale(s, r)
    if s.source != r.source:
        raise StructureError("extension needs a shared source")
    rr, m, top_ = Q.rres, Q.m, Q.top
    nX = len(r.source)
    out = []
    for y in range(len(r.target)):
        row = []
        for z in range(len(s.target)):
            acc = top_
            for x in range(nX):
                acc = m[acc][rr[r.matrix[x][y]][s.matrix[x][z]]]
            row.append(acc)
        out.append(row)
    return VRel(r.target, s.target, Q, out)


def lifting(t: VRel, s: VRel) -> VRel:
    """``t -> s : Y -|-> Z`` for ``t: Z -|-> W``, ``s: Y -|-> W``; right adjoint to ``t . (-)``."""
    Q = _same_quantale(t, s)
    if t.target != s.target:
        raise StructureError("lifting needs a shared target")
    lr, m, top_ = Q.lres, Q.m, Q.top
    nW = len(t.target)
    out = []
    for y in range(len(s.source)):
        row = []
        for z in range(len(t.source)):
            acc = top_
            for w in range(nW):
                acc = m[acc][lr[s.matrix[y][w]][t.matrix[z][w]]]
            row.append(acc)
        out.append(row)
    return VRel(s.source, t.source, Q, out)


def opposite(r: VRel) -> VRel:
    return VRel(r.target, r.source, r.quantale, list(zip(*r.matrix)) if r.matrix else [[] for _ in r.target])


def graph(f: FinMap, Q: Quantale) -> VRel:
    """``f_o(x, y) = k`` iff ``f(x) = y``."""
    k, b = Q.unit, Q.bottom
    Y = f.target
    out = []
    for y0 in f.images:
        j0 = Y.index(y0)
        out.append([k if jj == j0 else b for jj in range(len(Y))])
    return VRel(f.source, Y, Q, out)


def cograph(f: FinMap, Q: Quantale) -> VRel:
    """``f^o = (f_o)^o : Y -|-> X``."""
    return opposite(graph(f, Q))


def tensor_scalar(r: VRel, v: int) -> VRel:
    """Pointwise ``r (x) v``."""
    t = r.quantale.t
    return VRel(r.source, r.target, r.quantale, [[t[a][v] for a in row] for row in r.matrix])


def column(r: VRel, j: int) -> VRel:
    """``r(-, y_j)`` as a relation ``X -|-> 1``."""
    return VRel(r.source, ONE, r.quantale, [[row[j]] for row in r.matrix])


def row_as_vector(r: VRel, i: int) -> VRel:
    """The i-th row of ``r`` transposed into a relation ``Y -|-> 1``."""
    return VRel(r.target, ONE, r.quantale, [[v] for v in r.matrix[i]])


def vector(X: FinSet, Q: Quantale, values: Sequence[int]) -> VRel:
    """The relation ``X -|-> 1`` with the given values."""
    m = tuple((v,) for v in values)
    if len(m) != len(X):
        raise StructureError("vector length does not match its set")
    return VRel.trusted(X, ONE, Q, m)


def point(X: FinSet, Q: Quantale, x) -> VRel:
    """``1_X(x, -)`` as an element of ``V^X``: value k at ``x``, bottom elsewhere."""
    i = X.index(x)
    return vector(X, Q, [Q.unit if jj == i else Q.bottom for jj in range(len(X))])


def characteristic(X: FinSet, Q: Quantale, members: Iterable) -> VRel:
    mem = {X.index(x) for x in members}
    return vector(X, Q, [Q.unit if i in mem else Q.bottom for i in range(len(X))])


def values(phi: VRel) -> tuple:
    """Entries of a relation ``X -|-> 1`` as a tuple aligned with ``X``."""
    return tuple(row[0] for row in phi.matrix)


def pv_apply(r: VRel) -> Callable[[VRel], VRel]:
    """``r^P : V^Y -> V^X``, ``r^P(s)(x) = V_y r(x, y) (x) s(y)``.

    Vectors are relations ``Y -|-> 1``, so this is ``s . r``.
    """

    def apply(s: VRel) -> VRel:
        if s.source != r.target or s.target != ONE:
            raise StructureError("argument is not an element of V^Y")
        return compose(s, r)

    return apply


# -- enumeration --------------------------------------------------------------


def count_vrels(X: FinSet, Y: FinSet, Q: Quantale) -> int:
    return Q.n ** (len(X) * len(Y))


def all_vrels(X: FinSet, Y: FinSet, Q: Quantale, cap: int = DEFAULT_CAP, override: bool = False) -> Iterator[VRel]:
    """Every relation ``X -|-> Y`` in lexicographic order of row-major entries."""
    total = count_vrels(X, Y, Q)
    if total > cap and not override:
        raise CapExceeded(f"relations {len(X)}x{len(Y)} over {Q.name}", total, cap)
    nY = len(Y)
    for flat in itertools.product(Q.elements, repeat=len(X) * nY):
        yield VRel(X, Y, Q, [flat[i * nY:(i + 1) * nY] for i in range(len(X))])


def all_vectors(X: FinSet, Q: Quantale, cap: int = DEFAULT_CAP) -> Iterator[VRel]:
    return all_vrels(X, ONE, Q, cap)


def random_vrel(X: FinSet, Y: FinSet, Q: Quantale, rng: random.Random) -> VRel:
    return VRel(X, Y, Q, [[rng.randrange(Q.n) for _ in Y] for _ in X])


def pv_monad(V: Quantale):
    """The V-powerset monad; see :class:`laxkit.finmonad.PVMonad`."""
    from .finmonad import PVMonad

    return PVMonad(V)
