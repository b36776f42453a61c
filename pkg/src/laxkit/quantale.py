"""Finite unital quantales given by explicit tables.

Elements are the integers ``0..n-1``; ``labels`` are only for display and
spec files.  Joins, meets and both residuals are tabulated once, at
construction, because every relational operation above this module leans on
them in its inner loops.
"""

from __future__ import annotations

import copy
import itertools
import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

from .report import LawReport, StructureError

COMPLETENESS_SUBSET_LIMIT = 12


class Quantale:
    """A finite complete lattice with an associative, join-preserving tensor and unit."""

    def __init__(self, name: str, labels: Sequence[str], leq, tensor, unit: int):
        n = len(labels)
        if n < 1:
            raise StructureError("a quantale needs at least one element")
        if len(set(labels)) != n:
            raise StructureError("element labels must be distinct")
        if len(leq) != n or any(len(row) != n for row in leq):
            raise StructureError("order table is not total")
        if len(tensor) != n or any(len(row) != n for row in tensor):
            raise StructureError("tensor table is not total")
        for row in tensor:
            for c in row:
                if not (isinstance(c, int) and 0 <= c < n):
                    raise StructureError(f"tensor entry {c!r} is not an element")
        if not (isinstance(unit, int) and 0 <= unit < n):
            raise StructureError(f"unit {unit!r} is not an element")
        self.name = name
        self.labels = tuple(labels)
        self.n = n
        self.leq = tuple(tuple(bool(b) for b in row) for row in leq)
        self.t = tuple(tuple(row) for row in tensor)
        self.unit = unit
        self.elements = tuple(range(n))
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        self._derive()

    # -- derived tables -------------------------------------------------

    def _bound(self, a: int, b: int, upper: bool) -> int | None:
        le = self.leq
        if upper:
            cands = [u for u in self.elements if le[a][u] and le[b][u]]
            best = [u for u in cands if all(le[u][w] for w in cands)]
        else:
            cands = [u for u in self.elements if le[u][a] and le[u][b]]
            best = [u for u in cands if all(le[w][u] for w in cands)]
        return best[0] if len(best) == 1 else None

    def _derive(self) -> None:
        n, le = self.n, self.leq
        bots = [a for a in self.elements if all(le[a][b] for b in self.elements)]
        tops = [a for a in self.elements if all(le[b][a] for b in self.elements)]
        self.bottom = bots[0] if len(bots) == 1 else None
        self.top = tops[0] if len(tops) == 1 else None
        j = [[self._bound(a, b, True) for b in range(n)] for a in range(n)]
        m = [[self._bound(a, b, False) for b in range(n)] for a in range(n)]
        self.is_lattice = (
            self.bottom is not None
            and self.top is not None
            and all(x is not None for row in j for x in row)
            and all(x is not None for row in m for x in row)
        )
        self.j = tuple(tuple(r) for r in j)
        self.m = tuple(tuple(r) for r in m)
        if not self.is_lattice:
            self.lres = self.rres = None
            return
        t = self.t
        # lres[b][a] = (b <- a) = V{v : v*a <= b};  rres[a][b] = (a -> b) = V{v : a*v <= b}
        self.lres = tuple(
            tuple(self.join_all(v for v in self.elements if le[t[v][a]][b]) for a in range(n))
            for b in range(n)
        )
        self.rres = tuple(
            tuple(self.join_all(v for v in self.elements if le[t[a][v]][b]) for b in range(n))
            for a in range(n)
        )

    def _need_lattice(self) -> None:
        if not self.is_lattice:
            raise StructureError(f"{self.name}: order is not a lattice")

    # -- element operations ----------------------------------------------

    def le(self, a: int, b: int) -> bool:
        return self.leq[a][b]

    def tensor(self, a: int, b: int) -> int:
        return self.t[a][b]

    def join(self, a: int, b: int) -> int:
        return self.j[a][b]

    def meet(self, a: int, b: int) -> int:
        return self.m[a][b]

    def join_all(self, items: Iterable[int]) -> int:
        j = self.j
        return reduce(lambda acc, x: j[acc][x], items, self.bottom)

    def meet_all(self, items: Iterable[int]) -> int:
        m = self.m
        return reduce(lambda acc, x: m[acc][x], items, self.top)

    def left_residual(self, b: int, a: int) -> int:
        """``(b <- a)``: the largest ``v`` with ``v (x) a <= b``."""
        self._need_lattice()
        return self.lres[b][a]

    def right_residual(self, a: int, b: int) -> int:
        """``(a -> b)``: the largest ``v`` with ``a (x) v <= b``."""
        self._need_lattice()
        return self.rres[a][b]

    def element(self, label) -> int:
        if str(label) in self._index:
            return self._index[str(label)]
        if isinstance(label, int) and 0 <= label < self.n:
            return label
        raise StructureError(f"{label!r} is not an element of {self.name}")

    def label(self, a: int) -> str:
        return self.labels[a]

    def is_commutative(self) -> bool:
        return all(self.t[a][b] == self.t[b][a] for a in self.elements for b in self.elements)

    def fingerprint(self) -> tuple:
        return (self.labels, self.leq, self.t, self.unit)

    def __repr__(self) -> str:
        return f"Quantale({self.name})"

    def to_spec(self) -> dict:
        """Normalized spec-file form (labels, full order pairs, full tensor)."""
        L = self.labels
        return {
            "name": self.name,
            "elements": list(L),
            "leq": [[L[a], L[b]] for a in self.elements for b in self.elements if self.leq[a][b]],
            "tensor": [[L[a], L[b], L[self.t[a][b]]] for a in self.elements for b in self.elements],
            "unit": L[self.unit],
        }

    @classmethod
    def from_spec(cls, spec: dict) -> "Quantale":
        """Build from a spec dict: ``elements``, ``leq`` pairs, ``tensor`` triples, ``unit``.

        Reflexive pairs may be omitted; the order is otherwise taken as given.
        Every pair must have a tensor triple.
        """
        try:
            labels = [str(e) for e in spec["elements"]]
            pairs = spec["leq"]
            triples = spec["tensor"]
            unit = str(spec["unit"])
        except (KeyError, TypeError) as exc:
            raise StructureError(f"quantale spec missing field: {exc}") from None
        idx = {lab: i for i, lab in enumerate(labels)}

        def get(lab):
            try:
                return idx[str(lab)]
            except KeyError:
                raise StructureError(f"unknown element {lab!r}") from None

        n = len(labels)
        leq = [[a == b for b in range(n)] for a in range(n)]
        for p in pairs:
            if len(p) != 2:
                raise StructureError(f"bad order pair {p!r}")
            leq[get(p[0])][get(p[1])] = True
        tensor: list[list[int | None]] = [[None] * n for _ in range(n)]
        for tr in triples:
            if len(tr) != 3:
                raise StructureError(f"bad tensor triple {tr!r}")
            a, b, c = (get(x) for x in tr)
            if tensor[a][b] is not None and tensor[a][b] != c:
                raise StructureError(f"conflicting tensor entries for {tr[0]}*{tr[1]}")
            tensor[a][b] = c
        missing = [(labels[a], labels[b]) for a in range(n) for b in range(n) if tensor[a][b] is None]
        if missing:
            raise StructureError(f"tensor table not total, missing {missing[:4]}")
        return cls(spec.get("name", "custom"), labels, leq, tensor, get(unit))


# -- law checking --------------------------------------------------------


def _lub_of(Q: Quantale, subset: Sequence[int]) -> int | None:
    le = Q.leq
    ubs = [u for u in Q.elements if all(le[s][u] for s in subset)]
    least = [u for u in ubs if all(le[u][w] for w in ubs)]
    return least[0] if len(least) == 1 else None


def check_quantale_laws(Q: Quantale, subset_cap: int = COMPLETENESS_SUBSET_LIMIT) -> LawReport:
    """Exhaustively check order, completeness, associativity, unit and distributivity."""
    rep = LawReport(f"quantale[{Q.name}]")
    E = Q.elements
    le, t, L = Q.leq, Q.t, Q.labels
    rep.check("order-reflexive", E, lambda a: le[a][a], lambda a: f"a={L[a]}")
    rep.check(
        "order-antisymmetric",
        itertools.product(E, E),
        lambda a, b: a == b or not (le[a][b] and le[b][a]),
        lambda a, b: f"a={L[a]} b={L[b]}",
    )
    rep.check(
        "order-transitive",
        itertools.product(E, E, E),
        lambda a, b, c: not (le[a][b] and le[b][c]) or le[a][c],
        lambda a, b, c: f"a={L[a]} b={L[b]} c={L[c]}",
    )
    if Q.n <= subset_cap:
        subsets = (s for k in range(Q.n + 1) for s in itertools.combinations(E, k))
        rep.check(
            "complete",
            subsets,
            lambda *s: _lub_of(Q, s) is not None,
            lambda *s: "no join of {" + ",".join(L[x] for x in s) + "}",
        )
    else:
        pairs = itertools.chain([()], ((a, b) for a in E for b in E))
        rep.check(
            "complete",
            pairs,
            lambda *s: _lub_of(Q, s) is not None,
            lambda *s: "no join of {" + ",".join(L[x] for x in s) + "}",
            note="binary joins and bottom only",
        )
    rep.check(
        "tensor-associative",
        itertools.product(E, E, E),
        lambda a, b, c: t[t[a][b]][c] == t[a][t[b][c]],
        lambda a, b, c: f"a={L[a]} b={L[b]} c={L[c]}",
    )
    k = Q.unit
    rep.check("unit-left", E, lambda a: t[k][a] == a, lambda a: f"a={L[a]}: k*a={L[t[k][a]]}")
    rep.check("unit-right", E, lambda a: t[a][k] == a, lambda a: f"a={L[a]}: a*k={L[t[a][k]]}")
    if not rep["complete"].passed:
        rep.record("distributive", False, "order is not complete")
        return rep
    # all subsets up to the cap; beyond it, empty plus binary joins
    if Q.n <= subset_cap:
        fams = [s for kk in range(Q.n + 1) for s in itertools.combinations(E, kk)]
        note = ""
    else:
        fams = [()] + [(a, b) for a in E for b in E]
        note = "empty and binary joins only"
    lub = {s: _lub_of(Q, s) for s in fams}

    def dist(a, s):
        j = lub[s]
        left = _lub_of(Q, [t[a][b] for b in s]) == t[a][j]
        right = _lub_of(Q, [t[b][a] for b in s]) == t[j][a]
        return left and right

    rep.check(
        "distributive",
        ((a, s) for a in E for s in fams),
        dist,
        lambda a, s: f"a={L[a]} family={{{','.join(L[x] for x in s)}}}",
        note=note,
    )
    return rep


def check_residuals(Q: Quantale) -> LawReport:
    """Residual adjunctions and monotonicity, exhaustively over all triples."""
    rep = LawReport(f"residuals[{Q.name}]")
    E, le, t, L = Q.elements, Q.leq, Q.t, Q.labels
    lr, rr = Q.left_residual, Q.right_residual
    rep.check(
        "left-adjunction",
        itertools.product(E, E, E),
        lambda a, b, v: le[t[v][a]][b] == le[v][lr(b, a)],
        lambda a, b, v: f"a={L[a]} b={L[b]} v={L[v]}",
    )
    rep.check(
        "right-adjunction",
        itertools.product(E, E, E),
        lambda a, b, v: le[t[a][v]][b] == le[v][rr(a, b)],
        lambda a, b, v: f"a={L[a]} b={L[b]} v={L[v]}",
    )
    rep.check(
        "residual-monotone",
        itertools.product(E, E, E),
        lambda a, b, c: (not le[b][c] or (le[lr(b, a)][lr(c, a)] and le[rr(a, b)][rr(a, c)]))
        and (not le[a][c] or (le[lr(b, c)][lr(b, a)] and le[rr(c, b)][rr(a, b)])),
        lambda a, b, c: f"a={L[a]} b={L[b]} c={L[c]}",
    )
    bot = Q.bottom
    rep.check("bottom-absorbs", E, lambda a: t[bot][a] == bot == t[a][bot], lambda a: f"a={L[a]}")
    if Q.is_commutative():
        rep.check(
            "residuals-coincide",
            itertools.product(E, E),
            lambda a, b: lr(b, a) == rr(a, b),
            lambda a, b: f"a={L[a]} b={L[b]}",
        )
    return rep


def swap_residuals(Q: Quantale) -> Quantale:
    """Mutation fixture: a copy whose left and right residual tables trade places."""
    bad = copy.copy(Q)
    E = Q.elements
    bad.name = f"swapped-residuals({Q.name})"
    bad.lres = tuple(tuple(Q.rres[a][b] for a in E) for b in E)
    bad.rres = tuple(tuple(Q.lres[b][a] for b in E) for a in E)
    return bad


# -- lax homomorphisms ----------------------------------------------------


@dataclass(frozen=True)
class LaxHom:
    source: Quantale
    target: Quantale
    table: tuple

    def __call__(self, a: int) -> int:
        return self.table[a]


def check_lax_hom(h: LaxHom) -> LawReport:
    W, V = h.source, h.target
    rep = LawReport(f"lax-hom[{W.name}->{V.name}]")
    if len(h.table) != W.n or any(not (0 <= x < V.n) for x in h.table):
        raise StructureError("lax hom table is not a total map into the target")
    E = W.elements
    L = W.labels
    rep.check(
        "monotone",
        itertools.product(E, E),
        lambda a, b: not W.le(a, b) or V.le(h(a), h(b)),
        lambda a, b: f"a={L[a]} b={L[b]}",
    )
    rep.check(
        "lax-tensor",
        itertools.product(E, E),
        lambda a, b: V.le(V.tensor(h(a), h(b)), h(W.tensor(a, b))),
        lambda a, b: f"a={L[a]} b={L[b]}",
    )
    rep.record("lax-unit", V.le(V.unit, h(W.unit)), f"f(l)={V.label(h(W.unit))}")
    return rep


def is_homomorphism(h: LaxHom) -> bool:
    """Sup-map preserving tensor and unit (binary joins and bottom suffice in a finite lattice)."""
    W, V = h.source, h.target
    E = W.elements
    return (
        h(W.bottom) == V.bottom
        and all(h(W.join(a, b)) == V.join(h(a), h(b)) for a in E for b in E)
        and all(h(W.tensor(a, b)) == V.tensor(h(a), h(b)) for a in E for b in E)
        and h(W.unit) == V.unit
    )


def canonical_two_embedding(Q: Quantale) -> LaxHom:
    """The map 2 -> Q sending 0 to bottom and 1 to the unit."""
    return LaxHom(two(), Q, (Q.bottom, Q.unit))


# -- catalog ----------------------------------------------------------------


def chain_min(n: int) -> Quantale:
    """The n-element chain 0 < 1 < ... < n-1 with tensor = min and unit = top."""
    if n < 1:
        raise StructureError("chain_min needs n >= 1")
    labels = [str(i) for i in range(n)]
    leq = [[a <= b for b in range(n)] for a in range(n)]
    tensor = [[min(a, b) for b in range(n)] for a in range(n)]
    return Quantale(f"chain_min({n})", labels, leq, tensor, n - 1)


def two() -> Quantale:
    q = chain_min(2)
    q.name = "two"
    return q


def trop(n: int) -> Quantale:
    """Costs ``{0..n, inf}`` ordered by reversed numeric order, tensor = addition.

    Sums above ``n`` overflow to ``inf``, the bottom element; 0 is the unit and top.
    Internal element ``i`` is cost ``i``; element ``n+1`` is ``inf``.
    """
    if n < 1:
        raise StructureError("trop needs n >= 1")
    inf = n + 1
    size = n + 2
    labels = [str(i) for i in range(n + 1)] + ["inf"]
    leq = [[a >= b for b in range(size)] for a in range(size)]

    def add(a, b):
        s = a + b
        return inf if (a == inf or b == inf or s > n) else s

    tensor = [[add(a, b) for b in range(size)] for a in range(size)]
    return Quantale(f"trop({n})", labels, leq, tensor, 0)


@dataclass(frozen=True)
class FiniteMonoid:
    name: str
    labels: tuple
    mul: tuple
    unit: int


def left_zero_monoid(k: int = 2) -> FiniteMonoid:
    """``k`` left-zero elements (xy = x) with an adjoined identity; non-commutative for k >= 2."""
    labels = ("1",) + tuple(chr(ord("a") + i) for i in range(k))
    n = k + 1
    mul = tuple(tuple(b if a == 0 else a for b in range(n)) for a in range(n))
    return FiniteMonoid(f"left_zero({k})", labels, mul, 0)


def cyclic_monoid(k: int) -> FiniteMonoid:
    labels = tuple(f"g{i}" for i in range(k))
    mul = tuple(tuple((a + b) % k for b in range(k)) for a in range(k))
    return FiniteMonoid(f"cyclic({k})", labels, mul, 0)


def truncated_free_monoid(letters: str = "ab", length: int = 1) -> FiniteMonoid:
    """Words of length <= ``length`` plus an absorbing overflow word ``z``."""
    words = [""]
    for ell in range(1, length + 1):
        words += ["".join(p) for p in itertools.product(letters, repeat=ell)]
    words.append("z")
    idx = {w: i for i, w in enumerate(words)}

    def mul(u, v):
        if u == "z" or v == "z" or len(u) + len(v) > length:
            return idx["z"]
        return idx[u + v]

    labels = tuple(w or "1" for w in words)
    table = tuple(tuple(mul(u, v) for v in words) for u in words)
    return FiniteMonoid(f"free({letters},{length})", labels, table, 0)


def pow_monoid(M: FiniteMonoid) -> Quantale:
    """Subsets of a finite monoid under inclusion, with complex product and unit {1}."""
    n = len(M.labels)
    subsets = list(range(1 << n))

    def members(s):
        return [i for i in range(n) if s >> i & 1]

    labels = ["{" + ",".join(M.labels[i] for i in members(s)) + "}" for s in subsets]
    leq = [[(a & ~b) == 0 for b in subsets] for a in subsets]

    def prod(a, b):
        out = 0
        for x in members(a):
            for y in members(b):
                out |= 1 << M.mul[x][y]
        return out

    tensor = [[prod(a, b) for b in subsets] for a in subsets]
    return Quantale(f"pow_monoid({M.name})", labels, leq, tensor, 1 << M.unit)


_NAME_RE = re.compile(r"^\s*([a-z_]+)\s*(?:\(\s*([A-Za-z0-9_,\s]*)\s*\))?\s*$")

_MONOIDS = {
    "left_zero": lambda *a: left_zero_monoid(*(int(x) for x in a)),
    "cyclic": lambda k: cyclic_monoid(int(k)),
    "free": lambda letters="ab", length="1": truncated_free_monoid(letters, int(length)),
}


def builtin_quantales() -> dict[str, Quantale]:
    """The standard catalog used by tests and the CLI."""
    return {
        "two": two(),
        "chain_min(3)": chain_min(3),
        "chain_min(4)": chain_min(4),
        "trop(2)": trop(2),
        "trop(3)": trop(3),
        "pow_monoid(left_zero(2))": pow_monoid(left_zero_monoid(2)),
    }


def quantale_by_name(name: str) -> Quantale:
    """Parse names like ``two``, ``chain_min(3)``, ``trop(2)``, ``pow_monoid(left_zero(2))``."""
    name = name.strip()
    if name in ("two", "2", "bool"):
        return two()
    if name.startswith("pow_monoid(") and name.endswith(")"):
        inner = name[len("pow_monoid("):-1]
        m = _NAME_RE.match(inner)
        if not m or m.group(1) not in _MONOIDS:
            raise StructureError(f"unknown monoid {inner!r}")
        args = [a.strip() for a in (m.group(2) or "").split(",") if a.strip()]
        return pow_monoid(_MONOIDS[m.group(1)](*args))
    m = _NAME_RE.match(name)
    if not m:
        raise StructureError(f"cannot parse quantale name {name!r}")
    head, arg = m.group(1), m.group(2)
    ctors = {"chain_min": chain_min, "trop": trop}
    if head not in ctors or not arg:
        raise StructureError(f"unknown quantale {name!r}")
    try:
        k = int(arg)
    except ValueError:
        raise StructureError(f"bad parameter in {name!r}") from None
    return ctors[head](k)
