"""Command-line entry point.

Exit status: 0 when every requested check passes, 1 on a law failure, 2 on a
usage or input error, 3 when an enumeration cap is exceeded. Every flag can also
be set through an environment variable ``LAXKIT_<FLAG>`` (dashes become
underscores), e.g. ``LAXKIT_SEED=7``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import finmonad as fm
from . import laxalg, laxext, urel, vcat
from .quantale import (
    Quantale,
    canonical_two_embedding,
    check_quantale_laws,
    check_residuals,
    quantale_by_name,
    swap_residuals,
)
from .report import DEFAULT_CAP, CapExceeded, LawReport, StructureError
from .vrel import FinMap, FinSet, VRel, compose, extension, fmt, fset, lifting, opposite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3
ENV_PREFIX = "LAXKIT_"

MUTATIONS = ("transpose", "drop-unit", "corrupt-mult", "swap-residuals", "broken-naturality")


class UsageError(Exception):
    pass


# -- spec files ---------------------------------------------------------------


def _load(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def set_from_spec(spec) -> FinSet:
    """An integer ``n`` means ``{0..n-1}``; a list gives the elements (as strings)."""
    if isinstance(spec, int) and spec >= 0:
        return fset(spec)
    if isinstance(spec, list):
        return FinSet(tuple(str(e) for e in spec))
    raise StructureError(f"bad set description {spec!r}")


def _element(X: FinSet, label):
    for x in X:
        if x == label or str(x) == str(label):
            return x
    raise StructureError(f"{label!r} is not an element of {list(map(str, X))}")


def relation_from_spec(spec: dict, Q: Quantale) -> VRel:
    """``source``, ``target``, ``entries`` as ``[x, y, v]`` triples; missing entries are bottom."""
    try:
        X = set_from_spec(spec["source"])
        Y = set_from_spec(spec["target"])
        entries = spec.get("entries", [])
    except KeyError as exc:
        raise StructureError(f"relation spec missing field: {exc}") from None
    rows = [[Q.bottom] * len(Y) for _ in X]
    for item in entries:
        if len(item) != 3:
            raise StructureError(f"relation entry must be [x, y, v], got {item!r}")
        x, y, v = item
        rows[X.index(_element(X, x))][Y.index(_element(Y, y))] = Q.element(str(v))
    return VRel(X, Y, Q, rows)


def relation_to_spec(r: VRel) -> dict:
    Q = r.quantale
    entries = [
        [fmt(x), fmt(y), Q.labels[v]]
        for x, row in zip(r.source, r.matrix)
        for y, v in zip(r.target, row)
        if v != Q.bottom
    ]
    return {"source": [fmt(x) for x in r.source], "target": [fmt(y) for y in r.target], "entries": entries}


def map_from_spec(spec: dict) -> FinMap:
    try:
        X = set_from_spec(spec["source"])
        Y = set_from_spec(spec["target"])
        images = spec["images"]
    except KeyError as exc:
        raise StructureError(f"map spec missing field: {exc}") from None
    if len(images) != len(X):
        raise StructureError("map spec needs one image per source element")
    return FinMap(X, Y, [_element(Y, y) for y in images])


# -- catalog selection --------------------------------------------------------


def build_quantale(args) -> Quantale:
    if getattr(args, "quantale_file", None):
        Q = Quantale.from_spec(_load(args.quantale_file))
    else:
        Q = quantale_by_name(args.quantale)
    if getattr(args, "mutate", None) == "swap-residuals":
        Q = swap_residuals(Q)
    return Q


def build_monad(args, V: Quantale) -> fm.FinMonad:
    T = fm.monad_by_name(args.monad, V)
    if getattr(args, "mutate", None) == "corrupt-mult":
        T = fm.CorruptedMultMonad(T)
    return T


def build_tau(args, T: fm.FinMonad, V: Quantale) -> fm.MonadMorphism:
    name = (args.tau or "").strip()
    if name in ("identity", "id"):
        if not isinstance(T, fm.PVMonad):
            raise StructureError("tau 'identity' needs the monad pv")
        tau = fm.identity_morphism(T)
    elif name in ("two_iso", "two_to_powerset"):
        if not isinstance(T, fm.PowersetMonad):
            raise StructureError(f"tau {name!r} needs the powerset monad")
        tau = fm.two_to_powerset(fm.PVMonad(V), T)
    elif name == "two_to_filter":
        if not isinstance(T, fm.FilterMonad):
            raise StructureError("tau 'two_to_filter' needs the filter monad")
        tau = fm.two_to_filter(fm.PVMonad(V), T)
    else:
        raise UsageError(f"unknown tau {name!r} (identity, two_iso, two_to_filter)")
    if getattr(args, "mutate", None) == "broken-naturality":
        tau = fm.broken_naturality(tau)
    return tau


def _default_tau(T: fm.FinMonad) -> str | None:
    if isinstance(T, fm.PVMonad):
        return "identity"
    if isinstance(T, fm.PowersetMonad):
        return "two_iso"
    if isinstance(T, fm.FilterMonad):
        return "two_to_filter"
    return None


def build_enrichment(args, validate: bool = True) -> fm.Enrichment:
    V = build_quantale(args)
    T = build_monad(args, V)
    if not args.tau:
        args.tau = _default_tau(T)
        if args.tau is None:
            raise UsageError(f"monad {T.name} has no default tau; pass --tau")
    tau = build_tau(args, T, V)
    return fm.Enrichment(T, tau, validate=validate)


def build_extension(args, validate: bool = True) -> laxext.LaxExtension:
    V = build_quantale(args)
    kind = args.extension
    if kind is None:
        kind = {"identity": "identity", "id": "identity", "ultrafilter": "barr", "ultrafilter_fin": "barr"}.get(args.monad, "kleisli")
    if kind == "identity":
        if args.monad not in ("identity", "id"):
            raise UsageError("the identity extension needs --monad identity")
        E = laxext.identity_extension(V)
    elif kind == "barr":
        if args.monad not in ("ultrafilter", "ultrafilter_fin"):
            raise UsageError("the Barr extension needs --monad ultrafilter")
        E = laxext.barr_ultrafilter_extension(V)
    elif kind == "kleisli":
        E = laxext.KleisliExtension(build_enrichment(args, validate=validate), validate=validate)
    else:
        raise UsageError(f"unknown extension {kind!r} (identity, barr, kleisli)")
    if args.mutate == "transpose":
        E = laxext.MutatedExtension(E, "transpose")
    elif args.mutate == "drop-unit":
        E = laxext.DroppedUnitExtension(E)
    return E


def build_context(args, check: bool = True) -> urel.Context:
    return urel.Context(build_extension(args), check=check)


# -- commands -----------------------------------------------------------------


def _sizes(args) -> tuple[int, ...]:
    return args.sizes


def cmd_laws(args) -> list[LawReport]:
    what = args.what
    if what == "quantale":
        if args.name:
            args.quantale = args.name
        Q = build_quantale(args)
        return [check_quantale_laws(Q), check_residuals(Q)]
    if what == "monad":
        V = build_quantale(args)
        T = build_monad(args, V)
        reps = [fm.check_monad_laws(T, sizes=_sizes(args), seed=args.seed)]
        if args.tau or args.mutate == "broken-naturality":
            args.tau = args.tau or _default_tau(T)
            reps.append(fm.check_monad_morphism(build_tau(args, T, V), sizes=_sizes(args), seed=args.seed))
        return reps
    if what == "extension":
        E = build_extension(args)
        sizes = _sizes(args)
        exhaustive = tuple(n for n in sizes if n <= args.exhaustive_max)
        sampled = tuple(n for n in sizes if n > args.exhaustive_max)
        kw = dict(sizes=exhaustive, sample_sizes=sampled, samples=args.samples, seed=args.seed)
        return [laxext.check_lax_extension(E, **kw), laxext.check_associative(E, **kw)]
    if what == "enrichment":
        enr = build_enrichment(args, validate=False)
        return [fm.check_enrichment(enr, sizes=_sizes(args))]
    raise UsageError(f"unknown law suite {what!r}")


def _print_rel(r: VRel, out: list[str]) -> None:
    out.append(json.dumps(relation_to_spec(r), sort_keys=True))


def cmd_compute(args, out: list[str]) -> None:
    V = build_quantale(args)
    files = args.files
    need = {"compose": 2, "extension": 2, "lifting": 2, "opposite": 1, "kleisli-ext": 1}[args.what]
    if len(files) != need:
        raise UsageError(f"compute {args.what} takes {need} relation file(s)")
    rels = [relation_from_spec(_load(f), V) for f in files]
    if args.what == "compose":
        r, s = rels
        res = compose(s, r)
    elif args.what == "extension":
        s, r = rels
        res = extension(s, r)
    elif args.what == "lifting":
        t, s = rels
        res = lifting(t, s)
    elif args.what == "opposite":
        res = opposite(rels[0])
    else:
        args.extension = args.extension or None
        E = build_extension(args)
        res = E(rels[0])
    spec = relation_to_spec(res)
    text = json.dumps(spec, sort_keys=True, indent=1)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    out.append(text)


def cmd_enumerate(args, out: list[str]) -> LawReport | None:
    X = fset(args.set_size)
    if args.what == "presheaf":
        ctx = build_context(args)
        Pi = urel.PresheafMonad(ctx)
        PX = Pi.obj(X)
        out.append(f"|PiX| = {len(PX)}  (|X| = {len(X)}, carrier {Pi.strategy[X]})")
        out.extend(f"  {p.compact()}" for p in PX)
    elif args.what == "algebras":
        ctx = build_context(args)
        algs = laxalg.enumerate_lax_algebras(ctx, X, args.cap)
        out.append(f"lax algebras on {len(X)} points: {len(algs)}")
        out.extend(f"  {a.rel.compact()}" for a in algs)
    elif args.what == "monoids":
        enr = build_enrichment(args)
        mons = laxalg.enumerate_kleisli_monoids(enr, X, args.cap)
        out.append(f"Kleisli monoids on {len(X)} points: {len(mons)}")
        out.extend(f"  {m!r}" for m in mons)
    else:
        raise UsageError(f"unknown enumeration {args.what!r}")
    return None


def cmd_check(args) -> list[LawReport]:
    what = args.what
    sizes = _sizes(args)
    if what == "adjunction":
        enr = build_enrichment(args)
        return [urel.check_adjunction(enr, sizes=sizes, seed=args.seed)]
    if what == "yoneda":
        ctx = build_context(args)
        Pi = urel.PresheafMonad(ctx)
        return [urel.check_yoneda(Pi, sizes=sizes), urel.check_yoneda_morphism(Pi, sizes=tuple(n for n in sizes if n <= 1))]
    if what == "iso":
        return [laxalg.check_cats_mons_iso(build_context(args), sizes=sizes)]
    if what == "change-of-base":
        enr = build_enrichment(args)
        return [
            laxalg.check_change_of_enrichment(enr, canonical_two_embedding(enr.V), sizes=sizes),
            laxalg.check_two_enrichment_order(enr, canonical_two_embedding(enr.V), sizes=sizes),
        ]
    if what == "convolution":
        if args.mutate == "drop-unit":
            args.mutate = None
            ctx = build_context(args)
            return [urel.check_convolution_monoid(ctx, sizes=sizes, unit=urel.dropped_unit)]
        ctx = build_context(args, check=args.mutate is None)
        return [urel.check_convolution_monoid(ctx, sizes=sizes)]
    if what == "nbhd":
        return [urel.check_nbhd_conv(build_context(args), sizes=sizes)]
    V = build_quantale(args)
    rep = LawReport(f"check:{what}")
    if what == "vcat":
        a = relation_from_spec(_load(args.rel), V)
        rep.extend(vcat.vcat_report(a.source, a))
    elif what in ("vfunctor", "vmodule"):
        A = vcat.VCat(*_vcat_parts(relation_from_spec(_load(args.a), V)))
        B = vcat.VCat(*_vcat_parts(relation_from_spec(_load(args.b), V)))
        for name, C in (("a", A), ("b", B)):
            rep.record(f"{name}-is-vcat", vcat.check_vcat(C.carrier, C.hom), witness=C.hom.compact())
        if what == "vfunctor":
            f = map_from_spec(_load(args.map))
            rep.record("functor", vcat.check_vfunctor(f, A, B), witness=repr(f))
        else:
            r = relation_from_spec(_load(args.rel), V)
            rep.record("module", vcat.check_vmodule(r, A, B), witness=r.compact())
    else:
        raise UsageError(f"unknown check {what!r}")
    return [rep]


def _vcat_parts(a: VRel):
    if a.source != a.target:
        raise StructureError("a V-category structure must be an endo-relation")
    return a.source, a


def cmd_crosscheck(args) -> list[LawReport]:
    V = quantale_by_name("two")
    contexts = {
        "identity": urel.Context(laxext.identity_extension(V)),
        "barr": urel.Context(laxext.barr_ultrafilter_extension(V)),
    }
    P = fm.PowersetMonad()
    F = fm.FilterMonad()
    enrs = {
        "powerset": fm.Enrichment(P, fm.two_to_powerset(None, P)),
        "filter": fm.Enrichment(F, fm.two_to_filter(None, F)),
    }
    sizes = tuple(range(args.size + 1)) if args.size is not None else _sizes(args)
    return [laxalg.crosscheck_counts(contexts, enrs, sizes=sizes)]


# -- argument parsing ---------------------------------------------------------


def _parse_sizes(text: str) -> tuple[int, ...]:
    try:
        sizes = tuple(int(s) for s in text.split(",") if s.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"sizes must be comma-separated integers, got {text!r}") from None
    if not sizes or any(n < 0 for n in sizes):
        raise argparse.ArgumentTypeError("sizes must be non-negative")
    return sizes


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _env(name: str, default=None):
    return os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"), default)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--quantale", default=_env("quantale", "two"), help="catalog name, e.g. two, chain_min(3), trop(2)")
    p.add_argument("--quantale-file", default=_env("quantale_file"), help="JSON quantale spec")
    p.add_argument("--monad", default=_env("monad", "powerset"), help="identity, powerset, pv, filter, ultrafilter")
    p.add_argument("--tau", default=_env("tau"), help="identity, two_iso, two_to_filter")
    p.add_argument("--extension", default=_env("extension"), choices=("identity", "barr", "kleisli"))
    p.add_argument("--sizes", type=_parse_sizes, default=_parse_sizes(_env("sizes", "0,1,2")))
    p.add_argument("--seed", type=int, default=int(_env("seed", "0")))
    p.add_argument("--cap", type=_positive, default=int(_env("cap", str(DEFAULT_CAP))))
    p.add_argument("--out", default=_env("out"), help="write machine-readable lines (or the computed relation) here")
    p.add_argument("--mutate", default=_env("mutate"), choices=MUTATIONS)
    p.add_argument("--format", default=_env("format", "both"), choices=("text", "lines", "both"))
    p.add_argument("--timings", action="store_true", default=_env("timings") == "1", help="include durations in lines")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="laxkit", description="Finite lax extensions, presheaf monads and their law checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("laws", help="run a law suite")
    p.add_argument("what", choices=("quantale", "monad", "extension", "enrichment"))
    p.add_argument("--name", default=_env("name"), help="quantale name (alias for --quantale)")
    p.add_argument("--samples", type=_positive, default=int(_env("samples", "1000")))
    p.add_argument("--exhaustive-max", type=int, default=int(_env("exhaustive_max", "2")))
    _common(p)

    p = sub.add_parser("compute", help="evaluate an operation on relation spec files")
    p.add_argument("what", choices=("compose", "extension", "lifting", "opposite", "kleisli-ext"))
    p.add_argument("files", nargs="+")
    _common(p)

    p = sub.add_parser("enumerate", help="list structures on a finite set")
    p.add_argument("what", choices=("presheaf", "algebras", "monoids"))
    p.add_argument("--set-size", type=int, default=int(_env("set_size", "1")))
    _common(p)

    p = sub.add_parser("check", help="run a structural check")
    p.add_argument(
        "what",
        choices=("adjunction", "yoneda", "iso", "change-of-base", "convolution", "nbhd", "vcat", "vfunctor", "vmodule"),
    )
    p.add_argument("--rel", default=_env("rel"), help="relation spec (vcat, vmodule)")
    p.add_argument("--a", default=_env("a"), help="source V-category relation spec")
    p.add_argument("--b", default=_env("b"), help="target V-category relation spec")
    p.add_argument("--map", default=_env("map"), help="map spec (vfunctor)")
    _common(p)

    p = sub.add_parser("crosscheck", help="compare structure counts with independent oracles")
    p.add_argument("what", choices=("top-preorder",))
    p.add_argument("--size", type=int, default=None, help="check all sizes 0..n")
    _common(p)
    return parser


def _emit(reports: list[LawReport], args, out: list[str]) -> int:
    lines = [ln for rep in reports for ln in rep.lines(timings=args.timings)]
    if args.format in ("text", "both"):
        out.extend(rep.text() for rep in reports)
    if args.format in ("lines", "both"):
        out.extend(lines)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    return EXIT_OK if all(rep.passed for rep in reports) else EXIT_FAIL


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    out: list[str] = []
    try:
        if args.command == "laws":
            code = _emit(cmd_laws(args), args, out)
        elif args.command == "check":
            code = _emit(cmd_check(args), args, out)
        elif args.command == "crosscheck":
            code = _emit(cmd_crosscheck(args), args, out)
        elif args.command == "compute":
            cmd_compute(args, out)
            code = EXIT_OK
        else:
            cmd_enumerate(args, out)
            code = EXIT_OK
    except CapExceeded as exc:
        print(f"laxkit: cap exceeded: {exc}", file=stderr)
        return EXIT_CAP
    except (UsageError, StructureError) as exc:
        print(f"laxkit: {exc}", file=stderr)
        return EXIT_USAGE
    if out:
        print("\n".join(out), file=stdout)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
