"""Command-line front end: ``omega <subcommand> ...``.

Trees are given as term syntax (``a[u](b,c)``), a JSON document, or a path to
a file holding either.  Exit codes: 0 success or pass, 1 a verification
failed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import inspect
import json
import os
import sys

from .homotopy import FacePoset, asphericity, face_poset
from .omega import (
    TreeMorphism,
    closure_unit,
    decalage_unit,
    elementary_degeneracies,
    elementary_faces,
    factorize,
    hom,
)
from .presheaves import (
    Representable,
    SubPresheaf,
    boundary,
    inner_horn,
    product,
    segal_core,
    sieves,
)
from .serialize import (
    _edge_json,
    _name,
    load_tree,
    morphism_from_dict,
    morphism_to_dict,
    to_term,
    tree_to_dict,
    tree_to_dot,
    tree_to_json,
)
from .shuffles import TensorAmbient, shuffles, simplex_shuffles
from .trees import Tree, TreeError, closure, decalage, edge_order
from .verify import SUITES, BoundsTooLarge, UnknownSuite, run_verify

FORMATS = ("json", "dot", "term")


class UnsupportedFormat(ValueError):
    pass


def _read(arg: str) -> str:
    if os.path.exists(arg):
        with open(arg) as fh:
            return fh.read()
    return arg


def _tree(arg: str) -> Tree:
    return load_tree(_read(arg))


def subobject_to_dict(x: SubPresheaf, max_elements: int = 500) -> dict:
    amb = x.ambient
    if isinstance(amb, TensorAmbient):
        ambient = {"tensor": [tree_to_dict(amb.s), tree_to_dict(amb.t)]}
    else:
        ambient = {"representable": tree_to_dict(amb.tree)}
    out = {"ambient": ambient, "generators": [tree_to_dict(g) for g in x.generators]}
    try:
        nd = x.nondegenerate(max_nodes=max_elements)
    except TreeError:
        return out
    out["elements"] = [
        {"shape": tree_to_dict(g), "data": {_name(e): _edge_json(e) for e in sorted(g.edges, key=edge_order)}}
        for g in nd
    ]
    return out


def emit(obj, fmt: str) -> str:
    """Serialise a tree, morphism, face poset or subobject."""
    if fmt not in FORMATS:
        raise UnsupportedFormat(f"unsupported format {fmt!r}; choose from {', '.join(FORMATS)}")
    if isinstance(obj, Tree):
        return {"json": lambda: tree_to_json(obj), "dot": lambda: tree_to_dot(obj), "term": lambda: to_term(obj)}[fmt]()
    if isinstance(obj, FacePoset):
        if fmt == "dot":
            return obj.to_dot()
        if fmt == "json":
            return json.dumps(
                {"nodes": obj.labels, "covers": [[i, j] for j in range(len(obj)) for i in obj.covers_below(j)]},
                sort_keys=True,
            )
        raise UnsupportedFormat(f"{fmt} for a face poset")
    if isinstance(obj, TreeMorphism):
        if fmt == "json":
            return json.dumps(morphism_to_dict(obj), sort_keys=True)
        if fmt == "term":
            return f"{to_term(obj.source)} -> {to_term(obj.target)} {obj!r}"
        raise UnsupportedFormat(f"{fmt} for a morphism")
    if isinstance(obj, SubPresheaf):
        if fmt == "json":
            return json.dumps(subobject_to_dict(obj), sort_keys=True)
        if fmt == "term":
            return "\n".join(to_term(g) for g in obj.generators)
        raise UnsupportedFormat(f"{fmt} for a subobject")
    raise UnsupportedFormat(f"cannot serialise {type(obj).__name__}")


def _object(kind: str, args: list[str]):
    if kind == "rep":
        return Representable(_tree(args[0]))
    if kind == "boundary":
        return boundary(_tree(args[0]))
    if kind == "horn":
        return inner_horn(_tree(args[0]), args[1])
    if kind == "segal-core":
        return segal_core(_tree(args[0]))
    if kind == "tensor":
        return TensorAmbient(_tree(args[0]), _tree(args[1]))
    if kind == "product":
        return product(Representable(_tree(args[0])), Representable(_tree(args[1])))
    raise TreeError(f"unknown object kind {kind!r}")


OBJECT_KINDS = ("rep", "boundary", "horn", "segal-core", "tensor", "product")


def _out(args, payload, text: str) -> None:
    print(json.dumps(payload, sort_keys=True, indent=1) if args.json else text)


def _cmd_hom(args):
    s, t = _tree(args.source), _tree(args.target)
    hs = hom(s, t)
    _out(args, [morphism_to_dict(f) for f in hs], "\n".join(repr(f) for f in hs) + f"\n{len(hs)} morphisms")


def _cmd_faces(args):
    t = _tree(args.tree)
    fs = elementary_faces(t)
    _out(
        args,
        [{"kind": f.kind, "at": str(f.at), "source": tree_to_dict(f.map.source)} for f in fs],
        "\n".join(f"{f.kind:13} {f.at!s:8} {to_term(f.map.source)}" for f in fs),
    )


def _cmd_degeneracies(args):
    t = _tree(args.tree)
    ds = elementary_degeneracies(t)
    _out(args, [morphism_to_dict(d) for d in ds], "\n".join(f"{to_term(d.source)} -> {to_term(t)}" for d in ds))


def _cmd_factorize(args):
    f = morphism_from_dict(json.loads(_read(args.morphism)))
    tr = factorize(f)
    payload = {
        "degeneracy": morphism_to_dict(tr.degeneracy),
        "iso": morphism_to_dict(tr.iso),
        "face": morphism_to_dict(tr.face),
        "degeneracy_steps": len(tr.degeneracy_steps),
        "face_steps": [{"kind": s.kind, "at": str(s.at)} for s in tr.face_steps],
        "recomposes": tr.composite() == f,
    }
    text = (
        f"degeneracy {to_term(tr.degeneracy.source)} -> {to_term(tr.degeneracy.target)}\n"
        f"iso        {to_term(tr.iso.source)} -> {to_term(tr.iso.target)}\n"
        f"face       {to_term(tr.face.source)} -> {to_term(tr.face.target)} via "
        + (", ".join(f"{s.kind}({s.at})" for s in tr.face_steps) or "identity")
    )
    _out(args, payload, text)
    return 0 if payload["recomposes"] else 1


def _cmd_closure(args):
    t = _tree(args.tree)
    ct, _ = closure(t)
    if args.dot:
        print(tree_to_dot(ct))
        return 0
    _out(args, {"closure": tree_to_dict(ct), "unit": morphism_to_dict(closure_unit(t))}, to_term(ct))
    return 0


def _cmd_decalage(args):
    t = _tree(args.tree)
    dt, _, root = decalage(t)
    if args.dot:
        print(tree_to_dot(dt))
        return 0
    _out(
        args,
        {"decalage": tree_to_dict(dt), "new_root": str(root), "unit": morphism_to_dict(decalage_unit(t))},
        to_term(dt),
    )
    return 0


def _subobject_cmd(x: SubPresheaf, args):
    if args.dot:
        print(face_poset(x).to_dot())
        return 0
    _out(args, subobject_to_dict(x), "\n".join(to_term(g) for g in x.generators) or "(empty)")
    return 0


def _cmd_sieves(args):
    ss = sieves(_tree(args.tree))
    _out(
        args,
        [[tree_to_dict(g) for g in s.generators] for s in ss],
        "\n".join("{" + ", ".join(to_term(g) for g in s.generators) + "}" for s in ss) + f"\n{len(ss)} sieves",
    )


def _cmd_shuffles(args):
    s, t = _tree(args.source), _tree(args.target)
    shs = shuffles(s, t)
    if args.dot:
        print("\n".join(tree_to_dot(sh.tree, name=f"shuffle{i}") for i, sh in enumerate(shs)))
        return 0
    _out(
        args,
        [{"tree": tree_to_dict(sh.tree), "kinds": dict(sh.kinds)} for sh in shs],
        "\n".join(to_term(sh.tree) for sh in shs) + f"\n{len(shs)} shuffles",
    )


def _cmd_simplex_shuffles(args):
    shs = simplex_shuffles(args.m, args.n)
    _out(args, [[list(p) for p in sh.path] for sh in shs], "\n".join(sh.steps for sh in shs) + f"\n{len(shs)} shuffles")


def _cmd_aspherical(args):
    x = _object(args.kind, args.args)
    v = asphericity(x, restarts=args.restarts, seed=args.seed, materialise=True)
    if args.max_degree is not None and v.homology is not None:
        v.homology.betti = {k: b for k, b in v.homology.betti.items() if k <= args.max_degree}
    _out(args, v.as_dict(), f"{v.kind} {json.dumps(v.evidence, sort_keys=True)}")
    return 0 if v.kind != "NotAspherical" else 1


def _cmd_verify(args):
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    ok = True
    reports = []
    for name in names:
        bounds = {}
        params = inspect.signature(SUITES[name].run).parameters
        if args.max_vertices is not None and "max_vertices" in params:
            bounds["max_vertices"] = args.max_vertices
        if args.max_arity is not None and "max_arity" in params:
            bounds["max_arity"] = args.max_arity
        if "seed" in params:
            bounds["seed"] = args.seed
        rep = run_verify(name, **bounds)
        ok &= rep.passed
        reports.append(rep)
        print(f"{name}: {'pass' if rep.passed else 'FAIL'} ({rep.seconds:.1f}s)", file=sys.stderr)
    docs = [r.as_dict(args.timing) for r in reports]
    print(json.dumps(docs[0] if len(docs) == 1 else docs, sort_keys=True, indent=1, default=str))
    return 0 if ok else 1


def _cmd_emit(args):
    if args.kind == "tree":
        obj = _tree(args.args[0])
    elif args.kind == "poset":
        obj = face_poset(_object(args.args[0], args.args[1:]))
    else:
        obj = _object(args.kind, args.args)
    print(emit(obj, args.format))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--dot", action="store_true", help="Graphviz output where meaningful")
    common.add_argument("--max-vertices", type=int, default=None)
    common.add_argument("--max-arity", type=int, default=None)
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="omega", description="Trees, dendroidal sets and their verification suites.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, *positionals, **kw):
        sp = sub.add_parser(name, parents=[common], **kw)
        for pos in positionals:
            sp.add_argument(pos)
        sp.set_defaults(fn=fn)
        return sp

    add("hom", _cmd_hom, "source", "target", help="list morphisms S -> T")
    add("faces", _cmd_faces, "tree", help="elementary faces")
    add("degeneracies", _cmd_degeneracies, "tree", help="elementary degeneracies")
    add("factorize", _cmd_factorize, "morphism", help="degeneracy/iso/face factorisation of a morphism JSON")
    add("closure", _cmd_closure, "tree")
    add("decalage", _cmd_decalage, "tree")
    add("boundary", lambda a: _subobject_cmd(boundary(_tree(a.tree)), a), "tree")
    add("horn", lambda a: _subobject_cmd(inner_horn(_tree(a.tree), a.edge), a), "tree", "edge")
    add("segal-core", lambda a: _subobject_cmd(segal_core(_tree(a.tree)), a), "tree")
    add("sieves", _cmd_sieves, "tree")
    add("shuffles", _cmd_shuffles, "source", "target")
    sp = add("simplex-shuffles", _cmd_simplex_shuffles)
    sp.add_argument("m", type=int)
    sp.add_argument("n", type=int)
    sp = add("aspherical", _cmd_aspherical, help="asphericity verdict for rep/boundary/horn/segal-core/tensor/product")
    sp.add_argument("kind", choices=OBJECT_KINDS)
    sp.add_argument("args", nargs="+")
    sp.add_argument("--max-degree", type=int, default=None)
    sp.add_argument("--restarts", type=int, default=32)
    sp = add("verify", _cmd_verify, help="run a verification suite (or 'all')")
    sp.add_argument("suite", choices=sorted(SUITES) + ["all"])
    sp.add_argument("--timing", action="store_true", help="include wall-clock seconds in the JSON")
    sp = add("emit", _cmd_emit, help="serialise an object: tree T | poset KIND ARGS | KIND ARGS")
    sp.add_argument("kind", choices=("tree", "poset") + OBJECT_KINDS)
    sp.add_argument("args", nargs="+")
    sp.add_argument("--format", default="term")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        rc = args.fn(args)
    except (TreeError, UnsupportedFormat, BoundsTooLarge, UnknownSuite, KeyError, IndexError, json.JSONDecodeError) as e:
        print(f"omega: error: {e}", file=sys.stderr)
        return 2
    return int(rc or 0)


if __name__ == "__main__":
    sys.exit(main())
