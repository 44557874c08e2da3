"""Text formats for trees: compact term syntax, JSON documents, DOT graphs.

Term syntax::

    Edge ::= name [ "[" vertex "]" "(" [Edge ("," Edge)*] ")" ]

A bare name is a leaf; ``e[w]()`` is an edge carrying a nullary vertex.
"""
from __future__ import annotations

import json
import re

from .trees import Edge, Tree, TreeError, Vertex, edge_order

_TOKEN = re.compile(r"\s*(?:([\[\]\(\),])|([^\s\[\]\(\),]+))")


class TermSyntaxError(TreeError):
    pass


def _tokenize(text: str) -> list[str]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise TermSyntaxError(f"unexpected character at {pos}: {text[pos:]!r}")
        out.append(m.group(1) or m.group(2))
        pos = m.end()
    return out


def parse_term(text: str) -> Tree:
    """Parse e.g. ``a[u](b[v](c,d), e[w](), f)``."""
    toks = _tokenize(text)
    vertices: list[Vertex] = []
    i = 0

    def expect(tok):
        nonlocal i
        if i >= len(toks) or toks[i] != tok:
            got = toks[i] if i < len(toks) else "end of input"
            raise TermSyntaxError(f"expected {tok!r}, got {got!r}")
        i += 1

    def name():
        nonlocal i
        if i >= len(toks) or toks[i] in "[](),":
            raise TermSyntaxError("expected a name")
        i += 1
        return toks[i - 1]

    def peek():
        return toks[i] if i < len(toks) else None

    def edge():
        nonlocal i
        e = name()
        if i < len(toks) and toks[i] == "[":
            i += 1
            vname = name()
            expect("]")
            expect("(")
            kids = []
            if peek() != ")":
                kids.append(edge())
                while peek() == ",":
                    i += 1
                    kids.append(edge())
            expect(")")
            vertices.append(Vertex(vname, e, kids))
        return e

    root = edge()
    if i != len(toks):
        raise TermSyntaxError(f"trailing input: {' '.join(toks[i:])}")
    return Tree(root, vertices)


def _name(e: Edge) -> str:
    if isinstance(e, tuple):
        return "(" + ",".join(_name(x) for x in e) + ")"
    return str(e)


def to_term(t: Tree) -> str:
    def go(e):
        v = t.above.get(e)
        if v is None:
            return _name(e)
        kids = t.inputs_sorted(v)
        sep = ", " if any(k in t.above for k in kids) else ","
        return f"{_name(e)}[{v.name}](" + sep.join(go(k) for k in kids) + ")"

    return go(t.root)


def _edge_json(e: Edge):
    return [_edge_json(x) for x in e] if isinstance(e, tuple) else e


def _edge_from_json(x) -> Edge:
    return tuple(_edge_from_json(y) for y in x) if isinstance(x, list) else x


def tree_to_dict(t: Tree) -> dict:
    return {
        "edges": [_edge_json(e) for e in sorted(t.edges, key=edge_order)],
        "root": _edge_json(t.root),
        "vertices": [
            {"name": v.name, "out": _edge_json(v.out), "in": [_edge_json(e) for e in t.inputs_sorted(v)]}
            for v in sorted(t.vertices, key=lambda v: edge_order(v.out))
        ],
    }


def tree_from_dict(d: dict) -> Tree:
    t = Tree(
        _edge_from_json(d["root"]),
        [Vertex(v["name"], _edge_from_json(v["out"]), [_edge_from_json(e) for e in v["in"]]) for v in d["vertices"]],
    )
    if "edges" in d and {_edge_from_json(e) for e in d["edges"]} != set(t.edges):
        raise TreeError("edge list does not match the vertex incidences")
    return t


def tree_to_json(t: Tree) -> str:
    return json.dumps(tree_to_dict(t), sort_keys=True)


def load_tree(text: str) -> Tree:
    """Accept either a JSON tree document or the term syntax."""
    s = text.strip()
    if s.startswith("{"):
        return tree_from_dict(json.loads(s))
    return parse_term(s)


def tree_to_dot(t: Tree, name: str = "T") -> str:
    """Vertices become nodes; edges become graph edges (leaves and the root
    get invisible endpoint nodes)."""
    lines = [f'digraph "{name}" {{', "  rankdir=BT;"]
    node = {}
    for v in sorted(t.vertices, key=lambda v: edge_order(v.out)):
        node[v.out] = f'"v:{v.name}"'
        lines.append(f'  "v:{v.name}" [label="{v.name}", shape=circle];')
    for e in sorted(t.edges, key=edge_order):
        lo = t.below.get(e)
        lo_node = f'"v:{lo.name}"' if lo else f'"root:{_name(e)}"'
        hi_node = node.get(e, f'"leaf:{_name(e)}"')
        if lo is None:
            lines.append(f'  {lo_node} [shape=point];')
        if e not in t.above:
            lines.append(f'  {hi_node} [shape=point];')
        lines.append(f'  {lo_node} -> {hi_node} [label="{_name(e)}", dir=none];')
    lines.append("}")
    return "\n".join(lines)


def morphism_to_dict(f) -> dict:
    src, tgt = f.source, f.target
    return {
        "source": tree_to_dict(src),
        "target": tree_to_dict(tgt),
        "edge_map": {_name(e): _edge_json(f.edge_map[e]) for e in sorted(src.edges, key=edge_order)},
        "vertex_map": {
            name: {"out": _edge_json(op.output), "in": [_edge_json(e) for e in op.inputs]}
            for name, op in sorted(f.vertex_map.items())
        },
    }


def morphism_from_dict(d: dict):
    """Inverse of :func:`morphism_to_dict`; the vertex map is recomputed from
    the edge map and checked against the document when present."""
    from .omega import morphism

    src, tgt = tree_from_dict(d["source"]), tree_from_dict(d["target"])
    by_name = {_name(e): e for e in src.edges}
    emap = {by_name[k]: _edge_from_json(v) for k, v in d["edge_map"].items()}
    f = morphism(src, tgt, emap)
    for name, op in d.get("vertex_map", {}).items():
        mine = f.vertex_map[name]
        if _edge_from_json(op["out"]) != mine.output or {_edge_from_json(e) for e in op["in"]} != set(mine.inputs):
            raise TreeError(f"vertex map of {name!r} disagrees with the edge map")
    return f
