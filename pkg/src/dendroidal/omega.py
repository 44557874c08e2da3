"""The tree category Omega.

A morphism S -> T is a map of the free coloured operads generated by the two
trees.  Because an operation of Omega(T) is pinned down by its output colour
and its (distinct) input colours, a morphism is determined by its edge map;
the per-vertex operation assignment is derived from it and kept available as
:attr:`TreeMorphism.vertex_map`.
"""
from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import permutations, product

from .trees import (
    Edge,
    NotClosed,
    Tree,
    TreeError,
    Vertex,
    closure,
    decalage,
    edge_order,
    eta,
    graft_root,
    is_closed,
)

__all__ = [
    "OperadOp",
    "TreeMorphism",
    "ElementaryFace",
    "FactorisationTriple",
    "NotAMorphism",
    "SourceTargetMismatch",
    "NotInnerEdge",
    "witness",
    "has_operation",
    "operations_of",
    "morphism",
    "identity",
    "compose",
    "compose_all",
    "hom",
    "isomorphisms",
    "automorphisms",
    "inclusion_is_morphism",
    "inner_face",
    "outer_face",
    "elementary_faces",
    "elementary_degeneracies",
    "face_chain",
    "factorize",
    "closure_unit",
    "cl_morphism",
    "decalage_unit",
    "decalage_root_map",
    "decalage_morphism",
    "root_preserving_extensions",
]


class NotAMorphism(TreeError):
    pass


class SourceTargetMismatch(TreeError):
    pass


class NotInnerEdge(TreeError):
    pass


# -- operations of Omega(T) ---------------------------------------------------


@dataclass(frozen=True)
class OperadOp:
    output: Edge
    inputs: tuple
    witness: frozenset  # names of the vertices of the subtree

    @property
    def is_identity(self) -> bool:
        return not self.witness and self.inputs == (self.output,)


def witness(t: Tree, out: Edge, leaves) -> frozenset | None:
    """Vertices of the subtree of `t` with root `out` and leaf set `leaves`,
    or None when no such subtree exists.  The identity is ``leaves == {out}``."""
    leaves = frozenset(leaves)
    if out not in t.edges:
        return None
    verts = []
    reached = set()
    stack = [out]
    while stack:
        e = stack.pop()
        if e in leaves:
            reached.add(e)
            continue
        v = t.above.get(e)
        if v is None:
            return None
        verts.append(v.name)
        stack.extend(v.inputs)
    if reached != leaves:
        return None
    return frozenset(verts)


def has_operation(t: Tree, out: Edge, leaves) -> bool:
    """Boolean form of :func:`witness` for distinct input colours."""
    above = t.above
    if out not in t.edges:
        return False
    leaves = leaves if isinstance(leaves, (set, frozenset)) else set(leaves)
    hit = 0
    stack = [out]
    while stack:
        e = stack.pop()
        if e in leaves:
            hit += 1
            continue
        v = above.get(e)
        if v is None:
            return False
        stack.extend(v.inputs)
    return hit == len(leaves)


@lru_cache(maxsize=4096)
def leafsets(t: Tree) -> dict:
    """Edge -> tuple of leaf sets of the subtrees rooted there."""
    out: dict = {}
    for e in reversed(t.edges_topdown):
        opts = [frozenset([e])]
        v = t.above.get(e)
        if v is not None:
            kids = [out[i] for i in t.inputs_sorted(v)]
            for choice in product(*kids):
                opts.append(frozenset().union(*choice))
        out[e] = tuple(opts)
    return out


def operations_of(t: Tree) -> list[OperadOp]:
    """Every operation of Omega(T): one per subtree and ordering of its leaves."""
    ops = []
    for d in t.edges_topdown:
        for leaves in leafsets(t)[d]:
            w = witness(t, d, leaves)
            for order in permutations(sorted(leaves, key=edge_order)):
                ops.append(OperadOp(d, order, w))
    return ops


# -- morphisms ----------------------------------------------------------------


def _key(m: Mapping) -> tuple:
    return tuple(sorted(((edge_order(a), edge_order(b)) for a, b in m.items())))


@dataclass(frozen=True, eq=False)
class TreeMorphism:
    source: Tree
    target: Tree
    edge_map: Mapping = field(repr=False)

    @cached_property
    def key(self) -> tuple:
        return _key(self.edge_map)

    def __eq__(self, other):
        if not isinstance(other, TreeMorphism):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.key == other.key

    def __hash__(self):
        return hash((self.source, self.target, self.key))

    def __call__(self, e: Edge) -> Edge:
        return self.edge_map[e]

    def __repr__(self):
        pairs = ", ".join(f"{a}->{b}" for a, b in sorted(self.edge_map.items(), key=lambda p: edge_order(p[0])))
        return f"TreeMorphism({pairs})"

    @cached_property
    def vertex_map(self) -> dict:
        """Vertex name -> operation of the target, inputs in sorted-input order."""
        out = {}
        for v in self.source.vertices:
            ins = tuple(self.edge_map[e] for e in self.source.inputs_sorted(v))
            w = witness(self.target, self.edge_map[v.out], ins)
            out[v.name] = OperadOp(self.edge_map[v.out], ins, w)
        return out

    @property
    def is_root_preserving(self) -> bool:
        return self.edge_map[self.source.root] == self.target.root

    @property
    def is_injective(self) -> bool:
        return len(set(self.edge_map.values())) == len(self.edge_map)

    @property
    def is_identity(self) -> bool:
        return self.source == self.target and all(a == b for a, b in self.edge_map.items())

    def is_iso(self) -> bool:
        return (
            self.is_injective
            and len(self.source.edges) == len(self.target.edges)
            and len(self.source.vertices) == len(self.target.vertices)
        )

    def check(self) -> None:
        problem = _morphism_problem(self.source, self.target, self.edge_map)
        if problem:
            raise NotAMorphism(problem)


def _morphism_problem(s: Tree, t: Tree, emap: Mapping) -> str | None:
    if set(emap) != set(s.edges):
        return "edge map must be defined exactly on the source edges"
    for e, img in emap.items():
        if img not in t.edges:
            return f"image {img!r} of {e!r} is not an edge of the target"
    for v in s.vertices:
        ins = [emap[e] for e in v.inputs]
        if len(set(ins)) != len(ins):
            return f"vertex {v.name!r} has repeated input colours"
        if witness(t, emap[v.out], ins) is None:
            return f"no operation {ins} -> {emap[v.out]!r} in the target for vertex {v.name!r}"
    return None


def morphism(source: Tree, target: Tree, edge_map: Mapping) -> TreeMorphism:
    """Validated constructor."""
    m = TreeMorphism(source, target, dict(edge_map))
    m.check()
    return m


def identity(t: Tree) -> TreeMorphism:
    return TreeMorphism(t, t, {e: e for e in t.edges})


def compose(g: TreeMorphism, f: TreeMorphism) -> TreeMorphism:
    """g after f."""
    if f.target != g.source:
        raise SourceTargetMismatch("target of f differs from source of g")
    return TreeMorphism(f.source, g.target, {e: g.edge_map[x] for e, x in f.edge_map.items()})


def compose_all(maps: list[TreeMorphism]) -> TreeMorphism:
    """maps[0] after maps[1] after ..."""
    out = maps[-1]
    for m in reversed(maps[:-1]):
        out = compose(m, out)
    return out


def inclusion_is_morphism(g: Tree, t: Tree) -> bool:
    """Is the identity-on-names map edges(g) -> edges(t) a morphism?  For
    trees sharing edge names this is the face relation."""
    if not g.edges <= t.edges:
        return False
    return all(has_operation(t, v.out, v.inputs) for v in g.vertices)


def _edge_maps(s: Tree, t: Tree, generators_only: bool = False) -> list[dict]:
    sets = leafsets(t)
    verts = [s.above[e] for e in s.edges_topdown if e in s.above]
    ins_of = [s.inputs_sorted(v) for v in verts]
    results: list[dict] = []
    emap: dict = {}

    def rec(k: int) -> None:
        if k == len(verts):
            results.append(dict(emap))
            return
        v, ins = verts[k], ins_of[k]
        d = emap[v.out]
        if generators_only:
            above = t.above.get(d)
            options = [above.inputs] if above is not None else []
        else:
            options = sets[d]
        for leaves in options:
            if len(leaves) != len(ins):
                continue
            for perm in permutations(sorted(leaves, key=edge_order)):
                for e, x in zip(ins, perm):
                    emap[e] = x
                rec(k + 1)
        for e in ins:
            emap.pop(e, None)

    for d in sorted(t.edges, key=edge_order):
        emap.clear()
        emap[s.root] = d
        rec(0)
    return results


def hom(s: Tree, t: Tree) -> list[TreeMorphism]:
    """All morphisms s -> t, sorted by edge map."""
    return sorted((TreeMorphism(s, t, m) for m in _edge_maps(s, t)), key=lambda m: m.key)


def isomorphisms(s: Tree, t: Tree) -> list[TreeMorphism]:
    if len(s.edges) != len(t.edges) or len(s.vertices) != len(t.vertices):
        return []
    maps = [m for m in _edge_maps(s, t, generators_only=True) if len(set(m.values())) == len(m)]
    return sorted((TreeMorphism(s, t, m) for m in maps), key=lambda m: m.key)


def automorphisms(t: Tree) -> list[TreeMorphism]:
    return isomorphisms(t, t)


# -- elementary faces and degeneracies --------------------------------------------


@dataclass(frozen=True)
class ElementaryFace:
    kind: str  # "inner" | "outer" | "corolla-edge"
    at: object  # contracted edge, chopped vertex name, or selected edge
    map: TreeMorphism

    @property
    def source(self) -> Tree:
        return self.map.source


def _inclusion(src: Tree, t: Tree) -> TreeMorphism:
    return TreeMorphism(src, t, {e: e for e in src.edges})


def inner_face(t: Tree, e: Edge) -> ElementaryFace:
    if e not in t.inner_edges:
        raise NotInnerEdge(f"{e!r} is not an inner edge")
    upper, lower = t.above[e], t.below[e]
    merged = Vertex(lower.name, lower.out, (lower.inputs - {e}) | upper.inputs)
    src = Tree.trusted(t.root, (t.vertices - {upper, lower}) | {merged})
    return ElementaryFace("inner", e, _inclusion(src, t))


def _inner_count(t: Tree, v: Vertex) -> int:
    return sum(1 for x in v.inputs | {v.out} if x in t.inner_edges)


def outer_face(t: Tree, vname: str) -> ElementaryFace:
    v = t.vertex_by_name[vname]
    if len(t.vertices) < 2 or _inner_count(t, v) != 1:
        raise TreeError(f"vertex {vname!r} does not give an outer face")
    if v.out == t.root:
        (new_root,) = [x for x in v.inputs if x in t.inner_edges]
        src = Tree.trusted(new_root, t.vertices - {v})
    else:
        src = Tree.trusted(t.root, t.vertices - {v})
    return ElementaryFace("outer", vname, _inclusion(src, t))


def elementary_faces(t: Tree) -> list[ElementaryFace]:
    """Inner faces, outer faces, and for a corolla its edge maps eta -> T."""
    faces = [inner_face(t, e) for e in sorted(t.inner_edges, key=edge_order)]
    if len(t.vertices) >= 2:
        faces += [
            outer_face(t, v.name)
            for v in sorted(t.vertices, key=lambda v: v.name)
            if _inner_count(t, v) == 1
        ]
    elif len(t.vertices) == 1:
        faces += [
            ElementaryFace("corolla-edge", e, _inclusion(Tree(e), t)) for e in sorted(t.edges, key=edge_order)
        ]
    return faces


def _fresh_edge(t: Tree, base: Edge, suffix: str = "s") -> Edge:
    cand = (base, suffix) if isinstance(base, tuple) else f"{base}.{suffix}"
    while cand in t.edges:
        cand = (cand, suffix) if isinstance(cand, tuple) else cand + "'"
    return cand


def _fresh_vertex(t: Tree, base: str) -> str:
    names = {v.name for v in t.vertices}
    while base in names:
        base += "'"
    return base


def degeneracy_at(t: Tree, e: Edge) -> TreeMorphism:
    """sigma_e : S -> T where S has a unary vertex inserted in the middle of e.
    The lower half keeps the name e."""
    upper = _fresh_edge(t, e)
    verts = set()
    for v in t.vertices:
        verts.add(Vertex(v.name, upper, v.inputs) if v.out == e else v)
    verts.add(Vertex(_fresh_vertex(t, f"s.{e}"), e, [upper]))
    src = Tree(t.root, verts)
    emap = {x: x for x in t.edges}
    emap[upper] = e
    return TreeMorphism(src, t, emap)


def elementary_degeneracies(t: Tree) -> list[TreeMorphism]:
    return [degeneracy_at(t, e) for e in sorted(t.edges, key=edge_order)]


def _collapse_vertex(s: Tree, u: Vertex) -> TreeMorphism:
    """Elementary degeneracy s -> s' removing the unary vertex u (its input
    edge is identified with its output edge)."""
    (i,) = u.inputs
    o = u.out
    verts = set()
    for v in s.vertices:
        if v == u:
            continue
        verts.add(Vertex(v.name, o, v.inputs) if v.out == i else v)
    tgt = Tree(s.root, verts)
    emap = {e: e for e in tgt.edges}
    emap[i] = o
    return TreeMorphism(s, tgt, emap)


# -- factorisation -----------------------------------------------------------------


@dataclass(frozen=True)
class FactorisationTriple:
    degeneracy: TreeMorphism
    iso: TreeMorphism
    face: TreeMorphism
    degeneracy_steps: tuple = ()
    face_steps: tuple = ()

    def composite(self) -> TreeMorphism:
        return compose(self.face, compose(self.iso, self.degeneracy))


def face_chain(t: Tree, g: Tree) -> list[ElementaryFace]:
    """Elementary faces t = T_0 <- T_1 <- ... <- T_k with T_k structurally equal
    to `g`, where `g` is a tree on a subset of the edges of `t` whose
    inclusion is a morphism."""
    if not inclusion_is_morphism(g, t):
        raise NotAMorphism("target tree is not a face")
    steps: list[ElementaryFace] = []
    cur = t
    while cur.structure != g.structure:
        for f in elementary_faces(cur):
            if inclusion_is_morphism(g, f.source):
                steps.append(f)
                cur = f.source
                break
        else:  # pragma: no cover - contradicts the face decomposition
            raise NotAMorphism("no elementary face keeps the target as a face")
    return steps


def factorize(f: TreeMorphism) -> FactorisationTriple:
    """Degeneracy, then isomorphism, then face map, with explicit chains of
    elementary degeneracies and elementary faces.

    When f collapses something, the degeneracy is the composite of
    `degeneracy_steps` followed by the relabelling onto the face source, and
    the iso is the identity.  Otherwise the degeneracy is the identity and the
    iso carries the renaming.
    """
    s, t = f.source, f.target
    deg_steps = []
    cur = s
    while True:
        u = next(
            (
                v
                for v in sorted(cur.vertices, key=lambda v: v.name)
                if v.arity == 1 and f.edge_map[next(iter(v.inputs))] == f.edge_map[v.out]
            ),
            None,
        )
        if u is None:
            break
        step = _collapse_vertex(cur, u)
        deg_steps.append(step)
        cur = step.target
    deg = identity(s)
    for step in deg_steps:
        deg = compose(step, deg)
    reduced = cur
    g = {e: f.edge_map[e] for e in reduced.edges}
    if len(set(g.values())) != len(g):
        raise NotAMorphism("map without identity-assigned unary vertices is not injective")
    image = Tree(
        g[reduced.root],
        [Vertex(v.name, g[v.out], [g[e] for e in v.inputs]) for v in reduced.vertices],
    )
    chain = face_chain(t, image)
    face_src = chain[-1].source if chain else t
    face = compose_all([c.map for c in chain]) if chain else identity(t)
    if deg_steps:
        # land the degeneracy directly on the face source; the renaming it
        # absorbs is the isomorphism factor, which is then the identity
        deg = TreeMorphism(s, face_src, {e: g[x] for e, x in deg.edge_map.items()})
        iso = identity(face_src)
    else:
        iso = TreeMorphism(reduced, face_src, g)
    return FactorisationTriple(deg, iso, face, tuple(deg_steps), tuple(chain))


# -- closure and décalage on morphisms -------------------------------------------------


def closure_unit(t: Tree) -> TreeMorphism:
    """eta_T : T -> cl(T)."""
    ct, emap = closure(t)
    return TreeMorphism(t, ct, emap)


def cl_morphism(f: TreeMorphism) -> TreeMorphism:
    """The unique map cl(S) -> cl(T) extending f; closure adds no edges, so the
    edge map is unchanged."""
    return morphism(closure(f.source)[0], closure(f.target)[0], f.edge_map)


def decalage_unit(t: Tree) -> TreeMorphism:
    """u_T : T -> D(T), the outer face chopping the new root vertex."""
    dt, emap, _ = decalage(t)
    return TreeMorphism(t, dt, emap)


def decalage_root_map(t: Tree) -> TreeMorphism:
    """The root map cl(eta) = C_0 -> D(T) of a closed tree."""
    dt, _, new_root = decalage(t)
    c0 = closure(eta())[0]
    return morphism(c0, dt, {c0.root: new_root})


def decalage_morphism(f: TreeMorphism) -> TreeMorphism:
    """D(f): the unique root-preserving map D(S) -> D(T) extending f."""
    if not (is_closed(f.source) and is_closed(f.target)):
        raise NotClosed("D acts on morphisms between closed trees only")
    ds, _, a_s = decalage(f.source)
    dt, _, a_t = decalage(f.target)
    emap = dict(f.edge_map)
    emap[a_s] = a_t
    return morphism(ds, dt, emap)


def root_preserving_extensions(f: TreeMorphism) -> list[TreeMorphism]:
    """Exhaustively search hom(D(S), D(T)) for root-preserving maps restricting
    to f along the inclusions.  Works for arbitrary (also non-closed) trees."""
    ds, _, a_s = graft_root(f.source)
    dt, _, a_t = graft_root(f.target)
    return [
        m
        for m in hom(ds, dt)
        if m.edge_map[a_s] == a_t and all(m.edge_map[e] == f.edge_map[e] for e in f.source.edges)
    ]
