"""Finite dendroidal sets given by colour maps.

Every presheaf handled here has elements of shape U described by a *colour
map* edges(U) -> colours (edges of a tree, or pairs of edges for tensor and
cartesian products); the Omega-action is precomposition of colour maps.  A
nondegenerate element is injective on colours, so up to isomorphism of its
shape it is the same thing as a *colour tree*: a :class:`Tree` whose edge
names are colours.  Faces of colour trees are detected by
:func:`omega.inclusion_is_morphism`.

Subpresheaves are stored by their maximal nondegenerate elements
(``generators``); membership, union, intersection and fullness work on
generators directly, so objects with astronomically many faces stay cheap.
"""
from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property

from .omega import (
    TreeMorphism,
    automorphisms,
    elementary_faces,
    has_operation,
    hom,
    inclusion_is_morphism,
    NotInnerEdge,
)
from .trees import Edge, Tree, TreeError, Vertex, edge_order, enumerate_trees

__all__ = [
    "Element",
    "Presheaf",
    "Ambient",
    "Representable",
    "SubPresheaf",
    "ProductPresheaf",
    "QuotientPresheaf",
    "SmallCategory",
    "AmbientMismatch",
    "NotASubobject",
    "max_faces_within",
    "common_faces",
    "maximal_trees",
    "downward_closure",
    "elements_of",
    "boundary",
    "inner_horn",
    "segal_core",
    "union",
    "intersection",
    "full_subobject",
    "is_full",
    "is_representable",
    "yoneda_bijective",
    "is_normal",
    "is_normal_mono",
    "sieves",
    "product",
    "category_of_elements",
]


class AmbientMismatch(TreeError):
    pass


class NotASubobject(TreeError):
    pass


# -- elements -----------------------------------------------------------------


@dataclass(frozen=True)
class Element:
    shape: Tree
    colours: tuple  # ((edge, colour), ...) sorted by edge

    @classmethod
    def of(cls, shape: Tree, cmap) -> "Element":
        return cls(shape, tuple(sorted(cmap.items(), key=lambda p: edge_order(p[0]))))

    @cached_property
    def map(self) -> dict:
        return dict(self.colours)

    def pull(self, f: TreeMorphism) -> "Element":
        """Precompose with f : V -> shape."""
        m = self.map
        return Element.of(f.source, {e: m[x] for e, x in f.edge_map.items()})

    @property
    def is_degenerate(self) -> bool:
        m = self.map
        return any(v.arity == 1 and m[next(iter(v.inputs))] == m[v.out] for v in self.shape.vertices)

    def image_tree(self) -> Tree:
        """The colour tree of a nondegenerate (injective) element."""
        m = self.map
        if len(set(m.values())) != len(m):
            raise TreeError("element is not injective on colours")
        return Tree(m[self.shape.root], [Vertex(v.name, m[v.out], [m[e] for e in v.inputs]) for v in self.shape.vertices])


def reduce_element(el: Element) -> Element:
    """Strip the degeneracies of an element: collapse unary vertices whose
    input and output carry the same colour."""
    m = dict(el.map)
    shape = el.shape
    while True:
        u = next(
            (v for v in shape.vertices if v.arity == 1 and m[next(iter(v.inputs))] == m[v.out]),
            None,
        )
        if u is None:
            return Element.of(shape, m)
        (i,) = u.inputs
        verts = [Vertex(v.name, u.out, v.inputs) if v.out == i else v for v in shape.vertices if v != u]
        shape = Tree(shape.root, verts)
        del m[i]


# -- face algorithms on colour trees -------------------------------------------------


def _scan_up(t: Tree, x: Edge, allowed) -> tuple[list, bool]:
    """Nearest allowed edges strictly above x, and whether some upward path
    from x reaches a leaf of t without meeting an allowed edge."""
    v = t.above.get(x)
    if v is None:
        return [], True
    found, escapes = [], False
    stack = list(v.inputs)
    while stack:
        e = stack.pop()
        if e in allowed:
            found.append(e)
            continue
        w = t.above.get(e)
        if w is None:
            escapes = True
        else:
            stack.extend(w.inputs)
    return found, escapes


def max_faces_within(t: Tree, allowed) -> list[Tree]:
    """Maximal faces of `t` all of whose edges lie in `allowed`.

    Grows a face greedily from each lowest allowed edge; an edge with an
    upward path escaping the allowed set must be a leaf of the face, and the
    allowed edges above it start fresh faces.
    """
    allowed = frozenset(allowed) & t.edges
    roots = []
    for e in allowed:
        p = t.parent[e]
        while p is not None and p not in allowed:
            p = t.parent[p]
        if p is None:
            roots.append(e)
    out = []
    work = roots
    while work:
        r = work.pop()
        verts = []
        stack = [r]
        while stack:
            x = stack.pop()
            ys, escapes = _scan_up(t, x, allowed)
            if escapes:
                work.extend(ys)
            else:
                verts.append(Vertex(t.above[x].name, x, ys))
                stack.extend(ys)
        out.append(Tree.trusted(r, verts))
    return out


def _cap_meet(a: Tree, b: Tree) -> Tree:
    """Largest common face of two faces with the same edge set: keep the
    nullary vertices present in both."""
    na = {v.out: v for v in a.vertices if v.arity}
    nb = {v.out: v for v in b.vertices if v.arity}
    if {(o, v.inputs) for o, v in na.items()} != {(o, v.inputs) for o, v in nb.items()}:
        raise TreeError("faces on equal edge sets with different shapes")
    caps_b = {v.out for v in b.vertices if not v.arity}
    verts = list(na.values()) + [v for v in a.vertices if not v.arity and v.out in caps_b]
    return Tree.trusted(a.root, verts)


def common_faces(a: Tree, b: Tree) -> list[Tree]:
    """Maximal trees that are faces of both colour trees (possibly empty)."""
    out = []
    for m in max_faces_within(a, a.edges & b.edges):
        if inclusion_is_morphism(m, b):
            out.append(m)
            continue
        for m2 in max_faces_within(b, m.edges):
            if inclusion_is_morphism(m2, m):
                out.append(m2)
            elif m2.edges == m.edges:
                out.append(_cap_meet(m, m2))
            else:
                out.extend(common_faces(m, m2))
    return maximal_trees(out)


def maximal_trees(trees: Iterable[Tree]) -> tuple[Tree, ...]:
    """Deduplicate by structure and drop trees that are faces of others."""
    uniq = {}
    for t in trees:
        uniq.setdefault(t.structure, t)
    if len(uniq) == 1:
        return tuple(uniq.values())
    ts = sorted(uniq.values(), key=lambda t: (-len(t.edges), -len(t.vertices)))
    keep: list[Tree] = []
    for t in ts:
        if not any(t.edges <= k.edges and inclusion_is_morphism(t, k) for k in keep):
            keep.append(t)
    return tuple(sorted(keep, key=_tree_key))


def _tree_key(t: Tree):
    return (
        edge_order(t.root),
        tuple(sorted((edge_order(v.out), tuple(sorted(map(edge_order, v.inputs)))) for v in t.vertices)),
    )


def downward_closure(generators: Iterable[Tree], max_nodes: int | None = None) -> list[Tree]:
    """All faces of the given colour trees, one per structure."""
    seen: dict = {}
    stack = list(generators)
    while stack:
        t = stack.pop()
        if t.structure in seen:
            continue
        seen[t.structure] = t
        if max_nodes is not None and len(seen) > max_nodes:
            raise TreeError(f"more than {max_nodes} nondegenerate elements")
        stack.extend(f.source for f in elementary_faces(t))
    return sorted(seen.values(), key=lambda t: (len(t.vertices), len(t.edges), _tree_key(t)))


# -- presheaves ----------------------------------------------------------------------


class Presheaf:
    """Interface: a colour presheaf enumerable shape by shape."""

    def elements(self, shape: Tree) -> list[Element]:
        raise NotImplementedError

    def act(self, el: Element, f: TreeMorphism) -> Element:
        return el.pull(f)

    def contains(self, el: Element) -> bool:
        return el in set(self.elements(el.shape))


class GeneratedPresheaf(Presheaf):
    """Downward closure of a set of colour trees."""

    generators: tuple

    def elements(self, shape: Tree) -> list[Element]:
        found = {}
        for g in self.generators:
            for f in hom(shape, g):
                el = Element.of(shape, f.edge_map)
                found[el.colours] = el
        return [found[k] for k in sorted(found, key=lambda c: tuple((edge_order(a), edge_order(b)) for a, b in c))]

    def contains_tree(self, t: Tree) -> bool:
        return any(t.edges <= g.edges and inclusion_is_morphism(t, g) for g in self.generators)

    def contains(self, el: Element) -> bool:
        red = reduce_element(el)
        try:
            img = red.image_tree()
        except TreeError:
            return False
        return self.contains_tree(img)

    def nondegenerate(self, max_nodes: int | None = None) -> list[Tree]:
        return downward_closure(self.generators, max_nodes)

    @property
    def eta_elements(self) -> frozenset:
        return frozenset().union(*(g.edges for g in self.generators)) if self.generators else frozenset()

    @property
    def is_empty(self) -> bool:
        return not self.generators


class Ambient(GeneratedPresheaf):
    """A presheaf serving as the ambient of subobjects: a representable or a
    tensor product of two trees."""

    key: tuple

    def full(self) -> "SubPresheaf":
        return SubPresheaf(self, self.generators)

    def __eq__(self, other):
        return isinstance(other, Ambient) and self.key == other.key

    def __hash__(self):
        return hash(self.key)


class Representable(Ambient):
    def __init__(self, t: Tree):
        self.tree = t
        self.generators = (t,)
        self.key = ("rep", t)

    def elements(self, shape: Tree) -> list[Element]:
        return [Element.of(shape, f.edge_map) for f in hom(shape, self.tree)]

    def __repr__(self):
        return f"Representable({self.tree!r})"


@dataclass(frozen=True, eq=False)
class SubPresheaf(GeneratedPresheaf):
    ambient: Ambient
    generators: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "generators", maximal_trees(self.generators))

    def __eq__(self, other):
        if not isinstance(other, SubPresheaf):
            return NotImplemented
        return self.ambient == other.ambient and {g.structure for g in self.generators} == {
            g.structure for g in other.generators
        }

    def __hash__(self):
        return hash((self.ambient, frozenset(g.structure for g in self.generators)))

    def __le__(self, other: "SubPresheaf") -> bool:
        _same_ambient([self, other])
        return all(other.contains_tree(g) for g in self.generators)

    def __lt__(self, other: "SubPresheaf") -> bool:
        return self <= other and self != other

    def __repr__(self):
        from .serialize import to_term

        return f"SubPresheaf({[to_term(g) for g in self.generators]})"


def _same_ambient(xs: Sequence[SubPresheaf]) -> Ambient:
    if not xs:
        raise AmbientMismatch("need at least one subobject")
    amb = xs[0].ambient
    if any(x.ambient != amb for x in xs[1:]):
        raise AmbientMismatch("subobjects live in different ambients")
    return amb


def elements_of(ambient: Presheaf, shape: Tree) -> list[Element]:
    return ambient.elements(shape)


# -- standard subobjects of a representable --------------------------------------------------


def boundary(t: Tree) -> SubPresheaf:
    """Union of the elementary faces of t."""
    return SubPresheaf(Representable(t), tuple(f.source for f in elementary_faces(t)))


def inner_horn(t: Tree, e: Edge) -> SubPresheaf:
    """Union of all elementary faces except the inner face contracting e."""
    if e not in t.inner_edges:
        raise NotInnerEdge(f"{e!r} is not an inner edge")
    faces = [f.source for f in elementary_faces(t) if not (f.kind == "inner" and f.at == e)]
    return SubPresheaf(Representable(t), tuple(faces))


def corolla_at(t: Tree, v: Vertex) -> Tree:
    return Tree(v.out, [v])


def segal_core(t: Tree) -> SubPresheaf:
    """Subobject generated by the corolla of each vertex.  For eta (no
    vertices) the convention is Sc(eta) = eta."""
    if not t.vertices:
        return Representable(t).full()
    return SubPresheaf(Representable(t), tuple(corolla_at(t, v) for v in t.vertices))


def union(xs: Sequence[SubPresheaf]) -> SubPresheaf:
    amb = _same_ambient(xs)
    return SubPresheaf(amb, tuple(g for x in xs for g in x.generators))


def intersection(xs: Sequence[SubPresheaf]) -> SubPresheaf:
    amb = _same_ambient(xs)
    gens = xs[0].generators
    for x in xs[1:]:
        gens = maximal_trees(c for a in gens for b in x.generators for c in common_faces(a, b))
    return SubPresheaf(amb, gens)


def full_subobject(ambient: Ambient, colours) -> SubPresheaf:
    """The unique full subobject whose eta-elements are the given colours."""
    colours = frozenset(colours)
    return SubPresheaf(ambient, tuple(m for g in ambient.generators for m in max_faces_within(g, colours)))


def is_full(x: SubPresheaf, y: SubPresheaf) -> bool:
    """x is full in y: an element of y lies in x iff all its eta-faces do."""
    _same_ambient([x, y])
    if not x <= y:
        raise NotASubobject("x is not contained in y")
    cols = x.eta_elements
    if len(x.generators) == 1:
        (h,) = x.generators
        return all(faces_within_lie_in(g, cols, h) for g in y.generators)
    return all(x.contains_tree(m) for g in y.generators for m in max_faces_within(g, cols))


def faces_within_lie_in(g: Tree, allowed, h: Tree) -> bool:
    """Are all of max_faces_within(g, allowed) faces of h?  Every allowed
    edge of g is a leaf or carries the same vertex in whichever maximal face
    contains it, so this is a per-edge test."""
    if g is h:
        return True
    allowed = allowed & g.edges
    if not allowed <= h.edges:
        return False
    for x in allowed:
        if x not in g.above:
            continue
        ys, escapes = _scan_up(g, x, allowed)
        if not escapes and not has_operation(h, x, ys):
            return False
    return True


def is_representable(x: SubPresheaf) -> tuple[Tree, Element] | None:
    """(U, generator) when x is representable, else None.

    Nondegenerate elements are injective, so x is representable exactly when
    it has a single maximal nondegenerate element; the representing tree is
    that colour tree and the generator is its identity colouring.
    """
    if len(x.generators) != 1:
        return None
    (g,) = x.generators
    return g, Element.of(g, {e: e for e in g.edges})


def yoneda_bijective(x: Presheaf, u: Tree, gen: Element, shapes: Iterable[Tree]) -> bool:
    """Brute-force check that f |-> gen . f is a bijection hom(V, U) -> x(V)
    for each shape V given."""
    for v in shapes:
        images = [gen.pull(f) for f in hom(v, u)]
        if len(set(images)) != len(images):
            return False
        if set(images) != set(x.elements(v)):
            return False
    return True


# -- normality -------------------------------------------------------------------------------


def is_normal(x: Presheaf, shapes: Iterable[Tree]) -> bool:
    """The automorphism group of every listed shape acts freely on x(shape)."""
    return is_normal_mono(None, x, shapes)


def is_normal_mono(x: Presheaf | None, y: Presheaf, shapes: Iterable[Tree]) -> bool:
    """x -> y (x None means the empty presheaf) is normal: Aut(U) acts freely
    on y(U) minus x(U) for every listed shape U."""
    for u in shapes:
        auts = [a for a in automorphisms(u) if not a.is_identity]
        if not auts:
            continue
        for el in y.elements(u):
            if x is not None and x.contains(el):
                continue
            if any(y.act(el, a) == el for a in auts):
                return False
    return True


class QuotientPresheaf(Presheaf):
    """A representable divided by a group of its automorphisms (acting by
    postcomposition).  Used to exhibit non-normal dendroidal sets."""

    def __init__(self, t: Tree, group: Sequence[TreeMorphism]):
        self.tree = t
        self.group = list(group)

    def _canon(self, shape: Tree, cmap: dict) -> Element:
        variants = [Element.of(shape, {e: g.edge_map[c] for e, c in cmap.items()}) for g in self.group]
        return min(variants, key=lambda el: tuple((edge_order(a), edge_order(b)) for a, b in el.colours))

    def elements(self, shape: Tree) -> list[Element]:
        return sorted(
            {self._canon(shape, f.edge_map) for f in hom(shape, self.tree)},
            key=lambda el: tuple((edge_order(a), edge_order(b)) for a, b in el.colours),
        )

    def act(self, el: Element, f: TreeMorphism) -> Element:
        return self._canon(f.source, el.pull(f).map)


# -- sieves ----------------------------------------------------------------------------------


def sieves(t: Tree) -> list[SubPresheaf]:
    """Every subobject of the representable t (down-closed sets of faces)."""
    rep = Representable(t)
    nodes = downward_closure([t])
    index = {n.structure: i for i, n in enumerate(nodes)}
    below = []
    for n in nodes:
        mask = 0
        for f in elementary_faces(n):
            mask |= 1 << index[f.source.structure]
        below.append(mask)
    # transitive closure, nodes are sorted by size so faces come first
    down = [0] * len(nodes)
    for i, n in enumerate(nodes):
        m = below[i]
        acc = m
        j = 0
        while m >> j:
            if (m >> j) & 1:
                acc |= down[j]
            j += 1
        down[i] = acc
    out = []

    def rec(i: int, chosen: list[int], excluded: int) -> None:
        # antichains over nodes[i:], largest-first order irrelevant
        if i < 0:
            out.append(SubPresheaf(rep, tuple(nodes[k] for k in chosen)))
            return
        rec(i - 1, chosen, excluded)
        if not (excluded >> i) & 1:
            rec(i - 1, chosen + [i], excluded | down[i])

    rec(len(nodes) - 1, [], 0)
    return out


# -- products ---------------------------------------------------------------------------------


class ProductPresheaf(Presheaf):
    """Levelwise cartesian product; colours are pairs."""

    def __init__(self, x: Presheaf, y: Presheaf):
        self.x, self.y = x, y

    def elements(self, shape: Tree) -> list[Element]:
        xs = self.x.elements(shape)
        ys = self.y.elements(shape)
        out = []
        for a in xs:
            for b in ys:
                am, bm = a.map, b.map
                out.append(Element.of(shape, {e: (am[e], bm[e]) for e in shape.edges}))
        return out

    def nondegenerate(self, max_vertices: int, max_arity: int) -> list[Tree]:
        """Colour trees of the nondegenerate elements over all shapes within
        the bounds."""
        found = {}
        for shape in enumerate_trees(max_vertices, max_arity):
            for el in self.elements(shape):
                if not el.is_degenerate:
                    t = el.image_tree()
                    found.setdefault(t.structure, t)
        return sorted(found.values(), key=lambda t: (len(t.vertices), len(t.edges), _tree_key(t)))


def product(x: Presheaf, y: Presheaf) -> ProductPresheaf:
    return ProductPresheaf(x, y)


# -- categories of elements --------------------------------------------------------------------


@dataclass
class SmallCategory:
    """Finite category: objects are labels, morphisms (src, tgt, label)."""

    objects: list
    morphisms: list  # (src index, tgt index, label)
    identities: dict  # object index -> morphism index
    composition: dict  # (g, f) -> g.f

    def hom(self, a: int, b: int) -> list[int]:
        return [i for i, (s, t, _) in enumerate(self.morphisms) if s == a and t == b]

    def check_axioms(self) -> bool:
        ms = self.morphisms
        by_src: dict = {}
        for i, (s, _, _) in enumerate(ms):
            by_src.setdefault(s, []).append(i)
        for f, (s, t, _) in enumerate(ms):
            if self.composition.get((self.identities[t], f)) != f:
                return False
            if self.composition.get((f, self.identities[s])) != f:
                return False
        for f, (_, b, _) in enumerate(ms):
            for g in by_src.get(b, []):
                gf = self.composition.get((g, f))
                if gf is None or ms[gf][0] != ms[f][0] or ms[gf][1] != ms[g][1]:
                    return False
                for h in by_src.get(ms[g][1], []):
                    if self.composition.get((h, gf)) != self.composition.get((self.composition[(h, g)], f)):
                        return False
        return True

    def terminal_objects(self) -> list[int]:
        n = len(self.objects)
        counts = [[0] * n for _ in range(n)]
        for s, t, _ in self.morphisms:
            counts[s][t] += 1
        return [b for b in range(n) if all(counts[a][b] == 1 for a in range(n))]

    def components(self) -> int:
        parent = list(range(len(self.objects)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for s, t, _ in self.morphisms:
            parent[find(s)] = find(t)
        return len({find(i) for i in range(len(self.objects))})


def category_of_elements(x: Presheaf, shape_bound: int, arity_bound: int = 3) -> SmallCategory:
    """Omega/x restricted to shapes with at most `shape_bound` vertices (one
    shape per isomorphism class).  Degenerate elements are included."""
    shapes = enumerate_trees(shape_bound, arity_bound)
    objects = [(u, el) for u in shapes for el in x.elements(u)]
    index = {(u.structure, el.colours): i for i, (u, el) in enumerate(objects)}
    homs = {(a.structure, b.structure): hom(a, b) for a in shapes for b in shapes}
    morphisms = []
    lookup = {}
    for i, (u, el) in enumerate(objects):
        for j, (v, el2) in enumerate(objects):
            for f in homs[(u.structure, v.structure)]:
                if x.act(el2, f) == el:
                    lookup[(i, j, f.key)] = len(morphisms)
                    morphisms.append((i, j, f))
    identities = {}
    for i, (u, _) in enumerate(objects):
        identities[i] = lookup[(i, i, tuple(sorted((edge_order(e), edge_order(e)) for e in u.edges)))]
    composition = {}
    by_src: dict = {}
    for k, (s, _, _) in enumerate(morphisms):
        by_src.setdefault(s, []).append(k)
    for fi, (a, b, f) in enumerate(morphisms):
        for gi in by_src.get(b, []):
            _, c, g = morphisms[gi]
            gf = {e: g.edge_map[y] for e, y in f.edge_map.items()}
            key = tuple(sorted((edge_order(p), edge_order(q)) for p, q in gf.items()))
            composition[(gi, fi)] = lookup[(a, c, key)]
    del index
    return SmallCategory(objects, morphisms, identities, composition)
