"""Finite rooted non-planar trees: the objects of the tree category.

A tree is a set of vertices, each with one output edge and an unordered set
of input edges, together with a distinguished root edge.  Edge names are
arbitrary hashable values (strings for user trees, tuples of strings for the
pair-labelled trees that arise in tensor products); isomorphism ignores names.
"""
from __future__ import annotations

from collections.abc import Hashable, Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations_with_replacement

Edge = Hashable

__all__ = [
    "Edge",
    "Vertex",
    "Tree",
    "TreeError",
    "NotClosed",
    "edge_order",
    "eta",
    "corolla",
    "linear_tree",
    "canonical_code",
    "from_code",
    "enumerate_trees",
    "is_closed",
    "closure",
    "graft_root",
    "decalage",
    "relabel",
]


class TreeError(ValueError):
    """Raised when vertex/edge data does not describe a rooted tree."""


class NotClosed(TreeError):
    """Raised when an operation restricted to closed trees gets a leaf."""


def edge_order(e: Edge):
    """Sort key making mixed edge names (str / nested tuples) comparable."""
    if isinstance(e, tuple):
        return (1, tuple(edge_order(x) for x in e))
    return (0, str(e))


@dataclass(frozen=True)
class Vertex:
    name: str
    out: Edge
    inputs: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not isinstance(self.inputs, frozenset):
            object.__setattr__(self, "inputs", frozenset(self.inputs))

    @property
    def arity(self) -> int:
        return len(self.inputs)


@dataclass(frozen=True)
class Tree:
    """A finite rooted tree.  Immutable; equality compares names too.

    Use :func:`canonical_code` to compare up to isomorphism and
    :attr:`structure` to compare while ignoring vertex names only.
    """

    root: Edge
    vertices: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not isinstance(self.vertices, frozenset):
            object.__setattr__(self, "vertices", frozenset(self.vertices))
        self._validate()

    @classmethod
    def trusted(cls, root: Edge, vertices: Iterable) -> "Tree":
        """Build without validation, for internal constructions that are
        trees by design (faces, contractions)."""
        t = object.__new__(cls)
        object.__setattr__(t, "root", root)
        object.__setattr__(t, "vertices", frozenset(vertices))
        return t

    def _validate(self) -> None:
        above: dict = {}
        below: dict = {}
        names = set()
        for v in self.vertices:
            if v.name in names:
                raise TreeError(f"duplicate vertex name {v.name!r}")
            names.add(v.name)
            if v.out in above:
                raise TreeError(f"edge {v.out!r} is the output of two vertices")
            above[v.out] = v
            if v.out in v.inputs:
                raise TreeError(f"vertex {v.name!r} has a loop on {v.out!r}")
            for e in v.inputs:
                if e in below:
                    raise TreeError(f"edge {e!r} is an input of two vertices")
                below[e] = v
        if self.root in below:
            raise TreeError(f"root {self.root!r} is the input of a vertex")
        seen_edges = set()
        seen_vertices = 0
        stack = [self.root]
        while stack:
            e = stack.pop()
            if e in seen_edges:
                raise TreeError("incidence graph has a cycle")
            seen_edges.add(e)
            v = above.get(e)
            if v is not None:
                seen_vertices += 1
                stack.extend(v.inputs)
        if seen_vertices != len(self.vertices):
            raise TreeError("incidence graph is not connected")

    # -- derived incidence data -------------------------------------------

    @cached_property
    def above(self) -> dict:
        """Edge -> the vertex having it as output."""
        return {v.out: v for v in self.vertices}

    @cached_property
    def below(self) -> dict:
        """Edge -> the vertex having it as input."""
        return {e: v for v in self.vertices for e in v.inputs}

    @cached_property
    def edges(self) -> frozenset:
        es = {self.root}
        for v in self.vertices:
            es.add(v.out)
            es.update(v.inputs)
        return frozenset(es)

    @cached_property
    def leaves(self) -> frozenset:
        return frozenset(e for e in self.edges if e not in self.above)

    @cached_property
    def inner_edges(self) -> frozenset:
        return frozenset(e for e in self.edges if e in self.above and e in self.below)

    @cached_property
    def vertex_by_name(self) -> dict:
        return {v.name: v for v in self.vertices}

    @cached_property
    def parent(self) -> dict:
        """Edge -> output edge of the vertex directly below it (root maps to None)."""
        p = {self.root: None}
        for v in self.vertices:
            for e in v.inputs:
                p[e] = v.out
        return p

    @cached_property
    def edges_topdown(self) -> tuple:
        """Edges ordered root-upward (breadth first, siblings sorted)."""
        order = []
        frontier = [self.root]
        while frontier:
            order.extend(frontier)
            nxt = []
            for e in frontier:
                v = self.above.get(e)
                if v is not None:
                    nxt.extend(sorted(v.inputs, key=edge_order))
            frontier = nxt
        return tuple(order)

    @cached_property
    def structure(self) -> tuple:
        """Name-free (on vertices) description: (root, {(out, inputs)})."""
        return (self.root, frozenset((v.out, v.inputs) for v in self.vertices))

    def inputs_sorted(self, v: Vertex) -> tuple:
        return tuple(sorted(v.inputs, key=edge_order))

    def is_above(self, upper: Edge, lower: Edge) -> bool:
        """True when `upper` lies on or above `lower` (towards the leaves)."""
        e = upper
        while e is not None:
            if e == lower:
                return True
            e = self.parent[e]
        return False

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def max_arity(self) -> int:
        return max((v.arity for v in self.vertices), default=0)

    def __repr__(self) -> str:
        from .serialize import to_term

        return f"Tree({to_term(self)!r})"


# -- constructors ------------------------------------------------------------


def eta() -> Tree:
    """The tree with one edge and no vertices."""
    return Tree("0")


def corolla(n: int) -> Tree:
    if n < 0:
        raise TreeError("arity must be non-negative")
    return Tree("0", [Vertex("v", "0", [str(i) for i in range(1, n + 1)])])


def linear_tree(n: int) -> Tree:
    """L_n: n unary vertices in a chain, edges named n (root) down to 0 (leaf)."""
    if n < 0:
        raise TreeError("length must be non-negative")
    return Tree(str(n), [Vertex(f"v{i}", str(i), [str(i - 1)]) for i in range(1, n + 1)])


def relabel(t: Tree, edge_names: Mapping, vertex_names: Mapping | None = None) -> Tree:
    vertex_names = vertex_names or {}
    return Tree(
        edge_names.get(t.root, t.root),
        [
            Vertex(
                vertex_names.get(v.name, v.name),
                edge_names.get(v.out, v.out),
                [edge_names.get(e, e) for e in v.inputs],
            )
            for v in t.vertices
        ],
    )


# -- canonical codes -----------------------------------------------------------

LEAF_CODE = "l"


def _code_at(t: Tree, e: Edge) -> str:
    v = t.above.get(e)
    if v is None:
        return LEAF_CODE
    return "(" + "".join(sorted(_code_at(t, i) for i in v.inputs)) + ")"


def canonical_code(t: Tree) -> str:
    """AHU encoding: a leaf is ``l``, a vertex is its sorted child codes in
    parentheses.  Equal codes iff the trees are isomorphic."""
    return _code_at(t, t.root)


def _split_children(body: str) -> list[str]:
    out, depth, start = [], 0, 0
    i = 0
    while i < len(body):
        c = body[i]
        if c == LEAF_CODE and depth == 0:
            out.append(c)
            start = i + 1
        elif c == "(":
            if depth == 0:
                start = i
            depth += 1
        elif c == ")":
            depth -= 1
            if depth == 0:
                out.append(body[start : i + 1])
        i += 1
    return out


def from_code(code: str) -> Tree:
    """Build a tree from its canonical code, naming edges e0, e1, ... and
    vertices v0, v1, ... in breadth-first order."""
    vertices = []
    counter = {"e": 0, "v": 0}

    def fresh(kind):
        n = counter[kind]
        counter[kind] += 1
        return f"{kind}{n}"

    root = fresh("e")
    frontier = [(root, code)]
    while frontier:
        nxt = []
        for edge, c in frontier:
            if c == LEAF_CODE:
                continue
            kids = _split_children(c[1:-1])
            names = [fresh("e") for _ in kids]
            vertices.append(Vertex(fresh("v"), edge, names))
            nxt.extend(zip(names, kids))
        frontier = nxt
    return Tree(root, vertices)


def _planted_codes(max_vertices: int, max_arity: int) -> dict[int, list[str]]:
    by_size: dict[int, list[str]] = {0: [LEAF_CODE]}
    for n in range(1, max_vertices + 1):
        items = [(c, s) for s in range(n) for c in by_size[s]]
        found = set()
        for a in range(max_arity + 1):
            for combo in combinations_with_replacement(range(len(items)), a):
                if sum(items[i][1] for i in combo) != n - 1:
                    continue
                found.add("(" + "".join(sorted(items[i][0] for i in combo)) + ")")
        by_size[n] = sorted(found)
    return by_size


def enumerate_trees(max_vertices: int, max_arity: int) -> list[Tree]:
    """One tree per isomorphism class with at most the given number of
    vertices and vertex arities; sorted by canonical code."""
    if max_vertices < 0 or max_arity < 0:
        raise TreeError("bounds must be non-negative")
    codes = _planted_codes(max_vertices, max_arity)
    return [from_code(c) for c in sorted(c for cs in codes.values() for c in cs)]


# -- closed trees, closure, décalage -----------------------------------------


def is_closed(t: Tree) -> bool:
    return not t.leaves


def closure(t: Tree) -> tuple[Tree, dict]:
    """Cap every leaf with a nullary vertex named ``<leaf>.cap``.

    Returns the closed tree and the edge map of the inclusion (the identity on
    edges; closure adds vertices only).
    """
    ident = {e: e for e in t.edges}
    if is_closed(t):
        return t, ident
    names = {v.name for v in t.vertices}
    caps = []
    for leaf in sorted(t.leaves, key=edge_order):
        name = f"{leaf}.cap"
        while name in names:
            name += "'"
        names.add(name)
        caps.append(Vertex(name, leaf, ()))
    return Tree(t.root, t.vertices | frozenset(caps)), ident


def _fresh_root_name(t: Tree) -> Edge:
    if isinstance(t.root, tuple):
        new = (t.root, "dec")
    else:
        new = f"{t.root}.dec"
    while new in t.edges:
        new = (new, "dec") if isinstance(new, tuple) else new + "'"
    return new


def graft_root(t: Tree) -> tuple[Tree, dict, Edge]:
    """T glued to C_1 along the root: a new unary vertex below the old root.

    Defined for every tree.  Returns (D(T), edge map of T -> D(T), new root).
    """
    new_root = _fresh_root_name(t)
    vname = f"{new_root}.v" if isinstance(new_root, str) else f"{t.root}.dec.v"
    names = {v.name for v in t.vertices}
    while vname in names:
        vname += "'"
    grafted = Tree(new_root, t.vertices | {Vertex(vname, new_root, [t.root])})
    return grafted, {e: e for e in t.edges}, new_root


def decalage(t: Tree) -> tuple[Tree, dict, Edge]:
    """Décalage D(T) of a closed tree; see :func:`graft_root`."""
    if not is_closed(t):
        raise NotClosed(f"décalage is only functorial on closed trees; leaves {sorted(t.leaves, key=edge_order)}")
    return graft_root(t)


def vertex_count_summary(trees: Iterable[Tree]) -> dict[int, int]:
    out: dict[int, int] = {}
    for t in trees:
        out[t.n_vertices] = out.get(t.n_vertices, 0) + 1
    return dict(sorted(out.items()))
