"""Shuffles (percolation schemes) of two trees and the tensor ambient.

A shuffle of S and T is a tree whose edges are pairs (s, t).  It grows from
(root S, root T): at an edge (s, t) one either applies the S-vertex above s,
giving inputs (s_i, t), or the T-vertex above t, giving inputs (s, t_j).  An
edge whose two coordinates are both leaves stays a leaf.  Labels are distinct
within a shuffle, so a shuffle is simply a colour tree with pair colours.

Also here: lattice-path shuffles of [m] x [n] and the cylinder maps.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product

from .presheaves import Ambient, Element, SubPresheaf, maximal_trees
from .trees import Edge, Tree, TreeError, Vertex, edge_order, linear_tree

__all__ = [
    "ShuffleTree",
    "TensorAmbient",
    "SimplicialShuffle",
    "ChainIntersection",
    "CylinderMaps",
    "EmptyIndexSet",
    "shuffles",
    "shuffles_bruteforce",
    "tensor_ambient",
    "shuffle_subobject",
    "simplex_shuffles",
    "simplex_shuffle_intersection",
    "cylinder_maps",
]


class EmptyIndexSet(TreeError):
    pass


@dataclass(frozen=True)
class ShuffleTree:
    s: Tree
    t: Tree
    tree: Tree
    kinds: tuple  # ((vertex name, "S" | "T"), ...)

    @cached_property
    def kind(self) -> dict:
        return dict(self.kinds)

    def label(self, e: Edge) -> tuple:
        return e  # edges are their own labels

    @property
    def root_label(self) -> tuple:
        return self.tree.root

    @property
    def leaf_labels(self) -> frozenset:
        return self.tree.leaves

    def __eq__(self, other):
        return isinstance(other, ShuffleTree) and self.tree.structure == other.tree.structure

    def __hash__(self):
        return hash(self.tree.structure)


def _s_vertex(v: Vertex, t_edge) -> tuple[str, str]:
    return f"{v.name}|{t_edge}", "S"


def _t_vertex(s_edge, w: Vertex) -> tuple[str, str]:
    return f"{s_edge}|{w.name}", "T"


def _sorted_shuffles(s: Tree, t: Tree, found: dict) -> list[ShuffleTree]:
    return [found[k] for k in sorted(found, key=lambda k: _structure_key(found[k].tree))]


def _structure_key(t: Tree):
    return tuple(sorted((edge_order(v.out), tuple(sorted(map(edge_order, v.inputs)))) for v in t.vertices))


def shuffles(s: Tree, t: Tree) -> list[ShuffleTree]:
    """All shuffles of s and t by recursive percolation, deterministically
    ordered."""
    memo: dict = {}

    def grow(a, b) -> list[tuple]:
        # options for the part of the shuffle on and above the edge (a, b);
        # each option is a tuple of (Vertex, kind)
        key = (a, b)
        if key in memo:
            return memo[key]
        opts = []
        v = s.above.get(a)
        if v is not None:
            name, kind = _s_vertex(v, b)
            kids = sorted(v.inputs, key=edge_order)
            top = Vertex(name, (a, b), [(x, b) for x in kids])
            for parts in product(*(grow(x, b) for x in kids)):
                opts.append(((top, kind),) + tuple(p for part in parts for p in part))
        w = t.above.get(b)
        if w is not None:
            name, kind = _t_vertex(a, w)
            kids = sorted(w.inputs, key=edge_order)
            top = Vertex(name, (a, b), [(a, y) for y in kids])
            for parts in product(*(grow(a, y) for y in kids)):
                opts.append(((top, kind),) + tuple(p for part in parts for p in part))
        if not opts:
            opts.append(())
        memo[key] = opts
        return opts

    found = {}
    for opt in grow(s.root, t.root):
        tree = Tree((s.root, t.root), [v for v, _ in opt])
        sh = ShuffleTree(s, t, tree, tuple(sorted((v.name, k) for v, k in opt)))
        found.setdefault(tree.structure, sh)
    return _sorted_shuffles(s, t, found)


def shuffles_bruteforce(s: Tree, t: Tree, max_choices: int = 16) -> list[ShuffleTree]:
    """Independent enumeration: fix globally, for every pair (s_e, t_e) where
    both coordinates carry a vertex, which factor acts there; build the
    resulting tree top-down and deduplicate."""
    both = [(a, b) for a in sorted(s.above, key=edge_order) for b in sorted(t.above, key=edge_order)]
    if len(both) > max_choices:
        raise TreeError(f"{len(both)} choice points exceed the brute-force limit {max_choices}")
    found = {}
    for choice in product("ST", repeat=len(both)):
        pick = dict(zip(both, choice))
        verts, kinds = [], []
        stack = [(s.root, t.root)]
        while stack:
            a, b = stack.pop()
            v, w = s.above.get(a), t.above.get(b)
            side = pick.get((a, b)) or ("S" if v is not None else "T" if w is not None else None)
            if side == "S":
                ins = [(x, b) for x in v.inputs]
                name, _ = _s_vertex(v, b)
            elif side == "T":
                ins = [(a, y) for y in w.inputs]
                name, _ = _t_vertex(a, w)
            else:
                continue
            verts.append(Vertex(name, (a, b), ins))
            kinds.append((name, side))
            stack.extend(ins)
        tree = Tree((s.root, t.root), verts)
        found.setdefault(tree.structure, ShuffleTree(s, t, tree, tuple(sorted(kinds))))
    return _sorted_shuffles(s, t, found)


# -- tensor ambient ----------------------------------------------------------------


class TensorAmbient(Ambient):
    """S (x) T realised as the union of its shuffles."""

    def __init__(self, s: Tree, t: Tree, shuffle_list: list[ShuffleTree] | None = None):
        self.s, self.t = s, t
        self.shuffle_trees = shuffle_list if shuffle_list is not None else shuffles(s, t)
        self.generators = maximal_trees(sh.tree for sh in self.shuffle_trees)
        self.key = ("tensor", s, t)

    def __repr__(self):
        return f"TensorAmbient({self.s!r}, {self.t!r})"


def tensor_ambient(s: Tree, t: Tree) -> TensorAmbient:
    return TensorAmbient(s, t)


def shuffle_subobject(sh: ShuffleTree, ambient: TensorAmbient | None = None) -> SubPresheaf:
    """F_sigma: the image of the representable on the shuffle tree."""
    return SubPresheaf(ambient or TensorAmbient(sh.s, sh.t), (sh.tree,))


# -- simplicial shuffles --------------------------------------------------------------


@dataclass(frozen=True)
class SimplicialShuffle:
    m: int
    n: int
    path: tuple  # ((0,0), ..., (m,n))

    @property
    def steps(self) -> str:
        return "".join("S" if b[0] > a[0] else "T" for a, b in zip(self.path, self.path[1:]))


def simplex_shuffles(m: int, n: int) -> list[SimplicialShuffle]:
    """Maximal chains of [m] x [n] as lattice paths, in lexicographic order of
    their step words (S = first coordinate first)."""
    if m < 0 or n < 0:
        raise TreeError("m and n must be non-negative")
    out = []
    for pos in combinations(range(m + n), m):
        chosen = set(pos)
        i = j = 0
        path = [(0, 0)]
        for k in range(m + n):
            if k in chosen:
                i += 1
            else:
                j += 1
            path.append((i, j))
        out.append(SimplicialShuffle(m, n, tuple(path)))
    return out


@dataclass(frozen=True)
class ChainIntersection:
    points: tuple
    nonempty: bool
    contains_origin: bool
    linear: bool


def simplex_shuffle_intersection(shs) -> ChainIntersection:
    shs = list(shs)
    if not shs:
        raise EmptyIndexSet("need at least one shuffle")
    pts = set(shs[0].path)
    for sh in shs[1:]:
        pts &= set(sh.path)
    ordered = tuple(sorted(pts))
    linear = all(a[0] <= b[0] and a[1] <= b[1] for a, b in zip(ordered, ordered[1:]))
    return ChainIntersection(ordered, bool(pts), (0, 0) in pts, linear)


# -- cylinder ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CylinderMaps:
    """Delta_1 (x) X with its two ends and the projection back to X, at the
    level of elements of a representable X."""

    x: Tree
    ambient: TensorAmbient
    ends: tuple  # the eta-elements of L_1 used by d0 and d1

    def d(self, i: int, el: Element) -> Element:
        c = self.ends[i]
        return Element.of(el.shape, {e: (c, col) for e, col in el.map.items()})

    def d0(self, el: Element) -> Element:
        return self.d(0, el)

    def d1(self, el: Element) -> Element:
        return self.d(1, el)

    def sigma(self, el: Element) -> Element:
        return Element.of(el.shape, {e: col[1] for e, col in el.map.items()})


def cylinder_maps(x: Tree) -> CylinderMaps:
    l1 = linear_tree(1)
    return CylinderMaps(x, TensorAmbient(l1, x), (l1.leaves and min(l1.leaves), l1.root))

