"""Finite homotopy checks: face posets, order complexes, integer homology,
collapses, nerves of small categories.

The homotopy model of a colour presheaf is the poset of its nondegenerate
elements (colour trees) under the face relation; asphericity evidence is
gathered on the order complex of that poset.
"""
from __future__ import annotations

import random
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .omega import elementary_faces, inclusion_is_morphism
from .presheaves import (
    GeneratedPresheaf,
    ProductPresheaf,
    SmallCategory,
    SubPresheaf,
    intersection,
    segal_core,
)
from .serialize import to_term
from .trees import Tree, TreeError

__all__ = [
    "FacePoset",
    "SimplicialComplex",
    "HomologyReport",
    "AsphericityVerdict",
    "ComplexTooLarge",
    "face_poset",
    "order_complex",
    "homology",
    "smith_invariants",
    "collapse_to_point",
    "cone_collapse",
    "replay_collapse",
    "asphericity",
    "nerve",
    "nerve_homology",
    "connected_components",
    "segal_core_asphericity",
    "gluing_hypothesis",
    "mayer_vietoris_consistent",
]

MODEL = "nondegenerate-face-poset"


class ComplexTooLarge(TreeError):
    pass


# -- face posets -----------------------------------------------------------------


@dataclass
class FacePoset:
    """Nodes with `down[i]` = bitmask of the nodes <= i (reflexive)."""

    nodes: list
    down: list
    labels: list = field(default_factory=list)

    def __len__(self):
        return len(self.nodes)

    def leq(self, i: int, j: int) -> bool:
        return bool((self.down[j] >> i) & 1)

    def maximum(self) -> int | None:
        full = (1 << len(self.nodes)) - 1
        for i, d in enumerate(self.down):
            if d == full:
                return i
        return None

    def up(self, i: int) -> list[int]:
        return [j for j in range(len(self.nodes)) if j != i and self.leq(i, j)]

    def to_dot(self, name: str = "P") -> str:
        lines = [f'digraph "{name}" {{', "  rankdir=BT;"]
        for i, lab in enumerate(self.labels or map(str, self.nodes)):
            lines.append(f'  n{i} [label="{lab}"];')
        for j in range(len(self.nodes)):
            for i in self.covers_below(j):
                lines.append(f"  n{i} -> n{j};")
        lines.append("}")
        return "\n".join(lines)

    def covers_below(self, j: int) -> list[int]:
        below = [i for i in range(len(self.nodes)) if i != j and self.leq(i, j)]
        return [i for i in below if not any(k != i and self.leq(i, k) for k in below)]


def _poset_from_trees(trees: Sequence[Tree]) -> FacePoset:
    trees = sorted(trees, key=lambda t: (len(t.edges), len(t.vertices), to_term(t)))
    index = {t.structure: i for i, t in enumerate(trees)}
    closed = True
    below = []
    for t in trees:
        m = 1 << index[t.structure]
        for f in elementary_faces(t):
            k = index.get(f.source.structure)
            if k is None:
                closed = False
                break
            m |= 1 << k
        below.append(m)
    if closed:
        # trees are sorted by size, so faces are finished first
        down = []
        for i, m in enumerate(below):
            acc = m
            rest = m & ~(1 << i)
            while rest:
                low = rest & -rest
                acc |= down[low.bit_length() - 1]
                rest ^= low
            down.append(acc)
    else:
        down = []
        for j, t in enumerate(trees):
            m = 0
            for i, g in enumerate(trees):
                if g.edges <= t.edges and inclusion_is_morphism(g, t):
                    m |= 1 << i
            down.append(m)
    return FacePoset(trees, down, [to_term(t) for t in trees])


def face_poset(x, max_nodes: int = 5000, max_vertices: int = 4, max_arity: int = 3) -> FacePoset:
    """Face poset of a presheaf with finitely many nondegenerate elements.

    Accepts a generated presheaf (representable, tensor ambient, subobject),
    a product presheaf (scanned over shapes within the bounds) or an explicit
    list of colour trees closed under faces.
    """
    if isinstance(x, GeneratedPresheaf):
        trees = x.nondegenerate(max_nodes=max_nodes)
    elif isinstance(x, ProductPresheaf):
        trees = x.nondegenerate(max_vertices, max_arity)
    else:
        trees = list(x)
    if len(trees) > max_nodes:
        raise ComplexTooLarge(f"{len(trees)} nodes exceed {max_nodes}")
    return _poset_from_trees(trees)


# -- simplicial complexes ----------------------------------------------------------------


@dataclass
class SimplicialComplex:
    """Simplices as sorted tuples of vertex ids, grouped by dimension."""

    simplices: dict  # dim -> list of tuples

    @property
    def dimension(self) -> int:
        return max(self.simplices, default=-1)

    def counts(self) -> list[int]:
        return [len(self.simplices.get(d, [])) for d in range(self.dimension + 1)]

    def all_simplices(self) -> list[tuple]:
        return [s for d in sorted(self.simplices) for s in self.simplices[d]]

    @property
    def vertices(self) -> list:
        return sorted(v for (v,) in self.simplices.get(0, []))

    @classmethod
    def from_facets(cls, facets: Iterable[Iterable]) -> "SimplicialComplex":
        from itertools import combinations

        seen = set()
        for f in facets:
            f = tuple(sorted(f))
            for k in range(1, len(f) + 1):
                seen.update(combinations(f, k))
        out: dict = {}
        for s in sorted(seen):
            out.setdefault(len(s) - 1, []).append(s)
        return cls(out)

    def is_closed(self) -> bool:
        present = set(self.all_simplices())
        return all(s[:i] + s[i + 1 :] in present for s in present if len(s) > 1 for i in range(len(s)))


def order_complex(p: FacePoset, max_simplices: int = 2_000_000) -> SimplicialComplex:
    """Chains of the poset.  Vertex ids are node indices."""
    n = len(p.nodes)
    ups = [[j for j in range(n) if j != i and p.leq(i, j)] for i in range(n)]
    out: dict = {}
    total = 0
    stack = [((i,), ups[i]) for i in range(n)]
    while stack:
        chain, cand = stack.pop()
        out.setdefault(len(chain) - 1, []).append(chain)
        total += 1
        if total > max_simplices:
            raise ComplexTooLarge(f"order complex exceeds {max_simplices} simplices")
        for j in cand:
            stack.append((chain + (j,), ups[j]))
    return SimplicialComplex({d: sorted(v, key=lambda s: tuple(s)) for d, v in out.items()})


# -- exact homology -------------------------------------------------------------------------


def smith_invariants(rows: dict) -> list[int]:
    """Nonzero invariant factors of a sparse integer matrix {r: {c: v}}.

    Unit pivots are eliminated sparsely first; whatever is left goes through a
    dense Smith normal form with Python integers.
    """
    rows = {r: dict(cs) for r, cs in rows.items() if cs}
    cols: dict = {}
    for r, cs in rows.items():
        for c in cs:
            cols.setdefault(c, set()).add(r)
    inv: list[int] = []
    progress = True
    while progress:
        progress = False
        for r in sorted(rows):
            cs = rows.get(r)
            if not cs:
                continue
            units = [c for c, v in cs.items() if v in (1, -1)]
            if not units:
                continue
            c = min(units, key=lambda c: len(cols[c]))
            progress = True
            prow = rows.pop(r)
            v = prow[c]
            for cc in prow:
                cols[cc].discard(r)
            for k in list(cols[c]):
                krow = rows[k]
                factor = krow[c] * v  # v is a unit, so v == 1/v
                for cc, pv in prow.items():
                    nv = krow.get(cc, 0) - factor * pv
                    if nv:
                        if cc not in krow:
                            cols[cc].add(k)
                        krow[cc] = nv
                    elif cc in krow:
                        del krow[cc]
                        cols[cc].discard(k)
                if not krow:
                    del rows[k]
            del cols[c]
            inv.append(1)
    if rows:
        inv.extend(_dense_snf(rows))
    return inv


def _dense_snf(rows: dict) -> list[int]:
    rkeys = sorted(rows)
    ckeys = sorted({c for cs in rows.values() for c in cs})
    ci = {c: i for i, c in enumerate(ckeys)}
    a = [[0] * len(ckeys) for _ in rkeys]
    for i, r in enumerate(rkeys):
        for c, v in rows[r].items():
            a[i][ci[c]] = v
    m, n = len(a), len(ckeys)
    diag = []
    t = 0
    while t < min(m, n):
        nz = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        a[t], a[pi] = a[pi], a[t]
        for row in a:
            row[t], row[pj] = row[pj], row[t]
        while True:
            changed = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    for j in range(t, n):
                        a[i][j] -= q * a[t][j]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        changed = True
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    for i in range(t, m):
                        a[i][j] -= q * a[i][t]
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        changed = True
            if changed:
                continue
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % a[t][t]),
                None,
            )
            if bad is None:
                break
            # fold the offending row into row t to restore divisibility
            i, _ = bad
            for j in range(t, n):
                a[t][j] += a[i][j]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


@dataclass
class HomologyReport:
    """Reduced integer homology: ranks and torsion per degree."""

    betti: dict  # degree -> reduced rank
    torsion: dict  # degree -> list of invariant factors > 1
    counts: list  # simplices per dimension
    euler_ok: bool

    @property
    def trivial(self) -> bool:
        return all(b == 0 for b in self.betti.values()) and all(not t for t in self.torsion.values())

    def as_dict(self) -> dict:
        return {
            "reduced_betti": {str(k): v for k, v in sorted(self.betti.items())},
            "torsion": {str(k): v for k, v in sorted(self.torsion.items()) if v},
            "simplex_counts": self.counts,
            "euler_ok": self.euler_ok,
        }


def _boundary_rows(simplices_hi: list, index_lo: dict) -> dict:
    rows = {}
    for r, s in enumerate(simplices_hi):
        row = {}
        for i in range(len(s)):
            face = s[:i] + s[i + 1 :]
            c = index_lo[face]
            row[c] = row.get(c, 0) + (-1) ** i
        rows[r] = {c: v for c, v in row.items() if v}
    return rows


def _report_from_chain_complex(counts: list[int], invariants: dict) -> HomologyReport:
    """counts[k] = rank of C_k for k = 0..d; invariants[k] = invariant factors
    of d_k : C_k -> C_{k-1}, with d_0 the augmentation."""
    betti, torsion = {}, {}
    top = len(counts) - 1
    if not counts or sum(counts) == 0:
        return HomologyReport({-1: 1}, {}, counts, True)
    for k in range(top + 1):
        rk = len(invariants.get(k, []))
        rk_next = len(invariants.get(k + 1, []))
        betti[k] = counts[k] - rk - rk_next
        torsion[k] = [x for x in invariants.get(k + 1, []) if x > 1]
    euler_chain = -1 + sum((-1) ** k * n for k, n in enumerate(counts))
    euler_homology = sum((-1) ** k * b for k, b in betti.items())
    return HomologyReport(betti, torsion, counts, euler_chain == euler_homology)


def homology(c: SimplicialComplex, max_degree: int | None = None) -> HomologyReport:
    """Reduced homology via the augmented simplicial chain complex."""
    top = c.dimension
    if max_degree is None:
        max_degree = top
    counts = c.counts()
    index = {d: {s: i for i, s in enumerate(c.simplices.get(d, []))} for d in range(top + 1)}
    inv = {}
    if counts and counts[0]:
        inv[0] = [1]  # augmentation is onto Z
    for k in range(1, min(top, max_degree + 1) + 1):
        inv[k] = smith_invariants(_boundary_rows(c.simplices.get(k, []), index[k - 1]))
    rep = _report_from_chain_complex(counts, inv)
    rep.betti = {k: v for k, v in rep.betti.items() if k <= max_degree}
    rep.torsion = {k: v for k, v in rep.torsion.items() if k <= max_degree}
    return rep


# -- collapses -------------------------------------------------------------------------------


def replay_collapse(c: SimplicialComplex, seq: Sequence[tuple]) -> bool:
    """Check that seq is a valid sequence of elementary collapses ending in a
    single vertex."""
    present = set(c.all_simplices())
    cof: dict = {s: set() for s in present}
    for s in present:
        for i in range(len(s)):
            f = s[:i] + s[i + 1 :]
            if f:
                cof[f].add(s)
    for free, big in seq:
        if free not in present or big not in present or cof[free] != {big} or len(big) != len(free) + 1:
            return False
        if cof[big]:
            return False
        for s in (big, free):
            present.discard(s)
            for i in range(len(s)):
                f = s[:i] + s[i + 1 :]
                if f:
                    cof[f].discard(s)
    return len(present) == 1


def collapse_to_point(c: SimplicialComplex, restarts: int = 32, seed: int = 0) -> list[tuple] | None:
    """Greedy elementary collapses; each restart shuffles the order in which
    free faces are taken.  None means inconclusive."""
    simplices = c.all_simplices()
    if not simplices:
        return None
    for r in range(max(1, restarts)):
        rng = random.Random(seed * 1_000_003 + r)
        present = set(simplices)
        cof: dict = {s: set() for s in present}
        for s in present:
            for i in range(len(s)):
                f = s[:i] + s[i + 1 :]
                if f:
                    cof[f].add(s)
        seq = []
        free = sorted(s for s in present if len(cof[s]) == 1)
        rng.shuffle(free)
        while free:
            s = free.pop()
            if s not in present or len(cof[s]) != 1:
                continue
            (big,) = cof[s]
            seq.append((s, big))
            for x in (big, s):
                present.discard(x)
                for i in range(len(x)):
                    f = x[:i] + x[i + 1 :]
                    if f and f in present:
                        cof[f].discard(x)
                        if len(cof[f]) == 1:
                            free.insert(rng.randrange(len(free) + 1), f)
        if len(present) == 1:
            return seq
    return None


def cone_collapse(c: SimplicialComplex, apex: int) -> list[tuple]:
    """Collapse of a cone onto its apex: pair each simplex not containing the
    apex with its join with the apex, top dimension first."""
    seq = []
    for d in sorted(c.simplices, reverse=True):
        for s in c.simplices[d]:
            if apex not in s:
                seq.append((s, tuple(sorted(s + (apex,)))))
    return seq


# -- verdicts ---------------------------------------------------------------------------------


@dataclass
class AsphericityVerdict:
    kind: str  # CollapsedToPoint | HomologyTrivial | NotAspherical
    evidence: dict
    collapse: list | None = None
    homology: HomologyReport | None = None
    model: str = MODEL

    @property
    def collapsed(self) -> bool:
        return self.kind == "CollapsedToPoint"

    def as_dict(self) -> dict:
        out = {"verdict": self.kind, "evidence": self.evidence, "model": self.model}
        if self.homology is not None:
            out["homology"] = self.homology.as_dict()
        if self.collapse is not None:
            out["collapse_length"] = len(self.collapse)
        return out


def _verdict_from_complex(c: SimplicialComplex, apex, restarts, seed, nodes) -> AsphericityVerdict:
    rep = homology(c)
    if apex is not None:
        seq = cone_collapse(c, apex)
        ok = replay_collapse(c, seq)
        if ok:
            return AsphericityVerdict(
                "CollapsedToPoint",
                {"certificate": "cone", "apex": nodes[apex], "nodes": len(nodes)},
                seq,
                rep,
            )
    seq = collapse_to_point(c, restarts, seed)
    if seq is not None:
        return AsphericityVerdict("CollapsedToPoint", {"certificate": "greedy-collapse", "nodes": len(nodes)}, seq, rep)
    if rep.trivial:
        return AsphericityVerdict(
            "HomologyTrivial", {"note": "necessary condition only", "nodes": len(nodes)}, None, rep
        )
    return AsphericityVerdict(
        "NotAspherical",
        {"nonzero": {k: v for k, v in rep.betti.items() if v}, "torsion": {k: v for k, v in rep.torsion.items() if v}},
        None,
        rep,
    )


def asphericity(
    x,
    restarts: int = 32,
    seed: int = 0,
    max_nodes: int = 2000,
    max_simplices: int = 500_000,
    materialise: bool | None = None,
    max_vertices: int = 4,
    max_arity: int = 3,
) -> AsphericityVerdict:
    """Asphericity evidence for a finite colour presheaf.

    A subobject with a single maximal element has a cone as its model; when
    `materialise` is False (or None and the object is large) the verdict is
    certified by the apex alone, without building the complex.
    """
    if isinstance(x, GeneratedPresheaf):
        if not x.generators:
            return AsphericityVerdict("NotAspherical", {"empty": True})
        if len(x.generators) == 1 and materialise is not True:
            (g,) = x.generators
            if materialise is False or len(g.edges) > 8:
                return AsphericityVerdict(
                    "CollapsedToPoint", {"certificate": "cone", "apex": to_term(g), "materialised": False}
                )
    p = face_poset(x, max_nodes=max_nodes, max_vertices=max_vertices, max_arity=max_arity)
    if not p.nodes:
        return AsphericityVerdict("NotAspherical", {"empty": True})
    comps = _poset_components(p)
    if comps > 1:
        rep = homology(order_complex(p, max_simplices), max_degree=0)
        return AsphericityVerdict("NotAspherical", {"components": comps}, None, rep)
    c = order_complex(p, max_simplices)
    return _verdict_from_complex(c, p.maximum(), restarts, seed, p.labels)


def _poset_components(p: FacePoset) -> int:
    n = len(p.nodes)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for j, d in enumerate(p.down):
        rest = d
        while rest:
            low = rest & -rest
            parent[find(low.bit_length() - 1)] = find(j)
            rest ^= low
    return len({find(i) for i in range(n)})


# -- nerves -------------------------------------------------------------------------------------


@dataclass
class NerveData:
    category: SmallCategory
    simplices: dict  # dim -> list of tuples of morphism indices (objects for dim 0)


def nerve(cat: SmallCategory, dim_bound: int) -> NerveData:
    """Nondegenerate simplices of the nerve up to dim_bound: strings of
    composable non-identity morphisms."""
    ident = set(cat.identities.values())
    by_src: dict = {}
    for k, (s, _, _) in enumerate(cat.morphisms):
        if k not in ident:
            by_src.setdefault(s, []).append(k)
    out = {0: [(i,) for i in range(len(cat.objects))]}
    layer = [(k,) for ks in by_src.values() for k in ks]
    d = 1
    while layer and d <= dim_bound:
        out[d] = sorted(layer)
        nxt = []
        for chain in layer:
            tgt = cat.morphisms[chain[-1]][1]
            nxt.extend(chain + (k,) for k in by_src.get(tgt, []))
        layer = nxt
        d += 1
    return NerveData(cat, out)


def nerve_homology(cat: SmallCategory, max_degree: int) -> HomologyReport:
    """Reduced homology of the nerve in degrees < max_degree (the nerve is
    built one dimension higher so these degrees are exact)."""
    nd = nerve(cat, max_degree + 1)
    ident = set(cat.identities.values())
    index = {d: {s: i for i, s in enumerate(ss)} for d, ss in nd.simplices.items()}

    def faces(d, chain):
        # chain = (f1, ..., fd) read left to right along composition
        if d == 1:
            (f,) = chain
            s, t, _ = cat.morphisms[f]
            return [(0, (t,), 1), (0, (s,), -1)]
        out = []
        out.append((d - 1, chain[1:], 1))  # drop the first object
        for i in range(1, d):
            g = cat.composition[(chain[i], chain[i - 1])]
            if g in ident:
                continue
            out.append((d - 1, chain[: i - 1] + (g,) + chain[i + 1 :], (-1) ** i))
        out.append((d - 1, chain[:-1], (-1) ** d))
        return out

    counts = [len(nd.simplices.get(d, [])) for d in range(max_degree + 2)]
    inv = {0: [1] if counts[0] else []}
    for d in range(1, max_degree + 2):
        rows = {}
        for r, chain in enumerate(nd.simplices.get(d, [])):
            row: dict = {}
            for dd, face, sign in faces(d, chain):
                c = index[dd][face]
                row[c] = row.get(c, 0) + sign
            rows[r] = {c: v for c, v in row.items() if v}
        inv[d] = smith_invariants(rows)
    rep = _report_from_chain_complex(counts, inv)
    rep.betti = {k: v for k, v in rep.betti.items() if k < max_degree + 1}
    rep.torsion = {k: v for k, v in rep.torsion.items() if k < max_degree + 1}
    return rep


def connected_components(x, max_vertices: int = 2, max_arity: int = 3) -> int:
    """Components of a small category, or of the category of elements of a
    colour presheaf (through its face poset)."""
    if isinstance(x, SmallCategory):
        return x.components()
    return _poset_components(face_poset(x, max_vertices=max_vertices, max_arity=max_arity))


# -- Segal cores and the union lemma -------------------------------------------------------------


def gluing_hypothesis(t: Tree) -> dict:
    """Check that the corollas of t can be glued one at a time along a single
    eta: in breadth-first vertex order each corolla meets the union of the
    previous ones in exactly one edge, adjacent corollas meet in their shared
    edge, and non-adjacent ones do not meet."""
    sc = segal_core(t)
    verts = [t.above[e] for e in t.edges_topdown if e in t.above]
    cor = {v.name: SubPresheaf(sc.ambient, (Tree(v.out, [v]),)) for v in verts}
    problems = []
    for k in range(1, len(verts)):
        prev = SubPresheaf(sc.ambient, tuple(g for v in verts[:k] for g in cor[v.name].generators))
        meet = intersection([prev, cor[verts[k].name]])
        if len(meet.generators) != 1 or meet.generators[0].vertices:
            problems.append(("step", verts[k].name, [to_term(g) for g in meet.generators]))
    for i, v in enumerate(verts):
        for w in verts[i + 1 :]:
            meet = intersection([cor[v.name], cor[w.name]])
            shared = (v.inputs | {v.out}) & (w.inputs | {w.out})
            want = [Tree(e) for e in shared]
            got = meet.generators
            if {g.structure for g in got} != {g.structure for g in want} or len(got) > 1:
                problems.append(("pair", v.name, w.name, [to_term(g) for g in got]))
    return {"ok": not problems, "problems": problems, "order": [v.name for v in verts]}


@dataclass
class SegalCoreVerdict:
    verdict: AsphericityVerdict
    gluing: dict

    @property
    def ok(self) -> bool:
        return self.verdict.collapsed and self.gluing["ok"]


def segal_core_asphericity(t: Tree, **kw) -> SegalCoreVerdict:
    return SegalCoreVerdict(asphericity(segal_core(t), **kw), gluing_hypothesis(t))


def mayer_vietoris_consistent(pieces: Sequence[SubPresheaf], max_subsets: int = 4096, **kw) -> dict:
    """If every nonempty intersection of the pieces is collapsible, the union
    must not be found non-aspherical."""
    from itertools import combinations

    n = len(pieces)
    if 2**n - 1 > max_subsets:
        raise ComplexTooLarge(f"{2**n - 1} intersections exceed {max_subsets}")
    all_collapse = True
    for k in range(1, n + 1):
        for js in combinations(range(n), k):
            meet = intersection([pieces[j] for j in js])
            if meet.generators and not asphericity(meet, **kw).collapsed:
                all_collapse = False
    union_verdict = asphericity(
        SubPresheaf(pieces[0].ambient, tuple(g for p in pieces for g in p.generators)), **kw
    )
    return {
        "hypothesis": all_collapse,
        "union": union_verdict.kind,
        "consistent": (not all_collapse) or union_verdict.kind != "NotAspherical",
    }

