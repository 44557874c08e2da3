"""Exhaustive verification suites.

Each suite sweeps a bounded corpus, checks one proposition instance by
instance and returns a :class:`VerificationReport`.  Reports are
deterministic given their bounds; wall-clock time is kept out of the JSON
unless asked for.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from itertools import combinations, product
from math import comb

import numpy as np

from .homotopy import (
    SimplicialComplex,
    asphericity,
    collapse_to_point,
    connected_components,
    face_poset,
    homology,
    mayer_vietoris_consistent,
    order_complex,
    replay_collapse,
    segal_core_asphericity,
)
from .omega import (
    cl_morphism,
    closure_unit,
    compose,
    decalage_morphism,
    decalage_root_map,
    decalage_unit,
    factorize,
    hom,
    identity,
    inner_face,
    morphism,
    root_preserving_extensions,
)
from .presheaves import (
    Representable,
    SubPresheaf,
    boundary,
    category_of_elements,
    common_faces,
    full_subobject,
    inner_horn,
    is_full,
    is_representable,
    product as presheaf_product,
    segal_core,
)
from .serialize import parse_term, to_term
from .shuffles import (
    TensorAmbient,
    shuffle_subobject,
    shuffles,
    simplex_shuffle_intersection,
    simplex_shuffles,
)
from .trees import TreeError, closure, corolla, edge_order, enumerate_trees, eta, is_closed, linear_tree

__all__ = ["VerificationReport", "UnknownSuite", "BoundsTooLarge", "SUITES", "run_verify"]


class UnknownSuite(KeyError):
    pass


class BoundsTooLarge(ValueError):
    pass


@dataclass
class VerificationReport:
    suite: str
    statement: str
    corpus: dict
    instances: list = field(default_factory=list)  # {"key", "pass", ...}
    summary: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(i["pass"] for i in self.instances) and not self.failures

    def as_dict(self, timing: bool = False) -> dict:
        d = {
            "suite": self.suite,
            "statement": self.statement,
            "corpus": self.corpus,
            "passed": self.passed,
            "instances_total": len(self.instances),
            "instances_failed": sum(1 for i in self.instances if not i["pass"]),
            "summary": self.summary,
            "failures": self.failures[:50],
            "instances": sorted(self.instances, key=lambda i: i["key"]),
        }
        if timing:
            d["seconds"] = round(self.seconds, 3)
        return d

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.as_dict(timing), sort_keys=True, indent=1, default=str)


def _fail(rep: VerificationReport, key: str, **payload) -> None:
    rep.failures.append({"key": key, **payload})


# -- simplicial shuffles ---------------------------------------------------------------


def _lattice_paths(m: int, n: int) -> int:
    # independent count by dynamic programming over the grid
    grid = [[1] * (n + 1) for _ in range(m + 1)]
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            grid[i][j] = grid[i - 1][j] + grid[i][j - 1]
    return grid[m][n]


def suite_simplex_counts(max_sum: int = 8) -> VerificationReport:
    rep = VerificationReport(
        "simplex-shuffle-counts", "(m,n)-shuffles are counted by binomial(m+n, m)", {"max_sum": max_sum}
    )
    for m in range(max_sum + 1):
        for n in range(max_sum + 1 - m):
            shs = simplex_shuffles(m, n)
            paths = {sh.path for sh in shs}
            well_formed = all(
                len(sh.path) == m + n + 1
                and sh.path[0] == (0, 0)
                and sh.path[-1] == (m, n)
                and all(b[0] - a[0] + b[1] - a[1] == 1 and b[0] >= a[0] and b[1] >= a[1] for a, b in zip(sh.path, sh.path[1:]))
                for sh in shs
            )
            ok = len(shs) == comb(m + n, m) == _lattice_paths(m, n) and len(paths) == len(shs) and well_formed
            rep.instances.append({"key": f"{m},{n}", "pass": ok, "count": len(shs)})
    return rep


def _is_chain(points) -> bool:
    return all(
        (a[0] <= b[0] and a[1] <= b[1]) or (b[0] <= a[0] and b[1] <= a[1]) for a, b in combinations(points, 2)
    )


def suite_simplex_intersections(pairs=((1, 1), (1, 2), (2, 1), (2, 2))) -> VerificationReport:
    rep = VerificationReport(
        "simplex-shuffle-intersections",
        "every nonempty intersection of shuffles of [m]x[n] is a nonempty linear order containing (0,0)",
        {"pairs": [list(p) for p in pairs]},
    )
    for m, n in pairs:
        shs = simplex_shuffles(m, n)
        bad = 0
        for k in range(1, len(shs) + 1):
            for js in combinations(range(len(shs)), k):
                inter = simplex_shuffle_intersection([shs[j] for j in js])
                direct = set.intersection(*(set(shs[j].path) for j in js))
                ok = (
                    inter.nonempty
                    and inter.contains_origin
                    and inter.linear
                    and set(inter.points) == direct
                    and _is_chain(direct)
                )
                if not ok:
                    bad += 1
                    _fail(rep, f"{m},{n}:{js}", points=list(inter.points))
        # the tree shuffles of linear trees are the lattice paths
        tree_sets = {
            frozenset((int(a), int(b)) for a, b in sh.tree.edges) for sh in shuffles(linear_tree(m), linear_tree(n))
        }
        same = tree_sets == {frozenset(sh.path) for sh in shs}
        rep.instances.append(
            {"key": f"{m},{n}", "pass": bad == 0 and same, "subsets": 2 ** len(shs) - 1, "tree_paths_agree": same}
        )
    return rep


# -- tensor products -----------------------------------------------------------------------


def _pairs(max_vertices: int, max_arity: int):
    c = enumerate_trees(max_vertices, max_arity)
    return [(a, b) for i, a in enumerate(c) for b in c[i:]]


def _pair_key(a, b) -> str:
    return f"{to_term(a)} | {to_term(b)}"


def suite_shuffle_props(max_vertices: int = 3, max_arity: int = 3) -> VerificationReport:
    rep = VerificationReport(
        "shuffle-props",
        "each F_sigma is representable and full, and all F_sigma share root and leaves",
        {"max_vertices": max_vertices, "max_arity": max_arity, "pairs": "unordered"},
    )
    total = 0
    for a, b in _pairs(max_vertices, max_arity):
        amb = TensorAmbient(a, b)
        full = amb.full()
        roots = {sh.tree.root for sh in amb.shuffle_trees}
        leaves = {sh.tree.leaves for sh in amb.shuffle_trees}
        want_leaves = frozenset(product(a.leaves, b.leaves))
        rep_ok = full_ok = True
        for sh in amb.shuffle_trees:
            f = shuffle_subobject(sh, amb)
            r = is_representable(f)
            if r is None or r[0].structure != sh.tree.structure:
                rep_ok = False
            if not is_full(f, full):
                full_ok = False
        shared = roots == {(a.root, b.root)} and leaves == {want_leaves}
        ok = rep_ok and full_ok and shared
        total += len(amb.shuffle_trees)
        rep.instances.append(
            {
                "key": _pair_key(a, b),
                "pass": ok,
                "shuffles": len(amb.shuffle_trees),
                "representable": rep_ok,
                "full": full_ok,
                "shared_root_leaves": shared,
            }
        )
        if not ok:
            _fail(rep, _pair_key(a, b), representable=rep_ok, full=full_ok, shared=shared)
    rep.summary = {"pairs": len(rep.instances), "shuffles": total}
    return rep


def _contract_inner(t, keep):
    """Contract the edges of t outside `keep` one elementary inner face at a
    time; None if one of them is not inner when its turn comes."""
    cur = t
    for e in sorted(t.edges - keep, key=edge_order):
        if e not in cur.inner_edges:
            return None
        cur = inner_face(cur, e).source
    return cur


def _prod_trees_pair(a, b, sample_every: int, reconstruct: bool):
    shs = [sh.tree for sh in shuffles(a, b)]
    amb = TensorAmbient(a, b, None)
    labels = sorted(set().union(*(t.edges for t in shs)), key=edge_order)
    idx = {e: i for i, e in enumerate(labels)}

    def mask(es):
        m = 0
        for e in es:
            m |= 1 << idx[e]
        return m

    masks = [mask(t.edges) for t in shs]
    info = []
    for t in shs:
        anc = {}
        for e in t.edges_topdown:
            p = t.parent[e]
            anc[idx[e]] = 0 if p is None else anc[idx[p]] | (1 << idx[p])
        info.append((anc, mask(t.leaves), 1 << idx[t.root]))
    # meet-closure of the eta-sets, one intersection per new eta-set
    found = {}
    for m, t in zip(masks, shs):
        found.setdefault(m, t)
    queue = sorted(found)
    not_rep = []
    while queue:
        A = queue.pop()
        for m, t in zip(masks, shs):
            B = A & m
            if B == A or B in found or B in not_rep:
                continue
            meet = common_faces(found[A], t)
            if len(meet) != 1 or mask(meet[0].edges) != B:
                not_rep.append(B)
                continue
            found[B] = meet[0]
            queue.append(B)
    reach_checks = reach_fail = sampled = sample_fail = recon_fail = aspherical_fail = 0
    counter = 0
    for A in sorted(found):
        g = found[A]
        g_anc = {}
        for e in g.edges_topdown:
            p = g.parent[e]
            g_anc[idx[e]] = 0 if p is None else g_anc[idx[p]] | (1 << idx[p])
        g_leaves = mask(g.leaves)
        items = sorted(g_anc.items())
        xs = [x for x, _ in items]
        want = [v for _, v in items]
        for j, m in enumerate(masks):
            if A & m != A:
                continue
            reach_checks += 1
            anc, leaves_j, root_j = info[j]
            ok = (
                root_j & A
                and leaves_j & A == leaves_j
                and g_leaves == leaves_j
                and [anc[x] & A for x in xs] == want
            )
            if not ok:
                reach_fail += 1
            counter += 1
            if sample_every and counter % sample_every == 0:
                sampled += 1
                got = _contract_inner(shs[j], g.edges)
                if got is None or got.structure != g.structure:
                    sample_fail += 1
        if not asphericity(SubPresheaf(amb, (g,)), materialise=False).collapsed:
            aspherical_fail += 1
        if reconstruct:
            rec = full_subobject(amb, g.edges)
            if len(rec.generators) != 1 or rec.generators[0].structure != g.structure:
                recon_fail += 1
    return {
        "shuffles": len(shs),
        "intersections": len(found),
        "not_representable": len(not_rep),
        "reach_checks": reach_checks,
        "reach_failures": reach_fail,
        "sampled_chains": sampled,
        "sampled_chain_failures": sample_fail,
        "asphericity_failures": aspherical_fail,
        "reconstructed": reconstruct,
        "reconstruction_failures": recon_fail,
    }


def suite_prod_trees(
    max_vertices: int = 3, max_arity: int = 3, sample_every: int = 997, reconstruct_max_vertices: int = 1
) -> VerificationReport:
    rep = VerificationReport(
        "prod-trees",
        "every nonempty intersection F_J is representable, an iterated inner face of each F_j, and aspherical",
        {
            "max_vertices": max_vertices,
            "max_arity": max_arity,
            "pairs": "unordered",
            "explicit_chain_sample_every": sample_every,
            "reconstruct_max_vertices": reconstruct_max_vertices,
        },
    )
    tot = {"intersections": 0, "reach_checks": 0, "sampled_chains": 0}
    for a, b in _pairs(max_vertices, max_arity):
        recon = max(len(a.vertices), len(b.vertices)) <= reconstruct_max_vertices
        r = _prod_trees_pair(a, b, sample_every, recon)
        ok = not (
            r["not_representable"]
            or r["reach_failures"]
            or r["sampled_chain_failures"]
            or r["asphericity_failures"]
            or r["reconstruction_failures"]
        )
        for k in tot:
            tot[k] += r[k]
        rep.instances.append({"key": _pair_key(a, b), "pass": ok, **r})
        if not ok:
            _fail(rep, _pair_key(a, b), **r)
    rep.summary = {"pairs": len(rep.instances), **tot}
    return rep


# -- closure and décalage -------------------------------------------------------------------


def _edge_lists(trees):
    return [sorted(t.edges, key=edge_order) for t in trees]


def suite_adjunction(max_vertices: int = 4, max_arity: int = 3, bijection_max_vertices: int = 2) -> VerificationReport:
    rep = VerificationReport(
        "closure-adjunction",
        "cl is left adjoint to the inclusion of closed trees: triangle identities and functoriality",
        {"max_vertices": max_vertices, "max_arity": max_arity, "bijection_max_vertices": bijection_max_vertices},
    )
    corpus = enumerate_trees(max_vertices, max_arity)
    # triangle identities: cl(eta_T) = id_cl(T) and eta_X = id_X for closed X
    tri_fail = []
    for t in corpus:
        ct, _ = closure(t)
        ok1 = cl_morphism(closure_unit(t)).is_identity and closure(ct)[0] == ct
        ok2 = (not is_closed(t)) or closure_unit(t).is_identity
        if not (ok1 and ok2):
            tri_fail.append(to_term(t))
    rep.instances.append({"key": "triangle-identities", "pass": not tri_fail, "trees": len(corpus)})
    if tri_fail:
        _fail(rep, "triangle-identities", trees=tri_fail[:20])

    # cl on every morphism: valid, extends f along the units, preserves identities
    edges = _edge_lists(corpus)
    homs = {}
    cl_fail = 0
    n_morph = 0
    for i, a in enumerate(corpus):
        for k, c in enumerate(corpus):
            hs = hom(a, c)
            homs[(i, k)] = hs
            for h in hs:
                n_morph += 1
                try:
                    ch = cl_morphism(h)
                except TreeError:
                    cl_fail += 1
                    continue
                if compose(ch, closure_unit(a)).key != compose(closure_unit(c), h).key:
                    cl_fail += 1
    ident_ok = all(cl_morphism(identity(t)).is_identity for t in corpus)
    rep.instances.append({"key": "cl-on-morphisms", "pass": cl_fail == 0 and ident_ok, "morphisms": n_morph})

    # functoriality on all composable pairs, vectorised: cl(g)cl(f) and cl(gf)
    # share the edge map g.f, so the content is that every composite edge map
    # is a morphism A -> C (whose closure was validated above)
    pairs, bad = _composites_closed(corpus, edges, homs)
    rep.instances.append({"key": "cl-functorial", "pass": bad == 0, "composable_pairs": int(pairs)})
    if bad:
        _fail(rep, "cl-functorial", bad_pairs=int(bad))

    # object-level route on a deterministic sample
    sample_bad = 0
    sampled = 0
    small = [i for i, t in enumerate(corpus) if len(t.vertices) <= 2]
    for i in small:
        for j in small:
            for k in small:
                for f in homs[(i, j)][:3]:
                    for g in homs[(j, k)][:3]:
                        sampled += 1
                        lhs = compose(cl_morphism(g), cl_morphism(f))
                        rhs = cl_morphism(compose(g, f))
                        if lhs != rhs:
                            sample_bad += 1
    rep.instances.append({"key": "cl-functorial-objects", "pass": sample_bad == 0, "pairs": sampled})

    # hom bijection hom(cl S, X) -> hom(S, X), precomposition with the unit
    closed = [t for t in corpus if is_closed(t)]
    bij_fail = []
    for s in enumerate_trees(bijection_max_vertices, max_arity):
        cs = closure(s)[0]
        unit = closure_unit(s)
        for x in closed:
            left = [compose(m, unit).key for m in hom(cs, x)]
            right = [m.key for m in hom(s, x)]
            if len(left) != len(set(left)) or set(left) != set(right):
                bij_fail.append(f"{to_term(s)} -> {to_term(x)}")
    rep.instances.append({"key": "hom-bijection", "pass": not bij_fail, "closed_targets": len(closed)})
    if bij_fail:
        _fail(rep, "hom-bijection", cases=bij_fail[:20])
    rep.summary = {
        "trees": len(corpus),
        "morphisms": n_morph,
        "composable_pairs": int(pairs),
        "object_level_pairs": sampled,
    }
    return rep


def _composites_closed(corpus, edges, homs, chunk: int = 4_000_000):
    n = len(corpus)
    base = max(len(e) for e in edges) + 1
    arrays = {}
    for (i, k), hs in homs.items():
        if hs:
            pos = {e: p for p, e in enumerate(edges[k])}
            arrays[(i, k)] = np.array([[pos[h.edge_map[e]] for e in edges[i]] for h in hs], dtype=np.int64)
    # codes of hom(A, -) for each A, tagged with the target index
    codes_from = {}
    for i in range(n):
        w = base ** np.arange(len(edges[i]), dtype=np.int64)
        parts = [arrays[(i, k)] @ w + k * base ** len(edges[i]) for k in range(n) if (i, k) in arrays]
        codes_from[i] = np.unique(np.concatenate(parts))
    out_of = {j: [(k, arrays[(j, k)]) for k in range(n) if (j, k) in arrays] for j in range(n)}
    total = bad = 0
    for j in range(n):
        if not out_of[j]:
            continue
        g_all = np.concatenate([g for _, g in out_of[j]])
        g_tgt = np.concatenate([np.full(len(g), k, dtype=np.int64) for k, g in out_of[j]])
        for i in range(n):
            f = arrays.get((i, j))
            if f is None:
                continue
            ea = len(edges[i])
            w = base ** np.arange(ea, dtype=np.int64)
            shift = base**ea
            step = max(1, chunk // max(1, len(f) * ea))
            for s in range(0, len(g_all), step):
                g = g_all[s : s + step]
                comp = g[:, f]  # (ng, nf, ea) images in the targets
                code = comp @ w + (g_tgt[s : s + step] * shift)[:, None]
                code = code.ravel()
                pos = np.searchsorted(codes_from[i], code)
                pos[pos >= len(codes_from[i])] = 0
                bad += int(np.count_nonzero(codes_from[i][pos] != code))
                total += code.size
    return total, bad


def suite_decalage(max_vertices: int = 4, max_arity: int = 3) -> VerificationReport:
    rep = VerificationReport(
        "decalage-naturality",
        "u and the root maps are natural for D on closed trees; D(f) is the unique root-preserving extension",
        {"max_vertices": max_vertices, "max_arity": max_arity},
    )
    closed = [t for t in enumerate_trees(max_vertices, max_arity) if is_closed(t)]
    homs = {(i, k): hom(a, b) for i, a in enumerate(closed) for k, b in enumerate(closed)}
    n = 0
    for (i, k), hs in homs.items():
        s, t = closed[i], closed[k]
        for f in hs:
            n += 1
            d = decalage_morphism(f)
            nat_u = compose(d, decalage_unit(s)).key == compose(decalage_unit(t), f).key
            nat_a = compose(d, decalage_root_map(s)).key == decalage_root_map(t).key
            ext = root_preserving_extensions(f)
            unique = len(ext) == 1 and ext[0].key == d.key
            ok = nat_u and nat_a and d.is_root_preserving and unique
            if not ok:
                _fail(rep, f"{to_term(s)} -> {to_term(t)} {f.key}", nat_u=nat_u, nat_a=nat_a, unique=unique)
    rep.instances.append({"key": "naturality", "pass": not rep.failures, "morphisms": n})
    ident = all(decalage_morphism(identity(t)).is_identity for t in closed)
    funct_bad = 0
    for (i, j), fs in homs.items():
        for k in range(len(closed)):
            for f in fs:
                for g in homs[(j, k)]:
                    if decalage_morphism(compose(g, f)) != compose(decalage_morphism(g), decalage_morphism(f)):
                        funct_bad += 1
    rep.instances.append({"key": "functoriality", "pass": ident and funct_bad == 0, "closed_trees": len(closed)})
    return rep


COUNTER_S = "c[w](d,e,f)"
COUNTER_T = "a[v](b, c[w](d,e,f))"
COUNTER_T_CAPPED = "a[v](b[x](), c[w](d,e,f))"


def suite_counterexample() -> VerificationReport:
    rep = VerificationReport(
        "decalage-counterexample",
        "the outer face chopping the root vertex of a non-closed tree has no root-preserving extension",
        {"S": COUNTER_S, "T": COUNTER_T},
    )
    s, t = parse_term(COUNTER_S), parse_term(COUNTER_T)
    f = morphism(s, t, {e: e for e in s.edges})
    ext = root_preserving_extensions(f)
    rep.instances.append({"key": "no-extension", "pass": not ext, "extensions": len(ext)})
    # control: a nullary vertex above b makes the extension exist
    tc = parse_term(COUNTER_T_CAPPED)
    ext_c = root_preserving_extensions(morphism(s, tc, {e: e for e in s.edges}))
    rep.instances.append({"key": "capped-control", "pass": len(ext_c) == 1, "extensions": len(ext_c)})
    return rep


# -- Omega ---------------------------------------------------------------------------------


def suite_factorisation(max_vertices: int = 4, max_arity: int = 3) -> VerificationReport:
    rep = VerificationReport(
        "factorisation",
        "every morphism is a degeneracy, then an isomorphism, then a face map",
        {"max_vertices": max_vertices, "max_arity": max_arity},
    )
    corpus = enumerate_trees(max_vertices, max_arity)
    n = 0
    for a in corpus:
        bad = 0
        cnt = 0
        for b in corpus:
            for f in hom(a, b):
                cnt += 1
                tr = factorize(f)
                ok = (
                    tr.composite() == f
                    and tr.iso.is_iso()
                    and all(len(d.source.vertices) == len(d.target.vertices) + 1 for d in tr.degeneracy_steps)
                    and all(st.kind in ("inner", "outer", "corolla-edge") for st in tr.face_steps)
                    and tr.face.is_injective
                )
                if not ok:
                    bad += 1
                    if bad <= 3:
                        _fail(rep, f"{to_term(a)} -> {to_term(b)}", edge_map=repr(f))
        n += cnt
        rep.instances.append({"key": to_term(a), "pass": bad == 0, "morphisms": cnt})
    rep.summary = {"morphisms": n}
    return rep


def _monotone_maps(m: int, n: int) -> int:
    return sum(1 for f in product(range(n + 1), repeat=m + 1) if all(x <= y for x, y in zip(f, f[1:])))


def suite_fully_faithful(max_n: int = 4) -> VerificationReport:
    rep = VerificationReport(
        "linear-fully-faithful",
        "hom(L_m, L_n) matches monotone maps [m] -> [n]",
        {"max_n": max_n},
    )
    for m in range(max_n + 1):
        for n in range(max_n + 1):
            hs = hom(linear_tree(m), linear_tree(n))
            maps = {tuple(int(h.edge_map[str(i)]) for i in range(m + 1)) for h in hs}
            mono = {f for f in product(range(n + 1), repeat=m + 1) if all(x <= y for x, y in zip(f, f[1:]))}
            ok = len(hs) == _monotone_maps(m, n) and maps == mono
            rep.instances.append({"key": f"{m},{n}", "pass": ok, "count": len(hs)})
    return rep


# -- Segal cores and the product remark ---------------------------------------------------------


def suite_segal_core(max_vertices: int = 4, max_arity: int = 3) -> VerificationReport:
    rep = VerificationReport(
        "segal-core",
        "Segal cores are aspherical and are glued from corollas along single edges",
        {"max_vertices": max_vertices, "max_arity": max_arity},
    )
    for t in enumerate_trees(max_vertices, max_arity):
        v = segal_core_asphericity(t)
        rep.instances.append(
            {"key": to_term(t), "pass": v.ok, "verdict": v.verdict.kind, "gluing": v.gluing["ok"]}
        )
        if not v.ok:
            _fail(rep, to_term(t), verdict=v.verdict.as_dict(), gluing=v.gluing)
    return rep


def suite_eta_times_corolla(shape_bound: int = 2) -> VerificationReport:
    rep = VerificationReport(
        "eta-times-corolla",
        "the category of elements of eta x C_2 is not connected",
        {"shape_bound": shape_bound},
    )
    x = presheaf_product(Representable(eta()), Representable(corolla(2)))
    cat = category_of_elements(x, shape_bound)
    comps = cat.components()
    poset_comps = connected_components(x, max_vertices=max(2, shape_bound))
    verdict = asphericity(x)
    nondeg = face_poset(x).nodes
    only_eta = all(not t.vertices for t in nondeg)
    rep.instances.append({"key": "components", "pass": comps == 3 and poset_comps == 3, "components": comps})
    rep.instances.append({"key": "axioms", "pass": cat.check_axioms(), "objects": len(cat.objects)})
    rep.instances.append({"key": "verdict", "pass": verdict.kind == "NotAspherical", "verdict": verdict.kind})
    rep.instances.append({"key": "nondegenerate", "pass": only_eta and len(nondeg) == 3, "count": len(nondeg)})
    return rep


# -- homotopy engine ---------------------------------------------------------------------------


def _simplex_product_complex(m: int, n: int) -> SimplicialComplex:
    """Nondegenerate simplices of Delta_m x Delta_n: strictly increasing
    chains of [m] x [n]."""
    pts = [(i, j) for i in range(m + 1) for j in range(n + 1)]
    index = {p: k for k, p in enumerate(pts)}
    chains = []
    for sh in simplex_shuffles(m, n):
        chains.append([index[p] for p in sh.path])
    return SimplicialComplex.from_facets(chains)


def _homotopy_corpus(max_vertices: int):
    out = []
    small = [t for t in enumerate_trees(max_vertices, 3) if len(t.edges) <= 6]
    for t in small:
        out.append((f"rep {to_term(t)}", Representable(t)))
        if t.vertices:
            out.append((f"boundary {to_term(t)}", boundary(t)))
            out.append((f"segal-core {to_term(t)}", segal_core(t)))
        for e in sorted(t.inner_edges, key=edge_order):
            out.append((f"horn {to_term(t)} {e}", inner_horn(t, e)))
    for a, b in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3)]:
        out.append((f"tensor L{a} L{b}", TensorAmbient(linear_tree(a), linear_tree(b))))
    for k in range(4):
        out.append((f"tensor L1 C{k}", TensorAmbient(linear_tree(1), corolla(k))))
    out.append(("eta x C2", presheaf_product(Representable(eta()), Representable(corolla(2)))))
    return out


def suite_homotopy(max_vertices: int = 3, seed: int = 0) -> VerificationReport:
    rep = VerificationReport(
        "homotopy-self-consistency",
        "collapsible verdicts have vanishing reduced homology; Euler characteristics agree",
        {"max_vertices": max_vertices, "seed": seed, "restarts": 32},
    )
    for key, x in _homotopy_corpus(max_vertices):
        v = asphericity(x, materialise=True, seed=seed)
        h = v.homology
        replay = v.collapse is None or replay_collapse(order_complex(face_poset(x)), v.collapse)
        ok = h is not None and h.euler_ok and replay and (not v.collapsed or h.trivial)
        rep.instances.append({"key": key, "pass": ok, "verdict": v.kind, "euler_ok": bool(h and h.euler_ok)})
    # direct chain complexes of products of simplices against the tree pipeline
    for m in range(6):
        for n in range(6 - m):
            c = _simplex_product_complex(m, n)
            h = homology(c)
            seq = collapse_to_point(c, seed=seed)
            via_tree = asphericity(TensorAmbient(linear_tree(m), linear_tree(n)), materialise=True) if m + n <= 4 else None
            agree = via_tree is None or (via_tree.homology.trivial == h.trivial)
            ok = h.trivial and h.euler_ok and (seq is None or replay_collapse(c, seq)) and agree
            rep.instances.append({"key": f"Delta{m} x Delta{n}", "pass": ok, "trivial": h.trivial})
    # known non-contractible complexes
    circle = SimplicialComplex.from_facets([(0, 1), (1, 2), (0, 2)])
    rp2 = SimplicialComplex.from_facets(
        [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1), (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3)]
    )
    hc, hr = homology(circle), homology(rp2)
    rep.instances.append({"key": "circle", "pass": hc.betti.get(1) == 1 and hc.euler_ok and collapse_to_point(circle) is None})
    rep.instances.append({"key": "projective-plane", "pass": hr.torsion.get(1) == [2] and hr.euler_ok})
    # union lemma harness on shuffle decompositions and Segal cores
    for a, b in [(eta(), corolla(2)), (linear_tree(1), linear_tree(1)), (linear_tree(1), corolla(2)), (corolla(2), linear_tree(2))]:
        amb = TensorAmbient(a, b)
        pieces = [shuffle_subobject(sh, amb) for sh in amb.shuffle_trees]
        mv = mayer_vietoris_consistent(pieces, materialise=True)
        rep.instances.append({"key": f"union-lemma {_pair_key(a, b)}", "pass": mv["consistent"], **mv})
    for t in [linear_tree(3), parse_term("a[u](b[v](c,d), e[w](), f)")]:
        sc = segal_core(t)
        pieces = [SubPresheaf(sc.ambient, (g,)) for g in sc.generators]
        mv = mayer_vietoris_consistent(pieces, materialise=True)
        rep.instances.append({"key": f"union-lemma segal {to_term(t)}", "pass": mv["consistent"], **mv})
    return rep


# -- registry -----------------------------------------------------------------------------------


@dataclass(frozen=True)
class Suite:
    run: object
    limits: dict  # bound name -> largest accepted value


SUITES = {
    "simplex-shuffle-counts": Suite(suite_simplex_counts, {"max_sum": 14}),
    "simplex-shuffle-intersections": Suite(suite_simplex_intersections, {}),
    "shuffle-props": Suite(suite_shuffle_props, {"max_vertices": 3, "max_arity": 3}),
    "prod-trees": Suite(suite_prod_trees, {"max_vertices": 3, "max_arity": 3, "reconstruct_max_vertices": 2}),
    "closure-adjunction": Suite(suite_adjunction, {"max_vertices": 4, "max_arity": 3, "bijection_max_vertices": 3}),
    "decalage-naturality": Suite(suite_decalage, {"max_vertices": 5, "max_arity": 3}),
    "decalage-counterexample": Suite(suite_counterexample, {}),
    "factorisation": Suite(suite_factorisation, {"max_vertices": 4, "max_arity": 3}),
    "linear-fully-faithful": Suite(suite_fully_faithful, {"max_n": 6}),
    "segal-core": Suite(suite_segal_core, {"max_vertices": 5, "max_arity": 3}),
    "eta-times-corolla": Suite(suite_eta_times_corolla, {"shape_bound": 3}),
    "homotopy-self-consistency": Suite(suite_homotopy, {"max_vertices": 3}),
}


def run_verify(suite: str, **bounds) -> VerificationReport:
    if suite not in SUITES:
        raise UnknownSuite(suite)
    entry = SUITES[suite]
    for k, v in bounds.items():
        lim = entry.limits.get(k)
        if lim is not None and v > lim:
            raise BoundsTooLarge(f"{k}={v} exceeds the limit {lim} for {suite}")
    if suite == "simplex-shuffle-intersections" and "pairs" in bounds:
        if any(comb(m + n, m) > 16 for m, n in bounds["pairs"]):
            raise BoundsTooLarge("more than 16 shuffles means more than 65535 subsets")
    t0 = time.perf_counter()
    rep = entry.run(**bounds)
    rep.seconds = time.perf_counter() - t0
    rep.summary = {
        "instances": len(rep.instances),
        "instances_passed": sum(1 for i in rep.instances if i.get("pass")),
        **rep.summary,
    }
    return rep

