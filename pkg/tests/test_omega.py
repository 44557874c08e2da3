from itertools import combinations_with_replacement, permutations

import pytest
from hypothesis import given, settings

from dendroidal.omega import (
    NotAMorphism,
    SourceTargetMismatch,
    closure_unit,
    cl_morphism,
    compose,
    compose_all,
    decalage_morphism,
    decalage_root_map,
    decalage_unit,
    elementary_degeneracies,
    elementary_faces,
    factorize,
    hom,
    identity,
    inner_face,
    morphism,
    operations_of,
    outer_face,
    root_preserving_extensions,
)
from dendroidal.serialize import parse_term
from dendroidal.trees import (
    NotClosed,
    canonical_code,
    closure,
    corolla,
    eta,
    is_closed,
    linear_tree,
)

from conftest import TINY, T_SIX, trees

T = parse_term(T_SIX)


def _monotone(m, n):
    return sum(1 for _ in combinations_with_replacement(range(n + 1), m + 1))


def _subtree_ops(t, out, leafset):
    """Oracle: brute-force over vertex subsets for a subtree with root `out`
    and leaf set `leafset`."""
    verts = sorted(t.vertices, key=lambda v: v.name)
    hits = 0
    for mask in range(1 << len(verts)):
        chosen = [v for i, v in enumerate(verts) if mask >> i & 1]
        outs = {v.out for v in chosen}
        ins = {e for v in chosen for e in v.inputs}
        if not chosen:
            hits += leafset == {out}
            continue
        roots = outs - ins
        if roots == {out} and (ins - outs) == set(leafset) and len(outs) == len(chosen):
            hits += 1
    return hits


def test_operations_counts():
    assert len(operations_of(eta())) == 1
    ops = operations_of(corolla(2))
    assert sum(op.is_identity for op in ops) == 3
    assert sum(not op.is_identity for op in ops) == 2
    cdf = [op for op in operations_of(T) if op.output == "a" and set(op.inputs) == {"c", "d", "f"}]
    assert len(cdf) == 6 * _subtree_ops(T, "a", {"c", "d", "f"}) == 6
    assert len({op.inputs for op in cdf}) == 6


def test_hom_examples():
    assert len(hom(eta(), corolla(2))) == 3
    assert len(hom(eta(), T)) == len(T.edges) == 6
    assert len(hom(linear_tree(1), eta())) == 1
    assert len(hom(linear_tree(1), linear_tree(3))) == _monotone(1, 3) == 10


@pytest.mark.parametrize("m,n", [(m, n) for m in range(4) for n in range(4)])
def test_linear_hom_counts(m, n):
    assert len(hom(linear_tree(m), linear_tree(n))) == _monotone(m, n)


def test_hom_duplicate_free_and_valid():
    for s in TINY:
        for t in TINY:
            hs = hom(s, t)
            assert len(set(hs)) == len(hs)
            for f in hs:
                f.check()


def _brute_hom_count(s, t):
    """Oracle: all edge maps, kept when every vertex has a subtree witness."""
    from dendroidal.omega import witness

    se, te = sorted(s.edges), sorted(t.edges)
    n = 0
    for images in __import__("itertools").product(te, repeat=len(se)):
        m = dict(zip(se, images))
        ok = True
        for v in s.vertices:
            ins = [m[e] for e in v.inputs]
            if len(set(ins)) != len(ins) or witness(t, m[v.out], ins) is None:
                ok = False
                break
        n += ok
    return n


@pytest.mark.parametrize("s", TINY[:8], ids=canonical_code)
def test_hom_matches_bruteforce(s):
    for t in TINY:
        if len(t.edges) ** len(s.edges) <= 5000:
            assert len(hom(s, t)) == _brute_hom_count(s, t)


def test_compose_identity_and_mismatch():
    f = hom(eta(), T)[0]
    assert compose(identity(T), f) == f
    assert compose(f, identity(eta())) == f
    with pytest.raises(SourceTargetMismatch):
        compose(f, f)


def test_compose_associative_on_small_chains():
    a, b, c, d = linear_tree(1), linear_tree(2), corolla(2), T
    for f in hom(a, b):
        for g in hom(b, c)[:4]:
            for h in hom(c, d)[:4]:
                assert compose(h, compose(g, f)) == compose(compose(h, g), f)


def test_elementary_face_counts():
    assert len(elementary_faces(linear_tree(2))) == 3
    assert [f.kind for f in elementary_faces(corolla(2))] == ["corolla-edge"] * 3
    faces = elementary_faces(T)
    inner = {f.at for f in faces if f.kind == "inner"}
    outer = {f.at for f in faces if f.kind == "outer"}
    assert inner == {"b", "e"}
    # outer faces: vertices with exactly one adjacent inner edge
    oracle = {v.name for v in T.vertices if sum(x in T.inner_edges for x in v.inputs | {v.out}) == 1}
    assert outer == oracle == {"v", "w"}
    with pytest.raises(Exception):
        inner_face(T, "c")
    with pytest.raises(Exception):
        outer_face(T, "u")


def _expected_face_edges(t, f):
    if f.kind == "corolla-edge":
        return 1
    if f.kind == "inner":
        return len(t.edges) - 1
    v = t.vertex_by_name[f.at]
    if v.out == t.root:  # chop the root vertex: lose the root and the leaf inputs
        return len(t.edges) - 1 - sum(x in t.leaves for x in v.inputs)
    return len(t.edges) - v.arity


@given(trees(max_vertices=3))
def test_faces_are_monomorphisms(t):
    for f in elementary_faces(t):
        f.map.check()
        assert f.map.is_injective
        assert len(f.source.edges) == _expected_face_edges(t, f)


@given(trees(max_vertices=3))
def test_degeneracies_one_per_edge(t):
    ds = elementary_degeneracies(t)
    assert len(ds) == len(t.edges)
    for d in ds:
        assert len(d.source.vertices) == len(t.vertices) + 1
        assert set(d.edge_map.values()) == t.edges
        d.check()


def test_simplicial_identity_s0_d0():
    l1 = linear_tree(1)
    (sigma,) = hom(l1, eta())
    for f in elementary_faces(l1):
        # the composite is the unique map between two one-edge trees
        c = compose(sigma, f.map)
        assert c.is_iso() and len(hom(c.source, c.target)) == 1


def test_factorize_trivial_cases():
    tr = factorize(identity(T))
    assert tr.degeneracy.is_identity and tr.iso.is_identity and tr.face.is_identity
    (sigma,) = hom(linear_tree(1), eta())
    tr = factorize(sigma)
    assert tr.degeneracy == sigma and tr.iso.is_identity and tr.face.is_identity


@settings(max_examples=30, deadline=None)
@given(trees(max_vertices=2), trees(max_vertices=3))
def test_factorize_recomposes(s, t):
    for f in hom(s, t):
        tr = factorize(f)
        assert tr.composite() == f
        assert tr.iso.is_iso()
        assert all(step.kind in ("inner", "outer", "corolla-edge") for step in tr.face_steps)
        assert all(len(d.source.vertices) == len(d.target.vertices) + 1 for d in tr.degeneracy_steps)
        if tr.degeneracy_steps:
            # the degeneracy is the chain of collapses up to relabelling
            chain = compose_all(list(reversed(tr.degeneracy_steps)))
            assert len(chain.target.edges) == len(tr.degeneracy.target.edges)
            assert tr.iso.is_identity


def test_bad_edge_map_rejected():
    with pytest.raises(NotAMorphism):
        morphism(corolla(2), corolla(2), {"0": "0", "1": "1", "2": "1"})


def test_cl_example_is_three_inner_faces():
    r = parse_term("a[v](b,c)")
    t = parse_term("a[v](b, c[w](d,e,f))")
    (dw,) = [f.map for f in elementary_faces(t) if f.kind == "outer" and f.at == "w"]
    assert dw.source.structure == r.structure
    clf = cl_morphism(morphism(r, t, dw.edge_map))
    ct = closure(t)[0]
    chain, cur = [], ct
    for e in ["d", "e", "f"]:
        face = inner_face(cur, e)
        chain.append(face.map)
        cur = face.source
    comp = compose_all(chain)
    assert comp.edge_map == clf.edge_map
    assert canonical_code(comp.source) == canonical_code(clf.source)


def test_cl_identity_and_triangle():
    assert cl_morphism(identity(T)).is_identity
    for t in TINY:
        eta_t = closure_unit(t)
        assert cl_morphism(eta_t).is_identity
        ct = closure(t)[0]
        assert closure_unit(ct).is_identity


def test_decalage_on_morphisms():
    ct = closure(T)[0]
    assert decalage_morphism(identity(ct)).is_identity
    with pytest.raises(NotClosed):
        decalage_morphism(identity(T))
    closed = [t for t in TINY if is_closed(t)]
    for s in closed:
        for t in closed:
            for f in hom(s, t):
                df = decalage_morphism(f)
                assert df.is_root_preserving
                assert compose(df, decalage_unit(s)) == compose(decalage_unit(t), f)
                assert compose(df, decalage_root_map(s)) == decalage_root_map(t)
                assert root_preserving_extensions(f) == [df]


def test_decalage_counterexample_and_control():
    s = parse_term("c[w](d,e,f)")
    t = parse_term("a[v](b, c[w](d,e,f))")
    dv = morphism(s, t, {e: e for e in s.edges})
    assert root_preserving_extensions(dv) == []
    capped = parse_term("a[v](b[x](), c[w](d,e,f))")
    assert len(root_preserving_extensions(morphism(s, capped, {e: e for e in s.edges}))) == 1


def test_isomorphisms_of_corolla():
    from dendroidal.omega import automorphisms

    assert len(automorphisms(corolla(3))) == len(list(permutations(range(3))))
