
import pytest
from hypothesis import given, settings, strategies as st

from dendroidal.homotopy import connected_components
from dendroidal.omega import NotInnerEdge, automorphisms, inclusion_is_morphism
from dendroidal.presheaves import (
    AmbientMismatch,
    Element,
    NotASubobject,
    QuotientPresheaf,
    Representable,
    SubPresheaf,
    boundary,
    category_of_elements,
    common_faces,
    downward_closure,
    full_subobject,
    inner_horn,
    intersection,
    is_full,
    is_normal,
    is_normal_mono,
    is_representable,
    max_faces_within,
    product,
    reduce_element,
    segal_core,
    sieves,
    union,
    yoneda_bijective,
)
from dendroidal.serialize import parse_term
from dendroidal.trees import canonical_code, corolla, enumerate_trees, eta, linear_tree

from conftest import TINY, T_SIX, trees

T = parse_term(T_SIX)


def _all_faces(t):
    """Oracle: every tree on a subset of t's edges whose inclusion is a
    morphism, found by testing all vertex subsets of the operations of t."""
    from dendroidal.omega import operations_of
    from dendroidal.trees import Tree, Vertex

    ops = [op for op in operations_of(t) if not op.is_identity]
    by_out = {}
    for op in ops:
        by_out.setdefault(op.output, set()).add(frozenset(op.inputs))
    found = {}

    def grow(root, vertices, frontier):
        if not frontier:
            tree = Tree(root, vertices)
            found[tree.structure] = tree
            return
        e, rest = frontier[0], frontier[1:]
        grow(root, vertices, rest)  # e stays a leaf
        for ins in by_out.get(e, ()):
            grow(root, vertices + [Vertex(f"n{len(vertices)}", e, ins)], rest + list(ins))

    for r in t.edges:
        grow(r, [], [r])
    # drop duplicates that arise from different groupings of the same edges
    return {k: v for k, v in found.items() if inclusion_is_morphism(v, t)}


@pytest.mark.parametrize("t", TINY + [T], ids=canonical_code)
def test_downward_closure_matches_face_oracle(t):
    mine = {g.structure for g in downward_closure([t])}
    assert mine == set(_all_faces(t))


def _sieve_oracle(t):
    faces = list(_all_faces(t).values())
    n = len(faces)
    below = [[i for i in range(n) if inclusion_is_morphism(faces[i], faces[j])] for j in range(n)]
    count = 0
    for mask in range(1 << n):
        if all(all(mask >> i & 1 for i in below[j]) for j in range(n) if mask >> j & 1):
            count += 1
    return count


def test_sieve_counts():
    assert len(sieves(eta())) == 2
    assert len(sieves(linear_tree(1))) == _sieve_oracle(linear_tree(1)) == 5
    assert len(sieves(linear_tree(2))) == _sieve_oracle(linear_tree(2)) == 19
    assert len(sieves(corolla(2))) == _sieve_oracle(corolla(2))


def test_sieves_are_distinct_unions_of_generated_subobjects():
    ss = sieves(corolla(2))
    assert len(set(ss)) == len(ss)
    rep = Representable(corolla(2))
    for s in ss:
        assert s == union([SubPresheaf(rep, (g,)) for g in s.generators]) if s.generators else s.is_empty


def test_boundary_and_horn():
    b = boundary(corolla(2))
    assert sorted(g.root for g in b.generators) == ["0", "1", "2"]
    assert b.eta_elements == {"0", "1", "2"}
    assert not b.contains_tree(corolla(2))
    h = inner_horn(T, "b")
    assert all(g.structure != T.structure for g in h.generators)
    assert len(h.generators) == len(boundary(T).generators) - 1
    with pytest.raises(NotInnerEdge):
        inner_horn(T, "c")


def test_segal_core():
    sc = segal_core(T)
    assert len(sc.generators) == 3
    assert segal_core(eta()) == Representable(eta()).full()


def test_union_intersection_and_mismatch():
    b = boundary(linear_tree(2))
    full = Representable(linear_tree(2)).full()
    assert union([b, full]) == full
    assert intersection([b, full]) == b
    assert b < full and b <= b
    with pytest.raises(AmbientMismatch):
        union([b, boundary(corolla(2))])


@settings(max_examples=40, deadline=None)
@given(trees(max_vertices=3), st.data())
def test_common_faces_is_intersection(t, data):
    faces = downward_closure([t])
    a = data.draw(st.sampled_from(faces))
    b = data.draw(st.sampled_from(faces))
    mine = {g.structure for g in downward_closure(common_faces(a, b))}
    oracle = {g.structure for g in faces if inclusion_is_morphism(g, a) and inclusion_is_morphism(g, b)}
    assert mine == oracle


def _is_full_bruteforce(x, y):
    cols = x.eta_elements
    return all(x.contains_tree(g) for g in y.nondegenerate() if g.edges <= cols)


@settings(max_examples=60, deadline=None)
@given(trees(max_vertices=3), st.data())
def test_is_full_fast_and_slow_agree(t, data):
    rep = Representable(t)
    faces = downward_closure([t])
    k = data.draw(st.integers(1, 3))
    gens = tuple(data.draw(st.sampled_from(faces)) for _ in range(k))
    x = SubPresheaf(rep, gens)
    assert is_full(x, rep.full()) == _is_full_bruteforce(x, rep.full())


@given(trees(max_vertices=3), st.data())
def test_full_subobject_is_full_with_given_colours(t, data):
    rep = Representable(t)
    cols = data.draw(st.sets(st.sampled_from(sorted(t.edges)), min_size=1))
    x = full_subobject(rep, cols)
    assert x.eta_elements == cols
    assert is_full(x, rep.full())
    for g in max_faces_within(t, cols):
        assert g.edges <= cols


def test_is_full_requires_subobject():
    rep = Representable(T)
    with pytest.raises(NotASubobject):
        is_full(rep.full(), boundary(T))


def test_boundary_of_corolla_not_full():
    # all three eta-faces lie in the boundary but the top element does not
    b = boundary(corolla(2))
    assert not is_full(b, Representable(corolla(2)).full())


def test_representable_and_yoneda():
    rep = Representable(T)
    for g in downward_closure([T])[:8]:
        x = SubPresheaf(rep, (g,))
        u, gen = is_representable(x)
        assert u == g
        shapes = enumerate_trees(1, 2)
        assert yoneda_bijective(x, u, gen, shapes)
    assert is_representable(boundary(corolla(2))) is None


def test_yoneda_detects_non_representable():
    b = boundary(corolla(2))
    # the eta-face "0" with its identity element cannot generate the other faces
    gen = Element.of(eta(), {"0": "0"})
    assert not yoneda_bijective(b, eta(), gen, [eta()])


def test_elements_and_degeneracy():
    rep = Representable(corolla(2))
    els = rep.elements(linear_tree(1))
    # maps L_1 -> C_2: the corolla has no unary operations, so only degenerate ones
    assert all(el.is_degenerate for el in els)
    assert len(els) == 3
    assert {canonical_code(reduce_element(el).shape) for el in els} == {canonical_code(eta())}
    for el in els:
        assert rep.contains(el)


def test_normality():
    c2 = corolla(2)
    shapes = enumerate_trees(1, 2)
    assert is_normal(Representable(c2), shapes)
    swap = [a for a in automorphisms(c2)]
    q = QuotientPresheaf(c2, swap)
    assert len(q.elements(c2)) == 1
    assert not is_normal(q, shapes)
    assert is_normal_mono(boundary(c2), Representable(c2), shapes)


def test_eta_times_corolla():
    x = product(Representable(eta()), Representable(corolla(2)))
    cat = category_of_elements(x, 2)
    assert cat.check_axioms()
    assert cat.components() == 3
    assert connected_components(x) == 3
    nd = x.nondegenerate(2, 3)
    assert {len(g.vertices) for g in nd} == {0}
