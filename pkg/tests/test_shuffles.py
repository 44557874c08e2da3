from itertools import combinations
from math import comb

import pytest
from hypothesis import given, settings

from dendroidal.omega import hom, inclusion_is_morphism
from dendroidal.presheaves import Element, Representable, is_full, is_representable
from dendroidal.serialize import parse_term
from dendroidal.shuffles import (
    EmptyIndexSet,
    TensorAmbient,
    cylinder_maps,
    shuffle_subobject,
    shuffles,
    shuffles_bruteforce,
    simplex_shuffle_intersection,
    simplex_shuffles,
)
from dendroidal.trees import canonical_code, corolla, eta, linear_tree

from conftest import TINY, trees


def _lattice_paths(m, n):
    """Oracle: count monotone paths by dynamic programming."""
    grid = [[1] * (n + 1) for _ in range(m + 1)]
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            grid[i][j] = grid[i - 1][j] + grid[i][j - 1]
    return grid[m][n]


@pytest.mark.parametrize("m,n", [(m, s - m) for s in range(9) for m in range(s + 1)])
def test_simplex_shuffle_counts(m, n):
    shs = simplex_shuffles(m, n)
    assert len(shs) == _lattice_paths(m, n) == comb(m + n, m)
    for sh in shs:
        assert len(sh.path) == m + n + 1
        for a, b in zip(sh.path, sh.path[1:]):
            assert (b[0] - a[0]) + (b[1] - a[1]) == 1


@pytest.mark.parametrize("m,n", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_simplex_intersections_are_chains_with_origin(m, n):
    shs = simplex_shuffles(m, n)
    for k in range(1, len(shs) + 1):
        for J in combinations(shs, k):
            r = simplex_shuffle_intersection(J)
            assert r.nonempty and r.contains_origin and r.linear
            assert (m, n) in r.points


def test_empty_index_set():
    with pytest.raises(EmptyIndexSet):
        simplex_shuffle_intersection([])


def test_small_shuffle_counts():
    assert len(shuffles(linear_tree(1), corolla(2))) == len(shuffles_bruteforce(linear_tree(1), corolla(2))) == 2
    assert len(shuffles(corolla(2), corolla(2))) == 2
    assert len(shuffles(eta(), parse_term("a[u](b[v](c,d), e[w](), f)"))) == 1


@pytest.mark.parametrize("m,n", [(m, n) for m in range(4) for n in range(4) if m + n <= 5])
def test_linear_tree_shuffles_match_lattice_paths(m, n):
    assert len(shuffles(linear_tree(m), linear_tree(n))) == comb(m + n, m)


@pytest.mark.parametrize("s", TINY, ids=canonical_code)
def test_percolation_matches_bruteforce(s):
    for t in TINY:
        mine = {sh.tree.structure for sh in shuffles(s, t)}
        oracle = {sh.tree.structure for sh in shuffles_bruteforce(s, t)}
        assert mine == oracle


@settings(max_examples=40, deadline=None)
@given(trees(max_vertices=2), trees(max_vertices=2))
def test_shuffle_invariants(s, t):
    shs = shuffles(s, t)
    assert shs
    ambient = TensorAmbient(s, t, shs)
    for sh in shs:
        assert sh.root_label == (s.root, t.root)
        assert sh.leaf_labels == {(a, b) for a in s.leaves for b in t.leaves}
        # every edge is a pair; each vertex copies one factor's vertex
        for v in sh.tree.vertices:
            kind = sh.kind[v.name]
            a, b = v.out
            if kind == "S":
                assert {x for x, _ in v.inputs} == s.above[a].inputs and {y for _, y in v.inputs} <= {b}
            else:
                assert {y for _, y in v.inputs} == t.above[b].inputs and {x for x, _ in v.inputs} <= {a}
        f = shuffle_subobject(sh, ambient)
        u, gen = is_representable(f)
        assert is_full(f, ambient.full())
    # the maximal shuffles are not faces of each other
    gens = ambient.generators
    for a in gens:
        for b in gens:
            assert a is b or not inclusion_is_morphism(a, b)


def test_tensor_of_eta_is_representable():
    t = parse_term("a[u](b,c)")
    amb = TensorAmbient(eta(), t)
    assert len(amb.generators) == 1
    assert canonical_code(amb.generators[0]) == canonical_code(t)


def test_cylinder_maps():
    x = corolla(2)
    cyl = cylinder_maps(x)
    rep = Representable(x)
    for shape in [eta(), corolla(2), linear_tree(1)]:
        for el in rep.elements(shape):
            for i in (0, 1):
                up = cyl.d(i, el)
                assert cyl.ambient.contains(up)
                assert cyl.sigma(up) == el
            assert cyl.d0(el) != cyl.d1(el)
    ident = Element.of(x, {e: e for e in x.edges})
    assert cyl.sigma(cyl.d1(ident)) == ident


def _labelling_eta_oracle(s, t):
    """Oracle: colour pairs (a, b) that occur as an edge in some admissible
    labelling, i.e. any pair of edges at all (every pair lies on a path)."""
    return {(a, b) for a in s.edges for b in t.edges}


def test_tensor_eta_elements():
    l1 = linear_tree(1)
    amb = TensorAmbient(l1, l1)
    assert amb.eta_elements == _labelling_eta_oracle(l1, l1)
    assert len(amb.eta_elements) == 4


def test_tensor_with_eta_is_hom():
    t = parse_term("a[u](b,c[v](d))")
    amb = TensorAmbient(eta(), t)
    for shape in [eta(), corolla(2), linear_tree(1)]:
        assert len(amb.elements(shape)) == len(hom(shape, t))


def test_intersection_suite_counts_all_subsets():
    from dendroidal.verify import run_verify

    (inst,) = run_verify("simplex-shuffle-intersections", pairs=[(2, 2)]).instances
    assert inst["subsets"] == 2 ** comb(4, 2) - 1 == 63
