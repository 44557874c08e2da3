import random
import sys

from hypothesis import strategies as st

from dendroidal.trees import Tree, Vertex, enumerate_trees, relabel

SMALL = enumerate_trees(3, 3)
TINY = enumerate_trees(2, 3)
T_SIX = "a[u](b[v](c,d), e[w](), f)"


@st.composite
def trees(draw, max_vertices=3, max_arity=3):
    """A random tree built top-down with shuffled edge and vertex names."""
    budget = draw(st.integers(0, max_vertices))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = random.Random(seed)
    counter = [0]

    def fresh():
        counter[0] += 1
        return f"x{counter[0]}"

    root = fresh()
    frontier = [root]
    vertices = []
    while budget and frontier:
        e = frontier.pop(rng.randrange(len(frontier)))
        kids = [fresh() for _ in range(rng.randint(0, max_arity))]
        vertices.append(Vertex(f"w{len(vertices)}", e, kids))
        frontier.extend(kids)
        budget -= 1
    t = Tree(root, vertices)
    names = sorted(t.edges)
    perm = names[:]
    rng.shuffle(perm)
    return relabel(t, dict(zip(names, perm)))


small_trees = trees()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
