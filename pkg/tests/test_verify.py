import json

import pytest

from dendroidal import verify
from dendroidal.presheaves import common_faces
from dendroidal.serialize import parse_term
from dendroidal.verify import SUITES, BoundsTooLarge, UnknownSuite, _prod_trees_pair, run_verify


def test_unknown_suite_and_bounds():
    with pytest.raises(UnknownSuite):
        run_verify("no-such-suite")
    with pytest.raises(BoundsTooLarge):
        run_verify("shuffle-props", max_vertices=9)
    with pytest.raises(BoundsTooLarge):
        run_verify("simplex-shuffle-intersections", pairs=[(3, 3)])


def test_reports_deterministic_without_timing():
    a = run_verify("segal-core", max_vertices=2)
    b = run_verify("segal-core", max_vertices=2)
    assert a.to_json() == b.to_json()
    assert "seconds" not in json.loads(a.to_json())
    assert "seconds" in json.loads(a.to_json(timing=True))


@pytest.mark.parametrize(
    "suite,bounds",
    [
        ("simplex-shuffle-counts", {"max_sum": 5}),
        ("shuffle-props", {"max_vertices": 1}),
        ("prod-trees", {"max_vertices": 1}),
        ("closure-adjunction", {"max_vertices": 1}),
        ("decalage-naturality", {"max_vertices": 2}),
        ("factorisation", {"max_vertices": 1}),
        ("linear-fully-faithful", {"max_n": 2}),
        ("segal-core", {"max_vertices": 2}),
    ],
)
def test_suites_pass_at_small_bounds(suite, bounds):
    r = run_verify(suite, **bounds)
    assert r.passed, r.failures[:3]
    assert r.summary["instances"] == len(r.instances) > 0


def test_every_suite_registered():
    assert len(SUITES) == 12


# -- mutation checks: the sweeps must notice a broken ingredient ----------------------------------


def test_prod_trees_detects_wrong_meet(monkeypatch):
    a, b = parse_term("a[u](b,c)"), parse_term("x[v](y,z)")
    assert _prod_trees_pair(a, b, 1, True)["not_representable"] == 0

    def lossy(x, y):
        out = common_faces(x, y)
        return out + out[:1] if out and out[0].vertices else out

    monkeypatch.setattr(verify, "common_faces", lossy)
    r = _prod_trees_pair(a, b, 1, False)
    assert r["not_representable"] > 0


def test_prod_trees_detects_wrong_shuffles(monkeypatch):
    a, b = parse_term("a[u](b,c)"), parse_term("x[v](y)")
    real = verify.shuffles

    def mutated(s, t):
        out = real(s, t)
        # replace the first shuffle by an outer face; meets with it are no
        # longer reachable from the other shuffles by inner faces alone
        from dendroidal.omega import elementary_faces
        from dendroidal.shuffles import ShuffleTree

        sh = out[0]
        outer = [f for f in elementary_faces(sh.tree) if f.kind == "outer"][0]
        return [ShuffleTree(s, t, outer.source, sh.kinds)] + out[1:]

    monkeypatch.setattr(verify, "shuffles", mutated)
    r = _prod_trees_pair(a, b, 1, False)
    assert r["reach_failures"] + r["sampled_chain_failures"] + r["not_representable"] > 0


def test_fullness_check_detects_broken_operation_test(monkeypatch):
    from dendroidal import presheaves

    assert run_verify("shuffle-props", max_vertices=1).passed
    monkeypatch.setattr(presheaves, "has_operation", lambda t, out, leaves: False)
    assert not run_verify("shuffle-props", max_vertices=1).passed


def test_counterexample_suite_detects_fake_extension(monkeypatch):
    from dendroidal.omega import identity

    monkeypatch.setattr(verify, "root_preserving_extensions", lambda f: [identity(f.target)])
    assert not run_verify("decalage-counterexample").passed
