import json

import pytest

from dendroidal.cli import UnsupportedFormat, emit, main
from dendroidal.omega import hom
from dendroidal.serialize import morphism_from_dict, morphism_to_dict, parse_term

from conftest import T_SIX


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_hom_json(capsys):
    rc, out, _ = run(capsys, "hom", "x", "a[u](b,c)", "--json")
    assert rc == 0
    data = json.loads(out)
    assert len(data) == 3
    assert set(data[0]) == {"source", "target", "edge_map", "vertex_map"}


def test_faces_and_degeneracies(capsys):
    rc, out, _ = run(capsys, "faces", T_SIX)
    assert rc == 0 and out.count("inner") == 2 and out.count("outer") == 2
    rc, out, _ = run(capsys, "degeneracies", T_SIX, "--json")
    assert rc == 0 and len(json.loads(out)) == 6


def test_factorize_roundtrip(tmp_path, capsys):
    f = [m for m in hom(parse_term("a[u](b[v](c))"), parse_term("x[w](y,z)")) if not m.is_injective][0]
    path = tmp_path / "f.json"
    path.write_text(json.dumps(morphism_to_dict(f)))
    rc, out, _ = run(capsys, "factorize", str(path), "--json")
    assert rc == 0 and json.loads(out)["recomposes"]
    assert morphism_from_dict(morphism_to_dict(f)) == f


def test_closure_decalage_and_errors(capsys):
    rc, out, _ = run(capsys, "closure", "a[v](b,c)")
    assert rc == 0 and "b.cap" in out
    rc, _, err = run(capsys, "decalage", "a[v](b,c)")
    assert rc == 2 and "closed" in err
    rc, out, _ = run(capsys, "decalage", "a[v](b[x](),c[y]())", "--json")
    assert rc == 0 and json.loads(out)["new_root"] == "a.dec"


def test_subobject_commands(capsys):
    rc, out, _ = run(capsys, "boundary", "a[v](b,c)")
    assert rc == 0 and out.split() == ["a", "b", "c"]
    rc, out, _ = run(capsys, "horn", "a[u](b[v](c,d),e)", "b")
    assert rc == 0 and "a[u](b,e)" in out
    rc, _, _ = run(capsys, "horn", "a[u](b[v](c,d),e)", "c")
    assert rc == 2
    rc, out, _ = run(capsys, "segal-core", T_SIX, "--dot")
    assert rc == 0 and out.startswith("digraph")
    rc, out, _ = run(capsys, "sieves", "a[u](b[v](c))")
    assert out.strip().endswith("19 sieves")


def test_shuffle_commands(capsys):
    rc, out, _ = run(capsys, "shuffles", "a[u](b)", "x[v](y,z)")
    assert rc == 0 and out.strip().endswith("2 shuffles")
    rc, out, _ = run(capsys, "simplex-shuffles", "2", "3", "--json")
    assert len(json.loads(out)) == 10


def test_aspherical_exit_codes(capsys):
    rc, out, _ = run(capsys, "aspherical", "segal-core", T_SIX, "--json")
    assert rc == 0 and json.loads(out)["verdict"] == "CollapsedToPoint"
    rc, out, _ = run(capsys, "aspherical", "boundary", "a[u](b[v](c))")
    assert rc == 1 and out.startswith("NotAspherical")
    rc, out, _ = run(capsys, "aspherical", "product", "a", "x[v](y,z)")
    assert rc == 1 and '"components": 3' in out


def test_verify_command(capsys):
    rc, out, _ = run(capsys, "verify", "linear-fully-faithful")
    assert rc == 0
    doc = json.loads(out)
    assert doc["passed"] and "seconds" not in doc
    rc, out, _ = run(capsys, "verify", "segal-core", "--max-vertices", "2", "--timing")
    assert rc == 0 and "seconds" in json.loads(out)
    rc, _, err = run(capsys, "verify", "segal-core", "--max-vertices", "9")
    assert rc == 2 and "limit" in err


def test_usage_errors(capsys):
    assert run(capsys, "hom", "a[u](", "x")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys)[0] == 2


def test_emit(capsys):
    t = parse_term(T_SIX)
    assert emit(t, "term") == "a[u](b[v](c,d),e[w](),f)" or parse_term(emit(t, "term")) == t
    assert json.loads(emit(t, "json"))["root"] == "a"
    with pytest.raises(UnsupportedFormat):
        emit(t, "yaml")
    rc, out, _ = run(capsys, "emit", "poset", "boundary", "a[v](b,c)", "--format", "json")
    assert rc == 0 and len(json.loads(out)["nodes"]) == 3
    rc, out, _ = run(capsys, "emit", "boundary", "a[v](b,c)", "--format", "json")
    doc = json.loads(out)
    assert len(doc["elements"]) == 3 and "representable" in doc["ambient"]
    rc, _, err = run(capsys, "emit", "tree", "a", "--format", "yaml")
    assert rc == 2 and "unsupported" in err
