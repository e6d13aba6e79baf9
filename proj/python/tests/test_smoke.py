import json
import pathlib

import pytest

import rgs

FIXTURES = pathlib.Path(__file__).resolve().parents[2] / "tests" / "fixtures"


def load(name):
    return (FIXTURES / name).read_text()


def test_validate_and_conditions():
    assert rgs.validate(load("dyck2.json")) == []
    reps = rgs.conditions(load("example1.json"), set="abcd")
    assert all(r["holds"] for r in reps)
    assert any(not r["holds"] for r in rgs.conditions(load("example1_mutated.json"), set="abcd"))


def test_reduce_and_admissible():
    g = load("dyck2.json")
    assert rgs.reduce(g, ["a-", "a+"]) != rgs.reduce(g, ["a-", "b+"])
    assert rgs.admissible(g, ["a-", "b-", "b+", "a+"])
    assert not rgs.admissible(g, ["a-", "b+"])


def test_census_counts():
    c = rgs.census(load("dyck2.json"), 2)
    assert c["I_minus"]["1"] == 2
    assert c["I_zero"]["2"] == 2


def test_quotient_of_three_vertex_fixture():
    t = rgs.quotient(load("md_a.json"))
    assert len(t["vertices"]) == 2
    assert len(t["minus_edges"]) == 4
    part = rgs.quotient(load("md_a.json"), emit="partition")
    assert part["pa1"] == "pa0"


def test_dict_input_round_trips():
    doc = json.loads(load("dyck2.json"))
    assert rgs.validate(doc) == []


def test_md3_and_conjugacy():
    rep = rgs.md3("alpha", [[1, 1], [1, 1]], delta_super=1, measure=True)
    assert all(e.get("match", True) for e in rep["entries"])
    r = rgs.conjugacy(load("g0pqr_a.json"), load("g0pqr_c.json"))
    assert r["verdict"] == "not conjugate"


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        rgs.validate("{not json")
    with pytest.raises(rgs.InputError):
        rgs.reduce(load("dyck2.json"), ["zz"])
