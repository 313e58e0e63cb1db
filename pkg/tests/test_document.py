import json

import pytest

from threadrep.document import dumps, ideal_to_json, load, module_to_spec, parse_document, parse_module
from threadrep.errors import ParseError
from threadrep.exactla import PrimeField, RationalField
from threadrep.rep import validate

from helpers import fixture, fixture_path


def test_fixtures_parse():
    for name in ("d4_staircase", "a2_gap_half", "d4_rect_ideal", "a2_open", "two_cycle",
                 "a3_threaded", "kronecker_relation", "d5_threaded", "kronecker_threaded",
                 "d4_threading_1", "d4_threading_2", "d4_threading_3", "d4_threading_4"):
        doc = fixture(name)
        assert doc.quiver.vertices


def test_module_round_trip():
    doc = fixture("d4_staircase")
    m = doc.module("M")
    back = parse_module(doc, json.loads(dumps(module_to_spec(m))))
    assert back == m
    assert validate(back).ok


def test_ideal_round_trip():
    doc = fixture("d4_rect_ideal")
    raw = dict(doc.raw, ideal=ideal_to_json(doc.ideal))
    again = parse_document(raw)
    assert again.ideal.families == doc.ideal.families


def test_field_override(monkeypatch):
    monkeypatch.setenv("THREADREP_FIELD", "Q")
    assert fixture("d4_staircase").field == RationalField()
    monkeypatch.setenv("THREADREP_FIELD", "101")
    assert fixture("d4_staircase").field == PrimeField(101)


def test_bad_documents(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ParseError):
        load(bad)
    with pytest.raises(ParseError):
        parse_document({"vertices": []})
    data = json.loads(open(fixture_path("d4_staircase")).read())
    data["modules"]["loop"] = "loop"
    with pytest.raises(ParseError):
        parse_document(data)
