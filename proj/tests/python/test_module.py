import xml.etree.ElementTree as ET

import pytest

import vps

SVG = "{http://www.w3.org/2000/svg}"


def test_check_reports_errors(sample):
    assert vps.check(sample("person.mjv")) == []
    errors = vps.check(
        "class Main { public static void main(String[] args) { Persona p = null; int x = true; } }"
    )
    assert [e["category"] for e in errors] == ["unknown type", "type mismatch"]
    assert errors[0]["line"] == 1
    syntax = vps.check("class Main {")
    assert len(syntax) == 1 and syntax[0]["category"] == "syntax error"


def test_ast(sample):
    tree = vps.ast(sample("person.mjv"))
    assert len(tree["classes"]) == 2
    with pytest.raises(vps.CompileError):
        vps.ast("class {")


def test_trace_example1(sample):
    doc = vps.trace(sample("example1_int_array.mjv"))
    assert doc["version"] == 1
    assert len(doc["events"]) == 3
    final = doc["events"][-1]["state"]
    assert [b["value"] for b in final["frames"][0]["bindings"]] == [{"t": "ref", "id": 1}] * 2
    assert [r["value"]["v"] for r in final["heap"][0]["rows"]] == [0] * 5


def test_trace_budget(sample):
    doc = vps.trace(sample("infinite_loop.mjv"), max_steps=25)
    assert len(doc["events"]) == 25
    assert doc["events"][-1]["state"]["error"] == "step budget exceeded"
    with pytest.raises(ValueError):
        vps.trace(sample("infinite_loop.mjv"), max_steps=0)


def test_render_svg_is_well_formed(sample):
    svg = vps.render(sample("example2_alias_mutation.mjv"))
    root = ET.fromstring(svg)
    assert root.tag == SVG + "svg"
    texts = [t.text for t in root.iter(SVG + "text")]
    assert 'rut = "000"' in texts
    assert "edad = 56" in texts
    edges = [p for p in root.iter(SVG + "path") if p.get("class") == "edge"]
    assert len(edges) == 2
    assert {e.get("data-target") for e in edges} == {"@1"}


def test_render_every_sample_parses(sample_path, sample):
    import os

    for name in sorted(os.listdir(os.path.dirname(sample_path("person.mjv")))):
        if name.endswith(".mjv"):
            ET.fromstring(vps.render(sample(name), step=0, max_steps=50))


def test_render_formats_and_steps(sample):
    src = sample("friends.mjv")
    assert vps.render(src, format="dot").startswith("digraph vps {")
    assert vps.render(src, format="dot") == vps.render(src, format="dot")
    import json

    d = json.loads(vps.render(src, format="json"))
    assert len(d["nodes"]) == 3 and len(d["edges"]) == 5
    with pytest.raises(ValueError):
        vps.render(src, format="png")
    with pytest.raises(IndexError):
        vps.render(src, step=10_000)
    with pytest.raises(ValueError):
        vps.render(src, step="first")


def test_grade(sample):
    src = sample("example2_alias_mutation.mjv")
    ok = vps.grade(src, sample("answers/example2_final.vpsd"))
    assert ok["equivalent"] is True and ok["score"] == 1.0
    wrong = vps.grade(src, sample("answers/example2_wrong_value.vpsd"))
    assert wrong["equivalent"] is False
    assert [d["kind"] for d in wrong["discrepancies"]] == ["WrongPrimitiveValue"]
    friends = sample("friends.mjv")
    swapped = vps.grade(friends, sample("answers/friends_swapped_alias.vpsd"))
    assert [d["kind"] for d in swapped["discrepancies"]] == ["BrokenAliasing"]
    with pytest.raises(vps.AnswerError):
        vps.grade(src, "frame")


def test_vpsd_helpers(sample):
    text = vps.step_vpsd(sample("example1_int_array.mjv"))
    assert text == (
        "frame main\nref array_enteros -> @c1\nref ref -> @c1\nheap\n@c1 int[] [0, 0, 0, 0, 0]\n"
    )
    assert vps.canonical_vpsd(sample("answers/example2_final.vpsd")) == vps.step_vpsd(
        sample("example2_alias_mutation.mjv")
    )
    assert vps.grade(sample("example1_int_array.mjv"), text)["equivalent"]
