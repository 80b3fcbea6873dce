import copy
import json

import pytest

from pantsdec.complex import (E12, boundary_and_interior, census, is_closed, is_even,
                              validate)
from pantsdec.groups import (PipelineError, build_curve_diagram, create_boundary,
                             padded_relators, parse_presentation, synthesize,
                             to_even_complex, to_plain_complex, verify_certificate)
from pantsdec.invariants import H1, Presentation, h1_invariants

GROUPS = {
    "a | a": H1(0),
    "a |": H1(1),
    "a,b | abAB": H1(2),
    "a | aaa": H1(0, (3,)),
    "a,b | abaB": H1(1, (2,)),
    "a,b,c,d | abABcdCD": H1(4),
}


@pytest.fixture(scope="module")
def certs():
    return {text: synthesize(parse_presentation(text)) for text in GROUPS}


@pytest.mark.parametrize("text, gens, rels", [
    ("a,b | abAB", 2, [(1, 2, -1, -2)]),
    ("a | a^3", 1, [(1, 1, 1)]),
    ("a | A^2", 1, [(-1, -1)]),
    ("a,b | a b, ba", 2, [(1, 2), (2, 1)]),
    ("a |", 1, []),
    ("x1,x2 | x1^2 x2^-1", 2, [(1, 1, -2)]),
])
def test_parse(text, gens, rels):
    p = parse_presentation(text)
    assert p.ngens == gens
    assert [tuple(r) for r in p.relators] == rels


@pytest.mark.parametrize("text", ["ab", "| a", "a,a | a", "a | c", "A | a", "a | a^x", "x1 | x3"])
def test_parse_errors(text):
    with pytest.raises(ValueError):
        parse_presentation(text)


def test_presentation_str_round_trip():
    p = parse_presentation("a,b | abAB")
    assert parse_presentation(str(p)) == p


def test_padding():
    p = parse_presentation("a,b | ab")
    (w, role), = padded_relators(p)
    assert role == "relator"
    assert w == (1, 2, 1, 1, -1, -1, 2, 2, -2, -2)
    (w, role), = padded_relators(parse_presentation("a |"))
    assert role == "padding" and w == (1, 1, -1, -1)


@pytest.mark.parametrize("text", list(GROUPS))
def test_diagram_fills(text):
    d = build_curve_diagram(parse_presentation(text))
    assert d.filling
    assert d.genus == parse_presentation(text).ngens
    assert sum(c.role == "meridian" for c in d.curves) == d.genus


def test_diagram_needs_generators():
    with pytest.raises(ValueError):
        build_curve_diagram(Presentation(0, ()))


@pytest.mark.parametrize("text", ["a | a", "a,b | abAB", "a | aaa"])
def test_complexes_keep_h1(text):
    p = parse_presentation(text)
    d = build_curve_diagram(p)
    plain = to_plain_complex(d)
    X = to_even_complex(d)
    assert validate(plain).ok
    assert validate(X).ok and is_closed(X) and is_even(X)
    assert h1_invariants(plain) == h1_invariants(X) == GROUPS[text]


def test_create_boundary_theta():
    X = to_even_complex(build_curve_diagram(parse_presentation("a,b | abAB")))
    Y = create_boundary(X)
    assert validate(Y).ok and is_even(Y)
    c = census(Y)
    assert (c.n0, c.n1) == (4, 2)
    assert len(boundary_and_interior(Y).interior_components) == 1
    assert h1_invariants(Y) == h1_invariants(X)


def test_create_boundary_rejects_bad_edge():
    X = to_even_complex(build_curve_diagram(parse_presentation("a | a")))
    with pytest.raises(ValueError):
        create_boundary(X, edge=10 ** 6)
    Y = create_boundary(X)
    bedge = next(e.id for e in Y.edges if e.type != E12)
    with pytest.raises(ValueError):
        create_boundary(Y, edge=bedge)


@pytest.mark.parametrize("text", list(GROUPS))
def test_synthesize(certs, text):
    cert = certs[text]
    assert cert.admissible
    assert cert.h1_complex == cert.h1_presentation == cert.h1_plain == GROUPS[text]
    assert len(cert.nodal.spheres) == len(cert.nodal.components) == 3
    assert cert.iso["verdict"]
    c = census(cert.bounded)
    assert (c.n0, c.n1) == (4, 2)
    assert verify_certificate(cert).ok


def test_certificate_is_deterministic(certs):
    again = synthesize(parse_presentation("a,b | abAB")).to_json()
    assert json.dumps(again, sort_keys=True) == json.dumps(certs["a,b | abAB"].to_json(), sort_keys=True)


def test_verify_from_json(certs):
    doc = json.loads(json.dumps(certs["a | aaa"].to_json()))
    rep = verify_certificate(doc)
    assert rep.ok, [c for c in rep.checks if not c[1]]


def test_verify_detects_tampering(certs):
    doc = copy.deepcopy(certs["a,b | abAB"].to_json())
    lab = doc["labels"][0]
    lab["matrix"][1] += 5
    rep = verify_certificate(doc)
    assert not rep.ok
    assert not dict((n, ok) for n, ok, _ in rep.checks)["labeling admissible"]


def test_verify_detects_wrong_group(certs):
    doc = copy.deepcopy(certs["a,b | abAB"].to_json())
    doc["presentation"]["relators"] = [[1, 2]]
    rep = verify_certificate(doc)
    assert not dict((n, ok) for n, ok, _ in rep.checks)["H1 complex = H1 presentation"]


def test_pipeline_error_stage():
    err = PipelineError("create_boundary", "boom")
    assert err.stage == "create_boundary" and "boom" in str(err)
