from __future__ import annotations

import json

import pytest
from hypothesis import given

from mutheta.datum import (
    FIXTURES,
    j_index,
    load_fixture,
    parse_datum_text,
    sigma_shift,
    upsilon,
    validate_datum,
)
from mutheta.errors import (
    BadCmType,
    DifferentOrbits,
    DuplicateEmbedding,
    ParseError,
    SignatureMismatch,
    StarOrbitMismatch,
    UnknownEmbedding,
)

from .conftest import datum_from_seed, seeds


def test_all_fixtures_load():
    for name in FIXTURES:
        assert load_fixture(name).embeddings


def test_inert21_shape(inert21):
    assert inert21.n == 3 and inert21.p == 3
    assert inert21.f("tau") == 2 and inert21.f("taustar") == 1
    assert inert21.conj("tau") == "taustar"


def test_inert21_signature_mismatch(inert21):
    doc = inert21.to_document()
    doc["signature"]["taustar"] = 2
    with pytest.raises(SignatureMismatch):
        validate_datum(doc)


def test_star_must_commute_with_frobenius():
    doc = {
        "case": "A", "n": 2, "p": 3,
        "orbits": [["a", "b", "c", "d"]],
        "star": {"a": "b", "b": "a", "c": "d", "d": "c"},
        "cm_type": ["a", "c"],
        "signature": {"a": 1, "b": 1, "c": 1, "d": 1},
    }
    with pytest.raises(StarOrbitMismatch):
        validate_datum(doc)


def test_duplicate_and_cm_errors(inert21):
    doc = inert21.to_document()
    doc["orbits"] = [["tau", "tau"]]
    with pytest.raises(DuplicateEmbedding):
        validate_datum(doc)
    doc = inert21.to_document()
    doc["cm_type"] = ["tau", "taustar"]
    with pytest.raises(BadCmType):
        validate_datum(doc)
    doc = inert21.to_document()
    doc["cm_type"] = ["ghost"]
    with pytest.raises(UnknownEmbedding):
        validate_datum(doc)


def test_structural_errors_are_parse_errors(inert21):
    doc = inert21.to_document()
    doc["extra"] = 1
    with pytest.raises(ParseError):
        validate_datum(doc)
    with pytest.raises(ParseError):
        parse_datum_text("case = ", "toml")
    doc = inert21.to_document()
    doc["p"] = 4
    with pytest.raises(ParseError):
        validate_datum(doc)


def test_case_c_defaults(symplectic):
    assert symplectic.case == "C"
    assert symplectic.conj("tau") == "tau"
    assert symplectic.f("tau") == symplectic.n
    assert symplectic.cm_type == frozenset(symplectic.embeddings)


def test_sigma_shift_examples(inert21, split):
    assert sigma_shift(inert21, "tau", 1) == "taustar"
    assert sigma_shift(inert21, "tau", 0) == "tau"
    assert sigma_shift(split, "tau1", 7) == "tau1"


def test_j_index_examples(inert21, split):
    assert j_index(inert21, "taustar", "taustar") == 0
    assert j_index(inert21, "tau", "taustar") == 1
    assert (j_index(inert21, "taustar", "tau") - j_index(inert21, "tau", "tau")) % 2 == 1
    with pytest.raises(DifferentOrbits):
        j_index(split, "tau1", "tau1star")


def test_upsilon_examples(inert21, split, deformed):
    assert upsilon(inert21) == ("taustar",)
    assert set(upsilon(split)) == {"tau1", "tau1star"}
    assert upsilon(deformed) == ()


def test_canonical_ordering_is_input_independent():
    a = parse_datum_text(json.dumps({
        "case": "A", "n": 2, "p": 3,
        "orbits": [["y", "x"], ["q"], ["p"]],
        "star": {"x": "y", "y": "x", "p": "q", "q": "p"},
        "cm_type": ["x", "p"],
        "signature": {"x": 1, "y": 1, "p": 2, "q": 0},
    }), "json")
    b = parse_datum_text(json.dumps({
        "case": "A", "n": 2, "p": 3,
        "orbits": [["p"], ["x", "y"], ["q"]],
        "star": {"x": "y", "y": "x", "p": "q", "q": "p"},
        "cm_type": ["p", "x"],
        "signature": {"q": 0, "p": 2, "y": 1, "x": 1},
    }), "json")
    assert a.to_json() == b.to_json()


def test_document_round_trip_all_fixtures():
    for name in FIXTURES:
        d = load_fixture(name)
        again = parse_datum_text(d.to_json(), "json")
        assert again.to_json() == d.to_json()


@given(seeds)
def test_random_datum_invariants(seed):
    d = datum_from_seed(seed)
    for tau in d.embeddings:
        e = d.orbit_of(tau).size
        assert sigma_shift(d, tau, e) == tau
        assert d.conj(d.conj(tau)) == tau
        assert d.conj(sigma_shift(d, tau, 1)) == sigma_shift(d, d.conj(tau), 1)
        assert d.f(d.conj(tau)) == d.n - d.f(tau)
        if d.is_conjugate_stable(d.orbit_of(tau)):
            star_shift = (j_index(d, d.conj(tau), d.orbit_of(tau).members[0]) - j_index(d, tau, d.orbit_of(tau).members[0])) % e
            assert star_shift == e // 2
    bases = upsilon(d)
    assert len({d.orbit_of(b).members for b in bases}) == len(bases)
    for b in bases:
        values = d.orbit_values(b)
        assert 0 < d.f(b) == min(values) and max(values) < d.n
    assert parse_datum_text(d.to_json(), "json").to_json() == d.to_json()
