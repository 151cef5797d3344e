from __future__ import annotations

import random

import pytest
from hypothesis import given

from mutheta.datum import j_index, orbit_base, upsilon, validate_datum
from mutheta.errors import LengthMismatch, NotDominant, NotPositive, NotSimple, ParseError, UpsilonEmpty, WeightError
from mutheta.random_data import random_good_weight, random_symmetric_weight, random_weight
from mutheta.schur import weyl_dim
from mutheta.weights import (
    all_deltas_good,
    all_weights_good,
    classify,
    component_stats,
    delta,
    delta_defined,
    delta_twist,
    every_weight_good,
    good_symmetric_exists,
    hasse_combination,
    hasse_constants,
    hasse_weight,
    is_good,
    is_simple,
    is_symmetric,
    make_weight,
    parse_weight,
    scalar_weight,
    supported_in,
    upsilon_twist,
    weight_from_json,
    zero_weight,
)

from .conftest import datum_from_seed, seeds


def test_classify_examples(inert21):
    flags = classify(inert21, parse_weight(inert21, "tau:2,2;taustar:5"))
    assert flags.scalar and flags.good and not flags.simple and not flags.symmetric
    flags = classify(inert21, parse_weight(inert21, "tau:1,0;taustar:1"))
    assert flags.symmetric and flags.simple and not flags.good
    assert flags.sum_symmetric
    flags = classify(inert21, zero_weight(inert21))
    assert flags.scalar and flags.parallel and flags.symmetric and flags.good and flags.simple
    assert not flags.positive and flags.supported_at == ()


def test_parallel_compares_common_entries(inert21):
    assert classify(inert21, parse_weight(inert21, "tau:3,3;taustar:3")).parallel
    assert not classify(inert21, parse_weight(inert21, "tau:3,1;taustar:1")).parallel


def test_weight_parsing(inert21):
    w = parse_weight(inert21, "taustar:5; tau:2,2")
    assert w == make_weight(inert21, {"tau": (2, 2), "taustar": (5,)})
    assert weight_from_json(inert21, w.to_json()) == w
    assert parse_weight(inert21, "") == zero_weight(inert21)
    with pytest.raises(LengthMismatch):
        parse_weight(inert21, "tau:1")
    with pytest.raises(NotDominant):
        parse_weight(inert21, "tau:0,1")
    with pytest.raises(ParseError):
        parse_weight(inert21, "tau=1,1")
    with pytest.raises(ParseError):
        parse_weight(inert21, "tau:x,1")


def test_component_stats_examples():
    s = component_stats((2, 1))
    assert (s.size, s.twist_norm, s.det_power) == (3, 3, 3)
    s = component_stats((1, 1, 0))
    assert (s.size, s.twist_norm, s.det_power) == (2, 2, 2)
    for k in range(5):
        s = component_stats((k, k, k))
        assert s.twist_norm == k == s.det_power
    with pytest.raises(NotPositive):
        component_stats((1, -1))


def test_det_power_matches_definition():
    for comp in [(3, 1), (2, 2, 1), (4, 0, 0), (1, 0)]:
        a = len(comp)
        assert component_stats(comp).det_power * a == sum(comp) * weyl_dim(a, comp)


def test_hasse_examples(inert21, split):
    assert hasse_weight(inert21, ["tau"])["tau"] == (8, 8)
    consts = hasse_constants(inert21)
    assert consts.m0 == 8 and dict(consts.per_embedding)["tau"] == 1
    assert hasse_weight(split, ["tau1"])["tau1"] == (4,)
    assert hasse_constants(split).m0 == 4
    assert hasse_weight(split, []) == zero_weight(split)
    assert hasse_combination(inert21, {"taustar": 3})["taustar"] == (24,)


def test_delta_examples(inert21, symplectic):
    assert delta(inert21, "tau") == parse_weight(inert21, "tau:1,0;taustar:1")
    assert delta_twist(inert21, "tau") == parse_weight(inert21, "taustar:4")
    assert delta(symplectic, "tau") == parse_weight(symplectic, "tau:2,0")


def test_delta_twist_needs_interior_orbit(deformed):
    with pytest.raises(WeightError):
        delta_twist(deformed, "tau")
    assert not delta_defined(deformed, "tau")


def test_upsilon_twist_examples(inert21, split):
    assert upsilon_twist(inert21, parse_weight(inert21, "tau:1,0;taustar:1")) == parse_weight(inert21, "taustar:4")
    lam = parse_weight(split, "tau1:3;tau1star:3")
    assert upsilon_twist(split, lam) == lam
    assert upsilon_twist(inert21, zero_weight(inert21)) == zero_weight(inert21)
    with pytest.raises(NotSimple):
        upsilon_twist(inert21, parse_weight(inert21, "tau:1,1;taustar:1"))


def test_upsilon_twist_rejects_orbit_touching_n():
    d = validate_datum({
        "case": "A", "n": 2, "p": 3, "orbits": [["a", "b"], ["c", "e"]],
        "star": {"a": "c", "c": "a", "b": "e", "e": "b"}, "cm_type": ["a", "b"],
        "signature": {"a": 2, "b": 1, "c": 0, "e": 1},
    })
    lam = make_weight(d, {"a": (1, 0)})
    assert is_simple(d, lam)
    with pytest.raises(UpsilonEmpty):
        upsilon_twist(d, lam)


def test_existence_examples(inert11, inert21, split, deformed, symplectic):
    assert good_symmetric_exists(inert11).exists and all_weights_good(inert11)
    assert not all_weights_good(inert21)
    assert not good_symmetric_exists(inert21).exists
    assert all_weights_good(split) and good_symmetric_exists(split).exists
    assert not good_symmetric_exists(deformed).exists
    assert all_weights_good(symplectic) and good_symmetric_exists(symplectic).exists


def test_witness_is_good_symmetric(split, inert11):
    for d in (split, inert11):
        w = good_symmetric_exists(d).witness
        assert is_good(d, w) and is_symmetric(d, w) and not w.is_zero()


def test_all_weights_good_vs_fundamental_weights_gap():
    # f takes n and another positive value on one orbit
    d = validate_datum({
        "case": "A", "n": 3, "p": 2, "orbits": [["a", "b"], ["c", "e"]],
        "star": {"a": "c", "c": "a", "b": "e", "e": "b"}, "cm_type": ["a", "b"],
        "signature": {"a": 3, "b": 1, "c": 0, "e": 2},
    })
    assert all_weights_good(d)
    assert all_deltas_good(d)
    assert not every_weight_good(d)


def _mixes_n(d) -> bool:
    for orbit in d.orbits:
        values = {d.f(t) for t in orbit}
        if d.n in values and values & set(range(1, d.n)):
            return True
    return False


@given(seeds)
def test_all_weights_good_criteria(seed):
    d = datum_from_seed(seed)
    assert all_weights_good(d) == all_deltas_good(d)
    if d.n <= 5 and not _mixes_n(d):
        assert all_weights_good(d) == every_weight_good(d)
    if all(o.size == 1 for o in d.orbits):
        assert all_weights_good(d)


@given(seeds)
def test_symmetric_weights_have_even_size(seed):
    d = datum_from_seed(seed)
    lam = random_symmetric_weight(random.Random(seed), d)
    assert is_symmetric(d, lam) and lam.size % 2 == 0


@given(seeds)
def test_goodness_of_sums(seed):
    rng = random.Random(seed)
    d = datum_from_seed(seed)
    kappa = random_good_weight(rng, d)
    lam = random_weight(rng, d, 3)
    assert is_good(d, kappa)
    assert is_good(d, kappa + lam) == is_good(d, lam)


@given(seeds)
def test_twist_lands_on_upsilon(seed):
    rng = random.Random(seed)
    d = datum_from_seed(seed)
    ups = set(upsilon(d))
    mapping = {}
    for orbit in d.orbits:
        base = orbit_base(d, orbit)
        if base is None:
            continue
        width = d.f(base)
        for t in orbit:
            head = tuple(sorted((rng.randint(0, 3) for _ in range(width)), reverse=True))
            mapping[t] = head + (0,) * (d.rank(t) - width)
    lam = make_weight(d, mapping)
    assert is_simple(d, lam)
    twisted = upsilon_twist(d, lam)
    assert supported_in(twisted, ups) and is_good(d, twisted) and is_simple(d, twisted)
    assert twisted.is_dominant()


@given(seeds)
def test_delta_twist_closed_form(seed):
    d = datum_from_seed(seed)
    for tau in d.cm_type:
        orbit = d.orbit_of(tau)
        base = orbit_base(d, orbit)
        if base is None or not d.is_conjugate_stable(orbit):
            continue
        e = orbit.size
        j = min(j_index(d, tau, base), j_index(d, d.conj(tau), base))
        value = d.p**j * (1 + d.p ** (e // 2))
        expected = make_weight(d, {base: (value,) + (0,) * (d.f(base) - 1)})
        assert delta_twist(d, tau) == expected


@given(seeds)
def test_scalar_det_power_equals_twist_norm(seed):
    rng = random.Random(seed)
    d = datum_from_seed(seed)
    w = scalar_weight(d, {t: rng.randint(0, 5) for t in d.embeddings})
    for _, comp in w.items():
        stats = component_stats(comp)
        assert stats.det_power == stats.twist_norm
