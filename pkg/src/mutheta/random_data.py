"""Seeded generators of random data and weights for property checks.

Case A data are assembled from two kinds of blocks: a single orbit of even
size on which the star acts as the half-turn, and a pair of orbits of equal
size swapped by the star.  Both commute with Frobenius by construction.
"""

from __future__ import annotations

import random
from collections.abc import Iterable

from .datum import ShimuraDatum, validate_datum
from .weights import Weight, make_weight

PRIMES = (2, 3, 5, 7)


def random_datum(
    rng: random.Random, max_n: int = 6, max_e: int = 4, max_blocks: int = 3
) -> ShimuraDatum:
    """A random valid case A datum with ``n <= max_n`` and orbit sizes ``<= max_e``."""
    n = rng.randint(1, max_n)
    orbits: list[list[str]] = []
    star: dict[str, str] = {}
    signature: dict[str, int] = {}
    cm_type: list[str] = []
    counter = 0

    def fresh() -> str:
        nonlocal counter
        counter += 1
        return f"t{counter}"

    for _ in range(rng.randint(1, max_blocks)):
        self_conjugate = max_e >= 2 and rng.random() < 0.5
        if self_conjugate:
            e = rng.choice([k for k in range(2, max_e + 1, 2)])
            members = [fresh() for _ in range(e)]
            half = e // 2
            for i in range(half):
                a, b = members[i], members[i + half]
                star[a], star[b] = b, a
                signature[a] = rng.randint(0, n)
                signature[b] = n - signature[a]
                cm_type.append(rng.choice((a, b)))
            orbits.append(members)
        else:
            e = rng.randint(1, max_e)
            first = [fresh() for _ in range(e)]
            second = [fresh() for _ in range(e)]
            for a, b in zip(first, second):
                star[a], star[b] = b, a
                signature[a] = rng.randint(0, n)
                signature[b] = n - signature[a]
                cm_type.append(rng.choice((a, b)))
            orbits += [first, second]
    return validate_datum(
        {
            "case": "A",
            "n": n,
            "p": rng.choice(PRIMES),
            "orbits": orbits,
            "star": star,
            "cm_type": cm_type,
            "signature": signature,
        }
    )


def random_inert_pair_datum(rng: random.Random, max_n: int = 6) -> ShimuraDatum:
    """One orbit ``{tau, taustar}`` swapped by both Frobenius and star, with ``0 < f < n``."""
    n = rng.randint(2, max_n)
    f = rng.randint(1, n - 1)
    return validate_datum(
        {
            "case": "A",
            "n": n,
            "p": rng.choice(PRIMES),
            "orbits": [["tau", "taustar"]],
            "star": {"tau": "taustar", "taustar": "tau"},
            "cm_type": ["tau"],
            "signature": {"tau": f, "taustar": n - f},
        }
    )


def random_component(rng: random.Random, length: int, max_entry: int) -> tuple[int, ...]:
    return tuple(sorted((rng.randint(0, max_entry) for _ in range(length)), reverse=True))


def random_weight(
    rng: random.Random,
    datum: ShimuraDatum,
    max_entry: int = 4,
    support: Iterable[str] | None = None,
) -> Weight:
    """A random dominant weight with non-negative entries supported in ``support``."""
    allowed = set(datum.embeddings if support is None else support)
    return make_weight(
        datum,
        {t: random_component(rng, datum.rank(t), max_entry) for t in datum.embeddings if t in allowed},
    )


def random_good_weight(
    rng: random.Random,
    datum: ShimuraDatum,
    max_entry: int = 4,
    support: Iterable[str] | None = None,
) -> Weight:
    """A random good weight: scalar wherever ``f`` is not the least positive value."""
    allowed = set(datum.embeddings if support is None else support)
    mapping = {}
    for tau in datum.embeddings:
        if tau not in allowed:
            continue
        a = datum.rank(tau)
        if datum.f(tau) == datum.min_positive(tau):
            mapping[tau] = random_component(rng, a, max_entry)
        else:
            mapping[tau] = (rng.randint(0, max_entry),) * a
    return make_weight(datum, mapping)


def random_symmetric_weight(rng: random.Random, datum: ShimuraDatum, max_entry: int = 3) -> Weight:
    """A random symmetric weight with non-negative entries."""
    mapping = {}
    for tau in datum.embeddings:
        if tau not in datum.cm_type:
            continue
        star = datum.conj(tau)
        a, b = datum.rank(tau), datum.rank(star)
        m = min(a, b)
        core = random_component(rng, m, max_entry)
        mapping[tau] = core + (0,) * (a - m)
        if star != tau:
            mapping[star] = core + (0,) * (b - m)
    return make_weight(datum, mapping)


def random_nonsymmetric_weight(rng: random.Random, datum: ShimuraDatum, max_entry: int = 3) -> Weight | None:
    """Perturb a symmetric weight at one conjugate pair; ``None`` if no pair has room."""
    base = random_symmetric_weight(rng, datum, max_entry).as_dict()
    pairs = [t for t in datum.embeddings if t in datum.cm_type and datum.conj(t) != t and datum.rank(t) > 0]
    if not pairs:
        return None
    tau = rng.choice(pairs)
    comp = list(base[tau])
    comp[0] += rng.randint(1, 2)
    base[tau] = tuple(comp)
    return make_weight(datum, base)
