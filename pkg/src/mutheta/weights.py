"""Dominant weights attached to a datum and their predicates.

A weight assigns to every embedding ``tau`` a non-increasing integer tuple of
length ``a_tau = f(tau)``.  Weights are always stored with every embedding
present, so equality and hashing ignore how the input was spelled.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import lcm

from .datum import ShimuraDatum, j_index, orbit_base, upsilon
from .errors import (
    LengthMismatch,
    NotDominant,
    NotPositive,
    NotSimple,
    ParseError,
    UnknownEmbedding,
    UpsilonEmpty,
    WeightError,
)
from .schur import weyl_dim

Component = tuple[int, ...]


@dataclass(frozen=True)
class Weight:
    components: tuple[tuple[str, Component], ...]

    def __getitem__(self, tau: str) -> Component:
        for key, comp in self.components:
            if key == tau:
                return comp
        raise UnknownEmbedding(f"unknown embedding {tau!r}")

    def items(self) -> tuple[tuple[str, Component], ...]:
        return self.components

    def as_dict(self) -> dict[str, Component]:
        return dict(self.components)

    def _combine(self, other: Weight, op) -> Weight:
        if [k for k, _ in self.components] != [k for k, _ in other.components]:
            raise WeightError("weights belong to different data")
        out = []
        for (key, x), (_, y) in zip(self.components, other.components):
            width = max(len(x), len(y))
            x = x + (0,) * (width - len(x))
            y = y + (0,) * (width - len(y))
            out.append((key, tuple(op(a, b) for a, b in zip(x, y))))
        return Weight(tuple(out))

    def __add__(self, other: Weight) -> Weight:
        result = self._combine(other, lambda a, b: a + b)
        assert result.is_dominant(), "sum of dominant weights must be dominant"
        return result

    def __sub__(self, other: Weight) -> Weight:
        """Entrywise difference; the result need not be dominant."""
        return self._combine(other, lambda a, b: a - b)

    def scale(self, k: int) -> Weight:
        return Weight(tuple((key, tuple(k * x for x in comp)) for key, comp in self.components))

    def is_dominant(self) -> bool:
        return all(all(a >= b for a, b in zip(c, c[1:])) for _, c in self.components)

    @property
    def size(self) -> int:
        return sum(sum(c) for _, c in self.components)

    def is_zero(self) -> bool:
        return all(x == 0 for _, c in self.components for x in c)

    def support(self) -> tuple[str, ...]:
        return tuple(k for k, c in self.components if any(c))

    def to_json(self) -> dict:
        return {"components": {k: list(c) for k, c in self.components}}

    def key(self) -> str:
        """Canonical JSON text, used as a hash key."""
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    def label(self) -> str:
        """Compact text in the command-line syntax."""
        return ";".join(f"{k}:{','.join(map(str, c))}" for k, c in self.components)


def make_weight(datum: ShimuraDatum, mapping: Mapping[str, Sequence[int]] | None = None) -> Weight:
    """Validate a partial mapping and fill absent embeddings with zeros."""
    mapping = dict(mapping or {})
    for tau in mapping:
        datum.embedding(tau)
    out = []
    for tau in datum.embeddings:
        a = datum.rank(tau)
        comp = tuple(int(x) for x in mapping.get(tau, (0,) * a))
        if len(comp) != a:
            raise LengthMismatch(f"component at {tau!r} has length {len(comp)}, expected {a}")
        if any(x < y for x, y in zip(comp, comp[1:])):
            raise NotDominant(f"component at {tau!r} is not non-increasing: {comp}")
        out.append((tau, comp))
    return Weight(tuple(out))


def zero_weight(datum: ShimuraDatum) -> Weight:
    return make_weight(datum)


def scalar_weight(datum: ShimuraDatum, values: Mapping[str, int]) -> Weight:
    """Scalar weight with value ``values[tau]`` repeated ``a_tau`` times."""
    return make_weight(datum, {t: (k,) * datum.rank(t) for t, k in values.items()})


def parse_weight(datum: ShimuraDatum, text: str) -> Weight:
    """Parse ``"tau:2,2;taustar:5"``; an empty string is the zero weight."""
    mapping: dict[str, tuple[int, ...]] = {}
    for chunk in filter(None, (c.strip() for c in text.split(";"))):
        if ":" not in chunk:
            raise ParseError(f"weight component {chunk!r} lacks ':'")
        tau, _, body = chunk.partition(":")
        tau = tau.strip()
        if tau in mapping:
            raise ParseError(f"component {tau!r} given twice")
        try:
            mapping[tau] = tuple(int(x) for x in body.split(",") if x.strip())
        except ValueError as exc:
            raise ParseError(f"bad integer in {chunk!r}") from exc
    return make_weight(datum, mapping)


def weight_from_json(datum: ShimuraDatum, doc: Mapping) -> Weight:
    comps = doc.get("components") if isinstance(doc, Mapping) else None
    if not isinstance(comps, Mapping):
        raise ParseError("weight document needs a 'components' table")
    for value in comps.values():
        if not isinstance(value, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in value):
            raise ParseError("weight components must be lists of integers")
    return make_weight(datum, comps)


# -- predicates ------------------------------------------------------------


def _scalar(comp: Component) -> bool:
    return len(set(comp)) <= 1


def good_at(datum: ShimuraDatum, tau: str, comp: Component) -> bool:
    """Goodness at one embedding.

    Only embeddings where ``f`` attains the least positive value on the
    orbit may carry non-scalar components.
    """
    return _scalar(comp) or datum.f(tau) == datum.min_positive(tau)


def simple_at(datum: ShimuraDatum, tau: str, comp: Component) -> bool:
    values = datum.orbit_values(tau)
    if 0 in values:
        return not any(comp)
    cut = min(values)
    return not any(comp[cut:])


def symmetric_at(datum: ShimuraDatum, weight: Weight, tau: str) -> bool:
    x, y = weight[tau], weight[datum.conj(tau)]
    m = min(len(x), len(y))
    return x[:m] == y[:m] and not any(x[m:]) and not any(y[m:])


@dataclass(frozen=True)
class WeightFlags:
    scalar: bool
    parallel: bool
    positive: bool
    supported_at: tuple[str, ...]
    symmetric: bool
    sum_symmetric: bool
    good: bool
    simple: bool

    def to_json(self) -> dict:
        return {
            "scalar": self.scalar,
            "parallel": self.parallel,
            "positive": self.positive,
            "supported_at": list(self.supported_at),
            "symmetric": self.symmetric,
            "sum_symmetric": self.sum_symmetric,
            "good": self.good,
            "simple": self.simple,
        }


def is_positive(weight: Weight) -> bool:
    return not weight.is_zero() and all(x >= 0 for _, c in weight.items() for x in c)


def is_symmetric(datum: ShimuraDatum, weight: Weight) -> bool:
    return all(symmetric_at(datum, weight, t) for t in datum.embeddings if t in datum.cm_type)


def is_good(datum: ShimuraDatum, weight: Weight) -> bool:
    return all(good_at(datum, t, c) for t, c in weight.items())


def is_simple(datum: ShimuraDatum, weight: Weight) -> bool:
    return all(simple_at(datum, t, c) for t, c in weight.items())


def is_parallel(weight: Weight) -> bool:
    """Components agree wherever both are defined.

    Components of different lengths are compared on their common indices,
    so the scalar weight ``(k, ..., k)`` everywhere counts as parallel.
    """
    comps = [c for _, c in weight.items()]
    for x in comps:
        for y in comps:
            m = min(len(x), len(y))
            if x[:m] != y[:m]:
                return False
    return True


def supported_in(weight: Weight, sigma: Iterable[str]) -> bool:
    return set(weight.support()) <= set(sigma)


def classify(datum: ShimuraDatum, weight: Weight) -> WeightFlags:
    positive = is_positive(weight)
    sum_symmetric = positive and all(
        sum(weight[t]) == sum(weight[datum.conj(t)]) for t in datum.cm_type
    )
    return WeightFlags(
        scalar=all(_scalar(c) for _, c in weight.items()),
        parallel=is_parallel(weight),
        positive=positive,
        supported_at=weight.support(),
        symmetric=is_symmetric(datum, weight),
        sum_symmetric=sum_symmetric,
        good=is_good(datum, weight),
        simple=is_simple(datum, weight),
    )


# -- scalars ---------------------------------------------------------------


@dataclass(frozen=True)
class ComponentStats:
    size: int
    twist_norm: int
    det_power: int


@dataclass(frozen=True)
class WeightStats:
    per_embedding: tuple[tuple[str, ComponentStats], ...]

    @property
    def size(self) -> int:
        return sum(s.size for _, s in self.per_embedding)

    def twist_norm(self) -> dict[str, int]:
        return {t: s.twist_norm for t, s in self.per_embedding}

    def det_power(self) -> dict[str, int]:
        return {t: s.det_power for t, s in self.per_embedding}

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "components": {
                t: {"size": s.size, "twist_norm": s.twist_norm, "det_power": s.det_power}
                for t, s in self.per_embedding
            },
        }


def component_stats(comp: Component) -> ComponentStats:
    """Size, twist norm and determinant power of one ``GL_a`` component."""
    if any(x < 0 for x in comp):
        raise NotPositive(f"component {comp} has a negative entry")
    a = len(comp)
    size = sum(comp)
    if a == 0:
        return ComponentStats(0, 0, 0)
    norm = size // a if _scalar(comp) else size
    r = Fraction(size * weyl_dim(a, comp), a)
    assert r.denominator == 1
    return ComponentStats(size, norm, int(r))


def weight_stats(datum: ShimuraDatum, weight: Weight) -> WeightStats:
    return WeightStats(tuple((t, component_stats(c)) for t, c in weight.items()))


# -- Hasse weights ---------------------------------------------------------


def hasse_value(datum: ShimuraDatum, tau: str) -> int:
    return datum.p ** datum.orbit_of(tau).size - 1


def hasse_weight(datum: ShimuraDatum, sigma: Iterable[str]) -> Weight:
    """Scalar weight ``p^{e_tau} - 1`` at each ``tau`` in ``sigma``."""
    return scalar_weight(datum, {t: hasse_value(datum, t) for t in sigma})


def hasse_combination(datum: ShimuraDatum, exponents: Mapping[str, int]) -> Weight:
    """Scalar weight ``b_tau (p^{e_tau} - 1)`` for non-negative ``b_tau``."""
    if any(b < 0 for b in exponents.values()):
        raise NotPositive("Hasse exponents must be non-negative")
    return scalar_weight(datum, {t: b * hasse_value(datum, t) for t, b in exponents.items()})


@dataclass(frozen=True)
class HasseConstants:
    m0: int
    per_embedding: tuple[tuple[str, int], ...]

    def to_json(self) -> dict:
        return {"m0": self.m0, "m": dict(self.per_embedding)}


def hasse_constants(datum: ShimuraDatum) -> HasseConstants:
    values = {t: hasse_value(datum, t) for t in datum.embeddings}
    m0 = lcm(*values.values())
    return HasseConstants(m0, tuple((t, m0 // v) for t, v in values.items()))


# -- delta and twists ------------------------------------------------------


def delta(datum: ShimuraDatum, tau: str) -> Weight:
    """Weight of the rank-two-tensor summand at ``tau``.

    In case A this is ``(1, 0, ..., 0)`` at ``tau`` and at ``tau*`` and
    needs ``tau`` in the CM type and ``0 < f(tau) < n``.  In case C it is
    ``(2, 0, ..., 0)`` at ``tau``.
    """
    a = datum.rank(tau)
    if datum.case == "C":
        return make_weight(datum, {tau: (2,) + (0,) * (a - 1)})
    if tau not in datum.cm_type:
        raise WeightError(f"{tau!r} is not in the CM type")
    b = datum.rank(datum.conj(tau))
    if a == 0 or b == 0:
        raise WeightError(f"delta({tau}) needs 0 < f({tau}) < n")
    return make_weight(datum, {tau: (1,) + (0,) * (a - 1), datum.conj(tau): (1,) + (0,) * (b - 1)})


def delta_defined(datum: ShimuraDatum, tau: str) -> bool:
    if datum.case == "C":
        return True
    return tau in datum.cm_type and 0 < datum.f(tau) < datum.n


def upsilon_twist(datum: ShimuraDatum, weight: Weight) -> Weight:
    """Collapse a simple weight onto the orbit base points with p-power weights.

    The component at a base point ``b`` of an orbit of size ``e`` is the
    entrywise sum over ``j < e`` of ``p^j`` times the first ``f(b)`` entries
    of the component at ``b`` shifted ``j`` times by Frobenius.
    """
    if not is_simple(datum, weight):
        raise NotSimple("the twist is only defined for simple weights")
    out: dict[str, Component] = {}
    for orbit in datum.orbits:
        if not any(any(weight[t]) for t in orbit):
            continue
        base = orbit_base(datum, orbit)
        if base is None:
            raise UpsilonEmpty(f"orbit {orbit.members} has no base point avoiding 0 and n")
        width = datum.f(base)
        total = [0] * width
        for tau in orbit:
            j = j_index(datum, tau, base)
            comp = weight[tau]
            assert not any(comp[width:])
            for i in range(width):
                total[i] += datum.p**j * comp[i]
        out[base] = tuple(total)
    result = make_weight(datum, out)
    assert set(result.support()) <= set(upsilon(datum))
    return result


def delta_twist(datum: ShimuraDatum, tau: str) -> Weight:
    d = delta(datum, tau)
    for t in d.support():
        values = datum.orbit_values(t)
        if 0 in values or datum.n in values:
            raise UpsilonEmpty(f"orbit of {t!r} meets 0 or n")
    return upsilon_twist(datum, d)


# -- existence criteria ----------------------------------------------------


def all_weights_good(datum: ShimuraDatum) -> bool:
    """True iff on every orbit ``f`` takes at most one value strictly between 0 and n."""
    if datum.case == "C":
        return True
    for orbit in datum.orbits:
        interior = {datum.signature[t] for t in orbit} - {0, datum.n}
        if len(interior) > 1:
            return False
    return True


def all_deltas_good(datum: ShimuraDatum, sigma: Iterable[str] | None = None) -> bool:
    """Goodness of every defined ``delta(tau)`` with ``tau, tau*`` in ``sigma``."""
    sigma = set(datum.embeddings if sigma is None else sigma)
    for tau in datum.embeddings:
        if tau in datum.cm_type and tau in sigma and datum.conj(tau) in sigma and delta_defined(datum, tau):
            if not is_good(datum, delta(datum, tau)):
                return False
    return True


def every_weight_good(datum: ShimuraDatum) -> bool:
    """Goodness of every fundamental weight ``(1,..,1,0,..,0)`` at every embedding."""
    for tau in datum.embeddings:
        a = datum.rank(tau)
        for k in range(1, a):
            comp = (1,) * k + (0,) * (a - k)
            if not good_at(datum, tau, comp):
                return False
    return True


@dataclass(frozen=True)
class Existence:
    exists: bool
    witness: Weight | None


def _symmetric_candidates(datum: ShimuraDatum, tau: str, height: int) -> Iterable[Weight]:
    a, b = datum.rank(tau), datum.rank(datum.conj(tau))
    m = min(a, b)
    for parts in product(range(height, -1, -1), repeat=m):
        if any(x < y for x, y in zip(parts, parts[1:])) or not any(parts):
            continue
        yield make_weight(
            datum,
            {tau: parts + (0,) * (a - m), datum.conj(tau): parts + (0,) * (b - m)},
        )


def good_symmetric_exists(datum: ShimuraDatum, height: int = 1) -> Existence:
    """Search for a nonzero good symmetric weight.

    Symmetry and goodness are checked pair by pair, so it suffices to search
    weights supported on one conjugate pair.  Rescaling a witness to entries
    in {0, 1} keeps it good and symmetric, so height 1 already decides
    existence; larger heights only widen the candidate pool.
    """
    if datum.case == "C":
        tau = datum.embeddings[0]
        return Existence(True, delta(datum, tau))
    for tau in datum.embeddings:
        if tau not in datum.cm_type:
            continue
        for cand in _symmetric_candidates(datum, tau, height):
            if is_good(datum, cand) and is_symmetric(datum, cand):
                return Existence(True, cand)
    return Existence(False, None)
