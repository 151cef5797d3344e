"""Embeddings, Frobenius orbits, star involution and signature.

A datum is the finite combinatorial data attached to a PEL Shimura variety at
an unramified prime: the embeddings of the reflex-type field, grouped into
cycles under composition with Frobenius, the involution ``tau -> tau*``, a CM
type selecting one embedding from each conjugate pair, and the signature
``f``.  Orbit order is data: the ``k``-th member of an orbit is the first
member composed ``k`` times with Frobenius.

Documents are read from TOML or JSON::

    case = "A"
    n = 3
    p = 3
    orbits = [["tau", "taustar"]]
    star = { tau = "taustar", taustar = "tau" }
    cm_type = ["tau"]
    signature = { tau = 2, taustar = 1 }

Validated data is stored in canonical form.  Each orbit is rotated so that
its lexicographically least label comes first, and orbits are sorted by that
label.
"""

from __future__ import annotations

import json
import sys
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - exercised on 3.10 only
    import tomli as tomllib

from .errors import (
    BadCmType,
    DifferentOrbits,
    DuplicateEmbedding,
    ParseError,
    SignatureMismatch,
    StarOrbitMismatch,
    UnknownEmbedding,
)

CASES = ("A", "C")
_KEYS = {"case", "n", "p", "orbits", "star", "cm_type", "signature"}


@dataclass(frozen=True)
class Embedding:
    id: str
    orbit_index: int
    position: int


@dataclass(frozen=True)
class Orbit:
    members: tuple[str, ...]

    @property
    def size(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, tau: object) -> bool:
        return tau in self.members


@dataclass(frozen=True)
class ShimuraDatum:
    """Validated datum.  Build instances with :func:`validate_datum`."""

    case: str
    n: int
    p: int
    orbits: tuple[Orbit, ...]
    star: Mapping[str, str] = field(hash=False)
    cm_type: frozenset[str]
    signature: Mapping[str, int] = field(hash=False)
    _index: dict[str, Embedding] = field(
        init=False, repr=False, compare=False, hash=False, default_factory=dict
    )

    def __post_init__(self) -> None:
        index = {
            tau: Embedding(tau, i, k)
            for i, orbit in enumerate(self.orbits)
            for k, tau in enumerate(orbit.members)
        }
        object.__setattr__(self, "_index", index)

    @property
    def embeddings(self) -> tuple[str, ...]:
        """All labels in canonical order (orbit by orbit)."""
        return tuple(self._index)

    def embedding(self, tau: str) -> Embedding:
        try:
            return self._index[tau]
        except KeyError:
            raise UnknownEmbedding(f"unknown embedding {tau!r}") from None

    def orbit_of(self, tau: str) -> Orbit:
        return self.orbits[self.embedding(tau).orbit_index]

    def f(self, tau: str) -> int:
        self.embedding(tau)
        return self.signature[tau]

    def rank(self, tau: str) -> int:
        """Length ``a_tau`` of a weight component at ``tau``."""
        return self.f(tau)

    def conj(self, tau: str) -> str:
        self.embedding(tau)
        return self.star[tau]

    def orbit_values(self, tau: str) -> tuple[int, ...]:
        """Signature values along the orbit of ``tau``, in orbit order."""
        return tuple(self.signature[t] for t in self.orbit_of(tau))

    def min_positive(self, tau: str) -> int | None:
        """Least positive signature value on the orbit of ``tau``."""
        positive = [v for v in self.orbit_values(tau) if v > 0]
        return min(positive) if positive else None

    def is_conjugate_stable(self, orbit: Orbit) -> bool:
        return self.star[orbit.members[0]] in orbit

    def to_document(self) -> dict[str, Any]:
        """Plain document that :func:`validate_datum` maps back to ``self``."""
        return {
            "case": self.case,
            "n": self.n,
            "p": self.p,
            "orbits": [list(o.members) for o in self.orbits],
            "star": {t: self.star[t] for t in self.embeddings},
            "cm_type": [t for t in self.embeddings if t in self.cm_type],
            "signature": {t: self.signature[t] for t in self.embeddings},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_document(), indent=2, sort_keys=True)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _require_int(raw: Mapping[str, Any], key: str) -> int:
    value = raw.get(key)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{key!r} must be an integer")
    return value


def _canonical_orbits(orbits: list[list[str]]) -> tuple[Orbit, ...]:
    rotated = []
    for members in orbits:
        k = members.index(min(members))
        rotated.append(tuple(members[k:] + members[:k]))
    return tuple(Orbit(m) for m in sorted(rotated))


def validate_datum(raw: Mapping[str, Any]) -> ShimuraDatum:
    """Check a raw document and return the canonical datum.

    Structural problems (wrong types, unknown keys) raise :class:`ParseError`;
    violations of the orbit, star, signature or CM-type constraints raise the
    matching :class:`~mutheta.errors.DatumError` subclass.
    """
    if not isinstance(raw, Mapping):
        raise ParseError("datum document must be a table")
    unknown = set(raw) - _KEYS
    if unknown:
        raise ParseError(f"unknown datum keys: {sorted(unknown)}")
    case = raw.get("case")
    if case not in CASES:
        raise ParseError(f"'case' must be one of {CASES}, got {case!r}")
    n = _require_int(raw, "n")
    p = _require_int(raw, "p")
    if n < 1:
        raise ParseError("'n' must be positive")
    if not _is_prime(p):
        raise ParseError(f"'p' must be prime, got {p}")

    orbits_raw = raw.get("orbits")
    if not isinstance(orbits_raw, list) or not orbits_raw:
        raise ParseError("'orbits' must be a non-empty list of lists")
    seen: set[str] = set()
    orbits: list[list[str]] = []
    for members in orbits_raw:
        if not isinstance(members, list) or not members:
            raise ParseError("each orbit must be a non-empty list")
        for tau in members:
            if not isinstance(tau, str) or not tau:
                raise ParseError("embedding labels must be non-empty strings")
            if tau in seen:
                raise DuplicateEmbedding(f"embedding {tau!r} listed twice")
            seen.add(tau)
        orbits.append(list(members))
    canonical = _canonical_orbits(orbits)
    succ = {}
    for orbit in canonical:
        m = orbit.members
        for k, tau in enumerate(m):
            succ[tau] = m[(k + 1) % len(m)]

    signature = _read_signature(raw, seen, n, case)
    if case == "A":
        star = _read_star(raw, seen)
        for tau in seen:
            if star[tau] == tau:
                raise StarOrbitMismatch(f"star fixes {tau!r}; case A needs a free involution")
            if star[star[tau]] != tau:
                raise StarOrbitMismatch(f"star is not an involution at {tau!r}")
            if star[succ[tau]] != succ[star[tau]]:
                raise StarOrbitMismatch(f"star does not commute with Frobenius at {tau!r}")
            if signature[tau] + signature[star[tau]] != n:
                raise SignatureMismatch(
                    f"f({tau}) + f({star[tau]}) = "
                    f"{signature[tau] + signature[star[tau]]} != n = {n}"
                )
        cm_raw = raw.get("cm_type")
        if not isinstance(cm_raw, list) or not all(isinstance(t, str) for t in cm_raw):
            raise ParseError("'cm_type' must be a list of labels in case A")
        cm_type = frozenset(cm_raw)
        if len(cm_type) != len(cm_raw):
            raise BadCmType("cm_type lists a label twice")
        for tau in cm_type:
            if tau not in seen:
                raise UnknownEmbedding(f"cm_type names unknown embedding {tau!r}")
        for tau in seen:
            if (tau in cm_type) == (star[tau] in cm_type):
                raise BadCmType(f"cm_type must contain exactly one of {tau!r}, {star[tau]!r}")
    else:
        star = {tau: tau for tau in seen}
        if raw.get("star") is not None:
            given = _read_star(raw, seen)
            if given != star:
                raise StarOrbitMismatch("case C requires star to be the identity")
        for tau in seen:
            if signature[tau] != n:
                raise SignatureMismatch(f"case C requires f({tau}) = n = {n}")
        cm_type = frozenset(seen)
        cm_raw = raw.get("cm_type")
        if cm_raw is not None and set(cm_raw) != cm_type:
            raise BadCmType("case C cm_type must contain every embedding")

    order = [t for o in canonical for t in o.members]
    return ShimuraDatum(
        case=case,
        n=n,
        p=p,
        orbits=canonical,
        star={t: star[t] for t in order},
        cm_type=cm_type,
        signature={t: signature[t] for t in order},
    )


def _read_signature(raw: Mapping[str, Any], labels: set[str], n: int, case: str) -> dict[str, int]:
    sig_raw = raw.get("signature")
    if sig_raw is None and case == "C":
        return {tau: n for tau in labels}
    if not isinstance(sig_raw, Mapping):
        raise ParseError("'signature' must be a table of label -> integer")
    for tau, value in sig_raw.items():
        if tau not in labels:
            raise UnknownEmbedding(f"signature names unknown embedding {tau!r}")
        if isinstance(value, bool) or not isinstance(value, int):
            raise ParseError(f"signature value at {tau!r} must be an integer")
        if not 0 <= value <= n:
            raise SignatureMismatch(f"f({tau}) = {value} lies outside [0, {n}]")
    missing = labels - set(sig_raw)
    if missing:
        raise SignatureMismatch(f"signature missing for {sorted(missing)}")
    return dict(sig_raw)


def _read_star(raw: Mapping[str, Any], labels: set[str]) -> dict[str, str]:
    star_raw = raw.get("star")
    if not isinstance(star_raw, Mapping):
        raise ParseError("'star' must be a table of label -> label")
    for tau, image in star_raw.items():
        if not isinstance(image, str):
            raise ParseError("star values must be labels")
        if tau not in labels or image not in labels:
            raise UnknownEmbedding(f"star mentions unknown embedding in {tau!r} -> {image!r}")
    missing = labels - set(star_raw)
    if missing:
        raise StarOrbitMismatch(f"star undefined on {sorted(missing)}")
    return dict(star_raw)


def parse_datum_text(text: str, fmt: str = "toml") -> ShimuraDatum:
    """Parse a TOML (default) or JSON document."""
    try:
        raw = json.loads(text) if fmt == "json" else tomllib.loads(text)
    except (ValueError, tomllib.TOMLDecodeError) as exc:
        raise ParseError(f"cannot parse datum: {exc}") from exc
    return validate_datum(raw)


def load_datum(path: str | Path) -> ShimuraDatum:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return parse_datum_text(text, "json" if path.suffix == ".json" else "toml")


FIXTURES = ("split", "inert21", "inert11", "def", "c")


def fixture_path(name: str) -> Path:
    return Path(__file__).with_name("fixtures") / f"fix_{name}.toml"


def load_fixture(name: str) -> ShimuraDatum:
    """Load one of the bundled data sets by short name (see ``FIXTURES``)."""
    if name not in FIXTURES:
        raise ParseError(f"unknown fixture {name!r}; choose from {FIXTURES}")
    return load_datum(fixture_path(name))


# -- orbit arithmetic ------------------------------------------------------


def sigma_shift(datum: ShimuraDatum, tau: str, j: int) -> str:
    """Return ``tau`` composed ``j`` times with Frobenius."""
    emb = datum.embedding(tau)
    members = datum.orbits[emb.orbit_index].members
    return members[(emb.position + j) % len(members)]


def j_index(datum: ShimuraDatum, tau: str, base: str) -> int:
    """The ``0 <= j < e`` with ``sigma_shift(base, j) == tau``."""
    a, b = datum.embedding(tau), datum.embedding(base)
    if a.orbit_index != b.orbit_index:
        raise DifferentOrbits(f"{tau!r} and {base!r} lie in different orbits")
    return (a.position - b.position) % datum.orbits[a.orbit_index].size


def orbit_base(datum: ShimuraDatum, orbit: Orbit) -> str | None:
    """Base point of an orbit avoiding both 0 and n, else ``None``.

    The base point attains the least signature value on the orbit; among
    ties the earliest member in canonical order wins.
    """
    values = [datum.signature[t] for t in orbit]
    if 0 in values or datum.n in values:
        return None
    low = min(values)
    return orbit.members[values.index(low)]


def upsilon(datum: ShimuraDatum) -> tuple[str, ...]:
    """One base point per orbit with signature values strictly inside (0, n)."""
    return tuple(b for b in (orbit_base(datum, o) for o in datum.orbits) if b is not None)
