"""Mu-ordinary Newton polygons and slope bookkeeping.

For an orbit ``o`` of size ``e`` the ``j``-th slope is
``#{tau in o : f(tau) > n - j} / e`` for ``j = 1..n``.  All arithmetic is
exact; slopes are :class:`fractions.Fraction` values.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction
from itertools import groupby

from .datum import Orbit, ShimuraDatum
from .errors import CaseCUnsupported


@dataclass(frozen=True)
class NewtonPolygon:
    slopes: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if any(a > b for a, b in zip(self.slopes, self.slopes[1:])):
            raise ValueError("slopes must be non-decreasing")

    @property
    def is_ordinary(self) -> bool:
        return all(s in (0, 1) for s in self.slopes)

    def breakpoints(self) -> tuple[tuple[int, Fraction], ...]:
        """Vertices ``(x, y)`` of the polygon, starting at the origin.

        Only points where the slope changes (and the two ends) are listed.
        """
        points = [(0, Fraction(0))]
        x, y = 0, Fraction(0)
        for slope, run in groupby(self.slopes):
            k = len(list(run))
            x, y = x + k, y + k * slope
            points.append((x, y))
        return tuple(points)

    def classes(self) -> tuple[tuple[Fraction, int], ...]:
        """Distinct slopes with multiplicities, ascending."""
        return tuple((s, len(list(g))) for s, g in groupby(self.slopes))

    def to_json(self) -> list[str]:
        return [str(s) for s in self.slopes]


def _require_case_a(datum: ShimuraDatum) -> None:
    if datum.case != "A":
        raise CaseCUnsupported("slope data is only modelled for unitary (case A) data")


def slope_counts(datum: ShimuraDatum, tau: str) -> tuple[int, ...]:
    """Integer counts ``#{tau' in orbit(tau) : f(tau') > n - i}``, ``i = 1..n``."""
    _require_case_a(datum)
    values = datum.orbit_values(tau)
    n = datum.n
    return tuple(sum(1 for v in values if v > n - i) for i in range(1, n + 1))


def orbit_polygon(datum: ShimuraDatum, orbit: Orbit) -> NewtonPolygon:
    _require_case_a(datum)
    counts = slope_counts(datum, orbit.members[0])
    return NewtonPolygon(tuple(Fraction(c, orbit.size) for c in counts))


def amalgamate(polygons: Iterable[NewtonPolygon]) -> NewtonPolygon:
    return NewtonPolygon(tuple(sorted(s for poly in polygons for s in poly.slopes)))


def datum_polygon(datum: ShimuraDatum) -> NewtonPolygon:
    return amalgamate(orbit_polygon(datum, o) for o in datum.orbits)


def is_ordinary(datum: ShimuraDatum) -> bool:
    return all(orbit_polygon(datum, o).is_ordinary for o in datum.orbits)


def filtration_ranks(datum: ShimuraDatum, tau: str) -> tuple[int, ...]:
    """Ranks of the slope-graded pieces of the Hodge bundle at ``tau``.

    One entry per distinct slope of the orbit polygon, ascending; entry ``t``
    counts the indices ``j`` in slope class ``t`` with ``f(tau) > n - j``.
    The entries always sum to ``f(tau)``; when ``f(tau) = 0`` every entry is 0.
    """
    poly = orbit_polygon(datum, datum.orbit_of(tau))
    n, f = datum.n, datum.f(tau)
    ranks = []
    j = 1
    for _, mult in poly.classes():
        ranks.append(sum(1 for i in range(j, j + mult) if f > n - i))
        j += mult
    return tuple(ranks)
