"""The standard mu-ordinary F-crystal of an orbit and its p-adic valuations.

The crystal of an orbit ``o`` has basis ``e_{j,tau}`` (``j = 1..n``,
``tau in o``) and an exponent matrix ``eps[tau][j] = 1`` iff
``f(tau) > n - j``.  Frobenius sends ``e_{j,tau}`` to
``p^eps[tau][j] e_{j,tau sigma}`` and Verschiebung, ``p`` times its inverse,
sends ``e_{j,tau sigma}`` to ``p^(1 - eps[tau][j]) e_{j,tau}``.  Hence the
kernel of Frobenius mod ``p`` at ``tau`` (the Hodge submodule) is spanned by
the ``e_{j,tau}`` with ``eps[tau][j] = 1`` and has rank ``f(tau)``.

Everything is computed from integer sums of the exponent matrix.  A dense
route through explicit integer matrices is kept for cross-checking.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, groupby

from .datum import Orbit, ShimuraDatum, sigma_shift
from .errors import CaseCUnsupported, PreconditionViolated, ZeroSignature
from .polygon import slope_counts


@dataclass(frozen=True)
class StandardCrystal:
    orbit: Orbit
    epsilon: tuple[tuple[int, ...], ...]
    p: int
    n: int

    def row(self, tau: str) -> tuple[int, ...]:
        return self.epsilon[self.orbit.members.index(tau)]

    def cycle_valuations(self) -> tuple[int, ...]:
        """Valuation of ``F^e`` on each basis cycle ``j``, in index order."""
        return tuple(sum(col) for col in zip(*self.epsilon))

    def phi_valuations(self, tau: str) -> tuple[int, ...]:
        """Sorted valuations of ``phi_tau = F^e`` on the basis at ``tau``.

        Every basis cycle passes through each member once, so the answer does
        not depend on the starting member.
        """
        if tau not in self.orbit:
            raise PreconditionViolated(f"{tau!r} is not in this orbit")
        return tuple(sorted(self.cycle_valuations()))

    def hodge_basis(self, tau: str) -> frozenset[int]:
        """Indices ``j`` (1-based) spanning the Hodge submodule at ``tau``."""
        return frozenset(j + 1 for j, eps in enumerate(self.row(tau)) if eps)

    def to_json(self) -> dict:
        return {
            "orbit": list(self.orbit.members),
            "epsilon": [list(r) for r in self.epsilon],
            "p": self.p,
        }


def standard_crystal(datum: ShimuraDatum, orbit: Orbit) -> StandardCrystal:
    if datum.case != "A":
        raise CaseCUnsupported("the standard crystal is only modelled in case A")
    n = datum.n
    eps = tuple(
        tuple(1 if datum.signature[tau] > n - j else 0 for j in range(1, n + 1))
        for tau in orbit
    )
    return StandardCrystal(orbit, eps, datum.p, n)


def crystal_of(datum: ShimuraDatum, tau: str) -> StandardCrystal:
    return standard_crystal(datum, datum.orbit_of(tau))


def phi_valuations(datum: ShimuraDatum, tau: str) -> tuple[int, ...]:
    return crystal_of(datum, tau).phi_valuations(tau)


def c_exponent(datum: ShimuraDatum, tau: str) -> int:
    """Exact p-adic valuation of ``wedge^{f(tau)} phi`` at ``tau*``.

    Computed as the least total valuation over all ``f(tau)``-subsets of the
    Frobenius valuations at ``tau*``.
    """
    k = datum.f(tau)
    if k == 0:
        raise ZeroSignature(f"f({tau}) = 0")
    vals = phi_valuations(datum, datum.conj(tau))
    return min(sum(s) for s in combinations(vals, k))


def c_exponent_slope_sum(datum: ShimuraDatum, tau: str) -> int:
    """Sum of the first ``f(tau)`` slope counts at ``tau*``."""
    k = datum.f(tau)
    if k == 0:
        raise ZeroSignature(f"f({tau}) = 0")
    return sum(slope_counts(datum, datum.conj(tau))[:k])


def c_exponent_orbit_literal(datum: ShimuraDatum, tau: str) -> int:
    """Orbit-sum variant: total excess ``f(tau') - f(tau)`` over the orbit of ``tau``.

    This variant does not agree with :func:`c_exponent` in general.  The two
    agree once ``tau`` is replaced by ``tau*`` on the right-hand side (see
    :func:`c_exponent_orbit_corrected`).  It is kept so discrepancies can be
    reported.
    """
    if datum.case != "A":
        raise CaseCUnsupported("orbit sums are only modelled in case A")
    ft = datum.f(tau)
    return sum(v - ft for v in datum.orbit_values(tau) if v > ft)


def c_exponent_orbit_corrected(datum: ShimuraDatum, tau: str) -> int:
    """Excess of ``f`` over ``f(tau*)`` summed over the orbit of ``tau*``."""
    return c_exponent_orbit_literal(datum, datum.conj(tau))


def a_exponent(datum: ShimuraDatum, tau: str) -> int:
    """Number of members of the orbit of ``tau*`` with ``f = n``.

    Requires ``f(tau)`` to be the least positive signature value on its orbit.
    """
    low = datum.min_positive(tau)
    if low is None or datum.f(tau) != low:
        raise PreconditionViolated(
            f"f({tau}) = {datum.f(tau)} is not the least positive value on its orbit"
        )
    if datum.case != "A":
        raise CaseCUnsupported("Hasse exponents are only modelled in case A")
    count = sum(1 for v in datum.orbit_values(datum.conj(tau)) if v == datum.n)
    smallest = phi_valuations(datum, datum.conj(tau))[0]
    assert count == smallest, (count, smallest)
    return count


def slope_graded_ranks(datum: ShimuraDatum, tau: str) -> tuple[int, ...]:
    """Hodge rank at ``tau`` inside each Frobenius-valuation class.

    Classes are the distinct values of the ``F^e`` cycle valuations,
    ascending; each entry counts the basis vectors of the class lying in the
    Hodge submodule at ``tau``.
    """
    crystal = crystal_of(datum, tau)
    cycles = crystal.cycle_valuations()
    hodge = crystal.hodge_basis(tau)
    by_class = sorted(range(1, crystal.n + 1), key=lambda j: cycles[j - 1])
    return tuple(
        sum(1 for j in group if j in hodge)
        for _, group in groupby(by_class, key=lambda j: cycles[j - 1])
    )


@dataclass(frozen=True)
class VerschiebungImage:
    """Mod-p image of the ``j``-th Verschiebung power landing at ``base``."""

    base: str
    j: int
    image: frozenset[int]
    hodge: frozenset[int]
    top_slope: frozenset[int]

    @property
    def contained(self) -> bool:
        return self.image <= self.hodge

    @property
    def top_slope_isomorphic(self) -> bool:
        """Whether the slope-1 part of the Hodge module maps onto the target."""
        return self.top_slope <= self.image and self.top_slope == self.hodge


def verschiebung_image(datum: ShimuraDatum, base: str, j: int) -> VerschiebungImage:
    """Basis indices surviving mod p under ``V^j`` from ``base sigma^j`` to ``base``.

    A basis vector ``e_i`` survives when every step has valuation 0, i.e.
    ``eps[base sigma^k][i] = 1`` for ``k = 0..j-1``.
    """
    crystal = crystal_of(datum, base)
    steps = [crystal.row(sigma_shift(datum, base, k)) for k in range(j)]
    image = frozenset(i + 1 for i in range(crystal.n) if all(r[i] for r in steps))
    top = frozenset(
        i + 1 for i in range(crystal.n) if all(r[i] for r in crystal.epsilon)
    )
    return VerschiebungImage(base, j, image, crystal.hodge_basis(base), top)


def verschiebung_image_check(datum: ShimuraDatum, base: str, j: int) -> bool:
    """Check that ``V^j`` lands in the Hodge submodule at ``base``.

    When the orbit avoids 0, also check that the slope-1 graded piece of
    the source maps isomorphically onto the Hodge submodule.  An etale orbit
    passes vacuously.
    """
    orbit = datum.orbit_of(base)
    if not 1 <= j <= orbit.size:
        raise PreconditionViolated(f"j = {j} outside 1..{orbit.size}")
    low = datum.min_positive(base)
    if low is None:
        return True
    if datum.f(base) != low:
        raise PreconditionViolated(
            f"f({base}) = {datum.f(base)} is not the least positive value on its orbit"
        )
    result = verschiebung_image(datum, base, j)
    if not result.contained:
        return False
    if 0 in datum.orbit_values(base):
        return True
    return result.top_slope_isomorphic


# -- dense redundancy route ------------------------------------------------


def _random_unimodular(n: int, rng: random.Random) -> tuple[list[list[int]], list[list[int]]]:
    """Random integer matrix of determinant 1 with its integer inverse."""
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    inv = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        a, b = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if a == b:
            continue
        c = rng.randint(-3, 3)
        # row_a += c * row_b on m; col_b -= c * col_a on the inverse
        m[a] = [x + c * y for x, y in zip(m[a], m[b])]
        for row in inv:
            row[b] -= c * row[a]
    return m, inv


def _matmul(x: list[list[int]], y: list[list[int]]) -> list[list[int]]:
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*y)] for row in x]


def _det(m: list[list[int]]) -> int:
    """Integer determinant by fraction-free (Bareiss) elimination."""
    a = [row[:] for row in m]
    k = len(a)
    sign, prev = 1, 1
    for i in range(k - 1):
        if a[i][i] == 0:
            swap = next((r for r in range(i + 1, k) if a[r][i] != 0), None)
            if swap is None:
                return 0
            a[i], a[swap] = a[swap], a[i]
            sign = -sign
        for r in range(i + 1, k):
            for c in range(i + 1, k):
                a[r][c] = (a[r][c] * a[i][i] - a[r][i] * a[i][c]) // prev
        prev = a[i][i]
    return sign * a[k - 1][k - 1] if k else 1


def _valuation(x: int, p: int) -> int | None:
    if x == 0:
        return None
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def dense_phi(datum: ShimuraDatum, tau: str, rng: random.Random) -> list[list[int]]:
    """Integer matrix of ``F^e`` at ``tau`` in a randomly chosen lattice basis.

    Each Frobenius step is written in independent random bases of the
    source and target lattices, so the product is no longer diagonal.
    """
    crystal = crystal_of(datum, tau)
    n, p = crystal.n, crystal.p
    e = crystal.orbit.size
    changes = [_random_unimodular(n, rng) for _ in range(e)]
    start = crystal.orbit.members.index(tau)
    result = [[int(i == j) for j in range(n)] for i in range(n)]
    for k in range(e):
        src = (start + k) % e
        diag = [[p ** crystal.epsilon[src][i] if i == j else 0 for j in range(n)] for i in range(n)]
        b_src_inv = changes[src][1]
        b_dst = changes[(src + 1) % e][0]
        step = _matmul(b_dst, _matmul(diag, b_src_inv))
        result = _matmul(step, result)
    return result


def dense_c_exponent(datum: ShimuraDatum, tau: str, seed: int = 0) -> int:
    """``c_exponent`` recomputed as the p-adic content of an exterior power.

    The content of ``wedge^k M`` is the least valuation among the ``k x k``
    minors of ``M``.  Intended for ``n <= 4``.
    """
    k = datum.f(tau)
    if k == 0:
        raise ZeroSignature(f"f({tau}) = 0")
    m = dense_phi(datum, datum.conj(tau), random.Random(seed))
    n = len(m)
    best = None
    for rows in combinations(range(n), k):
        for cols in combinations(range(n), k):
            v = _valuation(_det([[m[r][c] for c in cols] for r in rows]), datum.p)
            if v is not None and (best is None or v < best):
                best = v
    assert best is not None
    return best
