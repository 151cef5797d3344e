"""Exact Schur-functor combinatorics for general linear groups.

Dimensions come from the Weyl product formula.  Products of Schur functions
use Littlewood-Richardson tableau counts.  Decompositions of
``Sym^e(V_a (x) V_b)`` and ``Sym^e(Sym^2 V_a)`` are given in closed form and
cross-checked by :mod:`mutheta.characters`.  Restriction to block-diagonal
Levi subgroups iterates skew LR coefficients.  :func:`brute_force_dim` and
:func:`det_power_check` realise Schur functors as images of Young
symmetrizers on tensor powers and serve as the ground-truth oracle.
"""

from __future__ import annotations

import random
from collections import Counter
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement, permutations, product
from math import comb, gcd

from .errors import BadPartition, BoundsExceeded, NotDominant

Partition = tuple[int, ...]

BRUTE_MAX_RANK = 3
BRUTE_MAX_SIZE = 6


def partition(parts: Sequence[int]) -> Partition:
    """Normalise to a partition: drop trailing zeros, check ordering."""
    parts = tuple(int(x) for x in parts)
    if any(x < 0 for x in parts):
        raise BadPartition(f"negative part in {parts}")
    check_dominant(parts)
    return tuple(x for x in parts if x > 0)


def check_dominant(parts: Sequence[int]) -> None:
    if any(a < b for a, b in zip(parts, parts[1:])):
        raise NotDominant(f"{tuple(parts)} is not non-increasing")


def pad(parts: Sequence[int], length: int) -> tuple[int, ...]:
    if len(parts) > length:
        raise BadPartition(f"{tuple(parts)} has more than {length} parts")
    return tuple(parts) + (0,) * (length - len(parts))


def partitions_of(total: int, max_len: int | None = None, max_part: int | None = None) -> Iterator[Partition]:
    """Partitions of ``total`` in reverse lexicographic order."""
    if max_part is None:
        max_part = total
    if total == 0:
        yield ()
        return
    if max_len == 0:
        return
    for first in range(min(total, max_part), 0, -1):
        rest_len = None if max_len is None else max_len - 1
        for rest in partitions_of(total - first, rest_len, first):
            yield (first,) + rest


def contained(inner: Partition, outer: Partition) -> bool:
    return len(inner) <= len(outer) and all(a <= b for a, b in zip(inner, outer))


def dominates(x: Sequence[int], y: Sequence[int]) -> bool:
    """Dominance order on equal-size sequences: partial sums of x >= those of y."""
    length = max(len(x), len(y))
    x, y = pad(x, length), pad(y, length)
    sx = sy = 0
    for a, b in zip(x, y):
        sx, sy = sx + a, sy + b
        if sx < sy:
            return False
    return sx == sy


def weyl_dim(a: int, weight: Sequence[int]) -> int:
    """Dimension of the irreducible ``GL_a`` module of highest weight ``weight``."""
    weight = tuple(weight)
    if len(weight) != a:
        raise BadPartition(f"weight {weight} has length {len(weight)}, expected {a}")
    check_dominant(weight)
    value = Fraction(1)
    for i in range(a):
        for j in range(i + 1, a):
            value *= Fraction(weight[i] - weight[j] + j - i, j - i)
    assert value.denominator == 1
    return int(value)


# -- Littlewood-Richardson -------------------------------------------------


@lru_cache(maxsize=None)
def lr_coefficient(outer: Partition, inner: Partition, content: Partition) -> int:
    """Number of LR tableaux of shape ``outer / inner`` with the given content.

    Rows are filled top to bottom.  Each row is weakly increasing, each column
    strictly increasing, and the reverse reading word stays a lattice word.
    """
    if sum(outer) != sum(inner) + sum(content) or not contained(inner, outer):
        return 0
    if not contained(content, outer):
        return 0
    inner = pad(inner, len(outer))
    letters = len(content)

    def rows(r: int, above: tuple[int, ...], used: tuple[int, ...]) -> int:
        # above[c] is the letter (1-based) in row r-1 at column c, 0 if none
        if r == len(outer):
            return int(used == content)
        start, width = inner[r], outer[r] - inner[r]
        total = 0
        for fill in combinations_with_replacement(range(1, letters + 1), width):
            counts = list(used)
            ok = True
            for c, letter in enumerate(fill):
                col = start + c
                if col < len(above) and above[col] and letter <= above[col]:
                    ok = False
                    break
            if not ok:
                continue
            # reading right to left: larger letters first
            for letter in reversed(fill):
                counts[letter - 1] += 1
                if counts[letter - 1] > content[letter - 1]:
                    ok = False
                    break
                if letter > 1 and counts[letter - 1] > counts[letter - 2]:
                    ok = False
                    break
            if not ok:
                continue
            row_letters = [0] * start + list(fill)
            total += rows(r + 1, tuple(row_letters), tuple(counts))
        return total

    return rows(0, (), (0,) * letters)


@dataclass(frozen=True)
class SchurExpansion:
    """Formal sum of irreducibles: ``terms`` maps a label to its multiplicity.

    Labels are partitions, weights of ``GL_a``, or tuples of block weights
    for a Levi subgroup.  ``det_shift`` records a determinant twist that was
    removed before computing and added back to the labels.
    """

    terms: tuple[tuple[tuple, int], ...]
    det_shift: int = 0

    @classmethod
    def from_counter(cls, counter: Counter, det_shift: int = 0) -> SchurExpansion:
        items = tuple(sorted(((k, v) for k, v in counter.items() if v), reverse=True))
        return cls(items, det_shift)

    def as_dict(self) -> dict[tuple, int]:
        return dict(self.terms)

    def __getitem__(self, label: tuple) -> int:
        return self.as_dict().get(label, 0)

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def max_multiplicity(self) -> int:
        return max((m for _, m in self.terms), default=0)

    @property
    def has_multiplicity(self) -> bool:
        """True when some constituent occurs more than once."""
        return self.max_multiplicity > 1

    def to_json(self) -> dict:
        return {
            "terms": [{"label": _label_json(k), "mult": m} for k, m in self.terms],
            "det_shift": self.det_shift,
            "multiplicity_free": not self.has_multiplicity,
        }


def _label_json(label):
    if isinstance(label, tuple) and label and isinstance(label[0], tuple):
        return [list(x) for x in label]
    return list(label)


def lr_multiply(mu: Sequence[int], nu: Sequence[int]) -> SchurExpansion:
    """Expansion of the product of Schur functions ``s_mu * s_nu``."""
    mu, nu = partition(mu), partition(nu)
    size = sum(mu) + sum(nu)
    max_len = len(mu) + len(nu)
    max_part = (mu[0] if mu else 0) + (nu[0] if nu else 0)
    out = Counter()
    for lam in partitions_of(size, max_len, max_part):
        if contained(mu, lam) and contained(nu, lam):
            c = lr_coefficient(lam, mu, nu)
            if c:
                out[lam] = c
    return SchurExpansion.from_counter(out)


def lr_skew(outer: Sequence[int], inner: Sequence[int], max_len: int | None = None) -> SchurExpansion:
    """Expansion of the skew Schur function ``s_{outer/inner}``."""
    outer, inner = partition(outer), partition(inner)
    out = Counter()
    if not contained(inner, outer):
        return SchurExpansion.from_counter(out)
    size = sum(outer) - sum(inner)
    for nu in partitions_of(size, max_len, outer[0] if outer else 0):
        if contained(nu, outer):
            c = lr_coefficient(outer, inner, nu)
            if c:
                out[nu] = c
    return SchurExpansion.from_counter(out)


# -- Cauchy and plethysm ---------------------------------------------------


def cauchy_sym_power(e: int, a: int, b: int) -> SchurExpansion:
    """``Sym^e(V_a (x) V_b)`` as a sum of ``S_lam(V_a) (x) S_lam(V_b)``.

    Labels are the common partition ``lam``.
    """
    if e < 0:
        raise BadPartition("degree must be non-negative")
    terms = Counter({lam: 1 for lam in partitions_of(e, min(a, b))})
    total = sum(weyl_dim(a, pad(lam, a)) * weyl_dim(b, pad(lam, b)) for lam in terms)
    assert total == comb(a * b + e - 1, e), (e, a, b)
    return SchurExpansion.from_counter(terms)


def plethysm_sym_sym2(e: int, a: int) -> SchurExpansion:
    """``Sym^e(Sym^2 V_a)``: partitions of ``2e`` with even parts, at most ``a`` rows."""
    if e < 0:
        raise BadPartition("degree must be non-negative")
    terms = Counter({tuple(2 * x for x in lam): 1 for lam in partitions_of(e, a)})
    total = sum(weyl_dim(a, pad(lam, a)) for lam in terms)
    assert total == comb(comb(a + 1, 2) + e - 1, e), (e, a)
    return SchurExpansion.from_counter(terms)


# -- Levi branching --------------------------------------------------------


def _branch_polynomial(lam: Partition, blocks: tuple[int, ...]) -> Counter:
    if not blocks:
        return Counter({(): 1}) if not lam else Counter()
    first, rest = blocks[0], blocks[1:]
    out = Counter()
    if first == 0:
        for tail, m in _branch_polynomial(lam, rest).items():
            out[((),) + tail] += m
        return out
    if not rest:
        if len(lam) <= first:
            out[(pad(lam, first),)] = 1
        return out
    for size in range(sum(lam) + 1):
        for alpha in partitions_of(size, first, lam[0] if lam else 0):
            if not contained(alpha, lam):
                continue
            for nu, c in lr_skew(lam, alpha, sum(rest)).terms:
                for tail, m in _branch_polynomial(nu, rest).items():
                    out[(pad(alpha, first),) + tail] += c * m
    return out


def branch_to_levi(weight: Sequence[int], blocks: Sequence[int]) -> SchurExpansion:
    """Restriction of the ``GL_a`` module ``weight`` to ``GL_{m_1} x ... x GL_{m_s}``.

    ``blocks`` is the ordered tuple ``(m_1, ..., m_s)``; zero-size blocks are
    allowed and carry the empty weight.  Labels are tuples of block weights.
    Negative weights are shifted by a power of the determinant first.
    """
    weight, blocks = tuple(weight), tuple(blocks)
    if any(m < 0 for m in blocks) or sum(blocks) != len(weight):
        raise BadPartition(f"block sizes {blocks} do not partition {len(weight)}")
    check_dominant(weight)
    shift = -min(weight) if weight and min(weight) < 0 else 0
    lam = partition(tuple(x + shift for x in weight))
    raw = _branch_polynomial(lam, blocks)
    out = Counter()
    for label, m in raw.items():
        out[tuple(tuple(x - shift for x in block) for block in label)] = m
    result = SchurExpansion.from_counter(out, det_shift=shift)
    total = sum(m * _levi_dim(label) for label, m in result.terms)
    assert total == weyl_dim(len(weight), weight), (weight, blocks)
    return result


def _levi_dim(label: tuple[tuple[int, ...], ...]) -> int:
    dim = 1
    for block in label:
        dim *= weyl_dim(len(block), block)
    return dim


def canonical_quotient(weight: Sequence[int], blocks: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    """Split ``weight`` into consecutive blocks: the highest Levi constituent."""
    weight = tuple(weight)
    out, i = [], 0
    for m in blocks:
        out.append(weight[i : i + m])
        i += m
    return tuple(out)


# -- Young symmetrizer oracle ----------------------------------------------


def _young_symmetrizer(shape: Partition) -> dict[tuple[int, ...], int]:
    """Column antisymmetrizer times row symmetrizer, as a map permutation -> coefficient.

    Boxes are numbered row by row.  A permutation ``g`` is a tuple with
    ``g[i]`` the image of ``i``.
    """
    d = sum(shape)
    boxes = [(r, c) for r, length in enumerate(shape) for c in range(length)]
    index = {box: i for i, box in enumerate(boxes)}
    rows = [[index[(r, c)] for c in range(length)] for r, length in enumerate(shape)]
    cols = [[index[(r, c)] for r in range(len(shape)) if shape[r] > c] for c in range(shape[0] if shape else 0)]

    def group(blocks):
        perms = [tuple(range(d))]
        for block in blocks:
            new = []
            for g in perms:
                for image in permutations(block):
                    h = list(g)
                    for src, dst in zip(block, image):
                        h[src] = dst
                    new.append(tuple(h))
            perms = new
        return perms

    def sign(g):
        seen, s = set(), 1
        for i in range(d):
            if i in seen:
                continue
            j, length = i, 0
            while j not in seen:
                seen.add(j)
                j = g[j]
                length += 1
            s *= -1 if length % 2 == 0 else 1
        return s

    out: Counter = Counter()
    for q in group(cols):
        sq = sign(q)
        for p in group(rows):
            out[tuple(q[p[i]] for i in range(d))] += sq
    return {g: c for g, c in out.items() if c}


def _check_brute_bounds(a: int, shape: Partition) -> None:
    if a > BRUTE_MAX_RANK or sum(shape) > BRUTE_MAX_SIZE:
        raise BoundsExceeded(
            f"brute force limited to a <= {BRUTE_MAX_RANK}, |weight| <= {BRUTE_MAX_SIZE}"
        )


class _Echelon:
    """Incremental row echelon form over the integers (exact rational rank)."""

    def __init__(self) -> None:
        self.pivots: list[tuple[int, list[int]]] = []

    def add(self, row: Sequence[int]) -> bool:
        """Insert ``row``; return True when it is independent of earlier rows."""
        row = list(row)
        for col, prow in self.pivots:
            if row[col]:
                f, pv = row[col], prow[col]
                row = [x * pv - y * f for x, y in zip(row, prow)]
        lead = next((i for i, x in enumerate(row) if x), None)
        if lead is None:
            return False
        g = gcd(*row)
        self.pivots.append((lead, [x // g for x in row]))
        return True


def _rank(rows: list[list[int]]) -> int:
    """Rank over the rationals of an integer matrix."""
    ech = _Echelon()
    return sum(ech.add(r) for r in rows)


def _symmetrizer_images(a: int, shape: Partition) -> dict[tuple[int, ...], list[dict[tuple[int, ...], int]]]:
    """Images of basis tensors under the symmetrizer, grouped by content.

    The symmetrizer commutes with the diagonal torus, so it preserves each
    weight space of ``V^{(x) d}`` (tensors with a fixed multiset of indices).
    """
    d = sum(shape)
    sym = _young_symmetrizer(shape)
    groups: dict[tuple[int, ...], list] = {}
    for word in product(range(a), repeat=d):
        content = tuple(word.count(i) for i in range(a))
        image: Counter = Counter()
        for g, c in sym.items():
            moved = [0] * d
            for i in range(d):
                moved[g[i]] = word[i]
            image[tuple(moved)] += c
        groups.setdefault(content, []).append({k: v for k, v in image.items() if v})
    return groups


def brute_force_dim(a: int, weight: Sequence[int]) -> int:
    """Rank of the Young symmetrizer on ``(Q^a)^{(x) |weight|}``."""
    check_dominant(tuple(weight))
    shape = partition(weight)
    _check_brute_bounds(a, shape)
    if len(shape) > a:
        return 0
    total = 0
    for images in _symmetrizer_images(a, shape).values():
        keys = sorted({k for img in images for k in img})
        total += _rank([[img.get(k, 0) for k in keys] for img in images])
    return total


def _independent(rows: list[list[int]]) -> list[int]:
    """Indices of a maximal independent subset, chosen greedily in order."""
    ech = _Echelon()
    return [i for i, row in enumerate(rows) if ech.add(row)]


def _int_det(m: list[list[int]]) -> int:
    from .crystal import _det

    return _det(m)


def det_power_check(a: int, weight: Sequence[int], trials: int, seed: int = 0) -> bool:
    """Verify ``det S_weight(g) = det(g)^r`` for random invertible rational ``g``.

    ``r`` is ``|weight| * dim / a``.  The action of ``g`` on the symmetrizer
    image is computed inside each weight space basis.  With a common
    denominator ``q``, ``g = h / q`` and both sides scale by
    ``q^(d * dim)``, so the identity is checked exactly for integer ``h``
    and then for ``g``.
    """
    weight = tuple(weight)
    check_dominant(weight)
    shape = partition(weight)
    _check_brute_bounds(a, shape)
    if len(weight) != a:
        raise BadPartition(f"weight {weight} has length {len(weight)}, expected {a}")
    d = sum(shape)
    dim = weyl_dim(a, weight)
    r = Fraction(d * dim, a)
    if r.denominator != 1:
        return False
    r = int(r)
    # basis of the image: independent symmetrizer images, all weight spaces
    basis: list[dict] = []
    for images in _symmetrizer_images(a, shape).values():
        keys = sorted({k for img in images for k in img})
        for i in _independent([[img.get(k, 0) for k in keys] for img in images]):
            basis.append(images[i])
    assert len(basis) == dim, (len(basis), dim)
    keys = sorted({k for vec in basis for k in vec})
    matrix = [[vec.get(k, 0) for vec in basis] for k in keys]
    pivots = _independent(matrix)
    b_sub = [matrix[i] for i in pivots]
    det_b = _int_det(b_sub)
    rng = random.Random(seed)
    for _ in range(trials):
        q = rng.randint(1, 4)
        while True:
            h = [[rng.randint(-3, 3) for _ in range(a)] for _ in range(a)]
            det_h = _int_det(h)
            if det_h:
                break
        # rows `pivots` of h^{(x) d} applied to the basis vectors
        image_rows = []
        for i in pivots:
            target = keys[i]
            row = []
            for vec in basis:
                s = 0
                for src, c in vec.items():
                    term = c
                    for t, u in zip(target, src):
                        term *= h[t][u]
                        if not term:
                            break
                    s += term
                row.append(s)
            image_rows.append(row)
        det_action = Fraction(_int_det(image_rows), det_b)
        lhs = det_action / Fraction(q) ** (d * dim)
        rhs = (Fraction(det_h) / Fraction(q) ** a) ** r
        if lhs != rhs:
            return False
    return True


# -- admissibility ---------------------------------------------------------


@lru_cache(maxsize=None)
def kostka(shape: Partition, content: tuple[int, ...]) -> int:
    """Number of semistandard tableaux of ``shape`` with the given content."""
    shape = partition(shape)
    if sum(shape) != sum(content):
        return 0
    if not content:
        return int(not shape)
    # remove the largest letter: it occupies a horizontal strip at the end
    last, rest = content[-1], content[:-1]
    total = 0
    for inner in partitions_of(sum(shape) - last, len(shape), shape[0] if shape else 0):
        if contained(inner, shape) and _horizontal_strip(shape, inner):
            total += kostka(inner, rest)
    return total


def _horizontal_strip(outer: Partition, inner: Partition) -> bool:
    inner = pad(inner, len(outer))
    return all(inner[i] >= (outer[i + 1] if i + 1 < len(outer) else 0) for i in range(len(outer)))


def admissible_depth(datum, weight) -> int | None:
    """Least ``e`` with the weight a constituent of ``(V^2)^{(x) e}``, else ``None``.

    In case A the summand at ``tau`` is ``V_tau (x) V_tau*``, whose ``d``-th
    tensor power contains every ``S_alpha (x) S_beta`` with ``alpha, beta``
    partitions of ``d``; so the weight is admissible exactly when it is
    positive and sum-symmetric, at depth ``|weight| / 2``.  In case C the
    summand is ``Sym^2 V_tau``, and ``S_alpha`` occurs in ``(Sym^2)^{(x) d}``
    iff the Kostka number ``K_{alpha, (2^d)}`` is nonzero.
    """
    comps = dict(weight.items())
    if any(x < 0 for c in comps.values() for x in c) or not any(any(c) for c in comps.values()):
        return None
    if datum.case == "A":
        depth = 0
        for tau in datum.cm_type:
            d, d_star = sum(comps[tau]), sum(comps[datum.conj(tau)])
            if d != d_star:
                return None
            depth += d
        return depth
    depth = 0
    for comp in comps.values():
        size = sum(comp)
        if size % 2 or not kostka(partition(comp), (2,) * (size // 2)):
            return None
        depth += size // 2
    return depth


def in_symmetric_power(datum, weight) -> bool:
    """Whether a positive weight occurs in ``(x)_tau Sym^{d_tau}(V^2_tau)``.

    Membership is read off the Cauchy and plethysm decompositions.
    """
    comps = dict(weight.items())
    if datum.case == "A":
        for tau in datum.cm_type:
            x, y = comps[tau], comps[datum.conj(tau)]
            if sum(x) != sum(y):
                return False
            d = sum(x)
            m = min(len(x), len(y))
            if any(x[m:]) or any(y[m:]) or x[:m] != y[:m]:
                return False
            if cauchy_sym_power(d, len(x), len(y))[partition(x)] != 1:
                return False
        return True
    for comp in comps.values():
        size = sum(comp)
        if size % 2 or plethysm_sym_sym2(size // 2, len(comp))[partition(comp)] != 1:
            return False
    return True
