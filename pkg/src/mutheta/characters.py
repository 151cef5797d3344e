"""Brute-force character oracle.

Characters are polynomials in torus variables, stored as ``Counter`` maps
from exponent tuples to coefficients.  A Schur polynomial is expanded by
enumerating semistandard tableaux.  A character is decomposed by repeatedly
peeling off its lexicographically largest monomial, which is always a
highest weight.  Nothing here calls the closed formulas in
:mod:`mutheta.schur`, so the two can be compared.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Sequence
from functools import lru_cache
from itertools import combinations_with_replacement, product

from .schur import partition


@lru_cache(maxsize=None)
def schur_polynomial(shape: tuple[int, ...], nvars: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Monomial expansion of ``s_shape(x_1..x_nvars)`` via semistandard tableaux."""
    shape = partition(shape)
    if len(shape) > nvars:
        return ()
    cells = [(r, c) for r, length in enumerate(shape) for c in range(length)]
    out: Counter = Counter()

    def fill(k: int, grid: dict) -> None:
        if k == len(cells):
            exps = [0] * nvars
            for v in grid.values():
                exps[v] += 1
            out[tuple(exps)] += 1
            return
        r, c = cells[k]
        low = 0
        if c > 0:
            low = max(low, grid[(r, c - 1)])
        if r > 0:
            low = max(low, grid[(r - 1, c)] + 1)
        for v in range(low, nvars):
            grid[(r, c)] = v
            fill(k + 1, grid)
        grid.pop((r, c), None)

    fill(0, {})
    return tuple(sorted(out.items()))


def decompose(character: Counter, nvars: int) -> Counter:
    """Multiplicities of irreducibles in a polynomial ``GL_nvars`` character."""
    remaining = Counter({k: v for k, v in character.items() if v})
    result: Counter = Counter()
    while remaining:
        top = max(remaining)
        mult = remaining[top]
        if mult < 0 or any(a < b for a, b in zip(top, top[1:])):
            raise ValueError(f"not a character: leading term {top} with coefficient {mult}")
        result[partition(top)] += mult
        for mono, c in schur_polynomial(top, nvars):
            remaining[mono] -= mult * c
            if not remaining[mono]:
                del remaining[mono]
    return result


def decompose_pair(character: Counter, a: int, b: int) -> Counter:
    """Decompose a ``GL_a x GL_b`` character; keys are pairs of partitions."""
    remaining = Counter({k: v for k, v in character.items() if v})
    result: Counter = Counter()
    while remaining:
        top = max(remaining)
        mult = remaining[top]
        x, y = top[:a], top[a:]
        if mult < 0 or any(u < v for u, v in zip(x, x[1:])) or any(u < v for u, v in zip(y, y[1:])):
            raise ValueError(f"not a character: leading term {top}")
        result[(partition(x), partition(y))] += mult
        for mx, cx in schur_polynomial(x, a):
            for my, cy in schur_polynomial(y, b):
                mono = mx + my
                remaining[mono] -= mult * cx * cy
                if not remaining[mono]:
                    del remaining[mono]
    return result


def sym_power_tensor_character(e: int, a: int, b: int) -> Counter:
    """Character of ``Sym^e(V_a (x) V_b)`` in variables ``x_1..x_a, y_1..y_b``."""
    pairs = list(product(range(a), range(b)))
    out: Counter = Counter()
    for choice in combinations_with_replacement(pairs, e):
        exps = [0] * (a + b)
        for i, j in choice:
            exps[i] += 1
            exps[a + j] += 1
        out[tuple(exps)] += 1
    return out


def sym_power_sym2_character(e: int, a: int) -> Counter:
    """Character of ``Sym^e(Sym^2 V_a)``."""
    pairs = [(i, j) for i in range(a) for j in range(i, a)]
    out: Counter = Counter()
    for choice in combinations_with_replacement(pairs, e):
        exps = [0] * a
        for i, j in choice:
            exps[i] += 1
            exps[j] += 1
        out[tuple(exps)] += 1
    return out


def product_character(mu: Sequence[int], nu: Sequence[int], nvars: int) -> Counter:
    out: Counter = Counter()
    for m1, c1 in schur_polynomial(partition(mu), nvars):
        for m2, c2 in schur_polynomial(partition(nu), nvars):
            out[tuple(x + y for x, y in zip(m1, m2))] += c1 * c2
    return out
