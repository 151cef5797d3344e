"""Cyclotomic-twist bookkeeping along chains of theta operators.

A :class:`TwistState` records a weight together with the power of the
cyclotomic character by which the attached Galois representation has been
twisted.  Theta-type operators raising by a symmetric ``λ`` add ``|λ|/2`` to
that power; Hasse multiplications change only the weight.  Every step is
only meaningful when the operator output is nonzero, which cannot be decided
at the level of weights, so every edge carries that caveat.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from itertools import product

from .datum import ShimuraDatum, upsilon
from .errors import NotApplicable, NotSymmetric, PreconditionViolated
from .theta import (
    THETA_KINDS,
    OperatorDescriptor,
    OpKind,
    apply,
    applicable,
    hasse_mult,
    node_budget_from_env,
    theta,
    theta_basic,
    theta_tilde,
)
from .weights import Weight, delta, delta_defined, is_simple, is_symmetric, make_weight

NONVANISHING_NOTE = "conditional on nonvanishing"


@dataclass(frozen=True)
class TwistState:
    weight: Weight
    cyclo_exponent: int = 0
    trail: tuple[str, ...] = ()
    increments: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        assert self.cyclo_exponent == sum(self.increments)
        assert len(self.trail) == len(self.increments)

    def to_json(self) -> dict:
        return {
            "weight": self.weight.to_json(),
            "exponent": self.cyclo_exponent,
            "trail": list(self.trail),
            "note": NONVANISHING_NOTE,
        }


def hecke_exponent(datum: ShimuraDatum, lam: Weight) -> int:
    """Power of the similitude factor picked up when a Hecke operator commutes past ``λ``."""
    if not is_symmetric(datum, lam):
        raise NotSymmetric(f"lambda = {lam.label()} is not symmetric")
    size = lam.size
    assert size % 2 == 0, "a symmetric weight has even size"
    return size // 2


def _raised_by(datum: ShimuraDatum, op: OperatorDescriptor) -> Weight:
    if op.kind in (OpKind.THETA_BASIC, OpKind.THETA_TILDE_BASIC):
        return delta(datum, op.tau_bar)
    return op.lam


def galois_edge(datum: ShimuraDatum, state: TwistState, op: OperatorDescriptor) -> TwistState:
    """Follow one operator; raises :class:`NotApplicable` for operators with no twist statement."""
    if op.kind is OpKind.HASSE_MULT:
        increment = 0
    elif op.kind in THETA_KINDS:
        increment = hecke_exponent(datum, _raised_by(datum, op))
    else:
        raise NotApplicable(f"no Galois edge for {op.kind.value}")
    target = apply(datum, op, state.weight).target
    return TwistState(
        target,
        state.cyclo_exponent + increment,
        state.trail + (op.label(),),
        state.increments + (increment,),
    )


def symmetric_lambdas(datum: ShimuraDatum, height: int) -> list[Weight]:
    """Positive symmetric weights on a single conjugate pair with entries at most ``height``."""
    out = []
    for tau in datum.embeddings:
        if tau not in datum.cm_type:
            continue
        star = datum.conj(tau)
        a, b = datum.rank(tau), datum.rank(star)
        m = min(a, b)
        for parts in product(range(height, -1, -1), repeat=m):
            if any(x < y for x, y in zip(parts, parts[1:])) or not any(parts):
                continue
            mapping = {tau: parts + (0,) * (a - m)}
            if star != tau:
                mapping[star] = parts + (0,) * (b - m)
            out.append(make_weight(datum, mapping))
    return out


def default_generators(datum: ShimuraDatum, height: int = 1) -> list[OperatorDescriptor]:
    """Theta, tilde-theta and Hasse generators with ``Σ`` the set of all embeddings."""
    sigma = datum.embeddings
    gens = [hasse_mult(datum, sigma)]
    gens += [theta_basic(datum, sigma, t) for t in sigma if t in datum.cm_type and delta_defined(datum, t)]
    lams = symmetric_lambdas(datum, height)
    gens += [theta(datum, sigma, lam) for lam in lams]
    if upsilon(datum):
        gens += [theta_tilde(datum, sigma, lam) for lam in lams if is_simple(datum, lam)]
    return gens


@dataclass(frozen=True)
class WeightOrbit:
    states: tuple[TwistState, ...]
    edges: tuple[tuple[int, int, str], ...]
    truncated: bool = False

    def to_json(self) -> dict:
        return {
            "states": [s.to_json() for s in self.states],
            "edges": [{"source": s, "target": t, "label": lab, "note": NONVANISHING_NOTE} for s, t, lab in self.edges],
            "truncated": self.truncated,
        }


def modular_weight_orbit(
    datum: ShimuraDatum,
    kappa0: Weight,
    depth: int,
    generators: Sequence[OperatorDescriptor] | None = None,
    height: int = 1,
    node_budget: int | None = None,
) -> WeightOrbit:
    """Breadth-first closure of ``(κ0, 0)`` under the generators, deduplicated on (weight, exponent)."""
    if depth < 0:
        raise PreconditionViolated("depth must be non-negative")
    gens = default_generators(datum, height) if generators is None else list(generators)
    budget = node_budget_from_env() if node_budget is None else node_budget
    start = TwistState(kappa0)
    index = {(kappa0.key(), 0): 0}
    states = [start]
    edges: list[tuple[int, int, str]] = []
    frontier = [0]
    truncated = False
    for _ in range(depth):
        nxt = []
        for i in frontier:
            state = states[i]
            for op in gens:
                if op.kind not in THETA_KINDS and op.kind is not OpKind.HASSE_MULT:
                    continue
                if not applicable(datum, op, state.weight):
                    continue
                new = galois_edge(datum, state, op)
                key = (new.weight.key(), new.cyclo_exponent)
                if key not in index:
                    if len(states) >= budget:
                        truncated = True
                        continue
                    index[key] = len(states)
                    states.append(new)
                    nxt.append(index[key])
                edges.append((i, index[key], op.label()))
        frontier = nxt
    return WeightOrbit(tuple(states), tuple(edges), truncated)
