"""Weight-level calculus of the theta, Hasse and projector operators.

Each operator is described symbolically by an :class:`OperatorDescriptor`.
:func:`applicable` evaluates the hypotheses under which the operator exists
and :func:`apply` returns the weight it raises to, split into the pieces
that were added.  Nothing here touches sections; the projector's vanishing
after a Maass-Shimura step is carried as a flag on the result.
"""

from __future__ import annotations

import json
import os
from collections.abc import Iterable, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

from .datum import ShimuraDatum, orbit_base, upsilon
from .errors import (
    DepthLimit,
    NotApplicable,
    NotSupported,
    NotSymmetric,
    PreconditionViolated,
    UpsilonEmpty,
    WeightError,
)
from .schur import admissible_depth
from .weights import (
    Weight,
    delta,
    delta_defined,
    delta_twist,
    hasse_combination,
    hasse_weight,
    is_good,
    is_positive,
    is_simple,
    is_symmetric,
    supported_in,
    upsilon_twist,
    weight_stats,
    zero_weight,
)

DEFAULT_NODE_BUDGET = 10_000


class OpKind(str, Enum):
    MAASS_SHIMURA = "MaassShimura"
    THETA_BASIC = "ThetaBasic"
    THETA = "Theta"
    THETA_OMOL = "ThetaOMOL"
    THETA_TILDE_BASIC = "ThetaTildeBasic"
    THETA_TILDE = "ThetaTilde"
    HASSE_MULT = "HasseMult"
    PROJECTOR = "MuOrdinaryProjector"


THETA_KINDS = frozenset(
    {OpKind.THETA_BASIC, OpKind.THETA, OpKind.THETA_TILDE_BASIC, OpKind.THETA_TILDE}
)


@dataclass(frozen=True)
class OperatorDescriptor:
    """A symbolic operator; unused fields stay ``None``."""

    kind: OpKind
    sigma: tuple[str, ...] | None = None
    tau_bar: str | None = None
    lam: Weight | None = None
    variant: str | None = None
    exponents: tuple[tuple[str, int], ...] | None = None

    def label(self) -> str:
        parts = []
        if self.sigma is not None:
            parts.append("sigma={" + ",".join(self.sigma) + "}")
        if self.tau_bar is not None:
            parts.append(f"tau={self.tau_bar}")
        if self.lam is not None:
            parts.append(f"lambda={self.lam.label()}")
        if self.exponents is not None:
            parts.append("b=" + ",".join(f"{t}:{b}" for t, b in self.exponents))
        name = self.kind.value
        if self.variant is not None:
            name += f"[{self.variant}]"
        return f"{name}({', '.join(parts)})"

    def to_json(self) -> dict:
        doc: dict = {"kind": self.kind.value, "label": self.label()}
        if self.sigma is not None:
            doc["sigma"] = list(self.sigma)
        if self.tau_bar is not None:
            doc["tau_bar"] = self.tau_bar
        if self.lam is not None:
            doc["lambda"] = self.lam.to_json()
        if self.variant is not None:
            doc["variant"] = self.variant
        if self.exponents is not None:
            doc["b"] = dict(self.exponents)
        return doc


# -- constructors ----------------------------------------------------------


def _sigma(datum: ShimuraDatum, sigma: Iterable[str]) -> tuple[str, ...]:
    wanted = set(sigma)
    for tau in wanted:
        datum.embedding(tau)
    return tuple(t for t in datum.embeddings if t in wanted)


def maass_shimura(datum: ShimuraDatum, lam: Weight) -> OperatorDescriptor:
    if not is_symmetric(datum, lam):
        raise NotSymmetric(f"lambda = {lam.label()} is not symmetric")
    return OperatorDescriptor(OpKind.MAASS_SHIMURA, lam=lam)


def theta_basic(datum: ShimuraDatum, sigma: Iterable[str], tau_bar: str) -> OperatorDescriptor:
    datum.embedding(tau_bar)
    return OperatorDescriptor(OpKind.THETA_BASIC, sigma=_sigma(datum, sigma), tau_bar=tau_bar)


def theta(
    datum: ShimuraDatum, sigma: Iterable[str], lam: Weight, variant: str = "general"
) -> OperatorDescriptor:
    if variant not in ("general", "allgood"):
        raise WeightError(f"unknown variant {variant!r}")
    if not is_symmetric(datum, lam):
        raise NotSymmetric(f"lambda = {lam.label()} is not symmetric")
    return OperatorDescriptor(OpKind.THETA, sigma=_sigma(datum, sigma), lam=lam, variant=variant)


def theta_omol(
    datum: ShimuraDatum, lam: Weight, sigma: Iterable[str] | None = None
) -> OperatorDescriptor:
    if not is_symmetric(datum, lam):
        raise NotSymmetric(f"lambda = {lam.label()} is not symmetric")
    return OperatorDescriptor(
        OpKind.THETA_OMOL, sigma=None if sigma is None else _sigma(datum, sigma), lam=lam
    )


def theta_tilde_basic(datum: ShimuraDatum, sigma: Iterable[str], tau_bar: str) -> OperatorDescriptor:
    datum.embedding(tau_bar)
    return OperatorDescriptor(OpKind.THETA_TILDE_BASIC, sigma=_sigma(datum, sigma), tau_bar=tau_bar)


def theta_tilde(datum: ShimuraDatum, sigma: Iterable[str], lam: Weight) -> OperatorDescriptor:
    if not is_symmetric(datum, lam):
        raise NotSymmetric(f"lambda = {lam.label()} is not symmetric")
    return OperatorDescriptor(OpKind.THETA_TILDE, sigma=_sigma(datum, sigma), lam=lam)


def hasse_mult(
    datum: ShimuraDatum,
    sigma: Iterable[str] | None = None,
    exponents: Mapping[str, int] | None = None,
) -> OperatorDescriptor:
    """Multiplication by ``E_sigma`` or by ``prod E_tau^{b_tau}``; give exactly one."""
    if (sigma is None) == (exponents is None):
        raise WeightError("give either sigma or exponents")
    if exponents is not None:
        for tau, b in exponents.items():
            datum.embedding(tau)
            if b < 0:
                raise WeightError("Hasse exponents must be non-negative")
        ordered = tuple((t, int(exponents[t])) for t in datum.embeddings if t in exponents)
        return OperatorDescriptor(OpKind.HASSE_MULT, exponents=ordered)
    return OperatorDescriptor(OpKind.HASSE_MULT, sigma=_sigma(datum, sigma))


def projector() -> OperatorDescriptor:
    return OperatorDescriptor(OpKind.PROJECTOR)


# -- applicability ---------------------------------------------------------


@dataclass(frozen=True)
class Applicability:
    ok: bool
    reason: str = ""
    witnesses: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {"applicable": self.ok, "reason": self.reason, "witnesses": list(self.witnesses)}


_OK = Applicability(True)


def _fail(reason: str) -> Applicability:
    return Applicability(False, reason)


def _good_supported(datum: ShimuraDatum, kappa: Weight, sigma: Sequence[str]) -> Applicability:
    if not supported_in(kappa, sigma):
        return _fail("κ not supported at Σ")
    if not is_good(datum, kappa):
        return _fail("κ not good")
    return _OK


def _lambda_checks(datum: ShimuraDatum, lam: Weight) -> Applicability:
    if not is_symmetric(datum, lam):
        return _fail("λ not symmetric")
    if not is_positive(lam):
        return _fail("λ not positive")
    return _OK


def _usable(datum: ShimuraDatum, w: Weight) -> bool:
    return w.is_dominant() and is_positive(w) and is_good(datum, w)


def _delta_witnesses(datum: ShimuraDatum, sigma: Sequence[str]) -> list[str]:
    inside = set(sigma)
    return [
        t
        for t in datum.embeddings
        if t in datum.cm_type
        and t in inside
        and datum.conj(t) in inside
        and delta_defined(datum, t)
    ]


@dataclass(frozen=True)
class _LambdaChoice:
    witness: str  # "lambda" or the embedding tau used for lambda - delta(tau)
    prime: Weight
    hasse: Weight
    witnesses: tuple[str, ...]


def _choose_lambda_prime(datum: ShimuraDatum, lam: Weight, sigma: Sequence[str]) -> _LambdaChoice | None:
    """Pick ``λ'``: ``λ`` itself when good, else the best ``λ - δ(τ)``.

    Among several usable ``τ`` the one adding the least Hasse weight wins,
    ties going to canonical embedding order.  Every usable candidate is
    reported.  The zero weight is never accepted as ``λ'``.
    """
    candidates: list[tuple[str, Weight]] = []
    if _usable(datum, lam):
        candidates.append(("lambda", lam))
    for tau in _delta_witnesses(datum, sigma):
        diff = lam - delta(datum, tau)
        if _usable(datum, diff):
            candidates.append((tau, diff))
    if not candidates:
        return None
    pool = candidates[:1] if candidates[0][0] == "lambda" else candidates
    scored = []
    for rank, (name, prime) in enumerate(pool):
        norms = weight_stats(datum, prime).twist_norm()
        added = hasse_combination(datum, norms)
        scored.append((added.size, rank, name, prime, added))
    _, _, name, prime, added = min(scored, key=lambda s: (s[0], s[1]))
    return _LambdaChoice(name, prime, added, tuple(c[0] for c in candidates))


def applicable(datum: ShimuraDatum, op: OperatorDescriptor, kappa: Weight) -> Applicability:
    """Evaluate the hypotheses of the operator at source weight ``kappa``.

    The reason names the first hypothesis that fails.
    """
    kind = op.kind
    if kind is OpKind.PROJECTOR:
        return _OK
    if kind is OpKind.HASSE_MULT:
        return _OK
    if kind is OpKind.MAASS_SHIMURA:
        check = _lambda_checks(datum, op.lam)
        if not check:
            return check
        if datum.case == "C" and admissible_depth(datum, op.lam) is None:
            return _fail("λ not admissible")
        return _OK

    if kind is OpKind.THETA_OMOL:
        sigma = op.sigma
        if sigma is None:
            sigma = tuple(t for t in datum.embeddings if 0 not in datum.orbit_values(t))
        if any(0 in datum.orbit_values(t) for t in sigma):
            return _fail("Σ meets an orbit where f takes the value 0")
        check = _lambda_checks(datum, op.lam)
        if not check:
            return check
        if not is_simple(datum, op.lam):
            return _fail("λ not simple")
        if not supported_in(op.lam, sigma):
            return _fail("λ not supported at Σ")
        if not is_simple(datum, kappa):
            return _fail("κ not simple")
        if not supported_in(kappa, sigma):
            return _fail("κ not supported at Σ")
        return _OK

    sigma = op.sigma or ()
    if kind in (OpKind.THETA_TILDE_BASIC, OpKind.THETA_TILDE):
        ups = upsilon(datum)
        if not ups:
            return _fail("Υ is empty")
        if not set(ups) <= set(sigma):
            return _fail("Υ not contained in Σ")

    check = _good_supported(datum, kappa, sigma)
    if not check:
        return check

    if kind is OpKind.THETA_BASIC:
        if op.tau_bar not in datum.cm_type:
            return _fail("τ̄ not in the CM type")
        if not delta_defined(datum, op.tau_bar):
            return _fail("δ(τ̄) undefined")
        return _OK

    if kind is OpKind.THETA_TILDE_BASIC:
        if op.tau_bar not in datum.cm_type:
            return _fail("τ̄ not in the CM type")
        if orbit_base(datum, datum.orbit_of(op.tau_bar)) is None:
            return _fail("orbit of τ̄ meets 0 or n")
        return _OK

    if kind is OpKind.THETA_TILDE:
        check = _lambda_checks(datum, op.lam)
        if not check:
            return check
        if not is_simple(datum, op.lam):
            return _fail("λ not simple")
        try:
            upsilon_twist(datum, op.lam)
        except UpsilonEmpty:
            return _fail("λ supported on an orbit meeting 0 or n")
        return _OK

    if kind is OpKind.THETA:
        check = _lambda_checks(datum, op.lam)
        if not check:
            return check
        if not supported_in(op.lam, sigma):
            return _fail("λ not supported at Σ")
        if op.variant == "allgood":
            inside = set(sigma)
            for tau in datum.cm_type:
                if tau in inside and datum.conj(tau) in inside and delta_defined(datum, tau):
                    if not is_good(datum, delta(datum, tau)):
                        return _fail(f"δ({tau}) not good")
            return _OK
        choice = _choose_lambda_prime(datum, op.lam, sigma)
        if choice is None:
            return _fail("λ and λ−δ(τ) not good")
        return Applicability(True, "", choice.witnesses)

    raise AssertionError(kind)


# -- weight maps -----------------------------------------------------------


@dataclass(frozen=True)
class WeightMapResult:
    """Target weight together with the pieces added to the source."""

    operator: str
    source: Weight
    target: Weight
    lam: Weight
    hasse: Weight
    twist: Weight
    witness: str | None = None
    witnesses: tuple[str, ...] = ()
    zero: bool = False

    def to_json(self) -> dict:
        return {
            "operator": self.operator,
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "ledger": {
                "lambda": self.lam.to_json(),
                "hasse": self.hasse.to_json(),
                "twist": self.twist.to_json(),
            },
            "witness": self.witness,
            "witnesses": list(self.witnesses),
            "zero": self.zero,
        }


def _result(op, kappa, lam, hasse, twist, witness=None, witnesses=()) -> WeightMapResult:
    target = kappa + lam + hasse + twist
    return WeightMapResult(op.label(), kappa, target, lam, hasse, twist, witness, witnesses)


def apply(datum: ShimuraDatum, op: OperatorDescriptor, kappa: Weight) -> WeightMapResult:
    """Target weight of ``op`` on ``kappa``; raises :class:`NotApplicable` otherwise."""
    check = applicable(datum, op, kappa)
    if not check:
        raise NotApplicable(check.reason)
    zero = zero_weight(datum)
    kind = op.kind
    if kind is OpKind.PROJECTOR:
        return _result(op, kappa, zero, zero, zero)
    if kind is OpKind.HASSE_MULT:
        if op.exponents is not None:
            added = hasse_combination(datum, dict(op.exponents))
        else:
            added = hasse_weight(datum, op.sigma)
        return _result(op, kappa, zero, added, zero)
    if kind in (OpKind.MAASS_SHIMURA, OpKind.THETA_OMOL):
        return _result(op, kappa, op.lam, zero, zero)
    if kind is OpKind.THETA_BASIC:
        return _result(op, kappa, delta(datum, op.tau_bar), hasse_weight(datum, op.sigma), zero)
    if kind is OpKind.THETA_TILDE_BASIC:
        twist = delta_twist(datum, op.tau_bar)
        return _result(op, kappa, zero, hasse_weight(datum, op.sigma), twist)

    half = op.lam.size // 2
    assert 2 * half == op.lam.size
    base_hasse = hasse_weight(datum, op.sigma).scale(half)
    if kind is OpKind.THETA_TILDE:
        return _result(op, kappa, zero, base_hasse, upsilon_twist(datum, op.lam))
    if op.variant == "allgood":
        return _result(op, kappa, op.lam, base_hasse, zero)
    choice = _choose_lambda_prime(datum, op.lam, op.sigma)
    assert choice is not None
    return _result(
        op, kappa, op.lam, base_hasse + choice.hasse, zero, choice.witness, choice.witnesses
    )


def compose(
    datum: ShimuraDatum, ops: Sequence[OperatorDescriptor], kappa: Weight
) -> tuple[WeightMapResult, ...]:
    """Apply ``ops`` left to right, returning each step.

    A projector step preceded anywhere in the chain by a Maass-Shimura step
    is marked zero, and every later step inherits the mark.
    """
    steps = []
    current = kappa
    seen_maass = False
    zero = False
    for op in ops:
        step = apply(datum, op, current)
        if op.kind is OpKind.PROJECTOR and seen_maass:
            zero = True
        if op.kind is OpKind.MAASS_SHIMURA:
            seen_maass = True
        if zero:
            step = WeightMapResult(
                step.operator, step.source, step.target, step.lam, step.hasse,
                step.twist, step.witness, step.witnesses, True,
            )
        steps.append(step)
        current = step.target
    return tuple(steps)


# -- consistency checks ----------------------------------------------------


@dataclass(frozen=True)
class RouteComparison:
    direct: Weight
    via_omol: Weight

    @property
    def agree(self) -> bool:
        return self.direct == self.via_omol


def compare_routes(
    datum: ShimuraDatum,
    kappa: Weight,
    tau_bar: str,
    upsilon0: Iterable[str] | None = None,
) -> RouteComparison:
    """Target weights of the two factorizations of the theta operator.

    ``direct`` multiplies the theta target by the extra Hasse powers
    ``max(r - 1, 0)`` at each base point; ``via_omol`` adds ``δ(τ̄)`` and the
    full power ``r(κ_τ)`` of the Hasse weight coming from the adjugate.
    """
    ups = set(upsilon(datum))
    support = set(kappa.support())
    if not support <= ups:
        raise NotSupported("κ is not supported at Υ")
    chosen = support if upsilon0 is None else set(upsilon0)
    if not chosen <= ups:
        raise NotSupported("Υ₀ is not contained in Υ")
    if not support <= chosen:
        raise NotSupported("κ is not supported at Υ₀")
    if tau_bar not in datum.cm_type or not delta_defined(datum, tau_bar):
        raise PreconditionViolated(f"δ({tau_bar}) is undefined")
    powers = weight_stats(datum, kappa).det_power()
    d = delta(datum, tau_bar)
    extra = {t: max(powers[t] - 1, 0) for t in chosen}
    direct = kappa + hasse_weight(datum, chosen) + d + hasse_combination(datum, extra)
    full = {t: powers[t] for t in chosen}
    via_omol = kappa + d + hasse_combination(datum, full)
    return RouteComparison(direct, via_omol)


def compare_weight_consistency(
    datum: ShimuraDatum,
    kappa: Weight,
    tau_bar: str,
    upsilon0: Iterable[str] | None = None,
) -> bool:
    return compare_routes(datum, kappa, tau_bar, upsilon0).agree


def tilde_closure_check(
    datum: ShimuraDatum, sigma: Iterable[str], kappa: Weight, tau_bar: str
) -> bool:
    """Whether ``κ + κ_{ha,Σ} + δ̃(τ̄)`` is again good and supported at ``Σ``."""
    sigma = _sigma(datum, sigma)
    ups = upsilon(datum)
    if not ups or not set(ups) <= set(sigma):
        raise PreconditionViolated("Σ must contain the nonempty set Υ")
    if not is_good(datum, kappa):
        raise PreconditionViolated("κ is not good")
    if not supported_in(kappa, sigma):
        raise PreconditionViolated("κ is not supported at Σ")
    if tau_bar not in datum.cm_type or orbit_base(datum, datum.orbit_of(tau_bar)) is None:
        raise PreconditionViolated(f"τ̄ = {tau_bar} must lie in the CM type on an orbit avoiding 0 and n")
    raised = kappa + hasse_weight(datum, sigma) + delta_twist(datum, tau_bar)
    return is_good(datum, raised) and supported_in(raised, sigma)


# -- cycle exploration -----------------------------------------------------


def node_budget_from_env() -> int:
    raw = os.environ.get("THETA_NODE_BUDGET")
    if raw is None:
        return DEFAULT_NODE_BUDGET
    try:
        value = int(raw)
    except ValueError as exc:
        raise PreconditionViolated(f"THETA_NODE_BUDGET={raw!r} is not an integer") from exc
    if value < 1:
        raise PreconditionViolated("THETA_NODE_BUDGET must be positive")
    return value


@dataclass(frozen=True)
class CycleGraph:
    nodes: tuple[Weight, ...]
    edges: tuple[tuple[int, int, str], ...]
    truncated: bool = False

    def to_json(self) -> dict:
        return {
            "nodes": [{"id": f"w{i}", "weight": w.to_json(), "label": w.label()} for i, w in enumerate(self.nodes)],
            "edges": [{"source": f"w{s}", "target": f"w{t}", "label": lab} for s, t, lab in self.edges],
            "truncated": self.truncated,
        }

    def to_dot(self) -> str:
        lines = ["digraph {"]
        for i, w in enumerate(self.nodes):
            lines.append(f"  \"w{i}\" [label={json.dumps(w.label())}];")
        for s, t, lab in self.edges:
            lines.append(f"  \"w{s}\" -> \"w{t}\" [label={json.dumps(lab)}];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _expand(datum, generators, kappa) -> list[tuple[Weight, str]]:
    out = []
    for op in generators:
        if applicable(datum, op, kappa):
            out.append((apply(datum, op, kappa).target, op.label()))
    return out


def explore_cycles(
    datum: ShimuraDatum,
    kappa0: Weight,
    generators: Sequence[OperatorDescriptor],
    depth: int,
    node_budget: int | None = None,
    workers: int = 1,
    strict: bool = False,
) -> CycleGraph:
    """Breadth-first graph of weights reachable from ``kappa0`` in ``depth`` steps.

    Frontier nodes may be expanded on a thread pool; results are merged in
    frontier order, so the graph does not depend on scheduling.  When the
    node budget is hit the graph is marked truncated, or :class:`DepthLimit`
    is raised if ``strict``.
    """
    if depth < 0:
        raise PreconditionViolated("depth must be non-negative")
    budget = node_budget_from_env() if node_budget is None else node_budget
    index = {kappa0.key(): 0}
    nodes = [kappa0]
    edges: list[tuple[int, int, str]] = []
    seen_edges: set[tuple[int, int, str]] = set()
    frontier = [0]
    truncated = False
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for _ in range(depth):
            if not frontier:
                break
            sources = [nodes[i] for i in frontier]
            if pool is None:
                expansions = [_expand(datum, generators, k) for k in sources]
            else:
                expansions = list(pool.map(lambda k: _expand(datum, generators, k), sources))
            nxt = []
            for src, found in zip(frontier, expansions):
                for target, label in found:
                    key = target.key()
                    if key not in index:
                        if len(nodes) >= budget:
                            if strict:
                                raise DepthLimit(f"node budget {budget} exceeded")
                            truncated = True
                            continue
                        index[key] = len(nodes)
                        nodes.append(target)
                        nxt.append(index[key])
                    edge = (src, index[key], label)
                    if edge not in seen_edges:
                        seen_edges.add(edge)
                        edges.append(edge)
            frontier = nxt
    finally:
        if pool is not None:
            pool.shutdown()
    return CycleGraph(tuple(nodes), tuple(edges), truncated)
