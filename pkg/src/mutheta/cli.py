"""Command-line entry point.

``run`` parses an argument list and returns a :class:`CommandResult`
without printing; ``main`` prints it and exits.  Exit codes: 0 success,
1 usage error, 2 unreadable input, 3 domain error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .crystal import (
    c_exponent,
    c_exponent_orbit_literal,
    c_exponent_slope_sum,
    dense_c_exponent,
    phi_valuations,
    slope_graded_ranks,
    standard_crystal,
    verschiebung_image_check,
)
from .datum import FIXTURES, ShimuraDatum, fixture_path, load_datum, orbit_base, upsilon
from .errors import DomainError, MuThetaError, ParseError
from .galois import modular_weight_orbit
from .polygon import datum_polygon, filtration_ranks, is_ordinary, orbit_polygon, slope_counts
from .random_data import random_datum
from .schur import (
    admissible_depth,
    branch_to_levi,
    cauchy_sym_power,
    lr_multiply,
    partition,
    plethysm_sym_sym2,
    weyl_dim,
)
from .theta import (
    OpKind,
    OperatorDescriptor,
    applicable,
    apply,
    explore_cycles,
    hasse_mult,
    maass_shimura,
    projector,
    theta,
    theta_basic,
    theta_omol,
    theta_tilde,
    theta_tilde_basic,
)
from .weights import (
    Weight,
    classify,
    is_positive,
    parse_weight,
    weight_from_json,
    weight_stats,
    zero_weight,
)

SCHEMA_VERSION = 1
FORMATS = ("json", "dot", "table")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class CommandResult:
    exit_code: int
    payload: object
    diagnostics: tuple[str, ...] = field(default_factory=tuple)

    def render(self, fmt: str = "json") -> str:
        if isinstance(self.payload, str):
            return self.payload
        if fmt == "table":
            return "\n".join(_table_lines(self.payload)) + "\n"
        return json.dumps(self.payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _table_lines(doc, prefix: str = "") -> list[str]:
    if isinstance(doc, dict):
        lines = []
        for key in sorted(doc):
            lines += _table_lines(doc[key], f"{prefix}.{key}" if prefix else str(key))
        return lines
    if isinstance(doc, list) and any(isinstance(x, (dict, list)) for x in doc):
        lines = []
        for i, item in enumerate(doc):
            lines += _table_lines(item, f"{prefix}[{i}]")
        return lines
    return [f"{prefix}\t{json.dumps(doc, ensure_ascii=False)}"]


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would call sys.exit(2)
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")

    def exit(self, status: int = 0, message: str | None = None):
        raise UsageError(message or self.format_help())


# -- input helpers ---------------------------------------------------------


def _resolve_datum(path: str) -> ShimuraDatum:
    """Load a datum file, falling back to a bundled fixture of the same name."""
    given = Path(path)
    if not given.exists():
        for name in FIXTURES:
            if given.name in (f"fix_{name}.toml", name):
                return load_datum(fixture_path(name))
    return load_datum(given)


def _weight(datum: ShimuraDatum, args) -> Weight:
    if getattr(args, "weight_file", None):
        try:
            doc = json.loads(Path(args.weight_file).read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise ParseError(f"cannot read weight file: {exc}") from exc
        return weight_from_json(datum, doc)
    if getattr(args, "weight", None) is None:
        return zero_weight(datum)
    return parse_weight(datum, args.weight)


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise ParseError(f"expected comma-separated integers, got {text!r}") from exc


_KIND_NAMES = {k.value.lower(): k for k in OpKind}
_KIND_NAMES["projector"] = OpKind.PROJECTOR


def parse_operator(datum: ShimuraDatum, text: str) -> OperatorDescriptor:
    """Parse ``Kind|key=value|...`` with keys sigma, tau, lambda, variant, b.

    ``sigma`` defaults to every embedding.  Example:
    ``Theta|lambda=tau:1,0;taustar:1|variant=allgood``.
    """
    head, *rest = [s.strip() for s in text.split("|")]
    kind = _KIND_NAMES.get(head.lower())
    if kind is None:
        raise ParseError(f"unknown operator kind {head!r}")
    opts: dict[str, str] = {}
    for item in rest:
        key, sep, value = item.partition("=")
        if not sep or key not in ("sigma", "tau", "lambda", "variant", "b"):
            raise ParseError(f"bad operator option {item!r}")
        opts[key] = value
    sigma = [s for s in opts.get("sigma", ",".join(datum.embeddings)).split(",") if s]
    lam = parse_weight(datum, opts["lambda"]) if "lambda" in opts else None

    def need(key: str) -> str:
        if key not in opts:
            raise ParseError(f"{kind.value} needs '{key}='")
        return opts[key]

    if kind is OpKind.MAASS_SHIMURA:
        need("lambda")
        return maass_shimura(datum, lam)
    if kind is OpKind.THETA_BASIC:
        return theta_basic(datum, sigma, need("tau"))
    if kind is OpKind.THETA:
        need("lambda")
        return theta(datum, sigma, lam, opts.get("variant", "general"))
    if kind is OpKind.THETA_OMOL:
        need("lambda")
        return theta_omol(datum, lam, opts["sigma"].split(",") if "sigma" in opts else None)
    if kind is OpKind.THETA_TILDE_BASIC:
        return theta_tilde_basic(datum, sigma, need("tau"))
    if kind is OpKind.THETA_TILDE:
        need("lambda")
        return theta_tilde(datum, sigma, lam)
    if kind is OpKind.HASSE_MULT:
        if "b" in opts:
            exps = {}
            for chunk in filter(None, opts["b"].split(",")):
                tau, sep, value = chunk.partition(":")
                if not sep:
                    raise ParseError(f"bad Hasse exponent {chunk!r}")
                exps[tau] = int(value)
            return hasse_mult(datum, exponents=exps)
        return hasse_mult(datum, sigma)
    return projector()


# -- subcommands -----------------------------------------------------------


def _cmd_datum(args) -> dict:
    if args.action == "random":
        seed = 0 if args.seed is None else args.seed
        return random_datum(random.Random(seed)).to_document()
    if args.datum is None:
        raise UsageError("datum validate|dump requires --datum")
    datum = _resolve_datum(args.datum)
    doc = datum.to_document()
    if args.action == "validate":
        return {"valid": True, "datum": doc, "upsilon": list(upsilon(datum))}
    return doc


def _cmd_polygon(args) -> dict:
    datum = _resolve_datum(args.datum)
    orbits = []
    for orbit in datum.orbits:
        poly = orbit_polygon(datum, orbit)
        orbits.append(
            {
                "orbit": list(orbit.members),
                "slopes": poly.to_json(),
                "ordinary": poly.is_ordinary,
                "breakpoints": [[x, str(y)] for x, y in poly.breakpoints()],
                "slope_counts": {t: list(slope_counts(datum, t)) for t in orbit},
                "filtration_ranks": {t: list(filtration_ranks(datum, t)) for t in orbit},
            }
        )
    return {
        "slopes": datum_polygon(datum).to_json(),
        "ordinary": is_ordinary(datum),
        "orbits": orbits,
    }


def _cmd_classify(args) -> dict:
    datum = _resolve_datum(args.datum)
    weight = _weight(datum, args)
    doc = {"weight": weight.to_json(), "flags": classify(datum, weight).to_json()}
    if is_positive(weight) or weight.is_zero():
        doc["stats"] = weight_stats(datum, weight).to_json()
    return doc


def _cmd_schur(args) -> dict:
    if args.action == "dim":
        return {"a": args.a, "weight": list(_ints(args.weight)), "dim": weyl_dim(args.a, _ints(args.weight))}
    if args.action == "branch":
        if args.blocks is None or args.weight is None:
            raise UsageError("schur branch needs --weight and --blocks")
        return branch_to_levi(_ints(args.weight), _ints(args.blocks)).to_json()
    if args.action == "cauchy":
        return cauchy_sym_power(args.e, args.a, args.b).to_json()
    if args.action == "plethysm":
        return plethysm_sym_sym2(args.e, args.a).to_json()
    if args.action == "lr":
        return lr_multiply(partition(_ints(args.mu)), partition(_ints(args.nu))).to_json()
    if args.datum is None:
        raise UsageError("schur admissible requires --datum")
    datum = _resolve_datum(args.datum)
    weight = _weight(datum, args)
    return {"weight": weight.to_json(), "depth": admissible_depth(datum, weight)}


def _cmd_crystal(args) -> dict:
    datum = _resolve_datum(args.datum)
    seed = 0 if args.seed is None else args.seed
    orbits = []
    all_ok = True
    for orbit in datum.orbits:
        crystal = standard_crystal(datum, orbit)
        doc = crystal.to_json()
        doc["valuations"] = {t: list(phi_valuations(datum, t)) for t in orbit}
        doc["c"] = {t: c_exponent(datum, t) for t in orbit if datum.f(t)}
        if args.lemma_literal:
            literal = {t: c_exponent_orbit_literal(datum, t) for t in orbit if datum.f(t)}
            doc["c_orbit_literal"] = literal
            # reported only; the orbit-sum variant is known to disagree in general
            doc["c_orbit_literal_agrees"] = all(literal[t] == doc["c"][t] for t in literal)
        if args.action == "verify":
            checks = {}
            for t in orbit:
                entry = {"filtration_ranks": slope_graded_ranks(datum, t) == filtration_ranks(datum, t)}
                if datum.f(t):
                    entry["c_slope_sum"] = c_exponent(datum, t) == c_exponent_slope_sum(datum, t)
                    if datum.n <= 4:
                        entry["c_dense"] = c_exponent(datum, t) == dense_c_exponent(datum, t, seed)
                checks[t] = entry
            base = orbit_base(datum, orbit)
            if base is not None:
                checks["verschiebung"] = {
                    str(j): verschiebung_image_check(datum, base, j) for j in range(1, orbit.size + 1)
                }
            doc["checks"] = checks
            all_ok = all_ok and all(v for entry in checks.values() for v in entry.values())
        orbits.append(doc)
    out = {"orbits": orbits}
    if args.action == "verify":
        out["ok"] = all_ok
    return out


def _cmd_theta(args):
    datum = _resolve_datum(args.datum)
    weight = _weight(datum, args)
    if not args.op:
        raise UsageError("theta needs at least one --op")
    ops = [parse_operator(datum, text) for text in args.op]
    if args.action == "check":
        return {
            "weight": weight.to_json(),
            "results": [{"operator": op.label(), **applicable(datum, op, weight).to_json()} for op in ops],
        }
    if args.action == "apply":
        current, steps = weight, []
        for op in ops:
            step = apply(datum, op, current)
            steps.append(step.to_json())
            current = step.target
        return {"source": weight.to_json(), "target": current.to_json(), "steps": steps}
    graph = explore_cycles(datum, weight, ops, args.depth, args.budget, args.workers)
    if args.format == "dot":
        return graph.to_dot()
    return graph.to_json()


def _cmd_galois(args):
    datum = _resolve_datum(args.datum)
    weight = _weight(datum, args)
    gens = [parse_operator(datum, text) for text in args.op] if args.op else None
    orbit = modular_weight_orbit(datum, weight, args.depth, gens, args.height, args.budget)
    return orbit.to_json()


def _build_parser() -> _Parser:
    parser = _Parser(prog="mutheta", description="Weight calculus of mod p theta operators.")
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="json")
    common.add_argument("--seed", type=int, default=None)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def datum_opt(p, required=True):
        p.add_argument("--datum", required=required, help="datum file (.toml or .json) or fixture name")

    def weight_opts(p):
        p.add_argument("--weight", help='weight such as "tau:2,2;taustar:5"')
        p.add_argument("--weight-file", help="weight in canonical JSON form")

    p = sub.add_parser("datum", parents=[common])
    p.add_argument("action", choices=("validate", "dump", "random"))
    datum_opt(p, required=False)

    p = sub.add_parser("polygon", parents=[common])
    datum_opt(p)

    p = sub.add_parser("classify", parents=[common])
    datum_opt(p)
    weight_opts(p)

    p = sub.add_parser("schur", parents=[common])
    p.add_argument("action", choices=("dim", "branch", "cauchy", "plethysm", "lr", "admissible"))
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--b", type=int, default=1)
    p.add_argument("--e", type=int, default=1)
    p.add_argument("--blocks")
    p.add_argument("--mu", default="")
    p.add_argument("--nu", default="")
    datum_opt(p, required=False)
    weight_opts(p)

    p = sub.add_parser("crystal", parents=[common])
    p.add_argument("action", choices=("show", "verify"))
    p.add_argument("--lemma-literal", action="store_true", help="also report the orbit-sum variant of c")
    datum_opt(p)

    p = sub.add_parser("theta", parents=[common])
    p.add_argument("action", choices=("apply", "check", "cycles"))
    p.add_argument("--op", action="append", help="operator, e.g. 'ThetaBasic|tau=tau' (repeatable)")
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    datum_opt(p)
    weight_opts(p)

    p = sub.add_parser("galois", parents=[common])
    p.add_argument("action", choices=("orbit",))
    p.add_argument("--op", action="append")
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--height", type=int, default=1)
    p.add_argument("--budget", type=int, default=None)
    datum_opt(p)
    weight_opts(p)
    return parser


_HANDLERS = {
    "datum": _cmd_datum,
    "polygon": _cmd_polygon,
    "classify": _cmd_classify,
    "schur": _cmd_schur,
    "crystal": _cmd_crystal,
    "theta": _cmd_theta,
    "galois": _cmd_galois,
}


def run(argv: list[str]) -> CommandResult:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_help())
        if args.format == "dot" and not (args.command == "theta" and args.action == "cycles"):
            raise UsageError("--format dot is only available for 'theta cycles'")
        payload = _HANDLERS[args.command](args)
    except UsageError as exc:
        return CommandResult(1, {"error": "usage", "message": str(exc)}, (str(exc),))
    except ParseError as exc:
        return CommandResult(2, {"error": type(exc).__name__, "message": str(exc)}, (str(exc),))
    except DomainError as exc:
        return CommandResult(3, {"error": type(exc).__name__, "message": str(exc)}, (str(exc),))
    except MuThetaError as exc:
        return CommandResult(3, {"error": type(exc).__name__, "message": str(exc)}, (str(exc),))
    # datum documents stay loadable, so they carry no extra keys
    is_document = args.command == "datum" and args.action in ("dump", "random")
    if isinstance(payload, dict) and not is_document:
        payload = {"schema_version": SCHEMA_VERSION, **payload}
    return CommandResult(0, payload)


def main(argv: list[str] | None = None) -> None:
    argv = sys.argv[1:] if argv is None else argv
    result = run(argv)
    fmt = "json"
    if "--format" in argv:
        i = argv.index("--format")
        if i + 1 < len(argv) and argv[i + 1] in FORMATS:
            fmt = argv[i + 1]
    if result.exit_code == 0:
        sys.stdout.write(result.render(fmt))
    else:
        for line in result.diagnostics:
            sys.stderr.write(line.rstrip("\n") + "\n")
    sys.exit(result.exit_code)
