"""Command-line front end.

Exit codes: 0 success, 1 negative answer (pattern found, threshold not met,
verdict mismatch, no system), 2 usage or format error, 3 capacity or budget
exceeded.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import constructions as cons
from . import extraction as ex
from . import family as fam
from . import numeric, turan
from .errors import (CapacityError, PosetFreeError, PreconditionError, ProofStepFailure,
                     ThresholdNotMet, ValidationError)
from .poset import Poset, height, named_poset
from .textio import emit_family, emit_poset, parse_poset, read_family

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3
THREADS_ENV = "POSETFREE_THREADS"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, fam.SetFamily):
        return {"ground": x.ground, "members": [list(s) for s in x.as_sets()]}
    return x


def _set_text(mask: int) -> str:
    return "{" + ",".join(str(i + 1) for i in fam.bits(mask)) + "}"


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise _UsageError(f"not a rational number: {text!r}") from None


def _poset_arg(token: str) -> Poset:
    path = Path(token)
    if path.is_file():
        return parse_poset(path.read_text())
    return named_poset(token)


class _Out:
    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.data: dict = {}

    def line(self, text: str, **fields):
        self.data.update(fields)
        if not self.as_json:
            print(text)

    def flush(self):
        if self.as_json:
            print(json.dumps(_jsonable(self.data), indent=2))


# ------------------------------------------------------------ verbs

_CONSTRUCTIONS = {
    "levels": ("n k1,k2,...", 2),
    "full-chain": ("n", 1),
    "priv-sharp": ("n r", 2),
    "vc-extremal": ("n d t", 3),
    "b2-lower": ("|S| |T| |R|", 3),
}


def _build(name: str, params: list[str]) -> fam.SetFamily:
    if name not in _CONSTRUCTIONS:
        raise _UsageError(f"unknown construction {name!r}; choose from {sorted(_CONSTRUCTIONS)}")
    usage, arity = _CONSTRUCTIONS[name]
    if len(params) != arity:
        raise _UsageError(f"construct {name} expects: {usage}")
    try:
        if name == "levels":
            return cons.levels(int(params[0]), [int(k) for k in params[1].split(",") if k])
        nums = [int(p) for p in params]
    except ValueError:
        raise _UsageError(f"construct {name} expects integers: {usage}") from None
    if name == "full-chain":
        return cons.full_chain_family(*nums)
    if name == "priv-sharp":
        return cons.priv_sharp(*nums)
    if name == "vc-extremal":
        return cons.vc_extremal(*nums)[0]
    return cons.b2_lower(sum(nums), cons.PartitionSpec(*nums))


def cmd_construct(args, out: _Out) -> int:
    F = _build(args.name, args.params)
    text = emit_family(F)
    if args.output:
        Path(args.output).write_text(text)
    elif not out.as_json:
        sys.stdout.write(text)
    out.data["family"] = F
    if args.report:
        mass = fam.lubell_mass(F)
        out.line(f"# members {len(F)}\n# lubell {mass} ~ {float(mass):.12g}",
                 members=len(F), lubell=mass)
    return EXIT_OK


def cmd_lubell(args, out: _Out) -> int:
    F = read_family(args.family)
    mass = fam.lubell_mass(F)
    out.line(f"{mass}\t{float(mass):.12g}", lubell=mass, decimal=float(mass))
    return EXIT_OK


def cmd_free_check(args, out: _Out) -> int:
    F = read_family(args.family)
    P = _poset_arg(args.poset)
    free = fam.is_p_free(F, P)
    out.line(f"{args.poset}-free" if free else f"contains {args.poset}", free=free)
    return EXIT_OK if free else EXIT_NEGATIVE


def cmd_contains(args, out: _Out) -> int:
    F = read_family(args.family)
    P = _poset_arg(args.poset)
    emb = fam.find_copy(F, P)
    if emb is None:
        out.line(f"no induced copy of {args.poset}", found=False)
        return EXIT_NEGATIVE
    images = {P.label(x): F.members[emb[x]] for x in range(P.size)}
    out.line("\n".join(f"{k} -> {_set_text(v)}" for k, v in images.items()),
             found=True, embedding={k: list(fam.bits(v)) for k, v in images.items()})
    return EXIT_OK


def _target_extractor(token: str) -> ex.Extractor:
    """``C<r>``/``A<r>`` base extractors, joined by ``/`` (series) or ``|`` (parallel)."""
    if "|" in token:
        left, right = token.split("|", 1)
        return ex.parallel(_target_extractor(left), _target_extractor(right))
    if "/" in token:
        low, high = token.split("/", 1)
        return ex.series(_target_extractor(low), _target_extractor(high))
    if token[:1] in "CA" and token[1:].isdigit():
        make = ex.chain_extractor if token[0] == "C" else ex.antichain_extractor
        return make(int(token[1:]))
    raise _UsageError(f"composite targets use C<r>/A<r> joined by '/' or '|', got {token!r}")


def cmd_extract(args, out: _Out) -> int:
    F = read_family(args.family)
    target = args.target
    gamma = _rational(args.gamma) if args.gamma else None
    if target.startswith("S") and target[1:].isdigit():
        rep = ex.extract_std_example(F, int(target[1:]), gamma or Fraction(1, 2),
                                     _rational(args.delta) if args.delta else Fraction(1, 2))
    elif m := re.fullmatch(r"Ud?(\d+)", target):
        rep = ex.extract_universal(F, int(m.group(1)), gamma or Fraction(1, 2))
    elif "/" in target or "|" in target or (target[:1] in "CA" and target[1:].isdigit()):
        rep = _target_extractor(target)(F)
    else:
        P = _poset_arg(target)
        if height(P) > 2:
            raise PreconditionError(f"{target} has height {height(P)}; only height-two "
                                    "targets, S<r>, U<r> or C/A composites are supported")
        rep = ex.extract_height2(F, P)
    lines = [f"{rep.pattern.label(x)} -> {_set_text(s)}" for x, s in enumerate(rep.sets)]
    if rep.tag:
        lines.insert(0, f"# tag {rep.tag}")
    lines += [f"# trace {json.dumps(_jsonable(step))}" for step in rep.trace]
    out.line("\n".join(lines), tag=rep.tag, valid=rep.validate(),
             embedding={rep.pattern.label(x): list(fam.bits(s)) for x, s in enumerate(rep.sets)},
             trace=rep.trace)
    return EXIT_OK


def cmd_la_star(args, out: _Out) -> int:
    P = _poset_arg(args.poset)
    res = turan.la_star_exact(args.n, P, objective="lubell" if args.lubell else "cardinality",
                              require_empty_set=args.with_empty, budget=args.budget,
                              canonical=args.canonical)
    out.line(f"optimum {res.optimum}\nnodes {res.nodes_explored}\nexhaustive "
             f"{str(res.exhaustive).lower()}", optimum=res.optimum, nodes=res.nodes_explored,
             exhaustive=res.exhaustive, witness=res.witness)
    if not out.as_json:
        sys.stdout.write(emit_family(res.witness))
    return EXIT_OK if res.exhaustive else EXIT_CAPACITY


def cmd_verify(args, out: _Out) -> int:
    reports = numeric.run_suite(args.suite)
    rows = []
    for rep in reports:
        rows.append(f"{rep.verdict:9} {rep.name}: claimed {rep.claimed}, computed {rep.computed}")
    out.line("\n".join(rows), reports=[vars(r) | {"ok": r.ok} for r in reports])
    return EXIT_OK if all(r.ok for r in reports) else EXIT_NEGATIVE


def cmd_vc(args, out: _Out) -> int:
    F = read_family(args.family)
    d = fam.vc_dimension(F)
    witness = fam.find_shattered(F, d) if d >= 0 else None
    text = f"vc-dimension {d}"
    if witness is not None:
        text += f"\nshattered {_set_text(witness)}"
    out.line(text, vc_dimension=d,
             shattered=list(fam.bits(witness)) if witness is not None else None)
    return EXIT_OK


def cmd_private_system(args, out: _Out) -> int:
    F = read_family(args.family)
    got = fam.private_system(F, args.r)
    if got is None:
        out.line(f"no private system of size {args.r}", found=False)
        return EXIT_NEGATIVE
    R, witnesses = got
    lines = [f"R = {_set_text(R)}"]
    lines += [f"B_{i + 1} = {_set_text(b)}" for i, b in zip(fam.bits(R), witnesses)]
    out.line("\n".join(lines), found=True, R=list(fam.bits(R)),
             witnesses=[list(fam.bits(b)) for b in witnesses])
    return EXIT_OK


def cmd_reduce_b3(args, out: _Out) -> int:
    F = read_family(args.family)
    G = ex.b3_to_s3_reduce(F)
    mass = fam.lubell_mass(G)
    if not out.as_json:
        sys.stdout.write(emit_family(G))
    out.line(f"# lubell {mass}", family=G, lubell=mass)
    return EXIT_OK


def cmd_poset(args, out: _Out) -> int:
    P = named_poset(args.token)
    if not out.as_json:
        sys.stdout.write(emit_poset(P))
    out.data.update(size=P.size, covers=P.covers(), labels=P.labels)
    return EXIT_OK


# ------------------------------------------------------------ parser

def _common(suppress: bool) -> argparse.ArgumentParser:
    # subcommand copies use SUPPRESS so they do not overwrite values given before the verb
    default = argparse.SUPPRESS if suppress else None
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true",
                        default=argparse.SUPPRESS if suppress else False,
                        help="structured output")
    common.add_argument("--threads", type=int, default=default,
                        help=f"worker count (default ${THREADS_ENV} or 1); searches run "
                             "sequentially, so this only validates the value")
    return common


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="posetfree", parents=[_common(False)],
                description="Induced-subposet-free families in the Boolean lattice.")
    common = _common(True)
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    c = sub.add_parser("construct", parents=[common], help="emit a named construction")
    c.add_argument("name", help=", ".join(f"{k} <{v[0]}>" for k, v in _CONSTRUCTIONS.items()))
    c.add_argument("params", nargs="*")
    c.add_argument("--report", action="store_true", help="also print member count and mass")
    c.add_argument("-o", "--output", help="write the family here instead of stdout")
    c.set_defaults(func=cmd_construct)

    c = sub.add_parser("lubell", parents=[common], help="exact Lubell mass")
    c.add_argument("family")
    c.set_defaults(func=cmd_lubell)

    for verb, func, helptext in (("free-check", cmd_free_check, "exit 0 iff P-free"),
                                 ("contains", cmd_contains, "print an induced copy")):
        c = sub.add_parser(verb, parents=[common], help=helptext)
        c.add_argument("family")
        c.add_argument("poset", help="token (C3, B2, S2, U2, Ud2, V2, A3) or poset file")
        c.set_defaults(func=func)

    c = sub.add_parser("extract", parents=[common], help="run a constructive extractor")
    c.add_argument("target", help="S<r>, U<r>, a height-two poset, or C/A composites "
                                  "such as C1/C1 (series) and C1|C1 (parallel)")
    c.add_argument("family")
    c.add_argument("--gamma")
    c.add_argument("--delta")
    c.set_defaults(func=cmd_extract)

    c = sub.add_parser("la-star", parents=[common], help="exact small-n Turan number")
    c.add_argument("n", type=int)
    c.add_argument("poset")
    c.add_argument("--lubell", action="store_true", help="maximize Lubell mass instead")
    c.add_argument("--with-empty", action="store_true", help="force the empty set in")
    c.add_argument("--budget", type=int, help="node budget; exit 3 when exhausted")
    c.add_argument("--canonical", action="store_true", help="least witness among optima")
    c.set_defaults(func=cmd_la_star)

    c = sub.add_parser("verify", parents=[common], help="reproduce the numeric constants")
    c.add_argument("--suite", choices=numeric.SUITES, default="all")
    c.set_defaults(func=cmd_verify)

    c = sub.add_parser("vc", parents=[common], help="VC dimension and a shattered set")
    c.add_argument("family")
    c.set_defaults(func=cmd_vc)

    c = sub.add_parser("private-system", parents=[common], help="find an r-system")
    c.add_argument("family")
    c.add_argument("r", type=int)
    c.set_defaults(func=cmd_private_system)

    c = sub.add_parser("reduce-b3", parents=[common], help="heaviest interval minus its ends")
    c.add_argument("family")
    c.set_defaults(func=cmd_reduce_b3)

    c = sub.add_parser("poset", parents=[common], help="emit a named poset file")
    c.add_argument("token")
    c.set_defaults(func=cmd_poset)
    return p


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        threads = args.threads
        if threads is None:
            try:
                threads = int(os.environ.get(THREADS_ENV, "1"))
            except ValueError:
                raise _UsageError(f"${THREADS_ENV} must be an integer") from None
        if threads < 1:
            raise _UsageError("--threads must be positive")
        out = _Out(args.json)
        code = args.func(args, out)
        out.flush()
        return code
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ThresholdNotMet as exc:
        print(f"threshold not met: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    except ProofStepFailure as exc:
        print(f"proof step failed: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    except CapacityError as exc:
        print(f"capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (ValidationError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PosetFreeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
