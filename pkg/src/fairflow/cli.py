"""Command-line front end: solve, check, decompose, bench and gen.

Rationals are always written as exact ``"num/den"`` strings.  JSON output
is canonical (sorted keys, compact separators, sorted index lists), so
identical inputs give byte-identical files.  Voter and candidate indices
are 0-based everywhere, witnesses included.

Exit codes: 0 success / axiom satisfied, 1 axiom violated, 2 unreadable
or malformed input, 3 input that parses but breaks a domain invariant.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
import time
from collections.abc import Sequence
from fractions import Fraction
from pathlib import Path
from typing import Any

from fairflow import axioms
from fairflow.bbw import PaymentFunction, bbw_marginals, mes, verify_affordability
from fairflow.core import (
    FractionalCommittee,
    ImpartialCulture,
    Instance,
    Lottery,
    PartyList,
    Resampling,
    as_committee,
    format_rational,
    generate_instance,
    lottery_marginals,
    parse_rational,
)
from fairflow.errors import FairflowError, InvalidInstance
from fairflow.gcut import gcut
from fairflow.lottery import decompose, sample
from fairflow.rut import rut

RULES = ("rut", "gcut", "mes-bbw", "utilitarian")
AXIOMS = ("grp", "gfs", "strong-ufs", "pjr", "affordable")

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_PARSE = 2
EXIT_INVARIANT = 3


class ParseError(Exception):
    pass


# --- serialization ------------------------------------------------------------


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def instance_to_doc(instance: Instance, names: Sequence[str] | None = None) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "k": instance.k,
        "m": instance.m,
        "voters": [sorted(A) for A in instance.approvals],
    }
    if names is not None:
        doc["names"] = list(names)
    return doc


def instance_from_doc(doc: Any) -> Instance:
    if not isinstance(doc, dict):
        raise ParseError("instance document must be a JSON object")
    try:
        k, m, voters = doc["k"], doc["m"], doc["voters"]
    except KeyError as exc:
        raise ParseError(f"instance document lacks field {exc.args[0]!r}") from None
    if not (isinstance(k, int) and isinstance(m, int) and isinstance(voters, list)):
        raise ParseError("fields k, m must be integers and voters a list")
    if not all(isinstance(v, list) and all(isinstance(c, int) and not isinstance(c, bool) for c in v) for v in voters):
        raise ParseError("every voter must be a list of integer candidate indices")
    names = doc.get("names")
    if names is not None and (not isinstance(names, list) or len(names) != m):
        raise ParseError("names must be a list with one entry per candidate")
    try:
        return Instance.from_ballots(m, k, voters)
    except InvalidInstance as exc:
        raise ParseError(f"invalid instance: {exc}") from None


def serialize_instance(instance: Instance, names: Sequence[str] | None = None) -> str:
    return dumps(instance_to_doc(instance, names))


def parse_instance(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return instance_from_doc(doc)


def read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def load_instance(path: str) -> Instance:
    return parse_instance(read_text(path))


def rationals(values: Sequence[Fraction]) -> list[str]:
    return [format_rational(x) for x in values]


def decimals(values: Sequence[Fraction], places: int = 6) -> list[str]:
    return [f"{float(x):.{places}f}" for x in values]


def _parse_values(items: Sequence[Any]) -> list[Fraction]:
    out = []
    for x in items:
        if isinstance(x, bool) or not isinstance(x, (int, str)):
            raise ParseError(f"rational entries must be integers or 'num/den' strings, got {x!r}")
        try:
            out.append(parse_rational(x))
        except ValueError as exc:
            raise ParseError(str(exc)) from None
    return out


_LITERAL = re.compile(r"^\s*[\(\[]([^\)\]]*)[\)\]]\s*$")


def lottery_to_doc(lottery: Lottery) -> list[dict[str, Any]]:
    return [
        {"committee": sorted(W), "weight": format_rational(w)}
        for w, W in sorted(lottery.entries, key=lambda e: sorted(e[1]))
    ]


def lottery_from_doc(items: Any) -> Lottery:
    if not isinstance(items, list):
        raise ParseError("lottery must be a list of {weight, committee} entries")
    entries = []
    for item in items:
        if not isinstance(item, dict) or "weight" not in item or "committee" not in item:
            raise ParseError("lottery entries need 'weight' and 'committee'")
        (w,) = _parse_values([item["weight"]])
        entries.append((w, frozenset(item["committee"])))
    return Lottery(tuple(entries))


def load_committee_doc(source: str) -> dict[str, Any]:
    """Inline literal like ``(1,1/3,2/3)``, or a path to a JSON committee/result/lottery file."""
    literal = _LITERAL.match(source)
    if literal:
        body = literal.group(1).strip()
        parts = [x.strip() for x in body.split(",")] if body else []
        return {"committee": parts}
    try:
        doc = json.loads(read_text(source))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {source}: {exc}") from None
    if isinstance(doc, list):
        doc = {"committee": doc}
    if not isinstance(doc, dict) or not ("committee" in doc or "lottery" in doc):
        raise ParseError("committee file needs a 'committee' or 'lottery' field")
    return doc


def committee_from_doc(doc: dict[str, Any], m: int) -> FractionalCommittee:
    if "committee" in doc:
        values = doc["committee"]
        if not isinstance(values, list):
            raise ParseError("'committee' must be a list")
        return FractionalCommittee(tuple(_parse_values(values)))
    return lottery_marginals(lottery_from_doc(doc["lottery"]), m)


def payments_from_doc(doc: dict[str, Any]) -> tuple[frozenset[int], PaymentFunction]:
    if "payments" not in doc:
        raise ParseError("axiom 'affordable' needs a 'payments' block")
    rows = doc["payments"]
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ParseError("'payments' must be a matrix (list of lists)")
    pi = PaymentFunction(tuple(tuple(_parse_values(r)) for r in rows))
    W = doc.get("affordable_committee")
    return (pi.funded() if W is None else frozenset(W)), pi


def resolve_seed(seed: int | None) -> int:
    env = os.environ.get("FAIRFLOW_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ParseError(f"FAIRFLOW_SEED must be an integer, got {env!r}") from None
    return 0 if seed is None else seed


# --- rules ----------------------------------------------------------------------


def utilitarian(instance: Instance) -> FractionalCommittee:
    """Unconstrained baseline: the ``k`` highest approval scores, ties by index."""
    scores = instance.approval_scores
    top = sorted(range(instance.m), key=lambda c: (-scores[c], c))[: instance.k]
    return FractionalCommittee.indicator(instance.m, top)


def solve(instance: Instance, rule: str) -> tuple[FractionalCommittee, dict[str, Any]]:
    extra: dict[str, Any] = {}
    if rule == "rut":
        return rut(instance), extra
    if rule == "gcut":
        return gcut(instance), extra
    if rule == "utilitarian":
        return utilitarian(instance), extra
    if rule == "mes-bbw":
        W, pi = mes(instance)
        extra["affordable_committee"] = sorted(W)
        extra["payments"] = [rationals(row) for row in pi.payments]
        return FractionalCommittee(bbw_marginals(instance, W, pi)), extra
    raise ParseError(f"unknown rule {rule!r}")


def verdict_doc(verdict: axioms.AxiomVerdict) -> dict[str, Any]:
    doc: dict[str, Any] = {"satisfied": verdict.satisfied}
    if verdict.witness is not None:
        doc["witness"] = sorted(verdict.witness)
    for name in ("coverage", "required"):
        value = getattr(verdict, name)
        if value is not None:
            doc[name] = format_rational(value)
    if verdict.penalty_set is not None:
        doc["penalty_set"] = sorted(verdict.penalty_set)
    if verdict.cohesion is not None:
        doc["cohesion"] = verdict.cohesion
    return doc


def result_doc(instance: Instance, rule: str, p: FractionalCommittee, extra: dict[str, Any], decimal: bool) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "rule": rule,
        "k": instance.k,
        "m": instance.m,
        "n": instance.n,
        "committee": rationals(p.p),
        "welfare": format_rational(axioms.utilitarian_welfare(instance, p)),
        "verdicts": {
            "grp": axioms.check_grp(instance, p).satisfied,
            "gfs": axioms.check_gfs(instance, p).satisfied,
            "strong-ufs": axioms.check_strong_ufs(instance, p).satisfied,
        },
    }
    doc.update(extra)
    if decimal:
        doc["committee_decimal"] = decimals(p.p)
    return doc


# --- commands --------------------------------------------------------------------


def cmd_solve(args: argparse.Namespace) -> int:
    instance = load_instance(args.instance)
    p, extra = solve(instance, args.rule)
    doc = result_doc(instance, args.rule, p, extra, args.decimal)
    if args.lottery:
        lot = decompose(p, instance.k)
        doc["lottery"] = lottery_to_doc(lot)
        seed = resolve_seed(args.seed)
        doc["seed"] = seed
        doc["sample"] = sorted(sample(lot, seed))
    _emit(dumps(doc), args.output)
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    instance = load_instance(args.instance)
    doc = load_committee_doc(args.committee)
    if args.axiom == "affordable":
        W, pi = payments_from_doc(doc)
        if pi.n != instance.n or pi.m != instance.m:
            raise ParseError(f"payments must be a {instance.n}x{instance.m} matrix")
        ok = verify_affordability(instance, W, pi)
        out: dict[str, Any] = {"axiom": "affordable", "satisfied": ok, "affordable_committee": sorted(W)}
        print(dumps(out))
        return EXIT_OK if ok else EXIT_VIOLATED
    p = as_committee(committee_from_doc(doc, instance.m), instance)
    if args.axiom == "grp":
        verdict = axioms.check_grp(instance, p)
    elif args.axiom == "gfs":
        verdict = axioms.check_gfs(instance, p)
    elif args.axiom == "strong-ufs":
        verdict = axioms.check_strong_ufs(instance, p)
    else:
        if not p.is_integral():
            raise FairflowError("axiom 'pjr' needs an integral committee")
        verdict = axioms.check_pjr(instance, p.support())
    out = {"axiom": args.axiom, **verdict_doc(verdict)}
    print(dumps(out))
    return EXIT_OK if verdict.satisfied else EXIT_VIOLATED


def cmd_decompose(args: argparse.Namespace) -> int:
    doc = load_committee_doc(args.committee)
    if "committee" not in doc:
        raise ParseError("decompose needs a fractional committee")
    p = FractionalCommittee(tuple(_parse_values(doc["committee"])))
    lot = decompose(p, p.k)
    out: dict[str, Any] = {"k": p.k, "committee": rationals(p.p), "lottery": lottery_to_doc(lot)}
    if args.sample:
        seed = resolve_seed(args.seed)
        out["seed"] = seed
        out["sample"] = sorted(sample(lot, seed))
    _emit(dumps(out), args.output)
    return EXIT_OK


def _model_from_doc(doc: dict[str, Any]):
    kind = doc.get("type")
    try:
        if kind == "impartial-culture":
            return ImpartialCulture(doc["n"], doc["m"], doc["k"], parse_rational(doc["prob"]))
        if kind == "party-list":
            groups = tuple((int(g["count"]), frozenset(g["ballot"])) for g in doc["groups"])
            return PartyList(doc["m"], doc["k"], groups)
        if kind == "resampling":
            prob = doc.get("prob")
            return Resampling(
                doc["n"], doc["m"], doc["k"], frozenset(doc["base"]), parse_rational(doc["phi"]),
                None if prob is None else parse_rational(prob),
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad generator model {doc!r}: {exc}") from None
    raise ParseError(f"unknown generator model type {kind!r}")


def bench_cells(config: Any, base_dir: Path) -> list[tuple[str, Instance]]:
    if not isinstance(config, dict):
        raise ParseError("bench config must be a JSON object")
    cells: list[tuple[str, Instance]] = []
    for idx, entry in enumerate(config.get("instances", [])):
        if not isinstance(entry, dict):
            raise ParseError("every bench instance entry must be an object")
        label = entry.get("name", f"instance{idx}")
        if "file" in entry:
            cells.append((label, load_instance(str(base_dir / entry["file"]))))
        elif "instance" in entry:
            cells.append((label, instance_from_doc(entry["instance"])))
        elif "model" in entry:
            model = _model_from_doc(entry["model"])
            for seed in entry.get("seeds", [0]):
                cells.append((f"{label}@{seed}", generate_instance(model, int(seed))))
        else:
            raise ParseError("bench instance entries need 'file', 'instance' or 'model'")
    return cells


def cmd_bench(args: argparse.Namespace) -> int:
    try:
        config = json.loads(read_text(args.config))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {args.config}: {exc}") from None
    rules = config.get("rules", []) if isinstance(config, dict) else None
    if not isinstance(rules, list) or any(r not in RULES for r in rules):
        raise ParseError(f"bench rules must be a list drawn from {list(RULES)}")
    cells = bench_cells(config, Path(args.config).parent)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["instance", "rule", "n", "m", "k", "welfare", "grp"]
    if args.decimal:
        header.append("welfare_decimal")
    if args.timing:
        header.append("runtime_s")
    writer.writerow(header)
    for label, instance in cells:
        for rule in rules:
            start = time.perf_counter()
            p, _ = solve(instance, rule)
            elapsed = time.perf_counter() - start
            welfare = axioms.utilitarian_welfare(instance, p)
            row: list[Any] = [
                label, rule, instance.n, instance.m, instance.k,
                format_rational(welfare), axioms.check_grp(instance, p).satisfied,
            ]
            if args.decimal:
                row.append(f"{float(welfare):.6f}")
            if args.timing:
                row.append(f"{elapsed:.6f}")
            writer.writerow(row)
    sys.stdout.write(buf.getvalue())
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    if args.model == "party-list":
        if not args.groups:
            raise ParseError("party-list needs --groups like '2:0,1;2:2'")
        groups = []
        for part in args.groups.split(";"):
            count, _, ballot = part.partition(":")
            try:
                groups.append((int(count), frozenset(int(c) for c in ballot.split(",") if c.strip())))
            except ValueError:
                raise ParseError(f"bad group {part!r}") from None
        model: Any = PartyList(args.m, args.k, tuple(groups))
    elif args.model == "impartial-culture":
        model = ImpartialCulture(args.n, args.m, args.k, _cli_rational(args.prob))
    else:
        base = frozenset(int(c) for c in args.base.split(",") if c.strip()) if args.base else frozenset()
        prob = None if args.prob is None else _cli_rational(args.prob)
        model = Resampling(args.n, args.m, args.k, base, _cli_rational(args.phi), prob)
    instance = generate_instance(model, resolve_seed(args.seed))
    _emit(serialize_instance(instance), args.output)
    return EXIT_OK


def _cli_rational(text: str | None) -> Fraction:
    if text is None:
        raise ParseError("missing rational parameter")
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


# --- entry point -------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise ParseError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fairflow", description="Fair probabilistic committee voting with exact network flows.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="compute a fractional committee")
    p.add_argument("instance")
    p.add_argument("--rule", choices=RULES, required=True)
    p.add_argument("--lottery", action="store_true", help="also decompose into a lottery and draw from it")
    p.add_argument("--seed", type=int)
    p.add_argument("--output")
    p.add_argument("--decimal", action="store_true", help="add decimal renderings for display")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="check an axiom; exit 0 if satisfied, 1 if violated")
    p.add_argument("instance")
    p.add_argument("committee", help="literal such as '(1,1/3,2/3)' or a JSON file")
    p.add_argument("axiom", choices=AXIOMS)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("decompose", help="decompose a fractional committee into a lottery")
    p.add_argument("committee")
    p.add_argument("--sample", action="store_true")
    p.add_argument("--seed", type=int)
    p.add_argument("--output")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("bench", help="run rules over a batch of instances, CSV on stdout")
    p.add_argument("config")
    p.add_argument("--timing", action="store_true", help="add a wall-clock runtime column")
    p.add_argument("--decimal", action="store_true")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--model", choices=("impartial-culture", "party-list", "resampling"), required=True)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--prob")
    p.add_argument("--phi", default="1/2")
    p.add_argument("--base", help="comma-separated central ballot for resampling")
    p.add_argument("--groups", help="party-list groups, e.g. '2:0,1;2:2'")
    p.add_argument("--seed", type=int)
    p.add_argument("--output")
    p.set_defaults(func=cmd_gen)
    return parser


def _fail(code: int, kind: str, message: str) -> int:
    sys.stderr.write(dumps({"error": kind, "message": message}) + "\n")
    return code


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except ParseError as exc:
        return _fail(EXIT_PARSE, "parse", str(exc))
    except FairflowError as exc:
        return _fail(EXIT_INVARIANT, type(exc).__name__, str(exc))


if __name__ == "__main__":
    sys.exit(main())
