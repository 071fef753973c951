"""Command-line interface.

Exit codes: classify 0 tractable, 2 NP-hard; solve 0 optimal, 3 not covered,
4 unsatisfiable; any error (including an oracle mismatch) is 1.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path
from typing import Sequence

from . import io
from .classifier import NPHard, Tractable, classify
from .consistency import (
    NotCovered,
    Optimal,
    Unsatisfiable,
    binarize,
    build_microstructure,
    enforce_consistency,
    expand_pp_instance,
    solve,
    solve_mmclique_lp,
)
from .diagnostics import find_arithmetical_deadlock, find_odd_hole_or_antihole, find_S_type_subgraph, microstructure_stats
from .gadgets import TripartiteGraph, gadget_independent_set, gadget_maxcut, gadget_subdivide
from .oracle import OracleTooLarge, brute_force_solve
from .random_languages import random_instance, random_tractable_language
from .relations import ConstraintLanguage, OperationTable, TooLarge

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NP_HARD = 2
EXIT_NOT_COVERED = 3
EXIT_UNSAT = 4


class CliError(Exception):
    pass


def _table(op: OperationTable | None):
    return None if op is None else list(op.table)


def verdict_to_dict(v: Tractable | NPHard) -> dict:
    out: dict = {
        "m_pairs": [list(p) for p in v.local.m_pairs],
        "mbar_pairs": [list(p) for p in v.local.mbar_pairs],
    }
    if v.tf is not None:
        out["tf_edges"] = [[list(a), list(b)] for a, b in v.tf.edge_list()]
    if isinstance(v, Tractable):
        out["verdict"] = "tractable"
        out["bipartition"] = [[list(p) for p in side] for side in v.sides]
        out["tournament"] = None if v.tournament is None else {
            "phi": _table(v.tournament.phi), "psi": _table(v.tournament.psi)}
        out["arithmetical"] = _table(v.arithmetical)
        out["majority"] = _table(v.majority)
    else:
        w = v.witness
        out["verdict"] = "np-hard"
        body = {"kind": type(w).__name__.removesuffix("Witness"), "description": w.describe(),
                "verified": w.verified}
        if hasattr(w, "pairs"):
            body["pairs"] = [list(p) for p in w.pairs]
        else:
            body["a"], body["b"] = w.a, w.b
        out["witness"] = body
    return out


def _print_table(name: str, op: OperationTable) -> None:
    d = op.domain_size
    print(f"{name} (arity {op.arity}, rows indexed by the leading arguments):")
    for i in range(0, len(op.table), d):
        prefix = ",".join(str(v) for v in _digits(i // d, d, op.arity - 1))
        print(f"  [{prefix}] " + " ".join(str(v) for v in op.table[i:i + d]))


def _digits(index: int, base: int, width: int) -> list[int]:
    out = []
    for _ in range(width):
        index, r = divmod(index, base)
        out.append(r)
    return out[::-1]


def _report_verdict(v: Tractable | NPHard) -> None:
    print("TRACTABLE" if v.tractable else "NP-HARD")
    print("commutative pairs: " + (" ".join(f"{{{a},{b}}}" for a, b in v.local.m_pairs) or "none"))
    print("arithmetical pairs: " + (" ".join(f"{{{a},{b}}}" for a, b in v.local.mbar_pairs) or "none"))
    if v.tf is not None:
        edges = v.tf.edge_list()
        print("pair graph edges: " + (" ".join(f"{a}{b}-{c}{e}" for (a, b), (c, e) in edges) or "none"))
    if isinstance(v, Tractable):
        if v.tournament is not None:
            _print_table("tournament phi", v.tournament.phi)
            _print_table("tournament psi", v.tournament.psi)
        if v.arithmetical is not None:
            _print_table("arithmetical", v.arithmetical)
        _print_table("majority", v.majority)
    else:
        w = v.witness
        status = {True: "verified", False: "REFUTED", None: "unverified-at-scale"}[w.verified]
        print(f"witness: {w.describe()} ({status})")


def cmd_classify(args) -> int:
    lang = io.load_language(args.language)
    v = classify(lang)
    if args.json:
        print(json.dumps(verdict_to_dict(v), indent=2))
    else:
        _report_verdict(v)
    return EXIT_OK if v.tractable else EXIT_NP_HARD


def cmd_solve(args) -> int:
    doc = io.load_instance(args.instance, shift=args.shift)
    lang, inst = doc.language, doc.instance
    report: dict = {"shift": args.shift}
    if doc.definitions:
        inst, var_map = expand_pp_instance(inst, doc.definitions)
        used = {c.relation for c in inst.constraints}
        extra = {f"_aux{i}": r for i, r in enumerate(sorted(used - set(lang), key=repr))}
        lang = lang.with_relations(extra) if extra else lang
        report["expanded_vars"] = inst.num_vars
    else:
        var_map = list(range(inst.num_vars))
    trace: list[str] | None = [] if args.trace_consistency else None
    result = solve(lang, inst, trace)
    offset = args.shift * doc.instance.num_vars
    if isinstance(result, Optimal):
        assignment = [result.assignment[var_map[i]] for i in range(doc.instance.num_vars)]
        report.update(status="optimal", assignment=assignment, measure=result.measure - offset)
        code = EXIT_OK
    elif isinstance(result, Unsatisfiable):
        report.update(status="unsat")
        code = EXIT_UNSAT
    else:
        report.update(status="not-covered", reason=result.reason)
        code = EXIT_NOT_COVERED
    if trace is not None:
        report["trace"] = trace
    if args.oracle_check and code != EXIT_NOT_COVERED:
        try:
            oracle = brute_force_solve(inst)
        except OracleTooLarge as exc:
            report["oracle"] = f"skipped: {exc}"
        else:
            agree = (oracle.optimum is None) == (code == EXIT_UNSAT) and (
                oracle.optimum is None or oracle.optimum == result.measure)
            report["oracle"] = {"optimum": None if oracle.optimum is None else oracle.optimum - offset,
                                "agrees": agree}
            if not agree:
                code = EXIT_ERROR
    if args.lp_check and code in (EXIT_OK, EXIT_UNSAT):
        verdict = classify(lang)
        bi = enforce_consistency(binarize(inst, verdict.majority))
        if bi is None:
            report["lp"] = "skipped: consistency emptied a domain"
        else:
            try:
                lp = solve_mmclique_lp(build_microstructure(bi))
                report["lp"] = {"value": lp.lp_value - offset, "integral": lp.integral}
            except TooLarge as exc:
                report["lp"] = f"skipped: {exc}"
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        _print_solve(report)
    return code


def _print_solve(report: dict) -> None:
    for line in report.get("trace", []):
        print(f"trace: {line}")
    status = report["status"]
    if status == "optimal":
        print(f"OPTIMAL measure={report['measure']} assignment={report['assignment']}")
    elif status == "unsat":
        print("UNSAT")
    else:
        print(f"NOT-COVERED {report['reason']}")
    if "oracle" in report:
        o = report["oracle"]
        if isinstance(o, str):
            print(f"oracle: {o}")
        else:
            print(f"oracle: optimum={o['optimum']} {'agrees' if o['agrees'] else 'MISMATCH'}")
    if "lp" in report:
        lp = report["lp"]
        print(f"lp: {lp}" if isinstance(lp, str) else f"lp: value={lp['value']:.6f} integral={lp['integral']}")


def _write(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def cmd_gadget(args) -> int:
    g, parts = io.load_graph(args.graph)
    if args.kind == "indepset":
        if parts is None:
            raise CliError("indepset needs a 'parts' labelling of the vertices")
        length = args.cycle_length or max(3, max(parts, default=0) + 1)
        if length % 2 == 0 or length < 3:
            raise CliError(f"cycle length must be odd and at least 3, got {length}")
        from .gadgets import default_cycle_pairs
        inst = gadget_independent_set(g, parts, default_cycle_pairs(length))
        rels = {}
        for c in inst.constraints:
            if c.relation not in rels.values():
                rels[f"box{len(rels)}"] = c.relation
        lang = ConstraintLanguage.of(inst.domain_size, rels)
        _write(io.instance_to_dict(lang, inst), args.output)
    elif args.kind == "subdivide":
        if parts is None:
            raise CliError("subdivide needs a 'parts' labelling with values 0, 1, 2")
        if any(p > 2 for p in parts):
            raise CliError("subdivide expects exactly three parts labelled 0, 1, 2")
        tri = TripartiteGraph.from_graph(g, parts)
        sub = gadget_subdivide(tri, args.d)
        _write(io.graph_to_dict(sub.graph, sub.part_of), args.output)
    else:
        gad = gadget_maxcut(g)
        lang = ConstraintLanguage.of(2, {"odd": gad.instance.constraints[0].relation} if gad.instance.constraints
                                     else {})
        _write(io.instance_to_dict(lang, gad.instance), args.output)
    return EXIT_OK


def cmd_diagnose(args) -> int:
    doc = io.load_instance(args.instance)
    lang, inst = doc.language, doc.instance
    report: dict = {"num_vars": inst.num_vars}
    verdict = classify(lang)
    report["verdict"] = "tractable" if verdict.tractable else "np-hard"
    mu = verdict.majority if verdict.tractable else None
    try:
        bi = binarize(inst, mu)
    except ValueError as exc:
        raise CliError(f"cannot split the instance into binary constraints: {exc}") from None
    if not args.raw:
        bi = enforce_consistency(bi)
    if bi is None:
        report["consistency"] = "a domain became empty"
        _print_or_dump(report, args.json)
        return EXIT_OK
    g = build_microstructure(bi)
    report["microstructure"] = microstructure_stats(g)
    hole = find_odd_hole_or_antihole(g, args.max_hole)
    report["hole"] = None if hole is None else {"kind": hole.kind, "vertices": [list(g.labels[v]) for v in hole.vertices]}
    s_types = {}
    for p in range(2, args.max_p + 1):
        found = find_S_type_subgraph(g, p)
        s_types[str(p)] = None if found is None else [list(g.labels[v]) for v in found]
    report["s_type"] = s_types
    if verdict.tractable:
        cert = find_arithmetical_deadlock(bi, verdict.local.mbar_pairs)
        report["deadlock"] = None if cert is None else {"indices": list(cert.indices),
                                                        "pairs": [list(p) for p in cert.pairs]}
    else:
        report["deadlock"] = "not applicable"
    report["max_hole"] = args.max_hole
    _print_or_dump(report, args.json)
    return EXIT_OK


def _print_or_dump(report: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(report, indent=2))
        return
    print(f"verdict: {report['verdict']}")
    if "consistency" in report:
        print(f"consistency: {report['consistency']}")
        return
    ms = report["microstructure"]
    print(f"microstructure: {ms['vertices']} vertices, {ms['edges']} edges, part sizes {ms['part_sizes']}")
    hole = report["hole"]
    if hole is None:
        print(f"no odd hole/antihole <= {report['max_hole']}")
    else:
        print(f"{hole['kind']} found: {hole['vertices']}")
    for p, found in report["s_type"].items():
        print(f"S-type p={p}: " + ("none" if found is None else str(found)))
    dl = report["deadlock"]
    print("deadlock: " + ("none" if dl is None else str(dl)))


def cmd_sweep(args) -> int:
    seed = args.seed if args.seed is not None else random.SystemRandom().randrange(2 ** 32)
    rng = random.Random(seed)
    checked = mismatches = unsat = languages = 0
    while checked < args.count:
        lang = random_tractable_language(rng)
        if not classify(lang).tractable:
            continue
        languages += 1
        for _ in range(args.per_language):
            inst = random_instance(rng, lang)
            res = solve(lang, inst)
            oracle = brute_force_solve(inst)
            checked += 1
            if isinstance(res, Unsatisfiable):
                unsat += 1
                ok = oracle.optimum is None
            else:
                ok = isinstance(res, Optimal) and res.measure == oracle.optimum
            if not ok:
                mismatches += 1
                print(f"mismatch on instance {checked}: solver {res}, oracle {oracle.optimum}")
    print(f"seed={seed} languages={languages} instances={checked} unsat={unsat} mismatches={mismatches}")
    return EXIT_OK if mismatches == 0 else EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="minhom", description="Minimum-cost homomorphism classifier and solver")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="decide tractability of a constraint language")
    p.add_argument("language")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("solve", help="solve a weighted instance")
    p.add_argument("instance")
    p.add_argument("--oracle-check", action="store_true", help="cross-check with brute force")
    p.add_argument("--lp-check", action="store_true", help="report the clique LP value and integrality")
    p.add_argument("--trace-consistency", action="store_true")
    p.add_argument("--shift", type=int, default=0, help="add this to every weight before solving")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("gadget", help="emit a reduction instance or graph")
    p.add_argument("kind", choices=["indepset", "subdivide", "maxcut"])
    p.add_argument("graph")
    p.add_argument("--cycle-length", type=int, default=None, help="indepset: odd cycle length")
    p.add_argument("--d", type=int, default=5, help="subdivide: odd target cycle length")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_gadget)

    p = sub.add_parser("diagnose", help="structural diagnostics of the consistent instance")
    p.add_argument("instance")
    p.add_argument("--max-hole", type=int, default=9)
    p.add_argument("--max-p", type=int, default=3)
    p.add_argument("--raw", action="store_true", help="skip consistency enforcement")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("sweep", help="seeded random comparison against brute force")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--per-language", type=int, default=5)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (io.FormatError, CliError, ValueError, TooLarge, OracleTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
