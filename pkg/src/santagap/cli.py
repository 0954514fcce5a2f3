"""Command-line surface: JSON on stdout, exit 0/1/2/64.

Exit codes: 0 success, 1 validation failure (bad input, infeasible
verdicts asked to be feasible, missing files), 2 inconclusive within
budget, 64 usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import topology
from .allocation_graph import build_H, build_J
from .gap_report import (
    TSV_HEADER,
    BatchConfig,
    run_gap_experiment,
    verify_convex_combination,
)
from .graphs import graph_from_json, graph_to_json
from .instance import InstanceError, OracleCapError, brute_force_opt, load_instance
from .lp_core import DualSolution, LpCapError, compute_t_star, verify_dual
from .rational import RationalParseError, format_rational, parse_rational
from .two_values import f_gap, rc_table

USAGE_EXIT = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(doc) -> None:
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _fail(message: str, code: int = 1) -> int:
    _emit({"error": message})
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="santagap", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tstar", help="exact configuration-LP optimum T*")
    p.add_argument("instance")

    p = sub.add_parser("opt", help="exact OPT by exhaustive search")
    p.add_argument("instance")

    p = sub.add_parser("gap", help="T*, OPT and their ratio")
    p.add_argument("instance")
    p.add_argument("--bound", default="53/15")

    p = sub.add_parser("eta", help="eta of a graph JSON file")
    p.add_argument("graph")

    p = sub.add_parser("de-verify", help="replay a DE-sequence trace")
    p.add_argument("graph")
    p.add_argument("trace")

    p = sub.add_parser("de-search", help="search for a DE-sequence")
    p.add_argument("graph")
    p.add_argument("--objective", choices=["ko", "edgeless"], default="ko")
    p.add_argument("--budget", type=int, default=5000)

    p = sub.add_parser("hypergraph", help="emit H(alpha) (or its thin part) as JSON")
    p.add_argument("instance")
    p.add_argument("--alpha", required=True)
    p.add_argument("--target", default=None, help="defaults to T*")
    p.add_argument("--thin", action="store_true", help="emit J(alpha) instead")

    p = sub.add_parser("rc-table", help="(c, r_c, c/r_c) table")
    p.add_argument("--max", type=int, default=30)
    p.add_argument("--tsv", action="store_true")

    p = sub.add_parser("f-gap", help="two-values gap bound f(x)")
    p.add_argument("x")

    p = sub.add_parser("verify-coefficients", help="53/15 convex combination")
    p.add_argument("--T", required=True)
    p.add_argument("--m", required=True)

    p = sub.add_parser("dual-check", help="verify a dual solution JSON")
    p.add_argument("instance")
    p.add_argument("target")
    p.add_argument("dual")

    p = sub.add_parser("experiment", help="integrality-gap batch")
    p.add_argument("--kind", choices=["random", "two_value"], default="random")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--players", type=int, default=3)
    p.add_argument("--resources", type=int, default=7)
    p.add_argument("--density", type=float, default=0.6)
    p.add_argument("--eps", default="1/4")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bound", default="53/15")
    p.add_argument("--tsv", action="store_true")
    return parser


def cli_main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(parser.format_usage())
        sys.stderr.write(f"error: {exc}\n")
        return USAGE_EXIT
    try:
        return _dispatch(args)
    except (InstanceError, RationalParseError, FileNotFoundError) as exc:
        return _fail(str(exc))
    except (OracleCapError, LpCapError, topology.EtaCapError) as exc:
        return _fail(f"cap exceeded: {exc}", 1)


def _dispatch(args) -> int:
    if args.command == "tstar":
        inst = load_instance(args.instance)
        res = compute_t_star(inst)
        _emit(
            {
                "schema": "santa-gap/1",
                "t_star": format_rational(res.t_star),
                "candidates": res.candidates_examined,
                "probes": res.probes,
            }
        )
        return 0

    if args.command == "opt":
        inst = load_instance(args.instance)
        res = brute_force_opt(inst)
        _emit(
            {
                "schema": "santa-gap/1",
                "opt": format_rational(res.opt_value),
                "witness": {
                    p: sorted(s) for p, s in res.witness.assignment.items()
                },
            }
        )
        return 0

    if args.command == "gap":
        inst = load_instance(args.instance)
        bound = parse_rational(args.bound)
        t_star = compute_t_star(inst).t_star
        opt = brute_force_opt(inst).opt_value
        doc = {
            "schema": "santa-gap/1",
            "t_star": format_rational(t_star),
            "opt": format_rational(opt),
        }
        if opt == 0:
            doc["gap"] = "inf"
            doc["bound_respected"] = False
        else:
            gap = t_star / opt
            doc["gap"] = format_rational(gap)
            doc["bound_respected"] = gap <= bound
        _emit(doc)
        return 0

    if args.command == "eta":
        g, _ = _load_graph(args.graph)
        value = topology.eta(g)
        _emit({"eta": "inf" if value == topology.INF else int(value)})
        return 0

    if args.command == "de-verify":
        g, _ = _load_graph(args.graph)
        with open(args.trace, "r", encoding="utf-8") as fh:
            trace = json.load(fh)
        seq = topology.sequence_from_json(g, trace)
        res = topology.execute_sequence(g, seq)
        doc = {
            "valid": res.valid,
            "ell": res.ell,
            "final_vertices": len(res.final.vertices),
            "final_edges": len(res.final.edges),
            "eta_drop_certified": res.eta_drop_certified,
        }
        if not res.valid:
            doc["failed_at"] = res.failed_at
        _emit(doc)
        return 0 if res.valid else 1

    if args.command == "de-search":
        g, _ = _load_graph(args.graph)
        out = topology.search_de_sequence(g, args.objective, budget=args.budget)
        doc = {
            "found": out.found,
            "conclusive": out.conclusive,
            "nodes": out.nodes,
        }
        if out.found:
            doc["trace"] = out.sequence.to_json()
        _emit(doc)
        if out.found:
            return 0
        return 2 if not out.conclusive else 0

    if args.command == "hypergraph":
        inst = load_instance(args.instance)
        alpha = parse_rational(args.alpha)
        target = (
            parse_rational(args.target)
            if args.target is not None
            else compute_t_star(inst).t_star
        )
        h = build_H(inst, target, alpha)
        if args.thin:
            h = build_J(h)
        _emit(
            graph_to_json(
                h.graph,
                parts=h.parts,
                alpha=format_rational(h.alpha),
                target=format_rational(h.target),
            )
        )
        return 0

    if args.command == "rc-table":
        rows = rc_table(args.max)
        if args.tsv:
            sys.stdout.write("c\tr_c\tratio\n")
            for row in rows:
                sys.stdout.write(
                    f"{row.c}\t{row.r_c}\t{format_rational(row.ratio)}\n"
                )
        else:
            _emit(
                [
                    {
                        "c": row.c,
                        "r_c": row.r_c,
                        "ratio": format_rational(row.ratio),
                    }
                    for row in rows
                ]
            )
        return 0

    if args.command == "f-gap":
        x = parse_rational(args.x)
        value = f_gap(x)
        _emit(
            {
                "x": format_rational(x),
                "f": format_rational(value),
                "decimal": float(value),
            }
        )
        return 0

    if args.command == "verify-coefficients":
        cert = verify_convex_combination(parse_rational(args.T), parse_rational(args.m))
        _emit(cert.to_json())
        return 0

    if args.command == "dual-check":
        inst = load_instance(args.instance)
        target = parse_rational(args.target)
        with open(args.dual, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        sol = DualSolution(
            {p: parse_rational(str(v)) for p, v in doc["y"].items()},
            {r: parse_rational(str(v)) for r, v in doc["z"].items()},
        )
        check = verify_dual(inst, target, sol)
        out = {
            "feasible": check.feasible,
            "objective": format_rational(check.objective),
        }
        if check.violated is not None:
            out["violated"] = {
                "owner": check.violated.owner,
                "resources": sorted(check.violated.resources),
            }
        _emit(out)
        return 0

    if args.command == "experiment":
        config = BatchConfig(
            kind=args.kind,
            count=args.count,
            num_players=args.players,
            num_resources=args.resources,
            density=args.density,
            eps=parse_rational(args.eps),
        )
        reports = run_gap_experiment(config, parse_rational(args.bound), args.seed)
        if args.tsv:
            sys.stdout.write(TSV_HEADER + "\n")
            for rep in reports:
                sys.stdout.write(rep.to_tsv_row() + "\n")
        else:
            _emit([rep.to_json() for rep in reports])
        exceeded = any(rep.bound_respected is False for rep in reports)
        return 1 if exceeded else 0

    raise AssertionError(f"unhandled command {args.command!r}")


def _load_graph(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return graph_from_json(json.load(fh))


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
