"""Command-line front end.

Exit codes: 0 success, 1 mismatch or violation, 2 usage error or malformed
input, 3 infeasible instance.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import harness
from .model import (Infeasible, InstanceError, SolveReport, Violation, dump_instance,
                    load_instance, matching_to_doc, pairs_from_doc, verify_matching)
from .oracles import TooLarge

OK, MISMATCH, USAGE, INFEASIBLE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from exc


def _write_json(doc, path: str | None) -> None:
    text = json.dumps(doc)
    if path in (None, "-"):
        print(text)
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def _csv_list(text: str, conv=str) -> list:
    try:
        return [conv(v) for v in text.split(",") if v]
    except ValueError as exc:
        raise UsageError(f"bad list {text!r}") from exc


def cmd_solve(args) -> int:
    inst = load_instance(_read_json(args.input))
    t0 = time.perf_counter()
    res = harness.ALGOS[args.algo](inst)
    if not isinstance(res, SolveReport):
        res = SolveReport(args.algo, res.cost, res.matching, time.perf_counter() - t0, inst.n)
    _write_json(matching_to_doc(inst, res), args.output)
    return OK


def cmd_verify(args) -> int:
    inst = load_instance(_read_json(args.input))
    doc = _read_json(args.matching)
    pairs = pairs_from_doc(inst, doc)
    try:
        cost = verify_matching(inst, pairs)
    except Violation as v:
        _write_json({"ok": False, "violations": v.problems}, None)
        return MISMATCH
    stated = doc.get("cost")
    if stated is not None and stated != cost:
        _write_json({"ok": False, "violations": [f"stated cost {stated} != recomputed {cost}"]}, None)
        return MISMATCH
    _write_json({"ok": True, "cost": cost}, None)
    return OK


def cmd_gen(args) -> int:
    spec = harness.GenSpec(args.seed, args.ns, args.nt, args.coord_range, args.max_demand,
                           args.shape, not args.allow_infeasible)
    _write_json(dump_instance(harness.gen_instance(spec)), args.out)
    return OK


def cmd_compare(args) -> int:
    algos = _csv_list(args.algos)
    for a in algos:
        if a not in harness.ALGOS:
            raise UsageError(f"unknown algorithm {a!r}")
    spec = harness.TrialSpec(args.seed, args.max_n, args.max_demand, args.coord_range,
                             max_pairs=20 if "enum" in algos else None)
    rep = harness.compare(algos, spec, args.trials, jobs=args.jobs)
    out = {"algos": algos, "trials": args.trials, "mismatches": len(rep.mismatches)}
    if rep.mismatches:
        out["first"] = rep.mismatches[0].to_doc()
    _write_json(out, None)
    return OK if rep.ok else MISMATCH


def cmd_bench(args) -> int:
    if args.algo not in harness.ALGOS:
        raise UsageError(f"unknown algorithm {args.algo!r}")
    sizes = _csv_list(args.sizes, int)
    res = harness.bench_run(sizes, args.algo, args.seed, args.demand_scale, args.reps)
    res.write_csv(args.csv)
    _write_json({"time_slope": res.time_slope, "step_slope": res.step_slope}, None)
    return OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="linematch", description="Demand matching of two point sets on a line.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="solve an instance document")
    s.add_argument("--algo", choices=sorted(harness.ALGOS), default="ommd")
    s.add_argument("--input", required=True)
    s.add_argument("--output")
    s.set_defaults(fn=cmd_solve)

    v = sub.add_parser("verify", help="check a matching document against an instance")
    v.add_argument("--input", required=True)
    v.add_argument("--matching", required=True)
    v.set_defaults(fn=cmd_verify)

    g = sub.add_parser("gen", help="generate a seeded instance")
    g.add_argument("--ns", type=int, required=True)
    g.add_argument("--nt", type=int, required=True)
    g.add_argument("--max-demand", type=int, default=1)
    g.add_argument("--coord-range", type=int, default=100)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--shape", choices=harness.SHAPES, default="uniform")
    g.add_argument("--allow-infeasible", action="store_true",
                   help="skip clamping demands to the opposite set size")
    g.add_argument("--out", default="-")
    g.set_defaults(fn=cmd_gen)

    c = sub.add_parser("compare", help="differential test of solvers and oracles")
    c.add_argument("--algos", required=True)
    c.add_argument("--trials", type=int, required=True)
    c.add_argument("--seed", type=int, required=True)
    c.add_argument("--max-n", type=int, required=True)
    c.add_argument("--max-demand", type=int, default=1)
    c.add_argument("--coord-range", type=int, default=100)
    c.add_argument("--jobs", type=int, default=1)
    c.set_defaults(fn=cmd_compare)

    b = sub.add_parser("bench", help="scaling benchmark with log-log slopes")
    b.add_argument("--algo", required=True)
    b.add_argument("--sizes", required=True)
    b.add_argument("--seed", type=int, required=True)
    b.add_argument("--csv", required=True)
    b.add_argument("--demand-scale", choices=("linear", "const"), default="linear")
    b.add_argument("--reps", type=int, default=3)
    b.set_defaults(fn=cmd_bench)
    return p


def run_cli(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.fn(args)
    except UsageError as exc:
        print(f"linematch: {exc}", file=sys.stderr)
        return USAGE
    except Infeasible as exc:
        print(f"linematch: infeasible: {exc}", file=sys.stderr)
        return INFEASIBLE
    except (InstanceError, TooLarge, harness.SpecError) as exc:
        print(f"linematch: {type(exc).__name__}: {exc}", file=sys.stderr)
        return USAGE


def main() -> None:
    sys.exit(run_cli())
