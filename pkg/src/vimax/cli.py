"""Command-line front end.

Exit status: 0 ok, 2 usage error, 3 data-integrity error, 4 size-guard refusal.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from vimax import __version__
from vimax.errors import (
    DataIntegrityError,
    ParseError,
    SizeLimitError,
    UnsupportedStructureError,
    ValidationError,
)
from vimax.flow import instance_vitality
from vimax.generators import DRUG_BOSSES, gen_gnm, gen_grid, load_drug_network
from vimax.graph import PAIR_CONVENTIONS, Instance, parse_instance, write_instance
from vimax.mip import build_mip, import_solution, write_lp
from vimax.preprocess import q_set, simplify
from vimax.reduction import parse_dimacs, reduce_3sat
from vimax.solvers import SAParams, Solution, anneal, solve_exact, solve_single

EXIT_USAGE, EXIT_DATA, EXIT_SIZE = 2, 3, 4


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load(args) -> Instance:
    inst = parse_instance(_read(args.instance))
    changes = {}
    if getattr(args, "pairs", None):
        changes["pairs"] = args.pairs
    if getattr(args, "budget", None) is not None:
        changes["budget"] = args.budget
    if changes:
        inst = inst.replace(**changes)
    if getattr(args, "key", None):
        try:
            inst = inst.with_key(args.key)
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None
    return inst


def _descriptor(inst: Instance, source: str) -> dict:
    g = inst.graph
    return {
        "source": source,
        "vertices": g.n,
        "edges": len(g.edges()),
        "key": g.names[inst.k],
        "budget": inst.budget,
        "pairs": inst.pairs,
    }


def _result(inst: Instance, sol: Solution) -> dict:
    return {
        "method": sol.method,
        "best_vitality": sol.vitality,
        "vitality_effect": sol.vitality_effect,
        "subset_size": len(sol.removed),
        "subset": sol.names(inst),
        "elapsed": round(sol.elapsed, 6),
        "evaluations": sol.evaluations,
    }


def run_report(inst: Instance, source: str, solutions: list[Solution], seed: int | None) -> dict:
    """Assemble the JSON report, re-checking every reported vitality."""
    initial = instance_vitality(inst)
    for sol in solutions:
        again = instance_vitality(inst, sol.removed)
        if again != sol.vitality or again - initial != sol.vitality_effect:
            raise AssertionError(f"{sol.method}: reported vitality does not reproduce")
    return {
        "instance": _descriptor(inst, source),
        "initial_vitality": initial,
        "results": [_result(inst, s) for s in solutions],
        "environment": {"version": __version__, "seed": seed},
    }


def _print_solution(args, inst: Instance, sol: Solution) -> None:
    if args.json:
        report = run_report(inst, args.instance, [sol], getattr(args, "seed", None))
        print(json.dumps(report, indent=2, sort_keys=True))
        return
    print(f"method          {sol.method}")
    print(f"vitality        {sol.vitality}")
    print(f"vitality effect {sol.vitality_effect:+d}")
    print(f"removed         {' '.join(sol.names(inst)) or '-'}")
    print(f"evaluations     {sol.evaluations}")
    print(f"elapsed         {sol.elapsed:.3f}s")


def cmd_vitality(args) -> None:
    inst = _load(args)
    value = instance_vitality(inst)
    if args.json:
        print(json.dumps({"instance": _descriptor(inst, args.instance), "vitality": value}, sort_keys=True))
    else:
        print(value)


def cmd_exact(args) -> None:
    inst = _load(args)
    _print_solution(args, inst, solve_exact(inst))


def cmd_single(args) -> None:
    inst = _load(args)
    _print_solution(args, inst, solve_single(inst))


def _sa_params(args) -> SAParams:
    return SAParams(
        max_iterations=args.iterations,
        cooling_factor=args.cooling,
        pair_toggle_probability=args.pair_prob,
        seed=args.seed,
    )


def cmd_anneal(args) -> None:
    inst = _load(args)
    _print_solution(args, inst, anneal(inst, _sa_params(args)))


def cmd_qset(args) -> None:
    inst = _load(args)
    names = sorted(inst.graph.names[v] for v in q_set(inst.graph, inst.k))
    if args.json:
        print(json.dumps({"q_set": names, "size": len(names)}))
    else:
        print(" ".join(names))


def cmd_simplify(args) -> None:
    inst = _load(args)
    simp = simplify(inst)
    _emit(write_instance(simp.instance), args.output)
    if args.mapping:
        g0, g1 = inst.graph, simp.instance.graph
        mapping = {
            "origin": {g1.names[v]: sorted(g0.names[x] for x in xs) for v, xs in simp.origin.items()},
            "cut_vertex": {g0.names[t]: g0.names[v] for t, v in simp.component_of.items()},
        }
        Path(args.mapping).write_text(json.dumps(mapping, indent=2, sort_keys=True) + "\n")


def cmd_export_mip(args) -> None:
    inst = _load(args)
    _emit(write_lp(build_mip(inst, strengthen=args.strengthen)), args.output)


def cmd_import_sol(args) -> None:
    inst = _load(args)
    sol = import_solution(_read(args.solution), inst)
    _print_solution(args, inst, sol)


def cmd_reduce(args) -> None:
    r = reduce_3sat(parse_dimacs(_read(args.cnf)))
    header = f"# 3SAT gadget: M={r.M} C={r.C}\n"
    _emit(header + write_instance(r.instance), args.output)


def cmd_gen(args) -> None:
    if args.kind == "grid":
        inst = gen_grid(args.size, args.seed, args.budget)
    else:
        if args.n is None or args.m is None:
            raise UsageError("gen gnm needs --n and --m")
        inst = gen_gnm(args.n, args.m, args.cap_max, args.seed, args.budget)
    _emit(write_instance(inst), args.output)


BENCH_COLUMNS = [
    "dataset", "capacity", "V", "E", "m", "key", "orig_vitality",
    "single_best", "single_incr", "single_time",
    "exact_best", "exact_incr", "exact_time", "exact_S",
    "sa_best", "sa_incr", "sa_time", "sa_S",
]


def _incr(best: int, orig: int) -> str:
    return f"{100 * (best - orig) / orig:.2f}" if orig else "0.00"


def bench_rows(data_text: str, seed: int, iterations: int, budget: int) -> list[dict]:
    rows = []
    for unit in (True, False):
        base = load_drug_network(data_text, unit_cap=unit, budget=budget)
        for boss in DRUG_BOSSES:
            inst = base.with_key(boss)
            single = solve_single(inst)
            exact = solve_exact(inst)
            sa = anneal(inst, SAParams(max_iterations=iterations, seed=seed))
            orig = instance_vitality(inst)
            rows.append({
                "dataset": "drug", "capacity": "unit" if unit else "general",
                "V": inst.graph.n, "E": len(inst.graph.edges()), "m": inst.budget, "key": boss,
                "orig_vitality": orig,
                "single_best": single.vitality, "single_incr": _incr(single.vitality, orig),
                "single_time": f"{single.elapsed:.2f}",
                "exact_best": exact.vitality, "exact_incr": _incr(exact.vitality, orig),
                "exact_time": f"{exact.elapsed:.2f}", "exact_S": len(exact.removed),
                "sa_best": sa.vitality, "sa_incr": _incr(sa.vitality, orig),
                "sa_time": f"{sa.elapsed:.2f}", "sa_S": len(sa.removed),
            })
    return rows


def cmd_bench(args) -> None:
    if args.dataset != "drug":
        raise UsageError("only the drug dataset has a benchmark table")
    rows = bench_rows(_read(args.data), args.seed, args.iterations, args.budget or 5)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    _emit(buf.getvalue(), args.output)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vimax", description="All-pairs vitality maximisation")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def solver_args(p, with_seed=True):
        p.add_argument("instance", help="instance file ('-' for stdin)")
        p.add_argument("--key", help="override the key vertex")
        p.add_argument("--budget", type=int, help="override the removal budget")
        p.add_argument("--pairs", choices=PAIR_CONVENTIONS, help="override the pair convention")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("vitality", help="print the key vertex's all-pairs vitality")
    solver_args(p)
    p.set_defaults(func=cmd_vitality)
    p = sub.add_parser("exact", help="exact search over the candidate pool")
    solver_args(p)
    p.set_defaults(func=cmd_exact)
    p = sub.add_parser("single", help="best single-vertex removal")
    solver_args(p)
    p.set_defaults(func=cmd_single)
    p = sub.add_parser("anneal", help="simulated annealing with a final local search")
    solver_args(p)
    p.add_argument("--iterations", type=int, default=10_000)
    p.add_argument("--cooling", type=float, default=0.95)
    p.add_argument("--pair-prob", type=float, default=0.5)
    p.set_defaults(func=cmd_anneal)
    p = sub.add_parser("qset", help="list vertices never worth removing")
    solver_args(p)
    p.set_defaults(func=cmd_qset)
    p = sub.add_parser("simplify", help="write the simplified weighted instance")
    solver_args(p)
    p.add_argument("-o", "--output")
    p.add_argument("--mapping", help="write the vertex mapping as JSON here")
    p.set_defaults(func=cmd_simplify)
    p = sub.add_parser("export-mip", help="write the MIP in CPLEX LP format")
    solver_args(p)
    p.add_argument("-o", "--output")
    p.add_argument("--strengthen", action="store_true", help="add the pruning constraints")
    p.set_defaults(func=cmd_export_mip)
    p = sub.add_parser("import-sol", help="validate an external solver solution")
    solver_args(p)
    p.add_argument("solution", help="'name value' solution file")
    p.set_defaults(func=cmd_import_sol)

    p = sub.add_parser("reduce-3sat", help="DIMACS CNF -> reduction gadget instance")
    p.add_argument("cnf")
    p.add_argument("-o", "--output")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("gen", help="generate a benchmark instance")
    p.add_argument("kind", choices=("grid", "gnm"))
    p.add_argument("--size", type=int, default=5, help="grid side length")
    p.add_argument("--n", type=int, help="G(n,m) vertex count")
    p.add_argument("--m", type=int, help="G(n,m) edge count")
    p.add_argument("--cap-max", type=int, default=5)
    p.add_argument("--budget", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="reproduce the drug-network results table as CSV")
    p.add_argument("--dataset", default="drug")
    p.add_argument("--data", required=True, help="call-count edge list")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iterations", type=int, default=10_000)
    p.add_argument("--budget", type=int)
    p.add_argument("-o", "--output")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
        return 0
    except (UsageError, KeyError) as exc:
        status, exc_type, message = EXIT_USAGE, "usage", str(exc)
    except (ParseError, DataIntegrityError, ValidationError, UnsupportedStructureError) as exc:
        status, exc_type, message = EXIT_DATA, type(exc).__name__, str(exc)
    except SizeLimitError as exc:
        status, exc_type, message = EXIT_SIZE, type(exc).__name__, str(exc)
    except ValueError as exc:
        status, exc_type, message = EXIT_USAGE, "usage", str(exc)
    if getattr(args, "json", False):
        print(json.dumps({"error": {"type": exc_type, "message": message, "exit_status": status}}))
    else:
        print(f"vimax: error: {message}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
