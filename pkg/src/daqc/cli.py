"""Command line entry point: ``daqc <subcommand> ...``.

Exit codes: 0 ok, 1 verification failed, 2 usage or malformed input,
3 incompatible input, 4 cap exceeded, 5 numerical failure. Errors are
reported on stderr as one JSON object ``{"error": code, "message": ...}``.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import compiler, experiments, io, polytope, verify
from .errors import DAQCError, ParseError
from .hamiltonian import ModelKind, TwoBodyHamiltonian, build_problem_vector
from .lp import solve_min_time
from .signs import DEFAULT_COLUMN_CAP, build_sign_matrix


def _n_range(text: str) -> tuple[int, int]:
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return int(lo), int(hi)
        return int(text), int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or N..M, got {text!r}") from None


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _emit(obj, out=None):
    text = json.dumps(obj, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_compile(args) -> int:
    hP = io.load_hamiltonian(args.hp)
    hS = io.load_hamiltonian(args.hs)
    schedule = compiler.compile(hP, hS, args.T, model=args.model, cap=args.cap)
    io.write_json(args.out, io.schedule_to_dict(schedule))
    b = build_problem_vector(hP, hS, args.T)
    report = compiler.bounds_report(b, achieved=schedule.total_time)
    _emit(report.to_dict())
    return 0


def cmd_bounds(args) -> int:
    hP = io.load_hamiltonian(args.hp)
    hS = io.load_hamiltonian(args.hs)
    b = build_problem_vector(hP, hS, args.T)
    achieved = None
    if args.solve:
        achieved = compiler.compile(hP, hS, args.T, cap=args.cap).total_time
    _emit(compiler.bounds_report(b, achieved=achieved).to_dict(), args.out)
    return 0


def cmd_verify(args) -> int:
    schedule = io.load_schedule(args.schedule)
    hP = io.load_hamiltonian(args.hp) if args.hp else schedule.problem
    hS = io.load_hamiltonian(args.hs) if args.hs else schedule.source
    if hP is None or hS is None:
        raise ParseError("schedule carries no Hamiltonians; pass --hp and --hs")
    report = verify.verify_couplings(schedule, hS, hP, tol=args.tol)
    if schedule.n <= args.dense_cap:
        report = report.merge(verify.matrix_oracle(schedule, hS, hP, cap=args.dense_cap))
        if schedule.model is ModelKind.ZZ:
            report = report.merge(verify.zz_unitary_oracle(schedule, hS, hP, cap=args.dense_cap))
    _emit(report.to_dict(), args.out)
    return 0 if report.ok else 1


def _problem_record(b):
    M = build_sign_matrix(b.n, b.model, cap=None)
    achieved = solve_min_time(M, b).objective
    report = compiler.bounds_report(b, achieved=achieved)
    return {
        "n": b.n,
        "model": b.model.value,
        "couplings": [k.label() for k in b.index],
        "b": [float(v) for v in b.values],
        "achieved": achieved,
        "upper": report.upper,
    }


def cmd_worst_case(args) -> int:
    model = ModelKind.parse(args.model)
    if args.all:
        if model is ModelKind.ZZ:
            problems = compiler.enumerate_worst_directions(args.n, model, args.alpha)
        else:
            problems = compiler.general_worst_problems(args.n, args.alpha)
    else:
        if args.pair:
            support = (args.pair, tuple(args.triple.split(",")))
        else:
            support = args.triangle or (1, 2, 3)
        problems = [compiler.worst_case_problem(args.n, model, support, args.signs, args.alpha)]
    for b in problems:
        sys.stdout.write(json.dumps(_problem_record(b)) + "\n")
    if args.hp_out or args.hs_out:
        b = problems[0]
        if args.hp_out:
            io.write_json(args.hp_out, io.hamiltonian_to_dict(TwoBodyHamiltonian.from_vector(b.n, model, b.values)))
        if args.hs_out:
            io.write_json(args.hs_out, io.hamiltonian_to_dict(TwoBodyHamiltonian.uniform(b.n, model)))
    return 0


def cmd_polytope(args) -> int:
    M = build_sign_matrix(args.n, args.model, cap=args.cap)
    facets = polytope.facet_enumeration(M, cap=args.ray_cap)
    centers = polytope.facet_center_problems(facets, M)
    if args.facets_out:
        io.write_json(args.facets_out, io.facets_to_list(facets))
    _emit({
        "n": args.n,
        "model": M.model.value,
        "dim": facets.dim,
        "vertices": M.n_columns,
        "facets": len(facets),
        "inradius": polytope.inradius(facets),
        "valid": polytope.validate(facets, M),
        "radius": facets.dim ** 0.5,
        "max_facet_center_time": max(p.objective for p in centers),
    }, args.out)
    return 0


def cmd_sweep(args) -> int:
    lo, hi = args.n
    jsonl = open(args.jsonl, "w") if args.jsonl else None
    try:
        records = experiments.run_sweep(
            args.model, lo, hi, args.samples, args.dist or experiments.DEFAULT_KINDS,
            seed=args.seed, workers=args.workers, jsonl=jsonl,
        )
    finally:
        if jsonl:
            jsonl.close()
    text = experiments.records_to_csv(records)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_gap_search(args) -> int:
    records = compiler.conjecture_gap_search(args.n, args.model, args.samples, args.seed, args.dist)
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        for r in records:
            out.write(json.dumps({
                "source": r.source, "b": [float(v) for v in r.values], "achieved": r.achieved,
                "conjecture": r.conjecture, "ratio": r.ratio, "violates": r.violates,
            }) + "\n")
    finally:
        if args.out:
            out.close()
    worst = max(records, key=lambda r: r.ratio)
    sys.stderr.write(json.dumps({"records": len(records), "max_ratio": worst.ratio,
                                 "violations": sum(r.violates for r in records)}) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="daqc", description="Minimal-time digital-analog schedules for two-body Hamiltonians.")
    sub = parser.add_subparsers(dest="command", required=True)
    models = [m.value for m in ModelKind]

    p = sub.add_parser("compile", help="synthesize a minimal-time schedule")
    p.add_argument("--hp", required=True, help="problem Hamiltonian JSON")
    p.add_argument("--hs", required=True, help="source Hamiltonian JSON")
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--model", choices=models)
    p.add_argument("--out", required=True, help="schedule JSON to write")
    p.add_argument("--cap", type=int, default=DEFAULT_COLUMN_CAP, help="max gate layers")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("bounds", help="lower, upper, legacy and conjectured bounds")
    p.add_argument("--hp", required=True)
    p.add_argument("--hs", required=True)
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--solve", action="store_true", help="also report the achieved time")
    p.add_argument("--cap", type=int, default=DEFAULT_COLUMN_CAP)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", help="check a schedule against its Hamiltonians")
    p.add_argument("--schedule", required=True)
    p.add_argument("--hp")
    p.add_argument("--hs")
    p.add_argument("--tol", type=float, help="coupling residual tolerance")
    p.add_argument("--dense-cap", type=int, default=verify.DENSE_CAP)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("worst-case", help="problems that saturate the upper bound")
    p.add_argument("--model", choices=models, default="zz")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--triangle", type=_int_list)
    p.add_argument("--pair", type=_int_list)
    p.add_argument("--triple", default="xx,yy,zz")
    p.add_argument("--signs", default="---")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--all", action="store_true", help="every worst direction")
    p.add_argument("--hp-out", help="write the first problem as a Hamiltonian file")
    p.add_argument("--hs-out", help="write a uniform source Hamiltonian file")
    p.set_defaults(func=cmd_worst_case)

    p = sub.add_parser("polytope", help="facets and inradius of the sign polytope")
    p.add_argument("--model", choices=models, default="zz")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--cap", type=int, default=DEFAULT_COLUMN_CAP)
    p.add_argument("--ray-cap", type=int, default=polytope.DEFAULT_RAY_CAP)
    p.add_argument("--facets-out")
    p.add_argument("--out")
    p.set_defaults(func=cmd_polytope)

    kinds = [k.value for k in experiments.Kind]
    p = sub.add_parser("sweep", help="randomized min/mean/max sweep to CSV")
    p.add_argument("--model", choices=models, default="zz")
    p.add_argument("--n", type=_n_range, required=True, help="N or N..M")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dist", choices=kinds, action="append")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--jsonl", help="per-sample audit dump")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("gap-search", help="achieved time against the conjectured bound")
    p.add_argument("--model", choices=models, default="zz")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dist", choices=kinds, action="append")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gap_search)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DAQCError as exc:
        sys.stderr.write(json.dumps({"error": exc.code, "message": str(exc)}) + "\n")
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
