"""Command-line front end.

Exit codes: 0 ok, 2 parse error, 3 internal oracle mismatch, 4 validation
failure, 5 bound domain error, 6 unrepairable erasure pattern.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import bounds, gf2, lab
from .gf2 import MatrixFormatError
from .locality import (
    HypothesisError,
    LocalityError,
    LemmaViolation,
    StructureError,
    Unrepairable,
    build_rps_chain,
    check_chain_lemmas,
    discover_delta2_locality,
    parse_repair_sets,
    plan_repair,
    simulate_repair,
    verify_locality,
)
from .matroid import BinaryMatroid
from .zlattice import (
    TrichotomyViolation,
    distance_via_flats,
    enumerate_cyclic_flats,
    lattice_to_dict,
    to_dot,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_MISMATCH = 3
EXIT_VALIDATION = 4
EXIT_DOMAIN = 5
EXIT_UNREPAIRABLE = 6

DEFAULT_SEED = 42


class CliError(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"cannot read {path}: {exc.strerror}") from None


def _load_matrix(path: str) -> gf2.BitMatrix:
    return gf2.parse_matrix(_read(path))


def _emit(obj: object) -> None:
    print(json.dumps(obj, indent=2, ensure_ascii=False))


def _seed(args: argparse.Namespace, attr: str = "seed") -> int:
    value = getattr(args, attr)
    if value is None:
        value = DEFAULT_SEED
        print(f"# using default seed {value}", file=sys.stderr)
    return value


def _symbol_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a fraction p/q, got {text!r}") from None


# -- commands ---------------------------------------------------------------


def cmd_analyze(args: argparse.Namespace) -> int:
    matrix = _load_matrix(args.matrix)
    check = gf2.validate_storage_code(matrix)
    report: dict = {"n": check.n, "k": check.rank, "d": check.d, "validation": check.to_dict()}
    if not check.ok:
        _emit(report)
        print("validation failed: not a non-degenerate storage code without replication", file=sys.stderr)
        return EXIT_VALIDATION
    m = BinaryMatroid(matrix)
    lat = enumerate_cyclic_flats(m)
    d_flats = distance_via_flats(m, lat)
    report["d_via_flats"] = d_flats
    report["cyclic_flats"] = len(lat)
    report["atoms"] = [gf2.symbols(z) for z in lat.atom_masks()]
    report["coatoms"] = [gf2.symbols(z) for z in lat.coatom_masks()]
    report["r_prime"] = discover_delta2_locality(m, lat).r_prime
    _emit(report)
    if d_flats != check.d:
        print(f"oracle mismatch: brute force d={check.d}, cyclic flats d={d_flats}", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_lattice(args: argparse.Namespace) -> int:
    m = BinaryMatroid(_load_matrix(args.matrix))
    lat = enumerate_cyclic_flats(m)
    if args.json:
        _emit(lattice_to_dict(lat))
        return EXIT_OK
    dot = to_dot(lat)
    if args.dot:
        Path(args.dot).write_text(dot, encoding="utf-8")
    else:
        sys.stdout.write(dot)
    return EXIT_OK


def _profile(args: argparse.Namespace):
    matrix = _load_matrix(args.matrix)
    sets = parse_repair_sets(_read(args.sets), matrix.ncols)
    m = BinaryMatroid(matrix)
    delta = args.delta
    r = args.r
    if delta is None:
        delta = min(gf2.min_distance(matrix, z) for z in sets)
    if r is None:
        r = max(z.bit_count() for z in sets) - delta + 1
    return matrix, m, sets, verify_locality(m, sets, r, delta)


def cmd_locality(args: argparse.Namespace) -> int:
    _, _, _, profile = _profile(args)
    _emit(profile.to_dict())
    return EXIT_OK


def cmd_chain(args: argparse.Namespace) -> int:
    _, m, sets, profile = _profile(args)
    seed = _seed(args) if args.picker == "random" else None
    chain = build_rps_chain(m, sets, picker=args.picker, seed=seed)
    out = {"chain": chain.to_dict(), "ell": profile.ell, "delta": profile.delta}
    try:
        out["lemmas"] = check_chain_lemmas(chain, profile.ell, profile.delta).to_dict()
    except LemmaViolation as exc:
        out["lemmas"] = {"ok": False, "problems": exc.problems}
        _emit(out)
        return EXIT_MISMATCH
    _emit(out)
    return EXIT_OK


def cmd_repair(args: argparse.Namespace) -> int:
    matrix, _, _, profile = _profile(args)
    erased = gf2.mask_from_symbols(args.erase)
    if erased & ~matrix.ground:
        raise CliError(EXIT_PARSE, f"erased symbols must lie in 1..{matrix.ncols}")
    plan = plan_repair(matrix, profile, erased)
    seed = _seed(args, "codeword_seed")
    ok = simulate_repair(matrix, plan, args.trials, seed)
    if args.json:
        _emit({"plan": plan.to_dict(), "simulation": {"trials": args.trials, "reconstructed": ok, "seed": seed}})
    else:
        print(f"tier: {plan.tier.value}")
        for eq in plan.equations:
            print(eq.text())
        print(f"verified: {ok}/{args.trials} random codewords reconstructed")
    return EXIT_OK if ok == args.trials else EXIT_MISMATCH


def cmd_bounds(args: argparse.Namespace) -> int:
    report = bounds.evaluate_bounds(args.n, args.k, args.r, args.delta, args.ell, args.alpha, args.d)
    if args.json:
        _emit(report.to_dict())
        return EXIT_OK
    for name, value in report.values.items():
        flag = ""
        if report.achieved(name):
            flag = "  ACHIEVED"
        elif report.d is not None and value < report.d:
            flag = "  VIOLATED"
        print(f"{name:<14}{value:>6}{flag}")
    for note in report.notes:
        print(f"# {note}")
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    rows = bounds.sweep(args.n, args.delta, range(args.r_min, args.r_max + 1), range(args.k_min, args.k_max + 1))
    text = bounds.sweep_csv(rows)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_cm(args: argparse.Namespace) -> int:
    kopt = bounds.KOPT_ESTIMATORS[args.estimator]
    table = bounds.cm_table(args.n, args.d, args.r, args.delta, kopt)
    out: dict = {
        "estimator": args.estimator,
        "t_range": "t >= 0",
        "per_t": [{"t": t, "length": rest, "value": v} for t, rest, v in table],
        "k_max": min(v for _, _, v in table),
    }
    if args.k is not None and args.ell is not None:
        out["comparison"] = bounds.compare_cm_vs_new(
            args.n, args.d, args.r, args.delta, args.ell, args.k, args.estimator
        ).to_dict()
    _emit(out)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    seed = _seed(args) if args.mode == "random" else DEFAULT_SEED
    spec = lab.InstanceSpec(args.n, args.k, args.mode, seed=seed, count=args.count)
    if args.suite == "structure":
        report = lab.verify_structure_suite(spec)
    else:
        if args.r is None or args.delta is None:
            raise CliError(EXIT_PARSE, "the castle suite needs --r and --delta")
        report = lab.verify_castle_suite(spec, args.r, args.delta)
    if args.out_dir:
        for i, failure in enumerate(report.failures):
            lab.write_counterexample(failure, Path(args.out_dir), f"{report.suite}_{i:04d}")
    _emit(report.to_dict())
    return EXIT_OK if report.ok else EXIT_MISMATCH


def cmd_search(args: argparse.Namespace) -> int:
    seed = _seed(args)
    candidates = [_load_matrix(p) for p in args.candidate]
    result = lab.search_achievers(
        args.n, args.k, args.d, args.r, args.delta, budget=args.budget, seed=seed,
        candidates=candidates, keep=args.keep,
    )
    _emit(result.to_dict())
    return EXIT_OK


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="binlrc", description="Binary LRC analysis via cyclic flats.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="parameters, validation, lattice summary")
    p.add_argument("matrix")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("lattice", help="lattice of cyclic flats as DOT")
    p.add_argument("matrix")
    p.add_argument("--dot", help="write DOT here instead of stdout")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_lattice)

    def with_sets(p: argparse.ArgumentParser) -> None:
        p.add_argument("matrix")
        p.add_argument("sets", help="repair-set file, lines like 'Z: 1,2,3'")
        p.add_argument("--r", type=int)
        p.add_argument("--delta", type=int)

    p = sub.add_parser("locality", help="verify declared repair sets")
    with_sets(p)
    p.set_defaults(func=cmd_locality)

    p = sub.add_parser("chain", help="build an rps-chain and check the step bounds")
    with_sets(p)
    p.add_argument("--picker", choices=["first", "random"], default="first")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("repair", help="plan and simulate erasure repair")
    with_sets(p)
    p.add_argument("--erase", type=_symbol_list, required=True)
    p.add_argument("--codeword-seed", type=int)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_repair)

    p = sub.add_parser("bounds", help="evaluate the distance bounds")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--ell", type=int)
    p.add_argument("--alpha", type=_fraction)
    p.add_argument("--d", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("sweep", help="old vs new bound CSV over (r, k)")
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--delta", type=int, default=3)
    p.add_argument("--r-min", type=int, default=3)
    p.add_argument("--r-max", type=int, default=10)
    p.add_argument("--k-min", type=int, default=2)
    p.add_argument("--k-max", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("cm", help="field-size aware dimension bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--ell", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--estimator", choices=sorted(bounds.KOPT_ESTIMATORS), default="plotkin")
    p.set_defaults(func=cmd_cm)

    p = sub.add_parser("verify", help="run a property suite")
    p.add_argument("--suite", choices=["structure", "castle"], default="structure")
    p.add_argument("--mode", choices=["exhaustive", "random"], default="exhaustive")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--r", type=int)
    p.add_argument("--delta", type=int)
    p.add_argument("--out-dir", help="write counterexamples here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="search for codes meeting a distance target")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--budget", type=int, default=1000)
    p.add_argument("--seed", type=int)
    p.add_argument("--keep", type=int, default=5)
    p.add_argument("--candidate", action="append", default=[], help="matrix file to try first")
    p.set_defaults(func=cmd_search)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "sweep" and args.k_max is None:
        args.k_max = args.n - 1
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except MatrixFormatError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (TrichotomyViolation, StructureError) as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (LocalityError, HypothesisError) as exc:
        print(f"validation failed: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except bounds.BoundDomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except Unrepairable as exc:
        print(f"unrepairable: {exc}", file=sys.stderr)
        return EXIT_UNREPAIRABLE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
