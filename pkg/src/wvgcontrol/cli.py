"""Batch command-line surface.

Subcommands: ``index`` (exact Penrose-Banzhaf index of one player),
``control`` (decide a control-by-deleting-players instance), ``reduce``
(compile a DIMACS formula into a gadget instance file), ``oracle``
(formula oracles) and ``verify`` (run a verification suite).

Exact fractions are the primary output; decimal renderings are cosmetic
and labelled as such.  Exit codes: 0 = command completed (a NO verdict is
a completed command), 1 = a verification suite failed, 2 = input error,
3 = an engine refused the instance under its budget.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

from . import __version__
from .control import (
    ENGINE_CHOICES,
    Exhaustive,
    Restricted,
    Sampled,
    compute_index,
    solve_control,
)
from .engines import EngineBudget
from .errors import BandStructureError, BudgetExceededError, InputError
from .formulas import count_sat, e_exact_sat, e_minority_sat, parse_dimacs
from .game import ExactIndex, Game
from .gadgets import ControlInstance, Goal, build_decrease, build_maintain, build_nonincrease, exactify
from .serialize import dump_instance, load_game, load_instance
from .verify import SUITES, SuiteOptions, run_suite

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


def _digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()[:16]


def _echo(args: argparse.Namespace, path: Path) -> None:
    print(f"command: {' '.join(sys.argv[1:])}")
    print(f"input:   {path} (sha256/16 {_digest(path)})")


def _fraction_line(label: str, index: ExactIndex) -> str:
    return f"{label}: {index} (~ {index.decimal()}, decimal is cosmetic)"


def _budget_from(args: argparse.Namespace) -> EngineBudget:
    return EngineBudget(
        max_enum_players=args.budget_enum,
        max_mitm_half=args.budget_mitm_half,
        max_dp_quota=args.budget_dp_quota,
    )


def _load_any_instance(path: Path) -> ControlInstance | Game:
    """Instance document if it has instance fields, else a bare game."""
    text = path.read_text()
    try:
        document = json.loads(text)
    except json.JSONDecodeError as error:
        raise InputError(f"{path}: not valid JSON: {error}")
    if isinstance(document, dict) and "distinguished" in document:
        return load_instance(text)
    return load_game(text)


def cmd_index(args: argparse.Namespace) -> int:
    path = Path(args.input)
    loaded = _load_any_instance(path)
    budget = _budget_from(args)
    if isinstance(loaded, Game):
        if args.player is None:
            raise InputError("a bare game document needs --player")
        instance = ControlInstance(
            game=loaded, distinguished=args.player, budget=0, goal=Goal.DECREASE
        )
    else:
        instance = loaded
        if args.player is not None and args.player != instance.distinguished:
            # Indices of non-distinguished players never use band metadata.
            instance = ControlInstance(
                game=instance.game,
                distinguished=args.player,
                budget=0,
                goal=Goal.DECREASE,
            )
    _echo(args, path)
    started = time.perf_counter()
    index, engine_used = compute_index(instance, args.engine, budget)
    elapsed = time.perf_counter() - started
    print(f"engine:  {engine_used}")
    print(_fraction_line(f"index of player {instance.distinguished}", index))
    print(f"time:    {elapsed:.3f}s")
    return EXIT_OK


def cmd_control(args: argparse.Namespace) -> int:
    path = Path(args.input)
    loaded = _load_any_instance(path)
    budget = _budget_from(args)
    if isinstance(loaded, Game):
        missing = [
            flag
            for flag, value in (
                ("--player", args.player),
                ("--deletions", args.deletions),
                ("--goal", args.goal),
            )
            if value is None
        ]
        if missing:
            raise InputError(
                f"a bare game document needs {', '.join(missing)} on the command line"
            )
        instance = ControlInstance(
            game=loaded,
            distinguished=args.player,
            budget=args.deletions,
            goal=Goal(args.goal.upper()),
        )
    else:
        instance = loaded
        if args.goal is not None:
            instance = ControlInstance(
                game=instance.game,
                distinguished=instance.distinguished,
                budget=instance.budget,
                goal=Goal(args.goal.upper()),
                groups=instance.groups,
                bands=instance.bands,
                a_players=instance.a_players,
                b_players=instance.b_players,
                meta=dict(instance.meta),
            )
    if args.mode == "exhaustive":
        mode = Exhaustive()
    elif args.mode == "sampled":
        mode = Sampled(seed=args.seed, trials=args.trials)
    else:
        if not args.groups:
            raise InputError("restricted mode needs --groups")
        mode = Restricted(tuple(args.groups.split(",")))
    _echo(args, path)
    started = time.perf_counter()
    report = solve_control(instance, args.engine, mode, budget)
    elapsed = time.perf_counter() - started
    print(f"goal:    {report.goal.value}")
    print(f"engine:  {report.engine}")
    print(f"verdict: {report.verdict}")
    print(_fraction_line("index before", report.index_before))
    if report.witness is not None:
        print(f"witness: {report.witness.describe()} (players {sorted(report.witness.players)})")
        print(_fraction_line("index after", report.index_after_witness))
        if report.reverified_with:
            print(f"witness re-verified with the {report.reverified_with} engine")
    if report.min_index_seen is not None:
        print(_fraction_line("lowest index seen", report.min_index_seen))
        print(_fraction_line("highest index seen", report.max_index_seen))
    print(f"candidates evaluated: {report.candidates_evaluated}")
    if report.trials is not None:
        print(f"sampling: {report.trials} trials, seed {report.seed}")
    print(f"time:    {elapsed:.3f}s")
    return EXIT_OK


def cmd_reduce(args: argparse.Namespace) -> int:
    path = Path(args.cnf)
    formula = parse_dimacs(path.read_text(), strip_tautologies=args.strip_tautologies)
    strict = not args.relaxed
    if args.kind == "decrease":
        instance = build_decrease(formula, args.k, strict=strict)
    elif args.kind == "nonincrease":
        instance = build_nonincrease(formula, args.k, strict=strict)
    else:
        if args.ell is None:
            raise InputError("maintain reductions need --ell")
        ell = args.ell
        if args.exactify:
            formula, _, ell = exactify(formula, args.k, ell)
        instance = build_maintain(formula, args.k, ell, strict=strict)
    out = Path(args.output)
    out.write_text(dump_instance(instance))
    _echo(args, path)
    print(f"kind:    {args.kind} ({instance.meta.get('mode')} mode)")
    print(f"players: {instance.game.num_players}, budget {instance.budget}")
    print(f"wrote:   {out}")
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace) -> int:
    path = Path(args.cnf)
    formula = parse_dimacs(path.read_text(), strip_tautologies=args.strip_tautologies)
    _echo(args, path)
    started = time.perf_counter()
    if args.kind == "count-sat":
        print(f"#SAT = {count_sat(formula)}")
    elif args.kind == "e-minority-sat":
        if args.k is None:
            raise InputError("e-minority-sat needs --k")
        verdict, prefix = e_minority_sat(formula, args.k)
        print(f"verdict: {'YES' if verdict else 'NO'}")
        if prefix is not None:
            print(f"witness prefix: {''.join(str(b) for b in prefix)}")
    else:
        if args.k is None or args.ell is None:
            raise InputError("e-exact-sat needs --k and --ell")
        verdict, prefix = e_exact_sat(formula, args.k, args.ell)
        print(f"verdict: {'YES' if verdict else 'NO'}")
        if prefix is not None:
            print(f"witness prefix: {''.join(str(b) for b in prefix)}")
    print(f"time:    {time.perf_counter() - started:.3f}s")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    options = SuiteOptions(seed=args.seed, trials=args.trials)
    failures = 0
    for name in names:
        print(f"== suite {name}")
        started = time.perf_counter()
        for check in run_suite(name, options):
            status = "PASS" if check.passed else "FAIL"
            detail = f"  [{check.detail}]" if check.detail else ""
            print(f"  {status}  {check.name}{detail}")
            failures += 0 if check.passed else 1
        print(f"  ({time.perf_counter() - started:.2f}s)")
    if failures:
        print(f"{failures} check(s) FAILED")
        return EXIT_CHECK_FAILED
    print("all checks passed")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wvg",
        description="Exact power indices, deletion control and hardness gadgets "
        "for weighted voting games.",
    )
    parser.add_argument("--version", action="version", version=f"wvg {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--engine", choices=ENGINE_CHOICES, default="auto", help="index engine"
    )
    common.add_argument("--seed", type=int, default=20240817, help="RNG seed")
    common.add_argument("--budget-enum", type=int, default=24, metavar="N",
                        help="max co-players for the enumeration engine")
    common.add_argument("--budget-mitm-half", type=int, default=22, metavar="N",
                        help="max half size for meet-in-the-middle")
    common.add_argument("--budget-dp-quota", type=int, default=2_000_000, metavar="Q",
                        help="max quota for the weight-table engine")
    common.add_argument("--relaxed", action="store_true",
                        help="allow oracle-scale gadget parameters (1 <= k < n)")
    common.add_argument("--strip-tautologies", action="store_true",
                        help="drop tautological clauses while parsing DIMACS")

    sub = parser.add_subparsers(dest="command", required=True)

    p_index = sub.add_parser("index", parents=[common],
                             help="exact index of one player")
    p_index.add_argument("input", help="game or instance document")
    p_index.add_argument("--player", type=int, default=None,
                         help="player position (defaults to the instance's distinguished player)")
    p_index.set_defaults(func=cmd_index)

    p_control = sub.add_parser("control", parents=[common],
                               help="decide a control-by-deletion instance")
    p_control.add_argument("input", help="instance document (or game document plus flags)")
    p_control.add_argument("--player", type=int, default=None)
    p_control.add_argument("--deletions", type=int, default=None,
                           help="deletion budget k for a bare game document")
    p_control.add_argument("--goal", default=None,
                           choices=[g.value.lower() for g in Goal],
                           help="override or supply the goal relation")
    p_control.add_argument("--mode", choices=("exhaustive", "sampled", "restricted"),
                           default="exhaustive")
    p_control.add_argument("--trials", type=int, default=10_000,
                           help="samples in sampled mode")
    p_control.add_argument("--groups", default=None,
                           help="comma-separated provenance groups for restricted mode")
    p_control.set_defaults(func=cmd_control)

    p_reduce = sub.add_parser("reduce", parents=[common],
                              help="compile DIMACS into a control instance file")
    p_reduce.add_argument("cnf", help="DIMACS cnf file")
    p_reduce.add_argument("--kind", required=True,
                          choices=("decrease", "nonincrease", "maintain"))
    p_reduce.add_argument("-k", type=int, required=True, help="deletion budget / prefix length")
    p_reduce.add_argument("--ell", type=int, default=None,
                          help="exact suffix count (maintain only)")
    p_reduce.add_argument("--exactify", action="store_true",
                          help="apply the two-variable extension before building maintain")
    p_reduce.add_argument("-o", "--output", required=True, help="instance file to write")
    p_reduce.set_defaults(func=cmd_reduce)

    p_oracle = sub.add_parser("oracle", parents=[common],
                              help="run a formula oracle")
    p_oracle.add_argument("kind", choices=("count-sat", "e-minority-sat", "e-exact-sat"))
    p_oracle.add_argument("cnf", help="DIMACS cnf file")
    p_oracle.add_argument("--k", type=int, default=None, help="prefix length")
    p_oracle.add_argument("--ell", type=int, default=None, help="exact suffix count")
    p_oracle.set_defaults(func=cmd_oracle)

    p_verify = sub.add_parser("verify", parents=[common],
                              help="run a verification suite")
    p_verify.add_argument("suite", choices=sorted(SUITES) + ["all"])
    p_verify.add_argument("--trials", type=int, default=10_000,
                          help="samples for the no-direction suite")
    p_verify.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceededError as error:
        print(f"budget refusal: {error}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, BandStructureError, OSError) as error:
        print(f"input error: {error}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
