"""Verification suites: each suite re-derives a family of published or
structural facts with independent machinery and reports per-check results.

The suites are the programmatic backbone of ``wvg verify`` and of the
acceptance tests:

* ``example1``    -- the worked six-player example and its two deletions;
* ``prereduction``-- #SubsetSum(A+B+C, q') == #SAT == #SubsetSum(E, q'')
  over a generated corpus;
* ``closed-forms``-- layered counts equal the closed forms (and the
  per-case split) on relaxed grids plus one strict-scale instance, and
  equal raw subset-sum counting heavy-by-heavy;
* ``yes-direction``-- witness deletions achieve each goal end to end;
* ``no-direction-sampled`` -- on no-instances, exhaustive A-only search
  plus seeded random multisets find no decreasing deletion (sampled
  evidence, labelled as such);
* ``exactify``    -- the exact-count equivalence of the two-variable
  extension, exhaustively over small parameters.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .bands import heavy_pivot_term, pivot_count_layered
from .control import Restricted, Sampled, solve_control
from .engines import EngineBudget, pivot_count_enum, pivot_count_mitm, pivot_count_weight_dp
from .errors import InputError
from .formulas import CnfFormula, count_sat, count_subset_sum, e_exact_sat, e_minority_sat
from .game import ExactIndex, Game
from .gadgets import (
    Goal,
    build_decrease,
    build_maintain,
    build_nonincrease,
    build_prereduction,
    exactify,
    expected_case_counts,
    layered_case_counts,
    witness_deletion,
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class SuiteOptions:
    seed: int = 20240817
    trials: int = 10_000
    formulas_per_cell: int = 10
    corpus_size: int = 50


def random_formula(rng: random.Random, num_variables: int, num_clauses: int) -> CnfFormula:
    """A random CNF with every variable occurring and no tautological clause."""
    clauses: list[set[int]] = []
    for _ in range(num_clauses):
        size = rng.randint(1, min(3, num_variables))
        variables = rng.sample(range(1, num_variables + 1), size)
        clauses.append({v if rng.randint(0, 1) else -v for v in variables})
    covered = {abs(lit) for clause in clauses for lit in clause}
    for variable in range(1, num_variables + 1):
        if variable not in covered:
            hosts = [c for c in clauses if variable not in {abs(l) for l in c}]
            host = rng.choice(hosts) if hosts else clauses[rng.randrange(len(clauses))]
            if variable not in {abs(l) for l in host}:
                host.add(variable if rng.randint(0, 1) else -variable)
    return CnfFormula(num_variables, tuple(frozenset(c) for c in clauses))


def formula_corpus(
    rng: random.Random, count: int, max_variables: int, max_clauses: int
) -> list[CnfFormula]:
    corpus = []
    while len(corpus) < count:
        n = rng.randint(1, max_variables)
        m = rng.randint(1, max_clauses)
        corpus.append(random_formula(rng, n, m))
    return corpus


def _check(results: list[CheckResult], name: str, passed: bool, detail: str = "") -> None:
    results.append(CheckResult(name, bool(passed), detail))


# ---------------------------------------------------------------- example1

EXAMPLE1_GAME = Game((1, 2, 2, 2, 3, 3), 8)


def _all_engines_agree(game: Game, player: int, expected: ExactIndex) -> bool:
    budget = EngineBudget()
    counts = {
        pivot_count_enum(game, player, budget),
        pivot_count_mitm(game, player, budget),
        pivot_count_weight_dp(game, player, budget),
    }
    if len(counts) != 1:
        return False
    return ExactIndex(counts.pop(), game.num_players - 1) == expected


def suite_example1(options: SuiteOptions) -> list[CheckResult]:
    results: list[CheckResult] = []
    game = EXAMPLE1_GAME
    p = 1  # a weight-2 player
    _check(
        results,
        "six-player game: index of a weight-2 player is 8/2^5 = 1/4",
        _all_engines_agree(game, p, ExactIndex(1, 2)),
    )
    without_heavy = Game((1, 2, 2, 2, 3), 8)  # one weight-3 player removed
    _check(
        results,
        "after deleting a weight-3 player the index drops to 3/2^4",
        _all_engines_agree(without_heavy, p, ExactIndex(3, 4)),
    )
    without_peer = Game((1, 2, 2, 3, 3), 8)  # one weight-2 player removed
    _check(
        results,
        "after deleting a weight-2 player the index stays 1/4",
        _all_engines_agree(without_peer, p, ExactIndex(1, 2)),
    )
    return results


# ------------------------------------------------------------ prereduction


def suite_prereduction(options: SuiteOptions) -> list[CheckResult]:
    results: list[CheckResult] = []
    rng = random.Random(options.seed)
    corpus = formula_corpus(rng, options.corpus_size, max_variables=5, max_clauses=4)
    base_ok = scaled_ok = 0
    for formula in corpus:
        k = rng.randint(1, formula.num_variables)
        pre = build_prereduction(formula, k)
        xi = count_sat(formula)
        if count_subset_sum(pre.abc_weights, pre.q_prime) == xi:
            base_ok += 1
        if count_subset_sum(pre.scaled_weights, pre.q_double_prime) == xi:
            scaled_ok += 1
    _check(
        results,
        f"#SubsetSum(A+B+C, q') == #SAT on {len(corpus)} random formulas",
        base_ok == len(corpus),
        f"{base_ok}/{len(corpus)}",
    )
    _check(
        results,
        f"#SubsetSum(E, q'') == #SAT on {len(corpus)} random formulas",
        scaled_ok == len(corpus),
        f"{scaled_ok}/{len(corpus)}",
    )
    return results


# ------------------------------------------------------------ closed forms

RELAXED_GRID = ((1, 2), (1, 3), (2, 3))
MAINTAIN_ELLS = (3, 5, 6)


def _grid_formulas(
    rng: random.Random, n: int, count: int, max_clauses: int = 3
) -> list[CnfFormula]:
    return [random_formula(rng, n, rng.randint(1, max_clauses)) for _ in range(count)]


def _case_tuple(counts) -> tuple[int, ...]:
    return (counts.case1, counts.case2, counts.case3, counts.case4, counts.case5, counts.case6)


def suite_closed_forms(options: SuiteOptions) -> list[CheckResult]:
    results: list[CheckResult] = []
    rng = random.Random(options.seed)
    for goal, builder in (
        (Goal.DECREASE, build_decrease),
        (Goal.NONINCREASE, build_nonincrease),
    ):
        for k, n in RELAXED_GRID:
            ok = 0
            tried = 0
            for formula in _grid_formulas(rng, n, options.formulas_per_cell):
                xi = count_sat(formula)
                instance = builder(formula, k, strict=False)
                expected = expected_case_counts(goal, k, n, xi)
                actual = layered_case_counts(instance)
                tried += 1
                if _case_tuple(actual) == _case_tuple(expected):
                    ok += 1
            _check(
                results,
                f"{goal.value.lower()} gadget (k={k}, n={n}): layered count matches "
                "closed form and per-case split",
                ok == tried,
                f"{ok}/{tried}",
            )
    for k, n in RELAXED_GRID:
        for ell in MAINTAIN_ELLS:
            ok = 0
            tried = 0
            for formula in _grid_formulas(rng, n, options.formulas_per_cell):
                xi = count_sat(formula)
                instance = build_maintain(formula, k, ell, strict=False)
                expected = expected_case_counts(Goal.MAINTAIN, k, n, xi, ell=ell)
                actual = layered_case_counts(instance)
                tried += 1
                if _case_tuple(actual) == _case_tuple(expected):
                    ok += 1
            _check(
                results,
                f"maintain gadget (k={k}, n={n}, ell={ell}): layered count matches "
                "closed form and per-case split",
                ok == tried,
                f"{ok}/{tried}",
            )
    strict_formula = CnfFormula(5, (frozenset({1, 2, 3, 4, 5}),))
    strict = build_decrease(strict_formula, 4, strict=True)
    layered = pivot_count_layered(strict.bands)
    _check(
        results,
        "strict decrease gadget (k=4, n=5, xi=31): layered numerator is 11904 over 2^317",
        layered == 11904 and strict.game.num_players == 318,
        f"count={layered}, players={strict.game.num_players}",
    )
    small = build_decrease(CnfFormula(2, (frozenset({1, 2}),)), 1, strict=False)
    light = [w for block in small.bands.blocks for w in block.weights]
    per_heavy_ok = all(
        heavy_pivot_term(small.bands, h)
        == count_subset_sum(light, small.game.quota - 1 - small.game.weights[h])
        for h in sorted(small.bands.heavy)
    )
    _check(
        results,
        "relaxed (k=1, n=2) gadget: every heavy player's layered block product equals "
        "the raw subset-sum count of the light players",
        per_heavy_ok,
    )
    return results


# ------------------------------------------------------------ yes direction


def _yes_pairs(rng: random.Random, count: int) -> list[tuple[CnfFormula, int]]:
    pairs: list[tuple[CnfFormula, int]] = []
    while len(pairs) < count:
        n = rng.randint(2, 3)
        formula = random_formula(rng, n, rng.randint(1, 3))
        k = rng.randint(1, n - 1)
        verdict, _ = e_minority_sat(formula, k)
        if verdict:
            pairs.append((formula, k))
    return pairs


def suite_yes_direction(options: SuiteOptions) -> list[CheckResult]:
    results: list[CheckResult] = []
    rng = random.Random(options.seed)
    pairs = _yes_pairs(rng, 8)

    decrease_ok = 0
    for formula, k in pairs:
        instance = build_decrease(formula, k, strict=False)
        _, prefix = e_minority_sat(formula, k)
        before = ExactIndex(pivot_count_layered(instance.bands), instance.game.num_players - 1)
        variant = instance.delete(witness_deletion(instance, prefix))
        after = ExactIndex(pivot_count_layered(variant.bands), variant.game.num_players - 1)
        if after < before:
            decrease_ok += 1
    _check(
        results,
        f"minority witnesses strictly decrease the index on {len(pairs)} decrease gadgets",
        decrease_ok == len(pairs),
        f"{decrease_ok}/{len(pairs)}",
    )

    nonincrease_ok = 0
    for formula, k in pairs:
        instance = build_nonincrease(formula, k, strict=False)
        _, prefix = e_minority_sat(formula, k)
        before = ExactIndex(pivot_count_layered(instance.bands), instance.game.num_players - 1)
        variant = instance.delete(witness_deletion(instance, prefix))
        after = ExactIndex(pivot_count_layered(variant.bands), variant.game.num_players - 1)
        if after <= before:
            nonincrease_ok += 1
    _check(
        results,
        f"minority witnesses never increase the index on {len(pairs)} nonincrease gadgets",
        nonincrease_ok == len(pairs),
        f"{nonincrease_ok}/{len(pairs)}",
    )

    maintain_ok = maintain_tried = 0
    for formula, k in pairs[:5]:
        for ell in (1, 2):
            extended, _, triple = exactify(formula, k, ell)
            verdict, prefix = e_exact_sat(extended, k, triple)
            if not verdict:
                continue
            maintain_tried += 1
            instance = build_maintain(extended, k, triple, strict=False)
            before = ExactIndex(
                pivot_count_layered(instance.bands), instance.game.num_players - 1
            )
            variant = instance.delete(witness_deletion(instance, prefix))
            after = ExactIndex(
                pivot_count_layered(variant.bands), variant.game.num_players - 1
            )
            if after == before:
                maintain_ok += 1
    _check(
        results,
        f"exact-count witnesses maintain the index exactly on {maintain_tried} maintain gadgets",
        maintain_tried > 0 and maintain_ok == maintain_tried,
        f"{maintain_ok}/{maintain_tried}",
    )
    return results


# ----------------------------------------------------- no direction (sampled)

# Hand-picked no-instances: under every prefix assignment, strictly more
# than half of the suffix assignments satisfy the formula.
NO_INSTANCES: tuple[tuple[CnfFormula, int], ...] = (
    (CnfFormula(3, (frozenset({1, 2, 3}), frozenset({-1, 2, 3}))), 1),
    (
        CnfFormula(
            4,
            (
                frozenset({1, 3, 4}),
                frozenset({-1, 3, 4}),
                frozenset({2, 3, 4}),
                frozenset({-2, 3, 4}),
            ),
        ),
        2,
    ),
)


def suite_no_direction_sampled(options: SuiteOptions) -> list[CheckResult]:
    results: list[CheckResult] = []
    for formula, k in NO_INSTANCES:
        verdict, _ = e_minority_sat(formula, k)
        _check(
            results,
            f"(n={formula.num_variables}, k={k}) source instance is a minority no-instance",
            not verdict,
        )
        instance = build_decrease(formula, k, strict=False)
        report = solve_control(instance, engine="layered", mode=Restricted(("A",)))
        _check(
            results,
            f"(n={formula.num_variables}, k={k}) exhaustive A-only search finds no "
            "decreasing deletion",
            report.verdict == "NO-exhaustive",
            f"{report.candidates_evaluated} candidates",
        )
    formula, k = NO_INSTANCES[1]
    instance = build_decrease(formula, k, strict=False)
    report = solve_control(
        instance, engine="layered", mode=Sampled(seed=options.seed, trials=options.trials)
    )
    _check(
        results,
        f"{options.trials} seeded random deletion multisets (size <= {k}) find no "
        "decreasing deletion [sampled evidence, not a proof]",
        report.verdict == "NO-sampled",
        f"evaluated {report.candidates_evaluated}",
    )
    return results


# ---------------------------------------------------------------- exactify


def suite_exactify(options: SuiteOptions) -> list[CheckResult]:
    results: list[CheckResult] = []
    rng = random.Random(options.seed)
    corpus = formula_corpus(rng, options.corpus_size, max_variables=4, max_clauses=3)
    agreements = 0
    tried = 0
    for formula in corpus:
        n = formula.num_variables
        for k in range(1, n + 1):
            for ell in range(1, (1 << (n - k)) + 1):
                extended, same_k, triple = exactify(formula, k, ell)
                left, _ = e_exact_sat(formula, k, ell)
                right, _ = e_exact_sat(extended, same_k, triple)
                tried += 1
                if left == right:
                    agreements += 1
    _check(
        results,
        f"exact-count equivalence phi ~ phi' over {tried} (formula, k, ell) triples",
        agreements == tried,
        f"{agreements}/{tried}",
    )
    not_power = all(
        (3 * ell) & (3 * ell - 1) != 0 for ell in range(1, 513)
    )
    _check(results, "3*ell is never a power of two (ell up to 512)", not_power)
    return results


SUITES = {
    "example1": suite_example1,
    "prereduction": suite_prereduction,
    "closed-forms": suite_closed_forms,
    "yes-direction": suite_yes_direction,
    "no-direction-sampled": suite_no_direction_sampled,
    "exactify": suite_exactify,
}


def run_suite(name: str, options: SuiteOptions | None = None) -> list[CheckResult]:
    if name not in SUITES:
        raise InputError(f"unknown suite {name!r}; expected one of {sorted(SUITES)}")
    return SUITES[name](options or SuiteOptions())
