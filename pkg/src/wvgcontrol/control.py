"""Decide control-by-deleting-players questions by search over deletion multisets.

Equal-weight players are interchangeable for the distinguished player's
index, so the search enumerates multisets over weight classes instead of
raw subsets; gadget games have large symmetric groups and this collapses
the space by orders of magnitude.  Exhaustive mode walks every multiset
up to the budget, heaviest classes first, and the first witness found is
the reported one (deterministic).  Sampled mode draws multisets uniformly
from the whole candidate space with a seeded generator and reports
honestly labelled negative evidence.  Restricted mode is exhaustive over
a named subset of provenance groups.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .bands import pivot_count_layered
from .engines import (
    DEFAULT_BUDGET,
    EngineBudget,
    pivot_count_enum,
    pivot_count_mitm,
    pivot_count_weight_dp,
)
from .errors import BudgetExceededError, InputError, WvgError
from .game import ExactIndex, weight_class_partition
from .gadgets import MIN_ONE_DELETION_GOALS, ControlInstance, Goal


def relation_holds(goal: Goal, before: ExactIndex, after: ExactIndex) -> bool:
    if goal is Goal.DECREASE:
        return after < before
    if goal is Goal.NONINCREASE:
        return after <= before
    if goal is Goal.MAINTAIN:
        return after == before
    if goal is Goal.INCREASE:
        return after > before
    if goal is Goal.NONDECREASE:
        return after >= before
    raise InputError(f"unknown goal {goal!r}")


ENGINE_CHOICES = ("auto", "enum", "mitm", "dp", "layered")


def _engine_feasible(name: str, instance: ControlInstance, budget: EngineBudget) -> bool:
    n = instance.game.num_players
    if name == "enum":
        return n - 1 <= budget.max_enum_players
    if name == "mitm":
        return n // 2 <= budget.max_mitm_half
    if name == "dp":
        return instance.game.quota <= budget.max_dp_quota
    if name == "layered":
        return instance.bands is not None
    raise InputError(f"unknown engine {name!r}")


def _run_engine(name: str, instance: ControlInstance, budget: EngineBudget) -> int:
    if name == "layered":
        if instance.bands is None:
            raise BudgetExceededError(
                "layered engine needs band metadata, which this instance lacks"
            )
        return pivot_count_layered(instance.bands)
    game, player = instance.game, instance.distinguished
    if name == "enum":
        return pivot_count_enum(game, player, budget)
    if name == "mitm":
        return pivot_count_mitm(game, player, budget)
    if name == "dp":
        return pivot_count_weight_dp(game, player, budget)
    raise InputError(f"unknown engine {name!r}")


def pick_engine(instance: ControlInstance, budget: EngineBudget = DEFAULT_BUDGET) -> str:
    """Deterministic auto-selection: layered when bands exist, else the
    cheapest brute-force engine whose budget accepts the instance."""
    if instance.bands is not None:
        return "layered"
    n = instance.game.num_players
    if n - 1 <= min(budget.max_enum_players, 20):
        return "enum"
    if _engine_feasible("mitm", instance, budget):
        return "mitm"
    if _engine_feasible("dp", instance, budget):
        return "dp"
    if _engine_feasible("enum", instance, budget):
        return "enum"
    raise BudgetExceededError(
        f"no engine accepts this instance ({n} players, quota {instance.game.quota}) "
        "within the configured budgets"
    )


def compute_pivot_count(
    instance: ControlInstance, engine: str = "auto", budget: EngineBudget = DEFAULT_BUDGET
) -> tuple[int, str]:
    """Pivotal count of the distinguished player, with the engine that ran."""
    name = pick_engine(instance, budget) if engine == "auto" else engine
    return _run_engine(name, instance, budget), name


def compute_index(
    instance: ControlInstance, engine: str = "auto", budget: EngineBudget = DEFAULT_BUDGET
) -> tuple[ExactIndex, str]:
    count, name = compute_pivot_count(instance, engine, budget)
    return ExactIndex(count, instance.game.num_players - 1), name


@dataclass(frozen=True)
class Exhaustive:
    """Walk every deletion multiset within the budget."""


@dataclass(frozen=True)
class Sampled:
    """Draw ``trials`` multisets uniformly from the candidate space."""

    seed: int
    trials: int


@dataclass(frozen=True)
class Restricted:
    """Exhaustive search over players of the named provenance groups only."""

    groups: tuple[str, ...]


SearchMode = Exhaustive | Sampled | Restricted


@dataclass(frozen=True)
class DeletionCandidate:
    """A weight-class multiset plus its canonical representative player set."""

    class_counts: tuple[tuple[int, int], ...]  # (class weight, deleted) — weight desc
    players: frozenset[int]

    @property
    def size(self) -> int:
        return sum(count for _, count in self.class_counts)

    def describe(self) -> str:
        if not self.class_counts:
            return "delete nothing"
        parts = [f"{count} x weight {weight}" for weight, count in self.class_counts]
        return "delete " + ", ".join(parts)


@dataclass
class SearchReport:
    """Outcome of one control search; a YES always carries a re-checked witness."""

    goal: Goal
    verdict: str  # "YES" | "NO-exhaustive" | "NO-sampled"
    engine: str
    index_before: ExactIndex
    witness: DeletionCandidate | None
    index_after_witness: ExactIndex | None
    candidates_evaluated: int
    min_index_seen: ExactIndex | None
    max_index_seen: ExactIndex | None
    reverified_with: str | None = None
    seed: int | None = None
    trials: int | None = None


def _candidate_classes(
    instance: ControlInstance, restrict_groups: tuple[str, ...] | None
) -> list[tuple[int, tuple[int, ...]]]:
    """Weight classes of the deletable players (heaviest first)."""
    allowed: set[int] | None = None
    if restrict_groups is not None:
        if instance.groups is None:
            raise InputError("restricted search needs group labels on the instance")
        allowed = {
            p for p, label in enumerate(instance.groups) if label in restrict_groups
        }
    classes = []
    for weight, members in weight_class_partition(instance.game).classes:
        kept = tuple(
            p
            for p in members
            if p != instance.distinguished and (allowed is None or p in allowed)
        )
        if kept:
            classes.append((weight, kept))
    return classes


def _count_vectors(caps: list[int], size: int):
    """All count vectors with the given caps summing to ``size``, greatest
    lexicographic first (prefer deleting from the heaviest class)."""
    if size == 0:
        yield [0] * len(caps)
        return
    if not caps:
        return
    head_cap = min(caps[0], size)
    for head in range(head_cap, -1, -1):
        if sum(caps[1:]) < size - head:
            continue
        for rest in _count_vectors(caps[1:], size - head):
            yield [head] + rest


def _make_candidate(
    classes: list[tuple[int, tuple[int, ...]]], vector: list[int]
) -> DeletionCandidate:
    players: list[int] = []
    counts: list[tuple[int, int]] = []
    for (weight, members), count in zip(classes, vector):
        if count:
            counts.append((weight, count))
            players.extend(members[:count])
    return DeletionCandidate(tuple(counts), frozenset(players))


def _iter_exhaustive(
    classes: list[tuple[int, tuple[int, ...]]], min_size: int, max_size: int
):
    caps = [len(members) for _, members in classes]
    limit = min(max_size, sum(caps))
    for size in range(min_size, limit + 1):
        for vector in _count_vectors(caps, size):
            yield _make_candidate(classes, vector)


class _Unranker:
    """Maps ranks to count vectors, heaviest-first order, size in [min, max]."""

    def __init__(
        self,
        classes: list[tuple[int, tuple[int, ...]]],
        min_size: int,
        max_size: int,
    ) -> None:
        self.classes = classes
        self.min_size = min_size
        self.max_size = max_size
        caps = [len(members) for _, members in classes]
        self.caps = caps
        suffix_ways: list[dict[int, int]] = [dict() for _ in range(len(caps) + 1)]
        suffix_ways[len(caps)] = {0: 1}
        for i in range(len(caps) - 1, -1, -1):
            acc: dict[int, int] = {}
            for total, count in suffix_ways[i + 1].items():
                for take in range(caps[i] + 1):
                    if total + take > max_size:
                        break
                    acc[total + take] = acc.get(total + take, 0) + count
            suffix_ways[i] = acc
        self.suffix_ways = suffix_ways
        self.space = sum(
            count for total, count in suffix_ways[0].items() if total >= min_size
        )

    def _suffix_count(self, i: int, remaining_min: int, remaining_max: int) -> int:
        return sum(
            count
            for total, count in self.suffix_ways[i].items()
            if remaining_min <= total <= remaining_max
        )

    def candidate(self, rank: int) -> DeletionCandidate:
        vector: list[int] = []
        used = 0
        for i, cap in enumerate(self.caps):
            for take in range(min(cap, self.max_size - used), -1, -1):
                ways = self._suffix_count(
                    i + 1,
                    max(0, self.min_size - used - take),
                    self.max_size - used - take,
                )
                if rank < ways:
                    vector.append(take)
                    used += take
                    break
                rank -= ways
            else:
                raise WvgError("unranking walked out of the candidate space")
        return _make_candidate(self.classes, vector)


def _reverify(
    variant: ControlInstance, count: int, engine_used: str, budget: EngineBudget
) -> str | None:
    """Recompute a witness count with a different engine when budgets allow."""
    for name in ("enum", "mitm", "dp", "layered"):
        if name == engine_used or not _engine_feasible(name, variant, budget):
            continue
        other = _run_engine(name, variant, budget)
        if other != count:
            raise WvgError(
                f"engine disagreement on witness: {engine_used}={count}, {name}={other}"
            )
        return name
    return None


@dataclass
class EvaluationResult:
    before: ExactIndex
    after: ExactIndex
    relations: dict[Goal, bool]
    engine: str


def evaluate_deletion(
    instance: ControlInstance,
    deletion,
    engine: str = "auto",
    budget: EngineBudget = DEFAULT_BUDGET,
) -> EvaluationResult:
    """Exact before/after indices for one deletion, with all five goal relations."""
    before, engine_used = compute_index(instance, engine, budget)
    variant = instance.delete(deletion)
    after_count, _ = compute_pivot_count(variant, engine_used, budget)
    after = ExactIndex(after_count, variant.game.num_players - 1)
    relations = {goal: relation_holds(goal, before, after) for goal in Goal}
    return EvaluationResult(before, after, relations, engine_used)


def solve_control(
    instance: ControlInstance,
    engine: str = "auto",
    mode: SearchMode = Exhaustive(),
    budget: EngineBudget = DEFAULT_BUDGET,
) -> SearchReport:
    """Search for a deletion achieving the instance's goal.

    Goals that would be trivially met by deleting nobody (nonincrease,
    maintain, nondecrease) require at least one deletion; the strict goals
    admit the empty deletion harmlessly.
    """
    engine_used = pick_engine(instance, budget) if engine == "auto" else engine
    before_count = _run_engine(engine_used, instance, budget)
    before = ExactIndex(before_count, instance.game.num_players - 1)
    min_size = 1 if instance.goal in MIN_ONE_DELETION_GOALS else 0

    restrict = mode.groups if isinstance(mode, Restricted) else None
    classes = _candidate_classes(instance, restrict)

    if isinstance(mode, Sampled):
        unranker = _Unranker(classes, min_size, instance.budget)
        rng = random.Random(mode.seed)
        if unranker.space == 0:
            candidates = iter(())
        else:
            candidates = (
                unranker.candidate(rng.randrange(unranker.space))
                for _ in range(mode.trials)
            )
    else:
        candidates = _iter_exhaustive(classes, min_size, instance.budget)

    evaluated = 0
    min_seen: ExactIndex | None = None
    max_seen: ExactIndex | None = None
    for candidate in candidates:
        variant = instance.delete(candidate.players)
        try:
            count = _run_engine(engine_used, variant, budget)
        except BudgetExceededError as error:
            raise BudgetExceededError(
                f"engine {engine_used} refused the candidate "
                f"[{candidate.describe()}]: {error}"
            ) from error
        after = ExactIndex(count, variant.game.num_players - 1)
        evaluated += 1
        if min_seen is None or after < min_seen:
            min_seen = after
        if max_seen is None or after > max_seen:
            max_seen = after
        if relation_holds(instance.goal, before, after):
            reverified = _reverify(variant, count, engine_used, budget)
            return SearchReport(
                goal=instance.goal,
                verdict="YES",
                engine=engine_used,
                index_before=before,
                witness=candidate,
                index_after_witness=after,
                candidates_evaluated=evaluated,
                min_index_seen=min_seen,
                max_index_seen=max_seen,
                reverified_with=reverified,
                seed=mode.seed if isinstance(mode, Sampled) else None,
                trials=mode.trials if isinstance(mode, Sampled) else None,
            )
    return SearchReport(
        goal=instance.goal,
        verdict="NO-sampled" if isinstance(mode, Sampled) else "NO-exhaustive",
        engine=engine_used,
        index_before=before,
        witness=None,
        index_after_witness=None,
        candidates_evaluated=evaluated,
        min_index_seen=min_seen,
        max_index_seen=max_seen,
        seed=mode.seed if isinstance(mode, Sampled) else None,
        trials=mode.trials if isinstance(mode, Sampled) else None,
    )
