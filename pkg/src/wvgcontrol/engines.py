"""Three independent exact engines for the pivotal-coalition count.

``eta(G, i)`` is the number of coalitions ``T ⊆ N∖{i}`` whose weight lands
in ``[quota - w_i, quota - 1]``; the probabilistic Penrose-Banzhaf index is
``eta / 2**(|N|-1)``.  The engines use unrelated strategies (pruned
enumeration, meet-in-the-middle, pseudo-polynomial weight table) so they
can serve as mutual oracles.  Each engine refuses instances beyond its
budget instead of running unboundedly; refusal is an explicit error so
verification code always knows which algorithm produced a number.
"""

from __future__ import annotations

import bisect
from collections import Counter
from dataclasses import dataclass

from .errors import BudgetExceededError, InputError
from .game import ExactIndex, Game


@dataclass(frozen=True)
class EngineBudget:
    """Size limits past which an engine refuses to run."""

    max_enum_players: int = 24
    max_mitm_half: int = 22
    max_dp_quota: int = 2_000_000

    def __post_init__(self) -> None:
        if min(self.max_enum_players, self.max_mitm_half, self.max_dp_quota) < 1:
            raise InputError("engine budgets must be positive")


DEFAULT_BUDGET = EngineBudget()


def _pivot_interval(game: Game, player: int) -> tuple[int, int]:
    game.check_player(player)
    return game.quota - game.weights[player], game.quota - 1


def _count_subsets_in_interval(weights: list[int], lo: int, hi: int) -> int:
    """Number of subsets of ``weights`` with sum in ``[lo, hi]``.

    Depth-first over weights sorted descending, with two exact cutoffs:
    a branch whose partial sum already exceeds ``hi`` is dead (weights are
    nonnegative), and a branch that cannot leave ``[lo, hi]`` any more
    contributes a full power of two at once.
    """
    if hi < 0 or hi < lo:
        return 0
    ordered = sorted(weights, reverse=True)
    suffix = [0] * (len(ordered) + 1)
    for idx in range(len(ordered) - 1, -1, -1):
        suffix[idx] = suffix[idx + 1] + ordered[idx]

    def walk(idx: int, total: int) -> int:
        if total > hi:
            return 0
        remaining = suffix[idx]
        if total + remaining < lo:
            return 0
        if total >= lo and total + remaining <= hi:
            return 1 << (len(ordered) - idx)
        # idx == len(ordered) implies one of the shortcuts above fired
        return walk(idx + 1, total) + walk(idx + 1, total + ordered[idx])

    return walk(0, 0)


def pivot_count_enum(
    game: Game, player: int, budget: EngineBudget = DEFAULT_BUDGET
) -> int:
    """Exact pivotal count by pruned subset enumeration."""
    lo, hi = _pivot_interval(game, player)
    others = [w for p, w in enumerate(game.weights) if p != player]
    if len(others) > budget.max_enum_players:
        raise BudgetExceededError(
            f"enumeration engine refuses {len(others)} co-players "
            f"(max_enum_players={budget.max_enum_players})"
        )
    return _count_subsets_in_interval(others, lo, hi)


def _half_sums(weights: list[int]) -> list[int]:
    sums = [0]
    for w in weights:
        sums += [s + w for s in sums]
    return sums


def pivot_count_mitm(
    game: Game, player: int, budget: EngineBudget = DEFAULT_BUDGET
) -> int:
    """Exact pivotal count by meet-in-the-middle.

    The co-players are split in halves; one half's subset sums are sorted
    with multiplicities, and for every sum of the other half the matching
    window is counted by bisection.  Multiplicities multiply, so duplicate
    sums are handled exactly.
    """
    lo, hi = _pivot_interval(game, player)
    others = [w for p, w in enumerate(game.weights) if p != player]
    half = (len(others) + 1) // 2
    if half > budget.max_mitm_half:
        raise BudgetExceededError(
            f"meet-in-the-middle engine refuses half-size {half} "
            f"(max_mitm_half={budget.max_mitm_half})"
        )
    if hi < 0 or hi < lo:
        return 0
    left = Counter(_half_sums(others[:half]))
    right = Counter(_half_sums(others[half:]))
    values = sorted(right)
    prefix = [0]
    for v in values:
        prefix.append(prefix[-1] + right[v])
    total = 0
    for value, count in left.items():
        upper = bisect.bisect_right(values, hi - value)
        lower = bisect.bisect_left(values, lo - value)
        total += count * (prefix[upper] - prefix[lower])
    return total


def pivot_count_weight_dp(
    game: Game, player: int, budget: EngineBudget = DEFAULT_BUDGET
) -> int:
    """Exact pivotal count by a quota-wide subset-count table.

    ``table[s]`` is the number of co-player subsets of capped weight ``s``;
    sums at or above the quota are clamped into a single sink bucket, so
    the table width is the quota regardless of the total weight.  Counts
    are arbitrary-precision integers.
    """
    lo, hi = _pivot_interval(game, player)
    if game.quota > budget.max_dp_quota:
        raise BudgetExceededError(
            f"weight-table engine refuses quota {game.quota} "
            f"(max_dp_quota={budget.max_dp_quota})"
        )
    quota = game.quota
    table = [0] * (quota + 1)  # index quota == sink for sums >= quota
    table[0] = 1
    for p, w in enumerate(game.weights):
        if p == player:
            continue
        if w == 0:
            for s in range(quota + 1):
                table[s] *= 2
            continue
        for s in range(quota, -1, -1):
            if table[s]:
                table[min(s + w, quota)] += table[s]
    if hi < 0 or hi < lo:
        return 0
    return sum(table[max(lo, 0) : hi + 1])


ENGINES = {
    "enum": pivot_count_enum,
    "mitm": pivot_count_mitm,
    "dp": pivot_count_weight_dp,
}


def pivot_count(
    game: Game, player: int, engine: str = "enum", budget: EngineBudget = DEFAULT_BUDGET
) -> int:
    """Dispatch to a named engine (``enum``, ``mitm`` or ``dp``)."""
    try:
        run = ENGINES[engine]
    except KeyError:
        raise InputError(f"unknown engine {engine!r}; expected one of {sorted(ENGINES)}")
    return run(game, player, budget)


def banzhaf(
    game: Game, player: int, engine: str = "enum", budget: EngineBudget = DEFAULT_BUDGET
) -> ExactIndex:
    """The probabilistic Penrose-Banzhaf index as an exact dyadic rational."""
    count = pivot_count(game, player, engine, budget)
    return ExactIndex(count, game.num_players - 1)
