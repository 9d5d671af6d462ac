"""Structured exact counting for games whose weights live in no-carry bands.

The gadget games have two kinds of players.  "Heavy" players are so large
that no two of them fit together under the quota, so a pivotal coalition
for the (weight-1) distinguished player contains exactly one of them.
The remaining "light" players are organised in blocks whose weight
magnitudes never interfere: the total weight of all blocks below a block
is smaller than that block's granularity.  Consequently the residual a
heavy player leaves open splits uniquely across blocks, and the number of
light subsets hitting the residual is a product of per-block counts:

* ``ENUMERABLE`` blocks (a few dozen structured weights) are counted by a
  cached meet-in-the-middle table;
* ``UNIFORM_CHAIN_LEVEL`` blocks (all weights equal) contribute a binomial
  coefficient;
* ``SUPERINCREASING`` blocks admit at most one subset per value, found
  greedily.

Every no-carry precondition is asserted when a ``BandSystem`` is built;
a wrong construction must fail loudly, never miscount.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum

from .errors import BandStructureError, InputError
from .game import Game


class BlockKind(str, Enum):
    ENUMERABLE = "ENUMERABLE"
    UNIFORM_CHAIN_LEVEL = "UNIFORM_CHAIN_LEVEL"
    SUPERINCREASING = "SUPERINCREASING"


@dataclass(frozen=True)
class LightBlock:
    """One no-carry band of light players.

    ``granularity`` divides every member weight and exceeds the combined
    weight of all less-significant blocks (checked by the owning
    ``BandSystem``).  It is stored explicitly so a block keeps its band
    position even after all its members were deleted.
    """

    name: str
    kind: BlockKind
    members: tuple[int, ...]
    weights: tuple[int, ...]
    granularity: int

    def __post_init__(self) -> None:
        if len(self.members) != len(self.weights):
            raise BandStructureError(f"block {self.name}: members/weights length mismatch")
        if self.granularity < 1:
            raise BandStructureError(f"block {self.name}: granularity must be positive")
        if any(w < 1 for w in self.weights):
            raise BandStructureError(f"block {self.name}: weights must be positive")
        if any(w % self.granularity for w in self.weights):
            raise BandStructureError(
                f"block {self.name}: some weight is not a multiple of the granularity"
            )
        if self.kind is BlockKind.UNIFORM_CHAIN_LEVEL:
            if any(w != self.granularity for w in self.weights):
                raise BandStructureError(
                    f"uniform block {self.name}: all weights must equal the granularity"
                )
        if self.kind is BlockKind.SUPERINCREASING:
            running = 0
            for w in self.weights:
                if w <= running:
                    raise BandStructureError(
                        f"superincreasing block {self.name}: weights must each exceed "
                        "the sum of all smaller ones (sorted ascending)"
                    )
                running += w
            if self.weights and self.granularity > self.weights[0]:
                raise BandStructureError(
                    f"superincreasing block {self.name}: granularity above smallest weight"
                )

    @property
    def max_sum(self) -> int:
        return sum(self.weights)

    @property
    def min_gap(self) -> int:
        """Smallest slack ``w_i - sum(w_j for j < i)`` of a superincreasing block.

        Greedy decomposition is forced only while the blocks below weigh
        strictly less than this gap; for other kinds the granularity plays
        that role.
        """
        if self.kind is not BlockKind.SUPERINCREASING or not self.weights:
            return self.granularity
        gap = self.weights[0]
        running = self.weights[0]
        for w in self.weights[1:]:
            gap = min(gap, w - running)
            running += w
        return gap

    def restrict(self, surviving: dict[int, int]) -> LightBlock:
        """The block after a deletion, with indices remapped by ``surviving``."""
        kept = [(surviving[m], w) for m, w in zip(self.members, self.weights) if m in surviving]
        return LightBlock(
            self.name,
            self.kind,
            tuple(m for m, _ in kept),
            tuple(w for _, w in kept),
            self.granularity,
        )


@dataclass(frozen=True)
class Decomposition:
    """Per-block targets that recompose exactly to a residual value."""

    targets: tuple[int, ...]


@dataclass(frozen=True)
class BandSystem:
    """Band metadata for one game: heavy set, light blocks, distinguished player.

    Blocks are ordered from most to least significant.  Construction
    checks the full partition, the pairwise heavy exclusion, the no-carry
    chain, and that the light players alone can never make the
    distinguished player pivotal.
    """

    game: Game
    distinguished: int
    heavy: frozenset[int]
    blocks: tuple[LightBlock, ...]

    def __post_init__(self) -> None:
        game = self.game
        game.check_player(self.distinguished)
        seen: set[int] = {self.distinguished}
        for player in self.heavy:
            game.check_player(player)
            if player in seen:
                raise BandStructureError(f"player {player} appears twice in the band system")
            seen.add(player)
        for block in self.blocks:
            for member, weight in zip(block.members, block.weights):
                game.check_player(member)
                if member in seen:
                    raise BandStructureError(
                        f"player {member} appears twice in the band system"
                    )
                seen.add(member)
                if game.weights[member] != weight:
                    raise BandStructureError(
                        f"block {block.name}: stored weight of player {member} "
                        "disagrees with the game"
                    )
        if len(seen) != game.num_players:
            raise BandStructureError("band system does not cover every player")

        below = 0  # total weight of blocks less significant than the current one
        for block in reversed(self.blocks):
            if below >= block.granularity:
                raise BandStructureError(
                    f"no-carry violation: blocks below {block.name} weigh {below} "
                    f"total, at least its granularity {block.granularity}"
                )
            if below >= block.min_gap:
                raise BandStructureError(
                    f"no-carry violation: blocks below {block.name} weigh {below} "
                    f"total, at least its smallest superincreasing gap {block.min_gap}"
                )
            below += block.max_sum

        light_total = below
        if light_total >= game.quota - game.weights[self.distinguished]:
            raise BandStructureError(
                "light players alone can reach the pivotal interval "
                f"(total {light_total} vs quota {game.quota})"
            )
        heavy_weights = sorted(game.weights[h] for h in self.heavy)
        if len(heavy_weights) >= 2 and heavy_weights[0] + heavy_weights[1] <= game.quota:
            raise BandStructureError(
                "two heavy players fit under the quota together "
                f"({heavy_weights[0]} + {heavy_weights[1]} <= {game.quota})"
            )

    @property
    def light_total(self) -> int:
        return sum(block.max_sum for block in self.blocks)

    def block_named(self, name: str) -> LightBlock:
        for block in self.blocks:
            if block.name == name:
                return block
        raise InputError(f"no block named {name!r}")

    def restrict(self, surviving: dict[int, int], game: Game) -> BandSystem:
        """The band system after deleting every player absent from ``surviving``."""
        if self.distinguished not in surviving:
            raise BandStructureError("cannot delete the distinguished player")
        return BandSystem(
            game=game,
            distinguished=surviving[self.distinguished],
            heavy=frozenset(surviving[h] for h in self.heavy if h in surviving),
            blocks=tuple(block.restrict(surviving) for block in self.blocks),
        )


def decompose_target(bands: BandSystem, residual: int) -> Decomposition | None:
    """Split ``residual`` into per-block targets; unique when it exists.

    Works greedily from the most significant block.  For granular blocks
    the block's share is forced: it is the unique multiple of the
    granularity leaving a remainder the lower blocks can still carry.
    Superincreasing blocks take members greedily from the largest.
    Returns ``None`` when some block's forced share is unreachable or a
    nonzero remainder survives the last block.
    """
    if residual < 0:
        raise InputError("residual must be nonnegative")
    remaining = residual
    targets: list[int] = []
    for block in bands.blocks:
        if block.kind is BlockKind.SUPERINCREASING:
            value = 0
            rest = remaining
            for w in reversed(block.weights):
                if rest >= w:
                    rest -= w
                    value += w
        else:
            value = remaining - remaining % block.granularity
            if value > block.max_sum:
                return None
        targets.append(value)
        remaining -= value
    if remaining != 0:
        return None
    return Decomposition(tuple(targets))


# Subset-sum tables for enumerable blocks, cached per weight multiset so the
# control solver's thousands of deletion variants reuse them.  A table is a
# pair of half-sum Counters; individual (table, target) counts are memoised
# separately.
_ENUM_TABLES: dict[tuple[int, ...], tuple[Counter[int], Counter[int]]] = {}
_ENUM_COUNTS: dict[tuple[tuple[int, ...], int], int] = {}

_MAX_ENUMERABLE = 30


def _enum_tables(weights: tuple[int, ...]) -> tuple[Counter[int], Counter[int]]:
    tables = _ENUM_TABLES.get(weights)
    if tables is None:
        half = (len(weights) + 1) // 2
        left: Counter[int] = Counter([0])
        for w in weights[:half]:
            left.update({s + w: c for s, c in left.items()})
        right: Counter[int] = Counter([0])
        for w in weights[half:]:
            right.update({s + w: c for s, c in right.items()})
        tables = (left, right)
        _ENUM_TABLES[weights] = tables
    return tables


def _enum_count(weights: tuple[int, ...], target: int) -> int:
    key = (weights, target)
    cached = _ENUM_COUNTS.get(key)
    if cached is None:
        left, right = _enum_tables(weights)
        small, large = (left, right) if len(left) <= len(right) else (right, left)
        cached = sum(c * large.get(target - v, 0) for v, c in small.items())
        _ENUM_COUNTS[key] = cached
    return cached


def count_block(block: LightBlock, target: int) -> int:
    """Number of subsets of the block summing exactly to ``target``."""
    if target < 0 or target > block.max_sum:
        raise BandStructureError(
            f"block {block.name}: target {target} outside [0, {block.max_sum}]"
        )
    if block.kind is not BlockKind.SUPERINCREASING and target % block.granularity:
        raise BandStructureError(
            f"block {block.name}: target {target} is not a multiple of the granularity"
        )
    if block.kind is BlockKind.UNIFORM_CHAIN_LEVEL:
        return math.comb(len(block.members), target // block.granularity)
    if block.kind is BlockKind.SUPERINCREASING:
        rest = target
        for w in reversed(block.weights):
            if rest >= w:
                rest -= w
        return 1 if rest == 0 else 0
    if len(block.members) > _MAX_ENUMERABLE:
        raise BandStructureError(
            f"enumerable block {block.name} has {len(block.members)} members "
            f"(limit {_MAX_ENUMERABLE}); it should have been banded further"
        )
    return _enum_count(block.weights, target)


def count_light_subsets(bands: BandSystem, residual: int) -> int:
    """Number of light subsets (all blocks combined) summing to ``residual``."""
    decomposition = decompose_target(bands, residual)
    if decomposition is None:
        return 0
    product = 1
    for block, target in zip(bands.blocks, decomposition.targets):
        product *= count_block(block, target)
        if product == 0:
            return 0
    return product


def heavy_pivot_term(bands: BandSystem, heavy_player: int) -> int:
    """Pivotal coalitions of the distinguished player through one heavy player."""
    if heavy_player not in bands.heavy:
        raise InputError(f"player {heavy_player} is not heavy in this band system")
    game = bands.game
    w_p = game.weights[bands.distinguished]
    w_h = game.weights[heavy_player]
    total = 0
    for coalition_weight in range(game.quota - w_p, game.quota):
        residual = coalition_weight - w_h
        if residual >= 0:
            total += count_light_subsets(bands, residual)
    return total


_MAX_INTERVAL_WIDTH = 4096


def pivot_count_layered(bands: BandSystem, player: int | None = None) -> int:
    """Exact pivotal count for the band system's distinguished player.

    Sums, over every heavy player, the factorised count of light subsets
    completing a coalition to a pivotal weight.  The heavy-free term is
    zero by the construction invariant (light players alone cannot reach
    the pivotal interval) and coalitions with two heavies overshoot the
    quota, so the heavy terms are the whole count.
    """
    if player is None:
        player = bands.distinguished
    if player != bands.distinguished:
        raise InputError(
            "the layered engine only counts for the band system's distinguished player"
        )
    w_p = bands.game.weights[player]
    if w_p > _MAX_INTERVAL_WIDTH:
        raise BandStructureError(
            f"distinguished weight {w_p} spans too wide a pivotal interval "
            f"for per-value decomposition (limit {_MAX_INTERVAL_WIDTH})"
        )
    # Re-assert the zero heavy-free term rather than trusting construction.
    if bands.light_total >= bands.game.quota - w_p:
        raise BandStructureError("light players alone can reach the pivotal interval")
    return sum(heavy_pivot_term(bands, h) for h in sorted(bands.heavy))
