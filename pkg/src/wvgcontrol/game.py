"""Weighted voting games and exact power index values.

A game is a tuple of nonnegative integer weights (one per player, players
are identified by position) together with a positive integer quota.  All
arithmetic is over Python's arbitrary-precision integers: gadget games
carry weights with hundreds of digits and nothing here may round.

``ExactIndex`` holds a power index value as an unreduced dyadic rational
``pivot_count / 2**exponent``.  Keeping the pair unreduced makes values
from games with different player counts directly comparable by
cross-multiplication, without ever touching floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterable

from .errors import InputError, InvalidCoalitionError

Coalition = frozenset[int]


@dataclass(frozen=True)
class Game:
    """A weighted voting game ``(w_0, ..., w_{n-1}; quota)``.

    Players are the positions ``0 .. n-1``.  A coalition wins iff its
    total weight reaches the quota.  Zero weights are permitted (such a
    player is never pivotal); the quota must be at least 1.
    """

    weights: tuple[int, ...]
    quota: int

    def __post_init__(self) -> None:
        if any(not isinstance(w, int) for w in self.weights):
            raise InputError("weights must be integers")
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if not self.weights:
            raise InputError("a game needs at least one player")
        if any(w < 0 for w in self.weights):
            raise InputError("weights must be nonnegative")
        if not isinstance(self.quota, int) or self.quota < 1:
            raise InputError(f"quota must be a positive integer, got {self.quota!r}")

    @property
    def num_players(self) -> int:
        return len(self.weights)

    @property
    def total_weight(self) -> int:
        return sum(self.weights)

    def check_player(self, player: int) -> int:
        if not 0 <= player < len(self.weights):
            raise InvalidCoalitionError(
                f"player {player} out of range for a {len(self.weights)}-player game"
            )
        return player

    def coalition(self, members: Iterable[int]) -> Coalition:
        """Validate ``members`` and return it as a frozenset."""
        coalition = frozenset(members)
        for player in coalition:
            self.check_player(player)
        return coalition

    def coalition_weight(self, members: Iterable[int]) -> int:
        return sum(self.weights[p] for p in self.coalition(members))

    def __str__(self) -> str:
        return f"({', '.join(str(w) for w in self.weights)}; {self.quota})"


def characteristic(game: Game, members: Iterable[int]) -> int:
    """The simple-game value: 1 iff the coalition's weight reaches the quota."""
    return 1 if game.coalition_weight(members) >= game.quota else 0


def is_pivotal(game: Game, player: int, members: Iterable[int]) -> bool:
    """Whether ``player`` turns the losing coalition ``members`` into a winning one.

    Equivalent to the interval test ``quota - w_player <= w_T <= quota - 1``;
    the player must not already belong to the coalition.
    """
    coalition = game.coalition(members)
    game.check_player(player)
    if player in coalition:
        raise InvalidCoalitionError(f"player {player} is already in the coalition")
    total = sum(game.weights[p] for p in coalition)
    return game.quota - game.weights[player] <= total <= game.quota - 1


def delete_players(game: Game, victims: Iterable[int]) -> tuple[Game, dict[int, int]]:
    """Remove ``victims``; survivors keep their relative order.

    Returns the new game (same quota) and the index remap
    ``old index -> new index`` for every survivor.
    """
    victim_set = game.coalition(victims)
    remap: dict[int, int] = {}
    weights: list[int] = []
    for old in range(game.num_players):
        if old in victim_set:
            continue
        remap[old] = len(weights)
        weights.append(game.weights[old])
    if not weights:
        raise InputError("cannot delete every player")
    return Game(tuple(weights), game.quota), remap


@dataclass(frozen=True)
class WeightClassPartition:
    """Players grouped by equal weight, classes ordered by weight descending.

    Equal-weight players are interchangeable for the index of any *other*
    player, which is what lets searches enumerate per-class multisets
    instead of raw subsets.
    """

    classes: tuple[tuple[int, tuple[int, ...]], ...]

    def as_dict(self) -> dict[int, tuple[int, ...]]:
        return {weight: members for weight, members in self.classes}

    def members_of(self, weight: int) -> tuple[int, ...]:
        for w, members in self.classes:
            if w == weight:
                return members
        return ()


def weight_class_partition(game: Game) -> WeightClassPartition:
    by_weight: dict[int, list[int]] = {}
    for player, weight in enumerate(game.weights):
        by_weight.setdefault(weight, []).append(player)
    classes = tuple(
        (weight, tuple(by_weight[weight])) for weight in sorted(by_weight, reverse=True)
    )
    return WeightClassPartition(classes)


@dataclass(frozen=True, eq=False)
class ExactIndex:
    """An exact dyadic rational ``pivot_count / 2**exponent``, kept unreduced.

    Comparisons cross-multiply (``a/2^e1 < b/2^e2  iff  a·2^e2 < b·2^e1``)
    so values from games of different sizes compare exactly.  Two values
    are equal iff they denote the same rational, regardless of
    representation.
    """

    pivot_count: int
    exponent: int

    def __post_init__(self) -> None:
        if self.pivot_count < 0:
            raise InputError("pivot count must be nonnegative")
        if self.exponent < 0:
            raise InputError("exponent must be nonnegative")

    def _canonical(self) -> tuple[int, int]:
        count, exp = self.pivot_count, self.exponent
        if count == 0:
            return 0, 0
        while exp > 0 and count % 2 == 0:
            count //= 2
            exp -= 1
        return count, exp

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExactIndex):
            return NotImplemented
        return (
            self.pivot_count << other.exponent == other.pivot_count << self.exponent
        )

    def __lt__(self, other: ExactIndex) -> bool:
        return self.pivot_count << other.exponent < other.pivot_count << self.exponent

    def __le__(self, other: ExactIndex) -> bool:
        return self.pivot_count << other.exponent <= other.pivot_count << self.exponent

    def __gt__(self, other: ExactIndex) -> bool:
        return other.__lt__(self)

    def __ge__(self, other: ExactIndex) -> bool:
        return other.__le__(self)

    def __hash__(self) -> int:
        return hash(self._canonical())

    def as_fraction(self) -> Fraction:
        return Fraction(self.pivot_count, 1 << self.exponent)

    def decimal(self, digits: int = 6) -> str:
        """Cosmetic decimal approximation; never used in comparisons."""
        if self.pivot_count == 0:
            return "0"
        with localcontext() as ctx:
            ctx.prec = digits
            # both conversions are exact; only the division rounds, so equal
            # rationals render identically whatever their representation
            value = Decimal(self.pivot_count) / Decimal(1 << self.exponent)
        return str(value)

    def __str__(self) -> str:
        return f"{self.pivot_count}/2^{self.exponent}"
