"""Compile CNF instances into control-by-deletion games.

Three builders translate a CNF formula (plus a deletion budget ``k`` and,
for the maintain goal, a target count ``ell``) into weighted voting games
whose distinguished player has a closed-form index.  Player weights encode
the formula through the prereduction vectors (clause digits in base
``10^t``), and the remaining groups form no-carry bands so the layered
counter can verify every construction exactly.

A note on the heavy weights.  With quota ``q = 2*(w_A+w_B+w_C+w_E+10^t)+1``
the distinguished player (weight 1) is pivotal exactly for coalitions of
weight ``q - 1``.  Heavy players therefore carry weight
``(q - 1) - completion``, where ``completion`` is the exact light-weight
combination the group is meant to absorb; this is what makes the six-case
count factorise and reproduces the closed forms bit for bit.

Strict mode enforces the parameter range the hardness argument needs
(``4 <= k < n``); relaxed mode accepts ``1 <= k < n`` so that every
construction stays small enough to cross-check against the brute-force
engines, and tags the instance accordingly.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .bands import BandSystem, BlockKind, LightBlock, heavy_pivot_term
from .errors import GadgetParameterError, InputError
from .formulas import CnfFormula
from .game import ExactIndex, Game, delete_players


class Goal(str, Enum):
    """Relation the post-deletion index must bear to the original."""

    DECREASE = "DECREASE"
    NONINCREASE = "NONINCREASE"
    MAINTAIN = "MAINTAIN"
    INCREASE = "INCREASE"
    NONDECREASE = "NONDECREASE"


# Goals with a gadget builder; INCREASE / NONDECREASE are accepted by the
# data model but no construction exists for them.
BUILDABLE_GOALS = (Goal.DECREASE, Goal.NONINCREASE, Goal.MAINTAIN)

#: goals where deleting nobody would trivially satisfy the relation, so a
#: candidate deletion must remove at least one player
MIN_ONE_DELETION_GOALS = frozenset({Goal.NONINCREASE, Goal.MAINTAIN, Goal.NONDECREASE})


class GadgetConstructionNote(UserWarning):
    """Non-fatal notes about deliberate construction choices."""


def _ceil_log2(n: int) -> int:
    return (n - 1).bit_length()


@dataclass(frozen=True)
class PrereductionWeights:
    """The variable/clause weight vectors shared by all three gadgets.

    ``a_weights[i-1]`` carries variable ``x_i`` set true (a name digit at
    position ``t*(m+1)+i`` plus one clause digit per clause containing
    ``x_i``); ``b_weights`` is the negated-literal analogue and
    ``c_weights`` holds the clause toppers ``2^s * 10^(t*j)``.  A subset of
    all these weights sums to ``q_prime`` iff it picks exactly one of
    ``{a_i, b_i}`` per variable in a satisfying pattern, so
    ``#SubsetSum = #SAT``.
    """

    k: int
    num_clauses: int
    r: int
    t: int
    a_weights: tuple[int, ...]
    b_weights: tuple[int, ...]
    c_weights: tuple[int, ...]
    q_prime: int

    def __post_init__(self) -> None:
        n = len(self.a_weights)
        if len(self.b_weights) != n:
            raise GadgetParameterError("a/b weight vectors must have equal length")
        if 10**self.t <= 1 << (_ceil_log2(n) + 1):
            raise GadgetParameterError("t violates the digit-separation bound")

    @property
    def num_variables(self) -> int:
        return len(self.a_weights)

    @property
    def w_a_vector(self) -> tuple[int, ...]:
        """Weights of group A: ``(a_1..a_k, b_1..b_k)``."""
        return self.a_weights[: self.k] + self.b_weights[: self.k]

    @property
    def w_b_vector(self) -> tuple[int, ...]:
        """Weights of group B: ``(a_{k+1}..a_n, b_{k+1}..b_n)``."""
        return self.a_weights[self.k :] + self.b_weights[self.k :]

    @property
    def abc_weights(self) -> tuple[int, ...]:
        return self.a_weights + self.b_weights + self.c_weights

    @property
    def scale(self) -> int:
        """The factor turning the base vectors into the E copies."""
        return 10 ** (self.t * (self.num_clauses + 1) + self.num_variables)

    @property
    def scaled_weights(self) -> tuple[int, ...]:
        """Weights of group E: every base weight times ``scale``."""
        return tuple(w * self.scale for w in self.abc_weights)

    @property
    def q_double_prime(self) -> int:
        return self.q_prime * self.scale


def build_prereduction(
    formula: CnfFormula, k: int, t_floor: int = 0
) -> PrereductionWeights:
    """Build the weight vectors for ``formula`` with prefix length ``k``.

    ``t`` is chosen minimal such that ``10^t`` exceeds both the
    digit-separation bound ``2^(ceil(log2 n)+1)`` and ``t_floor`` (gadget
    builders pass the chain bound through here).
    """
    n = formula.num_variables
    m = formula.num_clauses
    if not 1 <= k <= n:
        raise GadgetParameterError(f"need 1 <= k <= n, got k={k}, n={n}")
    ceil_log = _ceil_log2(n)
    bound = max(1 << (ceil_log + 1), t_floor)
    t = 1
    while 10**t <= bound:
        t += 1

    positive: dict[int, list[int]] = {i: [] for i in range(1, n + 1)}
    negative: dict[int, list[int]] = {i: [] for i in range(1, n + 1)}
    for j, clause in enumerate(formula.clauses, start=1):
        for literal in clause:
            (positive if literal > 0 else negative)[abs(literal)].append(j)

    def name_digit(i: int) -> int:
        return 10 ** (t * (m + 1) + i)

    a_weights = tuple(
        name_digit(i) + sum(10 ** (t * j) for j in positive[i]) for i in range(1, n + 1)
    )
    b_weights = tuple(
        name_digit(i) + sum(10 ** (t * j) for j in negative[i]) for i in range(1, n + 1)
    )
    c_weights = tuple(
        (1 << s) * 10 ** (t * j) for j in range(1, m + 1) for s in range(0, ceil_log)
    )
    q_prime = sum(name_digit(i) for i in range(1, n + 1)) + (1 << ceil_log) * sum(
        10 ** (t * j) for j in range(1, m + 1)
    )
    return PrereductionWeights(
        k=k,
        num_clauses=m,
        r=ceil_log - 1,
        t=t,
        a_weights=a_weights,
        b_weights=b_weights,
        c_weights=c_weights,
        q_prime=q_prime,
    )


@dataclass(frozen=True)
class DeltaDecomposition:
    """Binary split ``ell = 2^d_1 + ... + 2^d_h`` with level weights.

    Level weights follow ``w_1 = 1``, ``w_j = (d_{j-1} + 1) * w_{j-1}``,
    which guarantees the level groups (``d_i`` players of weight ``w_i``)
    stack without carries: the total weight of levels ``1..j`` stays below
    ``w_{j+1}``.
    """

    exponents: tuple[int, ...]
    level_weights: tuple[int, ...]

    def __post_init__(self) -> None:
        if list(self.exponents) != sorted(set(self.exponents), reverse=True):
            raise GadgetParameterError("exponents must be strictly decreasing")
        for j in range(len(self.exponents) - 1):
            total = sum(
                d * w
                for d, w in zip(self.exponents[: j + 1], self.level_weights[: j + 1])
            )
            if total >= self.level_weights[j + 1]:
                raise GadgetParameterError("level weights violate the no-carry chain")

    @property
    def h(self) -> int:
        return len(self.exponents)

    @property
    def ell(self) -> int:
        return sum(1 << d for d in self.exponents)

    @classmethod
    def from_ell(cls, ell: int) -> DeltaDecomposition:
        if ell < 1:
            raise GadgetParameterError("ell must be positive")
        exponents = tuple(
            d for d in range(ell.bit_length() - 1, -1, -1) if (ell >> d) & 1
        )
        level_weights = [1]
        for j in range(1, len(exponents)):
            level_weights.append((exponents[j - 1] + 1) * level_weights[j - 1])
        return cls(exponents, tuple(level_weights))


@dataclass(frozen=True)
class ControlInstance:
    """A control-by-deleting-players decision instance.

    ``groups`` carries one provenance label per player for gadget
    instances (``player-1``, ``A`` .. ``Z*``, ``L1``..); ``a_players`` /
    ``b_players`` locate the literal carriers so witness deletions can be
    constructed (``None`` marks a deleted carrier).  Plain instances over
    hand-made games leave all of that empty.
    """

    game: Game
    distinguished: int
    budget: int
    goal: Goal
    groups: tuple[str, ...] | None = None
    bands: BandSystem | None = None
    a_players: tuple[int | None, ...] = ()
    b_players: tuple[int | None, ...] = ()
    meta: dict[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.game.check_player(self.distinguished)
        if not 0 <= self.budget < self.game.num_players:
            raise InputError(
                f"budget must satisfy 0 <= budget < {self.game.num_players}"
            )
        if self.groups is not None and len(self.groups) != self.game.num_players:
            raise InputError("group labels must cover every player exactly once")
        if self.bands is not None:
            if self.bands.game != self.game or self.bands.distinguished != self.distinguished:
                raise InputError("band metadata disagrees with the instance")
        if len(self.a_players) != len(self.b_players):
            raise InputError("a/b player tables must have equal length")

    def group_members(self, label: str) -> tuple[int, ...]:
        if self.groups is None:
            return ()
        return tuple(p for p, found in enumerate(self.groups) if found == label)

    def delete(self, victims: Iterable[int]) -> ControlInstance:
        """The instance after deleting ``victims`` (never the distinguished player).

        Band metadata shrinks with the game and is re-validated; the
        budget is clamped to stay below the new player count.
        """
        victim_set = frozenset(victims)
        if self.distinguished in victim_set:
            raise InputError("cannot delete the distinguished player")
        new_game, remap = delete_players(self.game, victim_set)
        return ControlInstance(
            game=new_game,
            distinguished=remap[self.distinguished],
            budget=min(self.budget, new_game.num_players - 1),
            goal=self.goal,
            groups=None
            if self.groups is None
            else tuple(self.groups[old] for old in sorted(remap)),
            bands=None if self.bands is None else self.bands.restrict(remap, new_game),
            a_players=tuple(
                None if p is None else remap.get(p) for p in self.a_players
            ),
            b_players=tuple(
                None if p is None else remap.get(p) for p in self.b_players
            ),
            meta=dict(self.meta),
        )


@dataclass(frozen=True)
class _Chain:
    """The small-weight ladder shared by the gadget light groups."""

    x: int
    x_prime: int
    y: int
    y_prime: int
    y_star: int
    y_star2: int
    z: int
    z_prime: int
    z_star: tuple[int, ...]


def _decrease_chain(k: int, n: int) -> _Chain:
    x = 1
    x_prime = k + 1
    y = (2 * k + 1) * x_prime
    y_prime = (k + 2) * y
    y_star = (n + 1) * y_prime
    y_star2 = (k + 2) * y_star
    z = (n + 1) * y_star2
    z_prime = (k + 2) * z
    z_star_1 = (k + 2) * z_prime
    z_star = tuple(z_star_1 << i for i in range(k))
    return _Chain(x, x_prime, y, y_prime, y_star, y_star2, z, z_prime, z_star)


def _maintain_chain(k: int, n: int, delta: DeltaDecomposition) -> _Chain:
    x = (delta.exponents[-1] + 1) * delta.level_weights[-1]
    x_prime = (k + 1) * x
    y = (2 * k + 1) * x_prime
    y_prime = (k + 2) * y
    y_star = (n + 3) * y_prime
    y_star2 = (k + 2) * y_star
    z = (n + 3) * y_star2
    z_prime = (k + 1) * z
    z_star_1 = (k + 2) * z_prime
    z_star = tuple(z_star_1 << i for i in range(k))
    return _Chain(x, x_prime, y, y_prime, y_star, y_star2, z, z_prime, z_star)


def _check_mode(k: int, n: int, strict: bool) -> str:
    if strict:
        if not 4 <= k < n:
            raise GadgetParameterError(
                f"strict mode needs 4 <= k < n, got k={k}, n={n} "
                "(use relaxed mode for oracle-scale instances)"
            )
        return "strict"
    if not 1 <= k < n:
        raise GadgetParameterError(f"relaxed mode needs 1 <= k < n, got k={k}, n={n}")
    return "relaxed"


class _Assembler:
    """Accumulates players in a fixed canonical order."""

    def __init__(self) -> None:
        self.weights: list[int] = []
        self.labels: list[str] = []

    def add(self, label: str, weight: int) -> int:
        self.weights.append(weight)
        self.labels.append(label)
        return len(self.weights) - 1

    def add_group(self, label: str, group_weights: Iterable[int]) -> list[int]:
        return [self.add(label, w) for w in group_weights]


def _uniform_block(name: str, members: Sequence[int], weight: int) -> LightBlock:
    return LightBlock(
        name,
        BlockKind.UNIFORM_CHAIN_LEVEL,
        tuple(members),
        tuple(weight for _ in members),
        weight,
    )


def build_decrease(formula: CnfFormula, k: int, strict: bool = True) -> ControlInstance:
    """The decrease-goal game for ``(formula, k)``.

    Expected index of the distinguished player:
    ``(2k*2^k*xi + k*(2^n + 2^(k+1))*(2^(k+1) - 1)) / 2^(|N|-1)`` where
    ``xi`` is the model count of the formula.
    """
    return _build_minority_gadget(formula, k, strict, Goal.DECREASE)


def build_nonincrease(
    formula: CnfFormula, k: int, strict: bool = True
) -> ControlInstance:
    """The nonincrease-goal game: the decrease game minus S, U, Y, Y*, Z."""
    base = _build_minority_gadget(formula, k, strict, Goal.NONINCREASE)
    victims = [
        p
        for label in ("S", "U", "Y", "Y*", "Z")
        for p in base.group_members(label)
    ]
    trimmed = base.delete(victims)
    meta = dict(trimmed.meta)
    meta["kind"] = "nonincrease"
    return ControlInstance(
        game=trimmed.game,
        distinguished=trimmed.distinguished,
        budget=k,
        goal=Goal.NONINCREASE,
        groups=trimmed.groups,
        bands=trimmed.bands,
        a_players=trimmed.a_players,
        b_players=trimmed.b_players,
        meta=meta,
    )


def _build_minority_gadget(
    formula: CnfFormula, k: int, strict: bool, goal: Goal
) -> ControlInstance:
    n = formula.num_variables
    m = formula.num_clauses
    mode = _check_mode(k, n, strict)
    chain = _decrease_chain(k, n)
    pre = build_prereduction(formula, k, t_floor=2 * chain.z_star[-1])
    scale = pre.scale
    base_total = sum(pre.abc_weights)
    quota = 2 * (base_total + scale * base_total + 10**pre.t) + 1
    pivot_target = quota - 1

    def heavy_weight(completion: int) -> int:
        if completion >= pivot_target:
            raise GadgetParameterError("heavy completion swallows the pivotal target")
        return pivot_target - completion

    asm = _Assembler()
    asm.add("player-1", 1)
    a_idx: list[int | None] = [None] * n
    b_idx: list[int | None] = [None] * n
    for i in range(1, k + 1):
        a_idx[i - 1] = asm.add("A", pre.a_weights[i - 1])
    for i in range(1, k + 1):
        b_idx[i - 1] = asm.add("A", pre.b_weights[i - 1])
    for i in range(k + 1, n + 1):
        a_idx[i - 1] = asm.add("B", pre.a_weights[i - 1])
    for i in range(k + 1, n + 1):
        b_idx[i - 1] = asm.add("B", pre.b_weights[i - 1])
    c_idx = asm.add_group("C", pre.c_weights)
    d_idx = [
        asm.add("D", heavy_weight(pre.q_prime + i * chain.x + chain.x_prime))
        for i in range(k)
    ]
    e_idx = asm.add_group("E", pre.scaled_weights)
    f_idx = asm.add("F", heavy_weight(pre.q_double_prime + chain.x_prime))
    pair = [pre.a_weights[i - 1] + pre.b_weights[i - 1] for i in range(1, n + 1)]
    s_idx = [
        asm.add("S", heavy_weight(pair[i - 1] + j * chain.y + l * chain.z))
        for i in range(1, k + 1)
        for j in range(0, k + 2)
        for l in range(1, k + 1)
    ]
    t_idx = [
        asm.add("T", heavy_weight(pair[i - 1] + j * chain.y_prime + l * chain.z_prime))
        for i in range(1, k + 1)
        for j in range(0, n + 1)
        for l in range(1, k + 1)
    ]
    u_idx = [
        asm.add("U", heavy_weight(j * chain.y_star + chain.z_star[i - 1]))
        for i in range(1, k + 1)
        for j in range(0, k + 2)
    ]
    v_idx = [
        asm.add("V", heavy_weight(j * chain.y_star2 + chain.z_star[i - 1]))
        for i in range(1, k + 1)
        for j in range(0, n + 1)
    ]
    x_idx = asm.add_group("X", [chain.x] * k)
    xp_idx = asm.add_group("X'", [chain.x_prime] * (2 * k))
    y_idx = asm.add_group("Y", [chain.y] * (k + 1))
    yp_idx = asm.add_group("Y'", [chain.y_prime] * n)
    ys_idx = asm.add_group("Y*", [chain.y_star] * (k + 1))
    yss_idx = asm.add_group("Y**", [chain.y_star2] * n)
    z_idx = asm.add_group("Z", [chain.z] * (k + 1))
    zp_idx = asm.add_group("Z'", [chain.z_prime] * (k + 1))
    zs_idx = asm.add_group("Z*", chain.z_star)

    game = Game(tuple(asm.weights), quota)
    abc_members = (
        [p for p in a_idx if p is not None] + [p for p in b_idx if p is not None] + c_idx
    )
    blocks = (
        LightBlock(
            "E",
            BlockKind.ENUMERABLE,
            tuple(e_idx),
            pre.scaled_weights,
            granularity=10**pre.t * scale,
        ),
        LightBlock(
            "ABC",
            BlockKind.ENUMERABLE,
            tuple(abc_members),
            tuple(game.weights[p] for p in abc_members),
            granularity=10**pre.t,
        ),
        LightBlock(
            "Z*",
            BlockKind.SUPERINCREASING,
            tuple(zs_idx),
            chain.z_star,
            granularity=chain.z_star[0],
        ),
        _uniform_block("Z'", zp_idx, chain.z_prime),
        _uniform_block("Z", z_idx, chain.z),
        _uniform_block("Y**", yss_idx, chain.y_star2),
        _uniform_block("Y*", ys_idx, chain.y_star),
        _uniform_block("Y'", yp_idx, chain.y_prime),
        _uniform_block("Y", y_idx, chain.y),
        _uniform_block("X'", xp_idx, chain.x_prime),
        _uniform_block("X", x_idx, chain.x),
    )
    heavy = frozenset(d_idx + [f_idx] + s_idx + t_idx + u_idx + v_idx)
    bands = BandSystem(game=game, distinguished=0, heavy=heavy, blocks=blocks)
    return ControlInstance(
        game=game,
        distinguished=0,
        budget=k,
        goal=goal,
        groups=tuple(asm.labels),
        bands=bands,
        a_players=tuple(a_idx),
        b_players=tuple(b_idx),
        meta={
            "kind": "decrease",
            "k": k,
            "n": n,
            "m": m,
            "t": pre.t,
            "mode": mode,
        },
    )


def exactify(formula: CnfFormula, k: int, ell: int) -> tuple[CnfFormula, int, int]:
    """Append ``(x_{n+1} or x_{n+2})`` and triple ``ell``.

    The new clause is independent of the old variables and true under
    exactly three of the four assignments to the fresh pair, so a prefix
    has exactly ``ell`` satisfying suffixes in the original formula iff it
    has exactly ``3*ell`` in the extension.  ``3*ell`` is never a power of
    two, which is what the maintain builder needs.
    """
    if ell < 1:
        raise GadgetParameterError("ell must be positive")
    n = formula.num_variables
    extended = CnfFormula(
        n + 2, formula.clauses + (frozenset({n + 1, n + 2}),)
    )
    return extended, k, 3 * ell


def build_maintain(
    formula: CnfFormula, k: int, ell: int, strict: bool = True
) -> ControlInstance:
    """The maintain-goal game for ``(formula, k, ell)``.

    Expected index of the distinguished player:
    ``(2k*2^k*xi + k*ell*(2^(n+2) + 2^(k+1))*2^k) / 2^(|N|-1)``.

    In strict mode ``ell`` must not be a power of two (run :func:`exactify`
    first); relaxed mode accepts any positive ``ell``.
    """
    n = formula.num_variables
    m = formula.num_clauses
    mode = _check_mode(k, n, strict)
    if ell < 1:
        raise GadgetParameterError("ell must be positive")
    if strict and ell & (ell - 1) == 0:
        raise GadgetParameterError(
            "strict mode requires ell with more than one binary digit; "
            "apply exactify() to the source instance first"
        )
    delta = DeltaDecomposition.from_ell(ell)
    warnings.warn(
        "maintain level weights follow w_1=1, w_j=(d_{j-1}+1)*w_{j-1}; the "
        "variant (d_j+1)*w_{j-1} would break the no-carry invariant",
        GadgetConstructionNote,
        stacklevel=2,
    )
    chain = _maintain_chain(k, n, delta)
    pre = build_prereduction(formula, k, t_floor=2 * chain.z_star[-1])
    scale = pre.scale
    base_total = sum(pre.abc_weights)
    quota = 2 * (base_total + scale * base_total + 10**pre.t) + 1
    pivot_target = quota - 1

    def heavy_weight(completion: int) -> int:
        if completion >= pivot_target:
            raise GadgetParameterError("heavy completion swallows the pivotal target")
        return pivot_target - completion

    asm = _Assembler()
    asm.add("player-1", 1)
    a_idx: list[int | None] = [None] * n
    b_idx: list[int | None] = [None] * n
    for i in range(1, k + 1):
        a_idx[i - 1] = asm.add("A", pre.a_weights[i - 1])
    for i in range(1, k + 1):
        b_idx[i - 1] = asm.add("A", pre.b_weights[i - 1])
    for i in range(k + 1, n + 1):
        a_idx[i - 1] = asm.add("B", pre.a_weights[i - 1])
    for i in range(k + 1, n + 1):
        b_idx[i - 1] = asm.add("B", pre.b_weights[i - 1])
    c_idx = asm.add_group("C", pre.c_weights)
    d_idx = [
        asm.add("D", heavy_weight(pre.q_prime + i * chain.x + chain.x_prime))
        for i in range(k)
    ]
    e_idx = asm.add_group("E", pre.scaled_weights)
    f_idx = asm.add("F", heavy_weight(pre.q_double_prime + chain.x_prime))
    level_idx: list[list[int]] = [
        asm.add_group(f"L{i + 1}", [delta.level_weights[i]] * delta.exponents[i])
        for i in range(delta.h)
    ]
    pair = [pre.a_weights[i - 1] + pre.b_weights[i - 1] for i in range(1, n + 1)]
    s_idx: list[int] = []
    t_idx: list[int] = []
    u_idx: list[int] = []
    v_idx: list[int] = []
    v_multiset = [0, 0] + list(range(1, n + 2)) + [n + 2, n + 2]
    for level in range(delta.h):
        d_i = delta.exponents[level]
        w_i = delta.level_weights[level]
        s_idx += [
            asm.add(
                "S",
                heavy_weight(pair[i - 1] + j * chain.y + jp * chain.z + jpp * w_i),
            )
            for i in range(1, k + 1)
            for j in range(0, k + 2)
            for jp in range(0, k)
            for jpp in range(0, d_i + 1)
        ]
        t_idx += [
            asm.add(
                "T",
                heavy_weight(
                    pair[i - 1] + j * chain.y_prime + jp * chain.z_prime + jpp * w_i
                ),
            )
            for i in range(1, k + 1)
            for j in range(0, n + 3)
            for jp in range(0, k)
            for jpp in range(0, d_i + 1)
        ]
        u_idx += [
            asm.add("U", heavy_weight(pair[i - 1] + j * chain.y_star + jp * w_i))
            for i in range(1, k + 1)
            for j in range(1, k + 1)
            for jp in range(0, d_i + 1)
        ]
        v_idx += [
            asm.add(
                "V", heavy_weight(j * chain.y_star2 + chain.z_star[i - 1] + jp * w_i)
            )
            for i in range(1, k + 1)
            for j in v_multiset
            for jp in range(0, d_i + 1)
        ]
    x_idx = asm.add_group("X", [chain.x] * k)
    xp_idx = asm.add_group("X'", [chain.x_prime] * (2 * k))
    y_idx = asm.add_group("Y", [chain.y] * (k + 1))
    yp_idx = asm.add_group("Y'", [chain.y_prime] * (n + 2))
    ys_idx = asm.add_group("Y*", [chain.y_star] * (k + 1))
    yss_idx = asm.add_group("Y**", [chain.y_star2] * (n + 2))
    z_idx = asm.add_group("Z", [chain.z] * k)
    zp_idx = asm.add_group("Z'", [chain.z_prime] * k)
    zs_idx = asm.add_group("Z*", chain.z_star)

    game = Game(tuple(asm.weights), quota)
    abc_members = (
        [p for p in a_idx if p is not None] + [p for p in b_idx if p is not None] + c_idx
    )
    level_blocks = tuple(
        _uniform_block(f"L{i + 1}", level_idx[i], delta.level_weights[i])
        for i in range(delta.h - 1, -1, -1)
    )
    blocks = (
        LightBlock(
            "E",
            BlockKind.ENUMERABLE,
            tuple(e_idx),
            pre.scaled_weights,
            granularity=10**pre.t * scale,
        ),
        LightBlock(
            "ABC",
            BlockKind.ENUMERABLE,
            tuple(abc_members),
            tuple(game.weights[p] for p in abc_members),
            granularity=10**pre.t,
        ),
        LightBlock(
            "Z*",
            BlockKind.SUPERINCREASING,
            tuple(zs_idx),
            chain.z_star,
            granularity=chain.z_star[0],
        ),
        _uniform_block("Z'", zp_idx, chain.z_prime),
        _uniform_block("Z", z_idx, chain.z),
        _uniform_block("Y**", yss_idx, chain.y_star2),
        _uniform_block("Y*", ys_idx, chain.y_star),
        _uniform_block("Y'", yp_idx, chain.y_prime),
        _uniform_block("Y", y_idx, chain.y),
        _uniform_block("X'", xp_idx, chain.x_prime),
        _uniform_block("X", x_idx, chain.x),
    ) + level_blocks
    heavy = frozenset(d_idx + [f_idx] + s_idx + t_idx + u_idx + v_idx)
    bands = BandSystem(game=game, distinguished=0, heavy=heavy, blocks=blocks)
    return ControlInstance(
        game=game,
        distinguished=0,
        budget=k,
        goal=Goal.MAINTAIN,
        groups=tuple(asm.labels),
        bands=bands,
        a_players=tuple(a_idx),
        b_players=tuple(b_idx),
        meta={
            "kind": "maintain",
            "k": k,
            "n": n,
            "m": m,
            "t": pre.t,
            "ell": ell,
            "delta_exponents": list(delta.exponents),
            "mode": mode,
        },
    )


@dataclass(frozen=True)
class CaseCounts:
    """Pivotal-coalition counts split by the heavy group carrying them.

    Case 1 counts coalitions through D, case 2 through F, cases 3-6
    through S, T, U and V respectively.
    """

    case1: int
    case2: int
    case3: int
    case4: int
    case5: int
    case6: int

    @property
    def total(self) -> int:
        return self.case1 + self.case2 + self.case3 + self.case4 + self.case5 + self.case6


_CASE_GROUPS = ("D", "F", "S", "T", "U", "V")


def expected_case_counts(
    goal: Goal, k: int, n: int, xi: int, ell: int | None = None
) -> CaseCounts:
    """Closed-form per-case pivotal counts for a gadget built from (k, n, xi[, ell])."""
    if goal is Goal.DECREASE or goal is Goal.NONINCREASE:
        counts = CaseCounts(
            case1=2 * k * ((1 << k) - 1) * xi,
            case2=2 * k * xi,
            case3=k * (1 << (k + 1)) * ((1 << (k + 1)) - 2),
            case4=k * (1 << n) * ((1 << (k + 1)) - 2),
            case5=k * (1 << (k + 1)),
            case6=k * (1 << n),
        )
        if goal is Goal.NONINCREASE:
            counts = CaseCounts(
                counts.case1, counts.case2, 0, counts.case4, 0, counts.case6
            )
        return counts
    if goal is Goal.MAINTAIN:
        if ell is None:
            raise InputError("the maintain closed form needs ell")
        return CaseCounts(
            case1=2 * k * ((1 << k) - 1) * xi,
            case2=2 * k * xi,
            case3=k * ell * (1 << (k + 1)) * ((1 << k) - 1),
            case4=k * ell * (1 << (n + 2)) * ((1 << k) - 1),
            case5=k * ell * ((1 << (k + 1)) - 2),
            case6=k * ell * ((1 << (n + 2)) + 2),
        )
    raise InputError(f"no closed form for goal {goal}")


def expected_index(
    goal: Goal, k: int, n: int, xi: int, num_players: int, ell: int | None = None
) -> ExactIndex:
    """The closed-form index ``(case total) / 2^(num_players - 1)``."""
    counts = expected_case_counts(goal, k, n, xi, ell)
    return ExactIndex(counts.total, num_players - 1)


def layered_case_counts(instance: ControlInstance) -> CaseCounts:
    """Per-case pivotal counts of a gadget instance via the layered counter."""
    if instance.bands is None or instance.groups is None:
        raise InputError("per-case counting needs band metadata and group labels")
    totals = {label: 0 for label in _CASE_GROUPS}
    for player in sorted(instance.bands.heavy):
        label = instance.groups[player]
        if label not in totals:
            raise InputError(f"heavy player {player} carries unexpected label {label!r}")
        totals[label] += heavy_pivot_term(instance.bands, player)
    return CaseCounts(
        totals["D"], totals["F"], totals["S"], totals["T"], totals["U"], totals["V"]
    )


def witness_deletion(
    instance: ControlInstance, prefix: Sequence[int]
) -> frozenset[int]:
    """The deletion set encoding a prefix assignment into the A group.

    For each ``i <= k`` the set removes the carrier of ``b_i`` when
    ``x_i`` is true and the carrier of ``a_i`` otherwise, so the surviving
    A players force exactly the given prefix on every full-weight subset.
    """
    k = instance.meta.get("k")
    if not isinstance(k, int):
        raise InputError("instance carries no A-group provenance")
    if len(prefix) != k:
        raise InputError(f"prefix length {len(prefix)} != k={k}")
    victims: set[int] = set()
    for i, bit in enumerate(prefix):
        carrier = instance.b_players[i] if bit else instance.a_players[i]
        if carrier is None:
            raise InputError(f"literal carrier for variable {i + 1} was already deleted")
        victims.add(carrier)
    return frozenset(victims)
