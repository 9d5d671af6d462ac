"""The three pivotal-count engines and their mutual-oracle properties."""

from __future__ import annotations

import random

import pytest

from wvgcontrol import (
    BudgetExceededError,
    EngineBudget,
    ExactIndex,
    Game,
    banzhaf,
    delete_players,
    pivot_count_enum,
    pivot_count_mitm,
    pivot_count_weight_dp,
)

from conftest import random_game

ALL_ENGINES = (pivot_count_enum, pivot_count_mitm, pivot_count_weight_dp)


def all_counts(game: Game, player: int) -> set[int]:
    return {engine(game, player) for engine in ALL_ENGINES}


class TestWorkedExample:
    def test_weight2_player_has_eight_pivots(self, example1):
        assert all_counts(example1, 1) == {8}

    def test_after_deleting_weight3(self, example1):
        smaller, remap = delete_players(example1, {5})
        assert all_counts(smaller, remap[1]) == {3}
        assert banzhaf(smaller, remap[1]) == ExactIndex(3, 4)

    def test_after_deleting_weight2(self, example1):
        smaller, remap = delete_players(example1, {2})
        assert all_counts(smaller, remap[1]) == {4}
        assert banzhaf(smaller, remap[1]) == ExactIndex(1, 2)

    def test_weight1_player(self, example1):
        # frozen from the enumeration oracle: subsets of (2,2,2,3,3) summing to 7
        assert all_counts(example1, 0) == {6}


class TestSmallCases:
    def test_single_player_pivotal_for_empty(self):
        game = Game((5,), 3)
        assert all_counts(game, 0) == {1}

    def test_dictator_among_dummies(self):
        game = Game((9, 0, 0, 0), 8)
        assert all_counts(game, 0) == {2 ** 3}

    def test_quota_one_all_positive(self):
        # only the empty coalition loses, and every player completes it
        game = Game((2, 3, 4), 1)
        for player in range(3):
            assert all_counts(game, player) == {1}

    def test_unreachable_quota(self):
        game = Game((1, 1, 1), 50)
        assert all_counts(game, 0) == {0}

    def test_zero_weight_player_never_pivotal(self):
        game = Game((0, 3, 4), 5)
        assert all_counts(game, 0) == {0}


class TestBudgets:
    def test_enum_refusal_names_budget(self):
        game = Game(tuple([1] * 6), 3)
        with pytest.raises(BudgetExceededError, match="max_enum_players"):
            pivot_count_enum(game, 0, EngineBudget(max_enum_players=4))

    def test_mitm_refusal(self):
        game = Game(tuple([1] * 12), 3)
        with pytest.raises(BudgetExceededError, match="max_mitm_half"):
            pivot_count_mitm(game, 0, EngineBudget(max_mitm_half=2))

    def test_dp_refusal(self):
        game = Game((10, 20), 15)
        with pytest.raises(BudgetExceededError, match="max_dp_quota"):
            pivot_count_weight_dp(game, 0, EngineBudget(max_dp_quota=10))

    def test_budget_validation(self):
        with pytest.raises(Exception):
            EngineBudget(max_enum_players=0)


class TestEngineAgreement:
    def test_agreement_on_random_games(self):
        rng = random.Random(101)
        for _ in range(60):
            game = random_game(rng, max_players=12)
            player = rng.randrange(game.num_players)
            assert len(all_counts(game, player)) == 1

    def test_count_range(self):
        rng = random.Random(102)
        for _ in range(60):
            game = random_game(rng, max_players=10)
            player = rng.randrange(game.num_players)
            count = pivot_count_enum(game, player)
            assert 0 <= count <= 1 << (game.num_players - 1)

    def test_duplicate_symmetry(self):
        rng = random.Random(103)
        for _ in range(40):
            game = random_game(rng, max_players=10, max_weight=6)
            by_weight: dict[int, list[int]] = {}
            for player, weight in enumerate(game.weights):
                by_weight.setdefault(weight, []).append(player)
            for members in by_weight.values():
                counts = {pivot_count_enum(game, p) for p in members}
                assert len(counts) == 1

    def test_dummy_deletion_halves_denominator_only(self):
        rng = random.Random(104)
        for _ in range(40):
            game = random_game(rng, max_players=9)
            zeros = [p for p, w in enumerate(game.weights) if w == 0]
            if not zeros or len(zeros) == game.num_players:
                continue
            smaller, remap = delete_players(game, {zeros[0]})
            for player in range(game.num_players):
                if player == zeros[0]:
                    continue
                before = pivot_count_enum(game, player)
                after = pivot_count_enum(smaller, remap[player])
                # every pivotal coalition loses its zero-weight twin
                assert before == 2 * after
                assert banzhaf(game, player) == banzhaf(smaller, remap[player])

    def test_mitm_on_wide_game_vs_enum_subsamples(self):
        rng = random.Random(105)
        wide = Game(tuple(rng.randint(1, 100) for _ in range(30)), 700)
        for _ in range(5):
            keep = sorted(rng.sample(range(30), 20))
            sub = Game(tuple(wide.weights[p] for p in keep), wide.quota)
            player = rng.randrange(20)
            assert pivot_count_mitm(sub, player) == pivot_count_enum(sub, player)


class TestBanzhaf:
    def test_exponent_is_player_count_minus_one(self, example1):
        value = banzhaf(example1, 1)
        assert value == ExactIndex(8, 5)
        assert value.pivot_count == 8 and value.exponent == 5

    def test_engine_dispatch(self, example1):
        for engine in ("enum", "mitm", "dp"):
            assert banzhaf(example1, 1, engine) == ExactIndex(1, 2)

    def test_unknown_engine(self, example1):
        with pytest.raises(Exception, match="unknown engine"):
            banzhaf(example1, 1, "magic")
