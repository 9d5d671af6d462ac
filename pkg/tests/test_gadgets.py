"""Gadget builders: prereduction vectors, the three constructions, closed forms."""

from __future__ import annotations

import random
import warnings

import pytest

from wvgcontrol import (
    CnfFormula,
    DeltaDecomposition,
    ExactIndex,
    GadgetParameterError,
    Goal,
    build_decrease,
    build_maintain,
    build_nonincrease,
    build_prereduction,
    count_sat,
    count_subset_sum,
    e_exact_sat,
    e_minority_sat,
    exactify,
    expected_case_counts,
    expected_index,
    layered_case_counts,
    pivot_count_layered,
    witness_deletion,
)
from wvgcontrol.bands import heavy_pivot_term
from wvgcontrol.engines import EngineBudget, pivot_count_mitm
from wvgcontrol.gadgets import GadgetConstructionNote

OR2 = CnfFormula(2, (frozenset({1, 2}),))
WIDE5 = CnfFormula(5, (frozenset({1, 2, 3, 4, 5}),))

pytestmark = pytest.mark.filterwarnings("ignore::wvgcontrol.gadgets.GadgetConstructionNote")


class TestPrereduction:
    def test_or2_vectors(self):
        pre = build_prereduction(OR2, 1)
        assert (pre.r, pre.t) == (0, 1)
        assert pre.a_weights == (1010, 10010)
        assert pre.b_weights == (1000, 10000)
        assert pre.c_weights == (10,)
        assert pre.q_prime == 11020
        assert pre.w_a_vector == (1010, 1000)
        assert pre.w_b_vector == (10010, 10000)

    def test_subset_sum_identity(self):
        pre = build_prereduction(OR2, 1)
        assert count_subset_sum(pre.abc_weights, pre.q_prime) == count_sat(OR2) == 3

    def test_scaled_identity(self):
        pre = build_prereduction(OR2, 1)
        assert count_subset_sum(pre.scaled_weights, pre.q_double_prime) == 3

    def test_t_floor_raises_t(self):
        pre = build_prereduction(OR2, 1, t_floor=10**6)
        assert 10**pre.t > 10**6
        assert pre.t == 7

    def test_k_range(self):
        with pytest.raises(GadgetParameterError):
            build_prereduction(OR2, 0)
        with pytest.raises(GadgetParameterError):
            build_prereduction(OR2, 3)

    def test_single_variable_formula(self):
        formula = CnfFormula(1, (frozenset({1}),))
        pre = build_prereduction(formula, 1)
        assert pre.c_weights == ()  # r = -1: no clause toppers
        assert count_subset_sum(pre.abc_weights, pre.q_prime) == count_sat(formula) == 1


class TestDeltaDecomposition:
    def test_ell_3(self):
        delta = DeltaDecomposition.from_ell(3)
        assert delta.exponents == (1, 0)
        assert delta.level_weights == (1, 2)
        assert delta.ell == 3

    def test_ell_6(self):
        delta = DeltaDecomposition.from_ell(6)
        assert delta.exponents == (2, 1)
        assert delta.level_weights == (1, 3)

    def test_ell_12(self):
        assert DeltaDecomposition.from_ell(12).exponents == (3, 2)

    def test_power_of_two_has_single_level(self):
        assert DeltaDecomposition.from_ell(8).h == 1

    def test_rejects_nonpositive(self):
        with pytest.raises(GadgetParameterError):
            DeltaDecomposition.from_ell(0)

    def test_no_carry_chain_holds_broadly(self):
        for ell in range(1, 300):
            delta = DeltaDecomposition.from_ell(ell)
            total = 0
            for j in range(delta.h):
                if j:
                    assert total < delta.level_weights[j]
                total += delta.exponents[j] * delta.level_weights[j]


class TestDecreaseBuilder:
    def test_strict_player_count(self):
        instance = build_decrease(WIDE5, 4)
        assert instance.game.num_players == 318
        assert instance.budget == 4
        assert instance.goal is Goal.DECREASE
        assert instance.meta["mode"] == "strict"

    def test_group_sizes_match_table(self):
        instance = build_decrease(WIDE5, 4)
        k, n, m, r = 4, 5, 1, 2
        expected = {
            "player-1": 1,
            "A": 2 * k,
            "B": 2 * n - 2 * k,
            "C": m * (r + 1),
            "D": k,
            "E": 2 * n + m * (r + 1),
            "F": 1,
            "S": k * k * (k + 2),
            "T": k * k * (n + 1),
            "U": k * (k + 2),
            "V": k * (n + 1),
            "X": k,
            "X'": 2 * k,
            "Y": k + 1,
            "Y'": n,
            "Y*": k + 1,
            "Y**": n,
            "Z": k + 1,
            "Z'": k + 1,
            "Z*": k,
        }
        for label, size in expected.items():
            assert len(instance.group_members(label)) == size, label

    def test_quota_identity(self):
        instance = build_decrease(WIDE5, 4)
        t = instance.meta["t"]
        group_total = sum(
            instance.game.weights[p]
            for label in ("A", "B", "C", "E")
            for p in instance.group_members(label)
        )
        assert instance.game.quota == 2 * (group_total + 10**t) + 1

    def test_strict_closed_form(self):
        instance = build_decrease(WIDE5, 4)
        assert pivot_count_layered(instance.bands) == 11904
        assert expected_index(Goal.DECREASE, 4, 5, 31, 318) == ExactIndex(11904, 317)

    def test_per_case_split(self):
        counts = layered_case_counts(build_decrease(WIDE5, 4))
        assert (counts.case1, counts.case2) == (3720, 248)
        assert (counts.case3, counts.case4) == (3840, 3840)
        assert (counts.case5, counts.case6) == (128, 128)
        assert counts.total == 11904

    def test_heavy_exclusivity(self):
        instance = build_decrease(OR2, 1, strict=False)
        game = instance.game
        heavies = sorted(game.weights[h] for h in instance.bands.heavy)
        assert heavies[0] + heavies[1] > game.quota
        light_total = sum(b.max_sum for b in instance.bands.blocks)
        assert light_total < game.quota - 1

    def test_relaxed_layered_equals_mitm(self):
        instance = build_decrease(OR2, 1, strict=False)
        budget = EngineBudget(max_mitm_half=22)
        assert pivot_count_layered(instance.bands) == pivot_count_mitm(
            instance.game, 0, budget
        )

    def test_d_player_residual_decomposes_to_q_prime_plus_x_prime(self):
        from wvgcontrol import count_block, decompose_target

        instance = build_decrease(OR2, 1, strict=False)
        bands = instance.bands
        d0 = instance.group_members("D")[0]
        residual = instance.game.quota - 1 - instance.game.weights[d0]
        targets = dict(
            zip((b.name for b in bands.blocks), decompose_target(bands, residual).targets)
        )
        t = instance.meta["t"]
        q_prime = 10 ** (2 * t + 1) + 10 ** (2 * t + 2) + 2 * 10**t
        assert targets["ABC"] == q_prime
        assert targets["X'"] == bands.block_named("X'").granularity
        assert all(
            value == 0 for name, value in targets.items() if name not in ("ABC", "X'")
        )
        # the ABC share counts exactly the satisfying assignments
        assert count_block(bands.block_named("ABC"), q_prime) == count_sat(OR2)

    def test_strict_mode_enforced(self):
        with pytest.raises(GadgetParameterError, match="strict"):
            build_decrease(OR2, 1)
        with pytest.raises(GadgetParameterError):
            build_decrease(WIDE5, 5, strict=False)  # k < n required


class TestNonincreaseBuilder:
    def test_removed_group_count(self):
        base = build_decrease(WIDE5, 4)
        trimmed = build_nonincrease(WIDE5, 4)
        k, n = 4, 5
        removed = k * k * (k + 2) + k * (k + 2) + 3 * (k + 1)
        assert base.game.num_players - trimmed.game.num_players == removed
        assert trimmed.game.num_players == 183

    def test_closed_form(self):
        trimmed = build_nonincrease(WIDE5, 4)
        counts = layered_case_counts(trimmed)
        # 2k*2^k*xi + k*2^n*(2^(k+1) - 1) with k=4, n=5, xi=31
        assert counts.total == 2 * 4 * 16 * 31 + 4 * 32 * 31
        assert counts.total == 7936
        assert counts.case3 == 0 and counts.case5 == 0

    def test_emptied_groups(self):
        trimmed = build_nonincrease(WIDE5, 4)
        for label in ("S", "U", "Y", "Y*", "Z"):
            assert trimmed.group_members(label) == ()
        assert trimmed.goal is Goal.NONINCREASE
        assert trimmed.meta["kind"] == "nonincrease"


class TestExactify:
    def test_triples_ell(self):
        extended, k, ell = exactify(OR2, 1, 1)
        assert (k, ell) == (1, 3)
        assert extended.num_variables == 4
        assert extended.clauses[-1] == frozenset({3, 4})

    def test_never_a_power_of_two(self):
        for ell in range(1, 200):
            tripled = 3 * ell
            assert tripled & (tripled - 1) != 0

    def test_equivalence_example(self):
        extended, k, tripled = exactify(OR2, 1, 1)
        assert e_exact_sat(OR2, 1, 1)[0] is True
        assert e_exact_sat(extended, k, tripled)[0] is True

    def test_rejects_nonpositive_ell(self):
        with pytest.raises(GadgetParameterError):
            exactify(OR2, 1, 0)


class TestMaintainBuilder:
    def test_case_total_identity(self):
        k, n, ell = 2, 3, 3
        formula = CnfFormula(3, (frozenset({1, 2, 3}),))
        xi = count_sat(formula)
        counts = layered_case_counts(build_maintain(formula, k, ell, strict=False))
        tail = counts.case3 + counts.case4 + counts.case5 + counts.case6
        assert tail == k * ell * ((1 << (n + 2)) + (1 << (k + 1))) * (1 << k)
        assert counts.case5 == k * ((1 << (k + 1)) - 2) * ell
        assert counts.case6 == k * ((1 << (n + 2)) + 2) * ell
        assert counts.case1 == 2 * k * ((1 << k) - 1) * xi

    def test_group_sizes(self):
        k, n, ell = 1, 2, 3
        instance = build_maintain(OR2, k, ell, strict=False)
        delta_total = sum(d + 1 for d in (1, 0))  # ell = 3 -> exponents (1, 0)
        assert len(instance.group_members("S")) == k * k * (k + 2) * delta_total
        assert len(instance.group_members("T")) == k * k * (n + 3) * delta_total
        assert len(instance.group_members("U")) == k * k * delta_total
        assert len(instance.group_members("V")) == k * (n + 5) * delta_total
        assert len(instance.group_members("Y'")) == n + 2
        assert len(instance.group_members("Y**")) == n + 2
        assert len(instance.group_members("Z")) == k
        assert len(instance.group_members("Z'")) == k
        assert len(instance.group_members("L1")) == 1
        assert len(instance.group_members("L2")) == 0

    def test_relaxed_layered_matches_per_heavy_subset_counts(self):
        instance = build_maintain(OR2, 1, 3, strict=False)
        game = instance.game
        light = [w for block in instance.bands.blocks for w in block.weights]
        assert len(light) <= 44
        for heavy in sorted(instance.bands.heavy):
            target = game.quota - 1 - game.weights[heavy]
            assert heavy_pivot_term(instance.bands, heavy) == count_subset_sum(
                light, target
            )

    def test_power_of_two_rejected_in_strict(self):
        with pytest.raises(GadgetParameterError, match="binary"):
            build_maintain(WIDE5, 4, 8)

    def test_power_of_two_allowed_relaxed(self):
        instance = build_maintain(OR2, 1, 2, strict=False)
        xi = count_sat(OR2)
        expected = expected_case_counts(Goal.MAINTAIN, 1, 2, xi, ell=2)
        assert pivot_count_layered(instance.bands) == expected.total

    def test_construction_note_emitted(self):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            build_maintain(OR2, 1, 3, strict=False)
        assert any(issubclass(w.category, GadgetConstructionNote) for w in caught)


class TestExpectedIndex:
    def test_decrease(self):
        assert expected_index(Goal.DECREASE, 4, 5, 31, 318) == ExactIndex(11904, 317)

    def test_nonincrease(self):
        counts = expected_case_counts(Goal.NONINCREASE, 4, 5, 31)
        assert counts.total == 2 * 4 * 16 * 31 + 4 * 32 * 31

    def test_maintain_with_zero_xi(self):
        k, n, ell = 4, 5, 6
        counts = expected_case_counts(Goal.MAINTAIN, k, n, 0, ell=ell)
        assert counts.case1 == counts.case2 == 0
        assert counts.total == k * ell * ((1 << (n + 2)) + (1 << (k + 1))) * (1 << k)

    def test_no_closed_form_for_increase(self):
        with pytest.raises(Exception, match="closed form"):
            expected_case_counts(Goal.INCREASE, 4, 5, 31)


class TestWitnessDeletion:
    def test_all_true_prefix_removes_b_carriers(self):
        instance = build_decrease(CnfFormula(3, (frozenset({1, 2, 3}),)), 2, strict=False)
        deletion = witness_deletion(instance, (1, 1))
        assert deletion == frozenset(
            {instance.b_players[0], instance.b_players[1]}
        )

    def test_all_false_prefix_removes_a_carriers(self):
        instance = build_decrease(CnfFormula(3, (frozenset({1, 2, 3}),)), 2, strict=False)
        deletion = witness_deletion(instance, (0, 0))
        assert deletion == frozenset(
            {instance.a_players[0], instance.a_players[1]}
        )

    def test_minority_witness_strictly_decreases(self):
        formula = CnfFormula(3, (frozenset({1, 2}), frozenset({2, 3})))
        verdict, prefix = e_minority_sat(formula, 1)
        assert verdict
        instance = build_decrease(formula, 1, strict=False)
        before = ExactIndex(
            pivot_count_layered(instance.bands), instance.game.num_players - 1
        )
        variant = instance.delete(witness_deletion(instance, prefix))
        after = ExactIndex(
            pivot_count_layered(variant.bands), variant.game.num_players - 1
        )
        assert after < before

    def test_wrong_prefix_length(self):
        instance = build_decrease(OR2, 1, strict=False)
        with pytest.raises(Exception, match="prefix length"):
            witness_deletion(instance, (0, 1))

    def test_threshold_is_knife_edge(self):
        # n=3, k=1: prefix x1=0 leaves exactly half (2) of the suffixes
        # satisfying, x1=1 leaves half+1 (3).  Half must still strictly
        # decrease the decrease gadget and exactly preserve the trimmed
        # one; half+1 must hit exact equality resp. a strict increase.
        from wvgcontrol.formulas import suffix_satisfying_counts

        formula = CnfFormula(3, (frozenset({1, 2}), frozenset({-1, -2, 3})))
        assert suffix_satisfying_counts(formula, 1) == [2, 3]

        def index_of(instance):
            return ExactIndex(
                pivot_count_layered(instance.bands), instance.game.num_players - 1
            )

        def after(instance, prefix):
            return index_of(instance.delete(witness_deletion(instance, prefix)))

        dec = build_decrease(formula, 1, strict=False)
        non = build_nonincrease(formula, 1, strict=False)
        assert after(dec, (0,)) < index_of(dec)
        assert after(non, (0,)) == index_of(non)
        assert after(dec, (1,)) == index_of(dec)
        assert after(non, (1,)) > index_of(non)


class TestInstanceDeletion:
    def test_delete_all_z_star_drops_cases_5_and_6(self):
        instance = build_decrease(WIDE5, 4)
        variant = instance.delete(instance.group_members("Z*"))
        counts = layered_case_counts(variant)
        assert counts.case5 == 0 and counts.case6 == 0
        assert counts.total == 11904 - (128 + 128) == 11648
        before = ExactIndex(11904, 317)
        after = ExactIndex(counts.total, variant.game.num_players - 1)
        assert after > before  # index rises despite the smaller numerator

    def test_distinguished_protected(self):
        instance = build_decrease(OR2, 1, strict=False)
        with pytest.raises(Exception, match="distinguished"):
            instance.delete({0})

    def test_carrier_tables_remap(self):
        instance = build_decrease(OR2, 1, strict=False)
        victim = instance.a_players[0]
        variant = instance.delete({victim})
        assert variant.a_players[0] is None
        assert variant.b_players[0] is not None
        survivor = variant.b_players[0]
        assert variant.game.weights[survivor] == instance.game.weights[
            instance.b_players[0]
        ]


class TestClosedFormGridAgainstOracles:
    def test_random_grid(self):
        rng = random.Random(77)
        from wvgcontrol.verify import random_formula

        for k, n in ((1, 2), (2, 3)):
            for _ in range(4):
                formula = random_formula(rng, n, rng.randint(1, 3))
                xi = count_sat(formula)
                dec = build_decrease(formula, k, strict=False)
                assert (
                    pivot_count_layered(dec.bands)
                    == expected_case_counts(Goal.DECREASE, k, n, xi).total
                )
                non = build_nonincrease(formula, k, strict=False)
                assert (
                    pivot_count_layered(non.bands)
                    == expected_case_counts(Goal.NONINCREASE, k, n, xi).total
                )
