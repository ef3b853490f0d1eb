import pytest

from gid_bribery.core import (
    DISQUALIFY,
    QUALIFY,
    BriberyInstance,
    CheckResult,
    CostModel,
    Flip,
    FlipSet,
    Goal,
    GoalKind,
    QualificationProfile,
    SocialRule,
    Status,
    apply_flips,
    check_solution,
    cost_of,
    finalize,
    flips_to_reach,
    negate_profile,
    qualifier_counts,
    rewrite_rows,
)
from gid_bribery.errors import FlipNotAChange, InvalidRuleParameters, SolverError, ValidationError

from conftest import EXAMPLE_ROWS, make_instance


class TestQualificationProfile:
    """Construction, validation and accessors of the opinion matrix."""

    def test_rows_round_trip(self, example_profile):
        assert example_profile.to_rows() == EXAMPLE_ROWS
        assert example_profile.n == 5

    def test_accessors_are_one_based(self, example_profile):
        assert example_profile.qualifies(5, 3)
        assert not example_profile.qualifies(3, 5)
        assert example_profile.value(2, 2) == DISQUALIFY
        assert example_profile.qualifiers(4) == {4, 5}
        assert example_profile.disqualifiers(1) == frozenset()
        assert example_profile.qualified_targets(5) == [1, 2, 3, 4]

    def test_self_qualifiers_and_qualified_by_all(self, example_profile):
        assert example_profile.self_qualifiers() == {1, 4}
        assert example_profile.qualified_by_all() == {1}

    def test_row_masks(self, example_profile):
        # bit j-1 is set when the agent qualifies a_j
        assert example_profile.row_masks() == (0b00011, 0b00001, 0b00011, 0b01001, 0b01111)

    def test_qualifier_counts(self, example_profile):
        assert qualifier_counts(example_profile, 1) == (5, 0)
        assert qualifier_counts(example_profile, 5) == (0, 5)
        with pytest.raises(ValidationError):
            qualifier_counts(example_profile, 6)

    @pytest.mark.parametrize(
        "entries",
        [
            [],
            [[1, 1]],
            [[1, 0], [1, 1]],
            [[1, 1, 1], [1, 1, 1]],
        ],
    )
    def test_rejects_malformed_matrices(self, entries):
        with pytest.raises(ValidationError):
            QualificationProfile(entries)

    def test_is_immutable_and_hashable(self, example_profile):
        with pytest.raises(ValueError):
            example_profile.entries[0, 0] = DISQUALIFY
        same = QualificationProfile.from_rows(EXAMPLE_ROWS)
        assert same == example_profile
        assert hash(same) == hash(example_profile)

    def test_negation_flips_every_entry(self, example_profile):
        negated = negate_profile(example_profile)
        assert negated.to_rows() == ["00111", "01111", "00111", "01101", "00001"]
        assert negate_profile(negated) == example_profile


class TestSocialRule:
    """Consent parameter checks and the dual rule."""

    def test_consent_parameters(self):
        assert str(SocialRule.consent(2, 3)) == "consent(2,3)"
        with pytest.raises(InvalidRuleParameters):
            SocialRule.consent(0, 1)
        with pytest.raises(InvalidRuleParameters):
            SocialRule.consent(1, 0)

    def test_iterative_rules_take_no_parameters(self):
        with pytest.raises(InvalidRuleParameters):
            SocialRule(SocialRule.lsr().kind, 1, 1)
        assert SocialRule.lsr().is_iterative
        assert not SocialRule.consent(1, 1).is_iterative

    def test_validate_for_n(self):
        SocialRule.consent(3, 4).validate_for(5)
        with pytest.raises(InvalidRuleParameters):
            SocialRule.consent(4, 4).validate_for(5)

    def test_dual_swaps_parameters(self):
        assert SocialRule.consent(2, 5).dual() == SocialRule.consent(5, 2)
        with pytest.raises(InvalidRuleParameters):
            SocialRule.csr().dual()


class TestGoal:
    """Goal kinds, normalization and satisfaction."""

    def test_overlap_rejected(self):
        with pytest.raises(ValidationError):
            Goal.const_dest({1, 2}, {2, 3})

    def test_wrong_sets_for_kind(self):
        with pytest.raises(ValidationError):
            Goal(GoalKind.CONSTRUCTIVE, {1}, {2})
        with pytest.raises(ValidationError):
            Goal(GoalKind.DESTRUCTIVE, {1}, {2})

    def test_exact_normalizes_to_const_dest(self):
        goal = Goal.exact({1, 3})
        assert goal.required_out(4) == {2, 4}
        normalized = goal.normalized(4)
        assert normalized.kind is GoalKind.CONST_DEST
        assert normalized.aplus == {1, 3} and normalized.aminus == {2, 4}

    def test_is_satisfied(self):
        assert Goal.constructive({1, 2}).is_satisfied({1, 2, 4}, 5)
        assert not Goal.constructive({3}).is_satisfied({1, 2, 4}, 5)
        assert Goal.destructive({3, 5}).is_satisfied({1, 2, 4}, 5)
        assert not Goal.exact({1, 2}).is_satisfied({1, 2, 4}, 5)
        assert Goal.constructive(set()).is_satisfied(set(), 5)

    def test_goal_agents_checked_against_n(self, example_profile):
        with pytest.raises(ValidationError):
            BriberyInstance(example_profile, SocialRule.lsr(), Goal.constructive({6}), CostModel.unit_agent(5))


class TestCostModel:
    """Price validation and the unit models."""

    def test_price_bounds(self):
        with pytest.raises(ValidationError):
            CostModel.agent([1, 0, 2])
        with pytest.raises(ValidationError):
            CostModel.agent([10**6 + 1])
        with pytest.raises(ValidationError):
            CostModel.link([[1, 1], [1]])

    def test_unit_models(self):
        assert CostModel.unit_agent(3).is_unit
        assert CostModel.unit_link(3).total() == 9
        assert not CostModel.agent([1, 2]).is_unit

    def test_instance_checks_cost_size(self, example_profile):
        with pytest.raises(ValidationError):
            BriberyInstance(example_profile, SocialRule.lsr(), Goal.constructive({1}), CostModel.unit_agent(4))
        with pytest.raises(ValidationError):
            BriberyInstance(
                example_profile, SocialRule.lsr(), Goal.constructive({1}), CostModel.unit_agent(5), budget=-1
            )


class TestFlips:
    """Flip sets, their application and their price."""

    def test_duplicate_pair_rejected(self):
        with pytest.raises(ValidationError):
            FlipSet.of([Flip(1, 2, QUALIFY), Flip(1, 2, DISQUALIFY)])

    def test_apply_changes_exactly_the_flipped_entries(self, example_profile):
        flips = FlipSet.of([Flip(2, 2, QUALIFY), Flip(1, 1, DISQUALIFY)])
        after = apply_flips(example_profile, flips)
        assert after.to_rows() == ["01000", "11000", "11000", "10010", "11110"]
        assert apply_flips(after, flips.inverse()) == example_profile

    def test_noop_flip_raises(self, example_profile):
        with pytest.raises(FlipNotAChange):
            apply_flips(example_profile, FlipSet.of([Flip(1, 1, QUALIFY)]))

    def test_out_of_range_flip_raises(self, example_profile):
        with pytest.raises(ValidationError):
            apply_flips(example_profile, FlipSet.of([Flip(6, 1, QUALIFY)]))

    def test_flips_to_reach_skips_held_values(self, example_profile):
        flips = flips_to_reach(example_profile, {(1, 1): QUALIFY, (1, 3): QUALIFY})
        assert flips.sorted() == [Flip(1, 3, QUALIFY)]

    def test_rewrite_rows(self, example_profile):
        flips = rewrite_rows(example_profile, {5: {5}})
        after = apply_flips(example_profile, flips)
        assert after.to_rows()[4] == "00001"
        assert flips.bribers() == {5}

    def test_cost_of_agent_and_link(self):
        flips = FlipSet.of([Flip(1, 2, QUALIFY), Flip(1, 3, QUALIFY), Flip(2, 1, DISQUALIFY)])
        assert cost_of(flips, CostModel.agent([4, 7, 1])) == 11
        assert cost_of(flips, CostModel.link([[1, 2, 3], [4, 5, 6], [7, 8, 9]])) == 9


class TestCheckAndFinalize:
    """Solution checking and turning witnesses into results."""

    def test_check_goal_before_budget(self):
        instance = make_instance(EXAMPLE_ROWS, SocialRule.lsr(), Goal.constructive({3}), budget=0)
        flips = FlipSet.of([Flip(1, 3, QUALIFY)])
        assert check_solution(instance, flips) is CheckResult.BUDGET_EXCEEDED
        assert check_solution(instance, FlipSet()) is CheckResult.GOAL_VIOLATED

    def test_check_ok(self):
        instance = make_instance(EXAMPLE_ROWS, SocialRule.lsr(), Goal.constructive({3}), budget=1)
        assert check_solution(instance, FlipSet.of([Flip(1, 3, QUALIFY)])) is CheckResult.OK

    def test_finalize_reports_budget_overrun(self):
        instance = make_instance(EXAMPLE_ROWS, SocialRule.lsr(), Goal.constructive({3}), budget=0)
        result = finalize(instance, FlipSet.of([Flip(1, 3, QUALIFY)]))
        assert result.status is Status.BUDGET_EXCEEDED
        assert result.cost == 1
        assert result.qualified == {1, 2, 3, 4}

    def test_finalize_rejects_bad_witness(self):
        instance = make_instance(EXAMPLE_ROWS, SocialRule.lsr(), Goal.constructive({3}))
        with pytest.raises(SolverError):
            finalize(instance, FlipSet(), "broken")
