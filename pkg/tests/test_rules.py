import numpy as np
import pytest

from gid_bribery.core import QUALIFY, QualificationProfile, SocialRule, negate_profile
from gid_bribery.errors import InvalidRuleParameters
from gid_bribery.generate import generate_random
from gid_bribery.rules import (
    closure_rounds,
    evaluate,
    evaluate_masks,
    initial_set,
    iterative_closure,
    mask_to_agents,
    matrix_closure,
)

from conftest import suite_size


def _random_profiles(count, n, density=0.5):
    for seed in range(count):
        yield generate_random(n, SocialRule.lsr(), density=density, seed=seed).profile


class TestEvaluate:
    """Qualified sets of the worked five-agent example."""

    def test_liberal_start_respecting(self, example_profile):
        assert evaluate(example_profile, SocialRule.lsr()) == {1, 2, 4}

    def test_consensus_start_respecting(self, example_profile):
        assert evaluate(example_profile, SocialRule.csr()) == {1, 2}

    def test_consent(self, example_profile):
        assert evaluate(example_profile, SocialRule.consent(3, 3)) == {1, 2}

    def test_consent_checks_parameters_against_n(self, example_profile):
        with pytest.raises(InvalidRuleParameters):
            evaluate(example_profile, SocialRule.consent(5, 3))

    def test_single_agent(self):
        alone = QualificationProfile.from_rows(["1"])
        assert evaluate(alone, SocialRule.lsr()) == {1}
        assert evaluate(alone, SocialRule.consent(2, 1)) == frozenset()
        lonely = QualificationProfile.from_rows(["0"])
        assert evaluate(lonely, SocialRule.csr()) == frozenset()
        assert evaluate(lonely, SocialRule.consent(1, 2)) == {1}


class TestClosure:
    """Iterative closure and its round-by-round form."""

    def test_initial_sets(self, example_profile):
        assert initial_set(example_profile, SocialRule.lsr()) == {1, 4}
        assert initial_set(example_profile, SocialRule.csr()) == {1}
        with pytest.raises(ValueError):
            initial_set(example_profile, SocialRule.consent(1, 1))

    def test_rounds_end_at_the_closure(self, example_profile):
        rounds = closure_rounds(example_profile, {1, 4})
        assert rounds == [frozenset({1, 4}), frozenset({1, 2, 4})]
        assert rounds[-1] == iterative_closure(example_profile, {1, 4})

    def test_closure_of_nothing_is_empty(self, example_profile):
        assert iterative_closure(example_profile, ()) == frozenset()

    @pytest.mark.parametrize("seed", range(suite_size(10)))
    def test_matrix_closure_agrees(self, seed):
        profile = generate_random(8, SocialRule.lsr(), density=0.2, seed=seed).profile
        qualifies = profile.entries == QUALIFY
        reached = matrix_closure(qualifies, qualifies.diagonal())
        expected = iterative_closure(profile, profile.self_qualifiers())
        assert {int(i) + 1 for i in np.flatnonzero(reached)} == expected

    @pytest.mark.parametrize("seed", range(suite_size(20)))
    def test_rounds_grow_monotonically(self, seed):
        profile = generate_random(7, SocialRule.lsr(), density=0.25, seed=seed).profile
        rounds = closure_rounds(profile, profile.self_qualifiers())
        for earlier, later in zip(rounds, rounds[1:]):
            assert earlier < later


class TestMaskEvaluation:
    """The bitmask evaluator matches the matrix evaluator."""

    @pytest.mark.parametrize(
        "rule",
        [SocialRule.lsr(), SocialRule.csr(), SocialRule.consent(1, 1), SocialRule.consent(2, 3), SocialRule.consent(4, 2)],
        ids=str,
    )
    def test_agrees_with_evaluate(self, rule):
        for profile in _random_profiles(suite_size(30), 6):
            masks = evaluate_masks(profile.row_masks(), profile.n, rule)
            assert mask_to_agents(masks) == evaluate(profile, rule)

    def test_mask_to_agents(self):
        assert mask_to_agents(0b10110) == {2, 3, 5}
        assert mask_to_agents(0) == frozenset()


class TestConsentDuality:
    """Disqualified under f(s,t) on a profile is qualified under f(t,s) on its negation."""

    @pytest.mark.parametrize("n", [3, 5])
    def test_duality(self, n):
        for profile in _random_profiles(suite_size(15), n):
            everyone = frozenset(profile.agents)
            for s in range(1, n + 2):
                for t in range(1, n + 3 - s):
                    rule = SocialRule.consent(s, t)
                    outside = everyone - evaluate(profile, rule)
                    assert outside == evaluate(negate_profile(profile), rule.dual())
