import pytest

from gid_bribery.core import CostKind, Goal, GoalKind, SocialRule, Status
from gid_bribery.dispatch import dispatch
from gid_bribery.errors import InvalidRuleParameters, ParseError, ValidationError
from gid_bribery.fileio import parse_instance, parse_solution, render_solution, serialize_instance

from conftest import EXAMPLE_ROWS, EXACT_LINK_PRICES, EXACT_LINK_ROWS, make_instance

EXAMPLE_FILE = """\
# five-agent example
agents 5
rule consent 3 3
cost agent
goal constructive 1 4
profile
11000
10000
11000
10010
11110
"""


class TestParseInstance:
    """Reading instance files."""

    def test_example_file(self):
        instance = parse_instance(EXAMPLE_FILE)
        assert instance.n == 5
        assert instance.rule == SocialRule.consent(3, 3)
        assert instance.goal == Goal.constructive({4})
        assert instance.cost.kind is CostKind.AGENT and instance.cost.is_unit
        assert instance.profile.to_rows() == EXAMPLE_ROWS
        assert instance.budget is None

    def test_const_dest_goal_and_prices(self):
        text = "agents 2\nrule lsr\ncost agent\ngoal constructive 1 2\ngoal destructive 1 1\nbudget 4\nprofile\n1 0\n01\nagentprices 3 5\n"
        instance = parse_instance(text)
        assert instance.goal == Goal.const_dest({2}, {1})
        assert instance.cost.prices == (3, 5)
        assert instance.budget == 4

    def test_missing_goal_means_empty_constructive(self):
        instance = parse_instance("agents 1\nrule csr\ncost link\nprofile\n1\n")
        assert instance.goal.kind is GoalKind.CONSTRUCTIVE
        assert instance.goal.aplus == frozenset()

    @pytest.mark.parametrize(
        "text, line",
        [
            ("agents 2\nrule lsr\ncost agent\nprofile\n10\n2x\n", 6),
            ("agents 2\nrule majority\n", 2),
            ("agents 2\nrule lsr\ncost bribe\n", 3),
            ("agents 2\nrule lsr\ncost agent\ngoal constructive 2 1\n", 4),
            ("agents 2\nrule lsr\ncost agent\ngoal constructive 2 1 1\n", 4),
            ("agents 2\n\n# note\nrule lsr\ncost link\nprofile\n10\n01\nlinkprices\n1 1\n1\n", 11),
            ("agents 2\nrule lsr\ncolour blue\n", 3),
            ("agents 2\nrule lsr\ncost agent\n", 3),
        ],
    )
    def test_parse_errors_carry_line_numbers(self, text, line):
        with pytest.raises(ParseError) as info:
            parse_instance(text)
        assert info.value.line == line
        assert str(info.value).startswith(f"line {line}:")

    def test_exact_goal_stands_alone(self):
        text = "agents 2\nrule lsr\ncost agent\ngoal exact 1 1\ngoal constructive 1 2\nprofile\n10\n01\n"
        with pytest.raises(ValidationError):
            parse_instance(text)

    def test_prices_must_match_the_cost_model(self):
        text = "agents 2\nrule lsr\ncost link\nprofile\n10\n01\nagentprices 1 1\n"
        with pytest.raises(ValidationError):
            parse_instance(text)

    def test_rule_checked_against_agent_count(self):
        with pytest.raises(InvalidRuleParameters):
            parse_instance("agents 2\nrule consent 3 3\ncost agent\nprofile\n10\n01\n")


class TestSerializeInstance:
    """Writing instance files."""

    @pytest.mark.parametrize(
        "goal",
        [Goal.constructive({1, 3}), Goal.destructive({2}), Goal.const_dest({4}, {1}), Goal.exact({1, 4})],
        ids=lambda g: g.kind.value,
    )
    def test_goal_kind_survives(self, goal):
        instance = make_instance(EXAMPLE_ROWS, SocialRule.consent(2, 4), goal, budget=3)
        assert parse_instance(serialize_instance(instance)) == instance

    def test_link_prices_and_comment(self):
        instance = make_instance(
            EXACT_LINK_ROWS, SocialRule.lsr(), Goal.exact(range(1, 5)), "link", EXACT_LINK_PRICES
        )
        text = serialize_instance(instance, comment="exact goal\nfour agents")
        assert text.startswith("# exact goal\n# four agents\nagents 4\n")
        assert "linkprices\n1 1 6 3\n" in text
        assert parse_instance(text) == instance

    def test_unit_prices_left_implicit(self):
        instance = make_instance(EXAMPLE_ROWS, SocialRule.lsr(), Goal.constructive({3}), "link")
        assert "prices" not in serialize_instance(instance)


class TestSolutionReport:
    """Rendering and reading solution reports."""

    def test_optimal_report(self):
        instance = make_instance(EXAMPLE_ROWS, SocialRule.lsr(), Goal.const_dest({5}, {3}), "link")
        result = dispatch(instance)
        text = render_solution(result)
        lines = text.splitlines()
        assert lines[:3] == ["status OPTIMAL", "cost 2", "flips 2"]
        assert lines[-1] == "qualified 4 1 2 4 5"
        assert parse_solution(text) == (Status.OPTIMAL, 2, result.witness)

    def test_status_only_reports(self):
        instance = make_instance(["10", "01"], SocialRule.consent(3, 1), Goal.constructive({1}))
        result = dispatch(instance)
        assert render_solution(result) == "status INFEASIBLE\n"
        assert parse_solution("status UNSUPPORTED\n") == (Status.UNSUPPORTED, None, None)

    @pytest.mark.parametrize(
        "text, line",
        [
            ("", 1),
            ("status DONE\n", 1),
            ("status OPTIMAL\ncost 1\n", 2),
            ("status OPTIMAL\ncost 1\nflips 1\n1 2 x\n", 4),
            ("status OPTIMAL\ncost 2\nflips 3\n1 2 +\n2 2 -\n", 5),
        ],
    )
    def test_malformed_reports(self, text, line):
        with pytest.raises(ParseError) as info:
            parse_solution(text)
        assert info.value.line == line
