import os

import pytest

from gid_bribery.core import (
    BriberyInstance,
    CheckResult,
    CostModel,
    Goal,
    QualificationProfile,
    SocialRule,
    Status,
    check_solution,
)

# The 5-agent worked example: row i lists whom a_i qualifies.
EXAMPLE_ROWS = ["11000", "10000", "11000", "10010", "11110"]

EXACT_LINK_ROWS = ["1100", "0000", "0001", "0000"]
EXACT_LINK_PRICES = [[1, 1, 6, 3], [9, 9, 7, 4], [9, 9, 5, 1], [9, 9, 2, 6]]

CONST_LINK_ROWS = ["100", "100", "110"]
CONST_LINK_PRICES = [[1, 5, 5], [1, 3, 1], [1, 1, 4]]


def suite_size(default):
    """Number of random cases per parametrised suite, scaled by GID_SUITE_SIZE."""
    value = os.getenv("GID_SUITE_SIZE")
    return int(value) if value else default


def make_instance(rows, rule, goal, cost="agent", prices=None, budget=None):
    profile = QualificationProfile.from_rows(rows)
    n = profile.n
    if cost == "agent":
        model = CostModel.agent(prices) if prices else CostModel.unit_agent(n)
    else:
        model = CostModel.link(prices) if prices else CostModel.unit_link(n)
    return BriberyInstance(profile, rule, goal, model, budget)


def assert_sound(instance, result):
    """An OPTIMAL result carries a witness that passes check_solution."""
    assert result.status is Status.OPTIMAL
    assert check_solution(instance, result.witness) is CheckResult.OK
    return result.cost


@pytest.fixture
def example_profile():
    return QualificationProfile.from_rows(EXAMPLE_ROWS)


@pytest.fixture
def exact_link_case():
    n = len(EXACT_LINK_ROWS)
    return make_instance(
        EXACT_LINK_ROWS, SocialRule.lsr(), Goal.exact(range(1, n + 1)), "link", EXACT_LINK_PRICES
    )


@pytest.fixture
def const_link_case():
    n = len(CONST_LINK_ROWS)
    return make_instance(
        CONST_LINK_ROWS, SocialRule.lsr(), Goal.constructive(range(1, n + 1)), "link", CONST_LINK_PRICES
    )
