from itertools import combinations

import pytest

from gid_bribery.consent import solve_consent_agent_const_branch, solve_consent_agent_const_subsetcover
from gid_bribery.core import CostKind, GoalKind, RuleKind, SocialRule
from gid_bribery.errors import MalformedInput, ValidationError
from gid_bribery.generate import (
    Graph,
    ReductionKind,
    SetSystem,
    SplitMix64,
    build_reduction,
    format_reduction_input,
    generate_random,
    generate_reduction_input,
    parse_reduction_input,
)
from gid_bribery.iterative import solve_iter_link_const
from gid_bribery.oracle import oracle_link_deletions
from gid_bribery.rules import evaluate_masks

from conftest import suite_size


def _min_cover(data):
    universe = set(range(1, data.universe + 1))
    for k in range(len(data.sets) + 1):
        if any(set().union(*chosen) == universe for chosen in combinations(data.sets, k)):
            return k
    return None


def _has_independent_set(graph, k):
    return any(
        not any(u in chosen and w in chosen for u, w in graph.edges)
        for chosen in map(set, combinations(range(1, graph.vertices + 1), k))
    )


def _min_dominating_set(graph):
    vertices = range(1, graph.vertices + 1)
    for k in range(graph.vertices + 1):
        for chosen in map(set, combinations(vertices, k)):
            if all(x in chosen or graph.neighbours(x) & chosen for x in vertices):
                return k
    return None


def _qualify_all_within(instance, k):
    """Whether bribing at most k agents to qualify everyone meets the constructive goal."""
    n = instance.n
    rows = list(instance.profile.row_masks())
    inside = sum(1 << (a - 1) for a in instance.goal.aplus)
    for size in range(k + 1):
        for bribed in combinations(range(n), size):
            trial = list(rows)
            for b in bribed:
                trial[b] = (1 << n) - 1
            if evaluate_masks(trial, n, instance.rule) & inside == inside:
                return True
    return False


class TestSplitMix64:
    """The seeded generator."""

    def test_reference_output(self):
        assert SplitMix64(0).next() == 0xE220A8397B1DCDAF

    def test_batches_continue_the_stream(self):
        one_by_one = SplitMix64(42)
        batch = SplitMix64(42).next_many(5).tolist()
        assert [one_by_one.next() for _ in range(5)] == batch

    def test_ranges(self):
        rng = SplitMix64(7)
        values = rng.uniform(200)
        assert ((values >= 0) & (values < 1)).all()
        ints = rng.integers(3, 5, 200)
        assert set(ints.tolist()) <= {3, 4, 5}
        assert sorted(rng.shuffled(range(10))) == list(range(10))

    def test_seed_must_fit_64_bits(self):
        with pytest.raises(ValueError):
            SplitMix64(-1)
        with pytest.raises(ValueError):
            SplitMix64(1 << 64)


class TestGenerateRandom:
    """Seeded random instances."""

    def test_same_seed_same_instance(self):
        first = generate_random(6, SocialRule.csr(), GoalKind.EXACT, plus=2, seed=11, price_range=(1, 9))
        second = generate_random(6, SocialRule.csr(), GoalKind.EXACT, plus=2, seed=11, price_range=(1, 9))
        assert first == second
        assert first != generate_random(6, SocialRule.csr(), GoalKind.EXACT, plus=2, seed=12, price_range=(1, 9))

    @pytest.mark.parametrize("density, row", [(0.0, "0000"), (1.0, "1111")])
    def test_extreme_densities(self, density, row):
        instance = generate_random(4, SocialRule.lsr(), density=density, seed=3)
        assert instance.profile.to_rows() == [row] * 4

    def test_goal_sets_are_disjoint(self):
        instance = generate_random(
            7, SocialRule.consent(2, 2), GoalKind.CONST_DEST, plus=3, minus=2, cost_kind=CostKind.LINK, seed=5
        )
        assert len(instance.goal.aplus) == 3 and len(instance.goal.aminus) == 2
        assert not instance.goal.aplus & instance.goal.aminus
        assert instance.cost.kind is CostKind.LINK and instance.cost.is_unit

    def test_unused_goal_sizes_ignored(self):
        instance = generate_random(3, SocialRule.lsr(), GoalKind.DESTRUCTIVE, plus=3, minus=2, seed=1)
        assert instance.goal.aplus == frozenset() and len(instance.goal.aminus) == 2

    @pytest.mark.parametrize(
        "kwargs",
        [{"density": 1.5}, {"price_range": (0, 3)}, {"plus": 3, "minus": 2, "goal_kind": GoalKind.CONST_DEST}],
    )
    def test_invalid_arguments(self, kwargs):
        with pytest.raises(ValidationError):
            generate_random(4, SocialRule.lsr(), seed=0, **kwargs)


class TestReductionInput:
    """Parsing and generating reduction inputs."""

    def test_set_system(self):
        data = parse_reduction_input("setcover", "# cover\nuniverse 3\nk 2\nset 1 2\nset 3 2 3\n")
        assert data == SetSystem(3, ((1, 2), (2, 3)), 2)
        assert parse_reduction_input(ReductionKind.SET_COVER, format_reduction_input("setcover", data)) == data

    def test_graph_edges_deduplicated(self):
        data = parse_reduction_input("dominatingset", "vertices 3\nk 1\nedge 2 1\nedge 1 2\nedge 3 2\n")
        assert data == Graph(3, ((1, 2), (2, 3)), 1)
        assert data.degree(2) == 2 and data.neighbours(2) == {1, 3}

    @pytest.mark.parametrize(
        "kind, text, line",
        [
            ("setcover", "set 1 2\nuniverse 3\nk 1\n", 1),
            ("setcover", "universe 3\nk 1\nset 1 4\n", 3),
            ("setcover", "universe 2\nk one\n", 2),
            ("independentset", "vertices 3\nk 1\nedge 1 1\n", 3),
            ("x3c", "universe 3\nk 1\n", 2),
            ("setcover", "universe 2\nset 1 2\n", None),
        ],
    )
    def test_malformed(self, kind, text, line):
        with pytest.raises(MalformedInput) as info:
            parse_reduction_input(kind, text)
        assert info.value.line == line

    @pytest.mark.parametrize("kind", list(ReductionKind), ids=lambda k: k.value)
    def test_generated_inputs_are_deterministic_and_valid(self, kind):
        data = generate_reduction_input(kind, seed=9)
        assert data == generate_reduction_input(kind, seed=9)
        rule = SocialRule.lsr() if kind in (ReductionKind.SET_COVER, ReductionKind.X3C) else None
        build_reduction(kind, data, rule)


class TestBuildReduction:
    """Reduction instances encode their source problems."""

    def test_uncovered_universe(self):
        with pytest.raises(MalformedInput):
            build_reduction("setcover", SetSystem(3, ((1, 2),), 1))

    def test_irregular_x3c(self):
        with pytest.raises(MalformedInput):
            build_reduction("x3c", SetSystem(3, ((1, 2, 3), (1, 2, 3), (1, 2))))

    def test_iterative_rule_required(self):
        with pytest.raises(ValidationError):
            build_reduction("setcover", SetSystem(2, ((1, 2),), 1), SocialRule.consent(1, 1))

    def test_set_cover_layout(self):
        instance = build_reduction("setcover", SetSystem(3, ((1, 2), (2, 3), (3,)), 2))
        assert instance.n == 7
        assert instance.goal.aplus == frozenset({4, 5, 6})
        assert instance.budget == 2
        assert instance.cost.kind is CostKind.LINK and instance.cost.is_unit

    def test_extra_agent_variant(self):
        graph = Graph(3, ((1, 2), (2, 3)), 2)
        plain = build_reduction("independentset", graph)
        extra = build_reduction("independentset", graph, extra_agent=True)
        n = extra.n
        assert n == plain.n + 1 == 8
        assert plain.rule == SocialRule.consent(4, 1) and plain.budget == 2
        assert extra.rule == SocialRule.consent(5, 1) and extra.budget == 3
        assert extra.goal.aplus == plain.goal.aplus | {n}
        assert set(extra.profile.qualified_targets(n)) == set(range(1, n))

    def test_dominating_set_padding(self):
        # a path 1-2-3 has maximum degree 2, so the two leaves get one dummy each
        instance = build_reduction("dominatingset", Graph(3, ((1, 2), (2, 3)), 1))
        assert instance.n == 5
        assert instance.rule.kind is RuleKind.CONSENT and (instance.rule.s, instance.rule.t) == (1, 3)

    @pytest.mark.parametrize("rule", [SocialRule.lsr(), SocialRule.csr()], ids=str)
    @pytest.mark.parametrize("seed", range(suite_size(10)))
    def test_set_cover_cost_is_the_smallest_cover(self, rule, seed):
        data = generate_reduction_input("setcover", seed)
        instance = build_reduction("setcover", data, rule)
        assert solve_iter_link_const(instance).cost == _min_cover(data)

    @pytest.mark.parametrize("seed", range(suite_size(10)))
    def test_independent_set(self, seed):
        graph = generate_reduction_input("independentset", seed)
        instance = build_reduction("independentset", graph)
        exists = _has_independent_set(graph, graph.k)
        assert _qualify_all_within(instance, instance.budget) == exists
        result = solve_consent_agent_const_branch(instance)
        assert (result.cost <= instance.budget) == exists

    @pytest.mark.parametrize("seed", range(suite_size(10)))
    def test_dominating_set(self, seed):
        graph = generate_reduction_input("dominatingset", seed)
        instance = build_reduction("dominatingset", graph)
        smallest = _min_dominating_set(graph)
        assert _qualify_all_within(instance, instance.budget) == (smallest <= graph.k)
        assert solve_consent_agent_const_branch(instance).cost == smallest
        assert solve_consent_agent_const_subsetcover(instance).cost == smallest

    @pytest.mark.parametrize("rule", [SocialRule.lsr(), SocialRule.csr()], ids=str)
    @pytest.mark.parametrize("seed", range(suite_size(6)))
    def test_x3c_deletion_cost(self, rule, seed):
        data = generate_reduction_input("x3c", seed)
        instance = build_reduction("x3c", data, rule)
        m = data.universe // 3
        cost, _ = oracle_link_deletions(instance)
        # kept sets cost two deletions each, dropped sets one
        assert cost == 3 * m + _min_cover(data)
        assert (cost <= instance.budget) == (_min_cover(data) == m)
