import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum

import numpy as np

from gid_bribery.core import (
    DISQUALIFY,
    MAX_AGENTS,
    MAX_PRICE,
    QUALIFY,
    BriberyInstance,
    CostKind,
    CostModel,
    Goal,
    GoalKind,
    QualificationProfile,
    SocialRule,
)
from gid_bribery.errors import MalformedInput, ValidationError

logger = logging.getLogger(__name__)

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


# /////////////////////////////////////////////////////////////////////////////
# Seeded 64-bit generator
class SplitMix64:
    """
    SplitMix64, reproducible in any language from the recurrence

        state = state + 0x9E3779B97F4A7C15          (mod 2^64)
        z = state
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9     (mod 2^64)
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB     (mod 2^64)
        output z ^ (z >> 31)

    The k-th output depends only on seed + k * gamma, so batches are
    computed with numpy uint64 arithmetic, which wraps modulo 2^64.
    """

    def __init__(self, seed):
        if not 0 <= seed <= _MASK64:
            raise ValueError(f"Seed must be a 64-bit unsigned value, got {seed}")
        self.state = int(seed)

    def next_many(self, k):
        """The next k raw outputs as a uint64 array."""
        steps = np.arange(1, k + 1, dtype=np.uint64)
        z = np.uint64(self.state) + steps * _GAMMA
        self.state = (self.state + k * int(_GAMMA)) & _MASK64
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        return z ^ (z >> np.uint64(31))

    def next(self):
        return int(self.next_many(1)[0])

    def uniform(self, k):
        """k floats in [0, 1) from the top 53 bits of each output."""
        return (self.next_many(k) >> np.uint64(11)).astype(np.float64) * 2.0**-53

    def integers(self, lo, hi, k):
        """k integers in [lo, hi] by reduction modulo the range width."""
        span = np.uint64(hi - lo + 1)
        return (self.next_many(k) % span).astype(np.int64) + lo

    def below(self, bound):
        return int(self.next_many(1)[0] % np.uint64(bound))

    def shuffled(self, items):
        """Fisher-Yates shuffle drawing j = next() mod (i + 1) for i = len-1 .. 1."""
        items = list(items)
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
        return items


# /////////////////////////////////////////////////////////////////////////////
# Random instances
def generate_random(
    n,
    rule,
    goal_kind=GoalKind.CONSTRUCTIVE,
    plus=1,
    minus=0,
    cost_kind=CostKind.AGENT,
    density=0.5,
    seed=0,
    price_range=(1, 1),
    budget=None,
):
    """
    Seeded random bribery instance.

    Draw order: n*n profile entries row by row (+1 when the uniform draw is
    below density), then the prices (n agent prices or n*n link prices, row
    by row), then one shuffle of the agents whose first `plus` members form
    A+ and next `minus` members form A-.

    Parameters:
    n : int, 1 <= n <= 10^4
    rule : SocialRule
    goal_kind : GoalKind; plus counts for constructive, const+dest and exact
        goals, minus for destructive and const+dest goals
    plus, minus : int, goal set sizes
    cost_kind : CostKind
    density : float in [0, 1]
    seed : 64-bit unsigned int
    price_range : (lo, hi) inclusive price bounds
    budget : int or None

    Returns:
    BriberyInstance
    """
    if not 1 <= n <= MAX_AGENTS:
        raise ValidationError(f"n must lie in [1, {MAX_AGENTS}], got {n}")
    if not 0.0 <= density <= 1.0:
        raise ValidationError(f"density must lie in [0, 1], got {density}")
    lo, hi = price_range
    if not 1 <= lo <= hi <= MAX_PRICE:
        raise ValidationError(f"price range must satisfy 1 <= lo <= hi <= {MAX_PRICE}, got {price_range}")
    if goal_kind not in (GoalKind.CONSTRUCTIVE, GoalKind.CONST_DEST, GoalKind.EXACT):
        plus = 0
    if goal_kind not in (GoalKind.DESTRUCTIVE, GoalKind.CONST_DEST):
        minus = 0
    if plus < 0 or minus < 0 or plus + minus > n:
        raise ValidationError(f"goal sizes {plus} + {minus} do not fit {n} agents")

    rng = SplitMix64(seed)
    entries = np.where(rng.uniform(n * n) < density, QUALIFY, DISQUALIFY).reshape(n, n)
    if cost_kind is CostKind.AGENT:
        cost = CostModel.agent(rng.integers(lo, hi, n).tolist())
    else:
        cost = CostModel.link(rng.integers(lo, hi, n * n).reshape(n, n).tolist())
    order = rng.shuffled(range(1, n + 1))
    aplus, aminus = frozenset(order[:plus]), frozenset(order[plus:plus + minus])

    goal = {
        GoalKind.CONSTRUCTIVE: lambda: Goal.constructive(aplus),
        GoalKind.DESTRUCTIVE: lambda: Goal.destructive(aminus),
        GoalKind.CONST_DEST: lambda: Goal.const_dest(aplus, aminus),
        GoalKind.EXACT: lambda: Goal.exact(aplus),
    }[goal_kind]()
    return BriberyInstance(QualificationProfile(entries), rule, goal, cost, budget)


# /////////////////////////////////////////////////////////////////////////////
# Hardness-reduction inputs
class ReductionKind(Enum):
    SET_COVER = "setcover"
    INDEPENDENT_SET = "independentset"
    DOMINATING_SET = "dominatingset"
    X3C = "x3c"


@dataclass(frozen=True)
class SetSystem:
    """Universe {1..universe} with a list of subsets; k is unused for X3C."""
    universe: int
    sets: tuple
    k: int | None = None


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices {1..vertices}."""
    vertices: int
    edges: tuple
    k: int

    def degree(self, v):
        return sum(1 for e in self.edges if v in e)

    def neighbours(self, v):
        return {u for e in self.edges if v in e for u in e if u != v}


def parse_reduction_input(kind, text):
    """
    Parse a Set Cover, Independent Set, Dominating Set or X3C input.

    Raises:
    MalformedInput with the offending line number
    """
    kind = ReductionKind(kind)
    header = "vertices" if kind in (ReductionKind.INDEPENDENT_SET, ReductionKind.DOMINATING_SET) else "universe"
    item = "edge" if header == "vertices" else "set"
    size = k = None
    items = []
    for number, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        try:
            values = [int(tok) for tok in tokens[1:]]
        except ValueError:
            raise MalformedInput(f"non-integer value in '{raw.strip()}'", number)
        if tokens[0] == header and len(values) == 1:
            size = values[0]
        elif tokens[0] == "k" and len(values) == 1 and kind is not ReductionKind.X3C:
            k = values[0]
        elif tokens[0] == item:
            if size is None:
                raise MalformedInput(f"'{item}' before '{header}'", number)
            if any(not 1 <= v <= size for v in values) or not values:
                raise MalformedInput(f"{item} entries must lie in [1, {size}]", number)
            if item == "edge" and (len(values) != 2 or values[0] == values[1]):
                raise MalformedInput("an edge joins two distinct vertices", number)
            items.append(tuple(values))
        else:
            raise MalformedInput(f"unexpected line '{raw.strip()}'", number)

    if size is None or size < 1:
        raise MalformedInput(f"missing or empty '{header}'")
    if kind is not ReductionKind.X3C and k is None:
        raise MalformedInput("missing 'k'")
    if item == "edge":
        edges = tuple(sorted({tuple(sorted(e)) for e in items}))
        return Graph(size, edges, k)
    return SetSystem(size, tuple(tuple(sorted(set(s))) for s in items), k)


def format_reduction_input(kind, data):
    kind = ReductionKind(kind)
    if isinstance(data, Graph):
        lines = [f"vertices {data.vertices}", f"k {data.k}"]
        lines += [f"edge {u} {w}" for u, w in data.edges]
    else:
        lines = [f"universe {data.universe}"]
        if kind is not ReductionKind.X3C:
            lines.append(f"k {data.k}")
        lines += ["set " + " ".join(str(e) for e in s) for s in data.sets]
    return f"# {kind.value}\n" + "\n".join(lines) + "\n"


def _check_cover(data):
    covered = {e for s in data.sets for e in s}
    if covered != set(range(1, data.universe + 1)):
        raise MalformedInput(f"sets do not cover the universe, missing {sorted(set(range(1, data.universe + 1)) - covered)}")


def _check_x3c(data):
    if data.universe % 3 or len(data.sets) != data.universe:
        raise MalformedInput(f"X3C needs |U| = |S| = 3m, got |U| = {data.universe}, |S| = {len(data.sets)}")
    if any(len(s) != 3 for s in data.sets):
        raise MalformedInput("every X3C set holds exactly three distinct elements")
    counts = Counter(e for s in data.sets for e in s)
    wrong = sorted(e for e in range(1, data.universe + 1) if counts[e] != 3)
    if wrong:
        raise MalformedInput(f"every element must appear in exactly three sets, elements {wrong} do not")


# /////////////////////////////////////////////////////////////////////////////
# Hardness-reduction instance builders
def build_reduction(kind, data, rule=None, extra_agent=False):
    """
    Bribery instance encoding a combinatorial problem.

    - setcover: constructive link bribery, LSR or CSR. Agents are the sets,
      then the elements, then a*. A+ is the elements, budget k.
    - independentset: constructive agent bribery under f(k+2, 1). Agents are
      the vertices, then per edge its edge-agent and its dummy. A+ is all
      edge and dummy agents, budget k. With extra_agent an agent qualifying
      everyone but itself joins A+, with s = k+3 and budget k+1.
    - dominatingset: constructive agent bribery under f(1, d*+1) with d* the
      maximum degree. Agents are the vertices, then d* - d(v) dummies per
      vertex v. A+ is the vertices, budget k.
    - x3c: const+dest link bribery, LSR or CSR. Agents are the sets, then the
      elements, then a*, a', a''. A+ is the elements and a*, A- is
      {a', a''}, budget 4m; meant for deletion-only bribery.

    Parameters:
    kind : ReductionKind or its value
    data : SetSystem or Graph as returned by parse_reduction_input
    rule : SocialRule for setcover and x3c (default LSR)
    extra_agent : bool, independentset variant

    Returns:
    BriberyInstance

    Raises:
    MalformedInput
    """
    kind = ReductionKind(kind)
    rule = rule or SocialRule.lsr()
    if kind in (ReductionKind.SET_COVER, ReductionKind.X3C) and not rule.is_iterative:
        raise ValidationError(f"{kind.value} reductions target LSR or CSR, got {rule}")
    builder = {
        ReductionKind.SET_COVER: lambda: _set_cover(data, rule),
        ReductionKind.INDEPENDENT_SET: lambda: _independent_set(data, extra_agent),
        ReductionKind.DOMINATING_SET: lambda: _dominating_set(data),
        ReductionKind.X3C: lambda: _x3c(data, rule),
    }[kind]
    instance = builder()
    logger.debug("%s reduction: %d agents, budget %s", kind.value, instance.n, instance.budget)
    return instance


def _profile(n, qualifications):
    entries = np.full((n, n), DISQUALIFY, dtype=np.int8)
    for a, b in qualifications:
        entries[a - 1, b - 1] = QUALIFY
    return QualificationProfile(entries)


def _set_cover(data, rule):
    if not isinstance(data, SetSystem) or data.k is None:
        raise MalformedInput("set cover needs a universe, k and sets")
    _check_cover(data)
    m, u = len(data.sets), data.universe
    star = m + u + 1
    pairs = [(star, star)]
    for i, s in enumerate(data.sets, start=1):
        pairs += [(i, m + e) for e in s] + [(i, star)]
    pairs += [(m + e, star) for e in range(1, u + 1)]
    goal = Goal.constructive(m + e for e in range(1, u + 1))
    return BriberyInstance(_profile(star, pairs), rule, goal, CostModel.unit_link(star), data.k)


def _independent_set(data, extra_agent):
    if not isinstance(data, Graph):
        raise MalformedInput("independent set needs a graph")
    v, k = data.vertices, data.k
    if k < 1:
        raise MalformedInput(f"k must be positive, got {k}")
    edge_agent = {e: v + 2 * i + 1 for i, e in enumerate(data.edges)}
    dummy = {e: v + 2 * i + 2 for i, e in enumerate(data.edges)}
    n = v + 2 * len(data.edges) + (1 if extra_agent else 0)
    pairs = []
    for e in data.edges:
        a, d = edge_agent[e], dummy[e]
        pairs += [(d, d), (a, a), (a, d), (e[0], a), (e[1], a)]
    aplus = set(edge_agent.values()) | set(dummy.values())
    s, budget = k + 2, k
    if extra_agent:
        pairs += [(n, b) for b in range(1, n)]
        aplus.add(n)
        s, budget = k + 3, k + 1
    return BriberyInstance(
        _profile(n, pairs), SocialRule.consent(s, 1), Goal.constructive(aplus), CostModel.unit_agent(n), budget
    )


def _dominating_set(data):
    if not isinstance(data, Graph):
        raise MalformedInput("dominating set needs a graph")
    v = data.vertices
    degree = {x: data.degree(x) for x in range(1, v + 1)}
    top = max(degree.values())
    owners = [x for x in range(1, v + 1) for _ in range(top - degree[x])]
    n = v + len(owners)
    pairs = []
    for x in range(1, v + 1):
        blocked = data.neighbours(x) | {x}
        pairs += [(x, b) for b in range(1, n + 1) if b not in blocked]
    for i, x in enumerate(owners, start=v + 1):
        pairs += [(i, b) for b in range(1, n + 1) if b != x]
    return BriberyInstance(
        _profile(n, pairs),
        SocialRule.consent(1, top + 1),
        Goal.constructive(range(1, v + 1)),
        CostModel.unit_agent(n),
        data.k,
    )


def _x3c(data, rule):
    if not isinstance(data, SetSystem):
        raise MalformedInput("X3C needs a universe and sets")
    _check_x3c(data)
    m3 = data.universe
    star, first, second = 2 * m3 + 1, 2 * m3 + 2, 2 * m3 + 3
    n = second
    pairs = [(a, star) for a in range(1, n + 1)]
    pairs += [(star, i) for i in range(1, m3 + 1)]
    for i, s in enumerate(data.sets, start=1):
        pairs += [(i, first), (i, second)] + [(i, m3 + e) for e in s]
    goal = Goal.const_dest({m3 + e for e in range(1, m3 + 1)} | {star}, {first, second})
    return BriberyInstance(_profile(n, pairs), rule, goal, CostModel.unit_link(n), 4 * (m3 // 3))


# /////////////////////////////////////////////////////////////////////////////
# Seeded random reduction inputs for the fidelity suites
def generate_reduction_input(kind, seed, size=None):
    """
    Small random input for a reduction.

    Parameters:
    kind : ReductionKind or its value
    seed : 64-bit unsigned int
    size : optional size hint; universe size (setcover), vertex count
        (graphs) or m (x3c, 1 or 2)

    Returns:
    SetSystem or Graph
    """
    kind = ReductionKind(kind)
    rng = SplitMix64(seed)
    if kind is ReductionKind.SET_COVER:
        u = size or 2 + rng.below(3)
        count = 2 + rng.below(3)
        sets = []
        for _ in range(count):
            chosen = {e for e in range(1, u + 1) if rng.below(2)}
            sets.append(chosen or {1 + rng.below(u)})
        for e in range(1, u + 1):
            if not any(e in s for s in sets):
                sets[rng.below(count)].add(e)
        return SetSystem(u, tuple(tuple(sorted(s)) for s in sets), 1 + rng.below(count))

    if kind in (ReductionKind.INDEPENDENT_SET, ReductionKind.DOMINATING_SET):
        v = size or 2 + rng.below(4)
        edges = tuple((a, b) for a in range(1, v + 1) for b in range(a + 1, v + 1) if rng.below(5) < 2)
        if not edges and kind is ReductionKind.INDEPENDENT_SET:
            edges = ((1, 2),)
        return Graph(v, edges, 1 + rng.below(min(v, 3)))

    m = size or 1 + rng.below(2)
    if m not in (1, 2):
        raise ValidationError(f"X3C inputs are generated for m = 1 or 2, got {m}")
    slots = [e for e in range(1, 3 * m + 1) for _ in range(3)]
    for _ in range(1000):
        order = rng.shuffled(slots)
        sets = [tuple(sorted(order[i:i + 3])) for i in range(0, len(order), 3)]
        if all(len(set(s)) == 3 for s in sets):
            return SetSystem(3 * m, tuple(sets))
    # one partition taken three times is always regular
    universe = rng.shuffled(range(1, 3 * m + 1))
    sets = [tuple(sorted(universe[3 * i:3 * i + 3])) for i in range(m)] * 3
    return SetSystem(3 * m, tuple(sets))
