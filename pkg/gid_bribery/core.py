import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import NamedTuple

import numpy as np

from gid_bribery.errors import FlipNotAChange, InvalidRuleParameters, SolverError, ValidationError

logger = logging.getLogger(__name__)

QUALIFY = 1
DISQUALIFY = -1
MAX_PRICE = 10**6
MAX_AGENTS = 10**4

# Agents are 1-based everywhere outside this module's array indexing.
AgentId = int


# /////////////////////////////////////////////////////////////////////////////
# Qualification profile: the n x n matrix of pairwise opinions
class QualificationProfile:
    """
    Immutable n x n matrix with entries in {+1, -1}.

    Entry (i, j) is phi(a_i, a_j): +1 when agent i qualifies agent j. Rows
    are the opinions an agent holds, columns the opinions held about an
    agent. All public accessors take 1-based agent ids.
    """

    __slots__ = ("_entries", "_masks")

    def __init__(self, entries):
        arr = np.array(entries, dtype=np.int8)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise ValidationError(f"Profile must be a non-empty square matrix, got shape {arr.shape}")
        if arr.shape[0] > MAX_AGENTS:
            raise ValidationError(f"Profile has {arr.shape[0]} agents, the cap is {MAX_AGENTS}")
        if not np.isin(arr, (QUALIFY, DISQUALIFY)).all():
            raise ValidationError("Profile entries must be exactly +1 or -1")
        arr.setflags(write=False)
        self._entries = arr
        self._masks = None

    @classmethod
    def full(cls, n, value=DISQUALIFY):
        return cls(np.full((n, n), value, dtype=np.int8))

    @classmethod
    def from_rows(cls, rows):
        """Build a profile from strings of '1' (qualify) and '0' (disqualify)."""
        return cls([[QUALIFY if ch == "1" else DISQUALIFY for ch in row] for row in rows])

    def to_rows(self):
        return ["".join("1" if v == QUALIFY else "0" for v in row) for row in self._entries]

    @property
    def n(self):
        return self._entries.shape[0]

    @property
    def entries(self):
        return self._entries

    @property
    def agents(self):
        return range(1, self.n + 1)

    def check_agent(self, a):
        if not 1 <= a <= self.n:
            raise ValidationError(f"Agent index {a} outside [1, {self.n}]")

    def value(self, briber, target):
        return int(self._entries[briber - 1, target - 1])

    def qualifies(self, briber, target):
        return self._entries[briber - 1, target - 1] == QUALIFY

    def self_qualifies(self, a):
        return self.qualifies(a, a)

    def qualifiers(self, a):
        """Q+(a): agents qualifying a."""
        return frozenset(int(i) + 1 for i in np.flatnonzero(self._entries[:, a - 1] == QUALIFY))

    def disqualifiers(self, a):
        """Q-(a): agents disqualifying a."""
        return frozenset(int(i) + 1 for i in np.flatnonzero(self._entries[:, a - 1] == DISQUALIFY))

    def qualified_targets(self, a):
        """Agents that a qualifies (out-neighbours in the qualification graph)."""
        return [int(j) + 1 for j in np.flatnonzero(self._entries[a - 1] == QUALIFY)]

    def qualified_by_all(self):
        """A*: agents qualified by everyone including themselves."""
        return frozenset(int(j) + 1 for j in np.flatnonzero((self._entries == QUALIFY).all(axis=0)))

    def self_qualifiers(self):
        return frozenset(int(i) + 1 for i in np.flatnonzero(np.diagonal(self._entries) == QUALIFY))

    def row_masks(self):
        """Rows as integer bitmasks, bit j-1 set when the agent qualifies a_j."""
        if self._masks is None:
            self._masks = tuple(
                sum(1 << int(j) for j in np.flatnonzero(row == QUALIFY)) for row in self._entries
            )
        return self._masks

    def with_changes(self, changes):
        """Return a copy with {(briber, target): value} written in."""
        arr = self._entries.copy()
        for (briber, target), value in changes.items():
            arr[briber - 1, target - 1] = value
        return QualificationProfile(arr)

    def __eq__(self, other):
        if not isinstance(other, QualificationProfile):
            return NotImplemented
        return np.array_equal(self._entries, other._entries)

    def __hash__(self):
        return hash(self._entries.tobytes())

    def __repr__(self):
        return f"QualificationProfile(n={self.n}, rows={self.to_rows()})"


# /////////////////////////////////////////////////////////////////////////////
# Social rules
class RuleKind(Enum):
    LSR = "lsr"
    CSR = "csr"
    CONSENT = "consent"


@dataclass(frozen=True)
class SocialRule:
    kind: RuleKind
    s: int | None = None
    t: int | None = None

    def __post_init__(self):
        if self.kind is RuleKind.CONSENT:
            if self.s is None or self.t is None or self.s < 1 or self.t < 1:
                raise InvalidRuleParameters(f"Consent rule needs s >= 1 and t >= 1, got s={self.s}, t={self.t}")
        elif self.s is not None or self.t is not None:
            raise InvalidRuleParameters(f"{self.kind.value} takes no parameters")

    @classmethod
    def lsr(cls):
        return cls(RuleKind.LSR)

    @classmethod
    def csr(cls):
        return cls(RuleKind.CSR)

    @classmethod
    def consent(cls, s, t):
        return cls(RuleKind.CONSENT, s, t)

    @property
    def is_iterative(self):
        return self.kind is not RuleKind.CONSENT

    def validate_for(self, n):
        if self.kind is RuleKind.CONSENT and self.s + self.t > n + 2:
            raise InvalidRuleParameters(f"Consent rule needs s + t <= n + 2, got s={self.s}, t={self.t}, n={n}")

    def dual(self):
        """The consent rule with s and t swapped."""
        if self.kind is not RuleKind.CONSENT:
            raise InvalidRuleParameters("Only consent rules have a dual")
        return SocialRule.consent(self.t, self.s)

    def __str__(self):
        if self.kind is RuleKind.CONSENT:
            return f"consent({self.s},{self.t})"
        return self.kind.value


# /////////////////////////////////////////////////////////////////////////////
# Bribery goals
class GoalKind(Enum):
    CONSTRUCTIVE = "constructive"
    DESTRUCTIVE = "destructive"
    CONST_DEST = "const+dest"
    EXACT = "exact"


@dataclass(frozen=True)
class Goal:
    kind: GoalKind
    aplus: frozenset = field(default_factory=frozenset)
    aminus: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "aplus", frozenset(self.aplus))
        object.__setattr__(self, "aminus", frozenset(self.aminus))
        if self.aplus & self.aminus:
            raise ValidationError(f"A+ and A- overlap in {sorted(self.aplus & self.aminus)}")
        if self.kind in (GoalKind.CONSTRUCTIVE, GoalKind.EXACT) and self.aminus:
            raise ValidationError(f"{self.kind.value} goal takes no A- set")
        if self.kind is GoalKind.DESTRUCTIVE and self.aplus:
            raise ValidationError("destructive goal takes no A+ set")

    @classmethod
    def constructive(cls, aplus):
        return cls(GoalKind.CONSTRUCTIVE, aplus)

    @classmethod
    def destructive(cls, aminus):
        return cls(GoalKind.DESTRUCTIVE, frozenset(), aminus)

    @classmethod
    def const_dest(cls, aplus, aminus):
        return cls(GoalKind.CONST_DEST, aplus, aminus)

    @classmethod
    def exact(cls, aplus):
        return cls(GoalKind.EXACT, aplus)

    def required_out(self, n):
        """Agents that must end up socially disqualified."""
        if self.kind is GoalKind.EXACT:
            return frozenset(range(1, n + 1)) - self.aplus
        return self.aminus

    def normalized(self, n):
        """Exact goals become Const+Dest with A- = A minus A+; others are returned as is."""
        if self.kind is GoalKind.EXACT:
            return Goal.const_dest(self.aplus, self.required_out(n))
        return self

    def is_satisfied(self, qualified, n):
        qualified = frozenset(qualified)
        return self.aplus <= qualified and not (self.required_out(n) & qualified)

    def validate_for(self, n):
        for a in self.aplus | self.aminus:
            if not 1 <= a <= n:
                raise ValidationError(f"Goal agent {a} outside [1, {n}]")


# /////////////////////////////////////////////////////////////////////////////
# Cost models
class CostKind(Enum):
    AGENT = "agent"
    LINK = "link"


@dataclass(frozen=True)
class CostModel:
    """
    Prices of bribery actions.

    AGENT models hold one price per agent (tuple of n ints); LINK models hold
    one price per ordered pair (tuple of n tuples, row = briber).
    """
    kind: CostKind
    prices: tuple

    def __post_init__(self):
        if self.kind is CostKind.AGENT:
            prices = tuple(int(p) for p in self.prices)
            flat = prices
        else:
            prices = tuple(tuple(int(p) for p in row) for row in self.prices)
            if any(len(row) != len(prices) for row in prices):
                raise ValidationError("Link prices must form a square matrix")
            flat = [p for row in prices for p in row]
        for p in flat:
            if not 1 <= p <= MAX_PRICE:
                raise ValidationError(f"Prices must lie in [1, {MAX_PRICE}], got {p}")
        object.__setattr__(self, "prices", prices)

    @classmethod
    def agent(cls, prices):
        return cls(CostKind.AGENT, prices)

    @classmethod
    def link(cls, prices):
        return cls(CostKind.LINK, prices)

    @classmethod
    def unit_agent(cls, n):
        return cls(CostKind.AGENT, (1,) * n)

    @classmethod
    def unit_link(cls, n):
        return cls(CostKind.LINK, ((1,) * n,) * n)

    @property
    def n(self):
        return len(self.prices)

    @property
    def is_unit(self):
        if self.kind is CostKind.AGENT:
            return all(p == 1 for p in self.prices)
        return all(p == 1 for row in self.prices for p in row)

    def agent_price(self, a):
        return self.prices[a - 1]

    def link_price(self, briber, target):
        return self.prices[briber - 1][target - 1]

    def total(self):
        if self.kind is CostKind.AGENT:
            return sum(self.prices)
        return sum(sum(row) for row in self.prices)


# /////////////////////////////////////////////////////////////////////////////
# Bribery instance
@dataclass(frozen=True)
class BriberyInstance:
    profile: QualificationProfile
    rule: SocialRule
    goal: Goal
    cost: CostModel
    budget: int | None = None

    def __post_init__(self):
        n = self.profile.n
        self.rule.validate_for(n)
        self.goal.validate_for(n)
        if self.cost.n != n:
            raise ValidationError(f"Cost model covers {self.cost.n} agents, profile has {n}")
        if self.budget is not None and self.budget < 0:
            raise ValidationError(f"Budget must be nonnegative, got {self.budget}")

    @property
    def n(self):
        return self.profile.n

    def with_goal(self, goal):
        return replace(self, goal=goal)

    def normalized(self):
        """Instance whose Exact goal (if any) is rewritten as Const+Dest."""
        return replace(self, goal=self.goal.normalized(self.n))


# /////////////////////////////////////////////////////////////////////////////
# Flips: the universal representation of a bribery
class Flip(NamedTuple):
    briber: int
    target: int
    value: int


@dataclass(frozen=True)
class FlipSet:
    flips: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        flips = frozenset(Flip(*f) for f in self.flips)
        pairs = [(f.briber, f.target) for f in flips]
        if len(pairs) != len(set(pairs)):
            raise ValidationError("FlipSet holds two flips for the same (briber, target) pair")
        for f in flips:
            if f.value not in (QUALIFY, DISQUALIFY):
                raise ValidationError(f"Flip value must be +1 or -1, got {f.value}")
        object.__setattr__(self, "flips", flips)

    @classmethod
    def of(cls, flips=()):
        return cls(frozenset(flips))

    def __iter__(self):
        return iter(self.sorted())

    def __len__(self):
        return len(self.flips)

    def sorted(self):
        return sorted(self.flips, key=lambda f: (f.briber, f.target))

    def bribers(self):
        return frozenset(f.briber for f in self.flips)

    def union(self, other):
        return FlipSet(self.flips | FlipSet.of(other).flips)

    def inverse(self):
        """Flips that undo this set once it has been applied."""
        return FlipSet(frozenset(Flip(f.briber, f.target, -f.value) for f in self.flips))


def flips_to_reach(profile, changes):
    """
    FlipSet writing {(briber, target): value} into profile, skipping entries
    that already hold the requested value.
    """
    return FlipSet.of(
        Flip(b, t, v) for (b, t), v in changes.items() if profile.value(b, t) != v
    )


def rewrite_rows(profile, rows):
    """
    FlipSet that rewrites whole opinion rows.

    Parameters:
    profile : QualificationProfile
    rows : dict mapping a briber to the set of agents it should qualify; every
        other entry of that row becomes a disqualification

    Returns:
    FlipSet of the entries that actually change
    """
    changes = {}
    for briber, qualified in rows.items():
        for target in profile.agents:
            changes[(briber, target)] = QUALIFY if target in qualified else DISQUALIFY
    return flips_to_reach(profile, changes)


# /////////////////////////////////////////////////////////////////////////////
# Operations on profiles and flips
def apply_flips(profile, flips):
    """
    Apply a flip set to a profile.

    Parameters:
    profile : QualificationProfile
    flips : FlipSet, every flip must change its entry

    Returns:
    QualificationProfile differing from profile exactly at the flipped entries

    Raises:
    FlipNotAChange if a flip writes the value already present
    """
    flips = FlipSet.of(flips) if not isinstance(flips, FlipSet) else flips
    changes = {}
    for f in flips.flips:
        profile.check_agent(f.briber)
        profile.check_agent(f.target)
        if profile.value(f.briber, f.target) == f.value:
            raise FlipNotAChange(f"Flip ({f.briber}, {f.target}, {f.value:+d}) does not change the profile")
        changes[(f.briber, f.target)] = f.value
    if not changes:
        return profile
    return profile.with_changes(changes)


def cost_of(flips, cost):
    """
    Price of a bribery.

    Agent prices charge each distinct briber once; link prices charge every
    flipped entry.
    """
    if cost.kind is CostKind.AGENT:
        return sum(cost.agent_price(a) for a in flips.bribers())
    return sum(cost.link_price(f.briber, f.target) for f in flips.flips)


def negate_profile(profile):
    """-phi: every entry negated."""
    return QualificationProfile(-profile.entries)


def qualifier_counts(profile, a):
    """(|Q+(a)|, |Q-(a)|) read from column a."""
    profile.check_agent(a)
    column = profile.entries[:, a - 1]
    qplus = int((column == QUALIFY).sum())
    return qplus, profile.n - qplus


class CheckResult(Enum):
    OK = "ok"
    GOAL_VIOLATED = "goal_violated"
    BUDGET_EXCEEDED = "budget_exceeded"


def check_solution(instance, flips):
    """
    Validate a bribery against an instance.

    Parameters:
    instance : BriberyInstance
    flips : FlipSet, valid against instance.profile

    Returns:
    CheckResult.OK when the flipped profile meets the goal and the cost fits
    the budget (if any); GOAL_VIOLATED or BUDGET_EXCEEDED otherwise. The goal
    is checked first.

    Dependencies:
    - gid_bribery.rules.evaluate
    """
    from gid_bribery.rules import evaluate

    bribed = apply_flips(instance.profile, flips)
    qualified = evaluate(bribed, instance.rule)
    if not instance.goal.is_satisfied(qualified, instance.n):
        return CheckResult.GOAL_VIOLATED
    if instance.budget is not None and cost_of(flips, instance.cost) > instance.budget:
        return CheckResult.BUDGET_EXCEEDED
    return CheckResult.OK


# /////////////////////////////////////////////////////////////////////////////
# Solver results
class Status(Enum):
    OPTIMAL = "OPTIMAL"
    INFEASIBLE = "INFEASIBLE"
    BUDGET_EXCEEDED = "BUDGET_EXCEEDED"
    UNSUPPORTED = "UNSUPPORTED"


@dataclass(frozen=True)
class SolveResult:
    """
    Outcome of a solver call.

    OPTIMAL and BUDGET_EXCEEDED carry the optimal cost, a witness and the
    qualified set after applying it; BUDGET_EXCEEDED means that optimum is
    above the instance budget. INFEASIBLE and UNSUPPORTED carry only a
    message.
    """
    status: Status
    cost: int | None = None
    witness: FlipSet | None = None
    qualified: frozenset | None = None
    message: str = ""

    @classmethod
    def infeasible(cls, message=""):
        return cls(Status.INFEASIBLE, message=message)

    @classmethod
    def unsupported(cls, message=""):
        return cls(Status.UNSUPPORTED, message=message)


def finalize(instance, flips, solver=""):
    """
    Turn a solver's witness into a SolveResult.

    The witness is re-evaluated against the instance; a witness that misses
    the goal is a solver bug and raises SolverError. The cost is recomputed
    with cost_of and compared with the budget, if any.
    """
    from gid_bribery.rules import evaluate

    flips = flips if isinstance(flips, FlipSet) else FlipSet.of(flips)
    qualified = evaluate(apply_flips(instance.profile, flips), instance.rule)
    if not instance.goal.is_satisfied(qualified, instance.n):
        raise SolverError(f"{solver or 'solver'} produced a witness that misses the goal: {flips.sorted()}")
    cost = cost_of(flips, instance.cost)
    status = Status.OPTIMAL
    if instance.budget is not None and cost > instance.budget:
        status = Status.BUDGET_EXCEEDED
    logger.debug("%s: cost %d with %d flips (%s)", solver or "solver", cost, len(flips), status.value)
    return SolveResult(status, cost, flips, qualified)
