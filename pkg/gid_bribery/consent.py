import logging
from itertools import chain, combinations

from gid_bribery.config import DEFAULT_SETTINGS
from gid_bribery.core import (
    DISQUALIFY,
    QUALIFY,
    BriberyInstance,
    CostKind,
    Flip,
    FlipSet,
    Goal,
    GoalKind,
    QualificationProfile,
    RuleKind,
    SolveResult,
    finalize,
    flips_to_reach,
    negate_profile,
    qualifier_counts,
    rewrite_rows,
)
from gid_bribery.covering import covering_bnb
from gid_bribery.errors import Infeasible, TooManyTargets, Unsupported
from gid_bribery.rules import evaluate
from gid_bribery.utilities import best_over, subsets_within

logger = logging.getLogger(__name__)


def _require(instance, cost_kind, goal_kinds, solver):
    if instance.rule.kind is not RuleKind.CONSENT:
        raise Unsupported(f"{solver} handles consent rules, got {instance.rule}")
    if instance.cost.kind is not cost_kind:
        raise Unsupported(f"{solver} needs {cost_kind.value} prices, got {instance.cost.kind.value}")
    if instance.goal.kind not in goal_kinds:
        raise Unsupported(f"{solver} does not handle {instance.goal.kind.value} goals")


def _boundary_infeasible(instance):
    """
    Goals no bribery can meet: with s = n + 1 nobody can be qualified, with
    t = n + 1 nobody can be disqualified.
    """
    goal, rule, n = instance.goal.normalized(instance.n), instance.rule, instance.n
    if goal.aplus and rule.s > n:
        return f"s = {rule.s} exceeds n = {n}, no agent can be qualified"
    if goal.aminus and rule.t > n:
        return f"t = {rule.t} exceeds n = {n}, no agent can be disqualified"
    return None


def _already_met(instance):
    return instance.goal.is_satisfied(evaluate(instance.profile, instance.rule), instance.n)


def _subsets(items):
    items = sorted(items)
    return chain.from_iterable(combinations(items, k) for k in range(len(items) + 1))


# /////////////////////////////////////////////////////////////////////////////
# Link bribery: every target agent is handled on its own column
def solve_consent_link(instance, settings=None):
    """
    Minimum-price link bribery under a consent rule.

    Membership of an agent depends only on its own column, so each agent of
    A+ and A- is fixed independently: optionally flip its self-entry, then
    take the cheapest column flips until the count threshold is met.

    Parameters:
    instance : BriberyInstance with link prices and a consent rule; Exact
        goals run as Const+Dest with A- = A minus A+
    settings : unused, accepted for a uniform solver signature

    Returns:
    SolveResult, INFEASIBLE only at the s = n + 1 or t = n + 1 boundary
    """
    _require(instance, CostKind.LINK, tuple(GoalKind), "solve_consent_link")
    goal = instance.goal.normalized(instance.n)
    profile, cost, rule = instance.profile, instance.cost, instance.rule

    flips = []
    for a in sorted(goal.aplus | goal.aminus):
        want_in = a in goal.aplus
        plan = _cheapest_column_plan(profile, cost, rule, a, want_in)
        if plan is None:
            return SolveResult.infeasible(
                f"agent {a} cannot be made {'qualified' if want_in else 'disqualified'} under {rule}"
            )
        flips.extend(plan)
    return finalize(instance, FlipSet.of(flips), "solve_consent_link")


def _cheapest_column_plan(profile, cost, rule, a, want_in):
    """Cheapest flips in column a that put a inside (or outside) the qualified set."""
    n, s, t = profile.n, rule.s, rule.t
    self_value = profile.value(a, a)
    plans = []
    for self_target in (QUALIFY, DISQUALIFY):
        column = [profile.value(b, a) if b != a else self_target for b in profile.agents]
        qplus = sum(1 for v in column if v == QUALIFY)
        qminus = n - qplus
        if want_in:
            # qualify: reach s qualifiers, or stay under t disqualifiers
            flip_to = QUALIFY
            need = s - qplus if self_target == QUALIFY else qminus - (t - 1)
        else:
            flip_to = DISQUALIFY
            need = qplus - (s - 1) if self_target == QUALIFY else t - qminus
        need = max(0, need)
        pool = sorted(
            (cost.link_price(b, a), b) for b in profile.agents if b != a and profile.value(b, a) != flip_to
        )
        if need > len(pool):
            continue
        chosen = [Flip(b, a, flip_to) for _, b in pool[:need]]
        price = sum(p for p, _ in pool[:need])
        if self_target != self_value:
            chosen.append(Flip(a, a, self_target))
            price += cost.link_price(a, a)
        plans.append((price, chosen))
    if not plans:
        return None
    return min(plans, key=lambda p: p[0])[1]


# /////////////////////////////////////////////////////////////////////////////
# Constructive agent bribery by bounded branching
def _bribe_all_qualify(profile, bribed):
    entries = profile.entries.copy()
    if bribed:
        entries[[b - 1 for b in bribed], :] = QUALIFY
    return QualificationProfile(entries)


def _qualified_after(profile, rule, bribed):
    return evaluate(_bribe_all_qualify(profile, bribed), rule)


def calcb_decide(instance, budget):
    """
    Decide constructive agent bribery under a consent rule within a budget.

    Bribed agents always qualify everybody. Below s the bribe sets within
    budget are enumerated. From s upward, unit prices reduce to s = 1 and
    branch on an unqualified target or one of its disqualifiers, with
    targets that cannot be reached within the remaining budget forced into
    the bribe set. Priced instances first bribe the targets needing more
    than budget extra qualifications and seed with at most s more agents.

    Parameters:
    instance : BriberyInstance, agent prices, consent rule, constructive goal
    budget : int, the decision budget

    Returns:
    frozenset of bribed agents, or None when no bribery fits the budget
    """
    profile, rule, cost = instance.profile, instance.rule, instance.cost
    aplus = instance.goal.aplus
    n, s, t = profile.n, rule.s, rule.t

    if aplus and s > n:
        return None
    if aplus <= evaluate(profile, rule):
        return frozenset()

    prices = {a: cost.agent_price(a) for a in profile.agents}

    def succeeds(bribed):
        return aplus <= _qualified_after(profile, rule, bribed)

    if budget < s or (not cost.is_unit and n <= s + budget + t):
        for bribed, _ in subsets_within(prices, budget, items=profile.agents):
            if succeeds(bribed):
                return frozenset(bribed)
        return None

    deficit = {a: max(0, qualifier_counts(profile, a)[1] - (t - 1)) for a in aplus}
    disqualifiers = {a: profile.disqualifiers(a) for a in aplus}

    if cost.is_unit:
        # with at least s bribed agents every self-qualifier is in
        targets = {a for a in aplus if not profile.self_qualifies(a)}

        def satisfied(a, chosen):
            return a in chosen or len(chosen & disqualifiers[a]) >= deficit[a]

        chosen = _calcb(targets, frozenset(), budget, satisfied, disqualifiers, deficit, lambda a: 1, forced=True)
        if chosen is None:
            return None
        padding = [a for a in profile.agents if a not in chosen][: max(0, min(s, n) - len(chosen))]
        return chosen | frozenset(padding)

    far = {a for a in aplus if deficit[a] > budget}
    near = aplus - far
    start = frozenset(a for a in far if not profile.self_qualifies(a))
    remaining = budget - sum(prices[a] for a in start)
    if remaining < 0:
        return None

    def satisfied(a, chosen):
        return a in _qualified_after(profile, rule, chosen)

    if far <= _qualified_after(profile, rule, start):
        seeds = [start]
    else:
        outside = [a for a in profile.agents if a not in start]
        seeds = []
        for extra, _ in subsets_within(prices, remaining, max_size=s, items=outside):
            seeded = start | frozenset(extra)
            if far <= _qualified_after(profile, rule, seeded):
                seeds.append(seeded)

    for seeded in seeds:
        left = budget - sum(prices[a] for a in seeded)
        chosen = _calcb(set(near), seeded, left, satisfied, disqualifiers, deficit, prices.get, forced=False)
        if chosen is not None:
            return chosen
    return None


def _calcb(targets, chosen, p, satisfied, disqualifiers, deficit, price, forced):
    """Branching search; returns the bribe set or None."""
    targets = set(targets)
    if forced:
        changed = True
        while changed:
            changed = False
            for a in sorted(targets):
                if deficit[a] - len(chosen & disqualifiers[a]) > p:
                    chosen = chosen | {a}
                    targets.discard(a)
                    p -= price(a)
                    changed = True
    targets = {a for a in targets if not satisfied(a, chosen)}
    if p < 0:
        return None
    if not targets:
        return chosen

    a_star = min(targets)
    branches = sorted(({a_star} | disqualifiers[a_star]) - chosen, key=lambda a: (a != a_star, a))
    for a in branches:
        if price(a) > p:
            continue
        found = _calcb(targets, chosen | {a}, p - price(a), satisfied, disqualifiers, deficit, price, forced)
        if found is not None:
            return found
    return None


def solve_consent_agent_const_branch(instance, settings=None):
    """
    Minimum-price constructive agent bribery under a consent rule, found by
    binary search over the budget of calcb_decide.
    """
    _require(instance, CostKind.AGENT, (GoalKind.CONSTRUCTIVE,), "solve_consent_agent_const_branch")
    reason = _boundary_infeasible(instance)
    if reason:
        return SolveResult.infeasible(reason)

    lo, hi = 0, instance.cost.total()
    best = calcb_decide(instance, hi)
    if best is None:
        return SolveResult.infeasible("no bribery exists even when everybody is bribed")
    while lo < hi:
        mid = (lo + hi) // 2
        found = calcb_decide(instance, mid)
        logger.debug("calcb at budget %d: %s", mid, "feasible" if found is not None else "infeasible")
        if found is None:
            lo = mid + 1
        else:
            best, hi = found, mid
    flips = rewrite_rows(instance.profile, {b: frozenset(instance.profile.agents) for b in best})
    return finalize(instance, flips, "solve_consent_agent_const_branch")


# /////////////////////////////////////////////////////////////////////////////
# Constructive agent bribery by guessing the bribed part of A+
def solve_consent_agent_const_subsetcover(instance, settings=None):
    """
    Minimum-price constructive agent bribery under a consent rule,
    exponential only in |A+|.

    Every subset of A+ is tried as the bribed part of A+; the agents outside
    A+ to bribe then follow from an exact 0/1 covering program with one row
    per member of A+.

    Raises:
    TooManyTargets when |A+| exceeds settings.max_terminals
    """
    settings = settings or DEFAULT_SETTINGS
    _require(instance, CostKind.AGENT, (GoalKind.CONSTRUCTIVE,), "solve_consent_agent_const_subsetcover")
    aplus = instance.goal.aplus
    if len(aplus) > settings.max_terminals:
        raise TooManyTargets(f"|A+| = {len(aplus)} exceeds the cap of {settings.max_terminals}")
    reason = _boundary_infeasible(instance)
    if reason:
        return SolveResult.infeasible(reason)
    if _already_met(instance):
        return finalize(instance, FlipSet(), "solve_consent_agent_const_subsetcover")

    profile = instance.profile
    everyone = frozenset(profile.agents)
    best = best_over(
        lambda guess: _cover_guess(instance, guess),
        _subsets(aplus),
        settings.workers,
    )
    if best is None:
        return SolveResult.infeasible("no subset of A+ leads to a bribery")
    rows = {b: everyone for b in best[1]}
    return finalize(instance, rewrite_rows(profile, rows), "solve_consent_agent_const_subsetcover")


def _cover_guess(instance, guess):
    """
    Bribe the guessed agents, then cover the remaining requirements of A+
    and A- with agents outside both sets.

    Guessed agents and the outside agents picked by the covering program
    qualify A+ and disqualify A-.
    Returns (cost, bribed agents) or None.
    """
    profile, rule, cost = instance.profile, instance.rule, instance.cost
    goal = instance.goal.normalized(instance.n)
    aplus, aminus = goal.aplus, goal.aminus
    guess = frozenset(guess)

    entries = profile.entries.copy()
    for b in guess:
        for a in aplus:
            entries[b - 1, a - 1] = QUALIFY
        for a in aminus:
            entries[b - 1, a - 1] = DISQUALIFY
    phi = QualificationProfile(entries)

    outside = [a for a in profile.agents if a not in aplus and a not in aminus]
    rows, thresholds = [], []
    for a in sorted(aplus):
        qplus, qminus = qualifier_counts(phi, a)
        rows.append([int(phi.value(o, a) == DISQUALIFY) for o in outside])
        thresholds.append(rule.s - qplus if phi.self_qualifies(a) else qminus - (rule.t - 1))
    for a in sorted(aminus):
        qplus, qminus = qualifier_counts(phi, a)
        rows.append([int(phi.value(o, a) == QUALIFY) for o in outside])
        thresholds.append(qplus - (rule.s - 1) if phi.self_qualifies(a) else rule.t - qminus)

    try:
        extra, assignment = covering_bnb([cost.agent_price(o) for o in outside], rows, thresholds)
    except Infeasible:
        return None
    bribed = guess | frozenset(o for o, x in zip(outside, assignment) if x)
    total = sum(cost.agent_price(b) for b in bribed)
    logger.debug("guess %s: covering adds %d, total %d", sorted(guess), extra, total)
    return total, bribed


# /////////////////////////////////////////////////////////////////////////////
# Destructive agent bribery through the negated profile
def dual_instance(instance):
    """
    The constructive instance on -phi with s and t swapped and A+ := A-.

    An agent is disqualified under f(s,t) on phi exactly when it is
    qualified under f(t,s) on -phi.
    """
    return BriberyInstance(
        negate_profile(instance.profile),
        instance.rule.dual(),
        Goal.constructive(instance.goal.aminus),
        instance.cost,
        instance.budget,
    )


def solve_consent_agent_dest(instance, settings=None):
    """Destructive agent bribery under a consent rule, solved on the dual instance."""
    settings = settings or DEFAULT_SETTINGS
    _require(instance, CostKind.AGENT, (GoalKind.DESTRUCTIVE,), "solve_consent_agent_dest")
    dual = dual_instance(instance)
    if len(dual.goal.aplus) <= settings.max_terminals:
        result = solve_consent_agent_const_subsetcover(dual, settings)
    else:
        result = solve_consent_agent_const_branch(dual, settings)
    if result.witness is None:
        return result
    return finalize(instance, result.witness.inverse(), "solve_consent_agent_dest")


# /////////////////////////////////////////////////////////////////////////////
# Const+Dest and Exact agent bribery
def solve_consent_agent_constdest(instance, settings=None):
    """
    Const+Dest (and Exact) agent bribery under a consent rule.

    For s = t = 1 only self-entries matter. Otherwise every pair of subsets
    of A+ and A- is tried as the bribed part of the goal sets, and a covering
    program settles which outside agents to bribe.

    Raises:
    TooManyTargets when |A+| + |A-| exceeds settings.max_terminals and the
    rule is not f(1,1)
    """
    settings = settings or DEFAULT_SETTINGS
    _require(instance, CostKind.AGENT, (GoalKind.CONST_DEST, GoalKind.EXACT), "solve_consent_agent_constdest")
    goal = instance.goal.normalized(instance.n)
    aplus, aminus = goal.aplus, goal.aminus
    profile, rule = instance.profile, instance.rule

    reason = _boundary_infeasible(instance)
    if reason:
        return SolveResult.infeasible(reason)
    if _already_met(instance):
        return finalize(instance, FlipSet(), "solve_consent_agent_constdest")

    if rule.s == 1 and rule.t == 1:
        changes = {(a, a): QUALIFY for a in aplus}
        changes.update({(a, a): DISQUALIFY for a in aminus})
        return finalize(instance, flips_to_reach(profile, changes), "solve_consent_agent_constdest")

    if len(aplus) + len(aminus) > settings.max_terminals:
        raise TooManyTargets(f"|A+| + |A-| = {len(aplus) + len(aminus)} exceeds the cap of {settings.max_terminals}")

    guesses = [(p, m) for p in _subsets(aplus) for m in _subsets(aminus)]
    best = best_over(lambda g: _cover_guess(instance, g[0] + g[1]), guesses, settings.workers)
    if best is None:
        return SolveResult.infeasible("no subsets of A+ and A- lead to a bribery")

    changes = {}
    for b in best[1]:
        changes.update({(b, a): QUALIFY for a in aplus})
        changes.update({(b, a): DISQUALIFY for a in aminus})
    return finalize(instance, flips_to_reach(profile, changes), "solve_consent_agent_constdest")
