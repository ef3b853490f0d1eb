import logging
from itertools import combinations, product

from gid_bribery.config import DEFAULT_SETTINGS
from gid_bribery.core import (
    DISQUALIFY,
    QUALIFY,
    CostKind,
    Flip,
    FlipSet,
    RuleKind,
    flips_to_reach,
)
from gid_bribery.errors import Infeasible, InstanceTooLarge, SearchBoundExceeded, Unsupported
from gid_bribery.rules import evaluate_masks, mask_to_agents

logger = logging.getLogger(__name__)


def _mask(agents):
    m = 0
    for a in agents:
        m |= 1 << (a - 1)
    return m


def _goal_masks(instance):
    goal = instance.goal
    return _mask(goal.aplus), _mask(goal.required_out(instance.n))


def _boundary_check(instance):
    rule, n = instance.rule, instance.n
    if rule.kind is not RuleKind.CONSENT:
        return
    inside, outside = _goal_masks(instance)
    if inside and rule.s > n:
        raise Infeasible(f"s = {rule.s} exceeds n = {n}, no agent can be qualified")
    if outside and rule.t > n:
        raise Infeasible(f"t = {rule.t} exceeds n = {n}, no agent can be disqualified")


# /////////////////////////////////////////////////////////////////////////////
# Exhaustive link bribery by iterative deepening on cost
def oracle_link(instance, max_n=None, deletions_only=False):
    """
    Least-cost link bribery by exhaustive search.

    Flip sets are explored level by level in nondecreasing total price, so
    the first level holding a successful flip set is the optimum.

    Parameters:
    instance : BriberyInstance with link prices, any rule and goal
    max_n : int or None, size guard (default from settings)
    deletions_only : bool, only allow turning qualifications into
        disqualifications

    Returns:
    (cost, witnesses) with every optimal FlipSet, sorted by their
    (briber, target) pairs

    Raises:
    InstanceTooLarge, Infeasible
    """
    max_n = DEFAULT_SETTINGS.oracle_link_max_n if max_n is None else max_n
    if instance.cost.kind is not CostKind.LINK:
        raise Unsupported("oracle_link needs link prices")
    n = instance.n
    if n > max_n:
        raise InstanceTooLarge(f"oracle_link handles n <= {max_n}, got {n}")
    _boundary_check(instance)

    profile, cost, rule = instance.profile, instance.cost, instance.rule
    inside, outside = _goal_masks(instance)
    candidates = [
        (cost.link_price(b, t), b, t)
        for b in profile.agents
        for t in profile.agents
        if not deletions_only or profile.qualifies(b, t)
    ]
    rows = list(profile.row_masks())

    def satisfied():
        q = evaluate_masks(rows, n, rule)
        return q & inside == inside and not q & outside

    def level(budget):
        found = []
        chosen = []

        def dfs(start, remaining):
            if remaining == 0:
                if satisfied():
                    found.append(tuple(chosen))
                return
            for j in range(start, len(candidates)):
                price, b, t = candidates[j]
                if price > remaining:
                    continue
                rows[b - 1] ^= 1 << (t - 1)
                chosen.append((b, t))
                dfs(j + 1, remaining - price)
                chosen.pop()
                rows[b - 1] ^= 1 << (t - 1)

        dfs(0, budget)
        return found

    total = sum(p for p, _, _ in candidates)
    for budget in range(total + 1):
        found = level(budget)
        logger.debug("oracle_link level %d: %d witnesses", budget, len(found))
        if found:
            witnesses = [
                FlipSet.of(Flip(b, t, -profile.value(b, t)) for b, t in pairs) for pairs in sorted(found)
            ]
            return budget, witnesses
    raise Infeasible("no flip set meets the goal")


# /////////////////////////////////////////////////////////////////////////////
# Deletion-only link bribery for iterative rules, by final qualified set
def oracle_link_deletions(instance):
    """
    Least-cost deletion-only link bribery under LSR or CSR.

    Every candidate final set F (containing A+, avoiding the required-out
    agents) is priced directly: qualifications leaving F must go, and so must
    every self-qualification outside F (LSR) or one qualifier of every
    initial agent when F is empty (CSR). F is realisable when the remaining
    initial agents inside F reach all of F.

    Returns:
    (cost, witness)

    Raises:
    Infeasible when no final set is realisable
    """
    if instance.cost.kind is not CostKind.LINK:
        raise Unsupported("oracle_link_deletions needs link prices")
    if not instance.rule.is_iterative:
        raise Unsupported("oracle_link_deletions handles LSR and CSR")

    profile, cost, rule = instance.profile, instance.cost, instance.rule
    n = instance.n
    inside, outside = _goal_masks(instance)
    free = [a for a in profile.agents if not (inside | outside) >> (a - 1) & 1]
    rows = profile.row_masks()
    seeds_all = _mask(profile.qualified_by_all())

    best = None
    for k in range(len(free) + 1):
        for extra in combinations(free, k):
            final = inside | _mask(extra)
            members = sorted(mask_to_agents(final))
            deletions = [(a, b) for a in members for b in profile.qualified_targets(a) if not final >> (b - 1) & 1]

            if rule.kind is RuleKind.LSR:
                deletions += [(a, a) for a in profile.self_qualifiers() if not final >> (a - 1) & 1]
                seeds = _mask(profile.self_qualifiers()) & final
            elif final:
                seeds = seeds_all & final
            else:
                deletions += [
                    (min(profile.qualifiers(a), key=lambda q: (cost.link_price(q, a), q)), a)
                    for a in profile.qualified_by_all()
                ]
                seeds = 0

            inner = [rows[a - 1] & final for a in range(1, n + 1)]
            if _reach(inner, seeds) != final:
                continue
            price = sum(cost.link_price(a, b) for a, b in deletions)
            if best is None or price < best[0]:
                best = (price, FlipSet.of(Flip(a, b, DISQUALIFY) for a, b in deletions))
    if best is None:
        raise Infeasible("no final qualified set is reachable by deletions")
    return best


def _reach(rows, seeds):
    reached = frontier = seeds
    while frontier:
        grown = 0
        f = frontier
        while f:
            low = f & -f
            grown |= rows[low.bit_length() - 1]
            f ^= low
        frontier = grown & ~reached
        reached |= frontier
    return reached


# /////////////////////////////////////////////////////////////////////////////
# Exhaustive agent bribery
def oracle_agent(instance, max_n=None, max_bribed=None, max_new_seeds=None, method="auto"):
    """
    Least-price agent bribery by exhaustive search.

    Bribed sets are tried in nondecreasing total price. How a bribed set is
    tested depends on the method:
    - "columns" (consent rules): each goal agent's column is settled on its
      own, the entries of bribed agents being free
    - "final-sets" (LSR, CSR): every goal-meeting final qualified set is
      checked for realisability with bribed rows qualifying exactly that set
    - "rows": every rewrite of every bribed row, limited to max_bribed agents
    "auto" picks columns or final-sets, and rows whenever max_new_seeds is set.

    Parameters:
    instance : BriberyInstance with agent prices
    max_n : int or None, size guard
    max_bribed : int or None, bound on bribed agents for the rows method
    max_new_seeds : int or None, only briberies adding at most this many
        agents to the initial set (rows method)
    method : "auto", "columns", "final-sets" or "rows"

    Returns:
    (cost, witness)

    Raises:
    InstanceTooLarge, Infeasible, SearchBoundExceeded
    """
    settings = DEFAULT_SETTINGS
    max_n = settings.oracle_agent_max_n if max_n is None else max_n
    max_bribed = settings.oracle_max_bribed if max_bribed is None else max_bribed
    if instance.cost.kind is not CostKind.AGENT:
        raise Unsupported("oracle_agent needs agent prices")
    if instance.n > max_n:
        raise InstanceTooLarge(f"oracle_agent handles n <= {max_n}, got {instance.n}")
    _boundary_check(instance)

    if method == "auto":
        if max_new_seeds is not None:
            method = "rows"
        elif instance.rule.kind is RuleKind.CONSENT:
            method = "columns"
        else:
            method = "final-sets"
    if method == "columns" and instance.rule.kind is not RuleKind.CONSENT:
        raise Unsupported("the columns method needs a consent rule")
    if method == "final-sets" and not instance.rule.is_iterative:
        raise Unsupported("the final-sets method needs LSR or CSR")

    if method == "rows":
        return _agent_by_rows(instance, max_bribed, max_new_seeds)
    test = _columns_plan if method == "columns" else _final_set_plan
    for bribed, price in _bribe_sets(instance):
        rows = test(instance, bribed)
        if rows is not None:
            logger.debug("oracle_agent (%s): bribing %s at price %d", method, bribed, price)
            return price, flips_to_reach(instance.profile, rows)
    raise Infeasible("no bribed set meets the goal")


def _bribe_sets(instance, max_size=None):
    agents = list(instance.profile.agents)
    cap = len(agents) if max_size is None else min(max_size, len(agents))
    price = instance.cost.agent_price
    sets = [c for k in range(cap + 1) for c in combinations(agents, k)]
    sets.sort(key=lambda c: (sum(price(a) for a in c), c))
    for c in sets:
        yield c, sum(price(a) for a in c)


def _columns_plan(instance, bribed):
    """Entries for the bribed agents settling every goal column, or None."""
    profile, rule, n = instance.profile, instance.rule, instance.n
    goal = instance.goal
    bribed_set = frozenset(bribed)
    changes = {}
    for a, want_in in [(a, True) for a in goal.aplus] + [(a, False) for a in goal.required_out(n)]:
        value = QUALIFY if want_in else DISQUALIFY
        fixed_plus = sum(1 for b in profile.agents if b != a and b not in bribed_set and profile.qualifies(b, a))
        fixed_minus = sum(1 for b in profile.agents if b != a and b not in bribed_set) - fixed_plus
        free = len(bribed_set - {a})
        self_options = (QUALIFY, DISQUALIFY) if a in bribed_set else (profile.value(a, a),)
        chosen_self = None
        for own in self_options:
            qplus = fixed_plus + (own == QUALIFY) + (free if want_in else 0)
            qminus = n - qplus
            member = qplus >= rule.s if own == QUALIFY else qminus <= rule.t - 1
            if member == want_in:
                chosen_self = own
                break
        if chosen_self is None:
            return None
        for b in bribed_set - {a}:
            changes[(b, a)] = value
        if a in bribed_set:
            changes[(a, a)] = chosen_self
    return changes


def _final_set_plan(instance, bribed):
    """Entries for the bribed agents realising some goal-meeting final set, or None."""
    profile, rule, n = instance.profile, instance.rule, instance.n
    inside, outside = _goal_masks(instance)
    bribed_mask = _mask(bribed)
    free = [a for a in profile.agents if not (inside | outside) >> (a - 1) & 1]
    rows = profile.row_masks()
    full = (1 << n) - 1

    for k in range(len(free) + 1):
        for extra in combinations(free, k):
            final = inside | _mask(extra)
            new_rows = [final if bribed_mask >> i & 1 else rows[i] for i in range(n)]
            unbribed_final = final & ~bribed_mask
            if any(new_rows[i] & ~final for i in range(n) if unbribed_final >> i & 1):
                continue
            if rule.kind is RuleKind.LSR:
                loops = 0
                for i in range(n):
                    if new_rows[i] >> i & 1:
                        loops |= 1 << i
                if loops & ~final:
                    continue
                seeds = loops
            elif final:
                seeds = full
                for r in new_rows:
                    seeds &= r
            else:
                new_rows = [0 if bribed_mask >> i & 1 else rows[i] for i in range(n)]
                seeds = full
                for r in new_rows:
                    seeds &= r
                if seeds:
                    continue
            if _reach([r & final for r in new_rows], seeds) != final:
                continue
            if evaluate_masks(new_rows, n, rule) != final:
                continue
            changes = {}
            for b in bribed:
                for t in profile.agents:
                    changes[(b, t)] = QUALIFY if new_rows[b - 1] >> (t - 1) & 1 else DISQUALIFY
            return changes
    return None


def _agent_by_rows(instance, max_bribed, max_new_seeds):
    profile, rule, cost, n = instance.profile, instance.rule, instance.cost, instance.n
    inside, outside = _goal_masks(instance)
    rows = list(profile.row_masks())
    initial = _initial_mask(rows, n, rule)

    for bribed, price in _bribe_sets(instance, max_bribed):
        for choice in product(range(1 << n), repeat=len(bribed)):
            new_rows = list(rows)
            for b, r in zip(bribed, choice):
                new_rows[b - 1] = r
            if max_new_seeds is not None:
                added = _initial_mask(new_rows, n, rule) & ~initial
                if bin(added).count("1") > max_new_seeds:
                    continue
            q = evaluate_masks(new_rows, n, rule)
            if q & inside == inside and not q & outside:
                changes = {
                    (b, t): QUALIFY if r >> (t - 1) & 1 else DISQUALIFY
                    for b, r in zip(bribed, choice)
                    for t in profile.agents
                }
                _certify(instance, max_bribed, price)
                return price, flips_to_reach(profile, changes)

    if max_bribed >= n:
        raise Infeasible("no bribed set meets the goal")
    raise SearchBoundExceeded(f"no bribery with at most {max_bribed} bribed agents")


def _certify(instance, max_bribed, price):
    """A larger bribed set could only be cheaper when the cheapest such set costs less."""
    prices = sorted(instance.cost.prices)
    if max_bribed < len(prices) and sum(prices[: max_bribed + 1]) < price:
        raise SearchBoundExceeded(
            f"price {price} is not certified optimal beyond {max_bribed} bribed agents"
        )


def _initial_mask(rows, n, rule):
    if rule.kind is RuleKind.LSR:
        return sum(1 << i for i in range(n) if rows[i] >> i & 1)
    if rule.kind is RuleKind.CSR:
        seeds = (1 << n) - 1
        for r in rows:
            seeds &= r
        return seeds
    return 0
