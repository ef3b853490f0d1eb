import logging

import numpy as np

from gid_bribery.config import DEFAULT_SETTINGS
from gid_bribery.core import (
    DISQUALIFY,
    QUALIFY,
    CostKind,
    Flip,
    FlipSet,
    GoalKind,
    RuleKind,
    SolveResult,
    apply_flips,
    cost_of,
    finalize,
    flips_to_reach,
    rewrite_rows,
)
from gid_bribery.errors import TooManyTerminals, Unsupported
from gid_bribery.graphalg import (
    WeightedDigraph,
    directed_steiner_tree,
    max_flow_min_cut,
    min_spanning_arborescence,
    separate_vertices,
)
from gid_bribery.rules import evaluate, iterative_closure, matrix_closure
from gid_bribery.utilities import best_over

logger = logging.getLogger(__name__)

SOURCE = "sigma"
SINK = "tau"
ROOT = "root"


def _require(instance, cost_kind, goal_kinds, solver):
    if not instance.rule.is_iterative:
        raise Unsupported(f"{solver} handles LSR and CSR, got {instance.rule}")
    if instance.cost.kind is not cost_kind:
        raise Unsupported(f"{solver} needs {cost_kind.value} prices, got {instance.cost.kind.value}")
    if instance.goal.kind not in goal_kinds:
        raise Unsupported(f"{solver} does not handle {instance.goal.kind.value} goals")


def _already_met(instance):
    qualified = evaluate(instance.profile, instance.rule)
    return instance.goal.is_satisfied(qualified, instance.n)


def _cheapest(agents, price):
    return min(agents, key=lambda a: (price(a), a))


def _cheapest_disqualifier(profile, cost, a):
    """cheap(a): the qualifier of a whose link to a is cheapest to delete."""
    return _cheapest(profile.qualifiers(a), lambda b: cost.link_price(b, a))


# /////////////////////////////////////////////////////////////////////////////
# Agent bribery for LSR and CSR, all goals
def solve_iter_agent(instance, settings=None):
    """
    Minimum-price agent bribery under LSR or CSR.

    The bribed agents found by a minimum weighted vertex separator qualify
    themselves (LSR) or the initial set (CSR) together with A+, and
    disqualify everybody else. Exact goals run as Const+Dest with
    A- = A minus A+.

    Parameters:
    instance : BriberyInstance with agent prices and an iterative rule
    settings : Settings or None

    Returns:
    SolveResult

    Raises:
    Unsupported for link prices or a consent rule
    """
    settings = settings or DEFAULT_SETTINGS
    _require(instance, CostKind.AGENT, tuple(GoalKind), "solve_iter_agent")
    if _already_met(instance):
        return finalize(instance, FlipSet(), "solve_iter_agent")

    inst = instance.normalized()
    if inst.rule.kind is RuleKind.LSR:
        flips = _lsr_agent(inst)
    else:
        flips = _csr_agent(inst, settings)
        if flips is None:
            return SolveResult.infeasible("no guessed initial agent admits a bribery")
    return finalize(instance, flips, "solve_iter_agent")


def _separator(profile, cost, aminus, sources):
    """Minimum price agent set cutting every path from sources to A-."""
    return _matrix_separator(profile.entries == QUALIFY, cost, aminus, sources)


def _matrix_separator(qualifies, cost, aminus, sources):
    n = qualifies.shape[0]
    minus = np.zeros(n, dtype=bool)
    minus[[a - 1 for a in aminus]] = True
    arcs = qualifies & ~np.eye(n, dtype=bool)
    arcs[minus] = False
    tails, heads = np.nonzero(arcs)
    heads = np.where(minus[heads], 0, heads + 1)

    weights = {a: cost.agent_price(a) for a in range(1, n + 1) if not minus[a - 1]}
    pairs = [(SOURCE, a) for a in sources]
    pairs += [(a, b or SINK) for a, b in zip((tails + 1).tolist(), heads.tolist())]
    weight, separator = separate_vertices(weights, pairs, SOURCE, SINK)
    logger.debug("separator of weight %d: %s", weight, sorted(separator))
    return separator


def _lsr_agent(inst):
    profile, cost = inst.profile, inst.cost
    aplus, aminus = inst.goal.aplus, inst.goal.aminus

    # members of A- qualifying themselves stay qualified unless bribed
    rows = {a: frozenset() for a in aminus if profile.self_qualifies(a)}
    phi = apply_flips(profile, rewrite_rows(profile, rows))

    sources = aplus | (phi.self_qualifiers() - aminus)
    separator = _separator(phi, cost, aminus, sources)
    if separator:
        rows.update({a: aplus | {a} for a in separator})
    elif not aplus <= evaluate(phi, inst.rule):
        outside = [a for a in profile.agents if a not in aminus]
        a = _cheapest(outside, cost.agent_price)
        logger.debug("empty separator, bribing cheapest agent %d to seed A+", a)
        rows[a] = aplus | {a}
    return rewrite_rows(profile, rows)


def _csr_agent(inst, settings):
    profile, cost = inst.profile, inst.cost
    aplus, aminus = inst.goal.aplus, inst.goal.aminus

    if not aplus:
        # one agent disqualifying everybody empties the initial set
        a = _cheapest(profile.agents, cost.agent_price)
        return rewrite_rows(profile, {a: frozenset()})

    qualifies = profile.entries == QUALIFY

    def attempt(a_star):
        # every bribed agent qualifies exactly A+ and a*, so the initial set
        # after bribery lies inside that target
        target = aplus | {a_star}
        base = profile.disqualifiers(a_star)
        found = _csr_complete(inst, qualifies, base, target)
        if found is not None or base:
            return found
        # a* is qualified by everyone and nothing needs separating; a single
        # bribed agent still trims the initial set down to the target
        reached = iterative_closure(profile, profile.qualified_by_all() & target)
        pool = profile.agents if aplus <= reached else reached
        return _csr_complete(inst, qualifies, {_cheapest(pool, cost.agent_price)}, target)

    def lower_bound(a_star):
        # the rows of a*'s disqualifiers always change
        return sum(cost.agent_price(d) for d in profile.disqualifiers(a_star))

    guesses = [a for a in profile.agents if a not in aminus]
    best = best_over(attempt, guesses, settings.workers, lower_bound)
    if best is None:
        return None
    _, bribed, target = best
    return rewrite_rows(profile, dict.fromkeys(bribed, target))


def _csr_complete(inst, qualifies, bribed, target):
    """
    Price, bribed agents and target of one guess, or None.

    Bribed rows are written into a copy of the boolean matrix, which feeds
    both the separator and the closure.
    """
    cost = inst.cost
    aplus, aminus = inst.goal.aplus, inst.goal.aminus
    row = np.zeros(qualifies.shape[0], dtype=bool)
    row[[a - 1 for a in target]] = True

    def bribe(agents):
        phi = qualifies.copy()
        phi[[a - 1 for a in agents]] = row
        return phi

    bribed = set(bribed)
    bribed |= _matrix_separator(bribe(bribed), cost, aminus, target)
    if not bribed:
        return None

    phi = bribe(bribed)
    reached = matrix_closure(phi, phi.all(axis=0))
    qualified = {int(i) + 1 for i in np.flatnonzero(reached)}
    if qualified & aminus:
        return None
    if not aplus <= qualified:
        spare = [a for a in qualified if a not in bribed]
        if not spare:
            return None
        a = _cheapest(spare, cost.agent_price)
        logger.debug("A+ not yet reached, also bribing qualified agent %d", a)
        bribed.add(a)
    price = sum(cost.agent_price(a) for a in bribed if (qualifies[a - 1] != row).any())
    return price, frozenset(bribed), target


# /////////////////////////////////////////////////////////////////////////////
# Destructive link bribery by minimum weighted cut
def solve_iter_link_dest(instance, settings=None):
    """
    Minimum-price destructive link bribery under LSR or CSR.

    Every cut arc becomes a deleted qualification. Arcs into the sink and,
    for CSR, the arc to the guessed surviving initial agent weigh more than
    all prices together, so no minimum cut uses them.
    """
    settings = settings or DEFAULT_SETTINGS
    _require(instance, CostKind.LINK, (GoalKind.DESTRUCTIVE,), "solve_iter_link_dest")
    if _already_met(instance):
        return finalize(instance, FlipSet(), "solve_iter_link_dest")
    if instance.rule.kind is RuleKind.LSR:
        flips = _lsr_link_dest(instance)
    else:
        flips = _csr_link_dest(instance, settings)
    return finalize(instance, flips, "solve_iter_link_dest")


def _cut_graph(profile, cost, aminus, infinity):
    g = WeightedDigraph([SOURCE, SINK])
    for a in profile.agents:
        for b in profile.qualified_targets(a):
            if b != a:
                g.add_arc(a, b, cost.link_price(a, b))
    for a in aminus:
        g.add_arc(a, SINK, infinity)
    return g


def _lsr_link_dest(inst):
    profile, cost, aminus = inst.profile, inst.cost, inst.goal.aminus
    forced = flips_to_reach(profile, {(a, a): DISQUALIFY for a in aminus})
    phi = apply_flips(profile, forced)

    infinity = cost.total() + 1
    g = _cut_graph(phi, cost, aminus, infinity)
    for a in phi.self_qualifiers():
        g.add_arc(SOURCE, a, cost.link_price(a, a))
    value, cut = max_flow_min_cut(g, SOURCE, SINK)
    logger.debug("LSR destructive cut of value %d", value)

    flips = [Flip(v, v, DISQUALIFY) if u == SOURCE else Flip(u, v, DISQUALIFY) for (u, v) in cut]
    return forced.union(flips)


def _csr_link_dest(inst, settings):
    profile, cost, aminus = inst.profile, inst.cost, inst.goal.aminus
    seeds = profile.qualified_by_all()
    emptied = FlipSet.of(Flip(_cheapest_disqualifier(profile, cost, a), a, DISQUALIFY) for a in seeds)
    candidates = [(cost_of(emptied, cost), emptied)]
    infinity = cost.total() + 1

    def attempt(a_star):
        g = _cut_graph(profile, cost, aminus, infinity)
        g.add_arc(SOURCE, a_star, infinity)
        value, cut = max_flow_min_cut(g, SOURCE, SINK)
        if value >= infinity:
            return None
        logger.debug("CSR destructive cut keeping a%d: value %d", a_star, value)
        return value, FlipSet.of(Flip(u, v, DISQUALIFY) for (u, v) in cut)

    best = best_over(attempt, sorted(seeds - aminus), settings.workers)
    if best is not None:
        candidates.append(best)
    return min(candidates, key=lambda c: c[0])[1]


# /////////////////////////////////////////////////////////////////////////////
# Exact link bribery by minimum spanning arborescence
def solve_iter_link_exact(instance, settings=None):
    """
    Minimum-price exact link bribery under LSR or CSR.

    Qualifications from A+ into its complement are deleted and members of the
    complement stop qualifying themselves. The already qualified part of A+
    is merged into a root, and a minimum spanning arborescence over the rest
    of A+ prices the qualifications to insert.
    """
    settings = settings or DEFAULT_SETTINGS
    _require(instance, CostKind.LINK, (GoalKind.EXACT,), "solve_iter_link_exact")
    if _already_met(instance):
        return finalize(instance, FlipSet(), "solve_iter_link_exact")
    if instance.rule.kind is RuleKind.LSR:
        flips = _lsr_link_exact(instance)
    else:
        flips = _csr_link_exact(instance, settings)
        if flips is None:
            return SolveResult.infeasible("no guessed initial agent admits an exact bribery")
    return finalize(instance, flips, "solve_iter_link_exact")


def _cut_into_complement(profile, aplus, self_too):
    aminus = frozenset(profile.agents) - aplus
    changes = {(a, b): DISQUALIFY for a in aplus for b in aminus}
    if self_too:
        changes.update({(a, a): DISQUALIFY for a in aminus})
    return flips_to_reach(profile, changes)


def _span(phi, cost, targets, reached, seed_options):
    """
    Cheapest insertions making every target reachable from the reached set.

    seed_options(a) lists (price, Flip) ways to qualify a directly from the
    root; the cheapest one becomes the root arc.
    """
    rest = sorted(targets - reached)
    if not rest:
        return FlipSet()
    g = WeightedDigraph([ROOT, *rest])
    via_root = {}
    for v in rest:
        options = seed_options(v)
        if options:
            price, flip = min(options)
            g.add_arc(ROOT, v, price)
            via_root[v] = flip
        for u in rest:
            if u != v:
                g.add_arc(u, v, 0 if phi.qualifies(u, v) else cost.link_price(u, v))
    weight, arcs = min_spanning_arborescence(g, ROOT)
    logger.debug("arborescence over %d agents: weight %d", len(rest), weight)

    flips = []
    for u, v in arcs:
        if u == ROOT:
            flips.append(via_root[v])
        elif not phi.qualifies(u, v):
            flips.append(Flip(u, v, QUALIFY))
    return FlipSet.of(flips)


def _lsr_link_exact(inst):
    profile, cost, aplus = inst.profile, inst.cost, inst.goal.aplus
    forced = _cut_into_complement(profile, aplus, self_too=True)
    phi = apply_flips(profile, forced)
    reached = iterative_closure(phi, phi.self_qualifiers())

    def seed_options(v):
        options = [(cost.link_price(v, v), Flip(v, v, QUALIFY))]
        options += [(cost.link_price(a, v), Flip(a, v, QUALIFY)) for a in reached]
        return options

    return forced.union(_span(phi, cost, aplus, reached, seed_options))


def _csr_link_exact(inst, settings):
    profile, cost, aplus = inst.profile, inst.cost, inst.goal.aplus

    if not aplus:
        return FlipSet.of(
            Flip(_cheapest_disqualifier(profile, cost, a), a, DISQUALIFY) for a in profile.qualified_by_all()
        )

    forced = _cut_into_complement(profile, aplus, self_too=False)
    phi = apply_flips(profile, forced)

    def grow(psi):
        reached = iterative_closure(psi, psi.qualified_by_all())

        def seed_options(v):
            return [(cost.link_price(a, v), Flip(a, v, QUALIFY)) for a in reached]

        return _span(psi, cost, aplus, reached, seed_options)

    if phi.qualified_by_all():
        return forced.union(grow(phi))

    def attempt(a_star):
        made = flips_to_reach(phi, {(a, a_star): QUALIFY for a in phi.agents})
        flips = forced.union(made).union(grow(apply_flips(phi, made)))
        return cost_of(flips, cost), flips

    best = best_over(attempt, sorted(aplus), settings.workers)
    return None if best is None else best[1]


# /////////////////////////////////////////////////////////////////////////////
# Constructive link bribery by directed Steiner tree
def solve_iter_link_const(instance, settings=None):
    """
    Minimum-price constructive link bribery under LSR or CSR, exponential
    only in |A+|.

    Existing qualifications cost nothing, missing ones cost their price, and
    a root stands for the initial set. The positive-weight arcs of a minimum
    Steiner tree with terminals A+ are the qualifications to insert. For CSR
    every agent is tried as the one made qualified by everybody.

    Raises:
    TooManyTerminals when |A+| exceeds settings.max_terminals
    """
    settings = settings or DEFAULT_SETTINGS
    _require(instance, CostKind.LINK, (GoalKind.CONSTRUCTIVE,), "solve_iter_link_const")
    aplus = instance.goal.aplus
    if len(aplus) > settings.max_terminals:
        raise TooManyTerminals(f"|A+| = {len(aplus)} exceeds the cap of {settings.max_terminals}")
    if _already_met(instance):
        return finalize(instance, FlipSet(), "solve_iter_link_const")

    profile, cost = instance.profile, instance.cost
    if instance.rule.kind is RuleKind.LSR:
        roots = {a: 0 if profile.self_qualifies(a) else cost.link_price(a, a) for a in profile.agents}
        flips = _steiner_flips(profile, cost, aplus, roots, settings)
    else:
        def attempt(a_star):
            made = flips_to_reach(profile, {(a, a_star): QUALIFY for a in profile.agents})
            phi = apply_flips(profile, made)
            roots = {a: 0 for a in phi.qualified_by_all()}
            flips = made.union(_steiner_flips(phi, cost, aplus, roots, settings))
            return cost_of(flips, cost), flips

        flips = best_over(attempt, list(profile.agents), settings.workers)[1]
    return finalize(instance, flips, "solve_iter_link_const")


def _steiner_flips(phi, cost, terminals, roots, settings):
    g = WeightedDigraph([ROOT, *phi.agents])
    for a, price in roots.items():
        g.add_arc(ROOT, a, price)
    for u in phi.agents:
        for v in phi.agents:
            if u != v:
                g.add_arc(u, v, 0 if phi.qualifies(u, v) else cost.link_price(u, v))
    weight, arcs = directed_steiner_tree(g, ROOT, terminals, settings.max_terminals)
    logger.debug("Steiner tree over %d terminals: weight %d", len(terminals), weight)

    flips = []
    for u, v in arcs:
        if u == ROOT:
            if not phi.self_qualifies(v) and roots[v] > 0:
                flips.append(Flip(v, v, QUALIFY))
        elif not phi.qualifies(u, v):
            flips.append(Flip(u, v, QUALIFY))
    return FlipSet.of(flips)
