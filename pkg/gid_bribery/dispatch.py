import logging

from gid_bribery.config import DEFAULT_SETTINGS
from gid_bribery.consent import (
    solve_consent_agent_const_branch,
    solve_consent_agent_const_subsetcover,
    solve_consent_agent_constdest,
    solve_consent_agent_dest,
    solve_consent_link,
)
from gid_bribery.core import CostKind, GoalKind, RuleKind, SolveResult, finalize
from gid_bribery.errors import (
    Infeasible,
    InstanceTooLarge,
    TooManyTargets,
    TooManyTerminals,
    Unsupported,
)
from gid_bribery.iterative import (
    solve_iter_agent,
    solve_iter_link_const,
    solve_iter_link_dest,
    solve_iter_link_exact,
)
from gid_bribery.oracle import oracle_link

logger = logging.getLogger(__name__)


def _link_oracle(instance, settings):
    """Exhaustive fallback for cells with no polynomial or FPT algorithm."""
    limit = settings.dispatch_oracle_max_n
    if instance.n > limit:
        raise Unsupported(
            f"iterative-rule link const+dest bribery has no exact algorithm beyond n = {limit}, got n = {instance.n}"
        )
    try:
        cost, witnesses = oracle_link(instance, max_n=limit)
    except Infeasible as e:
        return SolveResult.infeasible(str(e))
    logger.debug("oracle fallback: cost %d, %d optimal witnesses", cost, len(witnesses))
    return finalize(instance, witnesses[0], "oracle_link")


SOLVERS = {
    "iter-agent": solve_iter_agent,
    "iter-link-dest": solve_iter_link_dest,
    "iter-link-exact": solve_iter_link_exact,
    "iter-link-const": solve_iter_link_const,
    "consent-link": solve_consent_link,
    "consent-agent-branch": solve_consent_agent_const_branch,
    "consent-agent-subsetcover": solve_consent_agent_const_subsetcover,
    "consent-agent-dest": solve_consent_agent_dest,
    "consent-agent-constdest": solve_consent_agent_constdest,
    "oracle": _link_oracle,
}


# /////////////////////////////////////////////////////////////////////////////
# Routing table: (rule family, cost model, goal) -> solver name
def route(instance, settings=None):
    """
    Name of the solver responsible for an instance.

    Parameters:
    instance : BriberyInstance
    settings : Settings or None, consulted for the |A+| cap of the
        subset-guessing consent solver

    Returns:
    A key of SOLVERS
    """
    settings = settings or DEFAULT_SETTINGS
    goal = instance.goal.kind
    if instance.rule.kind is RuleKind.CONSENT:
        if instance.cost.kind is CostKind.LINK:
            return "consent-link"
        if goal is GoalKind.CONSTRUCTIVE:
            if len(instance.goal.aplus) <= settings.max_terminals:
                return "consent-agent-subsetcover"
            return "consent-agent-branch"
        if goal is GoalKind.DESTRUCTIVE:
            return "consent-agent-dest"
        return "consent-agent-constdest"

    if instance.cost.kind is CostKind.AGENT:
        return "iter-agent"
    if goal is GoalKind.DESTRUCTIVE:
        return "iter-link-dest"
    if goal is GoalKind.EXACT:
        return "iter-link-exact"
    if goal is GoalKind.CONSTRUCTIVE:
        return "iter-link-const"
    return "oracle"


# /////////////////////////////////////////////////////////////////////////////
# Solve an instance with the routed (or a named) solver
def dispatch(instance, settings=None, algorithm="auto"):
    """
    Solve a bribery instance.

    Parameters:
    instance : BriberyInstance
    settings : Settings or None
    algorithm : "auto" to follow the routing table, or a key of SOLVERS

    Returns:
    SolveResult; a solver that does not cover the instance, or whose
    parameter cap is exceeded, yields status UNSUPPORTED

    Raises:
    ValueError for an unknown algorithm name
    """
    settings = settings or DEFAULT_SETTINGS
    if algorithm == "auto":
        algorithm = route(instance, settings)
    elif algorithm not in SOLVERS:
        raise ValueError(f"Unknown algorithm '{algorithm}', expected 'auto' or one of {sorted(SOLVERS)}")

    logger.info(
        "%s / %s prices / %s goal, n = %d: using %s",
        instance.rule,
        instance.cost.kind.value,
        instance.goal.kind.value,
        instance.n,
        algorithm,
    )
    try:
        return SOLVERS[algorithm](instance, settings)
    except (Unsupported, TooManyTerminals, TooManyTargets, InstanceTooLarge) as e:
        logger.info("%s cannot solve this instance: %s", algorithm, e)
        return SolveResult.unsupported(str(e))
