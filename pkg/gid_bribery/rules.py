import logging
from collections import deque

import numpy as np

from gid_bribery.core import QUALIFY, RuleKind

logger = logging.getLogger(__name__)


# /////////////////////////////////////////////////////////////////////////////
# Closure of a seed set under "qualified by an already qualified agent"
def iterative_closure(profile, seeds):
    """
    Least fixpoint of the iterative qualification step from a seed set.

    Seeds count as qualified from the start; afterwards an agent joins as
    soon as some qualified agent qualifies it. This is reachability from the
    seeds in the qualification graph, computed with a worklist.

    Parameters:
    profile : QualificationProfile
    seeds : iterable of 1-based agent ids

    Returns:
    frozenset of 1-based agent ids

    Dependencies:
    - collections.deque
    """
    reached = set(seeds)
    queue = deque(reached)
    while queue:
        a = queue.popleft()
        for b in profile.qualified_targets(a):
            if b not in reached:
                reached.add(b)
                queue.append(b)
    return frozenset(reached)


def closure_rounds(profile, seeds):
    """
    Round-by-round iteration K_1, K_2, ... until two rounds agree.

    Each round adds every agent qualified by a member of the previous round.
    Returns the list of rounds; the last entry is the fixpoint.
    """
    rounds = [frozenset(seeds)]
    while True:
        previous = rounds[-1]
        step = {b for a in previous for b in profile.qualified_targets(a)}
        current = previous | step
        if current == previous:
            return rounds
        rounds.append(frozenset(current))


def matrix_closure(qualifies, seeds):
    """
    iterative_closure on a boolean qualification matrix.

    qualifies[i, j] is True when agent i+1 qualifies agent j+1; seeds and the
    result are boolean vectors over the same 0-based indexing.
    """
    reached = np.array(seeds, dtype=bool)
    frontier = reached.copy()
    while frontier.any():
        frontier = qualifies[frontier].any(axis=0) & ~reached
        reached |= frontier
    return reached


def initial_set(profile, rule):
    """K_1 of an iterative rule: self-qualifiers (LSR) or A* (CSR)."""
    if rule.kind is RuleKind.LSR:
        return profile.self_qualifiers()
    if rule.kind is RuleKind.CSR:
        return profile.qualified_by_all()
    raise ValueError(f"{rule} has no initial set")


# /////////////////////////////////////////////////////////////////////////////
# Evaluate a social rule on a profile
def evaluate(profile, rule):
    """
    Compute the set of socially qualified agents.

    Parameters:
    profile : QualificationProfile
    rule : SocialRule, validated against profile.n

    Returns:
    frozenset of 1-based agent ids

    Raises:
    InvalidRuleParameters for a consent rule with s + t > n + 2
    """
    rule.validate_for(profile.n)
    if rule.kind is RuleKind.CONSENT:
        entries = profile.entries
        qplus = (entries == QUALIFY).sum(axis=0)
        qminus = profile.n - qplus
        diag = entries.diagonal()
        members = ((diag == QUALIFY) & (qplus >= rule.s)) | ((diag != QUALIFY) & (qminus <= rule.t - 1))
        return frozenset(int(i) + 1 for i, flag in enumerate(members) if flag)
    return iterative_closure(profile, initial_set(profile, rule))


# /////////////////////////////////////////////////////////////////////////////
# Bitmask evaluation used by the exhaustive oracles
def evaluate_masks(rows, n, rule):
    """
    Evaluate a rule on a profile given as row bitmasks.

    rows[i] has bit j set when agent i+1 qualifies agent j+1. Returns the
    qualified set as a bitmask with the same bit layout.
    """
    full = (1 << n) - 1
    if rule.kind is RuleKind.CONSENT:
        result = 0
        for j in range(n):
            bit = 1 << j
            qplus = sum(1 for r in rows if r & bit)
            if rows[j] & bit:
                ok = qplus >= rule.s
            else:
                ok = n - qplus <= rule.t - 1
            if ok:
                result |= bit
        return result

    if rule.kind is RuleKind.LSR:
        seeds = 0
        for i, r in enumerate(rows):
            if r >> i & 1:
                seeds |= 1 << i
    else:
        seeds = full
        for r in rows:
            seeds &= r

    reached = seeds
    frontier = seeds
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


def mask_to_agents(mask):
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i + 1)
        mask >>= 1
        i += 1
    return frozenset(out)
