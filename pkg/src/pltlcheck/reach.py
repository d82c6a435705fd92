"""Parametric reachability: thresholds on Pr(eventually-within-x a).

For the single-variable formula "F[<=x] a" the satisfying valuations
form an upward closed subset of the naturals, so each query reduces to
one minimal value n0 (or emptiness).  Three thresholds are supported:
strictly positive probability, probability one, and >= p for a rational
p strictly between 0 and 1.
"""

from __future__ import annotations

import math
from fractions import Fraction

from . import markov


class ReachError(ValueError):
    pass


def min_val_pos(chain, name):
    """Least n with Pr(reach an a-state within n) > 0, or None.

    This is the shortest-path distance from the initial state to any
    state labeled `name`.
    """
    targets = chain.states_with(name)
    if not targets:
        return None
    dist = markov.distances_from(chain, chain.init)
    best = min(dist[t] for t in targets)
    return None if best == math.inf else best


def min_val_as1(chain, name):
    """Least n with Pr(reach an a-state within n) = 1, or None.

    Treating a-states as absorbing, the probability hits 1 at a finite
    bound iff no cycle through non-a states is reachable; the bound is
    then the longest path into the a-states.
    """
    targets = chain.states_with(name)
    if chain.init in targets:
        return 0
    # Non-target states reachable without first entering a target.
    region = set()
    frontier = [chain.init]
    while frontier:
        s = frontier.pop()
        if s in region or s in targets:
            continue
        region.add(s)
        frontier.extend(chain.successors(s))
    if _has_cycle(chain, region):
        return None
    # The region is a DAG; longest path, stepping off into a target.
    order = _topological(chain, region)
    longest = {}
    for s in reversed(order):
        best = 0
        for t in chain.successors(s):
            best = max(best, 1 if t in targets else 1 + longest[t])
        longest[s] = best
    return longest[chain.init]


def _has_cycle(chain, region):
    for s in region:
        if s in chain.successors(s):
            return True
    scc = markov._tarjan(
        max(region) + 1,
        [sorted(t for t in chain.successors(s) if t in region)
         if s in region else [] for s in range(max(region) + 1)])
    return any(len(c) > 1 and c <= region for c in scc.components)


def _topological(chain, region):
    indeg = {s: 0 for s in region}
    for s in region:
        for t in chain.successors(s):
            if t in region:
                indeg[t] += 1
    order = []
    ready = sorted(s for s in region if indeg[s] == 0)
    while ready:
        s = ready.pop()
        order.append(s)
        for t in chain.successors(s):
            if t in region:
                indeg[t] -= 1
                if indeg[t] == 0:
                    ready.append(t)
    return order


def _eventually_constant(chain, targets):
    """Does the sequence mu_n reach its limit at some finite n?

    True iff no cycle of non-target states that can still reach the
    target is reachable from the initial state.
    """
    relevant = markov.states_reaching(chain, targets)
    reachable = markov.reachable_states(chain)
    region = (relevant & reachable) - set(targets)
    if chain.init not in region and chain.init not in targets:
        return True
    if not region:
        return True
    return not _has_cycle(chain, region)


def min_val_geq(chain, name, p):
    """Least n with Pr(reach an a-state within n) >= p, or None.

    `p` must be a rational strictly between 0 and 1; comparisons are
    exact.  The bounded probabilities mu_n are nondecreasing with limit
    mu_infinity, so the search walks n upward and the emptiness test is
    a comparison against the limit.
    """
    p = Fraction(p)
    if not 0 < p < 1:
        raise ReachError("threshold must satisfy 0 < p < 1")
    targets = chain.states_with(name)
    mu_inf = markov.unbounded_reach_prob(chain, targets) if targets else Fraction(0)
    if mu_inf < p:
        return None
    if mu_inf == p and not _eventually_constant(chain, targets):
        return None
    x = [Fraction(1) if s in targets else Fraction(0) for s in range(chain.m)]
    n = 0
    while x[chain.init] < p:
        x = [Fraction(1) if s in targets
             else sum((q * x[t] for t, q in chain.rows[s].items()), Fraction(0))
             for s in range(chain.m)]
        n += 1
    return n


def emptiness_geq(chain, name, p):
    """True iff no valuation satisfies Pr(F[<=x] a) >= p."""
    return min_val_geq(chain, name, p) is None


def check_pos(chain, name, n):
    v = min_val_pos(chain, name)
    return v is not None and v <= n


def check_as1(chain, name, n):
    v = min_val_as1(chain, name)
    return v is not None and v <= n


def check_geq(chain, name, p, n):
    p = Fraction(p)
    if not 0 < p < 1:
        raise ReachError("threshold must satisfy 0 < p < 1")
    return markov.bounded_reach_prob(chain, chain.states_with(name), n) >= p
