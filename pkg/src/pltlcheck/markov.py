"""Finite discrete-time Markov chains with exact rational arithmetic.

Provides the chain data model, a line-oriented text parser, SCC/BSCC
decomposition, graph distances, and reachability probabilities (bounded
and unbounded) computed over `fractions.Fraction` so that qualitative
comparisons (= 1, > 0, >= p) are exact.
"""

from __future__ import annotations

import math
from fractions import Fraction


class ChainError(ValueError):
    pass


class ChainParseError(ChainError):
    def __init__(self, message, line=None):
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
        self.line = line


class MarkovChain:
    """A chain (S, P, s0, L) with states 0..m-1.

    `rows[s]` maps each successor to its positive transition probability;
    every row sums to exactly 1.  `labels[s]` is a frozenset of
    proposition names.
    """

    def __init__(self, m, init, rows, labels):
        if m <= 0:
            raise ChainError("chain needs at least one state")
        if not 0 <= init < m:
            raise ChainError("initial state %d out of range" % init)
        if len(rows) != m or len(labels) != m:
            raise ChainError("rows/labels must cover all %d states" % m)
        self.m = m
        self.init = init
        self.rows = []
        for s, row in enumerate(rows):
            clean = {}
            for t, p in row.items():
                if not 0 <= t < m:
                    raise ChainError("state %d: successor %d out of range" % (s, t))
                p = Fraction(p)
                if p < 0 or p > 1:
                    raise ChainError("state %d: probability %s out of [0,1]" % (s, p))
                if p > 0:
                    clean[t] = p
            if sum(clean.values(), Fraction(0)) != 1:
                raise ChainError("state %d: row sums to %s, not 1"
                                 % (s, sum(clean.values(), Fraction(0))))
            self.rows.append(clean)
        self.labels = [frozenset(l) for l in labels]

    def successors(self, s):
        return self.rows[s].keys()

    def prob(self, s, t):
        return self.rows[s].get(t, Fraction(0))

    def states_with(self, name):
        """All states whose label set contains `name`."""
        return {s for s in range(self.m) if name in self.labels[s]}

    def alphabet(self):
        names = set()
        for l in self.labels:
            names |= l
        return names


def parse_chain(text):
    """Parse the .dtmc text format into a MarkovChain.

    Lines: `states <m>`, `init <id>`, `label <id> <name>...`,
    `trans <from> <to> <p>` with <p> a "num/den" or decimal literal.
    '#' starts a comment.
    """
    m = None
    init = None
    rows = None
    labels = None
    seen_init = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "states":
            if m is not None:
                raise ChainParseError("duplicate states declaration", lineno)
            if len(parts) != 2 or not parts[1].isdigit():
                raise ChainParseError("expected: states <m>", lineno)
            m = int(parts[1])
            if m <= 0:
                raise ChainParseError("state count must be positive", lineno)
            rows = [dict() for _ in range(m)]
            labels = [set() for _ in range(m)]
            continue
        if m is None:
            raise ChainParseError("states declaration must come first", lineno)
        if kind == "init":
            if seen_init:
                raise ChainParseError("duplicate init declaration", lineno)
            if len(parts) != 2 or not parts[1].isdigit():
                raise ChainParseError("expected: init <id>", lineno)
            init = int(parts[1])
            if init >= m:
                raise ChainParseError("unknown state id %d" % init, lineno)
            seen_init = True
        elif kind == "label":
            if len(parts) < 3:
                raise ChainParseError("expected: label <id> <name>...", lineno)
            if not parts[1].isdigit() or int(parts[1]) >= m:
                raise ChainParseError("unknown state id %r" % parts[1], lineno)
            labels[int(parts[1])].update(parts[2:])
        elif kind == "trans":
            if len(parts) != 4:
                raise ChainParseError("expected: trans <from> <to> <p>", lineno)
            if not parts[1].isdigit() or int(parts[1]) >= m:
                raise ChainParseError("unknown state id %r" % parts[1], lineno)
            if not parts[2].isdigit() or int(parts[2]) >= m:
                raise ChainParseError("unknown state id %r" % parts[2], lineno)
            src, dst = int(parts[1]), int(parts[2])
            try:
                p = Fraction(parts[3])
            except (ValueError, ZeroDivisionError):
                raise ChainParseError("bad probability %r" % parts[3], lineno)
            if dst in rows[src]:
                raise ChainParseError("duplicate transition %d -> %d" % (src, dst),
                                      lineno)
            rows[src][dst] = p
        else:
            raise ChainParseError("unknown directive %r" % kind, lineno)
    if m is None:
        raise ChainParseError("missing states declaration")
    if not seen_init:
        raise ChainParseError("missing init declaration")
    try:
        return MarkovChain(m, init, rows, labels)
    except ChainError as exc:
        raise ChainParseError(str(exc))


class SccDecomposition:
    """SCCs of the support digraph, listed in topological order.

    `component_of[s]` is the index of the component containing s; edges in
    the condensation only go from lower to higher indices.
    """

    def __init__(self, components, component_of, condensation, has_cycle):
        self.components = components
        self.component_of = component_of
        self.condensation = condensation
        self.has_cycle = has_cycle

    def is_bottom(self, i):
        return not self.condensation[i]

    def is_trivial(self, i):
        """A single state with no self-loop."""
        return not self.has_cycle[i]

    def bottom_components(self):
        return [i for i in range(len(self.components)) if self.is_bottom(i)]


def scc_decompose(chain):
    """Tarjan's algorithm, iterative to tolerate deep chains."""
    succ = [sorted(chain.successors(s)) for s in range(chain.m)]
    return _tarjan(chain.m, succ)


def _tarjan(n, succ):
    index = [None] * n
    lowlink = [0] * n
    on_stack = [False] * n
    stack = []
    components = []
    component_of = [None] * n
    counter = 0
    for root in range(n):
        if index[root] is not None:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = lowlink[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            while pi < len(succ[v]):
                w = succ[v][pi]
                pi += 1
                if index[w] is None:
                    work[-1] = (v, pi)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    lowlink[v] = min(lowlink[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                lowlink[u] = min(lowlink[u], lowlink[v])
            if lowlink[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                components.append(frozenset(comp))
    # Tarjan emits components in reverse topological order.
    components.reverse()
    for i, comp in enumerate(components):
        for s in comp:
            component_of[s] = i
    condensation = [set() for _ in components]
    has_cycle = [len(c) > 1 for c in components]
    for s in range(n):
        for t in succ[s]:
            if component_of[s] != component_of[t]:
                condensation[component_of[s]].add(component_of[t])
            elif s == t:
                has_cycle[component_of[s]] = True
    return SccDecomposition(components, component_of, condensation, has_cycle)


def reachable_states(chain, source=None):
    """Forward-reachable set from `source` (default: the initial state)."""
    if source is None:
        source = chain.init
    seen = {source}
    frontier = [source]
    while frontier:
        s = frontier.pop()
        for t in chain.successors(s):
            if t not in seen:
                seen.add(t)
                frontier.append(t)
    return seen


def states_reaching(chain, targets):
    """All states with some path into `targets` (backward closure)."""
    pred = [set() for _ in range(chain.m)]
    for s in range(chain.m):
        for t in chain.successors(s):
            pred[t].add(s)
    seen = set(targets)
    frontier = list(targets)
    while frontier:
        t = frontier.pop()
        for s in pred[t]:
            if s not in seen:
                seen.add(s)
                frontier.append(s)
    return seen


def distances_from(chain, source):
    """Unit-weight BFS distances from `source`; math.inf when unreachable."""
    dist = [math.inf] * chain.m
    dist[source] = 0
    frontier = [source]
    while frontier:
        nxt = []
        for s in frontier:
            for t in sorted(chain.successors(s)):
                if dist[t] > dist[s] + 1:
                    dist[t] = dist[s] + 1
                    nxt.append(t)
        frontier = nxt
    return dist


def all_pairs_distance(chain):
    """Matrix of shortest path lengths over the support digraph."""
    return [distances_from(chain, s) for s in range(chain.m)]


def bounded_reach_vector(chain, targets, n):
    """Per-state probabilities of reaching `targets` within n steps."""
    targets = set(targets)
    x = [Fraction(1) if s in targets else Fraction(0) for s in range(chain.m)]
    for _ in range(n):
        x = [Fraction(1) if s in targets
             else sum((p * x[t] for t, p in chain.rows[s].items()), Fraction(0))
             for s in range(chain.m)]
    return x

def bounded_reach_prob(chain, targets, n):
    """Exact mu_n = Pr(reach `targets` within n steps) from the initial state."""
    if n < 0:
        raise ChainError("step bound must be a natural number")
    return bounded_reach_vector(chain, targets, n)[chain.init]


def unbounded_reach_vector(chain, targets):
    """Per-state probabilities of eventually reaching `targets`.

    States that cannot reach the target get 0; for the rest a linear
    system is solved by exact Gaussian elimination.
    """
    targets = set(targets)
    relevant = states_reaching(chain, targets)
    unknowns = sorted(s for s in relevant if s not in targets)
    col = {s: i for i, s in enumerate(unknowns)}
    k = len(unknowns)
    # Row for s: x_s - sum P(s,t) x_t = sum_{t in targets} P(s,t)
    #            + 0 for unreachable successors.
    matrix = []
    for s in unknowns:
        row = [Fraction(0)] * (k + 1)
        row[col[s]] = Fraction(1)
        for t, p in chain.rows[s].items():
            if t in targets:
                row[k] += p
            elif t in col:
                row[col[t]] -= p
        matrix.append(row)
    solution = _solve(matrix, k)
    result = [Fraction(0)] * chain.m
    for s in targets:
        result[s] = Fraction(1)
    for s, i in col.items():
        result[s] = solution[i]
    return result

def unbounded_reach_prob(chain, targets):
    return unbounded_reach_vector(chain, targets)[chain.init]


def _solve(matrix, k):
    """Gaussian elimination with partial (first nonzero) pivoting.

    The reachability system is always uniquely solvable once 0-states are
    removed, so a missing pivot is an internal error.
    """
    for i in range(k):
        pivot = next(r for r in range(i, k) if matrix[r][i] != 0)
        matrix[i], matrix[pivot] = matrix[pivot], matrix[i]
        inv = 1 / matrix[i][i]
        matrix[i] = [v * inv for v in matrix[i]]
        for r in range(k):
            if r != i and matrix[r][i] != 0:
                f = matrix[r][i]
                matrix[r] = [a - f * b for a, b in zip(matrix[r], matrix[i])]
    return [matrix[i][k] for i in range(k)]


def transient_matrix(chain, targets):
    """Restriction of P to non-target states, plus the exit vector.

    Returns (states, Q, r): `states` lists the non-target states in order,
    `Q[i][j]` is the probability of moving between them, and `r[i]` the
    one-step probability of entering the (collapsed) target.
    """
    targets = set(targets)
    states = [s for s in range(chain.m) if s not in targets]
    pos = {s: i for i, s in enumerate(states)}
    q = [[Fraction(0)] * len(states) for _ in states]
    r = [Fraction(0)] * len(states)
    for s in states:
        for t, p in chain.rows[s].items():
            if t in targets:
                r[pos[s]] += p
            else:
                q[pos[s]][pos[t]] += p
    return states, q, r


def ergodicity_coefficient(q):
    """tau(Q) = 1 - min over row pairs of the sum of entrywise minima.

    Q must be substochastic with no zero row; the minimum ranges over all
    pairs including a row with itself, so tau <= 1 - min row sum.
    """
    n = len(q)
    if n == 0:
        raise ChainError("ergodicity coefficient of an empty matrix")
    for row in q:
        if all(v == 0 for v in row):
            raise ChainError("ergodicity coefficient undefined for a zero row")
    best = None
    for i in range(n):
        for j in range(i, n):
            overlap = sum((min(a, b) for a, b in zip(q[i], q[j])), Fraction(0))
            if best is None or overlap < best:
                best = overlap
    return 1 - best
