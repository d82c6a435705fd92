"""Independent validation tools: prefix/lasso evaluation, sampling, scans.

Everything here avoids the automata pipeline on purpose: the prefix and
lasso evaluators work directly off the semantics, the sampler only
certifies what a finite prefix already decides, and the brute-force scan
exercises search logic against exhaustive enumeration.  The 3-SAT
fixture generator produces chain/formula pairs whose emptiness verdict
is known from propositional satisfiability.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .formula import (
    And, Atom, Always, BoundedAlways, BoundedEventually, ConstBound,
    Eventually, FormulaError, NegAtom, Next, Or, Release, Until, VarBound,
    variables,
)
from .markov import ChainError, MarkovChain
from .valuation import MinimalSet

CERTAIN_TRUE = "certainly-true"
CERTAIN_FALSE = "certainly-false"
UNKNOWN = "unknown"

MAX_LASSO_CONSTANT = 10 ** 5


@dataclass(frozen=True)
class LassoWord:
    """The ultimately periodic word stem + loop repeated forever."""
    stem: tuple
    loop: tuple

    def __post_init__(self):
        if not self.loop:
            raise ValueError("lasso loop must be nonempty")


def _not3(v):
    if v == UNKNOWN:
        return UNKNOWN
    return CERTAIN_FALSE if v == CERTAIN_TRUE else CERTAIN_TRUE


def _and3(a, b):
    if a == CERTAIN_FALSE or b == CERTAIN_FALSE:
        return CERTAIN_FALSE
    if a == CERTAIN_TRUE and b == CERTAIN_TRUE:
        return CERTAIN_TRUE
    return UNKNOWN


def _or3(a, b):
    return _not3(_and3(_not3(a), _not3(b)))


def eval_prefix(prefix, phi):
    """Three-valued verdict of a variable-free NNF formula on a prefix.

    certainly-true / certainly-false mean every / no infinite extension
    of the prefix satisfies the formula.
    """
    prefix = [frozenset(p) for p in prefix]
    memo = {}

    def ev(i, f):
        key = (i, id(f))
        if key in memo:
            return memo[key]
        memo[key] = r = _ev(i, f)
        return r

    def _ev(i, f):
        if i >= len(prefix):
            return UNKNOWN
        if isinstance(f, Atom):
            return CERTAIN_TRUE if f.name in prefix[i] else CERTAIN_FALSE
        if isinstance(f, NegAtom):
            return CERTAIN_FALSE if f.name in prefix[i] else CERTAIN_TRUE
        if isinstance(f, And):
            return _and3(ev(i, f.left), ev(i, f.right))
        if isinstance(f, Or):
            return _or3(ev(i, f.left), ev(i, f.right))
        if isinstance(f, Next):
            return ev(i + 1, f.child)
        if isinstance(f, Until):
            return _or3(ev(i, f.right),
                        _and3(ev(i, f.left), ev(i + 1, f)))
        if isinstance(f, Release):
            return _and3(ev(i, f.right),
                         _or3(ev(i, f.left), ev(i + 1, f)))
        if isinstance(f, Eventually):
            return _or3(ev(i, f.child), ev(i + 1, f))
        if isinstance(f, Always):
            return _and3(ev(i, f.child), ev(i + 1, f))
        if isinstance(f, BoundedEventually):
            c = _const(f)
            out = CERTAIN_FALSE if i + c < len(prefix) else UNKNOWN
            for j in range(i, min(i + c, len(prefix) - 1) + 1):
                out = _or3(out, ev(j, f.child))
            return out
        if isinstance(f, BoundedAlways):
            c = _const(f)
            out = CERTAIN_TRUE if i + c < len(prefix) else UNKNOWN
            for j in range(i, min(i + c, len(prefix) - 1) + 1):
                out = _and3(out, ev(j, f.child))
            return out
        raise FormulaError("unsupported node %r" % (f,))

    return ev(0, phi)


def _const(f):
    if isinstance(f.bound, VarBound):
        raise FormulaError("formula must be variable-free; substitute first")
    if f.bound.value > MAX_LASSO_CONSTANT:
        raise FormulaError("constant bound %d exceeds the evaluator cap"
                           % f.bound.value)
    return f.bound.value


def eval_lasso(word, phi):
    """Exact verdict of a variable-free NNF formula on stem + loop^omega.

    Subformulas are evaluated over the finitely many positions of the
    lasso graph; until/eventually use least fixpoints, release/always
    greatest fixpoints, and bounded operators walk their window.
    """
    stem = [frozenset(p) for p in word.stem]
    loop = [frozenset(p) for p in word.loop]
    letters = stem + loop
    n = len(letters)
    succ = list(range(1, n)) + [len(stem)]

    def table(f):
        if isinstance(f, Atom):
            return [f.name in l for l in letters]
        if isinstance(f, NegAtom):
            return [f.name not in l for l in letters]
        if isinstance(f, And):
            a, b = table(f.left), table(f.right)
            return [x and y for x, y in zip(a, b)]
        if isinstance(f, Or):
            a, b = table(f.left), table(f.right)
            return [x or y for x, y in zip(a, b)]
        if isinstance(f, Next):
            a = table(f.child)
            return [a[succ[i]] for i in range(n)]
        if isinstance(f, Until):
            return _lfp(table(f.left), table(f.right))
        if isinstance(f, Eventually):
            return _lfp([True] * n, table(f.child))
        if isinstance(f, Release):
            return _gfp(table(f.left), table(f.right))
        if isinstance(f, Always):
            return _gfp([False] * n, table(f.child))
        if isinstance(f, BoundedEventually):
            c = _const(f)
            a = table(f.child)
            return [_window_any(a, i, c) for i in range(n)]
        if isinstance(f, BoundedAlways):
            c = _const(f)
            a = table(f.child)
            return [not _window_any([not x for x in a], i, c)
                    for i in range(n)]
        raise FormulaError("unsupported node %r" % (f,))

    def _lfp(hold, target):
        out = [False] * n
        changed = True
        while changed:
            changed = False
            for i in range(n - 1, -1, -1):
                v = target[i] or (hold[i] and out[succ[i]])
                if v and not out[i]:
                    out[i] = True
                    changed = True
        return out

    def _gfp(release, target):
        out = [True] * n
        changed = True
        while changed:
            changed = False
            for i in range(n - 1, -1, -1):
                v = target[i] and (release[i] or out[succ[i]])
                if not v and out[i]:
                    out[i] = False
                    changed = True
        return out

    def _window_any(a, i, c):
        j = i
        for _ in range(c + 1):
            if a[j]:
                return True
            j = succ[j]
        return False

    return table(phi)[0]


def sample_lower_bound(chain, phi, samples, horizon, seed):
    """Fraction of sampled prefixes on which the formula is certainly true.

    One-sided: a positive fraction proves the satisfaction probability
    is positive, a zero fraction proves nothing.  `phi` must be
    variable-free.  Deterministic for a fixed seed (Mersenne Twister via
    random.Random).
    """
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    rng = random.Random(seed)
    hits = 0
    for _ in range(samples):
        s = chain.init
        prefix = [chain.labels[s]]
        for _ in range(horizon - 1):
            u = rng.random()
            acc = 0.0
            nxt = None
            for t in sorted(chain.successors(s)):
                acc += float(chain.rows[s][t])
                nxt = t
                if u < acc:
                    break
            s = nxt
            prefix.append(chain.labels[s])
        if eval_prefix(prefix, phi) == CERTAIN_TRUE:
            hits += 1
    return Fraction(hits, samples)


MAX_SCAN_POINTS = 2 * 10 ** 6


def brute_force_min_set(chain, phi, bound, oracle):
    """Exhaustive minimal-valuation scan over {0..bound}^d.

    `oracle(valuation_dict)` decides membership; every point of the box
    is visited in lexicographic order unless already dominated.
    """
    names = variables(phi)
    d = len(names)
    if d == 0:
        raise FormulaError("formula has no parameter variables")
    if (bound + 1) ** d > MAX_SCAN_POINTS:
        raise ValueError("scan box exceeds %d points" % MAX_SCAN_POINTS)
    out = MinimalSet(names)
    from .valuation import iter_box
    for point in iter_box((0,) * d, (bound,) * d):
        if out.member(point):
            continue
        if oracle(dict(zip(names, point))):
            out.insert(point)
    return out


def gen_3sat_fixture(clauses, n_vars):
    """Chain and formula encoding a CNF so that satisfiability matches
    nonemptiness of the positive-probability valuation set.

    `clauses` is a list of lists of nonzero signed ints (DIMACS style).
    The chain walks variable gadgets in order, committing each variable
    to true or false with probability 1/2; clause labels sit on the
    committed literal states and the formula asks every clause label to
    be seen within a parametric bound.
    """
    if n_vars < 1:
        raise ValueError("need at least one variable")
    if not clauses:
        raise ValueError("need at least one clause")
    for cl in clauses:
        for lit in cl:
            if lit == 0 or abs(lit) > n_vars:
                raise ValueError("literal %d out of range" % lit)
    half = Fraction(1, 2)
    m = 3 * n_vars + 1
    pos = lambda i: n_vars + i          # state for t_i, 1-based i
    neg = lambda i: 2 * n_vars + i      # state for not t_i
    rows = [dict() for _ in range(m)]
    labels = [set() for _ in range(m)]
    for i in range(n_vars):
        rows[i][pos(i + 1)] = half
        rows[i][neg(i + 1)] = half
    for i in range(1, n_vars + 1):
        rows[pos(i)][i] = Fraction(1)
        rows[neg(i)][i] = Fraction(1)
    rows[n_vars][n_vars] = Fraction(1)
    for ci, cl in enumerate(clauses, start=1):
        name = "c%d" % ci
        for lit in cl:
            labels[pos(lit) if lit > 0 else neg(-lit)].add(name)
    chain = MarkovChain(m, 0, rows, labels)
    phi = None
    for ci in range(1, len(clauses) + 1):
        conj = BoundedEventually(VarBound("y%d" % ci), Atom("c%d" % ci))
        phi = conj if phi is None else And(phi, conj)
    return chain, phi


def sat_brute_force(clauses, n_vars):
    """Plain 2^n satisfiability scan for validating the fixture."""
    for mask in range(2 ** n_vars):
        ok = True
        for cl in clauses:
            if not any((lit > 0) == bool(mask >> (abs(lit) - 1) & 1)
                       for lit in cl):
                ok = False
                break
        if ok:
            return True
    return False


def parse_dimacs(text):
    """Parse a DIMACS-like CNF: 'p cnf <vars> <clauses>' then clause lines."""
    n_vars = None
    clauses = []
    current = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError("bad DIMACS header %r" % line)
            n_vars = int(parts[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                current.append(lit)
    if current:
        clauses.append(current)
    if n_vars is None:
        raise ValueError("missing DIMACS header")
    return clauses, n_vars
