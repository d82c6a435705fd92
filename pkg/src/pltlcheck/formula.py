"""Parametric LTL formulas: AST, parser, normal forms, fragment classification.

The concrete syntax is ASCII and whitespace-insensitive:

    phi ::= ident | "!" phi | "(" phi ")" | phi "&" phi | phi "|" phi
          | "X" phi | "F" phi | "G" phi | phi "U" phi | phi "R" phi
          | "F[<=" ident "]" phi | "F[<=" nat "]" phi | "G[<=" nat "]" phi

Precedence: unary (!, X, F, G, bounded) > U, R (right-associative) > & > |.
Identifiers match [a-z][a-zA-Z0-9_]*; the temporal operator letters X, F, G,
U, R are uppercase and therefore never collide with proposition names.

Only upper bounds are supported as subscripts.  Parametric bounds are
admitted on F only; a parametric bound on G is rejected at parse time.
"""

from __future__ import annotations

from dataclasses import dataclass, field


MAX_CONSTANT_BOUND = 10**6


class FormulaError(Exception):
    """Base class for formula-level errors."""


class ParseError(FormulaError):
    def __init__(self, message, position):
        super().__init__("%s (at position %d)" % (message, position))
        self.position = position


class FragmentError(FormulaError):
    """The formula (or an operation on it) leaves the supported fragment."""


# ---------------------------------------------------------------------------
# Bounds


@dataclass(frozen=True)
class VarBound:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class ConstBound:
    value: int

    def __str__(self):
        return str(self.value)


# ---------------------------------------------------------------------------
# AST nodes.  After to_nnf, Not never appears; negation lives in NegAtom.


@dataclass(frozen=True)
class Formula:
    def __str__(self):
        return _fmt(self)


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class NegAtom(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Next(Formula):
    child: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Release(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Always(Formula):
    child: Formula


@dataclass(frozen=True)
class Eventually(Formula):
    child: Formula


@dataclass(frozen=True)
class BoundedEventually(Formula):
    bound: VarBound | ConstBound
    child: Formula


@dataclass(frozen=True)
class BoundedAlways(Formula):
    bound: ConstBound
    child: Formula


_PREC = {
    Or: 1,
    And: 2,
    Until: 3,
    Release: 3,
}


def _fmt(phi, parent_prec=0):
    if isinstance(phi, Atom):
        return phi.name
    if isinstance(phi, NegAtom):
        return "!" + phi.name
    if isinstance(phi, Not):
        return "!" + _fmt(phi.child, 9)
    if isinstance(phi, Next):
        return "X " + _fmt(phi.child, 9)
    if isinstance(phi, Eventually):
        return "F " + _fmt(phi.child, 9)
    if isinstance(phi, Always):
        return "G " + _fmt(phi.child, 9)
    if isinstance(phi, BoundedEventually):
        return "F[<=%s] %s" % (phi.bound, _fmt(phi.child, 9))
    if isinstance(phi, BoundedAlways):
        return "G[<=%s] %s" % (phi.bound, _fmt(phi.child, 9))
    op = {And: "&", Or: "|", Until: "U", Release: "R"}[type(phi)]
    prec = _PREC[type(phi)]
    s = "%s %s %s" % (_fmt(phi.left, prec + 1), op, _fmt(phi.right, prec))
    if prec < parent_prec:
        return "(" + s + ")"
    return s


def size(phi):
    """Node count of the AST."""
    if isinstance(phi, (Atom, NegAtom)):
        return 1
    if isinstance(phi, (Not, Next, Always, Eventually, BoundedEventually, BoundedAlways)):
        return 1 + size(phi.child)
    return 1 + size(phi.left) + size(phi.right)


def variables(phi):
    """Parameter variable names occurring in phi, in syntactic order."""
    out = []

    def walk(f):
        if isinstance(f, BoundedEventually) and isinstance(f.bound, VarBound):
            if f.bound.name not in out:
                out.append(f.bound.name)
        if isinstance(f, (Not, Next, Always, Eventually, BoundedEventually, BoundedAlways)):
            walk(f.child)
        elif isinstance(f, (And, Or, Until, Release)):
            walk(f.left)
            walk(f.right)

    walk(phi)
    return out


def atoms(phi):
    """Proposition names occurring in phi, sorted."""
    out = set()

    def walk(f):
        if isinstance(f, (Atom, NegAtom)):
            out.add(f.name)
        elif isinstance(f, (Not, Next, Always, Eventually, BoundedEventually, BoundedAlways)):
            walk(f.child)
        elif isinstance(f, (And, Or, Until, Release)):
            walk(f.left)
            walk(f.right)

    walk(phi)
    return sorted(out)


# ---------------------------------------------------------------------------
# Parser


class _Lexer:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def _skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self._skip_ws()
        if self.pos >= len(self.text):
            return ("eof", None, self.pos)
        c = self.text[self.pos]
        start = self.pos
        if c in "!()&|[]":
            return (c, c, start)
        if self.text.startswith("<=", self.pos):
            return ("<=", "<=", start)
        if c in "XFGUR":
            return ("op", c, start)
        if c.islower():
            j = self.pos
            while j < len(self.text) and (self.text[j].isalnum() or self.text[j] == "_"):
                j += 1
            return ("ident", self.text[self.pos:j], start)
        if c.isdigit():
            j = self.pos
            while j < len(self.text) and self.text[j].isdigit():
                j += 1
            return ("nat", self.text[self.pos:j], start)
        raise ParseError("unexpected character %r" % c, start)

    def next(self):
        kind, value, start = self.peek()
        if kind != "eof":
            width = len(value) if kind in ("ident", "nat", "<=") else 1
            self.pos = start + width
        return (kind, value, start)

    def expect(self, kind):
        k, v, p = self.next()
        if k != kind:
            raise ParseError("expected %r, found %r" % (kind, v if v else "end of input"), p)
        return v, p


def parse_formula(text):
    """Parse concrete syntax into a Formula AST.

    Raises ParseError with a position on malformed input; a parametric
    bound on G (not expressible in the supported fragment) is also a
    parse-time error.
    """
    lx = _Lexer(text)
    phi = _parse_or(lx)
    kind, value, pos = lx.peek()
    if kind != "eof":
        raise ParseError("trailing input %r" % value, pos)
    return phi


def _parse_or(lx):
    left = _parse_and(lx)
    while lx.peek()[0] == "|":
        lx.next()
        left = Or(left, _parse_and(lx))
    return left


def _parse_and(lx):
    left = _parse_ur(lx)
    while lx.peek()[0] == "&":
        lx.next()
        left = And(left, _parse_ur(lx))
    return left


def _parse_ur(lx):
    left = _parse_unary(lx)
    kind, value, _ = lx.peek()
    if kind == "op" and value in ("U", "R"):
        lx.next()
        right = _parse_ur(lx)
        return Until(left, right) if value == "U" else Release(left, right)
    return left


def _parse_bound(lx, op, pos):
    """Parse the optional [<= ...] suffix after F or G."""
    if lx.peek()[0] != "[":
        return None
    lx.next()
    lx.expect("<=")
    kind, value, vpos = lx.next()
    if kind == "ident":
        if op == "G":
            raise ParseError("parametric bound on G is not supported", vpos)
        bound = VarBound(value)
    elif kind == "nat":
        n = int(value)
        if n > MAX_CONSTANT_BOUND:
            raise ParseError("constant bound %d exceeds limit %d" % (n, MAX_CONSTANT_BOUND), vpos)
        bound = ConstBound(n)
    else:
        raise ParseError("expected variable or constant bound", vpos)
    lx.expect("]")
    return bound


def _parse_unary(lx):
    kind, value, pos = lx.next()
    if kind == "!":
        return Not(_parse_unary(lx))
    if kind == "(":
        phi = _parse_or(lx)
        lx.expect(")")
        return phi
    if kind == "ident":
        return Atom(value)
    if kind == "op":
        if value == "X":
            return Next(_parse_unary(lx))
        if value == "F":
            bound = _parse_bound(lx, "F", pos)
            child = _parse_unary(lx)
            return BoundedEventually(bound, child) if bound is not None else Eventually(child)
        if value == "G":
            bound = _parse_bound(lx, "G", pos)
            child = _parse_unary(lx)
            return BoundedAlways(bound, child) if bound is not None else Always(child)
        raise ParseError("operator %r needs a left operand" % value, pos)
    raise ParseError("expected a formula, found %r" % (value if value else "end of input"), pos)


# ---------------------------------------------------------------------------
# Normal forms


def to_nnf(phi):
    """Push negations to the atoms using the standard dualities.

    Raises FragmentError when pushing a negation through a parametric
    bound would be required (that combination leaves the supported
    fragment).
    """
    return _nnf(phi, False)


def _nnf(phi, neg):
    if isinstance(phi, Not):
        return _nnf(phi.child, not neg)
    if isinstance(phi, Atom):
        return NegAtom(phi.name) if neg else phi
    if isinstance(phi, NegAtom):
        return Atom(phi.name) if neg else phi
    if isinstance(phi, And):
        l, r = _nnf(phi.left, neg), _nnf(phi.right, neg)
        return Or(l, r) if neg else And(l, r)
    if isinstance(phi, Or):
        l, r = _nnf(phi.left, neg), _nnf(phi.right, neg)
        return And(l, r) if neg else Or(l, r)
    if isinstance(phi, Next):
        return Next(_nnf(phi.child, neg))
    if isinstance(phi, Until):
        l, r = _nnf(phi.left, neg), _nnf(phi.right, neg)
        return Release(l, r) if neg else Until(l, r)
    if isinstance(phi, Release):
        l, r = _nnf(phi.left, neg), _nnf(phi.right, neg)
        return Until(l, r) if neg else Release(l, r)
    if isinstance(phi, Eventually):
        c = _nnf(phi.child, neg)
        return Always(c) if neg else Eventually(c)
    if isinstance(phi, Always):
        c = _nnf(phi.child, neg)
        return Eventually(c) if neg else Always(c)
    if isinstance(phi, BoundedEventually):
        if neg:
            if isinstance(phi.bound, VarBound):
                raise FragmentError(
                    "negation of F[<=%s] %s is not expressible: the only "
                    "parametrized operator available is a bounded eventually"
                    % (phi.bound, phi.child))
            return BoundedAlways(phi.bound, _nnf(phi.child, True))
        return BoundedEventually(phi.bound, _nnf(phi.child, False))
    if isinstance(phi, BoundedAlways):
        c = _nnf(phi.child, neg)
        return BoundedEventually(phi.bound, c) if neg else BoundedAlways(phi.bound, c)
    raise TypeError("unknown node %r" % phi)


def rewrite_constant_bounds(phi):
    """Unfold F[<=c] / G[<=c] into nested X; output is constant-bound free."""
    if isinstance(phi, (Atom, NegAtom)):
        return phi
    if isinstance(phi, BoundedEventually) and isinstance(phi.bound, ConstBound):
        child = rewrite_constant_bounds(phi.child)
        out = child
        for _ in range(phi.bound.value):
            out = Or(child, Next(out))
        return out
    if isinstance(phi, BoundedAlways):
        child = rewrite_constant_bounds(phi.child)
        out = child
        for _ in range(phi.bound.value):
            out = And(child, Next(out))
        return out
    if isinstance(phi, BoundedEventually):
        return BoundedEventually(phi.bound, rewrite_constant_bounds(phi.child))
    if isinstance(phi, (Next, Always, Eventually)):
        return type(phi)(rewrite_constant_bounds(phi.child))
    if isinstance(phi, (And, Or, Until, Release)):
        return type(phi)(rewrite_constant_bounds(phi.left),
                         rewrite_constant_bounds(phi.right))
    raise FragmentError("cannot rewrite bounds under %r" % phi)


def rename_apart(phi):
    """Rename parameter variables so each occurs exactly once.

    Returns (formula, mapping) where mapping sends each fresh name back
    to the user-facing name it replaced.  Names that already occur once
    are kept.
    """
    counts = {}

    def count(f):
        if isinstance(f, BoundedEventually) and isinstance(f.bound, VarBound):
            counts[f.bound.name] = counts.get(f.bound.name, 0) + 1
        if isinstance(f, (Not, Next, Always, Eventually, BoundedEventually, BoundedAlways)):
            count(f.child)
        elif isinstance(f, (And, Or, Until, Release)):
            count(f.left)
            count(f.right)

    count(phi)
    seen = {}
    mapping = {}

    def walk(f):
        if isinstance(f, BoundedEventually) and isinstance(f.bound, VarBound):
            name = f.bound.name
            if counts[name] == 1:
                mapping[name] = name
                return BoundedEventually(f.bound, walk(f.child))
            k = seen.get(name, 0)
            seen[name] = k + 1
            fresh = "%s__%d" % (name, k)
            mapping[fresh] = name
            return BoundedEventually(VarBound(fresh), walk(f.child))
        if isinstance(f, (Not, Next, Always, Eventually, BoundedAlways)):
            return type(f)(walk(f.child)) if not isinstance(f, BoundedAlways) \
                else BoundedAlways(f.bound, walk(f.child))
        if isinstance(f, BoundedEventually):
            return BoundedEventually(f.bound, walk(f.child))
        if isinstance(f, (And, Or, Until, Release)):
            return type(f)(walk(f.left), walk(f.right))
        return f

    return walk(phi), mapping


# ---------------------------------------------------------------------------
# Fragment classification


class FragmentClass:
    REACH = "Reach"
    BUCHI = "Buchi"
    GENERALIZED_BUCHI = "GeneralizedBuchi"
    FX = "FX"
    DIAMOND = "Diamond"
    FULL = "FullPLTL"


def _is_reach(phi):
    return (isinstance(phi, BoundedEventually)
            and isinstance(phi.bound, VarBound)
            and isinstance(phi.child, Atom))


def _is_buchi(phi):
    return isinstance(phi, Always) and _is_reach(phi.child)


def _genbuchi_conjuncts(phi):
    """Conjunct list if phi is a conjunction of G F[<=x_i] a_i, else None."""
    if isinstance(phi, And):
        l = _genbuchi_conjuncts(phi.left)
        r = _genbuchi_conjuncts(phi.right)
        if l is None or r is None:
            return None
        return l + r
    if _is_buchi(phi):
        return [phi]
    return None


def _is_fx(phi):
    if isinstance(phi, (Atom, NegAtom)):
        return True
    if isinstance(phi, (Next, Eventually)):
        return _is_fx(phi.child)
    if isinstance(phi, BoundedEventually):
        return _is_fx(phi.child)
    if isinstance(phi, (And, Or)):
        return _is_fx(phi.left) and _is_fx(phi.right)
    return False


def _is_diamond(phi):
    if isinstance(phi, (Atom, NegAtom)):
        return True
    if isinstance(phi, (Next, Always, Eventually)):
        return _is_diamond(phi.child)
    if isinstance(phi, BoundedEventually):
        return _is_diamond(phi.child)
    if isinstance(phi, BoundedAlways):
        # Constant bounds are grammar-sanctioned; they get unfolded later.
        return _is_diamond(phi.child)
    if isinstance(phi, (And, Or, Until, Release)):
        return _is_diamond(phi.left) and _is_diamond(phi.right)
    return False


def classify(phi):
    """Most specific fragment whose grammar generates the NNF formula phi."""
    if _is_reach(phi):
        return FragmentClass.REACH
    if _is_buchi(phi):
        return FragmentClass.BUCHI
    conj = _genbuchi_conjuncts(phi)
    if conj is not None and len(conj) >= 2:
        return FragmentClass.GENERALIZED_BUCHI
    if _is_fx(phi):
        return FragmentClass.FX
    if _is_diamond(phi):
        return FragmentClass.DIAMOND
    return FragmentClass.FULL


# ---------------------------------------------------------------------------
# Remaining operations


def substitute(phi, val):
    """Replace every variable bound by its value from the valuation.

    `val` may be a Valuation or a plain dict of naturals; it must assign
    every variable of phi.
    """
    assign = val.assignment if hasattr(val, "assignment") else val

    def walk(f):
        if isinstance(f, BoundedEventually) and isinstance(f.bound, VarBound):
            name = f.bound.name
            if name not in assign:
                raise FormulaError("valuation does not assign variable %r" % name)
            return BoundedEventually(ConstBound(assign[name]), walk(f.child))
        if isinstance(f, (Atom, NegAtom)):
            return f
        if isinstance(f, BoundedEventually):
            return BoundedEventually(f.bound, walk(f.child))
        if isinstance(f, BoundedAlways):
            return BoundedAlways(f.bound, walk(f.child))
        if isinstance(f, (Not, Next, Always, Eventually)):
            return type(f)(walk(f.child))
        return type(f)(walk(f.left), walk(f.right))

    return walk(phi)


def closure(phi):
    """All subformulas of phi, including phi itself."""
    out = set()

    def walk(f):
        if f in out:
            return
        out.add(f)
        if isinstance(f, (Not, Next, Always, Eventually, BoundedEventually, BoundedAlways)):
            walk(f.child)
        elif isinstance(f, (And, Or, Until, Release)):
            walk(f.left)
            walk(f.right)

    walk(phi)
    return out


def strip_params(phi):
    """Replace every parametric bounded eventually by a plain eventually."""
    if isinstance(phi, (Atom, NegAtom)):
        return phi
    if isinstance(phi, BoundedEventually) and isinstance(phi.bound, VarBound):
        return Eventually(strip_params(phi.child))
    if isinstance(phi, BoundedEventually):
        return BoundedEventually(phi.bound, strip_params(phi.child))
    if isinstance(phi, BoundedAlways):
        return BoundedAlways(phi.bound, strip_params(phi.child))
    if isinstance(phi, (Not, Next, Always, Eventually)):
        return type(phi)(strip_params(phi.child))
    return type(phi)(strip_params(phi.left), strip_params(phi.right))
