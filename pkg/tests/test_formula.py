import pytest

from pltlcheck.formula import (
    Always, And, Atom, BoundedAlways, BoundedEventually, ConstBound,
    Eventually, FragmentClass, NegAtom, Next, Or, ParseError, Release, Until,
    VarBound, atoms, classify, closure, parse_formula, rename_apart,
    rewrite_constant_bounds, size, strip_params, substitute, to_nnf,
    variables,
)


def test_parse_atoms_and_connectives():
    phi = parse_formula("a & !b | X c")
    assert phi == Or(And(Atom("a"), Not_(Atom("b"))), Next(Atom("c")))


def Not_(f):
    from pltlcheck.formula import Not
    return Not(f)


def test_parse_precedence():
    # U binds tighter than &, & tighter than |.
    phi = parse_formula("a U b & c | d")
    assert isinstance(phi, Or)
    assert isinstance(phi.left, And)
    assert isinstance(phi.left.left, Until)


def test_parse_until_right_assoc():
    phi = parse_formula("a U b U c")
    assert phi == Until(Atom("a"), Until(Atom("b"), Atom("c")))


def test_parse_bounded():
    phi = parse_formula("F[<=x] a & F[<=3] b & G[<=2] c")
    parts = []

    def walk(f):
        if isinstance(f, And):
            walk(f.left)
            walk(f.right)
        else:
            parts.append(f)

    walk(phi)
    assert parts[0] == BoundedEventually(VarBound("x"), Atom("a"))
    assert parts[1] == BoundedEventually(ConstBound(3), Atom("b"))
    assert parts[2] == BoundedAlways(ConstBound(2), Atom("c"))


def test_parse_errors():
    for bad in ("", "a &", "(a", "F[<=] a", "G[<=x] a", "a b", "U a"):
        with pytest.raises(ParseError):
            parse_formula(bad)


def test_roundtrip_str():
    for text in ("a U (b R !c)", "G F[<=x] a", "X (a | b) & F c"):
        phi = parse_formula(text)
        assert parse_formula(str(phi)) == phi


def test_to_nnf_pushes_negation():
    phi = to_nnf(parse_formula("!(a U b)"))
    assert phi == Release(NegAtom("a"), NegAtom("b"))
    phi = to_nnf(parse_formula("!F[<=2] a"))
    assert phi == BoundedAlways(ConstBound(2), NegAtom("a"))
    phi = to_nnf(parse_formula("!!a"))
    assert phi == Atom("a")


def test_nnf_rejects_negated_parametric():
    from pltlcheck.formula import FormulaError
    with pytest.raises(FormulaError):
        to_nnf(parse_formula("!F[<=x] a"))


def test_variables_and_atoms():
    phi = parse_formula("F[<=y] a & F[<=x] b & F[<=y] c")
    assert variables(phi) == ["y", "x"]
    assert atoms(phi) == ["a", "b", "c"]


def test_size():
    assert size(parse_formula("a & b")) == 3
    assert size(parse_formula("G F[<=x] a")) == 3


def test_rewrite_constant_bounds():
    phi = rewrite_constant_bounds(parse_formula("F[<=2] a"))
    assert phi == Or(Atom("a"), Next(Or(Atom("a"), Next(Atom("a")))))
    psi = rewrite_constant_bounds(parse_formula("G[<=1] a"))
    assert psi == And(Atom("a"), Next(Atom("a")))
    # Parametric bounds survive untouched.
    assert rewrite_constant_bounds(parse_formula("F[<=x] a")) == \
        BoundedEventually(VarBound("x"), Atom("a"))


def test_rename_apart():
    phi = parse_formula("F[<=x] a & F[<=x] b")
    renamed, back = rename_apart(phi)
    names = variables(renamed)
    assert len(names) == 2 and len(set(names)) == 2
    assert all(back[n] == "x" for n in names)
    single, back2 = rename_apart(parse_formula("F[<=x] a"))
    assert variables(single) == ["x"]
    assert back2["x"] == "x"


def test_substitute():
    phi = parse_formula("F[<=x] a")
    assert substitute(phi, {"x": 3}) == BoundedEventually(ConstBound(3),
                                                          Atom("a"))


def test_classify():
    cases = [
        ("F[<=x] a", FragmentClass.REACH),
        ("G F[<=x] a", FragmentClass.BUCHI),
        ("G F[<=x] a & G F[<=y] b", FragmentClass.GENERALIZED_BUCHI),
        ("F[<=x] a & X F b", FragmentClass.FX),
        ("F[<=x] (a U b)", FragmentClass.DIAMOND),
        ("a U F[<=x] b", FragmentClass.DIAMOND),
    ]
    for text, expected in cases:
        assert classify(to_nnf(parse_formula(text))) == expected


def test_classify_bounded_always_is_diamond():
    phi = to_nnf(parse_formula("!F[<=3] a"))
    assert classify(phi) == FragmentClass.DIAMOND


def test_strip_params():
    phi = strip_params(parse_formula("F[<=x] a"))
    assert phi == Eventually(Atom("a"))


def test_closure_contains_subformulas():
    phi = to_nnf(parse_formula("a U (b & X c)"))
    cl = closure(phi)
    assert Atom("a") in cl and Atom("c") in cl and phi in cl
