import random

import pytest

from pltlcheck.valuation import (
    MinimalSet, Valuation, ValuationError, bisection_min_set, box_volume,
    iter_box, parse_valuation,
)


def test_valuation_basics():
    v = parse_valuation("y=5, x=3")
    assert v.names == ("x", "y")
    assert v["x"] == 3 and v["y"] == 5
    assert str(v) == "x=3,y=5"
    assert v == Valuation({"x": 3, "y": 5})


def test_valuation_order():
    a = Valuation({"x": 1, "y": 4})
    b = Valuation({"x": 2, "y": 4})
    assert a.leq(b) and not b.leq(a)
    with pytest.raises(ValuationError):
        a.leq(Valuation({"z": 0, "y": 0}))


def test_parse_valuation_errors():
    for bad in ("x", "x=", "=3", "x=-1", "x=1,x=2", "x=1.5"):
        with pytest.raises(ValuationError):
            parse_valuation(bad)


def test_iter_box_lex_order():
    pts = list(iter_box((0, 0), (1, 2)))
    assert pts == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]
    assert list(iter_box((2,), (1,))) == []
    assert box_volume((0, 0), (1, 2)) == 6
    assert box_volume((3,), (2,)) == 0


def test_minimal_set_insert_and_member():
    ms = MinimalSet(("x", "y"))
    assert ms.insert((2, 3))
    assert not ms.insert((3, 3))       # dominated
    assert ms.insert((1, 5))
    assert ms.insert((0, 9))
    assert list(ms) == [(0, 9), (1, 5), (2, 3)]
    assert ms.member((2, 3)) and ms.member((5, 5))
    assert not ms.member((1, 4))
    # A dominating insert evicts.
    assert ms.insert((0, 4))
    assert list(ms) == [(0, 4), (2, 3)]


def _reference_min_set(oracle, lo, hi):
    out = []
    for p in iter_box(lo, hi):
        if oracle(p) and not any(all(a <= b for a, b in zip(q, p))
                                 for q in out):
            out.append(p)
    return sorted(out)


def test_bisection_matches_brute_force():
    rng = random.Random(11)
    for trial in range(60):
        d = rng.randint(1, 3)
        hi = tuple(rng.randint(0, 8) for _ in range(d))
        k = rng.randint(0, 3)
        thresholds = [tuple(rng.randint(0, h) for h in hi) for _ in range(k)]

        def oracle(p):
            return any(all(a <= b for a, b in zip(t, p)) for t in thresholds)

        names = tuple("x%d" % i for i in range(d))
        got = bisection_min_set(oracle, (0,) * d, hi, names)
        assert list(got) == _reference_min_set(oracle, (0,) * d, hi)


def test_bisection_monotone_halfspace():
    # Single linear threshold in 2d.
    def oracle(p):
        return 2 * p[0] + p[1] >= 10

    got = bisection_min_set(oracle, (0, 0), (20, 20), ("x", "y"))
    assert list(got) == _reference_min_set(oracle, (0, 0), (20, 20))


def test_bisection_empty_and_everything():
    got = bisection_min_set(lambda p: False, (0, 0), (9, 9), ("x", "y"))
    assert len(got) == 0
    got = bisection_min_set(lambda p: True, (0, 0), (9, 9), ("x", "y"))
    assert list(got) == [(0, 0)]
