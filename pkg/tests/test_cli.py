import io

import pytest

from pltlcheck import cli

COIN = "states 2\ninit 0\ntrans 0 0 1/2\ntrans 0 1 1/2\ntrans 1 1 1\nlabel 1 a\n"
RING = ("states 3\ninit 0\ntrans 0 1 1\ntrans 1 2 1\ntrans 2 0 1\n"
        "label 0 a\n")
DIMACS = "p cnf 2 2\n1 2 0\n-1 0\n"


@pytest.fixture
def coin(tmp_path):
    path = tmp_path / "coin.dtmc"
    path.write_text(COIN)
    return str(path)


@pytest.fixture
def ring(tmp_path):
    path = tmp_path / "ring.dtmc"
    path.write_text(RING)
    return str(path)


def _run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(argv, out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_check_reach_pos(coin):
    code, out, _ = _run(["check", "--chain", coin, "--formula", "F[<=x] a"])
    assert code == 0
    assert "fragment: Reach" in out
    assert "minimum: 1" in out
    assert "verdict: nonempty" in out


def test_check_reach_as1_empty(coin):
    code, out, _ = _run(["check", "--chain", coin, "--formula", "F[<=x] a",
                         "--threshold", "=1"])
    assert code == 0
    assert "verdict: empty" in out


def test_minset_machine_block(coin):
    code, out, _ = _run(["minset", "--chain", coin, "--formula", "F[<=x] a",
                         "--format", "machine"])
    assert code == 0
    body = out[out.index("BEGIN-RESULT"):]
    assert body.splitlines() == ["BEGIN-RESULT", "x=1", "END-RESULT"]


def test_member_geq(coin):
    code, out, _ = _run(["member", "--chain", coin, "--formula", "F[<=x] a",
                         "--threshold", ">=3/4", "--valuation", "x=2"])
    assert code == 0
    assert "member: true" in out
    code, out, _ = _run(["member", "--chain", coin, "--formula", "F[<=x] a",
                         "--threshold", ">=3/4", "--valuation", "x=1"])
    assert code == 0
    assert "member: false" in out


def test_member_buchi(ring):
    code, out, _ = _run(["member", "--chain", ring,
                         "--formula", "G F[<=x] a",
                         "--threshold", "=1", "--valuation", "x=2"])
    assert code == 0
    assert "member: true" in out


def test_prob_exact(coin):
    code, out, _ = _run(["prob", "--chain", coin, "--formula", "F[<=x] a",
                         "--valuation", "x=3"])
    assert code == 0
    assert "probability: 7/8" in out


def test_oracle_sample_deterministic(coin):
    argv = ["oracle", "sample", "--chain", coin, "--formula", "F[<=2] a",
            "--samples", "100", "--seed", "7"]
    first = _run(argv)
    second = _run(argv)
    assert first == second
    assert first[0] == 0
    assert "positive-probability-certified: yes" in first[1]


def test_oracle_lasso_eval():
    code, out, _ = _run(["oracle", "lasso-eval", "--formula", "G F[<=x] a",
                         "--valuation", "x=1", "--stem", "b",
                         "--loop", "a;"])
    assert code == 0
    assert "verdict: true" in out
    code, out, _ = _run(["oracle", "lasso-eval", "--formula", "G F[<=x] a",
                         "--valuation", "x=0", "--stem", "b",
                         "--loop", "a;"])
    assert "verdict: false" in out


def test_oracle_gen3sat(tmp_path):
    cnf = tmp_path / "f.cnf"
    cnf.write_text(DIMACS)
    code, out, _ = _run(["oracle", "gen3sat", "--cnf", str(cnf)])
    assert code == 0
    assert "states 7" in out
    assert "F[<=y1] c1" in out


def test_exit_parse_error(coin):
    code, _, err = _run(["check", "--chain", coin, "--formula", "F[<=x"])
    assert code == 4
    assert "parse error" in err


def test_exit_fragment_error(ring):
    code, _, err = _run(["check", "--chain", ring,
                         "--formula", "G F[<=x] a", "--threshold", ">=1/2"])
    assert code == 5
    assert "fragment error" in err


def test_exit_usage_errors(coin, tmp_path):
    code, _, _ = _run(["check", "--chain", str(tmp_path / "missing.dtmc"),
                       "--formula", "F[<=x] a"])
    assert code == 2
    code, _, _ = _run(["check", "--chain", coin])
    assert code == 2
    code, _, _ = _run(["check", "--chain", coin, "--no-such-flag"])
    assert code == 2


def test_exit_resource_limit(coin):
    code, _, err = _run(["member", "--chain", coin,
                         "--formula", "F[<=x] a & F[<=y] a",
                         "--valuation", "x=3,y=3",
                         "--max-product-nodes", "1"])
    assert code == 3
    assert "resource limit" in err


def test_emit_automaton(coin, tmp_path):
    path = tmp_path / "aut.txt"
    code, _, _ = _run(["member", "--chain", coin,
                       "--formula", "F[<=x] a & F[<=y] a",
                       "--valuation", "x=1,y=1",
                       "--emit-automaton", str(path)])
    assert code == 0
    text = path.read_text()
    assert "g-automaton" in text and "u-automaton" in text
