"""Command-line front-end: parse inputs, dispatch to an engine, report.

Commands: check (emptiness of the valuation set at a threshold), minset
(minimal satisfying valuations), member (one valuation), prob (exact
reachability probability), and oracle utilities (sample, lasso-eval,
gen3sat).  Output is line-oriented "key: value" text; with --format
machine the bare result is repeated between BEGIN-RESULT/END-RESULT.

Exit codes: 0 decided, 2 usage error, 3 resource cap exceeded,
4 input parse error, 5 unsupported fragment/threshold combination.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import buchi, diamond, fixtures, fx, oracle, reach
from .formula import (
    FormulaError, FragmentClass, FragmentError, ParseError, classify,
    parse_formula, substitute, to_nnf, variables,
)
from .markov import ChainError, parse_chain
from .oracle import LassoWord
from .valuation import MinimalSet, ValuationError, Valuation, parse_valuation

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RESOURCE = 3
EXIT_PARSE = 4
EXIT_FRAGMENT = 5


class UsageError(Exception):
    pass


def _build_parser():
    p = argparse.ArgumentParser(
        prog="pltlcheck",
        description="Parametric LTL model checking for finite Markov chains")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, chain=True):
        if chain:
            sp.add_argument("--chain", required=True, help=".dtmc file")
        sp.add_argument("--formula", help="formula text")
        sp.add_argument("--formula-file", help="file containing the formula")
        sp.add_argument("--format", choices=("text", "machine"),
                        default="text")
        sp.add_argument("--max-product-nodes", type=int,
                        default=diamond.DEFAULT_MAX_PRODUCT_NODES)
        sp.add_argument("--emit-automaton", metavar="PATH")

    for name in ("check", "minset"):
        sp = sub.add_parser(name)
        common(sp)
        sp.add_argument("--threshold", default=">0",
                        help='one of ">0", "=1", ">=p" (p rational)')
        sp.add_argument("--witness", action="store_true")

    sp = sub.add_parser("member")
    common(sp)
    sp.add_argument("--threshold", default=">0")
    sp.add_argument("--valuation", required=True)

    sp = sub.add_parser("prob")
    common(sp)
    sp.add_argument("--valuation", required=True)

    sp = sub.add_parser("oracle")
    osub = sp.add_subparsers(dest="oracle_command", required=True)

    sp = osub.add_parser("sample")
    common(sp)
    sp.add_argument("--valuation", default="")
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--horizon", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)

    sp = osub.add_parser("lasso-eval")
    common(sp, chain=False)
    sp.add_argument("--valuation", default="")
    sp.add_argument("--stem", default="",
                    help="semicolon-separated positions of comma-separated atoms")
    sp.add_argument("--loop", required=True)

    sp = osub.add_parser("gen3sat")
    sp.add_argument("--cnf", required=True, help="DIMACS-like CNF file")
    sp.add_argument("--format", choices=("text", "machine"), default="text")
    return p


def _read_formula(args):
    if args.formula and args.formula_file:
        raise UsageError("give either --formula or --formula-file, not both")
    if args.formula:
        return parse_formula(args.formula)
    if args.formula_file:
        with open(args.formula_file) as fh:
            return parse_formula(fh.read())
    raise UsageError("a formula is required (--formula or --formula-file)")


def _read_chain(args):
    with open(args.chain) as fh:
        return parse_chain(fh.read())


def _parse_threshold(text):
    text = text.strip().replace(" ", "")
    if text == ">0":
        return ("pos", None)
    if text == "=1":
        return ("as1", None)
    if text.startswith(">="):
        try:
            p = Fraction(text[2:])
        except (ValueError, ZeroDivisionError):
            raise UsageError("bad threshold probability %r" % text[2:])
        if not 0 < p < 1:
            raise UsageError("threshold probability must satisfy 0 < p < 1")
        return ("geq", p)
    raise UsageError('threshold must be ">0", "=1" or ">=p"')


def _parse_letters(text):
    if not text:
        return ()
    return tuple(frozenset(a for a in pos.split(",") if a)
                 for pos in text.split(";"))


class Report:
    def __init__(self, fmt):
        self.fmt = fmt
        self.lines = []
        self.result = []

    def add(self, key, value):
        self.lines.append("%s: %s" % (key, value))

    def set_result(self, lines):
        self.result = list(lines)

    def emit(self, out):
        for line in self.lines:
            print(line, file=out)
        if self.fmt == "machine":
            print("BEGIN-RESULT", file=out)
            for line in self.result:
                print(line, file=out)
            print("END-RESULT", file=out)


def _genbuchi_pairs(phi):
    from .formula import _genbuchi_conjuncts
    return [(c.child.bound.name, c.child.child.name)
            for c in _genbuchi_conjuncts(phi)]


def _maybe_emit(args, checker):
    if getattr(args, "emit_automaton", None) and checker is not None:
        with open(args.emit_automaton, "w") as fh:
            fh.write(diamond.format_automaton(checker.g))
            fh.write(diamond.format_automaton(checker.u))


def _single_minimum(kind, chain, phi, fragment, p):
    """Minimal bound for the one-variable Reach/Buchi fragments."""
    if fragment == FragmentClass.REACH:
        prop = phi.child.name
        if kind == "pos":
            return reach.min_val_pos(chain, prop)
        if kind == "as1":
            return reach.min_val_as1(chain, prop)
        return reach.min_val_geq(chain, prop, p)
    prop = phi.child.child.name
    if kind == "pos":
        return buchi.min_val_pos_buchi(chain, prop)
    return buchi.min_val_as1_buchi(chain, prop)


def _run_check(args, rep):
    chain = _read_chain(args)
    phi = to_nnf(_read_formula(args))
    kind, p = _parse_threshold(args.threshold)
    fragment = classify(phi)
    rep.add("fragment", fragment)
    rep.add("threshold", args.threshold.strip())
    if kind == "geq" and fragment != FragmentClass.REACH:
        raise FragmentError(
            'threshold ">=p" is only supported for single reachability '
            'formulas F[<=x] a; use ">0" or "=1" here')
    checker = None
    if fragment in (FragmentClass.REACH, FragmentClass.BUCHI):
        n0 = _single_minimum(kind, chain, phi, fragment, p)
        empty = n0 is None
        if not empty:
            rep.add("minimum", n0)
    elif fragment == FragmentClass.GENERALIZED_BUCHI:
        pairs = _genbuchi_pairs(phi)
        if kind == "pos":
            empty = buchi.emptiness_pos_genbuchi(chain, [a for _, a in pairs])
        else:
            names = variables(phi)
            ms = buchi.min_set_as1_genbuchi(chain, pairs, names)
            empty = len(ms) == 0
            if not empty:
                rep.add("minimum", str(ms.valuations()[0]))
    elif fragment == FragmentClass.FX and kind == "pos":
        empty, witness_val, path = fx.emptiness_pos_fx(chain, phi)
        if not empty:
            rep.add("witness-valuation",
                    str(Valuation(witness_val)))
            if args.witness and path is not None:
                rep.add("witness-path", " ".join(map(str, path)))
    else:
        checker = diamond.DiamondChecker(phi, args.max_product_nodes)
        if kind == "pos":
            empty = checker.emptiness_pos(chain)
        else:
            empty = checker.emptiness_as1(chain)
        if not empty:
            rep.add("witness-valuation",
                    str(Valuation(checker._uniform(checker.vbar(chain)))))
        rep.add("product-nodes", checker.stats["product_nodes"])
    _maybe_emit(args, checker)
    rep.add("verdict", "empty" if empty else "nonempty")
    rep.set_result(["empty" if empty else "nonempty"])


def _run_minset(args, rep):
    chain = _read_chain(args)
    phi = to_nnf(_read_formula(args))
    kind, p = _parse_threshold(args.threshold)
    fragment = classify(phi)
    rep.add("fragment", fragment)
    rep.add("threshold", args.threshold.strip())
    if kind == "geq" and fragment != FragmentClass.REACH:
        raise FragmentError(
            'threshold ">=p" is only supported for single reachability '
            'formulas F[<=x] a; use ">0" or "=1" here')
    names = variables(phi)
    if not names:
        raise UsageError("formula has no parameter variables")
    checker = None
    if fragment in (FragmentClass.REACH, FragmentClass.BUCHI):
        n0 = _single_minimum(kind, chain, phi, fragment, p)
        ms = MinimalSet(names) if n0 is None else MinimalSet(names, [(n0,)])
    elif fragment == FragmentClass.GENERALIZED_BUCHI and kind == "as1":
        ms = buchi.min_set_as1_genbuchi(chain, _genbuchi_pairs(phi), names)
    elif fragment == FragmentClass.GENERALIZED_BUCHI:
        pairs = _genbuchi_pairs(phi)
        checker = diamond.DiamondChecker(phi, args.max_product_nodes)

        def point_oracle(point):
            return checker.check_pos(chain, dict(zip(names, point)))

        ms = buchi.min_set_pos_genbuchi(chain, pairs, point_oracle, names)
    elif fragment == FragmentClass.FX:
        checker = diamond.DiamondChecker(phi, args.max_product_nodes)
        ms = fx.min_set_fx(chain, phi, kind, checker)
    else:
        checker = diamond.DiamondChecker(phi, args.max_product_nodes)
        ms = checker.min_set(chain, kind)
    if checker is not None:
        rep.add("oracle-calls", checker.stats["queries"])
    _maybe_emit(args, checker)
    rep.add("cardinality", len(ms))
    for v in ms.valuations():
        rep.add("minimal", v)
    rep.set_result([str(v) for v in ms.valuations()])


def _run_member(args, rep):
    chain = _read_chain(args)
    phi = to_nnf(_read_formula(args))
    kind, p = _parse_threshold(args.threshold)
    fragment = classify(phi)
    val = parse_valuation(args.valuation)
    missing = [x for x in variables(phi) if x not in val]
    if missing:
        raise UsageError("valuation misses variables: %s" % ", ".join(missing))
    rep.add("fragment", fragment)
    rep.add("threshold", args.threshold.strip())
    rep.add("valuation", val)
    if kind == "geq" and fragment != FragmentClass.REACH:
        raise FragmentError(
            'threshold ">=p" is only supported for single reachability '
            'formulas F[<=x] a; use ">0" or "=1" here')
    checker = None
    if fragment == FragmentClass.REACH:
        prop = phi.child.name
        n = val[phi.bound.name]
        if kind == "pos":
            verdict = reach.check_pos(chain, prop, n)
        elif kind == "as1":
            verdict = reach.check_as1(chain, prop, n)
        else:
            verdict = reach.check_geq(chain, prop, p, n)
    elif fragment == FragmentClass.BUCHI:
        prop = phi.child.child.name
        n = val[phi.child.bound.name]
        if kind == "pos":
            verdict = buchi.check_pos(chain, prop, n)
        else:
            verdict = buchi.check_as1(chain, prop, n)
    else:
        checker = diamond.DiamondChecker(phi, args.max_product_nodes)
        if kind == "pos":
            verdict = checker.check_pos(chain, val)
        else:
            verdict = checker.check_as1(chain, val)
    _maybe_emit(args, checker)
    rep.add("member", "true" if verdict else "false")
    rep.set_result(["true" if verdict else "false"])


def _run_prob(args, rep):
    chain = _read_chain(args)
    phi = to_nnf(_read_formula(args))
    fragment = classify(phi)
    if fragment != FragmentClass.REACH:
        raise FragmentError(
            "exact probabilities are only computed for single reachability "
            "formulas F[<=x] a")
    val = parse_valuation(args.valuation)
    name = phi.bound.name
    if name not in val:
        raise UsageError("valuation misses variable %r" % name)
    from .markov import bounded_reach_prob
    prop = phi.child.name
    value = bounded_reach_prob(chain, chain.states_with(prop), val[name])
    rep.add("fragment", fragment)
    rep.add("valuation", val)
    rep.add("probability", value)
    rep.set_result([str(value)])


def _run_oracle_sample(args, rep):
    chain = _read_chain(args)
    phi = to_nnf(_read_formula(args))
    val = parse_valuation(args.valuation)
    ground = substitute(phi, val)
    frac = oracle.sample_lower_bound(chain, ground, args.samples,
                                     args.horizon, args.seed)
    rep.add("samples", args.samples)
    rep.add("horizon", args.horizon)
    rep.add("seed", args.seed)
    rep.add("rng", "python-random-mersenne-twister")
    rep.add("certain-fraction", frac)
    rep.add("positive-probability-certified",
            "yes" if frac > 0 else "inconclusive")
    rep.set_result([str(frac)])


def _run_oracle_lasso(args, rep):
    phi = to_nnf(_read_formula(args))
    val = parse_valuation(args.valuation)
    ground = substitute(phi, val)
    word = LassoWord(_parse_letters(args.stem), _parse_letters(args.loop))
    verdict = oracle.eval_lasso(word, ground)
    rep.add("verdict", "true" if verdict else "false")
    rep.set_result(["true" if verdict else "false"])


def _run_oracle_gen3sat(args, rep):
    with open(args.cnf) as fh:
        clauses, n_vars = oracle.parse_dimacs(fh.read())
    chain, phi = oracle.gen_3sat_fixture(clauses, n_vars)
    rep.add("variables", n_vars)
    rep.add("clauses", len(clauses))
    rep.add("formula", phi)
    text = fixtures.chain_text(chain)
    rep.set_result(text.splitlines())
    if rep.fmt == "text":
        rep.lines.extend(text.splitlines())


def run(argv, out=sys.stdout, err=sys.stderr):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    rep = Report(args.format)
    try:
        if args.command == "check":
            _run_check(args, rep)
        elif args.command == "minset":
            _run_minset(args, rep)
        elif args.command == "member":
            _run_member(args, rep)
        elif args.command == "prob":
            _run_prob(args, rep)
        elif args.command == "oracle":
            if args.oracle_command == "sample":
                _run_oracle_sample(args, rep)
            elif args.oracle_command == "lasso-eval":
                _run_oracle_lasso(args, rep)
            else:
                _run_oracle_gen3sat(args, rep)
    except UsageError as exc:
        print("usage error: %s" % exc, file=err)
        return EXIT_USAGE
    except FragmentError as exc:
        print("fragment error: %s" % exc, file=err)
        return EXIT_FRAGMENT
    except (ParseError, FormulaError, ChainError, ValuationError,
            ValueError) as exc:
        print("parse error: %s" % exc, file=err)
        return EXIT_PARSE
    except diamond.ResourceLimitError as exc:
        print("resource limit: %s" % exc, file=err)
        return EXIT_RESOURCE
    except OSError as exc:
        print("usage error: %s" % exc, file=err)
        return EXIT_USAGE
    rep.emit(out)
    return EXIT_OK


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
