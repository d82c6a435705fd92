"""Parametric LTL model checking for finite discrete-time Markov chains.

Decides emptiness of the set of parameter valuations under which a
formula holds with positive probability (or probability one), computes
the minimal satisfying valuations as a Pareto antichain, and answers
membership queries for single valuations.  Specialized graph algorithms
handle the reachability and repeated-reachability fragments; a general
product-automaton checker covers bounded-eventually formulas.
"""

from .formula import (
    Always, And, Atom, BoundedAlways, BoundedEventually, ConstBound,
    Eventually, FormulaError, FragmentClass, FragmentError, NegAtom, Next,
    Not, Or, ParseError, Release, Until, VarBound, atoms, classify,
    parse_formula, size, substitute, to_nnf, variables,
)
from .markov import ChainError, ChainParseError, MarkovChain, parse_chain
from .valuation import (
    MinimalSet, Valuation, ValuationError, bisection_min_set, parse_valuation,
)
from .diamond import DiamondChecker, ResourceLimitError
from .oracle import LassoWord, eval_lasso, eval_prefix, sample_lower_bound

__version__ = "0.1.0"

__all__ = [
    "Always", "And", "Atom", "BoundedAlways", "BoundedEventually",
    "ChainError", "ChainParseError", "ConstBound", "DiamondChecker",
    "Eventually", "FormulaError", "FragmentClass", "FragmentError",
    "LassoWord", "MarkovChain", "MinimalSet", "NegAtom", "Next", "Not",
    "Or", "ParseError", "Release", "ResourceLimitError", "Until",
    "Valuation", "ValuationError", "VarBound", "atoms",
    "bisection_min_set", "classify", "eval_lasso", "eval_prefix",
    "parse_chain", "parse_formula", "parse_valuation", "sample_lower_bound",
    "size", "substitute", "to_nnf", "variables",
]
