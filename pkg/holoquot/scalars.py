"""Scalar expressions: normal form, exact zero test, prefix grammar, evaluation.

Scalars are plain sympy expressions built from rationals, generator symbols,
sums, products and rational powers. Generators that appear under fractional
powers are declared positive so that sympy's power rules stay single valued.
"""

import logging
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np
import sympy

from .errors import DomainError, EvaluationError, ParseError, StructuralError

logger = logging.getLogger(__name__)

Expr = sympy.Expr
ZERO = sympy.Integer(0)
ONE = sympy.Integer(1)


@lru_cache(maxsize=None)
def generator_symbol(name: str, positive: bool = True) -> sympy.Symbol:
    if positive:
        return sympy.Symbol(name, positive=True)
    return sympy.Symbol(name, real=True)


def as_expr(value) -> Expr:
    if isinstance(value, sympy.Basic):
        return value
    if isinstance(value, Fraction):
        return sympy.Rational(value.numerator, value.denominator)
    if isinstance(value, float):
        raise StructuralError(f"floating point coefficient {value!r}; use sympy.Rational")
    return sympy.sympify(value)


def normalize(expr) -> Expr:
    """Expanded sum of monomials with merged powers of identical bases."""
    expr = as_expr(expr)
    if expr.is_Number or expr.is_Symbol:
        return expr
    return sympy.expand(sympy.powsimp(expr))


def is_zero_cheap(expr) -> bool:
    return normalize(expr) == 0


def is_zero_exact(expr) -> bool:
    expr = normalize(expr)
    if expr == 0:
        return True
    if expr.is_Number:
        return False
    try:
        simplified = sympy.simplify(expr)
    except (TypeError, ValueError, RecursionError) as exc:
        logger.debug("simplify failed on %s: %s", expr, exc)
        return False
    return simplified == 0


# ---------------------------------------------------------------- evaluation


@lru_cache(maxsize=4096)
def _compiled(exprs: Tuple[Expr, ...], symbols: Tuple[sympy.Symbol, ...]) -> Callable:
    return sympy.lambdify(symbols, list(exprs), modules="numpy")


def evaluate_many(exprs: Sequence[Expr], values: Dict[sympy.Symbol, float]) -> np.ndarray:
    """Evaluate expressions at one point; raises on unassigned or out-of-domain input."""
    exprs = tuple(as_expr(e) for e in exprs)
    if not exprs:
        return np.zeros(0)
    needed = set().union(*(e.free_symbols for e in exprs))
    missing = sorted(str(s) for s in needed if s not in values)
    if missing:
        raise EvaluationError(f"unassigned generators: {', '.join(missing)}", missing)
    symbols = tuple(sorted(needed, key=str))
    args = [float(values[s]) for s in symbols]
    for sym, arg in zip(symbols, args):
        if sym.is_positive and arg <= 0:
            raise DomainError(f"generator {sym} must be positive, got {arg}")
    with np.errstate(all="ignore"):
        raw = _compiled(exprs, symbols)(*args)
    result = np.array([complex(v) for v in raw])
    if np.any(np.abs(result.imag) > 0) or np.any(~np.isfinite(result.real)):
        raise DomainError("evaluation left the real domain", dict(zip(map(str, symbols), args)))
    return result.real


def evaluate(expr, values: Dict[sympy.Symbol, float]) -> float:
    return float(evaluate_many([expr], values)[0])


# ---------------------------------------------------------- prefix grammar


def to_prefix(expr) -> str:
    expr = as_expr(expr)
    if expr.is_Integer:
        return str(int(expr))
    if expr.is_Rational:
        return f"{expr.p}/{expr.q}"
    if expr.is_Symbol:
        return expr.name
    if expr.is_Add:
        return "(+ " + " ".join(to_prefix(a) for a in _ordered(expr.args)) + ")"
    if expr.is_Mul:
        return "(* " + " ".join(to_prefix(a) for a in _ordered(expr.args)) + ")"
    if expr.is_Pow and expr.exp.is_Rational:
        return f"(^ {to_prefix(expr.base)} {to_prefix(expr.exp)})"
    raise StructuralError(f"expression outside the scalar grammar: {expr}")


def _ordered(args) -> List[Expr]:
    return sorted(args, key=sympy.default_sort_key)


def parse_prefix(text: str, line: int = 1, symbols: Dict[str, sympy.Symbol] = None) -> Expr:
    """Parse the prefix coefficient grammar; unknown names become positive generators."""
    symbols = symbols or {}
    tokens = _tokenize(text, line)
    expr, pos = _parse(tokens, 0, text, line, symbols)
    if pos != len(tokens):
        raise ParseError(f"trailing input {tokens[pos][0]!r}", line, tokens[pos][1] + 1)
    return expr


def _tokenize(text: str, line: int) -> List[Tuple[str, int]]:
    tokens, i = [], 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "()":
            tokens.append((ch, i))
            i += 1
        else:
            start = i
            while i < len(text) and not text[i].isspace() and text[i] not in "()":
                i += 1
            tokens.append((text[start:i], start))
    if not tokens:
        raise ParseError("empty expression", line, 1)
    return tokens


def _parse(tokens, pos, text, line, symbols) -> Tuple[Expr, int]:
    if pos >= len(tokens):
        raise ParseError("unexpected end of expression", line, len(text) + 1)
    token, column = tokens[pos]
    if token == "(":
        if pos + 1 >= len(tokens):
            raise ParseError("missing operator", line, column + 2)
        op, op_col = tokens[pos + 1]
        args, pos = [], pos + 2
        while pos < len(tokens) and tokens[pos][0] != ")":
            arg, pos = _parse(tokens, pos, text, line, symbols)
            args.append(arg)
        if pos >= len(tokens):
            raise ParseError("unbalanced parenthesis", line, column + 1)
        pos += 1
        if op == "+" and args:
            return sympy.Add(*args), pos
        if op == "*" and args:
            return sympy.Mul(*args), pos
        if op == "^" and len(args) == 2 and args[1].is_Rational:
            return sympy.Pow(args[0], args[1]), pos
        raise ParseError(f"bad application of {op!r}", line, op_col + 1)
    if token == ")":
        raise ParseError("unexpected ')'", line, column + 1)
    try:
        return sympy.Rational(Fraction(token)), pos + 1
    except (ValueError, ZeroDivisionError):
        pass
    if not (token[0].isalpha() or token[0] == "_") or not token.replace("_", "a").isalnum():
        raise ParseError(f"invalid token {token!r}", line, column + 1)
    if token not in symbols:
        symbols[token] = generator_symbol(token, True)
    return symbols[token], pos + 1
