"""Tiny arithmetic expression grammar for function descriptions in job files.

Supported syntax: numeric constants, the variable ``x``, the constant ``pi``,
the binary operators ``+ - * /`` (and ``**`` as a synonym for ``pow``), unary
minus, and the functions ``sin``, ``cos``, ``exp``, ``pow``.  Expressions are
parsed with
Python's own ``ast`` parser and compiled against numpy, so the resulting
callables are vectorized.  Anything outside the whitelist is rejected.
"""

from __future__ import annotations

import ast
from typing import Callable

import numpy as np

from .errors import ExpressionError

_FUNCTIONS: dict[str, Callable] = {
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "pow": np.power,
}

_CONSTANTS = {"pi": float(np.pi)}

_BINOPS = {
    ast.Add: np.add,
    ast.Sub: np.subtract,
    ast.Mult: np.multiply,
    ast.Div: np.true_divide,
    ast.Pow: np.power,
}


def _compile_node(node: ast.AST) -> Callable:
    if isinstance(node, ast.Expression):
        return _compile_node(node.body)
    if isinstance(node, ast.Constant):
        if not isinstance(node.value, (int, float)):
            raise ExpressionError(f"non-numeric constant {node.value!r}")
        value = float(node.value)
        return lambda x: value
    if isinstance(node, ast.Name):
        if node.id == "x":
            return lambda x: x
        if node.id in _CONSTANTS:
            value = _CONSTANTS[node.id]
            return lambda x: value
        raise ExpressionError(f"unknown name {node.id!r}; allowed names: x, pi")
    if isinstance(node, ast.BinOp):
        op = _BINOPS.get(type(node.op))
        if op is None:
            raise ExpressionError(f"operator {type(node.op).__name__} not allowed")
        left = _compile_node(node.left)
        right = _compile_node(node.right)
        return lambda x: op(left(x), right(x))
    if isinstance(node, ast.UnaryOp):
        operand = _compile_node(node.operand)
        if isinstance(node.op, ast.USub):
            return lambda x: np.negative(operand(x))
        if isinstance(node.op, ast.UAdd):
            return operand
        raise ExpressionError(f"operator {type(node.op).__name__} not allowed")
    if isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in _FUNCTIONS:
            raise ExpressionError("only sin, cos, exp and pow may be called")
        if node.keywords:
            raise ExpressionError("keyword arguments are not allowed")
        nargs = 2 if node.func.id == "pow" else 1
        if len(node.args) != nargs:
            raise ExpressionError(f"{node.func.id} takes exactly {nargs} argument(s)")
        fn = _FUNCTIONS[node.func.id]
        args = [_compile_node(a) for a in node.args]
        return lambda x: fn(*(a(x) for a in args))
    raise ExpressionError(f"syntax element {type(node).__name__} not allowed")


def parse_expression(source: str) -> Callable:
    """Compile ``source`` into a vectorized function of ``x``.

    Raises ExpressionError on any syntax outside the grammar.
    """
    if not isinstance(source, str) or not source.strip():
        raise ExpressionError("expression must be a non-empty string")
    try:
        tree = ast.parse(source, mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"cannot parse {source!r}: {exc.msg}") from exc
    fn = _compile_node(tree)
    return lambda x: np.asarray(fn(np.asarray(x, dtype=float)), dtype=float)


def constant_value(source: str) -> float | None:
    """Return the value of ``source`` if it contains no reference to ``x``.

    Used to attach exact antiderivatives to constant branches; None means the
    expression actually depends on x.
    """
    try:
        tree = ast.parse(source, mode="eval")
    except SyntaxError:
        return None
    if any(isinstance(n, ast.Name) and n.id == "x" for n in ast.walk(tree)):
        return None
    if any(isinstance(n, ast.Call) for n in ast.walk(tree)):
        return None
    fn = parse_expression(source)
    return float(fn(0.0))
