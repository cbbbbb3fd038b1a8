"""
Scalar field expressions for scenario files

Expressions are arithmetic in the variables x and y over
+ - * / ^, unary minus, the functions sin, cos, exp, sqrt, abs and the
constants pi and e. They are parsed with Python's own parser and then checked
node by node against that whitelist; evaluation is vectorised with numpy.
"""

import ast
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List

import numpy as np

from app.errors import ExpressionError

DIVISION_GUARD = 1e-12

FUNCTIONS: Dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "sqrt": np.sqrt,
    "abs": np.abs,
}
CONSTANTS = {"pi": math.pi, "e": math.e}
VARIABLES = ("x", "y")

_BINARY = {
    ast.Add: np.add,
    ast.Sub: np.subtract,
    ast.Mult: np.multiply,
    ast.Pow: np.power,
}


def _column_map(text: str) -> List[int]:
    """Column in the original text for each character after ^ -> ** rewriting"""
    mapping = []
    for i, char in enumerate(text):
        mapping.extend([i, i] if char == "^" else [i])
    mapping.append(len(text))
    return mapping


class _Whitelist(ast.NodeVisitor):
    def __init__(self, columns: List[int]):
        self.columns = columns
        self.variables = set()

    def column(self, node: ast.AST) -> int:
        offset = getattr(node, "col_offset", 0)
        return self.columns[min(offset, len(self.columns) - 1)] + 1

    def reject(self, node: ast.AST, message: str):
        raise ExpressionError(message, column=self.column(node))

    def visit_Expression(self, node: ast.Expression):
        self.visit(node.body)

    def visit_BinOp(self, node: ast.BinOp):
        if not isinstance(node.op, (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)):
            self.reject(node, f"Operator {type(node.op).__name__} is not allowed")
        self.visit(node.left)
        self.visit(node.right)
        if isinstance(node.op, ast.Div) and not _uses_variables(node.right):
            with np.errstate(all="ignore"):
                divisor = _evaluate(node.right, {})
            if abs(float(divisor)) < DIVISION_GUARD:
                self.reject(node.right, "Division by zero")

    def visit_UnaryOp(self, node: ast.UnaryOp):
        if not isinstance(node.op, (ast.USub, ast.UAdd)):
            self.reject(node, f"Unary {type(node.op).__name__} is not allowed")
        self.visit(node.operand)

    def visit_Call(self, node: ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in FUNCTIONS:
            self.reject(node, "Only sin, cos, exp, sqrt and abs may be called")
        if len(node.args) != 1 or node.keywords:
            self.reject(node, f"{node.func.id} takes exactly one argument")
        self.visit(node.args[0])

    def visit_Name(self, node: ast.Name):
        if node.id in VARIABLES:
            self.variables.add(node.id)
        elif node.id not in CONSTANTS:
            self.reject(node, f"Unknown name {node.id!r}")

    def visit_Constant(self, node: ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
            self.reject(node, f"Literal {node.value!r} is not a number")

    def generic_visit(self, node: ast.AST):
        self.reject(node, f"{type(node).__name__} is not allowed in field expressions")


def _uses_variables(node: ast.AST) -> bool:
    return any(isinstance(n, ast.Name) and n.id in VARIABLES for n in ast.walk(node))


def _evaluate(node: ast.AST, env: Dict[str, np.ndarray]):
    if isinstance(node, ast.Expression):
        return _evaluate(node.body, env)
    if isinstance(node, ast.Constant):
        return float(node.value)
    if isinstance(node, ast.Name):
        if node.id in CONSTANTS:
            return CONSTANTS[node.id]
        return env[node.id]
    if isinstance(node, ast.UnaryOp):
        value = _evaluate(node.operand, env)
        return -value if isinstance(node.op, ast.USub) else value
    if isinstance(node, ast.Call):
        return FUNCTIONS[node.func.id](_evaluate(node.args[0], env))
    if isinstance(node, ast.BinOp):
        left = _evaluate(node.left, env)
        right = _evaluate(node.right, env)
        if isinstance(node.op, ast.Div):
            if np.any(np.abs(right) < DIVISION_GUARD):
                raise ExpressionError("Division by a value below 1e-12 during evaluation")
            return np.divide(left, right)
        return _BINARY[type(node.op)](left, right)
    raise ExpressionError(f"{type(node).__name__} is not allowed in field expressions")


@dataclass(frozen=True)
class FieldExpr:
    """A parsed, whitelisted scalar expression in x and y"""

    source: str
    tree: ast.Expression = field(repr=False, compare=False)
    variables: frozenset = field(default=frozenset(), repr=False, compare=False)

    @classmethod
    def parse(cls, text: str) -> "FieldExpr":
        """
        Parse and validate an expression

        Args:
            text: Expression source, ``^`` meaning power

        Returns:
            FieldExpr

        Raises:
            ExpressionError: grammar violation or constant division by zero, with column
        """
        if not isinstance(text, str) or not text.strip():
            raise ExpressionError("Empty expression")
        rewritten = text.replace("^", "**")
        columns = _column_map(text)
        try:
            tree = ast.parse(rewritten.strip(), mode="eval")
        except SyntaxError as e:
            offset = max((e.offset or 1) - 1, 0)
            lead = len(rewritten) - len(rewritten.lstrip())
            raise ExpressionError(f"Syntax error: {e.msg}", column=columns[min(offset + lead, len(columns) - 1)] + 1) from e
        lead = len(rewritten) - len(rewritten.lstrip())
        checker = _Whitelist(columns[lead:])
        checker.visit(tree)
        return cls(text, tree, frozenset(checker.variables))

    @property
    def is_constant(self) -> bool:
        return not self.variables

    def evaluate(self, x, y) -> np.ndarray:
        """Vectorised value on arrays x, y of equal shape"""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        with np.errstate(all="ignore"):
            value = _evaluate(self.tree, {"x": x, "y": y})
        value = np.broadcast_to(np.asarray(value, dtype=float), np.broadcast(x, y).shape)
        if not np.all(np.isfinite(value)):
            raise ExpressionError(f"Expression {self.source!r} is not finite on the domain")
        return value

    def __call__(self, x, y) -> np.ndarray:
        return self.evaluate(x, y)

    def __str__(self) -> str:
        return self.source
