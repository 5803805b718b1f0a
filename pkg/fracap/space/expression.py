"""Closed-Form Exponent Expressions.

Grammar for exponent formulas:

    expr   := term ('+' term)*
    term   := factor ('*' factor)*
    factor := number | coordinate | '|x-y|' | 'dist'
            | ('min' | 'max') '(' expr (',' expr)+ ')'
            | '(' expr ')'

Coordinates are `x`, `y` on intervals and `x1`, `x2`, `y1`, `y2` on rectangles;
`|x-y|` (alias `dist`) is the Euclidean distance between the two points.
Numbers may carry a leading minus sign.

Example:
```python
expr = parse_expression("2 + min(x, 0.5) * 2")
expr.evaluate(np.array([[0.25], [0.75]]))  # array([2.5, 3.0])
```
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from ..exceptions import ExpressionError

_TOKEN = re.compile(
    r"""
    (?P<dist>\|x-y\|)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[a-z]+[12]?)
  | (?P<op>[-+*(),])
    """,
    re.VERBOSE,
)


class Node:
    """Expression tree node."""

    def evaluate(self, xs: np.ndarray, ys: np.ndarray | None) -> np.ndarray:
        raise NotImplementedError

    def coordinates(self) -> set[tuple[str, int]]:
        """(point, axis) pairs referenced by the subtree; axis -1 means bare x or y."""
        return set()

    def uses_distance(self) -> bool:
        return False


@dataclass(frozen=True)
class Constant(Node):
    value: float

    def evaluate(self, xs: np.ndarray, ys: np.ndarray | None) -> np.ndarray:
        return np.full(xs.shape[0], self.value)


@dataclass(frozen=True)
class Coordinate(Node):
    point: str  # "x" or "y"
    axis: int  # -1 for the bare one-dimensional name

    def evaluate(self, xs: np.ndarray, ys: np.ndarray | None) -> np.ndarray:
        source = xs if self.point == "x" else ys
        if source is None:
            raise ExpressionError(self.point, "second point is not available here")
        return np.asarray(source[:, max(self.axis, 0)], dtype=float)

    def coordinates(self) -> set[tuple[str, int]]:
        return {(self.point, self.axis)}


@dataclass(frozen=True)
class Distance(Node):
    def evaluate(self, xs: np.ndarray, ys: np.ndarray | None) -> np.ndarray:
        if ys is None:
            raise ExpressionError("|x-y|", "second point is not available here")
        return np.linalg.norm(xs - ys, axis=1)

    def uses_distance(self) -> bool:
        return True


@dataclass(frozen=True)
class Combine(Node):
    """Sum, product, min or max of two or more operands."""

    op: str
    operands: tuple[Node, ...]

    def evaluate(self, xs: np.ndarray, ys: np.ndarray | None) -> np.ndarray:
        values = [operand.evaluate(xs, ys) for operand in self.operands]
        if self.op == "+":
            return np.sum(values, axis=0)
        if self.op == "*":
            return np.prod(values, axis=0)
        if self.op == "min":
            return np.min(values, axis=0)
        return np.max(values, axis=0)

    def coordinates(self) -> set[tuple[str, int]]:
        found: set[tuple[str, int]] = set()
        for operand in self.operands:
            found |= operand.coordinates()
        return found

    def uses_distance(self) -> bool:
        return any(operand.uses_distance() for operand in self.operands)


_COORDINATES = {
    "x": ("x", -1),
    "y": ("y", -1),
    "x1": ("x", 0),
    "x2": ("x", 1),
    "y1": ("y", 0),
    "y2": ("y", 1),
}


def _tokenize(text: str) -> list[tuple[str, str]]:
    compact = "".join(text.split())
    tokens: list[tuple[str, str]] = []
    pos = 0
    while pos < len(compact):
        match = _TOKEN.match(compact, pos)
        if match is None:
            raise ExpressionError(text, f"unexpected character '{compact[pos]}' at {pos}")
        kind = match.lastgroup or ""
        tokens.append((kind, match.group()))
        pos = match.end()
    return tokens


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> tuple[str, str] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected: str | None = None) -> tuple[str, str]:
        token = self.peek()
        if token is None:
            raise ExpressionError(self.text, "unexpected end of expression")
        if expected is not None and token[1] != expected:
            raise ExpressionError(self.text, f"expected '{expected}', found '{token[1]}'")
        self.pos += 1
        return token

    def parse(self) -> Node:
        if not self.tokens:
            raise ExpressionError(self.text, "empty expression")
        node = self.expr()
        if self.peek() is not None:
            raise ExpressionError(self.text, f"unexpected '{self.peek()[1]}'")  # type: ignore[index]
        return node

    def expr(self) -> Node:
        operands = [self.term()]
        while self.peek() == ("op", "+"):
            self.take()
            operands.append(self.term())
        return operands[0] if len(operands) == 1 else Combine("+", tuple(operands))

    def term(self) -> Node:
        operands = [self.factor()]
        while self.peek() == ("op", "*"):
            self.take()
            operands.append(self.factor())
        return operands[0] if len(operands) == 1 else Combine("*", tuple(operands))

    def factor(self) -> Node:
        kind, value = self.take()
        if kind == "number":
            return self.number(value)
        if value == "-":
            kind, value = self.take()
            if kind != "number":
                raise ExpressionError(self.text, "minus sign is only allowed before a number")
            return self.number(value, sign=-1.0)
        if kind == "dist" or value == "dist":
            return Distance()
        if value in _COORDINATES:
            return Coordinate(*_COORDINATES[value])
        if value in ("min", "max"):
            self.take("(")
            operands = [self.expr()]
            while self.peek() == ("op", ","):
                self.take()
                operands.append(self.expr())
            self.take(")")
            if len(operands) < 2:
                raise ExpressionError(self.text, f"{value}() needs at least two arguments")
            return Combine(value, tuple(operands))
        if value == "(":
            node = self.expr()
            self.take(")")
            return node
        raise ExpressionError(self.text, f"unexpected '{value}'")

    def number(self, token: str, sign: float = 1.0) -> Node:
        value = sign * float(token)
        if not np.isfinite(value):
            raise ExpressionError(self.text, f"constant {token} is not finite")
        return Constant(value)


@dataclass(frozen=True)
class Expression:
    """Parsed exponent expression."""

    text: str
    root: Node

    @property
    def two_point(self) -> bool:
        """Whether the expression references the second point y."""
        return self.root.uses_distance() or any(
            point == "y" for point, _ in self.root.coordinates()
        )

    def check(self, dimension: int, two_point: bool) -> None:
        """Verify the expression is meaningful for a dimension and arity.

        Raises:
            ExpressionError: On a reference to y in a one-point expression, a bare
                coordinate in 2D, or an axis beyond the dimension
        """
        if not two_point and self.two_point:
            raise ExpressionError(self.text, "q(x) may not reference y or |x-y|")
        for point, axis in self.root.coordinates():
            if axis == -1 and dimension != 1:
                raise ExpressionError(
                    self.text, f"use {point}1/{point}2 for coordinates on rectangles"
                )
            if axis >= dimension:
                raise ExpressionError(self.text, f"{point}{axis + 1} exceeds dimension {dimension}")

    def evaluate(self, xs: np.ndarray, ys: np.ndarray | None = None) -> np.ndarray:
        """Evaluate at m points (and m partner points for two-point expressions).

        Args:
            xs: Array of shape (m, n)
            ys: Array of shape (m, n), required when the expression references y

        Returns:
            Array of shape (m,)
        """
        xs = np.atleast_2d(np.asarray(xs, dtype=float))
        if ys is not None:
            ys = np.atleast_2d(np.asarray(ys, dtype=float))
        with np.errstate(all="ignore"):
            return self.root.evaluate(xs, ys)


def parse_expression(text: str) -> Expression:
    """Parse an exponent expression.

    Raises:
        ExpressionError: On any syntax error
    """
    if not isinstance(text, str):
        raise ExpressionError(str(text), "expression must be a string")
    try:
        root = _Parser(text).parse()
    except RecursionError:
        raise ExpressionError(text, "expression is nested too deeply") from None
    return Expression(text=text, root=root)
