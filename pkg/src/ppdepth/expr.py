"""A small closed grammar for intensity expressions.

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := ("+" | "-") unary | primary
    primary := NUMBER | NAME | FUNC "(" expr ")" | "(" expr ")"

Names are the variables ``t`` and ``tau`` plus the constants ``pi`` and
``e``; functions are ``sin``, ``cos`` and ``exp``.  Expressions compile to
numpy-vectorized callables.
"""
from __future__ import annotations

import math
import re

import numpy as np

_TOKEN = re.compile(r"\s*(?:(\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)|([A-Za-z_]\w*)|(.))")
_FUNCS = {"sin": np.sin, "cos": np.cos, "exp": np.exp}
_CONSTS = {"pi": math.pi, "e": math.e}
VARIABLES = ("t", "tau")


class ExpressionError(ValueError):
    pass


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", float(num)))
        elif name is not None:
            out.append(("name", name))
        elif op is not None and op.strip():
            if op not in "+-*/()":
                raise ExpressionError(f"unexpected character {op!r} at {m.start(3)}")
            out.append(("op", op))
        pos = m.end()
    out.append(("end", None))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.names: set[str] = set()

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, op):
        tok = self.take()
        if tok != ("op", op):
            raise ExpressionError(f"expected {op!r} in {self.text!r}")

    def parse(self):
        node = self.expr()
        if self.peek()[0] != "end":
            raise ExpressionError(f"trailing input in {self.text!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            lhs, rhs = node, self.term()
            node = (lambda a, b: lambda env: a(env) + b(env))(lhs, rhs) if op == "+" else \
                (lambda a, b: lambda env: a(env) - b(env))(lhs, rhs)
        return node

    def term(self):
        node = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            lhs, rhs = node, self.unary()
            node = (lambda a, b: lambda env: a(env) * b(env))(lhs, rhs) if op == "*" else \
                (lambda a, b: lambda env: a(env) / b(env))(lhs, rhs)
        return node

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            inner = self.unary()
            return lambda env: -inner(env)
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.primary()

    def primary(self):
        kind, val = self.take()
        if kind == "num":
            return lambda env: val
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind == "name":
            if val in _FUNCS:
                fn = _FUNCS[val]
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return lambda env: fn(arg(env))
            if val in _CONSTS:
                c = _CONSTS[val]
                return lambda env: c
            if val in VARIABLES:
                self.names.add(val)
                return lambda env: env[val]
            raise ExpressionError(f"unknown name {val!r} in {self.text!r}")
        raise ExpressionError(f"unexpected token in {self.text!r}")


class Expression:
    """Compiled expression; call with ``t`` (and optionally ``tau``) arrays."""

    def __init__(self, text: str):
        parser = _Parser(text)
        self.text = text
        self._fn = parser.parse()
        self.variables = frozenset(parser.names)

    def __call__(self, t=None, tau=None):
        env = {"t": t, "tau": tau}
        for name in self.variables:
            if env[name] is None:
                raise ExpressionError(f"{self.text!r} needs a value for {name!r}")
        env = {k: np.asarray(v, dtype=float) for k, v in env.items() if v is not None}
        shape = np.broadcast_shapes(*(a.shape for a in env.values())) if env else ()
        with np.errstate(divide="raise", invalid="raise", over="raise"):
            try:
                out = self._fn(env)
            except FloatingPointError as exc:
                raise ExpressionError(f"{self.text!r}: {exc}") from None
        out = np.broadcast_to(np.asarray(out, dtype=float), shape)
        return float(out) if shape == () else out.copy()

    def __repr__(self):
        return f"Expression({self.text!r})"


def parse_expression(text: str) -> Expression:
    return Expression(text)


def as_intensity(text: str, var: str = "t"):
    """Compile ``text`` into a one-argument callable of ``var``."""
    ex = Expression(text)
    extra = ex.variables - {var}
    if extra:
        raise ExpressionError(f"{text!r} may only use {var!r}, found {sorted(extra)}")
    return (lambda x: ex(t=x)) if var == "t" else (lambda x: ex(tau=x))


def evaluate_constant(text: str) -> float:
    """Evaluate a variable-free expression such as ``pi/2``."""
    ex = Expression(text)
    if ex.variables:
        raise ExpressionError(f"{text!r} must not contain variables")
    return float(ex())
