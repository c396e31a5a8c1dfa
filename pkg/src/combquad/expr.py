"""Minimal integrand expression language: parser, exact and float evaluators."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import mpmath

from .errors import DomainError, EvaluationError, ExactnessError, ExprSyntaxError
from .exact import ExactScalar, exactify, fraction_to_mpf, scalar_pow
from .numeric import NumericContext, pi_reference

GRAMMAR = """\
expr   := term (('+'|'-') term)*
term   := unary (('*'|'/') unary)*
unary  := '-' unary | power
power  := atom ('^' integer)?
atom   := number | 't' | 'pi' | ident '(' expr ')' | '(' expr ')'
number := digits ('.' digits)?   (stored exactly)
ident  := one of sin cos exp log sqrt atan
'+', '-', '*', '/' associate left; '^' binds tighter than unary minus;
whitespace is ignored.
"""

FUNCTIONS = ("sin", "cos", "exp", "log", "sqrt", "atan")


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class PiConst:
    pass


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Num, Var, PiConst, Neg, BinOp, Pow, Call]


# -- tokenizer -------------------------------------------------------------------


@dataclass(frozen=True)
class _Token:
    kind: str  # num, ident, op, end
    text: str
    offset: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            start = i
            while i < n and text[i].isdigit():
                i += 1
            if i < n and text[i] == ".":
                i += 1
                if i == n or not text[i].isdigit():
                    raise ExprSyntaxError("digits expected after decimal point", i)
                while i < n and text[i].isdigit():
                    i += 1
            tokens.append(_Token("num", text[start:i], start))
            continue
        if ch.isalpha() or ch == "_":
            start = i
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            tokens.append(_Token("ident", text[start:i], start))
            continue
        if ch in "+-*/^()":
            tokens.append(_Token("op", ch, i))
            i += 1
            continue
        raise ExprSyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str) -> _Token:
        tok = self.peek()
        if tok.kind != "op" or tok.text != op:
            raise ExprSyntaxError(f"expected {op!r}", tok.offset)
        return self.advance()

    def parse(self) -> Expr:
        e = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ExprSyntaxError(f"unexpected input {tok.text!r}", tok.offset)
        return e

    def expr(self) -> Expr:
        node = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.advance().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        if self.peek().kind == "op" and self.peek().text == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.advance()
            tok = self.peek()
            if tok.kind != "num" or "." in tok.text:
                raise ExprSyntaxError("integer exponent expected after '^'", tok.offset)
            self.advance()
            return Pow(base, int(tok.text))
        return base

    def atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            return Num(Fraction(tok.text))
        if tok.kind == "ident":
            self.advance()
            if tok.text == "t":
                return Var()
            if tok.text == "pi":
                return PiConst()
            if tok.text in FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return Call(tok.text, arg)
            raise ExprSyntaxError(f"unknown identifier {tok.text!r}", tok.offset)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect_op(")")
            return node
        raise ExprSyntaxError(
            "expected a number, 't', 'pi', function call or '('", tok.offset
        )


def parse(text: str) -> Expr:
    """Parse expression text to an AST; raises ExprSyntaxError with a byte offset."""
    return _Parser(text).parse()


# -- exact evaluation --------------------------------------------------------------


def eval_exact(e: Expr, t):
    """Exact value at a rational (or exact surd) point.

    Only +, -, *, / and integer powers are exactly evaluable; 'pi' and
    function calls raise ExactnessError.  Division by zero raises
    EvaluationError.
    """
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        if isinstance(t, ExactScalar):
            return t
        return Fraction(t)
    if isinstance(e, PiConst):
        raise ExactnessError("expr: 'pi' has no exact rational value")
    if isinstance(e, Call):
        raise ExactnessError(f"expr: function {e.func} is not exactly evaluable")
    if isinstance(e, Neg):
        return -eval_exact(e.operand, t)
    if isinstance(e, Pow):
        base = eval_exact(e.base, t)
        if isinstance(base, ExactScalar):
            return scalar_pow(base, e.exponent)
        return base**e.exponent
    if isinstance(e, BinOp):
        left = eval_exact(e.left, t)
        right = eval_exact(e.right, t)
        if e.op == "+":
            return left + right
        if e.op == "-":
            return left - right
        if e.op == "*":
            return left * right
        try:
            return left / right
        except ZeroDivisionError:
            raise EvaluationError(f"expr: pole (division by zero) at t = {t}") from None
    raise DomainError(f"expr: unknown node {e!r}")


# -- float evaluation ---------------------------------------------------------------


def eval_float(e: Expr, t, context: NumericContext):
    """Evaluate at guard precision and round to the context precision."""
    with context.workdps():
        value = _eval_mpf(e, _to_mpf(t), context)
    with mpmath.workdps(context.precision_digits):
        return +value


def _to_mpf(t):
    if isinstance(t, ExactScalar):
        return t.to_mpf()
    if isinstance(t, Fraction):
        return fraction_to_mpf(t)
    return mpmath.mpf(t)


def _eval_mpf(e: Expr, t, context: NumericContext):
    if isinstance(e, Num):
        return fraction_to_mpf(e.value)
    if isinstance(e, Var):
        return t
    if isinstance(e, PiConst):
        return pi_reference(context)
    if isinstance(e, Neg):
        return -_eval_mpf(e.operand, t, context)
    if isinstance(e, Pow):
        return _eval_mpf(e.base, t, context) ** e.exponent
    if isinstance(e, Call):
        arg = _eval_mpf(e.arg, t, context)
        if e.func == "log" and arg <= 0:
            raise EvaluationError(f"expr: log of non-positive value {arg}")
        if e.func == "sqrt" and arg < 0:
            raise EvaluationError(f"expr: sqrt of negative value {arg}")
        return getattr(mpmath, e.func)(arg)
    if isinstance(e, BinOp):
        left = _eval_mpf(e.left, t, context)
        right = _eval_mpf(e.right, t, context)
        if e.op == "+":
            return left + right
        if e.op == "-":
            return left - right
        if e.op == "*":
            return left * right
        if right == 0:
            raise EvaluationError(f"expr: pole (division by zero) at t = {t}")
        return left / right
    raise DomainError(f"expr: unknown node {e!r}")


def is_exactly_evaluable(e: Expr) -> bool:
    """True when eval_exact can handle the expression (no pi, no functions)."""
    if isinstance(e, (Num, Var)):
        return True
    if isinstance(e, (PiConst, Call)):
        return False
    if isinstance(e, Neg):
        return is_exactly_evaluable(e.operand)
    if isinstance(e, Pow):
        return is_exactly_evaluable(e.base)
    if isinstance(e, BinOp):
        return is_exactly_evaluable(e.left) and is_exactly_evaluable(e.right)
    return False


# -- pretty printer ------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "pow": 4, "atom": 5}


def _fraction_literal(q: Fraction) -> str:
    """Render a literal the tokenizer can read back: integer or exact decimal."""
    if q.denominator == 1:
        return str(q.numerator)
    den = q.denominator
    twos = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    fives = 0
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        # not decimal-terminating; emit a quotient (reparses as a division node)
        return f"({q.numerator}/{q.denominator})"
    k = max(twos, fives)
    scaled = q.numerator * 10**k // q.denominator
    digits = str(scaled).rjust(k + 1, "0")
    return f"{digits[:-k]}.{digits[-k:]}" if k else digits


def _unparse(e: Expr) -> tuple[str, int]:
    if isinstance(e, Num):
        if e.value < 0:
            text, _ = _unparse(Neg(Num(-e.value)))
            return text, _PREC["neg"]
        return _fraction_literal(e.value), _PREC["atom"]
    if isinstance(e, Var):
        return "t", _PREC["atom"]
    if isinstance(e, PiConst):
        return "pi", _PREC["atom"]
    if isinstance(e, Call):
        inner, _ = _unparse(e.arg)
        return f"{e.func}({inner})", _PREC["atom"]
    if isinstance(e, Neg):
        inner, prec = _unparse(e.operand)
        if prec < _PREC["neg"]:
            inner = f"({inner})"
        return f"-{inner}", _PREC["neg"]
    if isinstance(e, Pow):
        base, prec = _unparse(e.base)
        if prec < _PREC["atom"]:
            base = f"({base})"
        return f"{base}^{e.exponent}", _PREC["pow"]
    if isinstance(e, BinOp):
        lhs, lp = _unparse(e.left)
        rhs, rp = _unparse(e.right)
        prec = _PREC[e.op]
        if lp < prec:
            lhs = f"({lhs})"
        # left associativity: a right operand at equal precedence needs parens
        if rp <= prec:
            rhs = f"({rhs})"
        return f"{lhs} {e.op} {rhs}", prec
    raise DomainError(f"expr: unknown node {e!r}")


def unparse(e: Expr) -> str:
    """Canonical text form; parse(unparse(parse(s))) == parse(s)."""
    return _unparse(e)[0]
