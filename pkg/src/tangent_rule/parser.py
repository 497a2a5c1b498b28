"""Text <-> expression conversion.

Grammar (see ``docs/grammar.ebnf``)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := "-" unary | power
    power   := primary ("^" unary)?
    primary := NUMBER | "x" | "e" | "pi" | "(" expr ")"
             | FUNC "(" expr ")" | "log" "(" expr "," expr ")"

``^`` is right-associative; its exponent must fold to a rational constant
unless the base is ``e`` (giving ``exp``) or a positive rational ``a != 1``
(giving ``exp(u*ln(a))``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from . import expr as ex
from .errors import NonRationalExponent, ParseError

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+\.\d*|\.\d+|\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^(),]))"
)


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "name", "op" or "end"
    text: str
    pos: int  # byte offset into the UTF-8 input


def tokenize(text: str) -> list[Token]:
    tokens = []
    i = 0
    n = len(text)
    byte = 0  # byte offset of text[i]
    while True:
        m = _TOKEN.match(text, i)
        if m is None or m.end() == i:
            # skip trailing whitespace before deciding
            j = i
            while j < n and text[j].isspace():
                j += 1
            byte += len(text[i:j].encode())
            if j >= n:
                tokens.append(Token("end", "", byte))
                return tokens
            raise ParseError(byte, "number, name, operator or parenthesis", text[j])
        kind = m.lastgroup
        start = m.start(kind)
        byte += len(text[i:start].encode())
        lexeme = m.group(kind)
        tokens.append(Token(kind, lexeme, byte))
        byte += len(lexeme.encode())
        i = m.end()


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, text: str, what: str | None = None) -> Token:
        t = self.tok
        if t.kind == "op" and t.text == text:
            return self.advance()
        raise ParseError(t.pos, what or f"'{text}'", t.text)

    def at_op(self, *ops: str) -> bool:
        return self.tok.kind == "op" and self.tok.text in ops

    def parse(self) -> ex.Expr:
        e = self.expr()
        if self.tok.kind != "end":
            raise ParseError(self.tok.pos, "operator or end of input", self.tok.text)
        return e

    def expr(self) -> ex.Expr:
        e = self.term()
        while self.at_op("+", "-"):
            op = self.advance().text
            rhs = self.term()
            e = ex.add(e, rhs if op == "+" else ex.neg(rhs))
        return e

    def term(self) -> ex.Expr:
        e = self.unary()
        while self.at_op("*", "/"):
            op = self.advance().text
            rhs = self.unary()
            e = ex.mul(e, rhs) if op == "*" else ex.div(e, rhs)
        return e

    def unary(self) -> ex.Expr:
        if self.at_op("-"):
            self.advance()
            return ex.neg(self.unary())
        return self.power()

    def power(self) -> ex.Expr:
        base = self.primary()
        if not self.at_op("^"):
            return base
        self.advance()
        start = self.tok.pos
        exponent = self.unary()
        if isinstance(exponent, ex.ConstRat):
            return ex.power(base, exponent.value)
        if isinstance(base, ex.ConstE):
            return ex.exp(exponent)
        if isinstance(base, ex.ConstRat) and base.value > 0 and base.value != 1:
            return ex.exp(ex.mul(ex.ln(base), exponent))
        raise NonRationalExponent(start, "a rational constant exponent", str(exponent))

    def primary(self) -> ex.Expr:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return ex.ConstRat(Fraction(t.text))
        if t.kind == "op" and t.text == "(":
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        if t.kind == "name":
            self.advance()
            if t.text == "x":
                return ex.X
            if t.text == "e":
                return ex.E
            if t.text == "pi":
                return ex.PI
            if t.text == "log":
                self.expect("(")
                base_pos = self.tok.pos
                base = self.expr()
                if not (isinstance(base, ex.ConstRat) and base.value > 0 and base.value != 1):
                    raise ParseError(base_pos, "a positive rational log base other than 1", str(base))
                self.expect(",")
                arg = self.expr()
                self.expect(")")
                return ex.logbase(base.value, arg)
            if t.text in ex.FUNCTION_NAMES:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return ex.apply(ex.FUNCTION_NAMES[t.text], arg)
            raise ParseError(t.pos, "x, e, pi or a known function", t.text)
        raise ParseError(t.pos, "operand", t.text)


def parse(text: str) -> ex.Expr:
    """Parse ``text`` into a canonical expression."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# printing

ADD, MUL, NEG, POW, ATOM = range(1, 6)


def _rational(v: Fraction) -> tuple[str, int]:
    if v.denominator == 1:
        return str(v.numerator), (ATOM if v >= 0 else NEG)
    return f"{v.numerator}/{v.denominator}", MUL


def _wrap(part: tuple[str, int], min_prec: int) -> str:
    text, prec = part
    return f"({text})" if prec < min_prec else text


def _power_form(e: ex.Exp):
    """For ``exp(ln(a)*u)`` return (a, u) so it prints as ``a^u``."""
    if not isinstance(e.arg, ex.Mul):
        return None
    logs = [f for f in e.arg.factors if isinstance(f, ex.Ln) and isinstance(f.arg, ex.ConstRat)]
    if len(logs) != 1:
        return None
    a = logs[0].arg.value
    if a <= 0 or a == 1:
        return None
    rest = list(e.arg.factors)
    rest.remove(logs[0])
    u = ex.mul(*rest)
    if isinstance(u, ex.ConstRat):
        return None
    return a, u


def _leading_factor_is_sum(e: ex.Expr) -> bool:
    while isinstance(e, (ex.Mul, ex.Div)):
        e = e.factors[0] if isinstance(e, ex.Mul) else e.num
    return isinstance(e, ex.Add)


def _show(e: ex.Expr) -> tuple[str, int]:
    if isinstance(e, ex.ConstRat):
        return _rational(e.value)
    if isinstance(e, ex.Var):
        return "x", ATOM
    if isinstance(e, ex.ConstE):
        return "e", ATOM
    if isinstance(e, ex.ConstPi):
        return "pi", ATOM
    if isinstance(e, ex.Add):
        parts = [_show(e.terms[0])[0]]
        for t in e.terms[1:]:
            sign, body = ex._split_sign(t)
            text = _show(body)[0]
            parts.append(f"- {text}" if sign < 0 else f"+ {text}")
        return " ".join(parts), ADD
    if isinstance(e, ex.Mul):
        out = []
        for i, f in enumerate(e.factors):
            if i == 0 and isinstance(f, ex.ConstRat):
                text, prec = _rational(f.value)
                out.append(f"({text})" if prec == MUL else text)
            else:
                out.append(_wrap(_show(f), POW))
        return "*".join(out), MUL
    if isinstance(e, ex.Neg):
        # "-(a + b)*c" would push the sign into the sum, so keep the product whole
        if _leading_factor_is_sum(e.arg):
            return f"-({_show(e.arg)[0]})", NEG
        return "-" + _wrap(_show(e.arg), MUL), NEG
    if isinstance(e, ex.Div):
        num = _wrap(_show(e.num), MUL)
        den = _wrap(_show(e.den), POW)
        return f"{num}/{den}", MUL
    if isinstance(e, ex.PowRat):
        base = _wrap(_show(e.base), ATOM)
        r = e.exponent
        if r.denominator == 1 and r >= 0:
            exp_text = str(r.numerator)
        else:
            exp_text = f"({_rational(r)[0]})"
        return f"{base}^{exp_text}", POW
    if isinstance(e, ex.LogBase):
        return f"log({_rational(e.base)[0]}, {_show(e.arg)[0]})", ATOM
    if isinstance(e, ex.Exp):
        pf = _power_form(e)
        if pf is not None:
            a, u = pf
            return f"{_wrap(_rational(a), ATOM)}^{_wrap(_show(u), ATOM)}", POW
    return f"{e.NAME}({_show(e.arg)[0]})", ATOM


def unparse(e: ex.Expr) -> str:
    """Deterministic, minimally parenthesised text that :func:`parse` maps back to ``e``."""
    return _show(e)[0]
