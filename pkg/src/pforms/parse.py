"""Expression grammar for field elements.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' ['-'] INT)?
    atom   := INT | NAME | '(' expr ')'

Integer literals are reduced mod p; whitespace is ignored.
"""

import re

from .errors import DivisionByZero, ParseError, SemanticError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def tokenize(text):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        num, name, op = m.groups()
        start = m.start(m.lastindex)
        if num is not None:
            tokens.append(("int", int(num), start))
        elif name is not None:
            tokens.append(("name", name, start))
        elif op in "+-*/^()":
            tokens.append((op, op, start))
        else:
            raise ParseError(f"unexpected character {op!r}", 1, start + 1)
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text, field, line):
        self.field = field
        self.line = line
        self.tokens = tokenize(text)
        self.i = 0

    def error(self, msg, tok=None):
        tok = tok or self.tokens[self.i]
        return ParseError(msg, self.line, tok[2] + 1)

    def peek(self):
        return self.tokens[self.i][0]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind):
        if self.peek() != kind:
            raise self.error(f"expected {kind!r}")
        return self.take()

    def parse(self):
        if self.peek() == "end":
            raise self.error("empty expression")
        value = self.expr()
        if self.peek() != "end":
            raise self.error("unexpected trailing input")
        return value

    def expr(self):
        value = self.term()
        while self.peek() in "+-":
            op = self.take()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek() in ("*", "/"):
            tok = self.take()
            rhs = self.unary()
            if tok[0] == "*":
                value = value * rhs
            else:
                if not rhs:
                    raise DivisionByZero(f"division by zero at column {tok[2] + 1}")
                value = value / rhs
        return value

    def unary(self):
        if self.peek() == "-":
            self.take()
            return -self.unary()
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.take()
            sign = 1
            if self.peek() == "-":
                self.take()
                sign = -1
            tok = self.expect("int")
            k = sign * tok[1]
            if k < 0 and not base:
                raise DivisionByZero(f"zero raised to a negative power at column {tok[2] + 1}")
            return base ** k
        return base

    def atom(self):
        tok = self.take()
        kind = tok[0]
        if kind == "int":
            return self.field.const(tok[1])
        if kind == "name":
            if tok[1] not in self.field.vars:
                raise SemanticError(f"unknown variable {tok[1]!r} at column {tok[2] + 1}")
            return self.field[tok[1]]
        if kind == "(":
            value = self.expr()
            self.expect(")")
            return value
        raise self.error("expected a number, variable or '('", tok)


def parse_expr(text, field, line=1):
    """Parse ``text`` into an element of ``field``."""
    if not isinstance(text, str):
        raise ParseError(f"expression must be a string, got {type(text).__name__}", line, 1)
    return _Parser(text, field, line).parse()
