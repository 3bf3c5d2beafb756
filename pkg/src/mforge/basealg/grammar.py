"""Recursive-descent parser for the polynomial expression grammar.

Expressions use integers, named symbols, ``+ - * / ^`` and parentheses.
Exponents are integers, or parenthesized fractions such as ``(1/3)``.  The
parser is generic: the caller supplies the symbol table and a function that
lifts integers into the target ring, so the same grammar serves rational
functions and Ore polynomials.
"""

import re
from fractions import Fraction

from ..errors import ParseError

_TOKEN = re.compile(r'\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))')


def tokenize(text):
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        num, name, op = m.groups()
        if num is not None:
            tokens.append(('num', int(num)))
        elif name is not None:
            tokens.append(('name', name))
        elif op is not None and op.strip():
            if op not in '+-*/^()':
                raise ParseError(f'unexpected character {op!r} in {text!r}')
            tokens.append(('op', op))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text, symbols, const, power):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.symbols = symbols
        self.const = const
        self.power = power

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ParseError(f'unexpected token {tok[1]!r} in {self.text!r}')
        self.i += 1
        return tok

    def parse(self):
        if not self.tokens:
            raise ParseError('empty expression')
        value = self.expr()
        if self.i != len(self.tokens):
            raise ParseError(f'trailing input in {self.text!r}')
        return value

    def expr(self):
        value = self.term()
        while self.peek() in (('op', '+'), ('op', '-')):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == '+' else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek() in (('op', '*'), ('op', '/')):
            op = self.take()[1]
            rhs = self.unary()
            if op == '*':
                value = value * rhs
            else:
                try:
                    value = value / rhs
                except ZeroDivisionError as exc:
                    raise ParseError(f'division by zero in {self.text!r}') from exc
        return value

    def unary(self):
        if self.peek() == ('op', '-'):
            self.take()
            return -self.unary()
        if self.peek() == ('op', '+'):
            self.take()
            return self.unary()
        return self.factor()

    def factor(self):
        base = self.atom()
        if self.peek() == ('op', '^'):
            self.take()
            exp = self.exponent()
            try:
                return self.power(base, exp)
            except ZeroDivisionError as exc:
                raise ParseError(f'division by zero in {self.text!r}') from exc
        return base

    def exponent(self):
        tok = self.peek()
        if tok[0] == 'num':
            return self.take()[1]
        self.take('op', '(')
        sign = 1
        if self.peek() == ('op', '-'):
            self.take()
            sign = -1
        a = self.take('num')[1]
        b = 1
        if self.peek() == ('op', '/'):
            self.take()
            b = self.take('num')[1]
        self.take('op', ')')
        if b == 0:
            raise ParseError('zero denominator in exponent')
        e = Fraction(sign * a, b)
        return int(e) if e.denominator == 1 else e

    def atom(self):
        kind, value = self.peek()
        if kind == 'num':
            self.take()
            return self.const(value)
        if kind == 'name':
            self.take()
            if value not in self.symbols:
                raise ParseError(f'unknown symbol {value!r}')
            return self.symbols[value]
        if (kind, value) == ('op', '('):
            self.take()
            inner = self.expr()
            self.take('op', ')')
            return inner
        raise ParseError(f'unexpected token {value!r} in {self.text!r}')


def parse_expr(text, symbols, const, power=None):
    """Parse ``text`` into the ring described by ``symbols`` and ``const``."""
    if power is None:
        def power(base, exp):
            if isinstance(exp, Fraction):
                raise ParseError('fractional exponent not allowed here')
            return base ** exp
    return _Parser(text, symbols, const, power).parse()
