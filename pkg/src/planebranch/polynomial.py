"""Bivariate polynomials in z, w over Q, their parser, and pullback to a branch."""

from __future__ import annotations

import re
from typing import Mapping

from gmpy2 import mpq

from .exactnum import format_rational, rational
from .series import SparseSeries


class ParseError(ValueError):
    pass


class Polynomial:
    """Sum of c * z^a * w^b, keyed by (a, b)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], object] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        self.terms = {(a, b): mpq(c) for (a, b), c in items if c}

    @classmethod
    def z(cls) -> "Polynomial":
        return cls({(1, 0): 1})

    @classmethod
    def w(cls) -> "Polynomial":
        return cls({(0, 1): 1})

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls({(0, 0): c})

    def __add__(self, other: "Polynomial") -> "Polynomial":
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, 0) + c
        return Polynomial(out)

    def __neg__(self) -> "Polynomial":
        return Polynomial({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return Polynomial({k: c * other for k, c in self.terms.items()})
        out: dict = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                key = (a1 + a2, b1 + b2)
                out[key] = out.get(key, 0) + c1 * c2
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        result = Polynomial.constant(1)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def diff_w(self) -> "Polynomial":
        return Polynomial({(a, b - 1): c * b for (a, b), c in self.terms.items() if b})

    def diff_z(self) -> "Polynomial":
        return Polynomial({(a - 1, b): c * a for (a, b), c in self.terms.items() if a})

    def degree_w(self) -> int:
        return max((b for _, b in self.terms), default=0)

    def pullback(self, branch) -> SparseSeries:
        """Substitute (z, w) = (t^m, g(t)); exact because g is a polynomial."""
        return pullback_terms(self.terms, branch.m, branch.g_series)

    def format(self) -> str:
        return format_polynomial(self.terms)

    def __repr__(self):
        return f"Polynomial({self.format()!r})"

    __str__ = format


def pullback_terms(terms: Mapping[tuple[int, int], object], m: int, g: SparseSeries) -> SparseSeries:
    by_w: dict[int, dict[int, object]] = {}
    for (a, b), c in terms.items():
        by_w.setdefault(b, {})[a * m] = c
    if not by_w:
        return SparseSeries()
    # Horner in w
    result = SparseSeries()
    for b in range(max(by_w), -1, -1):
        result = result * g + SparseSeries(by_w.get(b, {}))
    return result


def _monomial_text(a: int, b: int) -> str:
    parts = []
    if b:
        parts.append("w" if b == 1 else f"w^{b}")
    if a:
        parts.append("z" if a == 1 else f"z^{a}")
    return "*".join(parts)


def format_polynomial(terms: Mapping[tuple[int, int], object]) -> str:
    """Normal form: descending powers of w, then ascending powers of z."""
    keys = sorted(terms, key=lambda ab: (-ab[1], ab[0]))
    text = ""
    for i, (a, b) in enumerate(keys):
        c = terms[(a, b)]
        neg = c < 0
        mag = -c if neg else c
        mono = _monomial_text(a, b)
        if not mono:
            body = format_rational(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{format_rational(mag)}*{mono}"
        if i == 0:
            text = ("-" if neg else "") + body
        else:
            text += (" - " if neg else " + ") + body
    return text or "0"


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([zw])|(.))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            break
        num, var, op = match.groups()
        if num is not None:
            tokens.append(("num", num))
        elif var is not None:
            tokens.append(("var", var))
        elif op in "+-*^/":
            tokens.append(("op", op))
        else:
            raise ParseError(f"unexpected character {op!r} at position {match.start(3)}")
        pos = match.end()
    return tokens


class _Parser:
    # expr   := ['+'|'-'] term (('+'|'-') term)*
    # term   := factor ('*' factor)*
    # factor := INT ['/' INT] | VAR ['^' INT]

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self, kind: str, value: str | None = None) -> str:
        tok_kind, tok_value = self.peek()
        if tok_kind != kind or (value is not None and tok_value != value):
            want = value or kind
            got = tok_value if tok_value is not None else "end of input"
            raise ParseError(f"expected {want}, got {got!r} in {self.text!r}")
        self.pos += 1
        return tok_value

    def parse(self) -> Polynomial:
        if not self.tokens:
            raise ParseError("empty expression")
        result = self.expr()
        if self.pos != len(self.tokens):
            raise ParseError(f"trailing input {self.peek()[1]!r} in {self.text!r}")
        return result

    def expr(self) -> Polynomial:
        sign = 1
        if self.peek() in (("op", "+"), ("op", "-")):
            sign = -1 if self.take("op") == "-" else 1
        result = self.term() * sign
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take("op")
            t = self.term()
            result = result + t if op == "+" else result - t
        return result

    def term(self) -> Polynomial:
        result = self.factor()
        while self.peek() == ("op", "*"):
            self.take("op", "*")
            result = result * self.factor()
        return result

    def factor(self) -> Polynomial:
        kind, value = self.peek()
        if kind == "num":
            num = self.take("num")
            if self.peek() == ("op", "/"):
                self.take("op", "/")
                den = self.take("num")
                if int(den) == 0:
                    raise ParseError(f"zero denominator in {self.text!r}")
                return Polynomial.constant(rational(f"{num}/{den}"))
            return Polynomial.constant(int(num))
        if kind == "var":
            var = self.take("var")
            exp = 1
            if self.peek() == ("op", "^"):
                self.take("op", "^")
                exp = int(self.take("num"))
            return Polynomial({(exp, 0) if var == "z" else (0, exp): 1})
        got = value if value is not None else "end of input"
        raise ParseError(f"expected a number or variable, got {got!r} in {self.text!r}")


def parse_polynomial(text: str) -> Polynomial:
    """Parse e.g. ``"z*w + 3/2*z^2"``: rational literals, + - * ^, variables z and w."""
    return _Parser(text).parse()
