"""Exact rationals and the cyclotomic field Q(zeta_m).

Rationals are ``gmpy2.mpq`` values: always in lowest terms with a positive
denominator.  Elements of Q(zeta_m) are stored as the unique remainder
modulo the m-th cyclotomic polynomial, so ``is_zero`` is an exact test.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

from gmpy2 import mpq

Rational = type(mpq())
RationalLike = Union[int, str, Fraction, "mpq"]

_RATIONAL_RE = re.compile(r"\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def rational(value: RationalLike) -> mpq:
    """Convert ``value`` to an exact rational.

    Accepts ints, ``Fraction``, ``mpq`` and strings of the form ``"p"`` or
    ``"p/q"``.  Floats are refused: they cannot carry exact data.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Rational)):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        match = _RATIONAL_RE.match(value)
        if match is None:
            raise ValueError(f"not an exact rational literal: {value!r}")
        num, den = match.groups()
        den = int(den) if den is not None else 1
        if den == 0:
            raise ZeroDivisionError(f"zero denominator in {value!r}")
        return mpq(int(num), den)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def format_rational(q: mpq) -> str:
    """``"p/q"``, or ``"p"`` when the denominator is 1."""
    return str(mpq(q))


def ceil_rational(q: mpq) -> int:
    q = mpq(q)
    return -((-int(q.numerator)) // int(q.denominator))


# --- integer polynomials, coefficient tuples from low to high degree -------


def _trim(coeffs: list[int]) -> list[int]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def poly_mul(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(_trim(out))


def poly_divmod_monic(a: Sequence[int], d: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Quotient and remainder of ``a`` by the monic integer polynomial ``d``."""
    if not d or d[-1] != 1:
        raise ValueError("divisor must be monic")
    rem = list(a)
    deg_d = len(d) - 1
    if len(rem) <= deg_d:
        return (), tuple(_trim(rem))
    quot = [0] * (len(rem) - deg_d)
    for k in range(len(rem) - 1, deg_d - 1, -1):
        c = rem[k]
        if c:
            quot[k - deg_d] = c
            for i, y in enumerate(d):
                rem[k - deg_d + i] -= c * y
    return tuple(_trim(quot)), tuple(_trim(rem[:deg_d]))


def divisors(n: int) -> list[int]:
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Phi_n as a coefficient tuple (constant term first).

    Built by exact division of x^n - 1 by Phi_d for every proper divisor d.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"cyclotomic polynomial needs n >= 1, got {n!r}")
    num = (-1,) + (0,) * (n - 1) + (1,)
    for d in divisors(n)[:-1]:
        num, rem = poly_divmod_monic(num, cyclotomic_polynomial(d))
        if rem:
            raise ArithmeticError(f"Phi_{d} does not divide x^{n} - 1")
    return num


def format_int_poly(coeffs: Sequence[int], var: str = "x") -> str:
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        mag = abs(c)
        body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    sign, body = parts[0]
    text = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


# --- Q(zeta_m) ---------------------------------------------------------------


class OrderMismatchError(ValueError):
    """Arithmetic between elements of different cyclotomic fields."""


@lru_cache(maxsize=None)
def _reduction_table(m: int) -> tuple[tuple[tuple[int, ...], ...], int]:
    """Residues of x^k mod Phi_m for 0 <= k < max(m, 2*phi - 1), padded to phi."""
    phi_poly = cyclotomic_polynomial(m)
    deg = len(phi_poly) - 1
    rows = []
    for k in range(max(m, 2 * deg - 1)):
        _, rem = poly_divmod_monic((0,) * k + (1,), phi_poly)
        rows.append(tuple(rem) + (0,) * (deg - len(rem)))
    return tuple(rows), deg


def _reduce(m: int, coeffs: Sequence) -> tuple:
    table, deg = _reduction_table(m)
    out = [mpq(c) for c in coeffs[:deg]]
    out += [mpq(0)] * (deg - len(out))
    for k in range(deg, len(coeffs)):
        c = coeffs[k]
        if not c:
            continue
        if k >= len(table):
            # x^m == 1 in Q(zeta_m)
            row = table[k % m]
        else:
            row = table[k]
        for i, r in enumerate(row):
            if r:
                out[i] += r * c
    return tuple(out)


class CycloElement:
    """An element of Q(zeta_m), stored modulo Phi_m.

    ``coeffs[i]`` is the coefficient of zeta^i, for ``0 <= i < phi(m)``.
    Instances are immutable.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Iterable[RationalLike] = ()):
        if order < 1:
            raise ValueError("cyclotomic order must be positive")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", _reduce(order, [rational(c) for c in coeffs]))

    @classmethod
    def _raw(cls, order: int, coeffs: tuple) -> "CycloElement":
        obj = object.__new__(cls)
        object.__setattr__(obj, "order", order)
        object.__setattr__(obj, "coeffs", coeffs)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("CycloElement is immutable")

    @classmethod
    def zero(cls, m: int) -> "CycloElement":
        return cls(m)

    @classmethod
    def from_rational(cls, m: int, q: RationalLike) -> "CycloElement":
        return cls(m, [q])

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> mpq:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    def _coerce(self, other) -> "CycloElement | None":
        if isinstance(other, CycloElement):
            if other.order != self.order:
                raise OrderMismatchError(
                    f"cannot combine Q(zeta_{self.order}) with Q(zeta_{other.order})"
                )
            return other
        if isinstance(other, (int, Rational, Fraction)) and not isinstance(other, bool):
            return CycloElement.from_rational(self.order, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycloElement._raw(self.order, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycloElement._raw(self.order, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return CycloElement._raw(self.order, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            return CycloElement._raw(self.order, tuple(a * other for a in self.coeffs))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        n = len(a)
        if n == 1:
            return CycloElement._raw(self.order, (a[0] * b[0],))
        conv = [mpq(0)] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        return CycloElement._raw(self.order, _reduce(self.order, conv))

    __rmul__ = __mul__

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except OrderMismatchError:
            return False
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.order, self.coeffs))

    def __repr__(self):
        return f"CycloElement({self.order}, [{', '.join(format_rational(c) for c in self.coeffs)}])"

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                terms.append(format_rational(c))
            else:
                mono = "z" if i == 1 else f"z^{i}"
                terms.append(mono if c == 1 else f"({format_rational(c)})*{mono}")
        return " + ".join(terms) if terms else "0"


@lru_cache(maxsize=None)
def _root_powers(m: int) -> tuple[CycloElement, ...]:
    table, _ = _reduction_table(m)
    return tuple(CycloElement._raw(m, tuple(mpq(x) for x in table[e])) for e in range(m))


def cyclo_root_power(m: int, e: int) -> CycloElement:
    """zeta_m ** e as an element of Q(zeta_m); negative ``e`` is allowed."""
    if m < 1:
        raise ValueError("cyclotomic order must be positive")
    return _root_powers(m)[e % m]


def cyclo_arith(a: CycloElement, b: CycloElement, op: str) -> CycloElement:
    if a.order != b.order:
        raise OrderMismatchError(f"orders differ: {a.order} vs {b.order}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")
