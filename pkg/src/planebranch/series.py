"""Sparse power series in one variable with in-band truncation.

A series either knows all of its terms (``trunc is None``) or only those
with exponent ``<= trunc``.  Order queries keep the two cases apart, so an
all-zero truncated series is reported as ``INDETERMINATE`` rather than as
the zero series.
"""

from __future__ import annotations

import enum
from typing import Callable, Iterable, Iterator, Mapping, Union

from gmpy2 import mpq

from .exactnum import CycloElement, format_rational


class OrderStatus(enum.Enum):
    ZERO_SERIES = "ZeroSeries"
    INDETERMINATE = "Indeterminate"


ZERO_SERIES = OrderStatus.ZERO_SERIES
INDETERMINATE = OrderStatus.INDETERMINATE


class _NotPowerSeries:
    """Result of a division whose quotient has a pole at the origin."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NotPowerSeries"


NOT_POWER_SERIES = _NotPowerSeries()


class PrecisionError(ArithmeticError):
    """The inputs are not known far enough to produce the requested terms."""


Order = Union[int, OrderStatus]


def _min_trunc(*bounds):
    finite = [b for b in bounds if b is not None]
    return min(finite) if finite else None


class SparseSeries:
    """Finitely many nonzero terms, plus an optional truncation bound."""

    __slots__ = ("_terms", "trunc")

    def __init__(self, terms: Mapping[int, object] | Iterable[tuple[int, object]] = (), trunc: int | None = None):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean = {}
        for k, c in items:
            if k < 0:
                raise ValueError(f"negative exponent {k}")
            if trunc is not None and k > trunc:
                continue
            if c:
                if k in clean:
                    raise ValueError(f"duplicate exponent {k}")
                clean[k] = c
        self._terms = dict(sorted(clean.items()))
        self.trunc = trunc

    @classmethod
    def _from_sorted(cls, terms: dict, trunc: int | None) -> "SparseSeries":
        obj = object.__new__(cls)
        obj._terms = terms
        obj.trunc = trunc
        return obj

    @classmethod
    def monomial(cls, k: int, c=1, trunc: int | None = None) -> "SparseSeries":
        return cls({k: mpq(c) if isinstance(c, int) else c}, trunc)

    # --- queries ----------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.trunc is None

    def items(self) -> Iterator[tuple[int, object]]:
        return iter(self._terms.items())

    def exponents(self) -> list[int]:
        return list(self._terms)

    def __len__(self):
        return len(self._terms)

    def __getitem__(self, k: int):
        if self.trunc is not None and k > self.trunc:
            raise PrecisionError(f"coefficient of t^{k} is beyond truncation {self.trunc}")
        return self._terms.get(k, 0)

    def order(self) -> Order:
        if self._terms:
            return next(iter(self._terms))
        return ZERO_SERIES if self.trunc is None else INDETERMINATE

    def order_lower_bound(self) -> int | None:
        """A guaranteed lower bound for the order; None means the exact zero series."""
        if self._terms:
            return next(iter(self._terms))
        return None if self.trunc is None else self.trunc + 1

    def lead(self):
        k = self.order()
        if not isinstance(k, int):
            raise ValueError("series has no known leading term")
        return k, self._terms[k]

    def degree(self) -> int | None:
        return next(reversed(self._terms)) if self._terms else None

    def is_zero(self) -> bool:
        """True when every known coefficient vanishes."""
        return not self._terms

    # --- arithmetic -------------------------------------------------------

    def _combine(self, other: "SparseSeries", sign: int) -> "SparseSeries":
        trunc = _min_trunc(self.trunc, other.trunc)
        out = {k: c for k, c in self._terms.items() if trunc is None or k <= trunc}
        for k, c in other._terms.items():
            if trunc is not None and k > trunc:
                continue
            if k in out:
                v = out[k] + c if sign > 0 else out[k] - c
                if v:
                    out[k] = v
                else:
                    del out[k]
            else:
                out[k] = c if sign > 0 else -c
        return SparseSeries._from_sorted(dict(sorted(out.items())), trunc)

    def __add__(self, other: "SparseSeries") -> "SparseSeries":
        if not isinstance(other, SparseSeries):
            return NotImplemented
        return self._combine(other, 1)

    def __sub__(self, other: "SparseSeries") -> "SparseSeries":
        if not isinstance(other, SparseSeries):
            return NotImplemented
        return self._combine(other, -1)

    def __neg__(self) -> "SparseSeries":
        return SparseSeries._from_sorted({k: -c for k, c in self._terms.items()}, self.trunc)

    def __mul__(self, other):
        if not isinstance(other, SparseSeries):
            return self.scale(other)
        va, vb = self.order_lower_bound(), other.order_lower_bound()
        if va is None or vb is None:
            return SparseSeries._from_sorted({}, None)
        bounds = []
        if self.trunc is not None:
            bounds.append(self.trunc + vb)
        if other.trunc is not None:
            bounds.append(other.trunc + va)
        trunc = min(bounds) if bounds else None
        acc: dict = {}
        b_items = list(other._terms.items())
        for i, ci in self._terms.items():
            for j, cj in b_items:
                k = i + j
                if trunc is not None and k > trunc:
                    break
                p = ci * cj
                if k in acc:
                    acc[k] = acc[k] + p
                else:
                    acc[k] = p
        return SparseSeries._from_sorted({k: acc[k] for k in sorted(acc) if acc[k]}, trunc)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "SparseSeries":
        if not c:
            return SparseSeries._from_sorted({}, self.trunc)
        return SparseSeries._from_sorted({k: v * c for k, v in self._terms.items() if v * c}, self.trunc)

    def shift(self, n: int) -> "SparseSeries":
        """Multiply by t^n."""
        trunc = None if self.trunc is None else self.trunc + n
        return SparseSeries._from_sorted({k + n: c for k, c in self._terms.items()}, trunc)

    def truncate(self, n: int) -> "SparseSeries":
        """Forget everything above t^n."""
        trunc = n if self.trunc is None else min(n, self.trunc)
        return SparseSeries._from_sorted({k: c for k, c in self._terms.items() if k <= trunc}, trunc)

    def substitute_power(self, m: int) -> "SparseSeries":
        """t -> t^m."""
        trunc = None if self.trunc is None else self.trunc * m + (m - 1)
        return SparseSeries._from_sorted({k * m: c for k, c in self._terms.items()}, trunc)

    def map_coefficients(self, f: Callable) -> "SparseSeries":
        return SparseSeries({k: f(c) for k, c in self._terms.items()}, self.trunc)

    def to_cyclotomic(self, m: int) -> "SparseSeries":
        return self.map_coefficients(
            lambda c: c if isinstance(c, CycloElement) else CycloElement.from_rational(m, c)
        )

    def scale_argument(self, rho_power: CycloElement) -> "SparseSeries":
        """Substitute t -> rho_power * t."""
        out = {}
        power = CycloElement.from_rational(rho_power.order, 1)
        last = 0
        for k, c in self._terms.items():
            for _ in range(k - last):
                power = power * rho_power
            last = k
            if not isinstance(c, CycloElement):
                c = CycloElement.from_rational(rho_power.order, c)
            v = c * power
            if v:
                out[k] = v
        return SparseSeries._from_sorted(out, self.trunc)

    def __pow__(self, n: int) -> "SparseSeries":
        if n < 0:
            raise ValueError("negative power of a series")
        result = SparseSeries({0: mpq(1)})
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, SparseSeries):
            return NotImplemented
        return self.trunc == other.trunc and self._terms == other._terms

    def __hash__(self):
        return hash((self.trunc, tuple(self._terms.items())))

    def __repr__(self):
        return f"SparseSeries({self.format()!r}, trunc={self.trunc})"

    def format(self, var: str = "t") -> str:
        parts = []
        for k, c in self._terms.items():
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            if isinstance(c, CycloElement):
                coeff = f"({c})"
                parts.append(coeff + (f"*{mono}" if mono else ""))
                continue
            neg = c < 0
            mag = format_rational(-c if neg else c)
            body = mag if not mono else (mono if mag == "1" else f"{mag}*{mono}")
            parts.append(("-" if neg else "+") + body)
        if not parts:
            text = "0"
        else:
            text = parts[0].lstrip("+")
            for p in parts[1:]:
                text += f" {p[0]} {p[1:]}" if p[0] in "+-" else f" + {p}"
        if self.trunc is not None:
            text += f" + O({var}^{self.trunc + 1})"
        return text


def series_order(s: SparseSeries) -> Order:
    return s.order()


def series_arith(a: SparseSeries, b: SparseSeries, op: str) -> SparseSeries:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def series_scale_argument(s: SparseSeries, rho_power: CycloElement) -> SparseSeries:
    return s.scale_argument(rho_power)


def series_divide(num: SparseSeries, den: SparseSeries, out_truncation: int):
    """Quotient ``num / den`` known through t^out_truncation.

    Returns ``NOT_POWER_SERIES`` when the quotient has a pole.  The result is
    exact when both inputs are exact and the division leaves no remainder.
    """
    d = den.order()
    if d is ZERO_SERIES:
        raise ZeroDivisionError("division by the zero series")
    if d is INDETERMINATE:
        raise PrecisionError("denominator order is hidden by truncation")
    v = num.order()
    if v is ZERO_SERIES:
        return SparseSeries()
    if v is INDETERMINATE:
        if num.trunc - d >= out_truncation:
            return SparseSeries({}, out_truncation)
        raise PrecisionError("numerator is unknown in the requested range")
    if v < d:
        return NOT_POWER_SERIES

    lead = den[d]
    den_terms = list(den.items())
    rem = dict(num.items())
    rem_trunc = num.trunc
    quot = {}
    while True:
        live = [k for k in rem if rem_trunc is None or k <= rem_trunc]
        if not live:
            if rem_trunc is None:
                return SparseSeries._from_sorted(dict(sorted(quot.items())), None)
            if rem_trunc - d < out_truncation:
                raise PrecisionError(
                    f"quotient only determined through t^{rem_trunc - d}, wanted t^{out_truncation}"
                )
            return SparseSeries(quot, out_truncation)
        k = min(live)
        s = k - d
        if s > out_truncation:
            return SparseSeries(quot, out_truncation)
        c = rem[k] / lead if not isinstance(rem[k], CycloElement) else _cyclo_div(rem[k], lead)
        quot[s] = c
        for e, de in den_terms:
            kk = s + e
            if rem_trunc is not None and kk > rem_trunc:
                break
            val = rem.get(kk, 0) - c * de
            if val:
                rem[kk] = val
            else:
                rem.pop(kk, None)
        if den.trunc is not None:
            rem_trunc = _min_trunc(rem_trunc, s + den.trunc)


def _cyclo_div(a: CycloElement, b) -> CycloElement:
    if isinstance(b, CycloElement):
        if not b.is_rational():
            raise NotImplementedError("division by an irrational cyclotomic leading coefficient")
        b = b.rational_value()
    return a * (1 / mpq(b))
