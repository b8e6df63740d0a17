"""Branch parametrizations t -> (t^m, g(t)) and their characteristic sequence."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable

from gmpy2 import mpq

from .exactnum import RationalLike, format_rational, rational
from .series import SparseSeries


class ValidationError(ValueError):
    """Input rejected; ``rule`` names the failed check."""

    rule = "Invalid"

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.details = details

    def to_dict(self) -> dict:
        out = {"error": self.rule, "message": str(self)}
        out.update({k: v for k, v in self.details.items()})
        return out


class ExponentBelowMultiplicity(ValidationError):
    rule = "ExponentBelowMultiplicity"


class NotPrimitive(ValidationError):
    rule = "NotPrimitive"


class ZeroCoefficient(ValidationError):
    rule = "ZeroCoefficient"


class DuplicateExponent(ValidationError):
    rule = "DuplicateExponent"


class MalformedInput(ValidationError):
    rule = "MalformedInput"


@dataclass(frozen=True)
class BranchParametrization:
    """The normalization t -> (t^m, g(t)) of an irreducible plane curve germ.

    ``g`` holds ``(exponent, coefficient)`` pairs in increasing exponent
    order; construct instances with :func:`validate`.
    """

    m: int
    g: tuple[tuple[int, mpq], ...]
    name: str | None = field(default=None, compare=False)

    @cached_property
    def support(self) -> tuple[int, ...]:
        return tuple(k for k, _ in self.g)

    @cached_property
    def g_series(self) -> SparseSeries:
        return SparseSeries(dict(self.g))

    @property
    def max_exponent(self) -> int:
        return self.support[-1] if self.g else self.m

    def to_json_obj(self) -> dict:
        obj: dict = {"m": self.m, "g": [[k, format_rational(c)] for k, c in self.g]}
        if self.name is not None:
            obj["name"] = self.name
        return obj

    def __str__(self):
        label = f"{self.name}: " if self.name else ""
        return f"{label}(t^{self.m}, {self.g_series.format()})"


def validate(m: int, coeffs: Iterable[tuple[int, RationalLike]], name: str | None = None) -> BranchParametrization:
    """Check the normal-form assumptions and build a parametrization.

    Exponents must be at least ``m``; the gcd of ``m`` and the support must
    be 1, otherwise the map is a multiple cover rather than a normalization.
    """
    if isinstance(m, bool) or not isinstance(m, int) or m < 1:
        raise MalformedInput(f"multiplicity must be a positive integer, got {m!r}")
    seen: dict[int, mpq] = {}
    for item in coeffs:
        try:
            k, c = item
        except (TypeError, ValueError):
            raise MalformedInput(f"expected [exponent, coefficient], got {item!r}") from None
        if isinstance(k, bool) or not isinstance(k, int):
            raise MalformedInput(f"exponent must be an integer, got {k!r}")
        try:
            q = rational(c)
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise MalformedInput(f"bad coefficient for t^{k}: {exc}") from None
        if k in seen:
            raise DuplicateExponent(f"exponent {k} appears twice", exponent=k)
        if k < m:
            raise ExponentBelowMultiplicity(
                f"g has a term t^{k} with {k} < m = {m}; exchange the coordinates z and w "
                "so that the multiplicity is the smaller order",
                exponent=k,
            )
        if not q:
            raise ZeroCoefficient(f"coefficient of t^{k} is zero", exponent=k)
        seen[k] = q
    g = tuple(sorted(seen.items()))
    d = m
    for k, _ in g:
        d = math.gcd(d, k)
    if d != 1:
        raise NotPrimitive(
            f"gcd of m and the exponents of g is {d}; the data parametrizes a {d}-fold cover",
            gcd=d,
        )
    return BranchParametrization(m, g, name)


def from_json_obj(obj: Any) -> BranchParametrization:
    if not isinstance(obj, dict) or "m" not in obj or "g" not in obj:
        raise MalformedInput('curve JSON needs the fields "m" and "g"')
    if not isinstance(obj["g"], list):
        raise MalformedInput('"g" must be a list of [exponent, coefficient] pairs')
    pairs = []
    for item in obj["g"]:
        if not isinstance(item, list) or len(item) != 2:
            raise MalformedInput(f"expected [exponent, coefficient], got {item!r}")
        k, c = item
        if isinstance(c, float):
            raise MalformedInput(f"coefficient {c!r} is a float; write it as a \"p/q\" string")
        pairs.append((k, c))
    name = obj.get("name")
    return validate(obj["m"], pairs, name=name if isinstance(name, str) else None)


def loads(text: str) -> BranchParametrization:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON: {exc}") from None
    return from_json_obj(obj)


@dataclass(frozen=True)
class CharacteristicSequence:
    m: int
    beta: tuple[int, ...]
    e: tuple[int, ...]

    @property
    def genus(self) -> int:
        return len(self.beta)

    def to_json_obj(self) -> dict:
        return {"m": self.m, "beta": list(self.beta), "e": list(self.e)}

    def __str__(self):
        return f"({self.m}; {', '.join(map(str, self.beta))})" if self.beta else f"({self.m};)"


def characteristic_sequence(b: BranchParametrization) -> CharacteristicSequence:
    """Scan the support of g for the characteristic exponents.

    Each beta is the least exponent with nonzero coefficient that the
    running gcd does not divide; the scan stops once the gcd reaches 1.
    """
    beta: list[int] = []
    e = [b.m]
    for k in b.support:
        if e[-1] == 1:
            break
        if k % e[-1]:
            beta.append(k)
            e.append(math.gcd(e[-1], k))
    if e[-1] != 1:
        raise ArithmeticError("gcd sequence did not reach 1; branch is not primitive")
    return CharacteristicSequence(b.m, tuple(beta), tuple(e))
