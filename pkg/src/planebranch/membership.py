"""Value semigroup of a branch and strong-holomorphy decisions on it.

A meromorphic function psi on the branch is judged through its pullback
h(t).  A pole means psi is unbounded (``NOT_WEAK``).  Otherwise psi is
strongly holomorphic exactly when h lies in the pulled-back local ring
Q{t^m, g(t)}.  Below the conductor this is decided by reducing h against
one ring element of each semigroup order; from the conductor on, every
series is reached.  This replaces a residue-current criterion with the
equivalent statement about orders.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Union

from gmpy2 import mpq

from .branch import BranchParametrization
from .invariants import full_report
from .polynomial import Polynomial
from .series import (
    INDETERMINATE,
    NOT_POWER_SERIES,
    PrecisionError,
    SparseSeries,
    ZERO_SERIES,
    series_divide,
)
from .weierstrass import build_weierstrass

MAX_ESCALATIONS = 6
DEFAULT_SEED = 20240601

RingElement = Union[Polynomial, SparseSeries]


class BoundTooSmall(ArithmeticError):
    pass


class WitnessUnexpectedlyStrong(ArithmeticError):
    pass


class Holomorphy(enum.Enum):
    STRONG = "Strong"
    WEAK_ONLY = "WeakOnly"
    NOT_WEAK = "NotWeak"


@dataclass(frozen=True)
class NumericalSemigroup:
    generators: tuple[int, ...]
    conductor: int
    gaps: tuple[int, ...]

    def __contains__(self, v: int) -> bool:
        return v >= self.conductor or (v >= 0 and v not in self._gapset)

    @cached_property
    def _gapset(self) -> frozenset[int]:
        return frozenset(self.gaps)

    @classmethod
    def from_generators(cls, gens) -> "NumericalSemigroup":
        gens = sorted(set(gens))
        if not gens or math.gcd(*gens) != 1:
            raise ValueError(f"generators {gens} do not have gcd 1")
        a = gens[0]
        members = [True]
        run = 1 if a == 1 else 0
        v = 0
        # [c, c + a) inside the semigroup forces everything from c on
        while run < a:
            v += 1
            hit = any(v >= x and members[v - x] for x in gens)
            members.append(hit)
            run = run + 1 if hit else 0
        conductor = v - a + 1
        gaps = tuple(u for u in range(conductor) if not members[u])
        return cls(_minimal_generators(members, conductor, a), conductor, gaps)

    def to_json_obj(self) -> dict:
        return {"generators": list(self.generators), "conductor": self.conductor, "gaps": list(self.gaps)}

    def __str__(self):
        return f"<{', '.join(map(str, self.generators))}>"


def _minimal_generators(members: list[bool], conductor: int, smallest: int) -> tuple[int, ...]:
    def inside(u):
        return u >= conductor or members[u]

    out = []
    # every minimal generator lies below conductor + smallest, except 1 when the semigroup is N
    for v in range(1, max(conductor + smallest, 2)):
        if inside(v) and not any(inside(u) and inside(v - u) for u in range(1, v // 2 + 1)):
            out.append(v)
    return tuple(out)


# --- closure of the pulled-back ring modulo t^P ----------------------------


def _dense(s: SparseSeries, P: int) -> list:
    out = [mpq(0)] * P
    for k, c in s.items():
        if k >= P:
            break
        out[k] = mpq(c)
    return out


def _mul_trunc(a: list, b: list, P: int) -> list:
    out = [mpq(0)] * P
    for i, x in enumerate(a):
        if x:
            out[i:P] = [o + x * y for o, y in zip(out[i:P], b)]
    return out


def _first_nonzero(h: list, start: int = 0) -> int:
    for i in range(start, len(h)):
        if h[i]:
            return i
    return len(h)


def _members_below(orders: list[int], P: int) -> list[bool]:
    members = [False] * P
    if P:
        members[0] = True
    for v in range(1, P):
        members[v] = any(v >= x and members[v - x] for x in orders)
    return members


def _subduce(h: list, basis: dict, members: list[bool]) -> int:
    """Reduce ``h`` in place; return its final order (len(h) if it vanished)."""
    P = len(h)
    v = _first_nonzero(h)
    while v < P and members[v]:
        c = h[v]
        row = basis[v]
        h[v:P] = [x - c * y for x, y in zip(h[v:P], row[v:P])]
        v = _first_nonzero(h, v + 1)
    return v


@dataclass
class SemigroupClosure:
    """The value semigroup plus one monic ring element (mod t^precision) per value below it."""

    semigroup: NumericalSemigroup
    precision: int
    basis: dict[int, list] = field(repr=False)
    generator_series: list[list] = field(repr=False)

    def basis_series(self, v: int) -> SparseSeries:
        return SparseSeries({k: c for k, c in enumerate(self.basis[v])}, self.precision - 1)

    def reduce(self, h: SparseSeries) -> tuple[Holomorphy, SparseSeries]:
        """Greedy reduction of a pullback series against the stored basis."""
        c = self.semigroup.conductor
        while True:
            v = h.order()
            if v is ZERO_SERIES or (isinstance(v, int) and v >= c):
                return Holomorphy.STRONG, h
            if v is INDETERMINATE:
                if h.trunc + 1 >= c:
                    return Holomorphy.STRONG, h
                raise PrecisionError(f"series unknown beyond t^{h.trunc}, conductor is {c}")
            if v not in self.semigroup:
                return Holomorphy.WEAK_ONLY, h
            h = h - self.basis_series(v).scale(h[v])


def _build_basis(gens: list[tuple[int, list]], members: list[bool], m: int, P: int) -> dict[int, list]:
    basis: dict[int, list] = {}
    for v in range(P):
        if not members[v]:
            continue
        if v == 0:
            row = [mpq(0)] * P
            row[0] = mpq(1)
        elif v >= m and members[v - m]:
            row = [mpq(0)] * m + basis[v - m][: P - m]
        else:
            order, series = next((o, s) for o, s in gens[1:] if v >= o and members[v - o])
            row = _mul_trunc(series, basis[v - order], P)
            lead = row[v]
            if lead != 1:
                row = [x / lead for x in row]
        basis[v] = row
    return basis


def semigroup_closure(b: BranchParametrization, bound: int | None = None) -> SemigroupClosure:
    """Compute the value semigroup by closing the ring under multiplication by w.

    Working modulo t^P, keep one ring element per known value v: for v - m
    known it is z times the element at v - m, otherwise a product with a
    discovered generator.  The span W of these elements contains 1 and is
    closed under z by construction; it is closed under w as soon as w times
    each element of the Apery set of m reduces to zero against W.  Any
    nonzero remainder has a new order and becomes a generator.  Once W is
    closed its orders are all values below P, so the conductor is read off
    whenever it does not exceed P.
    """
    m = b.m
    if bound is None:
        bound = (m - 1) * b.max_exponent + m + 1
    for _ in range(MAX_ESCALATIONS + 1):
        try:
            return _closure_at(b, bound)
        except BoundTooSmall:
            bound *= 2
    raise BoundTooSmall(f"value semigroup closure did not stabilise below t^{bound}")


def _closure_at(b: BranchParametrization, P: int) -> SemigroupClosure:
    m = b.m
    w_full = b.g_series
    z_row = [mpq(0)] * P
    if m < P:
        z_row[m] = mpq(1)
    gens: list[tuple[int, list]] = [(m, z_row)]
    while True:
        orders = [o for o, _ in gens]
        if math.gcd(*orders) == 1:
            conductor = NumericalSemigroup.from_generators(orders).conductor
            if conductor < P:
                P = conductor
                gens = [(o, s[:P]) for o, s in gens]
        members = _members_below(orders, P)
        basis = _build_basis(gens, members, m, P)
        w_row = _dense(w_full, P)
        found = None
        for a in range(P):
            if not members[a] or (a >= m and members[a - m]):
                continue
            h = _mul_trunc(w_row, basis[a], P)
            v = _subduce(h, basis, members)
            if v < P:
                lead = h[v]
                found = (v, [x / lead for x in h])
                break
        if found is None:
            break
        gens.append(found)

    orders = [o for o, _ in gens]
    if math.gcd(*orders) != 1:
        raise BoundTooSmall(f"all values below t^{P} share the factor {math.gcd(*orders)}")
    semigroup = NumericalSemigroup.from_generators(orders)
    if semigroup.conductor > P:
        raise BoundTooSmall(f"conductor {semigroup.conductor} exceeds the working precision {P}")
    return SemigroupClosure(semigroup, P, basis, [s for _, s in gens])


@lru_cache(maxsize=256)
def _cached_closure(b: BranchParametrization) -> SemigroupClosure:
    return semigroup_closure(b)


def value_semigroup(b: BranchParametrization) -> NumericalSemigroup:
    return _cached_closure(b).semigroup


# --- strong holomorphy -------------------------------------------------------


def pullback(elem: RingElement, b: BranchParametrization) -> SparseSeries:
    if isinstance(elem, SparseSeries):
        return elem
    return elem.pullback(b)


@dataclass(frozen=True)
class MembershipResult:
    classification: Holomorphy
    ord_num: int | None
    ord_den: int
    ord_quotient: int | None
    truncation: int | None

    def to_json_obj(self) -> dict:
        return {
            "classification": self.classification.value,
            "ord_num": self.ord_num,
            "ord_den": self.ord_den,
            "ord_quotient": self.ord_quotient,
            "truncation": self.truncation,
        }


def classify(
    psi_num: RingElement,
    psi_den: RingElement,
    b: BranchParametrization,
    truncation: int | None = None,
) -> MembershipResult:
    """Classify psi = num/den on the branch, with the pullback order ledger."""
    closure = _cached_closure(b)
    conductor = closure.semigroup.conductor
    num, den = pullback(psi_num, b), pullback(psi_den, b)
    d = den.order()
    if d is ZERO_SERIES:
        raise ZeroDivisionError("denominator vanishes identically on the branch")
    if d is INDETERMINATE:
        raise PrecisionError("denominator order is hidden by truncation")
    v = num.order()
    ord_num = v if isinstance(v, int) else None
    if ord_num is not None and ord_num < d:
        return MembershipResult(Holomorphy.NOT_WEAK, ord_num, d, ord_num - d, None)

    N = truncation if truncation is not None else conductor + 1 + (ord_num or 0)
    for _ in range(MAX_ESCALATIONS + 1):
        quotient = series_divide(num, den, N)
        if quotient is NOT_POWER_SERIES:
            return MembershipResult(Holomorphy.NOT_WEAK, ord_num, d, None, N)
        q = quotient.order()
        ord_q = q if isinstance(q, int) else None
        try:
            verdict, _ = closure.reduce(quotient)
        except PrecisionError:
            N = max(2 * N, 1)
            continue
        return MembershipResult(verdict, ord_num, d, ord_q, N)
    raise PrecisionError(f"undecided after {MAX_ESCALATIONS} precision escalations (last N = {N})")


def strongly_holomorphic(psi_num: RingElement, psi_den: RingElement, b: BranchParametrization,
                         truncation: int | None = None) -> Holomorphy:
    return classify(psi_num, psi_den, b, truncation).classification


# --- sharpness and the inclusion law -----------------------------------------


@dataclass(frozen=True)
class WitnessReport:
    classification: Holomorphy
    ord_psi: int
    ord_pw: int
    m: int
    pullback: SparseSeries

    def to_json_obj(self) -> dict:
        return {
            "classification": self.classification.value,
            "ord_psi": self.ord_psi,
            "ord_pw": self.ord_pw,
            "m": self.m,
        }


def bs_sharpness_witness(b: BranchParametrization) -> WitnessReport:
    """psi = (dP/dw) / z: weakly but not strongly holomorphic when m >= 2."""
    if b.m < 2:
        raise ValueError("the sharpness witness needs a singular branch (m >= 2)")
    pw = build_weierstrass(b).to_polynomial().diff_w()
    result = classify(pw, Polynomial.z(), b)
    ord_pw = full_report(b).ord_pw
    if result.classification is Holomorphy.STRONG:
        raise WitnessUnexpectedlyStrong(f"(dP/dw)/z reduced into the local ring of {b}")
    if result.ord_quotient != ord_pw - b.m:
        raise ArithmeticError(f"witness order {result.ord_quotient} != ord_pw - m = {ord_pw - b.m}")
    psi = series_divide(pw.pullback(b), Polynomial.z().pullback(b), ord_pw)
    return WitnessReport(result.classification, result.ord_quotient, ord_pw, b.m, psi)


@dataclass
class InclusionReport:
    k: int
    l: int
    ord_a: int
    threshold: int
    seed: int
    checked: int = 0
    passed: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json_obj(self) -> dict:
        return {
            "k": self.k,
            "l": self.l,
            "ord_a": self.ord_a,
            "threshold": self.threshold,
            "seed": self.seed,
            "checked": self.checked,
            "passed": self.passed,
            "failures": list(self.failures),
        }


def _inclusion_candidates(b, threshold, sample_bound, raise_order, rng):
    """(label, pullback of phi) pairs with ord(phi) >= threshold.

    Monomials z^p w^q, random combinations of them, and elements whose
    leading terms cancel: differences of equal-order monomials and the
    partial derivatives of P.  ``raise_order`` multiplies by powers of a
    until the threshold is met.
    """
    m, n = b.m, b.g_series.order()
    by_order: dict[int, list] = {}
    w_pow = SparseSeries({0: mpq(1)})
    q = 0
    while q * n <= sample_bound:
        p = 0
        while p * m + q * n <= sample_bound:
            s = w_pow.shift(p * m)
            by_order.setdefault(s.order(), []).append((f"z^{p}*w^{q}", s))
            p += 1
        q += 1
        w_pow = w_pow * b.g_series

    # at most two monomials and one cancelling difference per order
    monomials = []
    cancelling = []
    for order in sorted(by_order):
        group = by_order[order]
        if order >= threshold:
            monomials.extend(group[:1] + group[-1:] if len(group) > 1 else group)
        if len(group) > 1:
            (l1, s1), (l2, s2) = group[0], group[-1]
            diff = s1 - s2.scale(s1[order] / s2[order])
            if not diff.is_zero():
                cancelling.append((f"{l1} - c*{l2}", diff))
    out = list(monomials)
    P = build_weierstrass(b).to_polynomial()
    cancelling.append(("dP/dw", P.diff_w().pullback(b)))
    cancelling.append(("dP/dz", P.diff_z().pullback(b)))
    for label, s in cancelling:
        if not s.is_zero():
            out.append(raise_order(label, s))

    for _ in range(min(len(monomials) // 2 + 4, 40)):
        if not monomials:
            break
        picks = rng.sample(monomials, min(len(monomials), rng.randint(2, 3)))
        combo = SparseSeries()
        labels = []
        for label, s in picks:
            c = mpq(rng.choice([-1, 1]) * rng.randint(1, 7), rng.randint(1, 5))
            combo = combo + s.scale(c)
            labels.append(f"({c})*{label}")
        if not combo.is_zero():
            out.append((" + ".join(labels), combo))
    return out


def check_bs_inclusion(
    b: BranchParametrization,
    a: RingElement,
    l: int,
    sample_bound: int | None = None,
    k: int | None = None,
    seed: int = DEFAULT_SEED,
) -> InclusionReport:
    """Sample phi with ord(phi) >= (k + l - 1) * ord(a) and test phi in (a^l).

    Vanishing orders along the normalization measure |phi| <~ |a|^s on the
    curve, so the premise is an order inequality; membership in (a^l) is
    strong holomorphy of phi / a^l.  ``k`` defaults to bs(C).
    """
    if l < 1:
        raise ValueError("l must be positive")
    a_series = pullback(a, b)
    ord_a = a_series.order()
    if not isinstance(ord_a, int) or ord_a < 1:
        raise ValueError("a must be a non-unit with nonzero pullback")
    if k is None:
        k = full_report(b).bs
    threshold = (k + l - 1) * ord_a
    if sample_bound is None:
        sample_bound = threshold + 2 * max(b.m, b.g_series.order())
    rng = random.Random(seed)
    powers = {0: SparseSeries({0: mpq(1)})}

    def a_pow(j):
        if j not in powers:
            powers[j] = a_series ** j
        return powers[j]

    def raise_order(label, s):
        j = 0
        while s.order() + j * ord_a < threshold:
            j += 1
        return (f"({label})*a^{j}" if j else label), (s * a_pow(j) if j else s)

    report = InclusionReport(k, l, ord_a, threshold, seed)
    den = a_pow(l)
    for label, phi in _inclusion_candidates(b, threshold, sample_bound, raise_order, rng):
        report.checked += 1
        verdict = strongly_holomorphic(phi, den, b)
        if verdict is Holomorphy.STRONG:
            report.passed += 1
        else:
            report.failures.append(f"{label}: ord {phi.order()} but phi/a^{l} is {verdict.value}")
    return report
