"""Weierstrass polynomial of a branch, rebuilt from its m conjugate roots.

P(z, w) = prod_j (w - g(zeta^j t)) with z = t^m.  The product is expanded
over Q(zeta_m)[t]; symmetry forces every coefficient to be a rational
series in t^m, and that descent is checked, not assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .branch import BranchParametrization
from .exactnum import CycloElement, cyclo_root_power, format_rational
from .polynomial import Polynomial, format_polynomial
from .series import SparseSeries, ZERO_SERIES


class GaloisDescentFailure(ArithmeticError):
    pass


class NonMultipleExponent(ArithmeticError):
    pass


@dataclass(frozen=True)
class WeierstrassPolynomial:
    """w^m + b_1(z) w^(m-1) + ... + b_m(z); ``coeffs[j-1]`` is b_j as a series in z."""

    degree: int
    coeffs: tuple[SparseSeries, ...]

    def to_polynomial(self) -> Polynomial:
        terms = {(0, self.degree): mpq(1)}
        for j, b in enumerate(self.coeffs, start=1):
            for a, c in b.items():
                terms[(a, self.degree - j)] = c
        return Polynomial(terms)

    def format(self) -> str:
        return format_polynomial(self.to_polynomial().terms)

    def to_json_obj(self) -> dict:
        return {
            "m": self.degree,
            "b": [[[a, format_rational(c)] for a, c in b.items()] for b in self.coeffs],
        }

    __str__ = format


def conjugate_roots(b: BranchParametrization) -> list[SparseSeries]:
    """g(zeta^j t) for j = 0, ..., m-1, with coefficients in Q(zeta_m)."""
    g = b.g_series.to_cyclotomic(b.m)
    return [g.scale_argument(cyclo_root_power(b.m, j)) for j in range(b.m)]


def build_weierstrass(b: BranchParametrization) -> WeierstrassPolynomial:
    m = b.m
    one = CycloElement.from_rational(m, 1)
    # elementary symmetric functions of the roots, e[0] = 1
    e = [SparseSeries({0: one})]
    for root in conjugate_roots(b):
        e.append(SparseSeries())
        for k in range(len(e) - 1, 0, -1):
            e[k] = e[k] + e[k - 1] * root

    coeffs = []
    for j in range(1, m + 1):
        sign = -1 if j % 2 else 1
        terms = {}
        for k, c in e[j].items():
            if k % m:
                raise NonMultipleExponent(f"b_{j} has a term t^{k} with {m} not dividing {k}")
            if not c.is_rational():
                raise GaloisDescentFailure(f"coefficient of t^{k} in b_{j} is {c}, not rational")
            terms[k // m] = sign * c.rational_value()
        if 0 in terms:
            raise ArithmeticError(f"b_{j}(0) != 0; P is not a Weierstrass polynomial")
        coeffs.append(SparseSeries(terms))
    return WeierstrassPolynomial(m, tuple(coeffs))


def evaluate_on_branch(P: WeierstrassPolynomial, b: BranchParametrization) -> SparseSeries:
    """P(t^m, g(t)); identically zero when P really cuts out the branch."""
    return P.to_polynomial().pullback(b)


def pullback_dw(P: WeierstrassPolynomial, b: BranchParametrization) -> SparseSeries:
    """dP/dw, pulled back along t -> (t^m, g(t))."""
    return P.to_polynomial().diff_w().pullback(b)


def ord_pw_weierstrass(b: BranchParametrization) -> int:
    order = pullback_dw(build_weierstrass(b), b).order()
    if order is ZERO_SERIES:
        raise ArithmeticError("dP/dw vanishes identically on the branch")
    return order
