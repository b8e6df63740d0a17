"""Exact invariants of irreducible plane curve germs.

Given a branch t -> (t^m, g(t)) with g a polynomial over Q, compute its
characteristic sequence, the order of dP/dw along the branch, the Milnor
number, the Briancon-Skoda number and its real threshold, and decide
strong holomorphy of quotients on the curve.
"""

from .branch import BranchParametrization, CharacteristicSequence, characteristic_sequence, validate
from .invariants import InvariantReport, full_report
from .membership import Holomorphy, NumericalSemigroup, strongly_holomorphic, value_semigroup
from .polynomial import Polynomial, parse_polynomial
from .weierstrass import WeierstrassPolynomial, build_weierstrass

__all__ = [
    "BranchParametrization",
    "CharacteristicSequence",
    "Holomorphy",
    "InvariantReport",
    "NumericalSemigroup",
    "Polynomial",
    "WeierstrassPolynomial",
    "build_weierstrass",
    "characteristic_sequence",
    "full_report",
    "parse_polynomial",
    "strongly_holomorphic",
    "validate",
    "value_semigroup",
]
