"""Order of the pulled-back dP/dw, Milnor number and Briancon-Skoda number.

The order is computed four independent ways:

* ``closed``: sum of (e_{l-1} - e_l) * beta_l over the characteristic sequence;
* ``kstar``: sum over j of the least support exponent k with m not dividing k*j;
* ``product``: order of prod_j (g(t) - g(zeta^j t)) expanded over Q(zeta_m);
* ``weierstrass``: rebuild P(z, w), differentiate, pull back.

Everything downstream is exact rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpq

from .branch import BranchParametrization, CharacteristicSequence, characteristic_sequence
from .exactnum import CycloElement, ceil_rational, cyclo_root_power, format_rational
from .series import SparseSeries
from .weierstrass import ord_pw_weierstrass

ORACLES = ("closed", "kstar", "product", "weierstrass")


class KStarUndefined(ArithmeticError):
    def __init__(self, j: int):
        super().__init__(f"no exponent k in the support of g with m not dividing k*{j}")
        self.j = j


class HistogramMismatch(ArithmeticError):
    pass


class OracleDisagreement(ArithmeticError):
    """Two or more ways of computing the same number disagree."""

    def __init__(self, values: dict, law: str = "oracle agreement"):
        shown = ", ".join(f"{k}={v}" for k, v in values.items())
        super().__init__(f"{law} failed: {shown}")
        self.values = dict(values)
        self.law = law


def ord_pw_closed_form(cs: CharacteristicSequence) -> int:
    return sum((cs.e[l - 1] - cs.e[l]) * cs.beta[l - 1] for l in range(1, len(cs.beta) + 1))


def kstar_vector(b: BranchParametrization) -> list[int]:
    """[k_1*, ..., k_{m-1}*]: for each j the least k in supp(g) with m not dividing k*j."""
    out = []
    for j in range(1, b.m):
        k = next((k for k in b.support if (k * j) % b.m), None)
        if k is None:
            raise KStarUndefined(j)
        out.append(k)
    return out


def ord_pw_kstar(b: BranchParametrization) -> int:
    return sum(kstar_vector(b))


def difference_factors(b: BranchParametrization) -> list[SparseSeries]:
    """g(t) - g(zeta^j t) for j = 1, ..., m-1, over Q(zeta_m)."""
    g = b.g_series.to_cyclotomic(b.m)
    return [g - g.scale_argument(cyclo_root_power(b.m, j)) for j in range(1, b.m)]


def ord_pw_series_product(b: BranchParametrization) -> int:
    factors = difference_factors(b)
    product = SparseSeries({0: CycloElement.from_rational(b.m, 1)})
    orders = []
    for f in factors:
        order = f.order()
        if not isinstance(order, int):
            raise ArithmeticError("two conjugate roots coincide; branch is not primitive")
        orders.append(order)
        product = product * f
    total = product.order()
    if total != sum(orders):
        raise OracleDisagreement({"product": total, "sum of factor orders": sum(orders)},
                                 law="valuation of the root-difference product")
    return total


def count_kstar_histogram(b: BranchParametrization) -> dict[int, int]:
    """#{j : k_j* = beta_l} for each characteristic exponent; checked against e_{l-1} - e_l."""
    cs = characteristic_sequence(b)
    counts = {beta: 0 for beta in cs.beta}
    for k in kstar_vector(b):
        if k not in counts:
            raise HistogramMismatch(f"k* value {k} is not a characteristic exponent {cs.beta}")
        counts[k] += 1
    for l, beta in enumerate(cs.beta, start=1):
        expected = cs.e[l - 1] - cs.e[l]
        if counts[beta] != expected:
            raise HistogramMismatch(
                f"{counts[beta]} indices j have k_j* = {beta}, expected e_{l - 1} - e_{l} = {expected}"
            )
    return counts


_ORACLE_FUNCS = {
    "closed": lambda b: ord_pw_closed_form(characteristic_sequence(b)),
    "kstar": ord_pw_kstar,
    "product": ord_pw_series_product,
    "weierstrass": ord_pw_weierstrass,
}


@dataclass(frozen=True)
class InvariantReport:
    m: int
    ord_pw: int
    mu: int
    Q: mpq
    kappa: mpq
    bs: int
    oracle_values: dict[str, int] = field(default_factory=dict)
    agreement: bool = True

    def to_json_obj(self) -> dict:
        return {
            "ord_pw": self.ord_pw,
            "mu": self.mu,
            "Q": format_rational(self.Q),
            "kappa": format_rational(self.kappa),
            "bs": self.bs,
            "oracle_values": dict(self.oracle_values),
            "agreement": self.agreement,
        }


def invariants_from_order(m: int, ord_pw: int) -> tuple[int, mpq, mpq, int]:
    """(mu, Q, kappa, bs) from the order of the pulled-back dP/dw."""
    mu = ord_pw - m + 1
    Q = mpq(1 + ord_pw, m)
    kappa = Q - mpq(1, m)
    return mu, Q, kappa, ceil_rational(Q)


def full_report(
    b: BranchParametrization,
    oracles=ORACLES,
    extra: dict[str, int] | None = None,
) -> InvariantReport:
    """Run the selected oracles, demand agreement, derive the invariants.

    ``extra`` adds externally supplied order values (e.g. a fixture's
    expected value) to the agreement check.  Raises ``OracleDisagreement``.
    """
    unknown = set(oracles) - set(ORACLES)
    if unknown or not oracles:
        raise ValueError(f"unknown oracle(s) {sorted(unknown)}; choose from {ORACLES}")
    values = {name: _ORACLE_FUNCS[name](b) for name in ORACLES if name in oracles}
    if extra:
        values.update(extra)
    if len(set(values.values())) != 1:
        raise OracleDisagreement(values)
    ord_pw = next(iter(values.values()))
    mu, Q, kappa, bs = invariants_from_order(b.m, ord_pw)

    cs = characteristic_sequence(b)
    bs_characteristic = ceil_rational(mpq(1 + ord_pw_closed_form(cs), b.m))
    bs_milnor = ceil_rational(1 + mpq(mu, b.m))
    if not bs == bs_characteristic == bs_milnor:
        raise OracleDisagreement(
            {"ceil((1+ord)/m)": bs, "characteristic formula": bs_characteristic, "ceil(1+mu/m)": bs_milnor},
            law="bs ceiling identities",
        )
    if kappa != mpq(ord_pw, b.m):
        raise OracleDisagreement({"Q - 1/m": kappa, "ord/m": mpq(ord_pw, b.m)}, law="kappa identity")
    return InvariantReport(b.m, ord_pw, mu, Q, kappa, bs, values, True)
