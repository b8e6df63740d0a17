import math
import random

import pytest
from gmpy2 import mpq

from planebranch.branch import characteristic_sequence, validate
from planebranch.corpus import random_branch, random_branches
from planebranch.invariants import (
    OracleDisagreement,
    count_kstar_histogram,
    full_report,
    kstar_vector,
    ord_pw_closed_form,
    ord_pw_kstar,
    ord_pw_series_product,
)
from planebranch.weierstrass import ord_pw_weierstrass

CUSP = validate(2, [(3, 1)])
A4 = validate(2, [(5, 1)])
B467 = validate(4, [(6, 1), (7, 1)])
B689 = validate(6, [(8, 1), (9, 1)])
SMOOTH = validate(1, [(1, 1)])

PROPERTY_BRANCHES = random_branches(seed=2024, count=220)


def _kstar_by_hand(m, support):
    return [min(k for k in support if (k * j) % m) for j in range(1, m)]


def test_closed_form_examples():
    assert ord_pw_closed_form(characteristic_sequence(CUSP)) == 3
    assert ord_pw_closed_form(characteristic_sequence(B467)) == (4 - 2) * 6 + (2 - 1) * 7 == 19
    assert ord_pw_closed_form(characteristic_sequence(SMOOTH)) == 0


def test_kstar_examples():
    assert kstar_vector(CUSP) == [3]
    assert kstar_vector(B467) == [6, 7, 6]
    # j = 2: 16 is not a multiple of 6, so k_2* = 8; only j = 3 reaches 9
    assert kstar_vector(B689) == _kstar_by_hand(6, (8, 9)) == [8, 8, 9, 8, 8]
    assert ord_pw_kstar(B689) == 41 == (6 - 2) * 8 + (2 - 1) * 9


def test_series_product_examples():
    assert ord_pw_series_product(CUSP) == 3
    assert ord_pw_series_product(B467) == 19
    assert ord_pw_series_product(SMOOTH) == 0


def test_histogram_examples():
    assert count_kstar_histogram(CUSP) == {3: 1}
    assert count_kstar_histogram(B467) == {6: 2, 7: 1}
    assert count_kstar_histogram(B689) == {8: 4, 9: 1}


@pytest.mark.parametrize(
    "branch, ord_pw, mu, Q, kappa, bs",
    [
        (CUSP, 3, 2, mpq(2), mpq(3, 2), 2),
        (SMOOTH, 0, 0, mpq(1), mpq(0), 1),
        (B467, 19, 16, mpq(5), mpq(19, 4), 5),
        (A4, 5, 4, mpq(3), mpq(5, 2), 3),
        (B689, 41, 36, mpq(7), mpq(41, 6), 7),
    ],
)
def test_full_report_examples(branch, ord_pw, mu, Q, kappa, bs):
    r = full_report(branch)
    assert (r.ord_pw, r.mu, r.Q, r.kappa, r.bs) == (ord_pw, mu, Q, kappa, bs)
    assert r.agreement and set(r.oracle_values.values()) == {ord_pw}


def test_disagreement_is_a_hard_failure():
    with pytest.raises(OracleDisagreement) as exc:
        full_report(CUSP, extra={"fixture": 4})
    assert exc.value.values["fixture"] == 4
    assert exc.value.law == "oracle agreement"


def test_unknown_oracle():
    with pytest.raises(ValueError):
        full_report(CUSP, oracles=("magic",))


def test_four_oracles_agree_on_random_branches():
    assert len(PROPERTY_BRANCHES) >= 200
    for b in PROPERTY_BRANCHES:
        cs = characteristic_sequence(b)
        values = {
            ord_pw_closed_form(cs),
            ord_pw_kstar(b),
            ord_pw_series_product(b),
            ord_pw_weierstrass(b),
        }
        assert len(values) == 1, (b, values)


def test_kstar_laws():
    for b in PROPERTY_BRANCHES:
        ks = kstar_vector(b)
        assert ks == _kstar_by_hand(b.m, b.support)
        assert ks == ks[::-1]
        if b.m >= 2:
            hist = count_kstar_histogram(b)
            assert sum(hist.values()) == b.m - 1


def test_ceilings_and_smoothness():
    for b in PROPERTY_BRANCHES:
        r = full_report(b)
        assert r.bs == math.ceil(mpq(1 + r.ord_pw, b.m)) == math.ceil(1 + mpq(r.mu, b.m))
        assert r.mu == r.ord_pw - b.m + 1
        assert r.kappa == r.Q - mpq(1, b.m)
        assert (r.bs == 1) == (b.m == 1)


def _partial_closed_form(m, support):
    # closed form over whatever characteristic exponents the support produces
    beta, e = [], [m]
    for k in support:
        if e[-1] > 1 and k % e[-1]:
            beta.append(k)
            e.append(math.gcd(e[-1], k))
    return sum((e[l - 1] - e[l]) * beta[l - 1] for l in range(1, len(beta) + 1))


def test_new_characteristic_exponent_never_lowers_order():
    checked = 0
    for b in PROPERTY_BRANCHES:
        cs = characteristic_sequence(b)
        if len(cs.beta) < 2:
            continue
        # drop the last characteristic exponent and everything above it; the
        # remaining data is a multiple cover, then append the term back
        prefix = [k for k in b.support if k < cs.beta[-1]]
        before = _partial_closed_form(b.m, prefix)
        after = full_report(validate(b.m, [(k, c) for k, c in b.g if k <= cs.beta[-1]])).ord_pw
        assert after >= before
        assert after - before == (cs.e[-2] - 1) * cs.beta[-1]
        checked += 1
    assert checked > 10
