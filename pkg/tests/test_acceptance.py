"""Acceptance criteria, one test each.  ``pytest`` prints a PASS/FAIL line per criterion."""

import time

import pytest
from gmpy2 import mpq

from planebranch.branch import characteristic_sequence, validate
from planebranch.corpus import load_corpus, random_branches
from planebranch.exactnum import ceil_rational
from planebranch.invariants import (
    ORACLES,
    count_kstar_histogram,
    full_report,
    kstar_vector,
    ord_pw_closed_form,
)
from planebranch.membership import (
    Holomorphy,
    _cached_closure,
    bs_sharpness_witness,
    check_bs_inclusion,
    value_semigroup,
)
from planebranch.polynomial import Polynomial
from planebranch.weierstrass import build_weierstrass, evaluate_on_branch

criterion = pytest.mark.criterion


def _check(b, ord_pw, mu, bs, kappa, Q=None):
    r = full_report(b)
    assert set(r.oracle_values) == set(ORACLES)
    assert set(r.oracle_values.values()) == {ord_pw}
    assert (r.ord_pw, r.mu, r.bs, r.kappa) == (ord_pw, mu, bs, kappa)
    if Q is not None:
        assert r.Q == Q
    return r


@criterion(1, "cusp: ord 3, mu 2, Q 2, kappa 3/2, bs 2, four oracles agree, < 0.1 s")
def test_cusp():
    start = time.perf_counter()
    _check(validate(2, [(3, 1)]), 3, 2, 2, mpq(3, 2), Q=2)
    assert time.perf_counter() - start < 0.1


@criterion(2, "(2; 5): ord 5, mu 4, bs 3, kappa 5/2, semigroup <2, 5> with conductor 4")
def test_a4():
    b = validate(2, [(5, 1)])
    _check(b, 5, 4, 3, mpq(5, 2))
    S = value_semigroup(b)
    assert S.generators == (2, 5) and S.conductor == 4


@criterion(3, "(4; 6, 7): beta (6, 7), e (4, 2, 1), ord 19, mu 16, bs 5, kappa 19/4, <4, 6, 13>, "
              "conductor 16, k* (6, 7, 6)")
def test_b467():
    b = validate(4, [(6, 1), (7, 1)])
    cs = characteristic_sequence(b)
    assert cs.beta == (6, 7) and cs.e == (4, 2, 1)
    assert ord_pw_closed_form(cs) == (4 - 2) * 6 + (2 - 1) * 7 == 19
    _check(b, 19, 16, 5, mpq(19, 4))
    S = value_semigroup(b)
    assert S.generators == (4, 6, 13) and S.conductor == 16
    assert kstar_vector(b) == [6, 7, 6]


@criterion(4, "(6; 8, 9): ord 41, mu 36, bs 7, histogram {8: 4, 9: 1} equals e-differences")
def test_b689():
    b = validate(6, [(8, 1), (9, 1)])
    r = full_report(b)
    assert (r.ord_pw, r.mu, r.bs) == (41, 36, 7)
    cs = characteristic_sequence(b)
    hist = count_kstar_histogram(b)
    assert hist == {8: 4, 9: 1}
    assert [hist[beta] for beta in cs.beta] == [cs.e[i] - cs.e[i + 1] for i in range(len(cs.beta))]


@criterion(5, "smooth branch: bs 1, ord 0, mu 0")
def test_smooth():
    r = full_report(validate(1, [(1, 1)]))
    assert (r.bs, r.ord_pw, r.mu) == (1, 0, 0)


@criterion(6, "200 seeded random branches: oracles agree, bs identities, conductor == mu, "
              "k* symmetry, histogram, < 60 s")
def test_property_suite():
    _cached_closure.cache_clear()
    start = time.perf_counter()
    branches = random_branches(seed=6006, count=200, max_m=8, max_terms=6, max_exp=60)
    assert len(branches) >= 200
    for b in branches:
        assert b.m <= 8 and len(b.g) <= 6 and b.max_exponent <= 60
        r = full_report(b)
        assert len(set(r.oracle_values.values())) == 1 and len(r.oracle_values) == 4
        assert r.bs == ceil_rational(mpq(1 + r.ord_pw, b.m)) == ceil_rational(1 + mpq(r.mu, b.m))
        assert value_semigroup(b).conductor == r.mu
        ks = kstar_vector(b)
        assert ks == ks[::-1]
        if b.m >= 2:
            count_kstar_histogram(b)
    assert time.perf_counter() - start < 60


@criterion(7, "corpus sharpness: P'_w/z WeakOnly of order ord - m; inclusion holds at bs, "
              "fails at bs - 1, for l = 1, 2, 3; < 120 s")
def test_sharpness_and_inclusion():
    _cached_closure.cache_clear()
    start = time.perf_counter()
    z = Polynomial.z()
    singular = [b for b in load_corpus() if b.m >= 2]
    assert len(singular) >= 20
    for b in singular:
        r = full_report(b)
        witness = bs_sharpness_witness(b)
        assert witness.classification is Holomorphy.WEAK_ONLY
        assert witness.ord_psi == r.ord_pw - b.m
        for l in (1, 2, 3):
            assert check_bs_inclusion(b, z, l, k=r.bs).ok, (b, l)
            assert check_bs_inclusion(b, z, l, k=r.bs - 1).failures, (b, l)
    assert time.perf_counter() - start < 120


@criterion(8, "Weierstrass: P(t^m, g(t)) == 0 on the corpus; cusp gives w^2 - z^3")
def test_weierstrass():
    for b in load_corpus():
        residue = evaluate_on_branch(build_weierstrass(b), b)
        assert residue.is_zero() and residue.is_exact
    assert build_weierstrass(validate(2, [(3, 1)])).format() == "w^2 - z^3"
