"""Cross-check suite run by ``planebranch verify``."""

from __future__ import annotations

from dataclasses import dataclass, field

from .branch import BranchParametrization, characteristic_sequence
from .exactnum import format_rational
from .invariants import OracleDisagreement, count_kstar_histogram, full_report, kstar_vector
from .membership import (
    DEFAULT_SEED,
    Holomorphy,
    bs_sharpness_witness,
    check_bs_inclusion,
    value_semigroup,
)
from .polynomial import Polynomial
from .weierstrass import build_weierstrass, evaluate_on_branch

LAWS = (
    "oracle agreement",
    "histogram identity",
    "k* symmetry",
    "conductor == mu",
    "weierstrass identity",
    "sharpness witness",
    "inclusion at bs",
    "failure below bs",
    "fixture values",
)


@dataclass
class LawResult:
    law: str
    passed: bool
    detail: str = ""

    def to_json_obj(self) -> dict:
        return {"law": self.law, "passed": self.passed, "detail": self.detail}


@dataclass
class CurveVerification:
    name: str
    results: list[LawResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def first_failure(self) -> LawResult | None:
        return next((r for r in self.results if not r.passed), None)

    def to_json_obj(self) -> dict:
        return {"name": self.name, "passed": self.passed, "laws": [r.to_json_obj() for r in self.results]}


def verify_branch(b: BranchParametrization, expected: dict | None = None,
                  seed: int = DEFAULT_SEED) -> CurveVerification:
    """Run every law; a failing law is recorded and later laws still run where possible."""
    out = CurveVerification(b.name or str(b))
    expected = expected or {}

    def record(law, passed, detail=""):
        out.results.append(LawResult(law, bool(passed), detail))

    extra = {"fixture": expected["ord_pw"]} if "ord_pw" in expected else None
    try:
        report = full_report(b, extra=extra)
        record("oracle agreement", True, f"ord = {report.ord_pw} by {', '.join(report.oracle_values)}")
    except OracleDisagreement as exc:
        record("oracle agreement", False, str(exc))
        try:
            report = full_report(b)
        except OracleDisagreement:
            return out

    if b.m >= 2:
        try:
            hist = count_kstar_histogram(b)
            record("histogram identity", True, str(hist))
        except ArithmeticError as exc:
            record("histogram identity", False, str(exc))
    ks = kstar_vector(b)
    record("k* symmetry", ks == ks[::-1], str(ks))

    semigroup = value_semigroup(b)
    record("conductor == mu", semigroup.conductor == report.mu,
           f"conductor {semigroup.conductor}, mu {report.mu}")

    residue = evaluate_on_branch(build_weierstrass(b), b)
    record("weierstrass identity", residue.is_zero() and residue.is_exact, residue.format())

    if b.m >= 2:
        try:
            witness = bs_sharpness_witness(b)
            record("sharpness witness", witness.classification is Holomorphy.WEAK_ONLY,
                   f"ord psi = {witness.ord_psi} = ord_pw - m, {witness.classification.value}")
        except ArithmeticError as exc:
            record("sharpness witness", False, str(exc))

    z = Polynomial.z()
    failures = []
    for l in (1, 2, 3):
        rep = check_bs_inclusion(b, z, l, k=report.bs, seed=seed)
        failures.extend(rep.failures)
    record("inclusion at bs", not failures, failures[0] if failures else f"k = {report.bs}, l = 1..3")
    if b.m >= 2:
        missing = [l for l in (1, 2, 3)
                   if not check_bs_inclusion(b, z, l, k=report.bs - 1, seed=seed).failures]
        record("failure below bs", not missing,
               f"no counterexample for l = {missing}" if missing else f"k = {report.bs - 1} fails")

    mismatches = []
    actual = {
        "mu": report.mu,
        "bs": report.bs,
        "Q": format_rational(report.Q),
        "kappa": format_rational(report.kappa),
        "semigroup": list(semigroup.generators),
        "conductor": semigroup.conductor,
        "beta": list(characteristic_sequence(b).beta),
    }
    for key, value in expected.items():
        if key in actual and actual[key] != value:
            mismatches.append(f"{key}: expected {value}, got {actual[key]}")
    if expected:
        record("fixture values", not mismatches, "; ".join(mismatches))
    return out
