"""Structural classification of pairs with large m.

Implements the small-modulus criterion m = e1 (when e < e1^2 + 2*e1), the
(a,b) parametrization of pairs with m >= e/r, the full ten-case analysis of
m >= e/6 (three of the cases are finite lists, kept as data and re-verified
against the engine by the test suite), and the k*e1 conjecture check.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from math import gcd

from .engine import m_table_for_modulus, m_value
from .errors import ClassificationOverlap, DomainError, NotCoprime
from .modular import PowerSumInstance
from .report import VerificationReport

__all__ = [
    "StarParams",
    "Corollary8Case",
    "LIST_M2",
    "LIST_N2_DOUBLE",
    "LIST_SMALL",
    "lemma3_applies",
    "star_params",
    "classify_large",
    "verify_corollary8",
    "verify_prop2",
    "corollary8_modulus",
    "prop2_modulus",
    "conjecture4_check",
    "conjecture4_k_min",
]


@dataclass(frozen=True)
class StarParams:
    """Coprime (a, b) with b < a <= r, ab <= q, and e*b = a*(q-1)."""

    a: int
    b: int


@dataclass(frozen=True)
class Corollary8Case:
    """Classifier outcome: a case tag i..x, its parameters, and the predicted m."""

    tag: str  # one of "i".."x" or "none"
    params: StarParams | None = None
    m_predicted: int | None = None


# Finite exception lists of the m >= e/6 classification. These are claims to
# test, not axioms: the test suite recomputes every entry with the engine.

# m = 2 cases, as {e: [q, ...]}
LIST_M2 = {
    5: (2, 3),
    7: (3, 5),
    9: (2, 5),
    10: (3, 7),
    11: (2, 6, 7, 8),
}

# n = 2 with m = 2*e1 > 2, as (e, q) pairs
LIST_N2_DOUBLE = (
    (8, 3), (15, 4), (16, 7), (21, 13), (24, 5), (24, 11), (33, 10),
    (35, 6), (40, 29), (45, 26), (48, 7), (55, 21), (63, 8), (77, 43),
    (80, 9), (99, 10), (120, 11),
)

# remaining small exceptions, as {e: (qs, m)}
LIST_SMALL = {
    7: ((2, 4), 3),
    11: ((3, 4, 5, 9), 3),
    13: ((3, 9), 3),
    14: ((9, 11), 4),
    15: ((2, 8), 4),
    16: ((3, 11), 4),
    20: ((3, 7), 4),
    22: ((3, 5, 9, 15), 4),
    26: ((3, 9), 6),
    48: ((5, 29), 8),
}

# Parametric families (ii)..(vii): ratio e/(q-1) = a/b plus side conditions on q.
_FAMILIES = (
    ("ii", 3, 2, lambda q: q >= 7 and gcd(6, q) == 1),
    ("iii", 4, 3, lambda q: q >= 13 and q % 6 == 1),
    ("iv", 5, 2, lambda q: q >= 7 and gcd(10, q) == 1),
    ("v", 5, 3, lambda q: q >= 7 and gcd(5, q) == 1 and q % 3 == 1),
    ("vi", 5, 4, lambda q: q >= 13 and gcd(5, q) == 1 and q % 4 == 1),
    ("vii", 6, 5, lambda q: q >= 16 and gcd(6, q) == 1 and q % 5 == 1),
)


def lemma3_applies(inst: PowerSumInstance) -> bool:
    """True iff e < e1^2 + 2*e1; the caller may then assert m = e1."""
    if not 1 < inst.q < inst.e:
        raise DomainError("lemma requires 1 < q < e")
    return inst.e < inst.e1 * inst.e1 + 2 * inst.e1


def star_params(q: int, e: int, r: int) -> StarParams | None:
    """The unique (a, b) candidate a = e/e1, b = (q-1)/e1, if it satisfies
    gcd(a,b) = 1, b < a <= r, ab <= q, and e*b = a*(q-1); otherwise None."""
    if not 1 < q < e:
        raise DomainError("star parametrization requires 1 < q < e")
    if gcd(q, e) != 1:
        raise NotCoprime(f"gcd({q},{e}) != 1")
    e1 = gcd(e, q - 1)
    a, b = e // e1, (q - 1) // e1
    ok = (
        gcd(a, b) == 1
        and b < a <= r
        and a * b <= q
        and e * b == a * (q - 1)
    )
    return StarParams(a, b) if ok else None


def classify_large(q: int, e: int) -> Corollary8Case:
    """The matching case of the m >= e/6 classification, or tag "none".

    Finite lists are consulted before the parametric families and win on a
    double match. The cases are not quite disjoint -- (e, q) = (10, 7) sits
    in both the m = 2 list and family (v) -- so an overlap is only an error
    when the matched cases disagree about m.
    """
    if gcd(q, e) != 1:
        raise NotCoprime(f"gcd({q},{e}) != 1")
    if not 1 < q < e - 1:
        raise DomainError("classification requires 1 < q < e-1")

    matches: list[Corollary8Case] = []
    if q in LIST_M2.get(e, ()):
        matches.append(Corollary8Case("viii", None, 2))
    if (e, q) in LIST_N2_DOUBLE:
        matches.append(Corollary8Case("ix", None, 2 * gcd(e, q - 1)))
    qs, mx = LIST_SMALL.get(e, ((), 0))
    if q in qs:
        matches.append(Corollary8Case("x", None, mx))
    # case (i): e = a(q-1) with integer a in 2..6
    if e % (q - 1) == 0:
        a = e // (q - 1)
        if 2 <= a <= 6 and q >= a + 1 and gcd(a, q) == 1:
            matches.append(Corollary8Case("i", StarParams(a, 1), q - 1))
    for tag, a, b, cond in _FAMILIES:
        if e * b == a * (q - 1) and cond(q):
            matches.append(Corollary8Case(tag, StarParams(a, b), e // a))
    if not matches:
        return Corollary8Case("none")
    if len({c.m_predicted for c in matches}) > 1:
        raise ClassificationOverlap(
            f"(q={q}, e={e}) matched {[c.tag for c in matches]} with conflicting m"
        )
    return matches[0]


def conjecture4_k_min(e: int, e1: int) -> int:
    """Least k >= 1 with e < (e1+1)^(k+1) - 1."""
    k = 1
    bound = (e1 + 1) ** 2 - 1
    while e >= bound:
        k += 1
        bound = bound * (e1 + 1) + e1
    return k


def conjecture4_check(q: int, e: int) -> tuple[int, bool]:
    """(k_min, holds): whether m(q,e) <= k_min * e1 at the tightest applicable k."""
    if not 1 < q < e:
        raise DomainError("conjecture check requires 1 < q < e")
    if gcd(q, e) != 1:
        raise NotCoprime(f"gcd({q},{e}) != 1")
    e1 = gcd(e, q - 1)
    k_min = conjecture4_k_min(e, e1)
    return k_min, m_value(q, e) <= k_min * e1


def verify_corollary8(e_max: int) -> VerificationReport:
    """Sweep all coprime pairs 1 < q < e-1, e <= e_max: the classifier must
    match brute force exactly, both in the m >= e/6 dichotomy and in the
    predicted values."""
    t0 = time.perf_counter()
    checks = 0
    violations: list[dict] = []
    for e in range(3, e_max + 1):
        c, v = corollary8_modulus(e)
        checks += c
        violations.extend(v)
    return VerificationReport(
        claim_id="corollary8",
        domain=f"coprime pairs, 1 < q < e-1, e <= {e_max}",
        checks=checks,
        violations=violations,
        elapsed=time.perf_counter() - t0,
        params={"e_max": e_max},
    )


def corollary8_modulus(e: int) -> tuple[int, list[dict]]:
    """One modulus worth of the m >= e/6 classification sweep."""
    checks = 0
    violations = []
    table = m_table_for_modulus(e)
    for q in range(2, e - 1):
        got = table.get(q)
        if got is None:
            continue
        mv = got[0]
        checks += 1
        case = classify_large(q, e)
        large = 6 * mv >= e
        if large != (case.tag != "none"):
            violations.append({
                "q": q, "e": e, "m": mv, "kind": "dichotomy",
                "expected": "case" if large else "none", "actual": case.tag,
            })
        elif case.tag != "none" and case.m_predicted != mv:
            violations.append({
                "q": q, "e": e, "kind": "prediction", "case": case.tag,
                "expected": case.m_predicted, "actual": mv,
            })
    return checks, violations


def verify_prop2(r: int, e_min: int, e_max: int) -> VerificationReport:
    """Sweep e in (e_min, e_max]: direction (i) for every pair admitting the
    (a,b) parametrization, and, where e > r^4 - 2r^2, the converse for every
    pair with m >= e/r."""
    if r < 2:
        raise DomainError("r must be >= 2")
    t0 = time.perf_counter()
    checks = 0
    violations: list[dict] = []
    for e in range(max(e_min + 1, 3), e_max + 1):
        c, v = prop2_modulus(e, r)
        checks += c
        violations.extend(v)
    return VerificationReport(
        claim_id="prop2",
        domain=f"r={r}, {e_min} < e <= {e_max}",
        checks=checks,
        violations=violations,
        elapsed=time.perf_counter() - t0,
        params={"r": r, "e_min": e_min, "e_max": e_max},
    )


def prop2_modulus(e: int, r: int) -> tuple[int, list[dict]]:
    """One modulus worth of the (a,b)-parametrization sweep."""
    cutoff = r**4 - 2 * r * r
    checks = 0
    violations: list[dict] = []
    table = m_table_for_modulus(e)
    for q in range(2, e):
        got = table.get(q)
        if got is None:
            continue
        mv = got[0]
        checks += 1
        sp = star_params(q, e, r)
        e1 = gcd(e, q - 1)
        if sp is not None:
            if not (mv == e1 == e // sp.a and mv * r >= e):
                violations.append({
                    "q": q, "e": e, "kind": "direction_i",
                    "a": sp.a, "b": sp.b, "e1": e1, "m": mv,
                })
        if e > cutoff and mv * r >= e and sp is None:
            violations.append({
                "q": q, "e": e, "kind": "direction_ii", "m": mv,
            })
    return checks, violations
