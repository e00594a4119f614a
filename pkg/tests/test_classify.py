from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from msum.classify import (
    LIST_M2,
    LIST_N2_DOUBLE,
    LIST_SMALL,
    StarParams,
    classify_large,
    conjecture4_check,
    lemma3_applies,
    star_params,
    verify_corollary8,
    verify_prop2,
)
from msum.engine import is_m_two, m_value
from msum.errors import DomainError
from msum.modular import instance, mul_order


def test_lemma3_examples():
    assert lemma3_applies(instance(5, 8))
    assert m_value(5, 8) == instance(5, 8).e1 == 4
    assert not lemma3_applies(instance(2, 5))
    # e1(4,7) = gcd(7,3) = 1, so the inequality 7 < 3 fails
    assert not lemma3_applies(instance(4, 7))


def test_lemma3_conclusion_holds_when_applicable():
    for e in range(3, 250):
        for q in range(2, e):
            if gcd(q, e) != 1:
                continue
            inst = instance(q, e)
            if lemma3_applies(inst):
                assert m_value(q, e) == inst.e1, (q, e)


def test_star_params_examples():
    assert star_params(7, 9, 6) == StarParams(3, 2)
    assert star_params(5, 8, 6) == StarParams(2, 1)
    assert star_params(2, 5, 6) is None


def test_star_params_against_exhaustive_search():
    for e in range(3, 80):
        for q in range(2, e):
            if gcd(q, e) != 1:
                continue
            for r in (2, 4, 6):
                brute = None
                for a in range(1, r + 1):
                    for b in range(1, a):
                        if (gcd(a, b) == 1 and a * b <= q
                                and e * b == a * (q - 1)):
                            brute = StarParams(a, b)
                assert star_params(q, e, r) == brute, (q, e, r)


def test_star_params_domain():
    with pytest.raises(DomainError):
        star_params(1, 9, 6)
    with pytest.raises(DomainError):
        star_params(9, 9, 6)


def test_classify_examples():
    case = classify_large(13, 16)
    assert case.tag == "iii" and case.m_predicted == 4 == m_value(13, 16)
    case = classify_large(13, 21)
    assert case.tag == "ix" and case.m_predicted == 6 == m_value(13, 21)
    case = classify_large(9, 26)
    assert case.tag == "x" and case.m_predicted == 6 == m_value(9, 26)
    case = classify_large(7, 16)
    assert case.tag == "ix" and case.m_predicted == 4
    assert classify_large(2, 13).tag == "none"  # m = 2 < 13/6


def test_classify_overlap_pair_resolved_by_list_priority():
    # (10, 7) sits in both the m=2 list and family (v); predictions agree
    case = classify_large(7, 10)
    assert case.tag == "viii" and case.m_predicted == 2 == m_value(7, 10)


def test_classify_domain_errors():
    with pytest.raises(DomainError):
        classify_large(1, 9)
    with pytest.raises(DomainError):
        classify_large(8, 9)


def test_exception_lists_reverified_against_engine():
    for e, qs in LIST_M2.items():
        for q in qs:
            assert m_value(q, e) == 2
            assert is_m_two(instance(q, e))
    for e, q in LIST_N2_DOUBLE:
        e1 = gcd(e, q - 1)
        assert mul_order(q, e) == 2
        assert m_value(q, e) == 2 * e1 > 2
    for e, (qs, mx) in LIST_SMALL.items():
        for q in qs:
            assert m_value(q, e) == mx


def _exceptional_pairs():
    out = []
    for e, qs in LIST_M2.items():
        out.extend((e, q, 2) for q in qs)
    for e, q in LIST_N2_DOUBLE:
        out.append((e, q, 2 * gcd(e, q - 1)))
    for e, (qs, mx) in LIST_SMALL.items():
        out.extend((e, q, mx) for q in qs)
    return out


@pytest.mark.parametrize("c", [2, 3, 4, 5, 6])
def test_largest_exceptional_case(c):
    qualifying = [(e, q) for e, q, mv in _exceptional_pairs() if mv * c >= e]
    cap = 4 * c * c - 4 * c
    assert all(e <= cap for e, _ in qualifying)
    assert (cap, 2 * c - 1) in qualifying


def test_conjecture4_examples():
    assert conjecture4_check(5, 8) == (1, True)
    assert conjecture4_check(2, 5) == (2, True)


@given(st.integers(2, 60))
def test_conjecture4_when_e1_is_q_minus_1(q):
    # e = 2(q-1) has e1 = q-1 when q is odd; the claim is proven there
    if q % 2 == 0:
        return
    e = 2 * (q - 1)
    if e > q and gcd(q, e) == 1:
        _, holds = conjecture4_check(q, e)
        assert holds


def test_verify_corollary8_small():
    report = verify_corollary8(60)
    assert report.ok and report.checks > 0


def test_verify_prop2_r2():
    report = verify_prop2(2, 8, 300)
    assert report.ok and report.checks > 0


def test_verify_prop2_rejects_bad_r():
    with pytest.raises(DomainError):
        verify_prop2(1, 8, 100)
