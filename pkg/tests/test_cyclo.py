from fractions import Fraction
from math import gcd

import numpy as np
import pytest

from msum.cyclo import (
    ExceptionSet,
    IntPolynomial,
    bezout_denominator,
    candidate_scan,
    corollary13_exceptions,
    cyclotomic,
    prop11_candidates,
    resultant,
    threshold,
)
from msum.engine import m_value
from msum.errors import DegenerateInput, DomainError
from msum.modular import euler_phi, rad, smallest_prime_divisor


def poly(*coeffs):
    return IntPolynomial.make(coeffs)


def test_cyclotomic_small():
    assert cyclotomic(1).coeffs == (-1, 1)
    assert cyclotomic(5).coeffs == (1, 1, 1, 1, 1)
    assert cyclotomic(6).coeffs == (1, -1, 1)
    assert cyclotomic(12).coeffs == (1, 0, -1, 0, 1)


def test_cyclotomic_reconstruction():
    for n in range(1, 121):
        prod = poly(1)
        for d in range(1, n + 1):
            if n % d == 0:
                prod = prod * cyclotomic(d)
        want = [-1] + [0] * (n - 1) + [1]
        assert prod.coeffs == tuple(want), n
        assert cyclotomic(n).degree == euler_phi(n)


def test_int_polynomial_ops():
    f = poly(1, 2) * poly(-1, 1)  # (1+2X)(X-1) = -1 - X + 2X^2
    assert f.coeffs == (-1, -1, 2)
    quo, rem = f.divmod_monic(poly(-1, 1))
    assert quo.coeffs == (1, 2) and rem.is_zero
    assert f(3) == 14
    with pytest.raises(DomainError):
        f.divmod_monic(poly(1, 2))


def test_threshold_values():
    assert threshold(5) == 5
    assert threshold(7) == 7
    assert threshold(35) == Fraction(35, 11)
    assert threshold(2) == 2
    with pytest.raises(DomainError):
        threshold(1)


def test_threshold_properties_to_2000():
    for n in range(2, 2001):
        thr = threshold(n)
        assert thr == threshold(rad(n))
        r = smallest_prime_divisor(n)
        assert thr <= r
        if rad(n) == smallest_prime_divisor(n):  # prime power
            assert thr > r - 1


def test_bezout_denominator_basics():
    assert bezout_denominator(poly(1), 5) == 1
    assert bezout_denominator(poly(1, 1), 5) == 1  # Phi_5(-1) = 1
    with pytest.raises(DegenerateInput):
        bezout_denominator(cyclotomic(5), 5)
    with pytest.raises(DegenerateInput):
        bezout_denominator(IntPolynomial(()), 5)


def test_bezout_identity_and_common_divisor_property():
    # d is hit by the Bezout combination, so any e dividing both g(q) and
    # Phi_n(q) divides d; check on the tuple (0,1,2) for n = 5 at q = 3
    g = poly(1, 1, 1)
    d = bezout_denominator(g, 5)
    phi5 = cyclotomic(5)
    for q in range(2, 50):
        common = gcd(g(q), phi5(q))
        assert d % gcd(common, d) == 0
        assert common == 0 or d % common == 0 or gcd(common, d) == common


def test_bezout_divides_resultant():
    from msum.cyclo import _exponent_tuples, _tuple_poly

    for n in (5, 7):
        phi_n = cyclotomic(n)
        for t in _exponent_tuples(n):
            g = _tuple_poly(t)
            d = bezout_denominator(g, n)
            res = resultant(g, phi_n)
            assert res != 0
            assert abs(res) % d == 0, (n, t)


def test_resultant_against_root_evaluation():
    # res(X - a, g) = +/- g(a) up to the leading-coefficient convention
    g = poly(2, 0, 1)  # X^2 + 2
    for a in range(-3, 4):
        assert abs(resultant(poly(-a, 1), g)) == abs(g(a))
    assert resultant(poly(3), poly(1, 1, 1)) == 9  # constant^deg
    assert resultant(poly(1, 1), poly(1, 1)) == 0  # common root


def test_prop11_candidates_trivial_cases():
    # threshold 2 or 3/2 forces m = 1, whose only tuple is g = 1 with d = 1
    assert prop11_candidates(2) == {1}
    assert prop11_candidates(6) == {1}
    assert prop11_candidates(4) == {1}
    c5 = prop11_candidates(5)
    assert {11, 61} <= c5


def test_candidate_scan_reports_everything():
    scan = candidate_scan(5)
    assert scan.tuples_examined == 25  # 35 admissible tuples, 25 rotation classes
    assert scan.unresolved == ()
    assert all(d >= 1 for d in scan.d_values)
    assert set(scan.d_values) == {1, 2, 3, 4, 11, 61}


def test_corollary13_exceptions_n5():
    exc = corollary13_exceptions(5)
    assert exc.entries == ((11, 1, 3), (61, 1, 4))
    assert exc.threshold == 5
    assert exc.complete
    assert {11, 61} <= exc.candidate_pool


def test_corollary13_exceptions_n4_empty():
    exc = corollary13_exceptions(4)
    assert exc.entries == ()
    assert exc.complete


def test_corollary13_respects_k_cap():
    exc = corollary13_exceptions(5, k_cap=0)
    assert exc.entries == ()


def _phi_n_roots_mod_e(n: int, e_max: int):
    """(q, e) pairs with e | Phi_n(q), gcd(q, e) = 1, e <= e_max, via a
    vectorized Horner scan independent of the candidate machinery."""
    coeffs = cyclotomic(n).coeffs
    out = []
    for e in range(2, e_max + 1):
        qs = np.arange(e, dtype=np.int64)
        acc = np.zeros(e, dtype=np.int64)
        for c in reversed(coeffs):
            acc = (acc * qs + c) % e
        hits = np.nonzero(acc == 0)[0]
        for q in hits:
            q = int(q)
            if q >= 1 and gcd(q, e) == 1:
                out.append((q, e))
    return out


@pytest.mark.parametrize("n,e_max", [(5, 3000), (7, 3000)])
def test_prop11_soundness_sweep(n, e_max):
    candidates = prop11_candidates(n)
    thr = threshold(n)
    checked = 0
    for q, e in _phi_n_roots_mod_e(n, e_max):
        if m_value(q, e) < thr:
            checked += 1
            assert e in candidates, (q, e)
    assert checked > 0


@pytest.mark.slow
@pytest.mark.parametrize("n,e_max", [(11, 3000), (13, 3000)])
def test_prop11_soundness_sweep_large_n(n, e_max):
    candidates = prop11_candidates(n, jobs=2)
    thr = threshold(n)
    for q, e in _phi_n_roots_mod_e(n, e_max):
        if m_value(q, e) < thr:
            assert e in candidates, (q, e)


def test_candidate_scan_parallel_agrees():
    serial = candidate_scan(7, jobs=1)
    parallel = candidate_scan(7, jobs=2)
    assert serial.d_values == parallel.d_values
    assert serial.tuples_examined == parallel.tuples_examined


def test_exception_set_type():
    exc = corollary13_exceptions(5)
    assert isinstance(exc, ExceptionSet)
    assert isinstance(exc.threshold, Fraction)
