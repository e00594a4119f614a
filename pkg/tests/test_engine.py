from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from msum import engine
from msum.engine import (
    ceil_bound,
    grow_level_sets,
    is_m_two,
    m,
    m_of_subgroup,
    m_prime_power,
    m_table_for_modulus,
    m_value,
    naive_m_oracle,
    subgroup_key,
    two_power_m,
    verify_witness,
)
from msum.errors import DomainError, ModulusTooLarge, NotCoprime
from msum.modular import MResult, element_of_order, instance, unit_subgroup

coprime_pairs = st.integers(2, 250).flatmap(
    lambda e: st.tuples(
        st.sampled_from([q for q in range(1, e) if gcd(q, e) == 1]),
        st.just(e),
    )
)


def test_m_4_7():
    result = m(4, 7)
    assert result.value == 3
    assert result.witness == (0, 1, 2)
    assert verify_witness(4, 7, result)
    assert not is_m_two(instance(4, 7))


def test_m_paper_values():
    assert m_value(9, 11) == 3
    assert m_value(9, 121) == 5
    assert m_value(3, 26) == 6
    assert m_value(2, 5) == 2
    assert m_value(2, 7) == 3


def test_m_trivial_cases():
    assert m(7, 1) == MResult(1, (0,))
    r = m(1, 9)
    assert r.value == 9 and r.witness == (0,) * 9
    assert m(3, 2).value == 2
    assert m_value(10, 9) == 9  # 10 = 1 (mod 9)


def test_m_rejects_noncoprime():
    with pytest.raises(NotCoprime):
        m(6, 9)
    with pytest.raises(DomainError):
        m(0, 5)


def test_m_of_subgroup():
    r = m_of_subgroup(unit_subgroup(4, 7))
    assert r.value == 3 and r.witness == (0, 1, 2)
    assert m_of_subgroup(unit_subgroup(1, 11)).value == 11
    assert m_of_subgroup(unit_subgroup(5, 1)).value == 1


def test_naive_oracle_spot_values():
    assert naive_m_oracle(4, 7) == 3
    assert naive_m_oracle(2, 5) == 2
    assert naive_m_oracle(3, 8) == 4
    with pytest.raises(DomainError):
        naive_m_oracle(2, 501)


def test_engine_equals_oracle_small_exhaustive():
    for e in range(1, 121):
        table = m_table_for_modulus(e)
        for q, (mv, _) in table.items():
            assert mv == naive_m_oracle(q, e), (q, e)


def test_ceil_bound():
    assert ceil_bound(instance(4, 7)) == 3
    assert ceil_bound(instance(1, 12)) == 12
    assert ceil_bound(instance(5, 8)) == 4


def test_is_m_two_examples():
    assert is_m_two(instance(3, 2))
    assert is_m_two(instance(2, 5))
    assert not is_m_two(instance(4, 7))


def test_is_m_two_iff_m_equals_two():
    for e in range(2, 101):
        for q in range(1, e):
            if gcd(q, e) == 1:
                assert is_m_two(instance(q, e)) == (m_value(q, e) == 2), (q, e)


def test_two_power_examples():
    assert two_power_m(5, 3) == 4
    assert two_power_m(7, 3) == 2
    assert two_power_m(3, 3) == 4
    assert two_power_m(9, 0) == 1
    assert two_power_m(3, 1) == 2
    with pytest.raises(DomainError):
        two_power_m(4, 3)


def test_two_power_matches_bfs_small():
    for k in range(1, 9):
        e = 1 << k
        table = m_table_for_modulus(e)
        for q, (mv, _) in table.items():
            assert two_power_m(q, k) == mv, (q, k)


def test_verify_witness():
    assert verify_witness(4, 7, (0, 1, 2))
    assert verify_witness(9, 1, (0,))
    assert verify_witness(5, 8, (0, 0, 0, 1))
    assert not verify_witness(4, 7, (0, 1))
    assert not verify_witness(4, 7, ())
    assert verify_witness(4, 7, MResult(3, (0, 1, 2)))
    assert not verify_witness(4, 7, MResult(2, (0, 1, 2)))  # length != claimed m


@given(coprime_pairs)
def test_m_basic_invariants(pair):
    q, e = pair
    result = m(q, e)
    mv = result.value
    inst = instance(q, e)
    assert 1 <= mv <= e
    assert (mv == e) == (q % e == 1)
    assert (mv == 1) == (e == 1)
    assert mv % inst.e1 == 0
    assert mv <= ceil_bound(inst)
    assert verify_witness(q, e, result)
    assert all(0 <= a < inst.n for a in result.witness)


@given(coprime_pairs, st.integers(2, 6))
def test_m_monotone_under_powers(pair, i):
    q, e = pair
    assert m_value(q, e) <= m_value(pow(q, i, e) if e > 1 else 1, e)


@given(coprime_pairs)
def test_m_depends_only_on_reduced_base(pair):
    q, e = pair
    assert m_value(q, e) == m_value(q + e, e)


def test_subgroup_key_identifies_subgroups():
    # <2> = <8> mod 11 (8 = 2^3, gcd(3, 10) = 1) but <2> != <4>
    assert subgroup_key(unit_subgroup(2, 11)) == subgroup_key(unit_subgroup(8, 11))
    assert subgroup_key(unit_subgroup(2, 11)) != subgroup_key(unit_subgroup(4, 11))
    assert m_value(2, 11) == m_value(8, 11)


def test_level_growth_property():
    # before 0 appears, each level has at least (level index) * n residues
    for q, e in [(4, 7), (2, 101), (3, 80), (7, 200), (5, 121), (2, 169)]:
        sub = unit_subgroup(q, e)
        levels = grow_level_sets(sub)
        n = sub.order
        sizes = levels.sizes
        for t, size in enumerate(sizes[:-1], start=1):
            assert size >= t * n, (q, e, t)
        assert levels.m == m_value(q, e)


def test_level_sets_accessors():
    ls = grow_level_sets(unit_subgroup(4, 7))
    assert ls.level(1) == [1, 2, 4]
    assert ls.m == 3
    assert ls.sizes[-1] > ls.sizes[0]


def test_level_sets_grow_by_subgroup_sums():
    for q, e in [(4, 7), (2, 45), (3, 100)]:
        sub = unit_subgroup(q, e)
        ls = grow_level_sets(sub)
        prev = set(sub.elements)
        assert set(ls.level(1)) == prev
        for t in range(2, ls.m + 1):
            grown = prev | {(x + a) % e for x in prev for a in sub.elements}
            assert set(ls.level(t)) == grown, (q, e, t)
            prev = grown
        assert 0 in prev and all(0 not in ls.level(t) for t in range(1, ls.m))


def test_witness_deterministic():
    assert m(4, 7).witness == m(4, 7).witness
    a = m(3, 26).witness
    engine.clear_cache()
    assert m(3, 26).witness == a


def test_m_table_matches_m_value():
    for e in (1, 2, 7, 24, 96):
        table = m_table_for_modulus(e)
        assert set(table) == {q for q in range(1, e) if gcd(q, e) == 1}
        for q, (mv, n) in table.items():
            assert mv == m_value(q, e)
            assert n == instance(q, e).n


def test_cache_round_trip():
    engine.clear_cache()
    m_value(4, 7)
    assert engine.cache_size() >= 1
    engine.journal_start()
    m_value(3, 26)
    rows = engine.journal_drain()
    assert rows and all(len(r) == 3 for r in rows)
    engine.clear_cache()
    engine.seed_cache(rows)
    assert engine.cache_size() == len(rows)


def test_orbit_engine_matches_dense():
    for p, k, n in [(23, 3, 11), (53, 2, 13), (11, 2, 5), (101, 2, 25), (31, 1, 5)]:
        q = element_of_order(p, k, n)
        dense = m_value(q, p**k)
        mv, wit = engine._m_orbit(p**k, q, n, n, want_witness=True)
        assert mv == dense, (p, k, n)
        assert verify_witness(q, p**k, wit) and len(wit) == mv


def test_large_prime_power_routes_to_orbit():
    q = element_of_order(23, 5, 11)
    result = m(q, 23**5)
    assert result.value == 11
    assert verify_witness(q, 23**5, result)


def test_modulus_too_large():
    with pytest.raises(ModulusTooLarge):
        m(3, (1 << 24) + 4)  # beyond dense range, not an odd prime power
    with pytest.raises(ModulusTooLarge):
        m_of_subgroup(unit_subgroup(2, (1 << 23) + 1))


def test_m_prime_power_dense_and_witness():
    mv, wit = m_prime_power(9, 11, 2, want_witness=True)
    assert mv == 5 and verify_witness(9, 121, wit)
    mv, _ = m_prime_power(12, 11, 2)
    assert mv == 11  # 12 = 1 (mod 11), gcd(121, 11) = 11
