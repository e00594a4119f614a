"""Exact modular arithmetic: orders, unit subgroups, and elementary arithmetic functions.

Everything here is a pure function of its inputs; residues are canonical
representatives in [0, e). Factorization is plain trial division, which is all
that desk-scale moduli need.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import DomainError, NotCoprime

__all__ = [
    "PowerSumInstance",
    "UnitSubgroup",
    "MResult",
    "gcd",
    "factorize",
    "mul_order",
    "unit_subgroup",
    "euler_phi",
    "rad",
    "smallest_prime_divisor",
    "is_prime",
    "p_adic_w",
    "find_primitive_root",
    "element_of_order",
    "instance",
]


@dataclass(frozen=True)
class PowerSumInstance:
    """A coprime pair (q, e) with the derived quantities n = ord_e(q), e1 = gcd(e, q-1)."""

    q: int
    e: int
    n: int
    e1: int


@dataclass(frozen=True)
class UnitSubgroup:
    """The cyclic subgroup of units mod e generated by a residue."""

    modulus: int
    elements: tuple[int, ...]  # sorted residues in [0, modulus)
    order: int
    generator: int


@dataclass(frozen=True)
class MResult:
    """A computed m value together with a witness multiset of exponents.

    The witness exponents a_1 <= ... <= a_m (each in [0, n)) satisfy
    sum(q**a_i) == 0 mod e for the base the result was produced for.
    """

    value: int
    witness: tuple[int, ...]


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization by trial division, as (prime, exponent) pairs."""
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            k = 0
            while n % d == 0:
                n //= d
                k += 1
            out.append((d, k))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def euler_phi(n: int) -> int:
    if n < 1:
        raise DomainError("euler_phi requires n >= 1")
    out = n
    for p, _ in factorize(n):
        out = out // p * (p - 1)
    return out


def rad(n: int) -> int:
    """Product of the distinct prime divisors; rad(1) = 1."""
    if n < 1:
        raise DomainError("rad requires n >= 1")
    out = 1
    for p, _ in factorize(n):
        out *= p
    return out


def smallest_prime_divisor(n: int) -> int:
    if n < 2:
        raise DomainError("smallest_prime_divisor requires n >= 2")
    if n % 2 == 0:
        return 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return d
        d += 2
    return n


def _order_from_group_exponent(q: int, e: int, lam_factors: list[tuple[int, int]]) -> int:
    """Exact order of q mod e given a factored multiple of the group exponent."""
    n = 1
    for p, k in lam_factors:
        n *= p**k
    for p, k in lam_factors:
        for _ in range(k):
            if pow(q, n // p, e) == 1:
                n //= p
            else:
                break
    return n


def mul_order(q: int, e: int) -> int:
    """Multiplicative order of q modulo e (least s >= 1 with q^s == 1 mod e)."""
    if e < 1:
        raise DomainError("modulus must be >= 1")
    if e == 1:
        return 1
    q %= e
    if gcd(q, e) != 1:
        raise NotCoprime(f"gcd({q},{e}) != 1")
    # lcm of per-prime-power orders; group exponent of (Z/p^k)* is phi(p^k)
    # except for 2^k, k >= 3, where it is phi/2.
    n = 1
    for p, k in factorize(e):
        pk = p**k
        lam = euler_phi(pk)
        if p == 2 and k >= 3:
            lam //= 2
        ord_pk = _order_from_group_exponent(q % pk, pk, factorize(lam))
        n = n * ord_pk // gcd(n, ord_pk)
    return n


def order_mod_prime_power(q: int, p: int, k: int) -> int:
    """ord_{p^k}(q) for odd prime p, using the known structure of the unit group."""
    if p == 2 or not is_prime(p):
        raise DomainError(f"{p} is not an odd prime")
    if q % p == 0:
        raise DomainError(f"{p} divides q={q}")
    pk = p**k
    factors = factorize(p - 1)
    if k > 1:
        factors = factors + [(p, k - 1)]
    return _order_from_group_exponent(q % pk, pk, factors)


def unit_subgroup(q: int, e: int) -> UnitSubgroup:
    """The full element set of <q mod e>, canonically sorted."""
    if e < 1:
        raise DomainError("modulus must be >= 1")
    if e == 1:
        return UnitSubgroup(1, (0,), 1, 0)
    q %= e
    if gcd(q, e) != 1:
        raise NotCoprime(f"gcd({q},{e}) != 1")
    els = []
    x = 1
    while True:
        els.append(x)
        x = x * q % e
        if x == 1:
            break
    return UnitSubgroup(e, tuple(sorted(els)), len(els), q)


def p_adic_w(q: int, n: int, p: int) -> int:
    """Largest w with q^n == 1 (mod p^w), by modular exponentiation at successive
    p-powers. Never forms q^n - 1 in full."""
    if p == 2 or not is_prime(p):
        raise DomainError(f"{p} is not an odd prime")
    if q % p == 0:
        raise DomainError(f"p={p} divides q={q}")
    if q == 1:
        raise DomainError("w is unbounded for q = 1")
    if pow(q, n, p) != 1:
        raise DomainError(f"p={p} does not divide q^n - 1")
    w = 1
    pw = p * p
    while pow(q, n, pw) == 1:
        w += 1
        pw *= p
    return w


def find_primitive_root(p: int, k: int = 1) -> int:
    """Deterministic generator of (Z/p^k)^x for odd prime p: the smallest
    primitive root mod p, adjusted by +p if it fails to generate mod p^2."""
    if p == 2 or not is_prime(p):
        raise DomainError(f"{p} is not an odd prime")
    if k < 1:
        raise DomainError("k must be >= 1")
    prime_divs = [f for f, _ in factorize(p - 1)]
    g = 2
    while True:
        if all(pow(g, (p - 1) // f, p) != 1 for f in prime_divs):
            break
        g += 1
    if k == 1:
        return g
    if pow(g, p - 1, p * p) == 1:
        g += p
    return g


def element_of_order(p: int, k: int, n: int) -> int:
    """A residue of exact multiplicative order n mod p^k (odd prime p, n | phi(p^k))."""
    phi = p ** (k - 1) * (p - 1)
    if n < 1 or phi % n != 0:
        raise DomainError(f"n={n} does not divide phi({p}^{k}) = {phi}")
    if n == 1:
        return 1
    g = find_primitive_root(p, k)
    return pow(g, phi // n, p**k)


def instance(q: int, e: int) -> PowerSumInstance:
    """Validate and package a coprime pair with its derived quantities."""
    if q < 1 or e < 1:
        raise DomainError("q and e must be positive")
    if gcd(q, e) != 1:
        raise NotCoprime(f"gcd({q},{e}) = {gcd(q, e)} != 1")
    return PowerSumInstance(q=q, e=e, n=mul_order(q, e), e1=gcd(e, q - 1))
