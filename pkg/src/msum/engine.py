"""m(q,e) engine.

The minimal number of powers of q summing to 0 mod e is found by
breadth-first sumset growth over Z/eZ: level t holds every residue reachable
as a sum of at most t subgroup elements, and m is the first level containing
0. Levels are bitmasks (one Python int per level), frontier-only expansion,
witnesses reconstructed by walking the level masks backwards.

Two extra routes exist:
  - a subgroup-keyed value cache, because m depends only on the generated
    subgroup, which collapses sweeps over q;
  - a sparse orbit engine for prime-power moduli far beyond bitmask range
    (up to 2^40), exploiting that the reachable sets are closed under
    multiplication by the generator, so only one canonical representative
    per orbit is stored, and meet-in-the-middle over half-length sums.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from math import gcd

import numpy as np

from .errors import DomainError, ModulusTooLarge, MsumError, NotCoprime
from .modular import (
    MResult,
    PowerSumInstance,
    UnitSubgroup,
    order_mod_prime_power,
    smallest_prime_divisor,
    unit_subgroup,
)

__all__ = [
    "DENSE_LIMIT",
    "SPARSE_LIMIT",
    "LevelSets",
    "SubgroupKey",
    "subgroup_key",
    "grow_level_sets",
    "m_of_subgroup",
    "m",
    "m_value",
    "m_table_for_modulus",
    "m_prime_power",
    "ceil_bound",
    "is_m_two",
    "two_power_m",
    "verify_witness",
    "naive_m_oracle",
    "clear_cache",
    "cache_size",
    "journal_start",
    "journal_drain",
    "seed_cache",
]

DENSE_LIMIT = 1 << 22  # largest modulus handled by the bitmask BFS
SPARSE_LIMIT = 1 << 40  # largest modulus handled by the orbit engine

_MUL_SPLIT = 19  # limb split for overflow-free int64 mulmod (needs modulus < 2^40)


@dataclass(frozen=True)
class SubgroupKey:
    """Canonical fingerprint of a unit subgroup; equal subgroups, equal keys."""

    modulus: int
    digest: bytes

    @property
    def hex(self) -> str:
        return self.digest.hex()


@dataclass(frozen=True)
class LevelSets:
    """Cumulative reachable sets A_1 c A_2 c ... of the sumset growth.

    masks[t-1] is the bitmask of residues expressible as a sum of at most t
    subgroup elements; the last level is the first containing 0.
    """

    modulus: int
    masks: tuple[int, ...]
    frontier: int

    @property
    def m(self) -> int:
        return len(self.masks)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(mask.bit_count() for mask in self.masks)

    def level(self, t: int) -> list[int]:
        mask = self.masks[t - 1]
        return [i for i in range(self.modulus) if (mask >> i) & 1]


# ---------------------------------------------------------------------------
# subgroup-keyed cache

_cache: dict[tuple[int, bytes], int] = {}
_journal: list[tuple[int, bytes, int]] | None = None


def _fingerprint(elements: tuple[int, ...]) -> bytes:
    h = hashlib.blake2b(digest_size=16)
    for x in elements:
        h.update(x.to_bytes(8, "little"))
    return h.digest()


def subgroup_key(sub: UnitSubgroup) -> SubgroupKey:
    return SubgroupKey(sub.modulus, _fingerprint(sub.elements))


def clear_cache() -> None:
    _cache.clear()


def cache_size() -> int:
    return len(_cache)


def seed_cache(rows) -> None:
    """Preload (modulus, digest, m) rows, e.g. from a persisted ResultStore."""
    for e, digest, value in rows:
        _cache[(e, digest)] = value


def journal_start() -> None:
    """Begin recording cache inserts (used by sweep workers feeding a store)."""
    global _journal
    _journal = []


def journal_drain() -> list[tuple[int, bytes, int]]:
    global _journal
    rows, _journal = _journal or [], None
    return rows


# ---------------------------------------------------------------------------
# dense bitmask BFS

def _bfs_dense(e: int, elements: tuple[int, ...], keep_masks: bool):
    """Returns (m, masks or None). Level masks are cumulative reachable sets."""
    full = (1 << e) - 1
    amask = 0
    for a in elements:
        amask |= 1 << a
    seen = amask
    frontier = amask
    masks = [seen] if keep_masks else None
    levels = 1
    while not (seen & 1):
        acc = 0
        for a in elements:
            acc |= frontier << a
        acc = (acc | (acc >> e)) & full
        frontier = acc & ~seen
        seen |= frontier
        levels += 1
        if keep_masks:
            masks.append(seen)
    return levels, masks


def _witness_residues(e: int, elements: tuple[int, ...], masks: list[int]) -> list[int]:
    """Walk the level masks back from 0; ties broken by smallest element added."""
    out = []
    x = 0
    for t in range(len(masks) - 1, 0, -1):
        prev = masks[t - 1]
        for a in elements:
            y = (x - a) % e
            if (prev >> y) & 1:
                out.append(a)
                x = y
                break
        else:
            raise MsumError("witness backtrack failed (engine bug)")
    out.append(x)
    return out


def _cached_m_dense(e: int, elements: tuple[int, ...]) -> int:
    key = (e, _fingerprint(elements))
    hit = _cache.get(key)
    if hit is not None:
        return hit
    value, _ = _bfs_dense(e, elements, keep_masks=False)
    _cache.setdefault(key, value)
    if _journal is not None:
        _journal.append((key[0], key[1], value))
    return value


def grow_level_sets(sub: UnitSubgroup) -> LevelSets:
    """Full level-set profile of a subgroup, for growth-property checks."""
    if sub.modulus > DENSE_LIMIT:
        raise ModulusTooLarge(f"modulus {sub.modulus} beyond dense BFS range")
    _, masks = _bfs_dense(sub.modulus, sub.elements, keep_masks=True)
    frontier = masks[-1] & ~masks[-2] if len(masks) > 1 else masks[0]
    return LevelSets(sub.modulus, tuple(masks), frontier)


# ---------------------------------------------------------------------------
# sparse orbit engine (prime-power moduli beyond bitmask range)

def _mulmod_vec(x: np.ndarray, c: int, p_mod: int) -> np.ndarray:
    c_hi, c_lo = divmod(c, 1 << _MUL_SPLIT)
    return (((x * c_hi % p_mod) << _MUL_SPLIT) + x * c_lo) % p_mod


def _m_orbit(p_mod: int, q: int, n: int, t_cap: int, want_witness: bool):
    """Minimal t with a vanishing t-sum over the orbit {q^i mod p_mod}.

    Requires ord(q) = n >= 2 and p_mod < 2^40. The reachable sets of exact
    s-sums are orbit-closed, so each is stored as sorted canonical (orbit-
    minimum) representatives; 0 in f_t is detected as a collision between
    representatives of f_s1 and -f_s2 with s1 + s2 = t.
    """
    if p_mod >= SPARSE_LIMIT:
        raise ModulusTooLarge(f"modulus {p_mod} beyond orbit engine range (2^40)")
    powers = [1]
    for _ in range(n - 1):
        powers.append(powers[-1] * q % p_mod)
    exp_of = {v: i for i, v in enumerate(powers)}
    pw = np.array(powers, dtype=np.int64)

    def orbit_min(x: np.ndarray) -> np.ndarray:
        best = x.copy()
        cur = x
        for _ in range(n - 1):
            cur = _mulmod_vec(cur, q, p_mod)
            np.minimum(best, cur, out=best)
        return best

    def orbit_min_scalar(z: int) -> int:
        best = z
        cur = z
        for _ in range(n - 1):
            cur = cur * q % p_mod
            if cur < best:
                best = cur
        return best

    reps: dict[int, np.ndarray] = {
        0: np.array([0], dtype=np.int64),
        1: np.unique(orbit_min(pw)),
    }
    negs: dict[int, np.ndarray] = {}

    def level(s: int) -> np.ndarray:
        while max(reps) < s:
            top = max(reps)
            base = reps[top]
            acc = None
            for power in powers:
                cand = np.unique(orbit_min((base + power) % p_mod))
                acc = cand if acc is None else np.union1d(acc, cand)
            reps[top + 1] = acc
        return reps[s]

    def neg_level(s: int) -> np.ndarray:
        if s not in negs:
            negs[s] = np.unique(orbit_min((p_mod - level(s)) % p_mod))
        return negs[s]

    def contains(s: int, z: int) -> bool:
        arr = reps[s]
        i = int(np.searchsorted(arr, z))
        return i < arr.size and int(arr[i]) == z

    hit = None
    for t in range(1, t_cap + 1):
        s1 = (t + 1) // 2
        common = np.intersect1d(level(s1), neg_level(t - s1), assume_unique=True)
        if common.size:
            hit = (t, s1, int(common[0]))
            break
    if hit is None:
        raise MsumError(
            f"orbit engine found no vanishing sum of length <= {t_cap} "
            f"(mod {p_mod}, order {n}); bound violated or bad inputs"
        )
    t, s1, c = hit
    if not want_witness:
        return t, None

    def realize(z: int, s: int) -> list[int]:
        exps = []
        for lvl in range(s, 1, -1):
            for l, power in enumerate(powers):
                z2 = (z - power) % p_mod
                if contains(lvl - 1, orbit_min_scalar(z2)):
                    exps.append(l)
                    z = z2
                    break
            else:
                raise MsumError("orbit witness backtrack failed (engine bug)")
        exps.append(exp_of[z])
        return exps

    witness = realize(c, s1)
    if t - s1:
        witness += realize((p_mod - c) % p_mod, t - s1)
    return t, tuple(sorted(witness))


# ---------------------------------------------------------------------------
# public m computations

def _powers_of(q: int, e: int) -> list[int]:
    if e == 1:
        return [0]
    powers = [1]
    x = q % e
    while x != 1:
        powers.append(x)
        x = x * q % e
    return powers


def _to_exponents(residues: list[int], powers: list[int]) -> tuple[int, ...]:
    exp_of = {v: i for i, v in enumerate(powers)}
    return tuple(sorted(exp_of[r] for r in residues))


def _dense_with_witness(e: int, elements: tuple[int, ...],
                        base: int) -> tuple[int, tuple[int, ...]]:
    value, masks = _bfs_dense(e, elements, keep_masks=True)
    _cache.setdefault((e, _fingerprint(elements)), value)
    residues = _witness_residues(e, elements, masks)
    return value, _to_exponents(residues, _powers_of(base, e))


def m_of_subgroup(sub: UnitSubgroup, with_witness: bool = True) -> MResult:
    """Minimal t with a vanishing t-sum over the subgroup, by dense BFS.

    Witness exponents are relative to the subgroup's generator.
    """
    e = sub.modulus
    if e > DENSE_LIMIT:
        raise ModulusTooLarge(
            f"modulus {e} beyond dense BFS range; use m() / prime-power routes"
        )
    if not with_witness:
        return MResult(_cached_m_dense(e, sub.elements), ())
    return MResult(*_dense_with_witness(e, sub.elements, sub.generator))


def _check_coprime(q: int, e: int) -> None:
    if q < 1 or e < 1:
        raise DomainError("q and e must be positive")
    if gcd(q, e) != 1:
        raise NotCoprime(f"gcd({q},{e}) = {gcd(q, e)} != 1")


def m(q: int, e: int, with_witness: bool = True) -> MResult:
    """m(q,e) with a verified-style witness whose exponents refer to q itself."""
    _check_coprime(q, e)
    if e == 1:
        return MResult(1, (0,))
    qr = q % e
    if qr == 1:
        # q = 1 (mod e): every power is 1, so exactly e terms are needed
        return MResult(e, (0,) * e)
    if e <= DENSE_LIMIT:
        sub = unit_subgroup(qr, e)
        if not with_witness:
            return MResult(_cached_m_dense(e, sub.elements), ())
        return MResult(*_dense_with_witness(e, sub.elements, qr))
    value, witness = _large_modulus_m(qr, e, with_witness)
    return MResult(value, witness if witness is not None else ())


def _large_modulus_m(q: int, e: int, want_witness: bool):
    fac = _prime_power_shape(e)
    if fac is None:
        raise ModulusTooLarge(
            f"modulus {e} beyond dense BFS range and not an odd prime power"
        )
    p, k = fac
    n = order_mod_prime_power(q, p, k)
    if n % p == 0:
        raise ModulusTooLarge(
            f"modulus {e}: order divisible by {p}; reduce via the prime-power tower"
        )
    return _m_orbit(e, q, n, smallest_prime_divisor(n), want_witness)


def _prime_power_shape(e: int) -> tuple[int, int] | None:
    """(p, k) if e is an odd-prime power, else None. Trial division only."""
    if e % 2 == 0:
        return None
    d = 3
    while d * d <= e:
        if e % d == 0:
            k = 0
            while e % d == 0:
                e //= d
                k += 1
            return (d, k) if e == 1 else None
        d += 2
    return (e, 1)


def m_value(q: int, e: int) -> int:
    """m(q,e) without witness reconstruction (cache-backed fast path)."""
    return m(q, e, with_witness=False).value


def m_prime_power(q: int, p: int, k: int, want_witness: bool = False):
    """(m, witness|None) at modulus p^k, odd prime p, routing dense vs orbit.

    The orbit route requires the order of q mod p^k to be prime to p; callers
    in that regime must reduce k first (the order drop of the tower module).
    """
    e = p**k
    q %= e
    if q == 1:
        return e, ((0,) * e if want_witness else None)
    if e <= DENSE_LIMIT:
        sub = unit_subgroup(q, e)
        if not want_witness:
            return _cached_m_dense(e, sub.elements), None
        return _dense_with_witness(e, sub.elements, q)
    n = order_mod_prime_power(q, p, k)
    if n % p == 0:
        raise ModulusTooLarge(
            f"modulus {p}^{k}: order {n} divisible by {p} is beyond the exact engines"
        )
    return _m_orbit(e, q, n, smallest_prime_divisor(n), want_witness)


def m_table_for_modulus(e: int) -> dict[int, tuple[int, int]]:
    """q -> (m, ord) for every q in [1, e) coprime to e.

    Walks generator classes: one BFS per distinct subgroup, then every
    generator of that subgroup inherits the value.
    """
    if e > DENSE_LIMIT:
        raise ModulusTooLarge(f"modulus {e} beyond dense BFS range")
    table: dict[int, tuple[int, int]] = {}
    for q in range(1, e):
        if q in table or gcd(q, e) != 1:
            continue
        powers = _powers_of(q, e)
        n = len(powers)
        value = _cached_m_dense(e, tuple(sorted(powers)))
        for j in range(n):
            if gcd(j, n) == 1:
                table[powers[j]] = (value, n)
    return table


# ---------------------------------------------------------------------------
# closed forms and checks

def ceil_bound(inst: PowerSumInstance) -> int:
    """ceil(e / n), the sumset-growth upper bound for m."""
    return -(-inst.e // inst.n)


def is_m_two(inst: PowerSumInstance) -> bool:
    """m = 2 iff e = 2, or n is even with q^(n/2) = -1 (mod e)."""
    if inst.e == 2:
        return True
    return inst.n % 2 == 0 and pow(inst.q, inst.n // 2, inst.e) == inst.e - 1


def two_power_m(q: int, k: int) -> int:
    """Closed form for e = 2^k and odd q: gcd(e, q-1) if q = 1 (mod 4),
    2 if q = -1 (mod e), 4 otherwise."""
    if q % 2 == 0:
        raise DomainError("q must be odd for two-power moduli")
    if k < 0:
        raise DomainError("k must be >= 0")
    e = 1 << k
    if k == 0:
        return 1
    if q % 4 == 1:
        return gcd(e, q - 1)
    if q % e == e - 1:
        return 2
    return 4


def verify_witness(q: int, e: int, witness) -> bool:
    """Check that the witness exponents produce a vanishing sum of the claimed length."""
    if isinstance(witness, MResult):
        exps = witness.witness
        if len(exps) != witness.value:
            return False
    else:
        exps = tuple(witness)
    if not exps:
        return False
    return sum(pow(q, a, e) for a in exps) % e == 0


def naive_m_oracle(q: int, e: int) -> int:
    """Independent m oracle: plain set DP over (count, residue), no bitmasks,
    no frontier tricks. Test use only; e capped at 500."""
    _check_coprime(q, e)
    if e > 500:
        raise DomainError("naive oracle is capped at e <= 500")
    if e == 1:
        return 1
    base = sorted({x for x in _powers_of(q, e)})
    reach = set(base)
    count = 1
    while 0 not in reach:
        reach = {(x + a) % e for x in reach for a in base}
        count += 1
    return count
