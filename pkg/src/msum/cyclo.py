"""Cyclotomic machinery for the finite exception sets of small-m prime powers.

Exact integer polynomials (enough for X^n - 1 factor towers), the threshold
n/(n - phi(n)), Bezout denominators over the rationals, and the candidate
sift: every modulus e dividing Phi_n(q) with m(q,e) below the threshold must
divide one of finitely many Bezout denominators, which are enumerated here
and then verified member by member against the engine.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .engine import SPARSE_LIMIT, m_prime_power, verify_witness
from .errors import DegenerateInput, DomainError, MsumError
from .modular import element_of_order, euler_phi, rad

__all__ = [
    "IntPolynomial",
    "ExceptionSet",
    "cyclotomic",
    "threshold",
    "bezout_denominator",
    "resultant",
    "prop11_candidates",
    "candidate_scan",
    "corollary13_exceptions",
]

TRIAL_LIMIT = 10**6  # trial-division bound when factoring Bezout denominators


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, coefficients lowest degree first, no trailing zeros."""

    coeffs: tuple[int, ...]

    @staticmethod
    def make(seq) -> "IntPolynomial":
        c = list(seq)
        while c and c[-1] == 0:
            c.pop()
        return IntPolynomial(tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPolynomial.make(out)

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        if self.is_zero or other.is_zero:
            return IntPolynomial(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial.make(out)

    def __call__(self, x: int) -> int:
        out = 0
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def divmod_monic(self, den: "IntPolynomial") -> tuple["IntPolynomial", "IntPolynomial"]:
        """Division by a monic polynomial; stays in integers."""
        if den.is_zero or den.coeffs[-1] != 1:
            raise DomainError("divisor must be monic")
        rem = list(self.coeffs)
        dd = den.degree
        quo = [0] * max(len(rem) - dd, 0)
        for i in range(len(rem) - dd - 1, -1, -1):
            c = rem[i + dd]
            if c:
                quo[i] = c
                for j, b in enumerate(den.coeffs):
                    rem[i + j] -= c * b
        return IntPolynomial.make(quo), IntPolynomial.make(rem[:dd])


_X_MINUS_1 = IntPolynomial((-1, 1))
_cyclo_cache: dict[int, IntPolynomial] = {1: _X_MINUS_1}


def cyclotomic(n: int) -> IntPolynomial:
    """The n-th cyclotomic polynomial, by exact division of X^n - 1."""
    if n < 1:
        raise DomainError("n must be >= 1")
    hit = _cyclo_cache.get(n)
    if hit is not None:
        return hit
    num = IntPolynomial((-1,) + (0,) * (n - 1) + (1,))  # X^n - 1
    for d in range(1, n):
        if n % d == 0:
            num, rem = num.divmod_monic(cyclotomic(d))
            if not rem.is_zero:
                raise MsumError("cyclotomic division was not exact (bug)")
    _cyclo_cache[n] = num
    return num


def threshold(n: int) -> Fraction:
    """n / (n - phi(n)) in lowest terms; m below this forces the exception set."""
    if n < 2:
        raise DomainError("threshold requires n >= 2")
    return Fraction(n, n - euler_phi(n))


# ---------------------------------------------------------------------------
# rational-coefficient extended Euclid

def _f_trim(a: list[Fraction]) -> list[Fraction]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _f_divmod(a: list[Fraction], b: list[Fraction]):
    quo = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    rem = list(a)
    lead = b[-1]
    for i in range(len(rem) - len(b), -1, -1):
        c = rem[i + len(b) - 1] / lead
        if c:
            quo[i] = c
            for j, bc in enumerate(b):
                rem[i + j] -= c * bc
    return _f_trim(quo), _f_trim(rem[: len(b) - 1])


def _f_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _f_trim(out)


def _f_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = list(a) + [Fraction(0)] * (len(b) - len(a))
    for i, y in enumerate(b):
        out[i] -= y
    return _f_trim(out)


def _xgcd_poly(f: list[Fraction], g: list[Fraction]):
    """(r, s) with s*f = r (mod g), r the last nonzero remainder."""
    r0, r1 = list(f), list(g)
    s0, s1 = [Fraction(1)], []
    while r1:
        quo, rem = _f_divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, _f_sub(s0, _f_mul(quo, s1))
    return r0, s0


def bezout_denominator(g: IntPolynomial, n: int) -> int:
    """Minimal positive d with d = (da)(q)*g(q) + (db)(q)*Phi_n(q) for the
    minimal-degree rational Bezout pair a*g + b*Phi_n = 1.

    Every e dividing both g(q) and Phi_n(q) divides d. Only the g-side
    cofactor is carried: Phi_n is monic, so b = (1 - a*g)/Phi_n brings in no
    denominators beyond those of a.
    """
    phi_n = cyclotomic(n)
    if g.is_zero:
        raise DegenerateInput("g must be nonzero")
    _, rem = g.divmod_monic(phi_n) if g.degree >= phi_n.degree else (None, g)
    if rem.is_zero:
        raise DegenerateInput(f"Phi_{n} divides g; denominator undefined")
    r, s = _xgcd_poly(
        [Fraction(c) for c in g.coeffs], [Fraction(c) for c in phi_n.coeffs]
    )
    if len(r) != 1:
        raise MsumError("xgcd of coprime polynomials returned nonconstant gcd (bug)")
    c = r[0]
    d = 1
    for x in s:
        den = (x / c).denominator
        d = d * den // gcd(d, den)
    return d


def resultant(f: IntPolynomial, g: IntPolynomial) -> int:
    """Integer resultant via fraction-free (Bareiss) elimination of the
    Sylvester matrix. Independent of the Euclidean route above."""
    if f.is_zero or g.is_zero:
        return 0
    dn, dm = f.degree, g.degree
    if dn == 0:
        return f.coeffs[0] ** dm
    if dm == 0:
        return g.coeffs[0] ** dn
    size = dn + dm
    rows = []
    fr = list(reversed(f.coeffs))
    gr = list(reversed(g.coeffs))
    for i in range(dm):
        rows.append([0] * i + fr + [0] * (size - i - len(fr)))
    for i in range(dn):
        rows.append([0] * i + gr + [0] * (size - i - len(gr)))
    sign = 1
    prev = 1
    for k in range(size - 1):
        if rows[k][k] == 0:
            for swap in range(k + 1, size):
                if rows[swap][k] != 0:
                    rows[k], rows[swap] = rows[swap], rows[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                rows[i][j] = (rows[i][j] * rows[k][k] - rows[i][k] * rows[k][j]) // prev
            rows[i][k] = 0
        prev = rows[k][k]
    return sign * rows[size - 1][size - 1]


# ---------------------------------------------------------------------------
# candidate enumeration and the exception sets

@dataclass(frozen=True)
class CandidateScan:
    n: int
    threshold: Fraction
    tuples_examined: int
    d_values: tuple[int, ...]
    factored: tuple[tuple[int, tuple[tuple[int, int], ...]], ...]  # (d, factorization)
    unresolved: tuple[tuple[int, int], ...]  # (d, stubborn cofactor)


@dataclass(frozen=True)
class ExceptionSet:
    """Verified prime powers p^k admitting an order-n element with m below
    the threshold, plus the candidate pool they were sifted from."""

    n: int
    threshold: Fraction
    entries: tuple[tuple[int, int, int], ...]  # (p, k, m)
    candidate_pool: frozenset[int]
    unresolved: tuple[tuple[int, int], ...]
    complete: bool


def _canonical_rotation(t: tuple[int, ...], n: int, phi: int) -> tuple[int, ...]:
    best = t
    for shift in set(t):
        if shift == 0:
            continue
        rot = tuple(sorted((x - shift) % n for x in t))
        if rot[-1] < phi and rot < best:
            best = rot
    return best


def _raw_tuples(n: int):
    """Nondecreasing exponent tuples with i_1 = 0, i_m < phi(n), m < threshold."""
    phi = euler_phi(n)
    thr = threshold(n)
    m_max = (thr.numerator - 1) // thr.denominator
    for m_len in range(1, m_max + 1):
        for rest in itertools.combinations_with_replacement(range(phi), m_len - 1):
            yield (0,) + rest


def _exponent_tuples(n: int):
    """One canonical representative per cyclic-rotation class of _raw_tuples."""
    phi = euler_phi(n)
    for t in _raw_tuples(n):
        if _canonical_rotation(t, n, phi) == t:
            yield t


def _scan_chunk(args) -> tuple[int, set[int]]:
    n, chunk = args
    phi = euler_phi(n)
    count = 0
    out: set[int] = set()
    for t in chunk:
        if _canonical_rotation(t, n, phi) == t:
            count += 1
            out.add(bezout_denominator(_tuple_poly(t), n))
    return count, out


def _tuple_poly(t: tuple[int, ...]) -> IntPolynomial:
    out = [0] * (max(t) + 1)
    for i in t:
        out[i] += 1
    return IntPolynomial.make(out)


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_VALID_BELOW = 3_317_044_064_679_887_385_961_981


def _mr_prime(x: int) -> bool:
    """Deterministic Miller-Rabin below ~3.3e24."""
    if x >= _MR_VALID_BELOW:
        raise DomainError(f"{x} too large for the deterministic prime test")
    if x < 2:
        return False
    for p in _MR_BASES:
        if x % p == 0:
            return x == p
    d = x - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        y = pow(a, d, x)
        if y in (1, x - 1):
            continue
        for _ in range(r - 1):
            y = y * y % x
            if y == x - 1:
                break
        else:
            return False
    return True


def _iroot(c: int, j: int) -> int:
    if j == 1:
        return c
    x = int(round(c ** (1.0 / j)))
    while (x + 1) ** j <= c:
        x += 1
    while x > 0 and x**j > c:
        x -= 1
    return x


def _factor_candidate(d: int):
    """Factor with trial division to 10^6; big cofactors resolved by direct
    prime / prime-power tests. Returns (factors, stubborn_cofactor_or_0)."""
    factors: list[tuple[int, int]] = []
    c = d
    p = 2
    while p * p <= c and p <= TRIAL_LIMIT:
        if c % p == 0:
            k = 0
            while c % p == 0:
                c //= p
                k += 1
            factors.append((p, k))
        p += 1 if p == 2 else 2
    if c == 1:
        return factors, 0
    if p * p > c:
        factors.append((c, 1))
        return factors, 0
    if c >= _MR_VALID_BELOW:
        return factors, c  # beyond the deterministic primality range: report
    if _mr_prime(c):
        factors.append((c, 1))
        return factors, 0
    for j in range(2, c.bit_length()):
        root = _iroot(c, j)
        if root > 1 and root**j == c and _mr_prime(root):
            factors.append((root, j))
            return factors, 0
    return factors, c


def candidate_scan(n: int, jobs: int = 1) -> CandidateScan:
    """Enumerate all short exponent tuples, compute their Bezout denominators,
    and factor them. Stubborn cofactors are reported, never dropped.

    Tuple enumeration is embarrassingly parallel; jobs > 1 shards it."""
    if n < 2:
        raise DomainError("n must be >= 2")
    d_values: set[int] = set()
    count = 0
    if jobs <= 1:
        for t in _exponent_tuples(n):
            count += 1
            d_values.add(bezout_denominator(_tuple_poly(t), n))
    else:
        import multiprocessing as mp

        def chunks():
            batch = []
            for t in _raw_tuples(n):
                batch.append(t)
                if len(batch) >= 20_000:
                    yield n, batch
                    batch = []
            if batch:
                yield n, batch

        ctx = mp.get_context("fork")
        with ctx.Pool(jobs) as pool:
            for c, ds in pool.imap_unordered(_scan_chunk, chunks()):
                count += c
                d_values |= ds
    factored = []
    unresolved = []
    for d in sorted(d_values):
        factors, stubborn = _factor_candidate(d)
        factored.append((d, tuple(factors)))
        if stubborn:
            unresolved.append((d, stubborn))
    return CandidateScan(
        n=n,
        threshold=threshold(n),
        tuples_examined=count,
        d_values=tuple(sorted(d_values)),
        factored=tuple(factored),
        unresolved=tuple(unresolved),
    )


def _divisors(factors: tuple[tuple[int, int], ...]) -> list[int]:
    out = [1]
    for p, k in factors:
        out = [d * p**j for d in out for j in range(k + 1)]
    return out


def prop11_candidates(n: int, jobs: int = 1) -> set[int]:
    """Union of the divisor sets of all Bezout denominators: a finite superset
    of every e with e | Phi_n(q) and m(q,e) < threshold(n)."""
    scan = candidate_scan(n, jobs=jobs)
    out: set[int] = set()
    for _, factors in scan.factored:
        out.update(_divisors(factors))
    return out


def corollary13_exceptions(n: int, k_cap: int | None = None,
                           jobs: int = 1) -> ExceptionSet:
    """Sift the candidates to prime powers p^k with n | p-1, then keep those
    whose order-n element really has m below the threshold; every kept entry
    is verified through an explicit witness."""
    scan = candidate_scan(n, jobs=jobs)
    thr = scan.threshold
    pool: set[int] = set()
    pk_candidates: set[tuple[int, int]] = set()
    for _, factors in scan.factored:
        pool.update(_divisors(factors))
        for p, a in factors:
            if p == 2 or p % n != 1:
                continue
            for j in range(1, a + 1):
                if k_cap is not None and j > k_cap:
                    break
                pk_candidates.add((p, j))
    entries = []
    unresolved = list(scan.unresolved)
    for p, k in sorted(pk_candidates):
        e = p**k
        if e > SPARSE_LIMIT:
            unresolved.append((e, e))
            continue
        q = element_of_order(p, k, n)
        mv, wit = m_prime_power(q, p, k, want_witness=True)
        if Fraction(mv) < thr:
            if not verify_witness(q, e, wit) or len(wit) != mv:
                raise MsumError(f"witness verification failed at (p={p}, k={k})")
            entries.append((p, k, mv))
    return ExceptionSet(
        n=n,
        threshold=thr,
        entries=tuple(entries),
        candidate_pool=frozenset(pool),
        unresolved=tuple(unresolved),
        complete=not unresolved,
    )


def threshold_radical_invariant(n: int) -> bool:
    """threshold(n) == threshold(rad(n))."""
    return threshold(n) == threshold(rad(n))
