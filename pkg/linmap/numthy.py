"""
Big-integer number theory for the census.

Factorization (trial division, then Brent's variant of Pollard rho with a
fixed constant schedule), divisor counts sigma_i = tau(q^i - 1), exact-order
counts sigma_i*, multiplicative orders, the partition function, Moebius,
primorials and Zsigmondy primes.

Every factorization goes through FACTOR_MEMO, the only shared mutable state
here; it is internally locked. Worker processes each get their own copy.
"""

from __future__ import annotations

import math
import threading
from functools import lru_cache
from typing import Iterable, Iterator

from .constants import (
    MAX_FACTOR_VALUE,
    MAX_PARTITION_COUNT_N,
    MAX_PARTITION_LIST_N,
    MAX_PRIMORIAL_K,
    MILLER_RABIN_BASES,
    MILLER_RABIN_PROVEN_BOUND,
    POLLARD_RHO_CONSTANTS,
    POLLARD_RHO_MAX_STEPS,
    TRIAL_DIVISION_BOUND,
)
from .errors import NotCoprime, TooLarge

# (prime, exponent) pairs, primes strictly increasing
Factorization = tuple[tuple[int, int], ...]


# ============================================================================
# Factor memo
# ============================================================================

class FactorMemo:
    """Memo of factorizations keyed by the factored value."""

    def __init__(self):
        self._lock = threading.Lock()
        self._entries: dict[int, Factorization] = {}

    def get(self, n: int) -> Factorization | None:
        with self._lock:
            return self._entries.get(n)

    def put(self, n: int, fact: Factorization) -> None:
        with self._lock:
            self._entries[n] = fact

    def seed(self, entries: dict[int, Factorization]) -> None:
        """Merge already validated entries (e.g. from the persistent cache)."""
        with self._lock:
            self._entries.update(entries)

    def snapshot(self) -> dict[int, Factorization]:
        with self._lock:
            return dict(self._entries)

    def clear(self) -> None:
        with self._lock:
            self._entries.clear()

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)


FACTOR_MEMO = FactorMemo()


# ============================================================================
# Primes
# ============================================================================

@lru_cache(maxsize=None)
def primes_up_to(limit: int) -> tuple[int, ...]:
    """All primes <= limit (sieve of Eratosthenes)."""
    if limit < 2:
        return ()
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(range(i * i, limit + 1, i)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def is_prime(n: int) -> bool:
    """
    Miller-Rabin with the first 13 prime bases, deterministic below
    MILLER_RABIN_PROVEN_BOUND. Above it the answer is confirmed with
    sympy's BPSW test.
    """
    if n < 2:
        return False
    for p in MILLER_RABIN_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in MILLER_RABIN_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    if n >= MILLER_RABIN_PROVEN_BOUND:
        from sympy.ntheory.primetest import isprime
        return bool(isprime(n))
    return True


def _brent_split(n: int) -> int:
    """
    A nontrivial factor of the odd composite n.

    The next constant is tried only when the batched gcd collapses to n;
    running out of POLLARD_RHO_MAX_STEPS raises TooLarge at once.
    """
    for c in POLLARD_RHO_CONSTANTS:
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        batch = 128
        while g == 1 and r <= POLLARD_RHO_MAX_STEPS:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(batch, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += batch
            r *= 2
        if g == 1:
            raise TooLarge(f"Pollard rho could not split {n} within {POLLARD_RHO_MAX_STEPS} steps")
        if g == n:
            # batch overshot: replay one step at a time
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    raise TooLarge(f"Pollard rho could not split {n}")


def _split_into(n: int, counts: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        counts[n] = counts.get(n, 0) + 1
        return
    d = _brent_split(n)
    _split_into(d, counts)
    _split_into(n // d, counts)


def factor(n: int) -> Factorization:
    """Complete prime factorization of 1 <= n <= 2^128."""
    if n < 1:
        raise ValueError(f"factor() needs n >= 1, got {n}")
    if n > MAX_FACTOR_VALUE:
        raise TooLarge(f"{n} exceeds the factor guard 2^128")
    cached = FACTOR_MEMO.get(n)
    if cached is not None:
        return cached

    counts: dict[int, int] = {}
    rest = n
    exhausted = True
    for p in primes_up_to(TRIAL_DIVISION_BOUND):
        if p * p > rest:
            exhausted = False
            break
        while rest % p == 0:
            counts[p] = counts.get(p, 0) + 1
            rest //= p
    if rest > 1:
        if exhausted:
            _split_into(rest, counts)
        else:
            counts[rest] = counts.get(rest, 0) + 1

    result = tuple(sorted(counts.items()))
    FACTOR_MEMO.put(n, result)
    return result


def factorization_value(fact: Iterable[tuple[int, int]]) -> int:
    return math.prod(p ** e for p, e in fact)


def is_valid_factorization(n: int, fact: Factorization) -> bool:
    """Product check, strictly increasing primes, positive exponents, primality."""
    primes = [p for p, _ in fact]
    if primes != sorted(set(primes)):
        return False
    if any(e < 1 for _, e in fact):
        return False
    if factorization_value(fact) != n:
        return False
    return all(is_prime(p) for p in primes)


# ============================================================================
# Divisors and orders
# ============================================================================

def _divisors_of(fact: Factorization) -> list[int]:
    divs = [1]
    for p, e in fact:
        divs = [d * p ** k for d in divs for k in range(e + 1)]
    return sorted(divs)


def tau(n: int) -> int:
    return math.prod(e + 1 for _, e in factor(n))


def divisors(n: int) -> list[int]:
    return _divisors_of(factor(n))


def _carmichael_exponents(fact: Factorization) -> dict[int, int]:
    """Factorization of the Carmichael function of prod p^e, as {prime: exp}."""
    lam: dict[int, int] = {}

    def merge(r: int, k: int) -> None:
        if k > lam.get(r, 0):
            lam[r] = k

    for p, e in fact:
        if p == 2:
            # lambda(2) = 1, lambda(4) = 2, lambda(2^e) = 2^(e-2)
            if e >= 2:
                merge(2, 1 if e == 2 else e - 2)
        else:
            if e > 1:
                merge(p, e - 1)
            for r, k in factor(p - 1):
                merge(r, k)
    return lam


def carmichael(n: int) -> int:
    return factorization_value(_carmichael_exponents(factor(n)).items())


def _order_with(q: int, e: int, fact: Factorization) -> int:
    if e == 1:
        return 1
    lam = _carmichael_exponents(fact)
    order = factorization_value(lam.items())
    for r in sorted(lam):
        while order % r == 0 and pow(q, order // r, e) == 1:
            order //= r
    return order


def mult_order(q: int, e: int) -> int:
    """Least j > 0 with q^j = 1 mod e; ord_1 q is taken to be 1."""
    if e < 1:
        raise ValueError(f"modulus must be positive, got {e}")
    if math.gcd(q, e) != 1:
        raise NotCoprime(f"gcd({q}, {e}) != 1")
    return _order_with(q, e, factor(e))


def _check_q(q: int) -> None:
    if q < 2:
        raise ValueError(f"q must be at least 2, got {q}")


def sigma(q: int, i: int) -> int:
    """Number of divisors of q^i - 1."""
    _check_q(q)
    if i < 1:
        raise ValueError(f"i must be positive, got {i}")
    return tau(q ** i - 1)


@lru_cache(maxsize=None)
def exact_order_divisors(q: int, t: int) -> tuple[int, ...]:
    """Divisors e of q^t - 1 with ord_e q = t, ascending."""
    _check_q(q)
    if t < 1:
        raise ValueError(f"t must be positive, got {t}")
    fact = factor(q ** t - 1)
    found = []
    for exps in _exponent_vectors(fact):
        sub = tuple((p, k) for (p, _), k in zip(fact, exps) if k)
        e = factorization_value(sub)
        if _order_with(q, e, sub) == t:
            found.append(e)
    return tuple(sorted(found))


def _exponent_vectors(fact: Factorization) -> Iterator[tuple[int, ...]]:
    vectors: list[tuple[int, ...]] = [()]
    for _, e in fact:
        vectors = [v + (k,) for v in vectors for k in range(e + 1)]
    return iter(vectors)


def sigma_star(q: int, i: int) -> int:
    """Number of e with ord_e q = i (all such e divide q^i - 1)."""
    return len(exact_order_divisors(q, i))


def zsigmondy_prime(q: int, j: int) -> int | None:
    """Smallest prime R | q^j - 1 with ord_R q = j, or None."""
    _check_q(q)
    if j < 1:
        raise ValueError(f"j must be positive, got {j}")
    for r, _ in factor(q ** j - 1):
        if mult_order(q, r) == j:
            return r
    return None


def sigma_table(q: int, i_max: int) -> list[tuple[int, int, int]]:
    return [(i, sigma(q, i), sigma_star(q, i)) for i in range(1, i_max + 1)]


def zsigmondy_table(q: int, j_max: int) -> list[tuple[int, int | None]]:
    return [(j, zsigmondy_prime(q, j)) for j in range(1, j_max + 1)]


# ============================================================================
# Partitions, Moebius, primorials
# ============================================================================

_PARTITION_TABLE = [1]
_PARTITION_LOCK = threading.Lock()


def partitions_count(n: int) -> int:
    """P(n) by Euler's pentagonal number recurrence."""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if n > MAX_PARTITION_COUNT_N:
        raise TooLarge(f"P({n}) exceeds the guard n <= {MAX_PARTITION_COUNT_N}")
    with _PARTITION_LOCK:
        table = _PARTITION_TABLE
        for m in range(len(table), n + 1):
            total = 0
            k = 1
            while True:
                g1 = k * (3 * k - 1) // 2
                if g1 > m:
                    break
                sign = 1 if k % 2 else -1
                total += sign * table[m - g1]
                g2 = g1 + k
                if g2 <= m:
                    total += sign * table[m - g2]
                k += 1
            table.append(total)
        return table[n]


def _partitions(rest: int, cap: int) -> Iterator[tuple[int, ...]]:
    if rest == 0:
        yield ()
        return
    for part in range(min(rest, cap), 0, -1):
        for tail in _partitions(rest - part, part):
            yield (part,) + tail


def partitions_list(n: int) -> list[tuple[int, ...]]:
    """Partitions of n as weakly decreasing tuples, [4] before [3, 1] before [2, 2] ..."""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if n > MAX_PARTITION_LIST_N:
        raise TooLarge(f"listing partitions of {n} exceeds the guard n <= {MAX_PARTITION_LIST_N}")
    return list(_partitions(n, n))


def moebius(n: int) -> int:
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    fact = factor(n)
    if any(e > 1 for _, e in fact):
        return 0
    return -1 if len(fact) % 2 else 1


def primorial(k: int) -> int:
    """Product of the first k primes."""
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    if k > MAX_PRIMORIAL_K:
        raise TooLarge(f"primorial({k}) exceeds the guard k <= {MAX_PRIMORIAL_K}")
    return math.prod(primes_up_to(600)[:k])
