"""
Arbitrary-precision factorization and the elementary arithmetic functions.

factorize() goes through three stages:
  1) a smallest-prime-factor table for n <= SPF_TABLE_LIMIT,
  2) trial division by primes up to TRIAL_DIVISION_LIMIT (stops early once the
     cofactor is 1, below p², or proven prime),
  3) Brent's variant of Pollard rho on what is left, with pseudo-random
     parameters seeded from the input so results are reproducible.

Every value returned here is immutable.
"""

from __future__ import annotations

import logging
import math
import random
from collections import Counter
from dataclasses import dataclass
from numbers import Integral

from core.exceptions import CapacityError, NumberTheoryError
from core.services import get_setting
from core.services.sieve import prime_cache

logger = logging.getLogger(__name__)

# Deterministic for n < 3.3e24, in particular for every n < 2^64.
_MR_BASES_64 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)
_TRIAL_BLOCK = 256
_LOG2 = math.log(2.0)


def _require_positive_int(n, what: str = "n") -> int:
    if isinstance(n, bool) or not isinstance(n, Integral):
        raise NumberTheoryError(f"{what} must be an integer, got {n!r}")
    n = int(n)
    if n <= 0:
        raise NumberTheoryError(f"{what} must be positive, got {n}")
    return n


def _strong_probable_prime(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
        if x == 1:
            return False
    return False


def is_prime(n: int) -> bool:
    """Miller–Rabin: deterministic below 2^64, fixed-seed random bases above."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < 1 << 64:
        bases = _MR_BASES_64
    else:
        rng = random.Random(get_setting("RHO_SEED"))
        bases = tuple(rng.randrange(2, n - 1) for _ in range(get_setting("MR_ROUNDS_LARGE")))
    return all(_strong_probable_prime(n, a % n, d, s) for a in bases if a % n)


def log_int(n: int) -> float:
    """
    Natural log of a positive integer of any size.

    Uses the top 64 bits and the bit length, so it never overflows; the
    relative error stays far below 1e-12.
    """
    if n <= 0:
        raise NumberTheoryError(f"log of non-positive integer {n}")
    shift = max(0, n.bit_length() - 64)
    return math.log(n >> shift) + shift * _LOG2


@dataclass(frozen=True)
class Factorization:
    """value = ∏ p^e over factors; factors strictly increasing in p, e >= 1."""

    value: int
    factors: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        product = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise NumberTheoryError(f"malformed factor list {self.factors!r}")
            last = p
            product *= p**e
        if product != self.value:
            raise NumberTheoryError(
                f"factors multiply to {product}, not {self.value}"
            )

    @classmethod
    def from_counter(cls, value: int, counts: Counter) -> "Factorization":
        return cls(value, tuple(sorted((int(p), int(e)) for p, e in counts.items())))

    def validate(self) -> None:
        """Full check including primality of every listed p."""
        for p, _ in self.factors:
            if not is_prime(p):
                raise NumberTheoryError(f"{p} in factorization of {self.value} is not prime")

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def exponent_of(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
            if q > p:
                break
        return 0

    def multiply(self, other: "Factorization") -> "Factorization":
        counts = Counter(dict(self.factors))
        counts.update(dict(other.factors))
        return Factorization.from_counter(self.value * other.value, counts)


def _factor_with_table(n: int, counts: Counter) -> None:
    spf = prime_cache.spf()
    while n > 1:
        p = int(spf[n])
        while n % p == 0:
            n //= p
            counts[p] += 1


def _brent_rho(n: int, rng: random.Random) -> int | None:
    """One Brent–Pollard rho run; a proper divisor of composite n, or None."""
    y, c, m = rng.randrange(1, n), rng.randrange(1, n), rng.randrange(1, n)
    g, r, q = 1, 1, 1
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        r *= 2
    if g == n:
        while True:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
            if g > 1:
                break
    return g if g != n else None


def _split_composite(n: int) -> int:
    rng = random.Random(f"{get_setting('RHO_SEED')}:{n}")
    for attempt in range(get_setting("RHO_MAX_ATTEMPTS")):
        d = _brent_rho(n, rng)
        if d is not None:
            return d
        logger.debug("rho attempt %d failed on %d; retrying", attempt + 1, n)
    raise CapacityError(f"could not split composite {n} with Pollard rho")


def _factor_large(m: int, counts: Counter) -> None:
    stack = [m]
    while stack:
        k = stack.pop()
        if k == 1:
            continue
        if is_prime(k):
            counts[k] += 1
            continue
        root = math.isqrt(k)
        if root * root == k:
            stack.extend((root, root))
            continue
        d = _split_composite(k)
        stack.extend((d, k // d))


def factorize(n: int) -> Factorization:
    """Complete prime factorization of n >= 1; factorize(1) has no factors."""
    n = _require_positive_int(n)
    counts: Counter = Counter()
    if n == 1:
        return Factorization(1)
    if n <= get_setting("SPF_TABLE_LIMIT"):
        _factor_with_table(n, counts)
        return Factorization.from_counter(n, counts)

    m = n
    bound = min(get_setting("TRIAL_DIVISION_LIMIT"), math.isqrt(n))
    cofactor_is_prime = False
    for idx, p in enumerate(prime_cache.prime_list(bound)):
        if p * p > m:
            cofactor_is_prime = m > 1
            break
        while m % p == 0:
            m //= p
            counts[p] += 1
        if m == 1:
            break
        if idx % _TRIAL_BLOCK == _TRIAL_BLOCK - 1 and is_prime(m):
            cofactor_is_prime = True
            break
    if m > 1:
        if cofactor_is_prime:
            counts[m] += 1
        else:
            _factor_large(m, counts)
    return Factorization.from_counter(n, counts)


def radical(f: Factorization) -> int:
    """Product of the distinct primes; rad(1) = 1."""
    return math.prod(f.primes)


def largest_prime_factor(f: Factorization) -> int:
    """𝒫(n) with the convention 𝒫(1) = 1."""
    return f.factors[-1][0] if f.factors else 1


def exponent_product(f: Factorization) -> int:
    """∏ ν_p(n) over the primes dividing n; 1 for n = 1."""
    return math.prod(e for _, e in f.factors)


def valuation(n: int, p: int) -> int:
    """Largest e with p^e | n."""
    n = _require_positive_int(n)
    if not is_prime(p):
        raise NumberTheoryError(f"valuation needs a prime, got {p}")
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def signed_valuation(n: int, p: int) -> int:
    """ν_p of a non-zero integer of either sign."""
    if n == 0:
        raise NumberTheoryError("valuation of 0 is infinite")
    return valuation(abs(n), p)
