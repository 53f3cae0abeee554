"""
Prime sieve cache, Chebyshev's θ(x) and a smallest-prime-factor table.

The cache is the only shared state in the package. It is built lazily, grows
on demand up to settings.NUMLAB["SIEVE_CEILING"], and is guarded by a lock so
worker threads can share it. Forked sweep workers inherit whatever was built
before the fork.
"""

from __future__ import annotations

import logging
import math
import threading

import numpy as np

from core.exceptions import CapacityError, DomainGuardError, NumberTheoryError
from core.services import get_setting

logger = logging.getLogger(__name__)

_MIN_SIEVE = 1 << 16


def simple_sieve(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array (plain Eratosthenes)."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p : limit + 1 : p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def smallest_prime_factor_table(limit: int) -> np.ndarray:
    """spf[n] = smallest prime dividing n, for 2 <= n <= limit (spf[0] = spf[1] = 0)."""
    spf = np.zeros(limit + 1, dtype=np.int64)
    if limit < 2:
        return spf
    for p in simple_sieve(math.isqrt(limit)).tolist():
        idx = np.arange(p * p, limit + 1, p)
        fresh = idx[spf[idx] == 0]
        spf[fresh] = p
    rest = np.flatnonzero(spf == 0)
    rest = rest[rest >= 2]
    spf[rest] = rest  # untouched entries are primes
    return spf


class PrimeCache:
    """Lazily grown sieve with cumulative log-sums (θ at every prime)."""

    def __init__(self):
        self._lock = threading.Lock()
        self._limit = 0
        self._primes = np.array([], dtype=np.int64)
        self._theta = np.array([], dtype=np.float64)
        self._prime_list: list[int] = []
        self._spf: np.ndarray | None = None

    def _ensure(self, limit: int) -> None:
        if limit <= self._limit:
            return
        with self._lock:
            if limit <= self._limit:
                return
            ceiling = get_setting("SIEVE_CEILING")
            if limit > ceiling:
                raise CapacityError(
                    f"sieve limit {limit} exceeds the configured ceiling {ceiling}"
                )
            target = min(ceiling, max(limit, 2 * self._limit, _MIN_SIEVE))
            logger.debug("Growing prime sieve to %d", target)
            primes = simple_sieve(target)
            self._primes = primes
            self._theta = np.cumsum(np.log(primes.astype(np.float64)))
            self._prime_list = []
            self._limit = target

    def primes_up_to(self, limit: int) -> np.ndarray:
        self._ensure(limit)
        stop = int(np.searchsorted(self._primes, limit, side="right"))
        return self._primes[:stop]

    def prime_list(self, limit: int) -> list[int]:
        """Python ints <= limit (cached; used by trial division)."""
        self._ensure(limit)
        if len(self._prime_list) < len(self._primes):
            with self._lock:
                self._prime_list = self._primes.tolist()
        stop = int(np.searchsorted(self._primes, limit, side="right"))
        return self._prime_list[:stop]

    def theta(self, x: float) -> float:
        if x < 2:
            return 0.0
        top = math.floor(x)
        self._ensure(top)
        idx = int(np.searchsorted(self._primes, top, side="right"))
        return float(self._theta[idx - 1])

    def theta_table(self, limit: int) -> tuple[np.ndarray, np.ndarray]:
        """(primes <= limit, θ evaluated at each of them)."""
        self._ensure(limit)
        stop = int(np.searchsorted(self._primes, limit, side="right"))
        return self._primes[:stop], self._theta[:stop]

    def spf(self) -> np.ndarray:
        if self._spf is None:
            with self._lock:
                if self._spf is None:
                    limit = get_setting("SPF_TABLE_LIMIT")
                    logger.debug("Building smallest-prime-factor table to %d", limit)
                    self._spf = smallest_prime_factor_table(limit)
        return self._spf

    def clear(self) -> None:
        with self._lock:
            self._limit = 0
            self._primes = np.array([], dtype=np.int64)
            self._theta = np.array([], dtype=np.float64)
            self._prime_list = []
            self._spf = None


prime_cache = PrimeCache()


def chebyshev_theta(x: float) -> float:
    """θ(x) = Σ_{p <= x} log p from the cached sieve; 0 for x < 2."""
    if not math.isfinite(x):
        raise DomainGuardError(f"theta needs a finite x, got {x}")
    if x < 0:
        raise NumberTheoryError(f"theta is defined for x >= 0, got {x}")
    return prime_cache.theta(x)


def theta_linear_check(x_max: int, slope: float = 4.0) -> tuple[bool, float]:
    """
    Check θ(x) < slope·x for every integer x in [2, x_max].

    θ only jumps at primes, so the worst integer in [p_k, p_{k+1}) is p_k.
    Returns (holds, max θ(x)/x observed).
    """
    primes, theta = prime_cache.theta_table(x_max)
    if not len(primes):
        return True, 0.0
    ratios = theta / primes.astype(np.float64)
    return bool(np.all(ratios < slope)), float(ratios.max())
