import math

import sympy
from django.conf import settings
from django.test import SimpleTestCase, override_settings

from core.exceptions import CapacityError, DomainGuardError, NumberTheoryError
from core.services.sieve import (
    PrimeCache,
    chebyshev_theta,
    simple_sieve,
    smallest_prime_factor_table,
    theta_linear_check,
)


class SieveTests(SimpleTestCase):
    def test_simple_sieve(self):
        self.assertEqual(simple_sieve(30).tolist(), [2, 3, 5, 7, 11, 13, 17, 19, 23, 29])
        self.assertEqual(simple_sieve(1).tolist(), [])
        self.assertEqual(simple_sieve(10**5).tolist(), list(sympy.primerange(2, 10**5 + 1)))

    def test_smallest_prime_factor_table(self):
        spf = smallest_prime_factor_table(100)
        self.assertEqual((spf[15], spf[29], spf[49], spf[64], spf[97]), (3, 29, 7, 2, 97))
        for n in range(2, 101):
            self.assertEqual(spf[n], min(sympy.factorint(n)), n)


class ThetaTests(SimpleTestCase):
    def test_small_values(self):
        self.assertAlmostEqual(chebyshev_theta(10), math.log(210))
        self.assertAlmostEqual(chebyshev_theta(10.9), math.log(210))
        self.assertAlmostEqual(chebyshev_theta(11), math.log(2310))
        self.assertEqual(chebyshev_theta(1.5), 0.0)

    def test_negative_x(self):
        with self.assertRaises(NumberTheoryError):
            chebyshev_theta(-1)

    def test_matches_naive_sum_and_never_decreases(self):
        primes = list(sympy.primerange(2, 10**4 + 1))
        total, k, previous = 0.0, 0, 0.0
        for x in range(0, 10**4 + 1):
            while k < len(primes) and primes[k] <= x:
                total += math.log(primes[k])
                k += 1
            theta = chebyshev_theta(x)
            self.assertAlmostEqual(theta, total, delta=1e-9, msg=x)
            self.assertGreaterEqual(theta, previous, x)
            previous = theta

    def test_non_finite_x(self):
        for x in (math.inf, math.nan):
            with self.assertRaises(DomainGuardError):
                chebyshev_theta(x)

    def test_linear_bound(self):
        holds, worst = theta_linear_check(10**5)
        self.assertTrue(holds)
        self.assertLess(worst, 1.1)

    def test_ceiling(self):
        numlab = {**settings.NUMLAB, "SIEVE_CEILING": 1000}
        with override_settings(NUMLAB=numlab):
            cache = PrimeCache()
            self.assertAlmostEqual(cache.theta(1000), float(sum(math.log(p) for p in sympy.primerange(2, 1001))))
            with self.assertRaises(CapacityError):
                cache.theta(1001)

    def test_cache_grows_and_clears(self):
        cache = PrimeCache()
        self.assertEqual(cache.prime_list(20), [2, 3, 5, 7, 11, 13, 17, 19])
        self.assertEqual(len(cache.primes_up_to(10**5)), 9592)
        cache.clear()
        primes, theta = cache.theta_table(10)
        self.assertEqual(primes.tolist(), [2, 3, 5, 7])
        self.assertAlmostEqual(float(theta[-1]), math.log(210))
