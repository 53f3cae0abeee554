import math
import random

import sympy
from django.conf import settings
from django.test import SimpleTestCase, override_settings

from core.exceptions import NumberTheoryError
from core.services.integers import (
    Factorization,
    exponent_product,
    factorize,
    is_prime,
    largest_prime_factor,
    log_int,
    radical,
    signed_valuation,
    valuation,
)


def _sympy_factors(n):
    return tuple(sorted(sympy.factorint(n).items()))


class FactorizeTests(SimpleTestCase):
    def test_small_examples(self):
        self.assertEqual(factorize(50).factors, ((2, 1), (5, 2)))
        self.assertEqual(factorize(1).factors, ())
        self.assertEqual(factorize(257).factors, ((257, 1),))

    def test_matches_sympy_on_a_range(self):
        for n in range(2, 3000):
            self.assertEqual(factorize(n).factors, _sympy_factors(n), n)

    def test_values_of_n_squared_plus_one(self):
        for n in (10**6 + 3, 123456789, 10**9 + 7):
            m = n * n + 1
            self.assertEqual(factorize(m).factors, _sympy_factors(m), n)

    def test_pollard_rho_splits_semiprime(self):
        p, q = 2**31 - 1, 2**61 - 1
        self.assertEqual(factorize(p * q).factors, ((p, 1), (q, 1)))

    def test_perfect_powers_of_large_primes(self):
        p = 1000003
        self.assertEqual(factorize(p**3).factors, ((p, 3),))

    def test_seeded_random_inputs(self):
        rng = random.Random(7)
        for _ in range(25):
            n = rng.randrange(10**12, 10**15)
            self.assertEqual(factorize(n).factors, _sympy_factors(n), n)

    def test_trial_division_path_without_table(self):
        numlab = {**settings.NUMLAB, "SPF_TABLE_LIMIT": 10}
        with override_settings(NUMLAB=numlab):
            for n in (12, 97, 360, 9973 * 9967, 2**20):
                self.assertEqual(factorize(n).factors, _sympy_factors(n), n)

    def test_rejects_non_positive_and_non_integers(self):
        for bad in (0, -5, 2.5, True):
            with self.assertRaises(NumberTheoryError):
                factorize(bad)

    def test_factorization_checks_its_product(self):
        with self.assertRaises(NumberTheoryError):
            Factorization(12, ((2, 2), (5, 1)))
        with self.assertRaises(NumberTheoryError):
            Factorization(12, ((3, 1), (2, 2)))

    def test_multiply_merges_coprime_parts(self):
        merged = factorize(8).multiply(factorize(9))
        self.assertEqual(merged.value, 72)
        self.assertEqual(merged.factors, ((2, 3), (3, 2)))


class ArithmeticFunctionTests(SimpleTestCase):
    def test_radical_and_friends(self):
        f = factorize(72)
        self.assertEqual(radical(f), 6)
        self.assertEqual(largest_prime_factor(f), 3)
        self.assertEqual(exponent_product(f), 6)

    def test_conventions_at_one(self):
        f = factorize(1)
        self.assertEqual(radical(f), 1)
        self.assertEqual(largest_prime_factor(f), 1)
        self.assertEqual(exponent_product(f), 1)

    def test_valuation(self):
        self.assertEqual(valuation(72, 2), 3)
        self.assertEqual(valuation(72, 5), 0)
        self.assertEqual(signed_valuation(-3456, 2), 7)
        with self.assertRaises(NumberTheoryError):
            valuation(72, 4)
        with self.assertRaises(NumberTheoryError):
            signed_valuation(0, 2)


    def test_radical_is_squarefree_and_divides(self):
        for n in range(1, 3000):
            rad = radical(factorize(n))
            self.assertEqual(n % rad, 0, n)
            self.assertEqual(rad, math.prod(sympy.primefactors(n)), n)
            self.assertTrue(all(e == 1 for e in sympy.factorint(rad).values()), n)

    def test_radical_is_multiplicative_on_coprime_pairs(self):
        rng = random.Random(5)
        checked = 0
        while checked < 300:
            m, n = rng.randrange(1, 10**6), rng.randrange(1, 10**6)
            if math.gcd(m, n) != 1:
                continue
            self.assertEqual(
                radical(factorize(m * n)), radical(factorize(m)) * radical(factorize(n)), (m, n)
            )
            checked += 1


class PrimalityTests(SimpleTestCase):
    def test_agrees_with_sympy_below_5000(self):
        for n in range(-3, 5000):
            self.assertEqual(is_prime(n), sympy.isprime(n), n)

    def test_large_values(self):
        self.assertTrue(is_prime(2**89 - 1))
        self.assertFalse(is_prime(2**67 - 1))
        self.assertTrue(is_prime(2**127 - 1))
        self.assertFalse(is_prime((2**61 - 1) * (2**89 - 1)))

    def test_strong_pseudoprimes_are_rejected(self):
        # 3215031751 fools bases 2, 3, 5, 7
        self.assertFalse(is_prime(3215031751))
        self.assertFalse(is_prime(3825123056546413051))


class LogIntTests(SimpleTestCase):
    def test_small_and_huge(self):
        self.assertAlmostEqual(log_int(10), math.log(10), places=12)
        self.assertAlmostEqual(log_int(10**400) / (400 * math.log(10)), 1.0, places=12)

    def test_rejects_non_positive(self):
        with self.assertRaises(NumberTheoryError):
            log_int(0)
