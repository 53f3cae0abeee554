from django.test import SimpleTestCase

from core.exceptions import NumberTheoryError
from core.services.bounds import BoundConstants
from core.services.curves import (
    conductor,
    discriminant_shape,
    family_invariant_failures,
    global_reduction,
    lemma_prod_report,
    minimal_discriminant,
    shimura_e_check,
)
from core.services.integers import signed_valuation, valuation
from core.services.sieve import simple_sieve
from core.services.tate import Kodaira, tate_local
from core.services.weierstrass import (
    CurveModel,
    ReductionKind,
    curve_for,
    equation_discriminant,
    frey_curve,
    reduction_kind_by_search,
)

CURVE_11A1 = CurveModel(0, -1, 1, -10, -20)
CURVE_37A1 = CurveModel(0, 0, 1, -1, 0)


class CurveModelTests(SimpleTestCase):
    def test_family_discriminant(self):
        self.assertEqual(curve_for(1).ainvs, (0, 0, 0, 3, 2))
        self.assertEqual(equation_discriminant(curve_for(1)), -3456)
        for n in range(1, 60):
            self.assertEqual(curve_for(n).discriminant, -1728 * (n * n + 1))

    def test_c4_c6_identity(self):
        models = [curve_for(n) for n in (1, 2, 7, 99)]
        models += [CURVE_11A1, CURVE_37A1, frey_curve(1, 8, 9), CurveModel(1, -1, 1, 4, -7)]
        for model in models:
            self.assertEqual(model.c4**3 - model.c6**2, 1728 * model.discriminant, str(model))

    def test_short_model_discriminant(self):
        for a, b in ((3, 2), (-1, 0), (0, 1), (-25, 7)):
            self.assertEqual(CurveModel(a4=a, a6=b).discriminant, -16 * (4 * a**3 + 27 * b * b))

    def test_singular_model_is_rejected(self):
        with self.assertRaises(NumberTheoryError):
            CurveModel(a4=-3, a6=2)

    def test_transform_keeps_discriminant_up_to_u12(self):
        model = curve_for(5)
        self.assertEqual(model.transform(2, 1, -3).discriminant, model.discriminant)
        scaled = CurveModel(0, 0, 8, -16, 0)
        self.assertEqual(scaled.transform(u=2), CURVE_37A1)
        with self.assertRaises(NumberTheoryError):
            CURVE_37A1.transform(u=2)

    def test_frey_curve(self):
        self.assertEqual(frey_curve(1, 8, 9).discriminant, 82944)
        self.assertEqual(frey_curve(1, 1, 2).discriminant, 64)
        for bad in ((2, 4, 6), (1, 2, 4), (0, 1, 1)):
            with self.assertRaises(NumberTheoryError):
                frey_curve(*bad)


class TateTests(SimpleTestCase):
    def test_multiplicative_and_good(self):
        data = tate_local(curve_for(3), 5)
        self.assertIs(data.reduction_kind, ReductionKind.MULTIPLICATIVE)
        self.assertEqual((data.kodaira_type, data.f_p, data.v_delta_min), ("I1", 1, 1))
        good = tate_local(curve_for(1), 7)
        self.assertIs(good.reduction_kind, ReductionKind.GOOD)
        self.assertEqual((good.kodaira_type, good.f_p), ("I0", 0))

    def test_family_at_two_and_three(self):
        at2 = tate_local(curve_for(7), 2)
        self.assertEqual((at2.kodaira_type, at2.f_p, at2.v_delta_min), ("II", 7, 7))
        at3 = tate_local(curve_for(7), 3)
        self.assertEqual((at3.kodaira_type, at3.f_p, at3.v_delta_min), ("III", 2, 3))
        self.assertEqual(tate_local(curve_for(7), 5).kodaira_type, "I2")

    def test_known_conductors(self):
        self.assertEqual(conductor(CURVE_11A1), 11)
        self.assertEqual(tate_local(CURVE_11A1, 11).kodaira_type, "I5")
        self.assertEqual(conductor(CURVE_37A1), 37)
        self.assertEqual(conductor(CurveModel(a4=-1)), 32)
        self.assertEqual(conductor(CurveModel(a6=1)), 36)
        self.assertEqual(conductor(curve_for(7)), 2**7 * 3**2 * 5)

    def test_additive_types_at_two_and_three(self):
        self.assertEqual(tate_local(CurveModel(a4=-1), 2).kodaira_type, "III")
        self.assertEqual(tate_local(CurveModel(a6=1), 2).kodaira_type, "IV")
        self.assertEqual(tate_local(CurveModel(a6=1), 3).kodaira_type, "III")

    def test_starred_types_at_five(self):
        cases = [
            (CurveModel(a4=-25), "I0*", 6),
            (CurveModel(a4=75, a6=750), "I1*", 7),
            (CurveModel(a6=625), "IV*", 8),
            (CurveModel(a4=125), "III*", 9),
            (CurveModel(a6=3125), "II*", 10),
        ]
        for model, kodaira, v in cases:
            data = tate_local(model, 5)
            self.assertEqual(data.kodaira_type, kodaira, str(model))
            self.assertEqual(data.v_delta_min, v)
            self.assertEqual(data.f_p, 2)
            self.assertIs(data.reduction_kind, ReductionKind.ADDITIVE)

    def test_non_minimal_model_is_scaled(self):
        scaled = CurveModel(0, 0, 8, -16, 0)
        data = tate_local(scaled, 2)
        self.assertEqual(data.scalings, 1)
        self.assertEqual(data.kodaira, Kodaira.I)
        self.assertEqual(data.v_delta_min, 0)
        self.assertEqual(data.minimal_model, CURVE_37A1)
        self.assertEqual(minimal_discriminant(scaled), 37)
        self.assertEqual(conductor(scaled), 37)

    def test_frey_curve_is_semistable_at_three(self):
        data = tate_local(frey_curve(1, 8, 9), 3)
        self.assertEqual((data.kodaira_type, data.f_p), ("I4", 1))

    def test_requires_prime(self):
        with self.assertRaises(NumberTheoryError):
            tate_local(curve_for(1), 9)

    def test_agrees_with_brute_force_search(self):
        primes = [p for p in simple_sieve(60).tolist() if p >= 5]
        for n in range(1, 80):
            model = curve_for(n)
            for p in primes:
                self.assertIs(
                    tate_local(model, p).reduction_kind,
                    reduction_kind_by_search(model, p),
                    (n, p),
                )

    def test_search_classifies_nodes_and_cusps(self):
        self.assertIs(reduction_kind_by_search(curve_for(3), 5), ReductionKind.MULTIPLICATIVE)
        self.assertIs(reduction_kind_by_search(curve_for(1), 7), ReductionKind.GOOD)
        self.assertIs(reduction_kind_by_search(CurveModel(a6=625), 5), ReductionKind.ADDITIVE)


class FamilyTests(SimpleTestCase):
    def test_structure_over_a_range(self):
        for n in range(1, 150):
            self.assertEqual(family_invariant_failures(n), [], n)

    def test_three_never_divides_n_squared_plus_one(self):
        for n in range(1, 5000):
            self.assertEqual(valuation(n * n + 1, 3), 0, n)

    def test_discriminant_shape(self):
        for n in range(1, 40):
            s, t, ok = discriminant_shape(n, minimal_discriminant(curve_for(n)))
            self.assertTrue(ok, n)
            self.assertEqual((s, t), (6, 3), n)

    def test_minimality_changes_by_twelfth_powers(self):
        for n in range(1, 60):
            glob = global_reduction(curve_for(n))
            for d in glob.local:
                drop = signed_valuation(glob.model.discriminant, d.p) - d.v_delta_min
                self.assertEqual(drop % 12, 0)
                self.assertEqual(drop, 12 * d.scalings)

    def test_lemma_report(self):
        report = lemma_prod_report(7)
        self.assertEqual(report.exponent_product, 2)
        self.assertEqual(report.rad, 10)
        self.assertEqual(report.rad_power, 10**8)
        self.assertTrue(report.holds)
        self.assertTrue(report.shape_ok)
        self.assertEqual(report.conductor, 5760)
        self.assertEqual(report.minimal_discriminant, -86400)
        payload = report.to_dict()
        self.assertEqual([d["p"] for d in payload["local"]], [2, 3, 5])

    def test_shimura_e_check(self):
        glob = global_reduction(curve_for(7))
        check = shimura_e_check(glob, BoundConstants())
        self.assertEqual(check.lhs, 2)
        self.assertTrue(check.holds)
