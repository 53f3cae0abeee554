import json
import math
import tempfile
from io import StringIO
from pathlib import Path
from unittest import mock

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from core.cli import run
from core.services.bounds import BoundReport


def _call(*args):
    out = StringIO()
    call_command(*args, stdout=out, stderr=StringIO())
    return out.getvalue()


class FactorCommandTests(SimpleTestCase):
    def test_text(self):
        self.assertEqual(_call("factor", "50").strip(), "50 = 2 * 5^2")

    def test_json(self):
        data = json.loads(_call("factor", "72", "--format", "json"))
        self.assertEqual(data["factors"], [[2, 3], [3, 2]])
        self.assertEqual(data["radical"], 6)
        self.assertEqual(data["exponent_product"], 6)

    def test_csv(self):
        lines = _call("factor", "12", "--format", "csv").splitlines()
        self.assertEqual(lines[0].split(",")[0], "n")
        self.assertEqual(lines[1].split(",")[0], "12")

    def test_bad_input_exits_2(self):
        with self.assertRaises(CommandError) as ctx:
            _call("factor", "0")
        self.assertEqual(ctx.exception.returncode, 2)


class ThetaCommandTests(SimpleTestCase):
    def test_value(self):
        data = json.loads(_call("theta", "10", "--format", "json"))
        self.assertAlmostEqual(data["theta"], math.log(210))

    def test_negative_x_exits_2(self):
        with self.assertRaises(CommandError) as ctx:
            _call("theta", "-1")
        self.assertEqual(ctx.exception.returncode, 2)

    def test_sieve_ceiling_exits_3(self):
        with self.assertRaises(CommandError) as ctx:
            _call("theta", "1e9")
        self.assertEqual(ctx.exception.returncode, 3)

    def test_non_finite_x_exits_2(self):
        for x in ("inf", "nan"):
            with self.assertRaises(CommandError) as ctx:
                _call("theta", x)
            self.assertEqual(ctx.exception.returncode, 2)


class GaussianCommandTests(SimpleTestCase):
    def test_seven(self):
        text = _call("gaussian", "7")
        self.assertIn("7 + i = -i · (1+i)^1 (2+i)^2", text)
        self.assertIn("reconstruction ok", text)

    def test_explicit_threshold(self):
        data = json.loads(_call("gaussian", "7", "--threshold", "1.5", "--format", "json"))
        self.assertEqual(data["m"], 2)
        self.assertEqual(data["large"], [[2, 5, 2]])
        self.assertTrue(data["reconstructs"])

    def test_bad_threshold(self):
        with self.assertRaises(CommandError) as ctx:
            _call("gaussian", "7", "--threshold", "big")
        self.assertEqual(ctx.exception.returncode, 2)


class CurveCommandTests(SimpleTestCase):
    def test_curve(self):
        data = json.loads(_call("curve", "7", "--format", "json"))
        self.assertEqual(data["exponent_product"], 2)
        self.assertEqual(data["rad"], 10)
        self.assertTrue(data["holds"])
        self.assertEqual(data["discriminant"], -86400)
        self.assertEqual((data["s"], data["t"]), (6, 3))

    def test_curve_text(self):
        text = _call("curve", "3")
        self.assertIn("p = 5: I1, multiplicative, f_p = 1", text)

    def test_frey(self):
        data = json.loads(_call("frey", "1", "8", "9", "--format", "json"))
        self.assertEqual(data["discriminant"], 82944)
        self.assertEqual(data["expected_discriminant"], 82944)

    def test_frey_rejects_non_triple(self):
        with self.assertRaises(CommandError) as ctx:
            _call("frey", "2", "4", "6")
        self.assertEqual(ctx.exception.returncode, 2)


class SweepCommandTests(SimpleTestCase):
    def test_sweep_writes_one_line_per_n(self):
        with tempfile.TemporaryDirectory() as tmp:
            out = Path(tmp) / "s.jsonl"
            csv_out = Path(tmp) / "s.csv"
            text = _call("sweep", "--from", "16", "--to", "60", "--out", str(out), "--csv", str(csv_out))
            self.assertEqual(len(out.read_text(encoding="utf-8").splitlines()), 45)
            self.assertEqual(len(csv_out.read_text(encoding="utf-8").splitlines()), 46)
        self.assertIn("45 records for n = 16..60", text)
        self.assertIn("violations: 0", text)

    def test_output_independent_of_jobs(self):
        with tempfile.TemporaryDirectory() as tmp:
            one, two = Path(tmp) / "1.jsonl", Path(tmp) / "2.jsonl"
            _call("sweep", "--from", "16", "--to", "80", "--out", str(one))
            _call("sweep", "--from", "16", "--to", "80", "--jobs", "2", "--out", str(two))
            self.assertEqual(one.read_bytes(), two.read_bytes())

    def test_start_below_sixteen_exits_2(self):
        with tempfile.TemporaryDirectory() as tmp:
            with self.assertRaises(CommandError) as ctx:
                _call("sweep", "--from", "5", "--to", "20", "--out", str(Path(tmp) / "x.jsonl"))
        self.assertEqual(ctx.exception.returncode, 2)

    def test_sweep_without_csv(self):
        with tempfile.TemporaryDirectory() as tmp:
            out = Path(tmp) / "s.jsonl"
            data = json.loads(_call("sweep", "--from", "16", "--to", "30", "--out", str(out), "--format", "json"))
            self.assertEqual(len(out.read_text(encoding="utf-8").splitlines()), 15)
            self.assertEqual(sorted(p.name for p in Path(tmp).iterdir()), ["s.jsonl"])
        self.assertEqual(data["records"], 15)


class AbcCommandTests(SimpleTestCase):
    def test_enumerate(self):
        with tempfile.TemporaryDirectory() as tmp:
            out = Path(tmp) / "abc.csv"
            data = json.loads(_call("abc", "enumerate", "--cmax", "30", "--out", str(out), "--format", "json"))
            lines = out.read_text(encoding="utf-8").splitlines()
        self.assertEqual(lines[0], "a,b,c,R,q,quality,nu_product,eta,case1_ratio,case2_ratio")
        self.assertEqual(len(lines), data["triples"] + 1)
        self.assertEqual(data["violations"], 0)

    def test_scan_reports_rejected_lines(self):
        with tempfile.TemporaryDirectory() as tmp:
            src = Path(tmp) / "triples.txt"
            src.write_text("1 8 9\n2 4 6\n5 27 32\n", encoding="utf-8")
            out = Path(tmp) / "abc.csv"
            data = json.loads(
                _call("abc", "scan", "--input", str(src), "--out", str(out), "--format", "json")
            )
        self.assertEqual(data["triples"], 2)
        self.assertEqual(data["rejected"], 1)
        self.assertEqual(data["rejections"][0]["line"], 2)

    def test_scan_malformed_file_exits_2(self):
        with tempfile.TemporaryDirectory() as tmp:
            src = Path(tmp) / "triples.txt"
            src.write_text("1 8\n", encoding="utf-8")
            with self.assertRaises(CommandError) as ctx:
                _call("abc", "scan", "--input", str(src), "--out", str(Path(tmp) / "o.csv"))
        self.assertEqual(ctx.exception.returncode, 2)

    def test_global_flags_before_the_action(self):
        with tempfile.TemporaryDirectory() as tmp:
            out = Path(tmp) / "abc.csv"
            data = json.loads(_call("abc", "--format", "json", "enumerate", "--cmax", "20", "--out", str(out)))
        self.assertEqual(data["action"], "enumerate")
        self.assertEqual(data["violations"], 0)

    def test_broken_anchor_exits_1(self):
        broken = BoundReport(5.0, 1.0, False, 5.0, {})
        with tempfile.TemporaryDirectory() as tmp:
            src = Path(tmp) / "triples.txt"
            src.write_text("7 9 16\n", encoding="utf-8")
            with mock.patch("core.management.commands.abc.anchor_report", return_value=broken):
                with self.assertRaises(CommandError) as ctx:
                    _call("abc", "scan", "--input", str(src), "--out", str(Path(tmp) / "o.csv"))
        self.assertEqual(ctx.exception.returncode, 1)


class FitCommandTests(SimpleTestCase):
    def test_thm1_single_point(self):
        data = json.loads(
            _call("fit", "thm1", "--from", "16", "--to", "16", "--nmin", "16", "--format", "json")
        )
        self.assertAlmostEqual(data["kappa"], 4.84, delta=0.01)

    def test_fit_from_sweep_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "s.jsonl"
            _call("sweep", "--from", "16", "--to", "50", "--out", str(path))
            stored = json.loads(
                _call("fit", "thm2", "--input", str(path), "--nmin", "16", "--format", "json")
            )
        fresh = json.loads(
            _call("fit", "thm2", "--from", "16", "--to", "50", "--nmin", "16", "--format", "json")
        )
        self.assertEqual(stored["kappa"], fresh["kappa"])

    def test_cor4(self):
        data = json.loads(_call("fit", "cor4", "--from", "17", "--to", "17", "--format", "json"))
        self.assertAlmostEqual(data["kappa"], 0.320, places=2)

    def test_nmin_below_sixteen_exits_2(self):
        with self.assertRaises(CommandError) as ctx:
            _call("fit", "thm1", "--from", "16", "--to", "30", "--nmin", "4")
        self.assertEqual(ctx.exception.returncode, 2)


class BoundsCommandTests(SimpleTestCase):
    def test_amgm(self):
        data = json.loads(_call("bounds", "eval", "--expr", "amgm", "--args", "logR=4", "m=3", "--format", "json"))
        self.assertAlmostEqual(data["value"], 4.0)

    def test_constants_override(self):
        data = json.loads(
            _call(
                "bounds", "eval", "--expr", "eg_arch", "--args", "m=1", "heights=1", "h_xi=1",
                "--constants", "K_d=3", "--format", "json",
            )
        )
        self.assertAlmostEqual(data["value"], 3.0)

    def test_domain_error_exits_2(self):
        with self.assertRaises(CommandError) as ctx:
            _call("bounds", "eval", "--expr", "threshold_B", "--args", "R=2")
        self.assertEqual(ctx.exception.returncode, 2)

    def test_missing_argument_exits_2(self):
        with self.assertRaises(CommandError) as ctx:
            _call("bounds", "eval", "--expr", "chain", "--args", "logR=3")
        self.assertEqual(ctx.exception.returncode, 2)

    def test_global_flags_before_the_action(self):
        data = json.loads(
            _call(
                "bounds", "--constants", "K_d=3", "--format", "json",
                "eval", "--expr", "eg_arch", "--args", "m=1", "heights=1", "h_xi=1",
            )
        )
        self.assertAlmostEqual(data["value"], 3.0)


class VerifyCommandTests(SimpleTestCase):
    def test_quick_checks_pass(self):
        text = _call("verify", "gaussian", "--to", "300")
        self.assertIn("gaussian: ok (300 checked, 0 violations)", text)
        data = json.loads(_call("verify", "chebyshev", "--to", "200", "--xmax", "20000", "--format", "json"))
        self.assertTrue(data["ok"])

    def test_curves_and_products(self):
        data = json.loads(_call("verify", "curves", "--to", "60", "--format", "json"))
        self.assertTrue(data["ok"])
        data = json.loads(_call("verify", "products", "--to", "200", "--cmax", "80", "--format", "json"))
        self.assertTrue(data["ok"])

    def test_numerics(self):
        data = json.loads(_call("verify", "numerics", "--to", "100", "--samples", "50", "--format", "json"))
        self.assertTrue(data["ok"])

    def test_anchor_check(self):
        text = _call("verify", "anchor", "--cmax", "150")
        self.assertIn("anchor: ok (", text)
        self.assertIn(", 0 violations)", text)


class RunTests(SimpleTestCase):
    def test_exit_codes(self):
        self.assertEqual(run(["factor", "50"]), 0)
        self.assertEqual(run(["theta", "-1"]), 2)
        self.assertEqual(run(["theta", "1e9"]), 3)

    def test_unknown_or_missing_command_exits_2(self):
        for argv in (["bogus"], [], ["migrate"]):
            with mock.patch("sys.stderr", new_callable=StringIO) as err:
                self.assertEqual(run(argv), 2, argv)
            self.assertIn("commands: abc, bounds, curve", err.getvalue())
        with mock.patch("sys.stderr", new_callable=StringIO) as err:
            run(["bogus"])
        self.assertIn("Unknown command: 'bogus'", err.getvalue())
