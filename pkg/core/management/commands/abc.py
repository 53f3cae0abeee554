import csv

from core.exceptions import InvariantViolation, TripleRejected
from core.management.base import LabCommand, add_global_arguments
from core.services.abc import (
    REPORT_FIELDS,
    anchor_report,
    enumerate_triples,
    parse_triples,
    report_row,
    shimura_abc_check,
    triple_report,
)


class Command(LabCommand):
    help = "ABC triple reports: scan a triple list or enumerate all triples up to a bound."
    template_name = "core/abc.txt"

    def add_command_arguments(self, parser):
        sub = parser.add_subparsers(dest="action", required=True)

        scan = sub.add_parser("scan", help="report on every triple in a list file")
        scan.add_argument("--input", required=True, metavar="FILE")
        scan.add_argument("--out", required=True, metavar="FILE")
        add_global_arguments(scan, nested=True)

        enum = sub.add_parser("enumerate", help="report on every triple with c <= cmax")
        enum.add_argument("--cmax", type=int, required=True)
        enum.add_argument("--out", required=True, metavar="FILE")
        add_global_arguments(enum, nested=True)

    def handle(self, *args, **options):
        c = self.constants(options)
        rejected: list[TripleRejected] = []

        if options["action"] == "scan":
            with open(options["input"], encoding="utf-8") as fh:
                triples = []
                for item in parse_triples(fh):
                    if isinstance(item, TripleRejected):
                        rejected.append(item)
                    else:
                        triples.append(item)
        else:
            triples = enumerate_triples(options["cmax"])

        failures = []
        count = 0
        max_shimura = max_quality = 0.0
        best = None
        with open(options["out"], "w", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=REPORT_FIELDS, lineterminator="\n")
            writer.writeheader()
            for t in triples:
                rep = triple_report(t)
                writer.writerow(report_row(rep, c))
                check = shimura_abc_check(rep)
                if not check.holds:
                    failures.append(
                        f"{t.as_tuple()}: ∏ ν_p(abc) = {rep.nu_product} > R^{check.inputs_echo['exponent']}"
                    )
                anchor = anchor_report(rep)
                if anchor is not None and not anchor.holds:
                    failures.append(f"{t.as_tuple()}: log c / (2 log R) = {anchor.lhs} > ν_p0(x) = {anchor.rhs}")
                max_shimura = max(max_shimura, check.ratio)
                if rep.quality > max_quality:
                    max_quality, best = rep.quality, t.as_tuple()
                count += 1

        data = {
            "action": options["action"],
            "triples": count,
            "rejected": len(rejected),
            "rejections": [{"line": r.line_no, "text": r.text, "reason": r.reason} for r in rejected],
            "max_shimura_ratio": max_shimura,
            "max_quality": max_quality,
            "best_triple": list(best) if best else None,
            "out": options["out"],
            "violations": len(failures),
        }
        self.emit(data, options)
        if failures:
            raise InvariantViolation(f"{len(failures)} triple invariant violation(s)", failures)
