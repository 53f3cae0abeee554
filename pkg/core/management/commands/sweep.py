import logging
import math
from contextlib import ExitStack

from core.exceptions import InvariantViolation
from core.management.base import LabCommand
from core.services.sweep import csv_writer, run_sweep

logger = logging.getLogger(__name__)


class Command(LabCommand):
    help = "Sweep n over a range, one JSON record per n (JSONL), checking the n²+1 invariants."
    template_name = "core/sweep.txt"

    def add_command_arguments(self, parser):
        parser.add_argument("--from", dest="start", type=int, required=True)
        parser.add_argument("--to", dest="stop", type=int, required=True)
        parser.add_argument("--jobs", type=int, default=1)
        parser.add_argument("--out", required=True, metavar="FILE")
        parser.add_argument("--csv", dest="csv_out", metavar="FILE", help="also write a CSV projection")
        parser.add_argument("--progress", action="store_true", help="progress bar on stderr")

    def handle(self, *args, **options):
        start, stop = options["start"], options["stop"]
        failures: list[str] = []
        count = 0
        min_thm1 = min_thm2 = math.inf
        max_m = 0

        with ExitStack() as stack:
            fh = stack.enter_context(open(options["out"], "w", encoding="utf-8"))
            projection = None
            if options["csv_out"]:
                projection = csv_writer(stack.enter_context(open(options["csv_out"], "w", encoding="utf-8")))
            for record, broken in run_sweep(start, stop, options["jobs"], options["progress"]):
                fh.write(record.to_line() + "\n")
                if projection is not None:
                    projection.writerow(record.model_dump())
                for failure in broken:
                    logger.error(failure)
                failures.extend(broken)
                count += 1
                min_thm1 = min(min_thm1, record.thm1_ratio)
                min_thm2 = min(min_thm2, record.thm2_ratio)
                max_m = max(max_m, record.m)

        data = {
            "from": start,
            "to": stop,
            "records": count,
            "out": options["out"],
            "min_thm1_ratio": min_thm1,
            "min_thm2_ratio": min_thm2,
            "max_m": max_m,
            "violations": len(failures),
        }
        logger.info("Sweep finished: %d records, %d violations", count, len(failures))
        self.emit(data, options, context={**data, "start": start, "stop": stop})
        if failures:
            raise InvariantViolation(f"{len(failures)} invariant violation(s) in sweep", failures)
