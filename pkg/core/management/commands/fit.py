from django.core.management.base import CommandError

from core.exceptions import TripleRejected
from core.management.base import LabCommand
from core.services import get_setting
from core.services.abc import (
    corollary4_fit,
    enumerate_triples,
    fit_case1_kappa,
    fit_case2_kappa,
    parse_triples,
    triple_report,
)
from core.services.bounds import fit_kappa
from core.services.sweep import fit_samples, read_jsonl

SWEEP_SHAPES = ("thm1", "thm2", "chowla")
TRIPLE_SHAPES = ("cor4", "abc-case1", "abc-case2")


class Command(LabCommand):
    help = (
        "Fit the empirical constant κ: thm1/thm2/chowla over n in [from, to], "
        "cor4/abc-case1/abc-case2 over triples with c in [from, to]."
    )
    template_name = "core/fit.txt"

    def add_command_arguments(self, parser):
        parser.add_argument("shape", choices=SWEEP_SHAPES + TRIPLE_SHAPES)
        parser.add_argument("--from", dest="start", type=int)
        parser.add_argument("--to", dest="stop", type=int)
        parser.add_argument("--nmin", type=int, help="smallest n (or b for cor4) taken into the fit")
        parser.add_argument("--jobs", type=int, default=1)
        parser.add_argument("--input", metavar="FILE", help="sweep JSONL or triple list instead of recomputing")

    def _in_range(self, value, options) -> bool:
        start, stop = options["start"], options["stop"]
        return (start is None or value >= start) and (stop is None or value <= stop)

    def _triples(self, options):
        if options["input"]:
            with open(options["input"], encoding="utf-8") as fh:
                items = list(parse_triples(fh))
            triples = [t for t in items if not isinstance(t, TripleRejected)]
        else:
            if options["stop"] is None:
                raise CommandError("--to (largest c) or --input is required", returncode=2)
            triples = enumerate_triples(options["stop"])
        return [t for t in triples if self._in_range(t.c, options)]

    def handle(self, *args, **options):
        shape = options["shape"]
        if shape in SWEEP_SHAPES:
            if options["input"]:
                samples = [
                    r.sample(shape) for r in read_jsonl(options["input"]) if self._in_range(r.n, options)
                ]
            else:
                if options["start"] is None or options["stop"] is None:
                    raise CommandError("--from and --to (or --input) are required", returncode=2)
                samples = fit_samples(options["start"], options["stop"], shape, options["jobs"])
            n_min = options["nmin"] if options["nmin"] is not None else get_setting("FIT_NMIN")
            kappa = fit_kappa(samples, shape, n_min)
        elif shape == "cor4":
            kappa = corollary4_fit(self._triples(options), options["nmin"] or 16)
        else:
            reports = [triple_report(t) for t in self._triples(options)]
            kappa = fit_case2_kappa(reports) if shape == "abc-case2" else fit_case1_kappa(reports)

        data = {
            "shape": shape,
            "kappa": kappa,
            "from": options["start"],
            "to": options["stop"],
            "input": options["input"],
        }
        self.emit(data, options)
