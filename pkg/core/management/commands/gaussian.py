from django.core.management.base import CommandError

from core.management.base import LabCommand
from core.services.bounds import threshold_B
from core.services.gaussian import decompose_xi, factor_n_plus_i, xi_of
from core.services.integers import factorize, log_int, radical


class Command(LabCommand):
    help = "Factor n + i in Z[i] and split (n - i)/(n + i) at a threshold B."
    template_name = "core/gaussian.txt"

    def add_command_arguments(self, parser):
        parser.add_argument("n", type=int)
        parser.add_argument(
            "--threshold",
            default="auto",
            help="B, or 'auto' for exp(√(log R · log log R)) with R = rad(n²+1)",
        )

    def handle(self, *args, **options):
        n = options["n"]
        gfact = factor_n_plus_i(n)
        rad = radical(factorize(n * n + 1))
        raw = options["threshold"]
        if raw == "auto":
            B = threshold_B(rad)
        else:
            try:
                B = float(raw)
            except ValueError:
                raise CommandError(f"--threshold must be a number or 'auto', got {raw!r}", returncode=2)
        dec = decompose_xi(gfact, B)
        xi = xi_of(n)
        data = {
            "n": n,
            "unit": str(gfact.unit),
            "factors": [[str(g), e] for g, e in gfact.factors],
            "rad": rad,
            "threshold": B,
            "m": dec.m,
            "large": [[g.index, g.prime, g.exponent] for g in dec.large_generators],
            "xi0_exponents": [list(pair) for pair in dec.xi0_exponents],
            "xi_height": xi.height(),
            "xi0_height": dec.xi0_height(),
            "xi0_height_bound": B * log_int(rad),
            "generator_heights": list(dec.generator_heights()),
            "reconstructs": dec.reconstruct() == dec.target,
        }
        self.emit(data, options, context={**data, "gfactors": gfact.factors, "dec": dec})
