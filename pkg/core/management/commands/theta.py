from core.management.base import LabCommand
from core.services.sieve import chebyshev_theta


class Command(LabCommand):
    help = "Chebyshev's θ(x) = Σ_{p <= x} log p."
    template_name = "core/theta.txt"

    def add_command_arguments(self, parser):
        parser.add_argument("x", type=float)

    def handle(self, *args, **options):
        x = options["x"]
        theta = chebyshev_theta(x)
        data = {"x": x, "theta": theta, "ratio": theta / x if x > 0 else 0.0}
        self.emit(data, options)
