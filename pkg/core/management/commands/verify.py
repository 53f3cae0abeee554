from core.exceptions import InvariantViolation
from core.management.base import LabCommand
from core.services import verify

CHECKS = ("gaussian", "decomposition", "curves", "chebyshev", "products", "numerics", "anchor", "chain")


class Command(LabCommand):
    help = "Check the structural properties over a range; exit 1 if any fails."
    template_name = "core/verify.txt"

    def add_command_arguments(self, parser):
        parser.add_argument("check", choices=CHECKS + ("all",))
        parser.add_argument("--to", dest="n_max", type=int, help="largest n (default depends on the check)")
        parser.add_argument("--xmax", type=int, default=10**7, help="θ(x) < 4x is checked for x <= xmax")
        parser.add_argument("--cmax", type=int, default=10**4, help="triples with c <= cmax")
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument("--samples", type=int, default=1000, help="oracle comparison inputs")

    def _run(self, name, options):
        n_max = options["n_max"]
        if name == "gaussian":
            return verify.check_gaussian(n_max or 10**5)
        if name == "decomposition":
            return verify.check_decomposition(n_max or 10**4)
        if name == "curves":
            return verify.check_curves(n_max or 10**4)
        if name == "chebyshev":
            return verify.check_chebyshev(options["xmax"], n_max or 10**5)
        if name == "products":
            return verify.check_products(n_max or 10**5, options["cmax"])
        if name == "numerics":
            return verify.check_numerics(n_max or 10**4, options["seed"], options["samples"])
        if name == "anchor":
            return verify.check_anchor(options["cmax"])
        return verify.check_chain(n_max or 10**4, self.constants(options))

    def handle(self, *args, **options):
        names = CHECKS if options["check"] == "all" else (options["check"],)
        results = [self._run(name, options) for name in names]
        data = {"checks": [r.to_dict() for r in results], "ok": all(r.ok for r in results)}
        self.emit(data, options, rows=[{k: v for k, v in r.to_dict().items() if k != "stats"} for r in results])
        failures = [f for r in results for f in r.failures]
        if failures:
            raise InvariantViolation(f"{len(failures)} violation(s) found", failures)
