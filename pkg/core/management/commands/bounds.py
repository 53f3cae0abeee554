from django.core.management.base import CommandError

from core.exceptions import NumberTheoryError
from core.management.base import LabCommand, add_global_arguments
from core.services import bounds
from core.services.oracle import compare_with_oracle


def _heights(args) -> list[float]:
    return [float(h) for h in args["heights"].split(",") if h.strip()]


# name -> (required argument names, evaluator(args, constants))
EXPRESSIONS = {
    "threshold_B": (("R",), lambda a, c: bounds.threshold_B(float(a["R"]))),
    "iterated_log": (("x", "k"), lambda a, c: bounds.iterated_log(float(a["x"]), int(a["k"]))),
    "eg_arch": (
        ("m", "heights", "h_xi"),
        lambda a, c: bounds.eg_arch_rhs(int(a["m"]), _heights(a), float(a["h_xi"]), c),
    ),
    "eg_nonarch": (
        ("m", "heights", "h_xi", "norm_p"),
        lambda a, c: bounds.eg_nonarch_rhs(
            int(a["m"]), _heights(a), float(a["h_xi"]), int(a["norm_p"]), c
        ),
    ),
    "amgm": (("logR", "m"), lambda a, c: bounds.amgm_product_bound(float(a["logR"]), int(a["m"]))),
    "chain": (
        ("logR", "B", "m"),
        lambda a, c: bounds.chain_rhs(float(a["logR"]), float(a["B"]), int(a["m"]), c),
    ),
    "chain_single": (
        ("logR", "B"),
        lambda a, c: bounds.chain_rhs_single(float(a["logR"]), float(a["B"]), c),
    ),
    "count_bound": (
        ("logR", "B"),
        lambda a, c: bounds.large_exponent_count_bound(float(a["logR"]), float(a["B"]), c),
    ),
    "abc_chain": (
        ("logR", "B", "m"),
        lambda a, c: bounds.abc_chain_rhs(float(a["logR"]), float(a["B"]), int(a["m"]), c),
    ),
    "abc_large_exponent": (
        ("logR",),
        lambda a, c: bounds.abc_large_exponent_bound(float(a["logR"])),
    ),
    "calculus": (
        ("A",),
        lambda a, c: bounds.calculus_check(float(a["A"]), int(a["grid"]) if "grid" in a else None),
    ),
    "theorem2_chain": (("n",), lambda a, c: bounds.theorem2_chain(int(a["n"]), c).to_dict()),
    "oracle": (
        (),
        lambda a, c: compare_with_oracle(int(a.get("seed", 0)), int(a.get("count", 1000))),
    ),
}


class Command(LabCommand):
    help = "Evaluate one bound expression: bounds eval --expr NAME --args key=value ..."
    template_name = "core/bounds.txt"

    def add_command_arguments(self, parser):
        sub = parser.add_subparsers(dest="action", required=True)
        ev = sub.add_parser("eval", help="evaluate a named expression")
        ev.add_argument("--expr", required=True, choices=sorted(EXPRESSIONS))
        ev.add_argument("--args", dest="expr_args", nargs="*", default=[], metavar="KEY=VALUE")
        add_global_arguments(ev, nested=True)

    def handle(self, *args, **options):
        name = options["expr"]
        required, evaluate = EXPRESSIONS[name]
        values = {}
        for item in options["expr_args"]:
            key, sep, value = item.partition("=")
            if not sep:
                raise CommandError(f"--args expects key=value, got {item!r}", returncode=2)
            values[key.strip()] = value.strip()
        missing = [k for k in required if k not in values]
        if missing:
            raise CommandError(f"{name} needs {', '.join(missing)}", returncode=2)
        try:
            result = evaluate(values, self.constants(options))
        except ValueError as exc:
            # NumberTheoryError is a ValueError too; let the base class map it
            if isinstance(exc, NumberTheoryError):
                raise
            raise CommandError(f"bad argument for {name}: {exc}", returncode=2) from exc
        data = {"expr": name, "args": values, "value": result}
        self.emit(data, options)
