from core.management.base import LabCommand
from core.services.curves import global_reduction
from core.services.weierstrass import frey_curve


class Command(LabCommand):
    help = "Frey–Hellegouarch curve y² = x(x - a)(x + b) of an ABC triple and its reduction data."
    template_name = "core/frey.txt"

    def add_command_arguments(self, parser):
        parser.add_argument("a", type=int)
        parser.add_argument("b", type=int)
        parser.add_argument("c", type=int)

    def handle(self, *args, **options):
        a, b, c = options["a"], options["b"], options["c"]
        model = frey_curve(a, b, c)
        glob = global_reduction(model)
        data = {
            "triple": [a, b, c],
            "expected_discriminant": 16 * (a * b * c) ** 2,
            **glob.to_dict(),
        }
        self.emit(data, options, context={**data, "glob": glob, "curve": model})
