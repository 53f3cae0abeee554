from core.management.base import LabCommand
from core.services.curves import lemma_prod_report
from core.services.weierstrass import curve_for


class Command(LabCommand):
    help = "Local and global reduction data of E_n : y² = x³ + 3x + 2n, with the exponent-product report."
    template_name = "core/curve.txt"

    def add_command_arguments(self, parser):
        parser.add_argument("n", type=int)

    def handle(self, *args, **options):
        n = options["n"]
        model = curve_for(n)
        report = lemma_prod_report(n, self.constants(options))
        data = {"model": list(model.ainvs), "discriminant": model.discriminant, **report.to_dict()}
        self.emit(data, options, context={**data, "report": report, "curve": model})
