from core.management.base import LabCommand
from core.services.integers import (
    exponent_product,
    factorize,
    is_prime,
    largest_prime_factor,
    radical,
)


class Command(LabCommand):
    help = "Prime factorization of n with rad(n), 𝒫(n) and ∏ ν_p(n)."
    template_name = "core/factor.txt"

    def add_command_arguments(self, parser):
        parser.add_argument("n", type=int)

    def handle(self, *args, **options):
        fact = factorize(options["n"])
        data = {
            "n": fact.value,
            "factors": [list(pair) for pair in fact.factors],
            "is_prime": is_prime(fact.value),
            "radical": radical(fact),
            "largest_prime_factor": largest_prime_factor(fact),
            "exponent_product": exponent_product(fact),
        }
        self.emit(data, options, context={**data, "fact": fact})
