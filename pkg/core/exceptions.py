"""Error hierarchy shared by the services and the command layer."""


class NumberTheoryError(ValueError):
    """Base class: bad input for an arithmetic operation."""


class DomainGuardError(NumberTheoryError):
    """Input lies outside the domain of a formula (e.g. log log R with R <= e)."""


class CapacityError(NumberTheoryError):
    """A configured resource limit was exceeded (sieve ceiling, factoring effort)."""


class InvariantViolation(RuntimeError):
    """A sweep observed a property that must hold for every input."""

    def __init__(self, message: str, failures: list[str] | None = None):
        super().__init__(message)
        self.failures = list(failures or [])


class TripleRejected(NumberTheoryError):
    """A triple-list line that parses but breaks the ABC triple invariants."""

    def __init__(self, line_no: int, text: str, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.text = text
        self.reason = reason
