"""Exception hierarchy shared by the library and the CLI."""


class ToricError(Exception):
    """Base class for all errors raised by toricmori."""


class InputError(ToricError, ValueError):
    """Malformed input: bad fan document, unknown ray label, bad class expression."""


class DomainError(ToricError):
    """Well-formed input on which the requested operation is not defined."""


class InvalidFanError(InputError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid fan: " + "; ".join(self.violations))


class NotProjectiveError(DomainError):
    pass


class NotContractibleError(DomainError):
    pass
