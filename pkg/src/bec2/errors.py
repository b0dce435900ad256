"""Exception hierarchy shared by every module."""


class Bec2Error(Exception):
    """Base class for all errors raised by the package."""


class DomainError(Bec2Error, ValueError):
    """An argument lies outside the domain of a formula (e.g. zero detuning)."""


class ValidationError(Bec2Error, ValueError):
    """One or more parameters failed validation.

    ``problems`` lists every violated constraint, not only the first.
    """

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class SingularMediumError(Bec2Error, ArithmeticError):
    """The Lorentz-Lorenz screening factor vanishes (pole of chi and n)."""

    def __init__(self, message, sample=None):
        super().__init__(message)
        self.sample = sample


class SingularDetuningError(Bec2Error, ArithmeticError):
    """The local detuning vanishes somewhere it is divided by."""

    def __init__(self, message, sample=None, index=None):
        super().__init__(message)
        self.sample = sample
        self.index = index


class ResolutionError(Bec2Error, ValueError):
    """A grid is too coarse for the requested finite-difference operation."""


class NumericBlowupError(Bec2Error, FloatingPointError):
    """Non-finite values appeared during time evolution."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step
