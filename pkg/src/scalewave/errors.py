"""Exception hierarchy shared by all scalewave modules."""


class ScaleWaveError(Exception):
    """Base class for every error raised by this package."""


class NegativeDelta(ScaleWaveError, ValueError):
    """(mu - 1)^2 - 4 nu^2 < 0: the complex-parameter regime is not supported."""


class NegativeCoefficient(ScaleWaveError, ValueError):
    pass


class DomainError(ScaleWaveError, ValueError):
    """An argument lies outside the domain on which a function is defined."""


class NoConvergence(ScaleWaveError, ArithmeticError):
    pass


class StepTooLarge(ScaleWaveError, ValueError):
    pass


class CFLViolation(ScaleWaveError, ValueError):
    pass


class DomainTooSmall(ScaleWaveError, ValueError):
    """The finite-difference domain does not contain the numerical cone of dependence."""


class ConfigError(ScaleWaveError, ValueError):
    pass
