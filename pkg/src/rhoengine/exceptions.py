"""Exception hierarchy shared by every module of the engine."""


class RhoEngineError(Exception):
    """Base class for all errors raised by rhoengine."""


# operator core
class NotHermitian(RhoEngineError, ValueError):
    pass


class NonFinite(RhoEngineError, ValueError):
    pass


class ConvergenceFailure(RhoEngineError, ArithmeticError):
    pass


class IndexOutOfRange(RhoEngineError, IndexError):
    pass


class DimensionMismatch(RhoEngineError, ValueError):
    pass


# density operators
class NotNormalized(RhoEngineError, ValueError):
    pass


class WeightsInvalid(RhoEngineError, ValueError):
    pass


class InvalidRank(RhoEngineError, ValueError):
    pass


class NotDensityOperator(RhoEngineError, ValueError):
    """Matrix violates unit trace or positivity beyond the clamp tolerance."""


# measurement
class NegativeVariance(RhoEngineError, ArithmeticError):
    pass


class NotPositive(NotDensityOperator):
    """Expectation values that do not correspond to any state."""


class InvalidDimension(RhoEngineError, ValueError):
    pass


# models
class InvalidGrid(RhoEngineError, ValueError):
    pass


class WrongBoundary(RhoEngineError, ValueError):
    pass


class ModeOutOfRange(RhoEngineError, ValueError):
    pass


class InvalidMode(RhoEngineError, ValueError):
    pass


class InvalidSpin(RhoEngineError, ValueError):
    pass


class PacketTooWide(RhoEngineError, ValueError):
    pass


class PacketUnresolved(RhoEngineError, ValueError):
    pass


# dynamics
class InvalidStep(RhoEngineError, ValueError):
    pass


class InvalidSchedule(RhoEngineError, ValueError):
    pass


# ensembles
class InsufficientData(RhoEngineError, ValueError):
    pass


# cli
class ConfigInvalid(RhoEngineError, ValueError):
    pass


class ReportWriteFailure(RhoEngineError, OSError):
    pass
