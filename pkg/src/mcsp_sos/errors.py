"""Exception types raised across the package."""


class MCSPError(Exception):
    """Base class for every error the package raises on purpose."""


# polynomials
class BarInconsistency(MCSPError):
    pass


class NotBooleanZero(MCSPError):
    def __init__(self, msg, point=None):
        super().__init__(msg)
        self.point = point


class UnassignedVariable(MCSPError):
    pass


# circuits / formulas / graphs
class InputTooLarge(MCSPError):
    pass


class BadLevel(MCSPError):
    pass


class NotSliceFunction(MCSPError):
    def __init__(self, msg, point=None):
        super().__init__(msg)
        self.point = point


class BudgetExceeded(MCSPError):
    pass


class BadParameters(MCSPError):
    pass


class DimensionMismatch(MCSPError):
    pass


class CertificationFailed(MCSPError):
    pass


class TooLarge(MCSPError):
    pass


# reduction
class BudgetTooSmall(MCSPError):
    def __init__(self, msg, required=None):
        super().__init__(msg)
        self.required = required


class CoverageViolation(MCSPError):
    pass


class SupportTooLarge(MCSPError):
    def __init__(self, msg, where=None):
        super().__init__(msg)
        self.where = where


class QAxiomNotBooleanZero(MCSPError):
    pass


# refuter
class WitnessMismatch(MCSPError):
    pass


class FunctionComputable(MCSPError):
    def __init__(self, msg, circuit=None):
        super().__init__(msg)
        self.circuit = circuit


class InvalidInputProof(MCSPError):
    pass


# certificates
class NotExpander(MCSPError):
    pass


class DegreeTooHigh(MCSPError):
    pass
