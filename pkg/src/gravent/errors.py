"""Exception hierarchy. Everything raised for bad physics or bad inputs is a DomainError."""


class DomainError(ValueError):
    """Base class for errors the CLI reports with exit status 1."""


class TrapUnstable(DomainError):
    pass


class DeltaSingular(DomainError):
    pass


class UnphysicalTheta(DomainError):
    pass


class NotPositiveDefinite(DomainError):
    pass


class NotSymmetric(DomainError):
    pass


class NegativeDiscriminant(DomainError):
    pass


class NonPositiveNu(DomainError):
    pass


class InvariantInconsistency(DomainError):
    pass


class BonaFideViolation(DomainError):
    def __init__(self, violated, message=None):
        self.violated = tuple(violated)
        super().__init__(message or f"bona fide conditions violated: {', '.join(self.violated)}")


class EpsilonOutOfRange(DomainError):
    pass


class LogDomain(DomainError):
    pass


class DegenerateDiscriminant(DomainError):
    pass


class GeometryInvalid(DomainError):
    pass


class NoInteriorMaximum(DomainError):
    pass


class NoSignChange(DomainError):
    pass


class AcceptanceTooLow(DomainError):
    pass


class BoundViolation(DomainError):
    def __init__(self, params, relative_change, message=None):
        self.params = params
        self.relative_change = relative_change
        super().__init__(message or f"bound violated by {params}: relative change {relative_change}")


class ImpossibilityViolated(DomainError):
    def __init__(self, params, message=None):
        self.params = params
        super().__init__(message or f"sqrt(eps) scenario realised by {params}")
