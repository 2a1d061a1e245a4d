class MonopoleTripletError(Exception):
    pass


class DomainError(MonopoleTripletError, ValueError):
    """Quantum numbers or indices outside their allowed range."""


class PoleProximityError(MonopoleTripletError):
    """Evaluation too close to θ = 0 or θ = π where 1/sinθ blows up."""


class CriterionError(MonopoleTripletError):
    """(λ, j) pair rejected by the Pauli criterion."""


class SingularParameterError(MonopoleTripletError):
    """Gibbs parameter with 1 + c·c = 0."""


class StringSingularityError(MonopoleTripletError):
    pass


class StructuralError(MonopoleTripletError):
    """Amplitude requested in a slot that the separated ansatz forbids."""


class ConsistencyError(MonopoleTripletError):
    pass


class ClassificationError(MonopoleTripletError):
    def __init__(self, message: str, projections: dict | None = None):
        super().__init__(message)
        self.projections = projections or {}


class IntegrationError(MonopoleTripletError):
    pass


class UnclassifiedObservableError(MonopoleTripletError):
    pass


class ObservableSpecError(MonopoleTripletError, ValueError):
    def __init__(self, message: str, position: str | None = None):
        super().__init__(f"{position}: {message}" if position else message)
        self.position = position
