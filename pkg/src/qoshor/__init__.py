"""Statevector simulation of Shor factoring and a quantum-oracle variant
driven by simulated quantum state selection."""
from .errors import (CapacityError, ClassificationError, DomainError, PovmValidationError,
                     QoshorError, SelectionImpossibleError)
from .kernels import BACKEND
from .pipelines import (FactoringResult, QoConfig, ShorConfig, classical_factor, qo_factor,
                        shor_factor)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "CapacityError", "ClassificationError", "DomainError", "FactoringResult",
    "PovmValidationError", "QoConfig", "QoshorError", "SelectionImpossibleError", "ShorConfig",
    "classical_factor", "qo_factor", "shor_factor",
]
