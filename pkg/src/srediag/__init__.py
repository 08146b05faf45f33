"""State-robust equilibrium diagnostics for affine population games."""

__version__ = "0.1.0"

from .game import (  # noqa: E402
    InvalidGameError,
    InvalidStateError,
    PopulationGame,
    PopulationSpec,
    best_response_set,
    evaluate_payoffs,
    gap_gradient,
    gap_table,
    is_nash,
    pure_gap,
)
from .diagnostics import (  # noqa: E402
    DeviationKind,
    classify_deviation,
    exposure_certificate,
    psi,
    sre_membership,
)

__all__ = [
    "InvalidGameError",
    "InvalidStateError",
    "PopulationGame",
    "PopulationSpec",
    "best_response_set",
    "evaluate_payoffs",
    "gap_gradient",
    "gap_table",
    "is_nash",
    "pure_gap",
    "DeviationKind",
    "classify_deviation",
    "exposure_certificate",
    "psi",
    "sre_membership",
]
