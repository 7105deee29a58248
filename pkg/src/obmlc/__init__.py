"""Opportunistic-bit multilevel coding (OB-MLC) simulation and analysis."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    BitStream,
    ConstellationConfig,
    Dimension,
    Role,
    SnrSpec,
    noise_sigma_for,
    snr_from_db,
)
from .infotheory import EstimatorSpec  # noqa: E402

__all__ = [
    "BitStream",
    "ConstellationConfig",
    "Dimension",
    "EstimatorSpec",
    "Role",
    "SnrSpec",
    "noise_sigma_for",
    "snr_from_db",
]
