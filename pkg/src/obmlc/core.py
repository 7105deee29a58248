"""Domain types and SNR conventions shared by the rest of the package.

Conventions
-----------
* One real dimension carries the ternary alphabet ``{+A, 0, -A}`` with
  priors ``{1/4, 1/2, 1/4}``, so the mean symbol energy is ``A**2 / 2``.
* ``gamma`` is mean symbol energy over noise variance. In one dimension
  that is ``E_i / sigma_i**2``; in two dimensions ``E / sigma**2`` with
  ``E = 2 E_i`` and ``sigma**2 = 2 sigma_i**2``, which is the same number.
* Default normalization is ``E_i = 1`` (``A = sqrt(2)``); sweeps vary the
  noise, never the amplitude.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Role",
    "Dimension",
    "BitStream",
    "ConstellationConfig",
    "SnrSpec",
    "snr_from_db",
    "noise_sigma_for",
    "EFFECTIVELY_ZERO_GAMMA",
]

# below this, an SNR is flagged as effectively zero
EFFECTIVELY_ZERO_GAMMA = 1e-30


class Role(enum.Enum):
    OB = "ob"
    CB = "cb"


class Dimension(enum.Enum):
    ONE_DIM = "1d"
    TWO_DIM = "2d"


@dataclass(frozen=True, eq=False)
class BitStream:
    """Ordered binary sequence tagged as opportunistic (OB) or conventional (CB)."""

    bits: np.ndarray
    role: Role

    def __post_init__(self):
        arr = np.asarray(self.bits)
        if arr.ndim != 1:
            raise ValueError("bit stream must be one-dimensional")
        if arr.size and not np.all((arr == 0) | (arr == 1)):
            raise ValueError("bit stream elements must be 0 or 1")
        arr = arr.astype(np.uint8, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "bits", arr)
        if not isinstance(self.role, Role):
            object.__setattr__(self, "role", Role(self.role))

    @classmethod
    def ob(cls, bits) -> "BitStream":
        return cls(np.asarray(bits), Role.OB)

    @classmethod
    def cb(cls, bits) -> "BitStream":
        return cls(np.asarray(bits), Role.CB)

    def __len__(self) -> int:
        return int(self.bits.size)

    def popcount(self) -> int:
        return int(np.count_nonzero(self.bits))

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitStream):
            return NotImplemented
        return self.role is other.role and np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash((self.role, self.bits.tobytes()))


@dataclass(frozen=True)
class ConstellationConfig:
    """Amplitude ``A`` of the BPSK level and the resulting mean symbol energy."""

    amplitude: float = math.sqrt(2.0)
    mean_symbol_energy: float = field(init=False)

    def __post_init__(self):
        if not (math.isfinite(self.amplitude) and self.amplitude > 0):
            raise ValueError(f"amplitude must be positive and finite, got {self.amplitude}")
        object.__setattr__(self, "mean_symbol_energy", self.amplitude**2 / 2.0)

    @classmethod
    def from_mean_energy(cls, mean_symbol_energy: float) -> "ConstellationConfig":
        if not mean_symbol_energy > 0:
            raise ValueError("mean symbol energy must be positive")
        return cls(math.sqrt(2.0 * mean_symbol_energy))

    @property
    def cb_symbol_energy(self) -> float:
        """Energy of a non-vacant symbol, ``A**2`` (twice the mean)."""
        return self.amplitude**2


@dataclass(frozen=True)
class SnrSpec:
    gamma: float
    dimension: Dimension = Dimension.ONE_DIM

    def __post_init__(self):
        if not (math.isfinite(self.gamma) and self.gamma >= 0):
            raise ValueError(f"gamma must be finite and non-negative, got {self.gamma}")

    @property
    def db(self) -> float:
        if self.gamma == 0:
            return -math.inf
        return 10.0 * math.log10(self.gamma)

    @property
    def effectively_zero(self) -> bool:
        return self.gamma < EFFECTIVELY_ZERO_GAMMA

    @classmethod
    def from_physical_1d(cls, mean_energy_per_dim: float, sigma_per_dim: float) -> "SnrSpec":
        return cls(mean_energy_per_dim / sigma_per_dim**2, Dimension.ONE_DIM)

    @classmethod
    def from_physical_2d(cls, mean_energy: float, total_noise_var: float) -> "SnrSpec":
        return cls(mean_energy / total_noise_var, Dimension.TWO_DIM)


def snr_from_db(db: float, dimension: Dimension = Dimension.ONE_DIM) -> SnrSpec:
    """Convert a dB value to an :class:`SnrSpec`.

    Very negative inputs are accepted; check ``effectively_zero`` on the
    result if that matters to the caller.
    """
    db = float(db)
    if not math.isfinite(db):
        raise ValueError(f"SNR in dB must be finite, got {db}")
    return SnrSpec(10.0 ** (db / 10.0), dimension)


def noise_sigma_for(config: ConstellationConfig, snr: SnrSpec) -> float:
    """Per-real-dimension noise standard deviation ``sqrt(E_i / gamma)``."""
    if snr.gamma <= 0:
        raise ValueError("infinite noise: gamma must be positive to derive sigma")
    return math.sqrt(config.mean_symbol_energy / snr.gamma)
