"""AWGN channel with counter-based, order-independent seeding.

Every logical noise stream is addressed by ``(seed, label, index...)`` and
derived through :class:`numpy.random.SeedSequence` spawn keys, so a stream
never depends on how many other streams were drawn before it or on which
worker drew it. Samples come from PCG64 with numpy's ziggurat
``standard_normal``; :data:`GENERATOR_INFO` records this for run manifests.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass

import numpy as np

__all__ = ["NoiseSpec", "GENERATOR_INFO", "substream", "awgn_real", "awgn_complex"]

GENERATOR_INFO = {
    "bit_generator": "PCG64",
    "normal": "numpy.random.Generator.standard_normal (ziggurat)",
    "seeding": "SeedSequence(seed, spawn_key=(crc32(label), *index))",
    "numpy": np.__version__,
}


@dataclass(frozen=True)
class NoiseSpec:
    sigma_per_dim: float
    seed: int = 0

    def __post_init__(self):
        if not self.sigma_per_dim >= 0:
            raise ValueError(f"sigma_per_dim must be non-negative, got {self.sigma_per_dim}")

    @property
    def total_power_2d(self) -> float:
        return 2.0 * self.sigma_per_dim**2


def _label_key(label) -> int:
    if isinstance(label, int):
        return label
    return zlib.crc32(str(label).encode())


def substream(seed: int, label, *index: int) -> np.random.Generator:
    """Independent generator for the logical stream ``(seed, label, *index)``."""
    key = (_label_key(label),) + tuple(int(i) for i in index)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=key)))


def awgn_real(symbols, noise: NoiseSpec, label="awgn", index: tuple[int, ...] = ()) -> np.ndarray:
    x = np.asarray(symbols, dtype=np.float64)
    if noise.sigma_per_dim == 0:
        return x.copy()
    rng = substream(noise.seed, label, *index, 0)
    return x + noise.sigma_per_dim * rng.standard_normal(x.shape)


def awgn_complex(symbols, noise: NoiseSpec, label="awgn", index: tuple[int, ...] = ()) -> np.ndarray:
    """Independent real-valued noise on each rail, drawn from separate substreams."""
    x = np.asarray(symbols, dtype=np.complex128)
    if noise.sigma_per_dim == 0:
        return x.copy()
    re = x.real + noise.sigma_per_dim * substream(noise.seed, label, *index, 0).standard_normal(x.shape)
    im = x.imag + noise.sigma_per_dim * substream(noise.seed, label, *index, 1).standard_normal(x.shape)
    return re + 1j * im
