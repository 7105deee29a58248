"""Two-level OB/CB symbol mapping, soft demapping and multistage detection.

The opportunistic bit (OB) of every channel use selects between a vacant
symbol (OB = 0) and a BPSK symbol carrying the next conventional bit
(OB = 1). The receiver decides the OB level first and uses those decisions to
locate the CB-bearing symbols.

LLR sign convention for both levels: the numerator is the hypothesis "bit = 0",
so a positive LLR favours 0. A zero LLR decides 0.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .core import BitStream, ConstellationConfig, Role

__all__ = [
    "CbUnderrunError",
    "DetectionMode",
    "SymbolFrame",
    "LlrFrame",
    "DetectionResult",
    "map_cb_symbol",
    "map_one_dim",
    "map_two_dim",
    "llr_ob",
    "llr_cb",
    "demap_soft",
    "detect_multistage",
]


class CbUnderrunError(ValueError):
    """Raised when an OB stream asks for more CB bits than were supplied."""

    def __init__(self, symbol_index: int, dimension: str = "i"):
        self.symbol_index = symbol_index
        self.dimension = dimension
        super().__init__(f"CB underrun at symbol index {symbol_index} ({dimension} rail)")


class DetectionMode(enum.Enum):
    GENIE_OB = "genie"
    ESTIMATED_OB = "estimated"


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SymbolFrame:
    """Channel symbols plus the constellation that produced them.

    ``cb_positions`` indexes the CB-bearing symbols of the real (in-phase)
    rail; ``cb_positions_q`` is set only for complex frames.
    """

    symbols: np.ndarray
    config: ConstellationConfig
    cb_positions: np.ndarray
    cb_positions_q: np.ndarray | None = None

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.symbols)

    def __len__(self) -> int:
        return int(self.symbols.size)


@dataclass(frozen=True, eq=False)
class LlrFrame:
    llr_ob: np.ndarray
    cb_positions: np.ndarray
    llr_cb: np.ndarray  # one entry per index in cb_positions


@dataclass(frozen=True, eq=False)
class DetectionResult:
    ob_hat: BitStream
    cb_hat: BitStream
    cb_positions_hat: np.ndarray
    mode: DetectionMode
    llrs: LlrFrame | None = field(default=None, repr=False)


def map_cb_symbol(v_c: int, config: ConstellationConfig) -> float:
    if v_c not in (0, 1):
        raise ValueError(f"CB bit must be 0 or 1, got {v_c!r}")
    return config.amplitude * (1 - 2 * v_c)


def _map_rail(ob: BitStream, cb: BitStream, config: ConstellationConfig, rail: str):
    if ob.role is not Role.OB:
        raise ValueError("first stream must have role OB")
    if cb.role is not Role.CB:
        raise ValueError("second stream must have role CB")
    positions = np.flatnonzero(ob.bits)
    need = positions.size
    if len(cb) < need:
        raise CbUnderrunError(int(positions[len(cb)]), rail)
    symbols = np.zeros(len(ob), dtype=np.float64)
    symbols[positions] = config.amplitude * (1.0 - 2.0 * cb.bits[:need])
    return symbols, positions


def map_one_dim(ob: BitStream, cb: BitStream, config: ConstellationConfig | None = None) -> SymbolFrame:
    """Emit one real symbol per OB bit.

    An OB bit of 1 consumes the next unused CB bit and sends ``A(1 - 2 v_c)``;
    an OB bit of 0 sends the vacant symbol 0. Exactly ``popcount(ob)`` CB bits
    are consumed, in order. Surplus CB bits are ignored.
    """
    config = config or ConstellationConfig()
    symbols, positions = _map_rail(ob, cb, config, "i")
    return SymbolFrame(_frozen(symbols), config, _frozen(positions))


def map_two_dim(
    ob_i: BitStream,
    cb_i: BitStream,
    ob_q: BitStream,
    cb_q: BitStream,
    config: ConstellationConfig | None = None,
) -> SymbolFrame:
    config = config or ConstellationConfig()
    if len(ob_i) != len(ob_q):
        raise ValueError(f"OB stream length mismatch: {len(ob_i)} (i) vs {len(ob_q)} (q)")
    re, pos_i = _map_rail(ob_i, cb_i, config, "i")
    im, pos_q = _map_rail(ob_q, cb_q, config, "q")
    return SymbolFrame(_frozen(re + 1j * im), config, _frozen(pos_i), _frozen(pos_q))


def _check_sigma(sigma: float) -> None:
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")


def llr_ob(z, config: ConstellationConfig, sigma: float):
    """Log-likelihood ratio of the OB level, ``ln p(z | vacant) / p(z | BPSK)``.

    Evaluated as ``ln 2 + A^2/(2 s^2) - ln(2 cosh(z A / s^2))`` so it stays
    finite for any ``z`` and small ``sigma``. Scalars in, scalar out.
    """
    _check_sigma(sigma)
    out = kernels.llr_ob(np.atleast_1d(np.asarray(z, dtype=np.float64)), config.amplitude, sigma)
    return float(out[0]) if np.ndim(z) == 0 else out


def llr_cb(z, config: ConstellationConfig, sigma: float):
    """``2 A z / sigma^2``; positive favours CB bit 0 (symbol +A)."""
    _check_sigma(sigma)
    out = kernels.llr_cb(np.atleast_1d(np.asarray(z, dtype=np.float64)), config.amplitude, sigma)
    return float(out[0]) if np.ndim(z) == 0 else out


def _hard(llr: np.ndarray) -> np.ndarray:
    return (llr < 0).astype(np.uint8)


def demap_soft(received, config: ConstellationConfig, sigma: float, cb_positions=None) -> LlrFrame:
    """OB LLRs everywhere; CB LLRs at ``cb_positions`` (default: where the OB LLR says 1)."""
    z = np.asarray(received, dtype=np.float64)
    lo = llr_ob(z, config, sigma) if z.size else np.zeros(0)
    if cb_positions is None:
        cb_positions = np.flatnonzero(_hard(lo))
    cb_positions = np.asarray(cb_positions, dtype=np.intp)
    lc = llr_cb(z[cb_positions], config, sigma) if cb_positions.size else np.zeros(0)
    return LlrFrame(lo, cb_positions, lc)


def detect_multistage(
    received,
    config: ConstellationConfig,
    sigma: float,
    mode: DetectionMode = DetectionMode.ESTIMATED_OB,
    genie_ob: BitStream | None = None,
) -> DetectionResult:
    """Decide the OB level, then demodulate CB symbols at the OB=1 positions.

    In ``GENIE_OB`` mode the true OB stream picks the CB positions, which
    isolates CB performance from OB errors. ``received`` is a real sequence;
    run each rail separately for complex frames.
    """
    z = np.asarray(received, dtype=np.float64)
    if z.ndim != 1:
        raise ValueError("received must be a one-dimensional real sequence")
    if mode is DetectionMode.GENIE_OB:
        if genie_ob is None:
            raise ValueError("GENIE_OB mode requires the true OB stream")
        if len(genie_ob) != z.size:
            raise ValueError(f"genie OB stream has length {len(genie_ob)}, frame has {z.size}")
    _check_sigma(sigma)
    llr_o = llr_ob(z, config, sigma) if z.size else np.zeros(0)
    ob_hat = _hard(llr_o)
    if mode is DetectionMode.GENIE_OB:
        positions = np.flatnonzero(genie_ob.bits)
    else:
        positions = np.flatnonzero(ob_hat)
    llr_c = llr_cb(z[positions], config, sigma) if positions.size else np.zeros(0)
    cb_hat = _hard(llr_c)
    llrs = LlrFrame(llr_o, positions, llr_c)
    return DetectionResult(BitStream(ob_hat, Role.OB), BitStream(cb_hat, Role.CB), positions, mode, llrs)
