"""Mutual-information sweeps and uncoded bit-error-rate studies."""

from __future__ import annotations

import csv
import enum
import io
import math
import os
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import optimize, stats

from .channel import NoiseSpec, awgn_real, substream
from .core import BitStream, ConstellationConfig, Dimension, SnrSpec, noise_sigma_for, snr_from_db
from .infotheory import EstimatorSpec, estimate
from .modem import DetectionMode, detect_multistage, map_one_dim

__all__ = [
    "ScenarioName",
    "Scenario",
    "MiRow",
    "MiCurve",
    "BerReport",
    "parse_grid",
    "default_grid",
    "run_mi_sweep",
    "run_ber",
    "run_ber_sweep",
    "ob_error_probability",
    "cb_error_probability",
    "bpsk_error_probability",
    "worker_count",
]


class ScenarioName(enum.Enum):
    OBMLC_1D_TOTAL = "obmlc1d"
    OBMLC_1D_LOW = "obmlc1d_low"
    OBMLC_1D_HIGH = "obmlc1d_high"
    BPSK = "bpsk"
    GAIN_1D = "gain1d"
    OBMLC_2D_TOTAL = "obmlc2d"
    QPSK = "qpsk"
    MLC_QPSK_LOW = "mlc_qpsk_low"
    GAIN_2D = "gain2d"


# scenario -> infotheory quantity evaluated at the grid gamma
_QUANTITY = {
    ScenarioName.OBMLC_1D_TOTAL: "total_1d",
    ScenarioName.OBMLC_1D_LOW: "ob",
    ScenarioName.OBMLC_1D_HIGH: "high_1d",
    ScenarioName.BPSK: "bpsk",
    ScenarioName.GAIN_1D: "gain_1d",
    ScenarioName.OBMLC_2D_TOTAL: "total_2d",
    ScenarioName.QPSK: "qpsk",
    ScenarioName.MLC_QPSK_LOW: "mlc_qpsk_low",
    ScenarioName.GAIN_2D: "gain_2d",
}

_TWO_DIM = {ScenarioName.OBMLC_2D_TOTAL, ScenarioName.QPSK, ScenarioName.MLC_QPSK_LOW, ScenarioName.GAIN_2D}


def parse_grid(text: str) -> list[float]:
    """Parse ``start:step:stop`` (inclusive) or a comma-separated list of dB values."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid must be start:step:stop, got {text!r}")
        start, step, stop = (float(p) for p in parts)
        if step <= 0:
            raise ValueError("grid step must be positive")
        if stop < start:
            raise ValueError("grid stop must not be below start")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + k * step, 12) for k in range(n)]
    return [float(p) for p in text.split(",") if p.strip()]


def default_grid() -> list[float]:
    return parse_grid("-10:1:20")


def worker_count() -> int:
    env = os.environ.get("OBMLC_THREADS")
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


@dataclass(frozen=True)
class Scenario:
    name: ScenarioName
    grid: tuple[float, ...] = field(default_factory=lambda: tuple(default_grid()))
    estimator: EstimatorSpec = EstimatorSpec()

    def __post_init__(self):
        if not isinstance(self.name, ScenarioName):
            object.__setattr__(self, "name", ScenarioName(self.name))
        grid = tuple(float(g) for g in self.grid)
        if not grid:
            raise ValueError("scenario grid is empty")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("scenario grid must be strictly increasing")
        if not all(math.isfinite(g) for g in grid):
            raise ValueError("scenario grid values must be finite")
        object.__setattr__(self, "grid", grid)

    @property
    def dimension(self) -> Dimension:
        return Dimension.TWO_DIM if self.name in _TWO_DIM else Dimension.ONE_DIM


@dataclass(frozen=True)
class MiRow:
    snr_db: float
    mi_bits: float
    std_err: float
    scenario: str
    estimator: str


@dataclass
class MiCurve:
    rows: list[MiRow]

    CSV_HEADER = ("snr_db", "mi_bits", "std_err", "scenario", "estimator")

    @property
    def snr_db(self) -> np.ndarray:
        return np.array([r.snr_db for r in self.rows])

    @property
    def mi_bits(self) -> np.ndarray:
        return np.array([r.mi_bits for r in self.rows])

    @property
    def std_err(self) -> np.ndarray:
        return np.array([r.std_err for r in self.rows])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.CSV_HEADER)
        for r in self.rows:
            w.writerow([repr(r.snr_db), f"{r.mi_bits:.17g}", f"{r.std_err:.17g}", r.scenario, r.estimator])
        return buf.getvalue()


def _point(scenario: Scenario, snr_db: float) -> MiRow:
    gamma = snr_from_db(snr_db, scenario.dimension).gamma
    est = estimate(_QUANTITY[scenario.name], gamma, scenario.estimator)
    return MiRow(snr_db, est.value, est.std_error, scenario.name.value, scenario.estimator.describe())


def run_mi_sweep(scenario: Scenario, workers: int | None = None) -> MiCurve:
    """One row per grid point; results do not depend on ``workers``."""
    workers = workers or worker_count()
    if workers == 1 or len(scenario.grid) == 1:
        rows = [_point(scenario, g) for g in scenario.grid]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda g: _point(scenario, g), scenario.grid))
    return MiCurve(rows)


# -- analytic error probabilities ---------------------------------------------


def _ob_threshold(amplitude: float, sigma: float) -> float:
    """|z| above which the MAP rule prefers the BPSK hypothesis over the vacant one."""

    def log_ratio(z):
        vacant = math.log(0.5) + stats.norm.logpdf(z, 0.0, sigma)
        busy = math.log(0.25) + np.logaddexp(stats.norm.logpdf(z, amplitude, sigma), stats.norm.logpdf(z, -amplitude, sigma))
        return vacant - busy

    hi = amplitude
    while log_ratio(hi) > 0:
        hi *= 2.0
    return optimize.brentq(log_ratio, 0.0, hi, xtol=1e-14, rtol=1e-14)


def ob_error_probability(gamma: float, config: ConstellationConfig | None = None) -> float:
    """Symbol-wise MAP error probability of the OB decision at average SNR ``gamma``."""
    config = config or ConstellationConfig()
    sigma = noise_sigma_for(config, SnrSpec(float(gamma)))
    a = config.amplitude
    t = _ob_threshold(a, sigma)
    p_vacant = 2.0 * stats.norm.sf(t / sigma)
    p_busy = stats.norm.cdf((t - a) / sigma) - stats.norm.cdf((-t - a) / sigma)
    return 0.5 * p_vacant + 0.5 * p_busy


def cb_error_probability(gamma: float, config: ConstellationConfig | None = None) -> float:
    """Genie-aided CB error probability: BPSK at amplitude ``A`` (energy ``2 E_i``)."""
    config = config or ConstellationConfig()
    sigma = noise_sigma_for(config, SnrSpec(float(gamma)))
    return float(stats.norm.sf(config.amplitude / sigma))


def bpsk_error_probability(gamma: float, config: ConstellationConfig | None = None) -> float:
    """Conventional BPSK using the same mean energy ``E_i`` on every symbol."""
    config = config or ConstellationConfig()
    sigma = noise_sigma_for(config, SnrSpec(float(gamma)))
    return float(stats.norm.sf(math.sqrt(config.mean_symbol_energy) / sigma))


# -- BER simulation --------------------------------------------------------------


@dataclass(frozen=True)
class BerReport:
    snr_db: float
    n_symbols: int
    ob_bit_error_rate: float
    cb_bit_error_rate_genie: float
    cb_position_error_rate_estimated: float
    cb_value_error_rate_estimated: float
    seed: int
    ob_std_err: float = 0.0
    cb_genie_std_err: float = 0.0
    n_cb_true: int = 0

    CSV_HEADER = ("snr_db", "n_symbols", "ob_ber", "cb_ber_genie", "cb_pos_err_est", "cb_val_err_est", "seed")

    def csv_row(self) -> list[str]:
        return [
            repr(self.snr_db),
            str(self.n_symbols),
            f"{self.ob_bit_error_rate:.17g}",
            f"{self.cb_bit_error_rate_genie:.17g}",
            f"{self.cb_position_error_rate_estimated:.17g}",
            f"{self.cb_value_error_rate_estimated:.17g}",
            str(self.seed),
        ]

    def as_dict(self) -> dict:
        return asdict(self)


def _point_key(snr_db: float) -> int:
    # 64-bit pattern of the SNR keeps a point's streams independent of the grid it sits in
    return struct.unpack("<Q", struct.pack("<d", float(snr_db)))[0]


def _binomial_se(p: float, n: int) -> float:
    return math.sqrt(p * (1.0 - p) / n) if n else 0.0


def run_ber(
    snr_db: float,
    n_symbols: int = 100_000,
    seed: int = 0,
    config: ConstellationConfig | None = None,
) -> BerReport:
    """Uncoded error rates of the two-level scheme on the real AWGN channel.

    CB scoring in estimated-OB mode works on position sets. With ``P`` the
    true CB positions and ``Q`` the claimed ones, the position error rate is
    ``|P ^ Q| / |P | Q|``. The value error rate counts every slot of
    ``P | Q`` not delivered correctly: missed and spurious slots, plus wrong
    decisions on ``P & Q``. A genie error always shows up there too, so this
    rate never falls below the genie-aided rate on the same realization.
    """
    if n_symbols < 1000:
        raise ValueError("n_symbols must be at least 1000")
    config = config or ConstellationConfig()
    snr = snr_from_db(snr_db)
    sigma = noise_sigma_for(config, snr)
    key = _point_key(snr_db)

    bits = substream(seed, "ber-bits", key)
    ob = BitStream.ob(bits.integers(0, 2, n_symbols, dtype=np.uint8))
    cb = BitStream.cb(bits.integers(0, 2, n_symbols, dtype=np.uint8))
    frame = map_one_dim(ob, cb, config)
    z = awgn_real(frame.symbols, NoiseSpec(sigma, seed), label="ber-noise", index=(key,))

    est = detect_multistage(z, config, sigma, DetectionMode.ESTIMATED_OB)
    genie = detect_multistage(z, config, sigma, DetectionMode.GENIE_OB, genie_ob=ob)

    n_cb = ob.popcount()
    cb_true = cb.bits[:n_cb]
    ob_err = np.count_nonzero(est.ob_hat.bits != ob.bits) / n_symbols
    cb_genie_err = np.count_nonzero(genie.cb_hat.bits != cb_true) / n_cb if n_cb else 0.0

    true_pos = frame.cb_positions
    claimed = est.cb_positions_hat
    union = np.union1d(true_pos, claimed).size
    sym_diff = np.setxor1d(true_pos, claimed, assume_unique=True).size
    common, i_true, i_claim = np.intersect1d(true_pos, claimed, assume_unique=True, return_indices=True)
    wrong = np.count_nonzero(cb_true[i_true] != est.cb_hat.bits[i_claim])
    pos_err = sym_diff / union if union else 0.0
    val_err = (sym_diff + wrong) / union if union else 0.0

    return BerReport(
        snr_db=float(snr_db),
        n_symbols=n_symbols,
        ob_bit_error_rate=ob_err,
        cb_bit_error_rate_genie=cb_genie_err,
        cb_position_error_rate_estimated=pos_err,
        cb_value_error_rate_estimated=val_err,
        seed=seed,
        ob_std_err=_binomial_se(ob_err, n_symbols),
        cb_genie_std_err=_binomial_se(cb_genie_err, n_cb),
        n_cb_true=n_cb,
    )


def run_ber_sweep(grid, n_symbols: int = 100_000, seed: int = 0, workers: int | None = None) -> list[BerReport]:
    workers = workers or worker_count()
    if workers == 1 or len(grid) == 1:
        return [run_ber(g, n_symbols, seed) for g in grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda g: run_ber(g, n_symbols, seed), grid))
