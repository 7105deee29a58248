"""Brute-force mutual information for discrete inputs on the AWGN channel.

This is the reference the closed-form expressions in :mod:`obmlc.infotheory`
are checked against, so it deliberately shares none of their code. It works
in physical units (points and per-dimension noise std) directly from the
mixture definition::

    I(X; Z) = sum_x p(x) E_n[ log2 p(x + n | x) - log2 p(x + n) ]

Real sources are integrated with adaptive quadrature (``scipy.integrate.quad``);
complex sources use a dense uniform grid in the noise plane, which converges
exponentially for Gaussian-weighted smooth integrands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import logsumexp

__all__ = ["DiscreteSource", "OracleResult", "mi_discrete_oracle", "ternary_source", "qpsk_source"]


@dataclass(frozen=True, eq=False)
class DiscreteSource:
    points: np.ndarray
    priors: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points)
        pri = np.asarray(self.priors, dtype=np.float64)
        if pts.ndim != 1 or pts.shape != pri.shape or pts.size == 0:
            raise ValueError("points and priors must be equal-length, non-empty 1-D arrays")
        if np.any(pri < 0):
            raise ValueError("priors must be non-negative")
        if abs(pri.sum() - 1.0) > 1e-12:
            raise ValueError(f"priors must sum to 1 (got {pri.sum()!r})")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "priors", pri)

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.points)

    @property
    def mean_energy(self) -> float:
        return float(np.sum(self.priors * np.abs(self.points) ** 2))

    def support(self):
        keep = self.priors > 0
        return self.points[keep], self.priors[keep]


@dataclass(frozen=True)
class OracleResult:
    mi_bits: float
    std_error: float = 0.0


def ternary_source(amplitude: float = math.sqrt(2.0)) -> DiscreteSource:
    return DiscreteSource(np.array([amplitude, 0.0, -amplitude]), np.array([0.25, 0.5, 0.25]))


def qpsk_source(mean_energy: float) -> DiscreteSource:
    a = math.sqrt(mean_energy / 2.0)
    pts = np.array([a + 1j * a, -a + 1j * a, -a - 1j * a, a - 1j * a])
    return DiscreteSource(pts, np.full(4, 0.25))


def _log_density_terms(z, points, sigma):
    # log p(z|x) up to a shared constant, for every (z, x) pair
    d2 = np.abs(z[:, None] - points[None, :]) ** 2
    return -d2 / (2.0 * sigma * sigma)


def _pointwise_info(z, x, points, log_priors, sigma):
    """log2 p(z|x) - log2 p(z) for received values ``z`` sent from ``x``."""
    own = -np.abs(z - x) ** 2 / (2.0 * sigma * sigma)
    mix = logsumexp(_log_density_terms(z, points, sigma) + log_priors[None, :], axis=1)
    return (own - mix) / math.log(2.0)


def _quad_real(points, priors, sigma):
    log_priors = np.log(priors)
    total = 0.0
    norm = 1.0 / (sigma * math.sqrt(2.0 * math.pi))
    for x, p in zip(points, priors):

        def integrand(n, x=x):
            z = np.array([x + n])
            return norm * math.exp(-n * n / (2 * sigma * sigma)) * _pointwise_info(z, x, points, log_priors, sigma)[0]

        # split at the decision-relevant offsets so quad sees the kinks
        brk = sorted({float(q - x) for q in points if abs(q - x) < 12 * sigma} | {0.0})
        edges = [-12 * sigma] + [b for b in brk if -12 * sigma < b < 12 * sigma] + [12 * sigma]
        acc = 0.0
        for lo, hi in zip(edges[:-1], edges[1:]):
            val, _ = integrate.quad(integrand, lo, hi, epsabs=1e-13, epsrel=1e-12, limit=200)
            acc += val
        total += p * acc
    return total


def _grid_complex(points, priors, sigma, step_frac=1.0 / 6.0, half_width=10.0):
    log_priors = np.log(priors)
    u = np.arange(-half_width, half_width + 1e-12, step_frac)
    wts = np.exp(-u * u / 2.0)
    wts /= wts.sum()
    nr, ni = np.meshgrid(u * sigma, u * sigma, indexing="ij")
    noise = (nr + 1j * ni).ravel()
    w2 = np.outer(wts, wts).ravel()
    total = 0.0
    for x, p in zip(points, priors):
        info = _pointwise_info(x + noise, x, points, log_priors, sigma)
        total += p * float(np.dot(w2, info))
    return total


def _montecarlo(points, priors, sigma, samples, seed):
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(0x0AC1E,))))
    log_priors = np.log(priors)
    idx = rng.choice(points.size, size=samples, p=priors)
    x = points[idx]
    if np.iscomplexobj(points):
        n = sigma * (rng.standard_normal(samples) + 1j * rng.standard_normal(samples))
    else:
        n = sigma * rng.standard_normal(samples)
    info = _pointwise_info(x + n, x, points, log_priors, sigma)
    return float(info.mean()), float(info.std(ddof=1) / math.sqrt(samples))


def mi_discrete_oracle(
    source: DiscreteSource,
    sigma_per_dim: float,
    method: str = "quadrature",
    samples: int = 1_000_000,
    seed: int = 0,
) -> OracleResult:
    """Mutual information in bits between a discrete source and its AWGN output.

    ``sigma_per_dim`` is the noise standard deviation in each real dimension;
    complex sources see independent noise of that size on both parts.
    """
    if not sigma_per_dim > 0:
        raise ValueError("sigma_per_dim must be positive")
    points, priors = source.support()
    if np.unique(points).size == 1:
        return OracleResult(0.0)
    if method == "quadrature":
        if source.is_complex:
            val = _grid_complex(points, priors, sigma_per_dim)
        else:
            val = _quad_real(points.real.astype(np.float64), priors, sigma_per_dim)
        return OracleResult(max(val, 0.0))
    if method == "montecarlo":
        val, se = _montecarlo(points, priors, sigma_per_dim, samples, seed)
        return OracleResult(val, se)
    raise ValueError(f"unknown oracle method {method!r}")
