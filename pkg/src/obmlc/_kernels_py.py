"""Vectorized numpy kernels; fallback when the compiled extension is absent.

All integrands are written relative to the noise-normalized channel
``w = z / (sigma * sqrt(2))`` where the noise is N(0, 1/2) per real
dimension and the kernel ``f(w, a) = exp(-|w - a|**2)``. Every log-ratio is
reduced in closed form before exponentiation so nothing underflows.
"""

import numpy as np

LN2 = np.log(2.0)


def _softplus(u):
    # log(1 + e^u)
    return np.logaddexp(0.0, u)


def _log_2cosh(x):
    ax = np.abs(x)
    return ax + np.log1p(np.exp(-2.0 * ax))


def llr_ob(z, amplitude, sigma):
    z = np.asarray(z, dtype=np.float64)
    s2 = sigma * sigma
    # ln 2 + A^2/2s^2 - ln(2 cosh(zA/s^2))
    return LN2 + amplitude * amplitude / (2.0 * s2) - _log_2cosh(z * amplitude / s2)


def llr_cb(z, amplitude, sigma):
    z = np.asarray(z, dtype=np.float64)
    return 2.0 * amplitude * z / (sigma * sigma)


def ob_integrand(w, r):
    """Per-sample loss of the OB level in bits; ``I_o = 1 - E[.]``.

    ``r = sqrt(gamma)``. The three terms are the vacant symbol (weight 1/2)
    and the two BPSK points (weight 1/4 each).
    """
    w = np.asarray(w, dtype=np.float64)
    r2 = r * r
    u1 = _log_2cosh(2.0 * r * w) - LN2 - r2
    u2 = LN2 - 2.0 * r * w - r2 - _softplus(-4.0 * r * w - 4.0 * r2)
    u3 = LN2 + 2.0 * r * w - r2 - _softplus(4.0 * r * w - 4.0 * r2)
    return (0.5 * _softplus(u1) + 0.25 * _softplus(u2) + 0.25 * _softplus(u3)) / LN2


def bpsk_integrand(w, a):
    """Per-sample loss of antipodal signalling at normalized amplitude ``a``."""
    w = np.asarray(w, dtype=np.float64)
    return _softplus(-4.0 * a * w - 4.0 * a * a) / LN2


def lq_integrand(x, y, r):
    """Per-sample loss of the set-partitioned QPSK low level.

    Points ``{+r, -r}`` form one subset and ``{+jr, -jr}`` the other;
    ``(x, y)`` are the real and imaginary noise parts.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    r2 = r * r
    cy = _log_2cosh(2.0 * r * y) - 2.0 * r2
    cx = _log_2cosh(2.0 * r * x) - 2.0 * r2
    u1 = -2.0 * r * x + cy - _softplus(-4.0 * r * x - 4.0 * r2)
    u2 = 2.0 * r * x + cy - _softplus(4.0 * r * x - 4.0 * r2)
    u3 = -2.0 * r * y + cx - _softplus(-4.0 * r * y - 4.0 * r2)
    u4 = 2.0 * r * y + cx - _softplus(4.0 * r * y - 4.0 * r2)
    return 0.25 * (_softplus(u1) + _softplus(u2) + _softplus(u3) + _softplus(u4)) / LN2
