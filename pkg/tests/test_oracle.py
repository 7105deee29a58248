import math

import numpy as np
import pytest

from obmlc.oracle import DiscreteSource, mi_discrete_oracle, qpsk_source, ternary_source

# 30-digit mpmath evaluations of the ternary source at E = 1, sigma = sqrt(1/gamma)
MPMATH_TERNARY = {
    0.1: 0.0687496861817681,
    1.0: 0.497566207379374,
    4.0: 1.11063679571197,
    10.0: 1.43028269394503,
}


def test_single_point_is_zero():
    assert mi_discrete_oracle(DiscreteSource(np.array([1.5]), np.array([1.0])), 0.3).mi_bits == 0.0


def test_zero_prior_points_are_dropped():
    src = DiscreteSource(np.array([0.0, 5.0]), np.array([1.0, 0.0]))
    assert mi_discrete_oracle(src, 1.0).mi_bits == 0.0


def test_noiseless_binary_is_one_bit():
    src = DiscreteSource(np.array([1.0, -1.0]), np.array([0.5, 0.5]))
    assert mi_discrete_oracle(src, 0.05).mi_bits == pytest.approx(1.0, abs=1e-12)


def test_noiseless_qpsk_is_two_bits():
    assert mi_discrete_oracle(qpsk_source(1.0), 0.02).mi_bits == pytest.approx(2.0, abs=1e-9)


@pytest.mark.parametrize("gamma, ref", sorted(MPMATH_TERNARY.items()))
def test_ternary_against_mpmath(gamma, ref):
    assert mi_discrete_oracle(ternary_source(), math.sqrt(1.0 / gamma)).mi_bits == pytest.approx(ref, abs=1e-8)


@pytest.mark.parametrize("gamma", [0.3, 2.0])
def test_quadrature_and_montecarlo_agree(gamma):
    sigma = math.sqrt(1.0 / gamma)
    q = mi_discrete_oracle(ternary_source(), sigma).mi_bits
    mc = mi_discrete_oracle(ternary_source(), sigma, method="montecarlo", samples=200_000, seed=3)
    assert mc.std_error > 0
    assert abs(q - mc.mi_bits) < 4 * mc.std_error


def test_complex_grid_against_product_of_rails():
    # QPSK is two independent BPSK rails
    sigma = 0.7
    a = math.sqrt(0.5)
    bpsk = mi_discrete_oracle(DiscreteSource(np.array([a, -a]), np.array([0.5, 0.5])), sigma).mi_bits
    assert mi_discrete_oracle(qpsk_source(1.0), sigma).mi_bits == pytest.approx(2 * bpsk, abs=1e-9)


def test_validation():
    with pytest.raises(ValueError):
        DiscreteSource(np.array([0.0, 1.0]), np.array([0.5, 0.6]))
    with pytest.raises(ValueError):
        DiscreteSource(np.array([0.0, 1.0]), np.array([1.5, -0.5]))
    with pytest.raises(ValueError):
        mi_discrete_oracle(ternary_source(), 0.0)
    with pytest.raises(ValueError):
        mi_discrete_oracle(ternary_source(), 1.0, method="simpson")


def test_source_helpers():
    t = ternary_source()
    assert t.mean_energy == pytest.approx(1.0)
    assert qpsk_source(2.0).mean_energy == pytest.approx(2.0)
    assert qpsk_source(1.0).is_complex and not t.is_complex
