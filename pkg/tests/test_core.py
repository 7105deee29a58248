import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from obmlc.core import (
    BitStream,
    ConstellationConfig,
    Dimension,
    Role,
    SnrSpec,
    noise_sigma_for,
    snr_from_db,
)


class TestBitStream:
    def test_roles_and_contents(self):
        s = BitStream.ob([1, 0, 1])
        assert s.role is Role.OB
        assert len(s) == 3
        assert s.popcount() == 2
        assert s.bits.dtype == np.uint8

    def test_rejects_non_binary(self):
        with pytest.raises(ValueError):
            BitStream.cb([0, 2, 1])

    def test_empty_allowed(self):
        assert len(BitStream.cb([])) == 0

    def test_immutable(self):
        s = BitStream.ob([1, 0])
        with pytest.raises(ValueError):
            s.bits[0] = 0
        with pytest.raises(AttributeError):
            s.role = Role.CB

    def test_equality_includes_role(self):
        assert BitStream.ob([1, 0]) == BitStream.ob([1, 0])
        assert BitStream.ob([1, 0]) != BitStream.cb([1, 0])


class TestConstellationConfig:
    def test_default_normalization(self):
        c = ConstellationConfig()
        assert c.amplitude == pytest.approx(math.sqrt(2.0))
        assert c.mean_symbol_energy == pytest.approx(1.0)

    @given(st.floats(min_value=1e-3, max_value=1e3))
    def test_cb_energy_is_twice_mean(self, a):
        c = ConstellationConfig(a)
        assert c.cb_symbol_energy / c.mean_symbol_energy == pytest.approx(2.0, rel=1e-15)

    def test_from_mean_energy(self):
        c = ConstellationConfig.from_mean_energy(2.0)
        assert c.amplitude == pytest.approx(2.0)

    @pytest.mark.parametrize("a", [0.0, -1.0, float("nan"), float("inf")])
    def test_rejects_bad_amplitude(self, a):
        with pytest.raises(ValueError):
            ConstellationConfig(a)


class TestSnr:
    @pytest.mark.parametrize("db, gamma", [(0.0, 1.0), (10.0, 10.0), (20.0, 100.0), (-10.0, 0.1)])
    def test_from_db(self, db, gamma):
        assert snr_from_db(db).gamma == pytest.approx(gamma, rel=1e-15)

    def test_very_negative_db_is_flagged(self):
        s = snr_from_db(-400.0)
        assert s.gamma == pytest.approx(1e-40, rel=1e-12)
        assert s.effectively_zero

    @pytest.mark.parametrize("db", [float("nan"), float("inf"), -float("inf")])
    def test_non_finite_rejected(self, db):
        with pytest.raises(ValueError):
            snr_from_db(db)

    @given(st.floats(min_value=-200.0, max_value=200.0))
    def test_db_roundtrip(self, db):
        s = snr_from_db(db)
        assert snr_from_db(s.db).gamma == pytest.approx(s.gamma, rel=1e-12)
        assert s.db == pytest.approx(db, rel=1e-12, abs=1e-12)

    @given(st.floats(min_value=1e-3, max_value=1e3), st.floats(min_value=1e-3, max_value=1e3))
    def test_one_and_two_dim_conventions_agree(self, e_i, sigma_i):
        one = SnrSpec.from_physical_1d(e_i, sigma_i)
        two = SnrSpec.from_physical_2d(2.0 * e_i, 2.0 * sigma_i**2)
        assert two.dimension is Dimension.TWO_DIM
        assert two.gamma == pytest.approx(one.gamma, rel=1e-14)


class TestNoiseSigma:
    @pytest.mark.parametrize("e_i, gamma, sigma", [(1.0, 1.0, 1.0), (1.0, 4.0, 0.5), (2.0, 2.0, 1.0)])
    def test_inversion(self, e_i, gamma, sigma):
        cfg = ConstellationConfig.from_mean_energy(e_i)
        assert noise_sigma_for(cfg, SnrSpec(gamma)) == pytest.approx(sigma, rel=1e-15)

    def test_zero_gamma_is_infinite_noise(self):
        with pytest.raises(ValueError, match="infinite noise"):
            noise_sigma_for(ConstellationConfig(), SnrSpec(0.0))
