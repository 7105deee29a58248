import math

import numpy as np
import pytest
from scipy import integrate, stats

from obmlc.core import ConstellationConfig
from obmlc.experiments import (
    BerReport,
    Scenario,
    ScenarioName,
    bpsk_error_probability,
    cb_error_probability,
    default_grid,
    ob_error_probability,
    parse_grid,
    run_ber,
    run_ber_sweep,
    run_mi_sweep,
    worker_count,
)
from obmlc.infotheory import EstimatorSpec, mi_qpsk

from conftest import gamma_of


class TestGrid:
    def test_default(self):
        g = default_grid()
        assert len(g) == 31 and g[0] == -10 and g[-1] == 20

    @pytest.mark.parametrize(
        "text, expected",
        [("0:3:9", [0, 3, 6, 9]), ("0:0.1:0.3", [0, 0.1, 0.2, 0.3]), ("1,2.5, 4", [1, 2.5, 4]), ("5:1:5", [5])],
    )
    def test_parse(self, text, expected):
        assert parse_grid(text) == pytest.approx(expected)

    @pytest.mark.parametrize("text", ["0:0:5", "5:1:0", "1:2", "a:b:c"])
    def test_parse_errors(self, text):
        with pytest.raises(ValueError):
            parse_grid(text)

    def test_scenario_validation(self):
        with pytest.raises(ValueError):
            Scenario(ScenarioName.BPSK, (1.0, 1.0))
        with pytest.raises(ValueError):
            Scenario(ScenarioName.BPSK, ())
        with pytest.raises(ValueError):
            Scenario("nosuch")
        assert Scenario("gain2d").name is ScenarioName.GAIN_2D

    def test_worker_count_env(self, monkeypatch):
        monkeypatch.setenv("OBMLC_THREADS", "3")
        assert worker_count() == 3


class TestMiSweep:
    def curve(self, name, **kw):
        return run_mi_sweep(Scenario(ScenarioName(name), **kw))

    def test_bpsk_saturates(self):
        c = self.curve("bpsk")
        assert len(c.rows) == 31
        assert abs(c.mi_bits[-1] - 1.0) < 1e-3

    def test_gain1d_tail(self):
        c = self.curve("gain1d")
        assert np.all(c.mi_bits > 0)
        tail = c.mi_bits[c.snr_db >= 15]
        assert np.all((tail >= 0.45) & (tail <= 0.5))

    def test_levels_add_up(self):
        total = self.curve("obmlc1d").mi_bits
        low = self.curve("obmlc1d_low").mi_bits
        high = self.curve("obmlc1d_high").mi_bits
        assert np.max(np.abs(total - (low + high))) < 1e-12

    def test_workers_do_not_change_results(self):
        sc = Scenario(ScenarioName.GAIN_2D, tuple(range(-5, 6)), EstimatorSpec.monte_carlo(20_000, seed=4))
        assert run_mi_sweep(sc, workers=1).to_csv() == run_mi_sweep(sc, workers=4).to_csv()

    def test_point_independent_of_grid(self):
        # same SNR in different grids gives the same Monte Carlo value
        est = EstimatorSpec.monte_carlo(20_000, seed=1)
        a = run_mi_sweep(Scenario(ScenarioName.OBMLC_1D_TOTAL, (0.0, 3.0), est))
        b = run_mi_sweep(Scenario(ScenarioName.OBMLC_1D_TOTAL, (3.0, 7.0), est))
        assert a.rows[1].mi_bits == b.rows[0].mi_bits

    def test_csv_format(self):
        text = self.curve("qpsk", grid=(0.0, 1.5)).to_csv().splitlines()
        assert text[0] == "snr_db,mi_bits,std_err,scenario,estimator"
        fields = text[2].split(",")
        assert float(fields[0]) == 1.5 and fields[3] == "qpsk" and fields[4].startswith("gh")
        assert float(fields[1]) == mi_qpsk(gamma_of(1.5))


def _ob_error_by_integration(gamma):
    """Integrate min(prior x likelihood) over z: the MAP error of the vacant/busy decision."""
    a = math.sqrt(2.0)
    s = math.sqrt(1.0 / gamma)

    def f(z):
        vacant = 0.5 * stats.norm.pdf(z, 0, s)
        busy = 0.25 * (stats.norm.pdf(z, a, s) + stats.norm.pdf(z, -a, s))
        return min(vacant, busy)

    return 2 * integrate.quad(f, 0, a + 12 * s, points=[a / 2, a], limit=200, epsabs=1e-14)[0]


class TestAnalyticBer:
    @pytest.mark.parametrize("db", [-3, 0, 3, 6, 9, 12])
    def test_ob_matches_integration(self, db):
        g = gamma_of(db)
        assert ob_error_probability(g) == pytest.approx(_ob_error_by_integration(g), rel=1e-6, abs=1e-15)

    def test_cb_and_bpsk_closed_forms(self):
        g = gamma_of(3)
        assert cb_error_probability(g) == pytest.approx(stats.norm.sf(math.sqrt(2 * g)), rel=1e-14)
        assert bpsk_error_probability(g) == pytest.approx(stats.norm.sf(math.sqrt(g)), rel=1e-14)

    @pytest.mark.parametrize("db", [0, 3, 6, 9])
    def test_cb_beats_bpsk(self, db):
        assert cb_error_probability(gamma_of(db)) < bpsk_error_probability(gamma_of(db))

    def test_amplitude_invariance(self):
        g = gamma_of(4)
        assert ob_error_probability(g, ConstellationConfig(3.0)) == pytest.approx(ob_error_probability(g), rel=1e-10)


class TestBerSimulation:
    def test_high_snr_is_error_free(self):
        r = run_ber(40.0, 20_000)
        assert r.ob_bit_error_rate == 0
        assert r.cb_bit_error_rate_genie == 0
        assert r.cb_position_error_rate_estimated == 0
        assert r.cb_value_error_rate_estimated == 0

    def test_reproducible(self):
        assert run_ber(3.0, 20_000, seed=5) == run_ber(3.0, 20_000, seed=5)
        assert run_ber(3.0, 20_000, seed=5) != run_ber(3.0, 20_000, seed=6)

    @pytest.mark.parametrize("db", [-2, 0, 2, 4])
    @pytest.mark.parametrize("seed", [0, 1])
    def test_estimated_value_error_at_least_genie(self, db, seed):
        r = run_ber(db, 20_000, seed)
        assert r.cb_value_error_rate_estimated >= r.cb_bit_error_rate_genie
        assert r.cb_value_error_rate_estimated >= r.cb_position_error_rate_estimated

    def test_close_to_analytic(self):
        r = run_ber(2.0, 200_000, seed=11)
        g = gamma_of(2.0)
        assert abs(r.ob_bit_error_rate - ob_error_probability(g)) < 4 * r.ob_std_err
        assert abs(r.cb_bit_error_rate_genie - cb_error_probability(g)) < 4 * r.cb_genie_std_err
        assert r.n_cb_true == pytest.approx(100_000, rel=0.01)

    def test_sweep_matches_points(self):
        reports = run_ber_sweep([0.0, 6.0], 5_000, seed=2, workers=2)
        assert reports[1] == run_ber(6.0, 5_000, seed=2)

    def test_too_few_symbols(self):
        with pytest.raises(ValueError):
            run_ber(0.0, 10)

    def test_csv_row(self):
        r = run_ber(0.0, 5_000)
        row = r.csv_row()
        assert len(row) == len(BerReport.CSV_HEADER)
        assert float(row[2]) == r.ob_bit_error_rate
