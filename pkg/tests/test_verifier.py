import io

import numpy as np
import pytest

from ofdm_bitload import (AllocationStatus, Constellation, DomainError,
                          InterferenceProfile, SystemConfig, allocate, ber,
                          calibrated_profile, draw_realization, measure_ber,
                          validate, verify_allocation)
from ofdm_bitload.experiments import run_trial, trial_stream
from ofdm_bitload.verifier import (dump_report_csv, gaussian_premise_report,
                                   measure_allocation_ber)


@pytest.fixture(scope="module")
def base_cfg():
    return validate(SystemConfig())


def _bits_for(constellation, g, cp, target_errors=4000):
    predicted = ber(constellation, g, cp)
    return int(np.ceil(target_errors / predicted))


class TestMeasureBer:
    @pytest.mark.parametrize("constellation,g", [
        (Constellation.BPSK, 2.0),
        (Constellation.QPSK, 2.0),
        (Constellation.QAM16, 30.0),
        (Constellation.QAM64, 120.0),
    ])
    def test_matches_closed_form(self, constellation, g):
        # operating points chosen in the regime where the closed form is the
        # exact (B/QPSK) or near-exact (Gray QAM) BER; ~4000 expected errors
        # puts 3.3 relative standard deviations at about 5 percent
        cp = 0.8
        bits = _bits_for(constellation, g, cp)
        report = measure_ber(constellation, g, cp, bits,
                             np.random.default_rng(404))
        assert report.measured_ber == pytest.approx(report.predicted_ber, rel=0.06)
        assert report.bits_sent >= bits
        assert report.bit_errors == round(report.measured_ber * report.bits_sent)

    def test_qpsk_and_bpsk_agree_empirically(self):
        g, cp = 1.5, 1.0
        bits = _bits_for(Constellation.BPSK, g, cp)
        b = measure_ber(Constellation.BPSK, g, cp, bits, np.random.default_rng(1))
        q = measure_ber(Constellation.QPSK, g, cp, bits, np.random.default_rng(1))
        assert q.measured_ber == pytest.approx(b.measured_ber, rel=0.05)

    def test_cp_loss_degrades_effective_snr(self):
        g = 3.0
        bits = _bits_for(Constellation.BPSK, g, 0.5)
        lossy = measure_ber(Constellation.BPSK, g, 0.5, bits,
                            np.random.default_rng(2))
        clean = measure_ber(Constellation.BPSK, g, 1.0, bits,
                            np.random.default_rng(2))
        assert lossy.measured_ber > clean.measured_ber

    def test_null_rejected(self):
        with pytest.raises(DomainError):
            measure_ber(Constellation.NULL, 1.0, 0.8, 1000, np.random.default_rng(0))

    def test_insufficient_bits_rejected(self):
        # at sinr 30 the BPSK BER is ~1e-12; 10^6 bits cannot produce the
        # required minimum expected error count
        with pytest.raises(DomainError, match="expected errors"):
            measure_ber(Constellation.BPSK, 30.0, 0.8, 10 ** 6,
                        np.random.default_rng(0))


class TestMeasureAllocationBer:
    def test_weighted_mean_over_subcarriers(self):
        sinrs = np.array([2.0, 2.0])
        loads = [Constellation.QPSK, Constellation.NULL]
        rng = np.random.default_rng(7)
        got = measure_allocation_ber(sinrs, loads, 1.0, 200_000, rng)
        assert got == pytest.approx(ber(Constellation.QPSK, 2.0), rel=0.05)

    def test_all_null_rejected(self):
        with pytest.raises(DomainError):
            measure_allocation_ber(np.array([1.0]), [Constellation.NULL], 1.0,
                                   100, np.random.default_rng(0))


class TestVerifyAllocation:
    def test_interference_limited_allocation(self, base_cfg):
        # drop SIR until the allocator lands on low orders with BER near the
        # target, then re-measure: the empirical mean must sit at the predicted
        # mean, i.e. below target with margin for Monte Carlo noise
        from ofdm_bitload.config import updated
        cfg = validate(updated(base_cfg, {"link.sir_db": -10.0,
                                          "link.target_ber": 1e-2}))
        profile = calibrated_profile(cfg)
        rng = trial_stream(11, 0)
        realization = draw_realization(cfg.channel, cfg.ofdm, rng)
        result = run_trial(cfg, profile, 0, base_seed=11)
        assert result.status is AllocationStatus.MET
        measured = verify_allocation(cfg, realization, result, 40_000,
                                     np.random.default_rng(3), profile)
        assert measured == pytest.approx(result.mean_ber, rel=0.2)
        assert measured < 1.5 * cfg.link.target_ber

    def test_requires_met_status(self, base_cfg):
        stopped = allocate(np.zeros(4), 1e-4, 0.8)
        rng = trial_stream(0, 0)
        realization = draw_realization(base_cfg.channel, base_cfg.ofdm, rng)
        with pytest.raises(DomainError):
            verify_allocation(base_cfg, realization, stopped, 100,
                              np.random.default_rng(0))


class TestGaussianPremise:
    def test_report_structure_and_rough_agreement(self, base_cfg):
        from ofdm_bitload.config import updated
        cfg = validate(updated(base_cfg, {"link.sir_db": -10.0,
                                          "link.target_ber": 1e-2}))
        profile = calibrated_profile(cfg)
        rng = trial_stream(11, 0)
        realization = draw_realization(cfg.channel, cfg.ofdm, rng)
        result = run_trial(cfg, profile, 0, base_seed=11)
        report = gaussian_premise_report(cfg, realization, result, profile,
                                         20_000, np.random.default_rng(5))
        assert set(report) == {"gaussian_mean_ber", "synthesized_mean_ber",
                               "abs_difference"}
        assert report["abs_difference"] == pytest.approx(
            abs(report["gaussian_mean_ber"] - report["synthesized_mean_ber"]))
        # the lumped-Gaussian premise should land within an order of magnitude
        assert report["synthesized_mean_ber"] < 10 * cfg.link.target_ber


def test_dump_report_csv():
    report = measure_ber(Constellation.QPSK, 1.0, 1.0, 5000,
                         np.random.default_rng(0))
    buf = io.StringIO()
    dump_report_csv(buf, [report])
    lines = buf.getvalue().strip().split("\n")
    assert lines[0] == "k,constellation,predicted_ber,measured_ber,bits_sent"
    k, name, pred, meas, bits = lines[1].split(",")
    assert name == "QPSK"
    assert float(pred) == report.predicted_ber
    assert int(bits) == report.bits_sent
