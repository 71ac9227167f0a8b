import math

import numpy as np
import pytest

from arisnoma.errors import ConfigError
from arisnoma.system import (
    GUARD_DERIVED,
    SystemConfig,
    dbm_to_watts,
    derive_targets,
    feasibility,
    sigma2_from_bandwidth_dbm,
    sinr_f,
    sinr_g,
    sinr_g_to_f,
    sinr_o,
    table1,
    watts_to_dbm,
)


class TestUnits:
    def test_dbm_roundtrip(self):
        assert dbm_to_watts(30.0) == pytest.approx(1.0, rel=1e-12)
        assert dbm_to_watts(0.0) == pytest.approx(1e-3, rel=1e-12)
        assert watts_to_dbm(dbm_to_watts(-17.3)) == pytest.approx(-17.3, rel=1e-12)
        with pytest.raises(ConfigError):
            watts_to_dbm(0.0)

    def test_noise_from_bandwidth(self):
        # -174 dBm/Hz over 1 GHz.
        assert sigma2_from_bandwidth_dbm(1000.0) == pytest.approx(-84.0, abs=1e-9)


class TestTargets:
    @pytest.mark.parametrize("rate,expect", [(1.0, 1.0), (1.5, 2.0**1.5 - 1.0), (0.0, 0.0)])
    def test_threshold_from_rate(self, rate, expect):
        cfg = table1(r_g=rate, r_f=max(rate, 0.1))
        gth_g, _ = derive_targets(cfg)
        assert gth_g == pytest.approx(expect, rel=1e-14)


class TestConfigValidation:
    def test_power_split_ordering(self):
        with pytest.raises(ConfigError):
            table1(a_g=0.6, a_f=0.4)
        with pytest.raises(ConfigError):
            table1(a_g=0.3, a_f=0.75)

    def test_rank_ordering(self):
        with pytest.raises(ConfigError):
            table1(g=2, f=2)
        with pytest.raises(ConfigError):
            table1(g=4, f=2, K=3)

    def test_switch_domains(self):
        with pytest.raises(ConfigError):
            table1(xi=2)
        with pytest.raises(ConfigError):
            table1(beta=0.5)

    def test_replace_keeps_validation(self):
        cfg = table1()
        with pytest.raises(ConfigError):
            cfg.replace(kappa_b=-0.1)


class TestSinr:
    def test_zero_cascade_zero_sinr(self, cfg_table1):
        for fn in (sinr_g_to_f, sinr_f, sinr_o):
            assert fn(cfg_table1, 0.0).sinr == 0.0
        assert sinr_g(cfg_table1, 0.0, 1.0).sinr == 0.0

    def test_pure_snr_when_everything_off(self):
        cfg = table1(
            kappa_b=0.0, kappa_g=0.0, kappa_f=0.0, kappa_o=0.0, xi=0, beta=1.0, varpi=0
        )
        y = 2.0
        gain = cfg.pathloss_gain("o") * y * y
        assert sinr_o(cfg, y).sinr == pytest.approx(cfg.p_b_w * gain / cfg.sigma2_w, rel=1e-12)
        got = sinr_g(cfg, y, 0.0).sinr
        gain_g = cfg.pathloss_gain("g") * y * y
        assert got == pytest.approx(cfg.p_b_w * gain_g * cfg.a_g / cfg.sigma2_w, rel=1e-12)

    def test_textbook_far_user_form(self):
        cfg = table1(kappa_b=0.0, kappa_f=0.0, xi=0, beta=1.0)
        y = 1.7
        rho_gain = cfg.p_b_w * cfg.pathloss_gain("f") * y * y / cfg.sigma2_w
        expect = cfg.a_f * rho_gain / (cfg.a_g * rho_gain + 1.0)
        assert sinr_f(cfg, y).sinr == pytest.approx(expect, rel=1e-12)

    def test_interference_limited_ceilings(self, cfg_table1):
        big = 1e9
        c = cfg_table1
        assert sinr_g_to_f(c, big).sinr == pytest.approx(c.a_f / c.chi, rel=1e-6)
        assert sinr_f(c, big).sinr == pytest.approx(c.a_f / c.chi_f, rel=1e-6)
        assert sinr_o(c, big).sinr == pytest.approx(1.0 / c.chi_o, rel=1e-6)
        assert sinr_g(c, big, 0.0).sinr == pytest.approx(c.a_g / c.chi_g, rel=1e-6)

    def test_psic_drops_residual(self, cfg_table1):
        cfg = cfg_table1.replace(varpi=0)
        bd = sinr_g(cfg, 2.0, 5.0)
        assert np.all(np.asarray(bd.residual_ipsic) == 0.0)
        bd_ip = sinr_g(cfg_table1, 2.0, 5.0)
        assert np.all(np.asarray(bd_ip.residual_ipsic) > 0.0)
        assert bd_ip.sinr < bd.sinr

    def test_monotonicity(self, cfg_table1):
        ys = np.linspace(0.0, 20.0, 100)
        s = sinr_f(cfg_table1, ys).sinr
        assert np.all(np.diff(s) >= 0.0)
        worse = cfg_table1.replace(kappa_f=0.3)
        assert np.all(sinr_f(worse, ys).sinr <= s + 1e-15)
        noisier = cfg_table1.replace(sigma2_w=cfg_table1.sigma2_w * 10)
        assert np.all(sinr_f(noisier, ys).sinr <= s + 1e-15)
        hotter = cfg_table1.replace(n_tn_w=cfg_table1.n_tn_w * 100)
        assert np.all(sinr_f(hotter, ys).sinr <= s + 1e-15)

    def test_passive_reduction_bit_identical(self, cfg_table1):
        # xi = 0, beta = 1 turns every active-mode expression into the
        # passive one exactly.
        passive = cfg_table1.replace(xi=0, beta=1.0)
        ys = np.linspace(0.1, 9.0, 17)
        manual = (
            passive.p_b_w * passive.pathloss_gain("f") * ys * ys * passive.a_f
            / (passive.p_b_w * passive.pathloss_gain("f") * ys * ys * passive.chi_f + passive.sigma2_w)
        )
        assert np.array_equal(sinr_f(passive, ys).sinr, manual)

    def test_breakdown_identity(self, cfg_table1):
        bd = sinr_g(cfg_table1, 1.3, 0.7)
        denom = bd.impairment_term + bd.residual_ipsic + bd.ris_noise + bd.thermal
        assert bd.sinr == pytest.approx(bd.signal / denom, rel=1e-12)

    def test_per_trial_norm_accepted(self, cfg_table1):
        bd = sinr_f(cfg_table1, np.array([1.0, 2.0]), ris_norm_sq=np.array([4.0, 5.0]))
        assert np.all(np.asarray(bd.ris_noise) > 0.0)


class TestGuards:
    def test_table1_all_feasible(self, cfg_table1):
        assert all(feasibility(cfg_table1).values())

    def test_high_rate_breaks_far_user(self):
        cfg = table1(r_f=3.0)
        assert not feasibility(cfg)["far_user"]

    def test_orthogonal_guard(self):
        cfg = table1(gamma_th_o=50.0, kappa_b=0.2, kappa_o=0.2)
        assert not feasibility(cfg)["orthogonal_user"]

    def test_guard_form_disagreement_warns(self, caplog):
        # chi_g = 0.18: the printed (squared) guard needs a_g > 0.059, the
        # derived one a_g > 0.329; a_g = 0.25 sits between them.
        cfg = table1(kappa_b=0.3, kappa_g=0.3)
        with caplog.at_level("WARNING"):
            printed = feasibility(cfg)
        assert printed["near_user"]
        assert any("guard form" in r.message for r in caplog.records)
        derived = feasibility(cfg.replace(guard_form=GUARD_DERIVED))
        assert not derived["near_user"]
