import math

import numpy as np
import pytest

from arisnoma import analytic as an
from arisnoma import montecarlo as mc
from arisnoma.errors import ConfigError, DivergenceError
from arisnoma.system import table1
from conftest import dbm


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


class TestOutageExact:
    def test_zero_target_rate_gives_zero_outage(self):
        cfg = table1(r_g=1e-12, r_f=1e-12, gamma_th_o=0.0)
        assert an.outage_g(cfg, "aris", "psic") == pytest.approx(0.0, abs=1e-9)
        assert an.outage_f(cfg, "aris") == pytest.approx(0.0, abs=1e-9)
        assert an.outage_o(cfg, "aris") == pytest.approx(0.0, abs=1e-9)

    def test_vanishing_power_gives_certain_outage(self):
        cfg = table1(p_b_w=dbm(-100))
        for ris in ("aris", "pris"):
            assert an.outage_f(cfg, ris) == pytest.approx(1.0, abs=1e-9)
            assert an.outage_o(cfg, ris) == pytest.approx(1.0, abs=1e-9)
            assert an.outage_g(cfg, ris, "psic") == pytest.approx(1.0, abs=1e-9)

    def test_values_are_probabilities(self):
        for p in (0.0, 10.0, 20.0, 30.0):
            cfg = table1(p_b_w=dbm(p))
            for user in ("g", "f", "o"):
                for ris in ("aris", "pris"):
                    v = an.outage(cfg, user, ris, "ipsic")
                    assert 0.0 <= v <= 1.0

    def test_passive_amplification_limit_clears_outage(self):
        # With surface noise off, growing amplification drives the
        # threshold argument to zero.
        cfg = table1(xi=0, beta=1e9, p_b_w=dbm(20))
        assert an.outage_o(cfg, "aris") < 1e-6

    def test_infeasible_guard_pins_outage_to_one(self, caplog):
        cfg = table1(r_f=3.0)  # a_f < gamma_th_f * chi_f
        with caplog.at_level("WARNING"):
            assert an.outage_f(cfg, "aris") == 1.0
            assert an.outage_g(cfg, "aris", "psic") == 1.0  # g must decode f first
        assert any("guard" in r.message for r in caplog.records)

    def test_unknown_variant_rejected(self, cfg_table1):
        with pytest.raises(ConfigError):
            an.outage_f(cfg_table1, "half-duplex")
        with pytest.raises(ConfigError):
            an.outage(cfg_table1, "x", "aris")

    def test_oracle_agreement_single_point(self, cfg_table1):
        cfg = cfg_table1.replace(p_b_w=dbm(20))
        est = mc.mc_outage(cfg, "f", "aris", "psic", trials=200_000, seed=31)
        a = an.outage_f(cfg, "aris")
        assert abs(a - est.value) <= max(3 * est.std_error + 0.02, 0.15 * est.value)

    def test_mid_range_outage_decreases_with_power(self, cfg_table1):
        vals = [an.outage_f(cfg_table1.replace(p_b_w=dbm(p)), "aris") for p in range(0, 35, 5)]
        assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))


class TestPassiveReduction:
    def test_identities_on_sample_configs(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            a_g = float(rng.uniform(0.1, 0.4))
            cfg = table1(
                K=3,
                g=3,
                f=2,
                L=int(rng.integers(1, 7)),
                beta=float(rng.uniform(1, 15)),
                a_g=a_g,
                a_f=1 - a_g,
                p_b_w=float(rng.uniform(0.01, 1.0)),
                omega_i=float(10 ** rng.uniform(-3, 0)),
                m_r=float(rng.uniform(0.5, 2.0)),
                m_g=float(rng.uniform(0.5, 2.0)),
                m_f=float(rng.uniform(0.5, 2.0)),
                m_o=float(rng.uniform(0.5, 2.0)),
            )
            red = cfg.replace(xi=0, beta=1.0)
            assert rel(an.outage_g(red, "aris", "ipsic"), an.outage_g(cfg, "pris", "ipsic")) < 1e-12
            assert rel(an.outage_g(red, "aris", "psic"), an.outage_g(cfg, "pris", "psic")) < 1e-12
            assert rel(an.outage_f(red, "aris"), an.outage_f(cfg, "pris")) < 1e-12
            assert rel(an.outage_o(red, "aris"), an.outage_o(cfg, "pris")) < 1e-12
            assert rel(an.ergodic_rate_f(red, "aris"), an.ergodic_rate_f(cfg, "pris")) < 1e-12
            assert rel(an.ergodic_rate_o(red, "aris"), an.ergodic_rate_o(cfg, "pris")) < 1e-12


class TestAsymptotics:
    def test_ipsic_floor_is_power_free(self, cfg_table1):
        lo = an.outage_asymptotic(cfg_table1.replace(p_b_w=dbm(50)), "g", "aris", "ipsic")
        hi = an.outage_asymptotic(cfg_table1.replace(p_b_w=dbm(70)), "g", "aris", "ipsic")
        assert rel(lo, hi) < 1e-12

    def test_far_user_slope_matches_diversity(self):
        # m_f must exceed m_r for the unit-argument 2F1 to converge.
        cfg = table1(m_f=1.0)
        d = an.diversity_order("f", "psic", cfg.L, cfg.m_r, cfg.f)
        lo = an.outage_asymptotic(cfg.replace(p_b_w=dbm(120)), "f", "aris")
        hi = an.outage_asymptotic(cfg.replace(p_b_w=dbm(140)), "f", "aris")
        slope = -(math.log10(hi) - math.log10(lo)) / 2.0
        assert slope == pytest.approx(d, abs=1e-6)

    def test_asymptote_approaches_exact_form(self):
        # Ratio exact/asymptotic tends to one with power when the
        # user-side shape exceeds the BS-side shape.
        cfg = table1(m_g=1.0, kappa_b=0.01, kappa_g=0.01, kappa_f=0.01, kappa_o=0.01)
        ratios = []
        for p in (110.0, 140.0, 170.0):
            c = cfg.replace(p_b_w=dbm(p))
            ratios.append(an.outage_g(c, "aris", "psic") / an.outage_asymptotic(c, "g", "aris", "psic"))
        assert abs(ratios[2] - 1.0) < abs(ratios[0] - 1.0)
        assert abs(ratios[2] - 1.0) < 0.05

    def test_divergent_shape_combination_raises(self, cfg_table1):
        with pytest.raises(DivergenceError):
            an.outage_asymptotic(cfg_table1, "f", "aris")  # m_f = m_r = 0.5

    def test_passive_far_user_asymptote_slope(self):
        cfg = table1(m_f=1.5)
        d = an.diversity_order("f", "psic", cfg.L, cfg.m_r, cfg.f)
        lo = an.outage_asymptotic(cfg.replace(p_b_w=dbm(130)), "f", "pris")
        hi = an.outage_asymptotic(cfg.replace(p_b_w=dbm(150)), "f", "pris")
        slope = -(math.log10(hi) - math.log10(lo)) / 2.0
        assert slope == pytest.approx(d, rel=1e-6)


class TestDiversityOrder:
    def test_published_values(self):
        assert an.diversity_order("g", "ipsic", 5, 0.5, 3) == 0.0
        assert an.diversity_order("f", "psic", 5, 0.5, 2) == 5.0
        assert an.diversity_order("o", "psic", 5, 0.5, 1) == 2.5
        assert an.diversity_order("g", "psic", 4, 1.0, 3) == 12.0


class TestErgodicRates:
    def test_rate_vanishes_with_power(self, cfg_rates):
        cfg = cfg_rates.replace(p_b_w=dbm(-100))
        assert an.ergodic_rate_g(cfg, "aris", "psic") < 1e-8
        assert an.ergodic_rate_f(cfg, "aris") < 1e-8
        assert an.ergodic_rate_o(cfg, "pris") < 1e-8

    def test_ipsic_never_beats_psic(self, cfg_rates):
        for p in (0.0, 15.0, 30.0):
            cfg = cfg_rates.replace(p_b_w=dbm(p))
            for ris in ("aris", "pris"):
                assert an.ergodic_rate_g(cfg, ris, "ipsic") <= an.ergodic_rate_g(cfg, ris, "psic") + 1e-9

    def test_mc_agreement_single_point(self, cfg_rates):
        cfg = cfg_rates.replace(p_b_w=dbm(30))
        est = mc.mc_ergodic_rate(cfg, "g", "aris", "psic", trials=200_000, seed=17)
        assert rel(an.ergodic_rate_g(cfg, "aris", "psic"), est.value) < 0.05

    def test_no_impairment_fallback_path(self):
        # chi_g = 0 diverts to the adaptive CDF integral; the result must
        # sit above the impaired rate and stay finite.
        base = table1(L=2, varpi=0)
        free = base.replace(kappa_b=0.0, kappa_g=0.0)
        r_free = an.ergodic_rate_g(free, "aris", "psic")
        r_imp = an.ergodic_rate_g(base, "aris", "psic")
        assert np.isfinite(r_free)
        assert r_free > r_imp

    def test_rate_monotone_in_power(self, cfg_rates):
        vals = [an.ergodic_rate_f(cfg_rates.replace(p_b_w=dbm(p)), "aris") for p in range(0, 40, 5)]
        assert all(b >= a - 1e-9 for a, b in zip(vals, vals[1:]))


class TestCeilings:
    def test_far_user_ceiling_matches_log_form(self, cfg_rates):
        # The weight sum is the quadrature form of log2(1 + a_f/chi_f).
        c = an.rate_ceiling(cfg_rates, "f")
        closed = math.log2(1.0 + cfg_rates.a_f / cfg_rates.chi_f)
        assert rel(c, closed) < 5e-4
        finer = an.rate_ceiling(cfg_rates.replace(quad_n=4096), "f")
        assert abs(finer - closed) < abs(c - closed) + 1e-12

    def test_ceiling_reached_at_high_power(self, cfg_rates):
        cfg = cfg_rates.replace(p_b_w=dbm(80))
        assert rel(an.ergodic_rate_f(cfg, "aris"), an.rate_ceiling(cfg, "f")) < 1e-3

    def test_unimpaired_ceiling_is_infinite(self):
        cfg = table1(kappa_b=0.0, kappa_g=0.0, varpi=0)
        assert an.rate_ceiling(cfg, "g", "aris", "psic") == math.inf

    def test_ceiling_dominates_rates(self, cfg_rates):
        for p in (0.0, 10.0, 20.0, 30.0, 50.0):
            cfg = cfg_rates.replace(p_b_w=dbm(p))
            assert an.ergodic_rate_f(cfg, "aris") <= an.rate_ceiling(cfg, "f") + 1e-9
            assert an.ergodic_rate_g(cfg, "aris", "ipsic") <= an.rate_ceiling(cfg, "g", "aris", "ipsic") + 1e-6

    def test_residual_ceiling_below_clean_ceiling(self, cfg_rates):
        ip = an.rate_ceiling(cfg_rates, "g", "aris", "ipsic")
        p = an.rate_ceiling(cfg_rates, "g", "aris", "psic")
        assert ip < p


class TestMultiplexingGain:
    def test_zero_under_impairments(self, cfg_table1):
        assert an.multiplexing_gain(cfg_table1, "g", "ipsic") == 0.0
        assert an.multiplexing_gain(cfg_table1, "f") == 0.0
        assert an.multiplexing_gain(cfg_table1, "o") == 0.0

    def test_unity_without_impairments(self):
        cfg = table1(kappa_b=0.0, kappa_g=0.0, varpi=0)
        assert an.multiplexing_gain(cfg, "g", "psic") == 1.0


class TestOrderingAndStability:
    def test_near_user_outperforms_far_at_equal_footing(self):
        # Same distances and rates: the higher-ranked user sees a smaller
        # outage probability.
        for p in (10.0, 15.0, 20.0, 25.0, 30.0):
            cfg = table1(d_rf=10.0, p_b_w=dbm(p))
            assert an.outage_g(cfg, "aris", "psic") <= an.outage_f(cfg, "aris") + 1e-12

    def test_beta_saturation_weak_form(self):
        cfg = table1(m_r=0.7, m_g=0.7, m_f=0.7, m_o=0.7, sigma2_w=dbm(-84), p_b_w=dbm(0))
        v1 = an.outage_f(cfg.replace(beta=1e6), "aris")
        v2 = an.outage_f(cfg.replace(beta=2e6), "aris")
        assert v2 > 0.0
        assert rel(v1, v2) < 1e-4

    def test_u_refinement_absolute_stability(self, cfg_table1):
        cfg = cfg_table1.replace(p_b_w=dbm(20))
        base = an.theorem_outputs(cfg)
        halved = an.theorem_outputs(cfg.replace(quad_u=50))
        assert max(abs(base[k] - halved[k]) for k in base) < 1e-6
