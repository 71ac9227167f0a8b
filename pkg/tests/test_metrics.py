import math

import numpy as np
import pytest

from arisnoma import analytic as an
from arisnoma import metrics as me
from arisnoma.errors import ConfigError, InfeasibleBudgetError
from arisnoma.metrics import PowerModel
from arisnoma.system import table1
from conftest import dbm


class TestThroughput:
    def test_high_power_reaches_rate_sum(self):
        cfg = table1(p_b_w=dbm(60))
        rep = me.throughput_delay_limited(cfg, "aris", "psic")
        assert rep.value == pytest.approx(cfg.r_g + cfg.r_f, abs=1e-3)

    def test_certain_outage_gives_zero(self):
        cfg = table1(p_b_w=dbm(-100))
        rep = me.throughput_delay_limited(cfg, "aris", "psic")
        assert rep.value == pytest.approx(0.0, abs=1e-6)

    def test_bounded_by_target_rates(self):
        for p in (0.0, 10.0, 20.0, 30.0):
            cfg = table1(p_b_w=dbm(p))
            rep = me.throughput_delay_limited(cfg, "aris", "ipsic")
            assert 0.0 <= rep.value <= cfg.r_g + cfg.r_f + 1e-12
            assert set(rep.components) == {"g", "f"}

    def test_active_surface_leads_passive(self):
        for p in (5.0, 15.0, 25.0):
            cfg = table1(p_b_w=dbm(p))
            a = me.throughput_delay_limited(cfg, "aris", "psic").value
            q = me.throughput_delay_limited(cfg, "pris", "psic").value
            assert a >= q - 1e-12

    def test_delay_tolerant_sums_rates(self, cfg_rates):
        cfg = cfg_rates.replace(p_b_w=dbm(20))
        rep = me.throughput_delay_tolerant(cfg, "aris", "psic")
        expect = an.ergodic_rate_g(cfg, "aris", "psic") + an.ergodic_rate_f(cfg, "aris")
        assert rep.value == pytest.approx(expect, rel=1e-12)

    def test_delay_tolerant_ipsic_below_psic(self, cfg_rates):
        cfg = cfg_rates.replace(p_b_w=dbm(25))
        assert (
            me.throughput_delay_tolerant(cfg, "aris", "ipsic").value
            <= me.throughput_delay_tolerant(cfg, "aris", "psic").value + 1e-9
        )

    def test_delay_tolerant_bounded_by_ceilings(self, cfg_rates):
        cfg = cfg_rates.replace(p_b_w=dbm(40))
        cap = an.rate_ceiling(cfg, "g", "aris", "psic") + an.rate_ceiling(cfg, "f")
        assert me.throughput_delay_tolerant(cfg, "aris", "psic").value <= cap + 1e-9

    def test_high_power_matches_ceiling_sum(self, cfg_rates):
        cfg = cfg_rates.replace(p_b_w=dbm(70))
        got = me.throughput_delay_tolerant(cfg, "aris", "psic").value
        cap = an.rate_ceiling(cfg, "g", "aris", "psic") + an.rate_ceiling(cfg, "f")
        assert got == pytest.approx(cap, rel=0.01)

    def test_oma_benchmark(self):
        cfg = table1(p_b_w=dbm(60))
        rep = me.throughput_delay_limited_oma(cfg, "aris")
        assert rep.value == pytest.approx(math.log2(1.0 + cfg.gamma_th_o), abs=1e-3)


class TestTotalPower:
    def test_transmit_only(self):
        cfg = table1(xi=0, beta=1.0, p_b_w=0.25)
        pm = PowerModel()
        assert me.total_power(cfg, pm) == pytest.approx(0.25, rel=1e-12)

    def test_amplifier_efficiency(self):
        cfg = table1(xi=0, beta=1.0, p_b_w=0.2)
        pm = PowerModel(nu=0.5)
        assert me.total_power(cfg, pm) == pytest.approx(0.4, rel=1e-12)

    def test_doubling_elements_adds_linear_terms(self):
        pm = PowerModel(p_re=0.002, p_bs=0.1, p_u=0.01)
        cfg = table1(L=6)
        cfg2 = cfg.replace(L=12)
        delta = me.total_power(cfg2, pm) - me.total_power(cfg, pm)
        per_element_out = cfg.beta * (
            cfg.p_b_w * cfg.eta * cfg.d_br ** (-cfg.alpha) + cfg.n_tn_w
        )
        assert delta == pytest.approx(6 * pm.p_re + 6 * per_element_out, rel=1e-12)

    def test_power_model_validation(self):
        with pytest.raises(ConfigError):
            PowerModel(nu=0.0)
        with pytest.raises(ConfigError):
            PowerModel(p_sw=-1.0)


class TestEnergyEfficiency:
    def test_zero_throughput_zero_efficiency(self):
        cfg = table1(p_b_w=dbm(-100))
        assert me.energy_efficiency(cfg, PowerModel()) == pytest.approx(0.0, abs=1e-3)

    def test_statics_halve_efficiency_when_dominant(self):
        cfg = table1(p_b_w=dbm(60))
        pm1 = PowerModel(p_bs=1e6)
        pm2 = PowerModel(p_bs=2e6)
        e1 = me.energy_efficiency(cfg, pm1, me.DELAY_LIMITED, "aris", "psic")
        e2 = me.energy_efficiency(cfg, pm2, me.DELAY_LIMITED, "aris", "psic")
        assert e1 / e2 == pytest.approx(2.0, rel=0.01)

    def test_interior_maximum_over_power(self):
        pm = PowerModel()
        grid = list(range(0, 31, 3))
        vals = [
            me.energy_efficiency(table1(p_b_w=dbm(p)), pm, me.DELAY_LIMITED, "aris", "psic")
            for p in grid
        ]
        peak = int(np.argmax(vals))
        assert 0 < peak < len(grid) - 1
        assert vals[-1] < vals[peak]

    def test_mode_validation(self):
        with pytest.raises(ConfigError):
            me.energy_efficiency(table1(), PowerModel(), "streaming")


class TestBudgetMatching:
    def test_round_trip_consistency(self):
        cfg = table1(beta=10.0, L=20)
        pm = PowerModel(p_sw=1.5e-3, p_dc=0.9e-3)
        total = 0.1
        p_aris, p_pris = me.match_power_budget(total, pm, cfg)
        assert me.budget_total_aris(p_aris, pm, cfg) == pytest.approx(total, abs=1e-12)
        assert me.budget_total_pris(p_pris, pm, cfg) == pytest.approx(total, abs=1e-12)

    def test_equal_amplifier_share_halves(self):
        # With negligible statics and unit amplifier gain the split is 1:1.
        cfg = table1(n_tn_w=1e-30)
        pm = PowerModel()
        beta_unit_gain = cfg.d_br**cfg.alpha / cfg.L / cfg.eta
        cfg = cfg.replace(beta=beta_unit_gain)
        p_aris, p_pris = me.match_power_budget(1.0, pm, cfg)
        assert p_aris == pytest.approx(0.5, rel=1e-9)
        assert p_pris == pytest.approx(1.0, rel=1e-12)

    def test_fairness_across_element_grid(self):
        pm = PowerModel(p_sw=1e-3, p_dc=5e-4)
        for L in (2, 10, 25, 40):
            cfg = table1(beta=10.0, L=L)
            p_aris, p_pris = me.match_power_budget(0.1, pm, cfg)
            assert me.budget_total_aris(p_aris, pm, cfg) == pytest.approx(0.1, abs=1e-9)
            assert me.budget_total_pris(p_pris, pm, cfg) == pytest.approx(0.1, abs=1e-9)

    def test_infeasible_budget_names_floor(self):
        cfg = table1(L=40)
        pm = PowerModel(p_sw=0.01)
        with pytest.raises(InfeasibleBudgetError, match="P_SW"):
            me.match_power_budget(0.1, pm, cfg)
        with pytest.raises(ConfigError):
            me.match_power_budget(0.0, PowerModel(), cfg)
