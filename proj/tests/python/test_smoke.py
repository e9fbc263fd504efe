import math

import pytest

import coopsense as cs


def test_special_functions():
    assert cs.reg_inc_beta(0.1, 2, 3) == pytest.approx(0.0523, abs=1e-12)
    assert cs.inv_reg_inc_beta(0.0523, 2, 3) == pytest.approx(0.1, abs=1e-9)
    assert cs.zeta(2, 2 * math.log(10)) == pytest.approx(0.1, abs=1e-12)
    assert cs.inv_zeta(2, 0.1) == pytest.approx(2 * math.log(10), abs=1e-9)
    assert cs.marcum_q(1, 0.0, 2.0) == pytest.approx(math.exp(-2.0), abs=1e-14)


def test_domain_errors_map_to_value_error():
    with pytest.raises(ValueError):
        cs.reg_inc_beta(1.5, 2, 3)
    with pytest.raises(ValueError):
        cs.SensingConfig(0, 12, 1.0, 0.01)


def test_detector_closed_form():
    for lam in (0.0, 3.0, 12.0):
        assert cs.avg_pd(2, lam, 1.0) == pytest.approx(math.exp(-lam / 4.0), abs=1e-8)
    assert cs.local_pd(12, 9.0, 0.0) == pytest.approx(cs.local_pf(12, 9.0), abs=1e-12)


def test_fusion_rules():
    assert cs.FusionRule.majority_rule(16).n == 9
    assert cs.FusionRule.parse("k:3", 8).name == "k:3"
    assert cs.global_qf(2, 4, 0.1) == pytest.approx(cs.global_tail_direct(2, 4, 0.1), abs=1e-14)
    lam = cs.lambda_for_alpha(0.01, 3, 10, 12)
    assert cs.phi(lam, 3, 10, 12) == pytest.approx(0.01, abs=1e-10)


def test_optimizer_examples():
    small = cs.binary_search_opt(cs.SensingConfig.from_db(4, 12, 5.0, 0.01))
    assert small.n_opt == 1
    cfg = cs.SensingConfig.from_db(32, 12, 5.0, 0.01)
    result = cs.binary_search_opt(cfg)
    assert 1 < result.n_opt < 32
    assert result.n_opt == cs.exhaustive_opt(cfg).n_opt
    assert result.evaluations == len(result.objective_trace)
    assert cs.convexity_check(cfg).convex
    achieved = cs.evaluate_pair(cfg, cs.ThresholdPair(result.n_opt, result.lambda_opt))
    assert achieved.q_f == pytest.approx(0.01, abs=1e-9)


def test_simulation_is_deterministic_and_consistent():
    cfg = cs.SensingConfig.from_db(8, 6, 0.0, 0.05)
    pair = cs.alpha_matched_pair(cfg, cs.FusionRule.majority_rule(8))
    a = cs.simulate(cfg, pair, cs.TrialConfig(trials=20000, seed=4, workers=1))
    b = cs.simulate(cfg, pair, cs.TrialConfig(trials=20000, seed=4, workers=3))
    assert (a.q_f_hat, a.q_d_hat) == (b.q_f_hat, b.q_d_hat)
    report = cs.validate_against_analytic(cfg, pair, cs.TrialConfig(trials=20000, seed=4))
    assert report.passed


def test_convergence_error_is_exported():
    assert issubclass(cs.ConvergenceError, ArithmeticError)
