import math
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from src.mwu.hedge import HedgeState, hedge_distribution, hedge_update, regret_report, run_noisy_hedge
from src.privacy.accountant import PrivacyAccountant
from src.privacy.samplers import RngStreams
from src.utils.error_handler import InvalidArgumentError


def test_first_distribution_is_uniform():
    state = HedgeState(5, 10)
    assert np.allclose(hedge_distribution(state), np.full(5, 0.2))
    assert state.t == 1


def test_probability_ratio_after_one_loss():
    state = HedgeState(2, 9)
    hedge_update(state, np.array([0.0, 3.0]))
    p = state.distribution()
    assert p[0] / p[1] == pytest.approx(math.exp(3.0 * state.hedge_step))


def test_two_experts_four_rounds_softmax():
    state = HedgeState(2, 4)
    eta = math.sqrt(math.log(2) / 4)
    assert state.hedge_step == pytest.approx(eta)
    p = hedge_update(state, [1.0, 0.0]).distribution()
    expected = np.exp([-eta, 0.0]) / np.exp([-eta, 0.0]).sum()
    assert np.allclose(p, expected)
    assert state.t == 2


def test_shift_invariance_and_flat_losses():
    a, b = HedgeState(3, 5), HedgeState(3, 5)
    a.update([0.2, -1.0, 4.0])
    b.update([10.2, 9.0, 14.0])
    assert np.allclose(a.distribution(), b.distribution())
    flat = HedgeState(4, 5)
    flat.update(np.zeros(4))
    flat.update(np.full(4, 7.5))
    assert np.allclose(flat.distribution(), 0.25)


def test_update_rejects_bad_losses():
    state = HedgeState(3, 5)
    with pytest.raises(InvalidArgumentError, match="finite"):
        state.update([0.0, np.nan, 1.0])
    with pytest.raises(InvalidArgumentError, match="finite"):
        state.update([0.0, np.inf, 1.0])
    with pytest.raises(InvalidArgumentError):
        state.update([0.0, 1.0])
    assert state.t == 1


def test_horizon_is_enforced():
    state = HedgeState(2, 3)
    state.update([0.0, 1.0]).update([1.0, 0.0])
    with pytest.raises(InvalidArgumentError, match="exhausted"):
        state.update([0.0, 0.0])
    with pytest.raises(InvalidArgumentError):
        HedgeState(0, 3)
    with pytest.raises(InvalidArgumentError):
        HedgeState(3, 0)


def test_long_runs_with_large_losses_stay_normalized():
    rounds = 20_000
    state = HedgeState(4, rounds + 1)
    rng = np.random.default_rng(0)
    for _ in range(rounds):
        state.update(rng.normal(0.0, 1000.0, size=4) + np.array([0.0, 50.0, 100.0, 150.0]))
    p = state.distribution()
    assert np.isfinite(p).all()
    assert p.sum() == pytest.approx(1.0)
    assert p[0] == pytest.approx(1.0)


def test_ordering_by_weight_and_weight_per_cost():
    state = HedgeState(3, 4)
    state.update([1.0, 0.0, 1.0])
    assert state.ordering().perm.tolist() == [1, 0, 2]
    flat = HedgeState(3, 4)
    assert flat.ordering(np.log([1.0, 2.0, 0.5])).perm.tolist() == [2, 0, 1]


def test_regret_report_edge_cases():
    constant = np.full((6, 3), 0.4)
    uniform = np.full((6, 3), 1 / 3)
    assert regret_report(constant, uniform).regret == pytest.approx(0.0)
    single = regret_report(np.random.default_rng(1).normal(size=(8, 1)), np.ones((8, 1)))
    assert single.regret == pytest.approx(0.0)
    with pytest.raises(InvalidArgumentError, match="aligned"):
        regret_report(np.zeros((3, 2)), np.zeros((2, 2)))


def test_single_expert_noisy_hedge_has_no_regret():
    rng = np.random.default_rng(3)
    losses = rng.uniform(size=(50, 1))
    distributions, _ = run_noisy_hedge(losses, 2.0, rng)
    assert np.allclose(distributions, 1.0)
    assert regret_report(losses, distributions).regret == pytest.approx(0.0)


def test_dp_hedge_ledger():
    accountant = PrivacyAccountant("dp-hedge")
    losses = np.zeros((10, 4))
    distributions, noisy = run_noisy_hedge(losses, 4.0, RngStreams(0).generator("hedge"), accountant, sensitivity=2.0)
    assert distributions.shape == noisy.shape == (10, 4)
    assert len(accountant) == 10
    assert accountant.total.zcdp_budget == pytest.approx(10 * 2.0 ** 2 / (2 * 4.0 ** 2))
    assert not np.allclose(noisy, 0.0)


def _mean_regret(n, T, trials, nu=0.5):
    streams = RngStreams(99)
    regrets = []
    for trial in range(trials):
        rng = streams.generator("regret", n, trial)
        losses = rng.uniform(size=(T, n))
        losses[:, 0] -= 0.1
        distributions, _ = run_noisy_hedge(losses, nu, rng)
        regrets.append(regret_report(losses, distributions).regret)
    return float(np.mean(regrets))


def test_noisy_hedge_regret_small_instance():
    assert _mean_regret(16, 1024, 50) <= 4 * math.sqrt(1024 * math.log(16))


@pytest.mark.slow
def test_noisy_hedge_regret_larger_instance():
    assert _mean_regret(64, 4096, 50) <= 4 * math.sqrt(4096 * math.log(64))
