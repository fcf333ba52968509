import json
import math
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from src.privacy.accountant import PrivacyAccountant, compose_parallel, compose_sequential, mechanism_cost
from src.privacy.budget import (
    EpsDelta,
    NoiseSpec,
    PrivacyBudget,
    arithmetic_grid_size,
    arithmetic_spacing,
    directed_units,
    lambda_grid_size,
    lift_c_max,
    ps_select_epsilon,
    repetitions,
    sigma_for_target,
    t_grid,
    weighted_units,
    zcdp_to_epsdelta,
    zcdp_to_epsdelta_numeric,
)
from src.privacy.samplers import RngStreams, gaussian_sample, geometric_count, laplace_sample, sym_geometric_sample
from src.utils.error_handler import InfeasiblePrivacyError, InvalidArgumentError

DRAWS = 100_000


@pytest.fixture
def rng():
    return RngStreams(2024).generator("sampler-test")


def test_gaussian_zero_std_is_exact(rng):
    assert gaussian_sample(rng, 0.0) == 0.0
    assert np.all(gaussian_sample(rng, 0.0, size=4) == 0)
    with pytest.raises(InvalidArgumentError):
        gaussian_sample(rng, -1.0)


@pytest.mark.parametrize("std", [1.0, 3.0])
def test_gaussian_moments(rng, std):
    draws = gaussian_sample(rng, std, size=DRAWS)
    assert abs(draws.mean()) < 0.02 * std
    assert 0.97 * std ** 2 <= draws.var() <= 1.03 * std ** 2


def test_sym_geometric_pmf_at_zero_and_symmetry(rng):
    gamma = math.e
    draws = sym_geometric_sample(rng, gamma, size=DRAWS)
    assert draws.dtype == np.int64
    assert abs(np.mean(draws == 0) - (gamma - 1) / (gamma + 1)) < 0.01
    assert abs(draws.mean()) < 0.02


def test_sym_geometric_tail(rng):
    gamma, t = math.e, 5
    draws = sym_geometric_sample(rng, gamma, size=DRAWS)
    exact = 2 * gamma ** (1 - t) / (gamma + 1)
    empirical = np.mean(np.abs(draws) >= t)
    assert abs(empirical - exact) < 0.002
    assert empirical <= 2 * math.exp(-t)


def test_sym_geometric_rejects_small_gamma(rng):
    with pytest.raises(InvalidArgumentError):
        sym_geometric_sample(rng, 1.0)
    assert sym_geometric_sample(rng, math.inf) == 0


def test_laplace_moments(rng):
    assert laplace_sample(rng, 0.0) == 0.0
    assert abs(np.abs(laplace_sample(rng, 1.0, size=DRAWS)).mean() - 1.0) < 0.02
    assert abs(laplace_sample(rng, 2.0, size=DRAWS).var() - 8.0) < 0.3
    with pytest.raises(InvalidArgumentError):
        laplace_sample(rng, -0.1)


def test_geometric_count_support(rng):
    draws = [geometric_count(rng, 0.5) for _ in range(1000)]
    assert min(draws) >= 1
    assert abs(np.mean(draws) - 2.0) < 0.2
    with pytest.raises(InvalidArgumentError):
        geometric_count(rng, 1.0)


def test_substreams_are_reproducible_and_distinct():
    streams = RngStreams(7)
    a = streams.generator("noise", 3, 1).normal(size=5)
    b = RngStreams(7).generator("noise", 3, 1).normal(size=5)
    c = streams.generator("noise", 3, 2).normal(size=5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert np.array_equal(streams.child("noise").generator(3, 1).normal(size=5), a)


def test_zcdp_conversion_closed_form():
    assert zcdp_to_epsdelta(PrivacyBudget(1.0), 1e-6) == pytest.approx(1 + 2 * math.sqrt(math.log(1e6)))
    assert zcdp_to_epsdelta(PrivacyBudget(1.0), 1e-6) == pytest.approx(8.4338, abs=1e-4)
    assert zcdp_to_epsdelta(PrivacyBudget(1e-12), 1e-6) < 1e-4
    with pytest.raises(InvalidArgumentError):
        zcdp_to_epsdelta(PrivacyBudget(1.0), 1.5)


def test_zcdp_alpha_knob():
    budget = PrivacyBudget(0.5)
    assert zcdp_to_epsdelta(budget, 1e-3, alpha=3.0) == pytest.approx(1.5 + math.log(1e3) / 2.0)
    optimum = 1 + math.sqrt(math.log(1e3) / 0.5)
    assert zcdp_to_epsdelta(budget, 1e-3, alpha=optimum) == pytest.approx(zcdp_to_epsdelta(budget, 1e-3))
    with pytest.raises(InvalidArgumentError):
        zcdp_to_epsdelta(budget, 1e-3, alpha=1.0)


def test_zcdp_closed_form_matches_numeric_minimization():
    rng = np.random.default_rng(5)
    assert zcdp_to_epsdelta(PrivacyBudget(0.5), 1e-3) == pytest.approx(
        zcdp_to_epsdelta_numeric(PrivacyBudget(0.5), 1e-3), abs=1e-9)
    for _ in range(100):
        rho = float(rng.uniform(0.01, 5.0))
        delta = float(10 ** rng.uniform(-9, -2))
        closed = zcdp_to_epsdelta(PrivacyBudget(rho), delta)
        assert closed == pytest.approx(zcdp_to_epsdelta_numeric(PrivacyBudget(rho), delta), abs=1e-9)


def test_sigma_for_target_formulas():
    ledp = sigma_for_target(1.0, 1e-6, 1024, c=1, variant="ledp")
    assert ledp == pytest.approx(4 * math.sqrt(10 * math.log(1e6)))
    assert ledp == pytest.approx(47.01, abs=0.01)
    central = sigma_for_target(1.0, 1e-6, 1024, c=1, variant="centralized")
    assert central == pytest.approx(6 * math.sqrt(math.log(1024 / 1e-6)))
    weighted = sigma_for_target(1.0, 1e-6, 64, c=1, variant="weighted", beta=0.1, c_max=3.0)
    assert weighted == pytest.approx(4 * math.sqrt(weighted_units(64, 1, 0.1, 3.0) * math.log(1e6)))
    directed = sigma_for_target(1.0, 1e-6, 16, c=1, variant="directed", beta=0.5)
    assert directed == pytest.approx(4 * math.sqrt(directed_units(16, 1, 0.5) * math.log(1e6)))


@pytest.mark.parametrize("variant", ["ledp", "weighted", "directed", "centralized", "centralized-directed"])
def test_sigma_scales_inversely_with_eps(variant):
    one = sigma_for_target(1.0, 1e-6, 64, variant=variant)
    two = sigma_for_target(2.0, 1e-6, 64, variant=variant)
    assert one == pytest.approx(2 * two)


def test_sigma_for_target_errors():
    with pytest.raises(InfeasiblePrivacyError, match="8 ln"):
        sigma_for_target(120.0, 1e-6, 64)
    with pytest.raises(InfeasiblePrivacyError):
        sigma_for_target(0.0, 1e-6, 64)
    with pytest.raises(InvalidArgumentError):
        sigma_for_target(1.0, 1e-6, 1)
    with pytest.raises(InvalidArgumentError):
        sigma_for_target(1.0, 1e-6, 64, variant="quantum")


def test_budget_units():
    assert repetitions(1024, 1) == 10
    assert repetitions(1000, 2) == 20
    assert repetitions(1, 3) == 1
    assert lambda_grid_size(8, 1.0, 1.0) == 5
    assert weighted_units(8, 1, 1.0, 1.0) == 3 * 5
    assert t_grid(4, 1.0) == [0.5, 1.0, 2.0]
    assert lift_c_max(0.5) == 4.0
    expected = sum(weighted_units(8, 1, 1.0, lift_c_max(t)) + 1 for t in t_grid(4, 1.0))
    assert directed_units(4, 1, 1.0) == expected
    assert arithmetic_spacing(16, 0.0, 16) == pytest.approx(16 * math.sqrt(math.log(16)))
    assert arithmetic_grid_size(16, 1.0, 0.0, 16) == math.ceil(32 / (16 * math.sqrt(math.log(16))))


def test_ps_select_epsilon():
    assert ps_select_epsilon(0.1, 0.01, 1e-6) == pytest.approx(6 * math.sqrt(0.1 * math.log(1e8)))
    with pytest.raises(InvalidArgumentError):
        ps_select_epsilon(0.1, 1.0, 1e-6)


def test_composition_rules():
    half = PrivacyBudget(0.5)
    assert compose_sequential([half, half]).zcdp_budget == 1.0
    assert compose_sequential([]).zcdp_budget == 0.0
    assert compose_parallel([PrivacyBudget(0.3)] * 3).zcdp_budget == 0.3
    assert compose_parallel([PrivacyBudget(0.3)] * 3, "two-cover").zcdp_budget == pytest.approx(0.6)
    with pytest.raises(InvalidArgumentError):
        compose_parallel([half], "overlap")
    assert (half + half).zcdp_budget == 1.0


def test_value_objects_validate():
    with pytest.raises(InvalidArgumentError):
        PrivacyBudget(-1.0)
    with pytest.raises(InvalidArgumentError):
        EpsDelta(0.0, 1e-6)
    with pytest.raises(InvalidArgumentError):
        EpsDelta(1.0, 0.0)
    with pytest.raises(InvalidArgumentError):
        NoiseSpec("gaussian", 0.0)
    with pytest.raises(InvalidArgumentError):
        NoiseSpec("poisson", 1.0)
    assert NoiseSpec.gaussian(0.0).zero_noise
    assert PrivacyBudget(math.inf).non_private


def test_mechanism_costs():
    assert mechanism_cost(NoiseSpec.gaussian(2.0), 1.0) == (0.125, None)
    assert mechanism_cost(NoiseSpec.gaussian(2.0), 1.0, "two-cover") == (0.25, None)
    cost, pure = mechanism_cost(NoiseSpec.geometric(0.5), 1.0, "two-cover")
    assert pure == 1.0 and cost == 0.5
    cost, pure = mechanism_cost(NoiseSpec("laplace", 2.0), 1.0)
    assert pure == 0.5 and cost == 0.125
    assert mechanism_cost(NoiseSpec.gaussian(0.0), 1.0)[0] == math.inf


def test_accountant_ledger_and_json():
    accountant = PrivacyAccountant("toy")
    accountant.record("peel_counts", NoiseSpec.gaussian(2.0))
    accountant.record("noisy_degree", NoiseSpec.geometric(0.5), disjointness="two-cover")
    assert accountant.total.zcdp_budget == pytest.approx(0.625)
    assert accountant.total_pure_eps is None
    assert accountant.costs_by_mechanism() == {"peel_counts": 0.125, "noisy_degree": 0.5}
    report = json.loads(accountant.to_json(delta=1e-6))
    assert [e["round"] for e in report["entries"]] == [1, 2]
    assert report["eps_at_delta"] == pytest.approx(zcdp_to_epsdelta(PrivacyBudget(0.625), 1e-6))
    other = PrivacyAccountant()
    other.record("x", NoiseSpec.gaussian(1.0))
    accountant.extend(other)
    assert len(accountant) == 3 and accountant.entries[-1].round == 3
