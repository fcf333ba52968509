import itertools
import math
import os
import sys
from fractions import Fraction

import numpy as np
import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from src import config
from src.algorithms.density_value import (
    MIN_CLAMP,
    ClampedDensity,
    clamp_level,
    private_density_value,
    rho_x_sensitivity_check,
    separation_report,
)
from src.graph.graphs import Graph
from src.privacy.accountant import PrivacyAccountant
from src.utils.error_handler import InvalidArgumentError, OracleLimitError


@pytest.fixture
def k4():
    return Graph(4, itertools.combinations(range(4), 2))


def test_noiseless_release_is_the_clamped_density(k4):
    assert private_density_value(k4, math.inf) == 1.5
    assert private_density_value(Graph(3), math.inf, mode="expectation") == MIN_CLAMP


def test_clamp_levels():
    assert clamp_level(100, 1.0) == pytest.approx(math.sqrt(math.log(100)))
    assert clamp_level(100, 4.0, mode="expectation") == pytest.approx(0.51)
    assert clamp_level(100, 0.25, mode="expectation") == pytest.approx(2.0)
    with pytest.raises(InvalidArgumentError):
        clamp_level(100, 1.0, mode="median")
    with pytest.raises(InvalidArgumentError):
        clamp_level(100, 0.0)


def test_clamped_density_validation():
    assert ClampedDensity(x=2.0, rho_x=2.0).sensitivity == pytest.approx(1 / 3)
    with pytest.raises(InvalidArgumentError):
        ClampedDensity(x=0.5, rho_x=1.0)


def test_sensitivity_holds_on_every_small_graph():
    report = rho_x_sensitivity_check(5)
    assert report.ok
    assert report.pairs_checked > 0
    assert report.max_difference[2.0] <= Fraction(1, 3)
    with pytest.raises(InvalidArgumentError):
        rho_x_sensitivity_check(7)


def test_expectation_mode_error_is_constant():
    rng = np.random.default_rng(0)
    g = Graph(50)
    errors = [abs(private_density_value(g, 1.0, mode="expectation", rho=0, seed=rng)) for _ in range(10 ** 4)]
    assert np.mean(errors) <= 3.0


def test_whp_mode_concentrates():
    rng = np.random.default_rng(1)
    g = Graph(1000)
    bound = 5 * math.sqrt(math.log(1000))
    errors = np.array([abs(private_density_value(g, 1.0, rho=5.0, seed=rng) - 5.0) for _ in range(2000)])
    assert np.mean(errors <= bound) >= 0.99


def test_exact_density_needs_the_oracle_limit(monkeypatch, k4):
    monkeypatch.setattr(config, "FLOW_LIMIT", 3)
    with pytest.raises(OracleLimitError, match="pass rho"):
        private_density_value(k4, 1.0)
    assert private_density_value(k4, math.inf, rho=Fraction(3, 2)) == 1.5
    with pytest.raises(InvalidArgumentError):
        private_density_value(Graph(0), 1.0, rho=0)


def test_release_is_recorded_as_pure_epsilon(k4):
    accountant = PrivacyAccountant("value")
    private_density_value(k4, 0.8, accountant=accountant, seed=3)
    assert accountant.total_pure_eps == pytest.approx(0.8)
    assert list(accountant.costs_by_mechanism()) == ["density_value"]


def test_same_seed_same_release(k4):
    assert private_density_value(k4, 1.0, seed=9) == private_density_value(k4, 1.0, seed=9)


def test_separation_report_columns():
    frame = separation_report(ns=(20,), eps=1.0, trials=5, seed=2)
    assert list(frame.columns) == [
        "n", "eps", "mode", "rho", "mean_abs_error", "structural_scale", "below_structural_scale",
    ]
    assert frame["mode"].tolist() == ["whp", "expectation"]
