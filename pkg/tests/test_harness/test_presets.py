"""Tests for the built-in experiment suites."""

import pytest

from sa_forge.core.exceptions import ContractViolationError
from sa_forge.harness.presets import PRESET_D, PRESETS, get_preset, population_radius2


def test_radius():
    assert population_radius2(3) == pytest.approx(1 + 1 / 2 + 1 / 3)


def test_names():
    assert sorted(PRESETS) == ["fig1-left", "fig1-middle", "fig1-right"]


def test_left_grid():
    configs = get_preset("fig1-left", n=1000, replications=2, seed=7)
    R2 = population_radius2(PRESET_D)
    averaged = sorted(c.gamma for c in configs if c.optimizer == "lms-avg-const")

    assert len(configs) == 8
    assert averaged == pytest.approx([1 / (16 * R2), 1 / (4 * R2), 1 / R2])
    assert all(c.loss == "square" and c.n == 1000 and c.seed == 7 and c.replications == 2 for c in configs)
    assert all(c.step_rule == "explicit" for c in configs)


def test_middle_is_logistic():
    configs = get_preset("fig1-middle", n=100)
    assert {c.loss for c in configs} == {"logistic"}
    assert "lms-avg-const" not in {c.optimizer for c in configs}


def test_right_has_every_newton_policy():
    optimizers = {c.optimizer for c in get_preset("fig1-right", n=100)}
    assert {"newton:online", "newton:dbl-approx", "newton:2step", "newton:2step-dbl", "avg-const-sgd"} == optimizers


def test_labels_are_unique_per_step():
    configs = get_preset("fig1-right", n=100)
    assert len({c.name for c in configs}) == len(configs)


def test_unknown():
    with pytest.raises(ContractViolationError, match="Available"):
        get_preset("fig2")
