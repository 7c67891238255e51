import math

import numpy as np
import pytest

from resonance_lab.dynamics import fit_decay_rate, survival_amplitude
from resonance_lab.model import PhysicalState, canonical_model
from resonance_lab.oracle import (
    discretize,
    evolve_discrete,
    project_state,
    recurrence_time,
    survival_discrete,
)


def test_free_eigenvalues_exact():
    dm = discretize(canonical_model(0.0), 200)
    ref = np.sort(np.append(dm.nodes, 1.0))
    assert np.array_equal(np.sort(dm.energies), ref)


def test_matrix_structure(oracle_2000, model):
    dm = oracle_2000
    assert dm.hermiticity_residual() < 1e-14
    assert dm.orthonormality_residual() < 1e-10
    assert dm.matrix[0, 0] == model.m
    assert np.all(dm.weights > 0) and np.all(dm.nodes > 0)


def test_density_peaks_near_resonance(oracle_2000, pole):
    # Weight of |1> on the eigenbasis concentrates around Re z0.
    weights = np.abs(oracle_2000.vectors[0]) ** 2
    assert abs(oracle_2000.energies[np.argmax(weights / np.gradient(oracle_2000.energies))] - pole.z0.real) < 0.01


def test_identity_at_zero(oracle_2000, mixed_state):
    vec = project_state(oracle_2000, mixed_state)
    assert np.max(np.abs(evolve_discrete(oracle_2000, vec, 0.0) - vec)) < 1e-12


def test_norm_preserved(oracle_2000, mixed_state):
    vec = project_state(oracle_2000, mixed_state)
    out = evolve_discrete(oracle_2000, vec, 1e3)
    assert abs(np.vdot(out, out).real - np.vdot(vec, vec).real) < 1e-12


def test_batched_times(oracle_2000):
    vec = project_state(oracle_2000, PhysicalState(1, 0))
    batch = evolve_discrete(oracle_2000, vec, [1.0, 7.0])
    assert np.allclose(batch[1], evolve_discrete(oracle_2000, vec, 7.0), atol=1e-14)
    assert abs(batch[0][0] - survival_discrete(oracle_2000, 1.0)) < 1e-12


def test_recurrence_uniform_example(model):
    dm = discretize(model, 2000, 50.0, rule="uniform")
    assert abs(recurrence_time(dm) - 2 * math.pi / 0.025) < 0.01 * 251


def test_recurrence_doubles(oracle_2000, oracle_4000):
    assert abs(recurrence_time(oracle_4000) / recurrence_time(oracle_2000) - 2) < 0.05


def test_recurrence_independent_of_coupling(oracle_2000):
    assert recurrence_time(discretize(canonical_model(0.4), 2000)) == recurrence_time(oracle_2000)


@pytest.fixture(scope="module")
def horizon(oracle_2000):
    return np.linspace(0, recurrence_time(oracle_2000) / 2, 200)


def test_continuum_agreement(model, oracle_2000, horizon):
    p_cont = np.abs(survival_amplitude(model, horizon)) ** 2
    p_disc = np.abs(survival_discrete(oracle_2000, horizon)) ** 2
    assert np.max(np.abs(p_cont - p_disc)) < 1e-3


def test_rate_agreement(oracle_2000, pole):
    ts = np.linspace(0.5 * pole.lifetime, 2.5 * pole.lifetime, 41)
    rate = fit_decay_rate(ts, np.abs(survival_discrete(oracle_2000, ts)) ** 2)
    assert abs(rate / pole.decay_rate - 1) < 0.01


@pytest.mark.parametrize("rule", ["uniform", "gauss_legendre"])
def test_other_rules_build(model, rule):
    dm = discretize(model, 400, 100.0, rule=rule)
    assert dm.hermiticity_residual() < 1e-14 and dm.size == 400


def test_bad_arguments(model):
    with pytest.raises(ValueError):
        discretize(model, 1)
    with pytest.raises(ValueError):
        discretize(model, 100, omega_max=5.0)
    with pytest.raises(ValueError):
        discretize(model, 100, rule="simpson")
