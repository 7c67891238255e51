import math

import numpy as np
import pytest

from resonance_lab.dynamics import (
    ObservableSpec,
    SpectralGrid,
    UnsupportedObservable,
    background_rotated,
    decay_record,
    delta_concentration_check,
    evolve_state,
    fit_decay_rate,
    gamov_background_split,
    hamiltonian_observable,
    identity_observable,
    invariant_mean,
    level_projector,
    ls_amplitude,
    observable_mean,
    parseval_check,
    spectral_amplitude,
    sum_rules,
    survival_amplitude,
    weak_coupling_report,
)
from resonance_lab.eta import BoundarySide, eta_boundary, spectral_density
from resonance_lab.model import (
    PhysicalState,
    canonical_model,
    discrete_state,
    eval_state_profile,
    eval_v,
    eval_v2,
    state_norm2,
)
from resonance_lab.numerics import DomainError
from resonance_lab.resonance import find_pole

W = np.array([0.2, 0.9, 1.0, 1.1, 4.0])


@pytest.fixture(scope="module")
def window(pole):
    # One physical window for every coupling: 20 line widths of the canonical resonance.
    return 20 * abs(pole.z0.imag)


def test_free_amplitude_is_profile(mixed_state):
    m = canonical_model(0.0)
    assert np.allclose(ls_amplitude(m, mixed_state, W), eval_state_profile(mixed_state, W), atol=1e-15)


def test_level_amplitude(model):
    amp = ls_amplitude(model, discrete_state(), W)
    ref = eval_v(model, W) / eta_boundary(model, W, BoundarySide.BELOW)
    assert np.allclose(amp, ref, rtol=1e-14, atol=0)
    assert np.allclose(np.abs(amp) ** 2, spectral_density(model, W), rtol=1e-13, atol=0)


def test_spectral_amplitude_grid(model):
    sa = spectral_amplitude(model, discrete_state())
    assert sa.grid[0] <= model.m / 100 and sa.grid[-1] >= 50 * max(model.m, model.form_factor.scale)
    assert np.all(np.isfinite(sa.values))


@pytest.mark.parametrize("psi", [
    discrete_state(),
    PhysicalState(1 / math.sqrt(2), 1 / math.sqrt(2), 1j),
    PhysicalState(1 / math.sqrt(2), 1 / math.sqrt(2), 1j, order=3),
    PhysicalState(0.3, 1.0, 0.5 + 1j),
])
def test_parseval(model, psi):
    lhs, rhs = parseval_check(model, psi)
    assert abs(lhs - rhs) < 1e-6


def test_parseval_free_misses_bound_level(mixed_state):
    # Without coupling |1> is an eigenvector of its own, so the continuum carries only |g|^2.
    lhs, rhs = parseval_check(canonical_model(0.0), mixed_state)
    assert abs(lhs - (rhs - abs(mixed_state.c1) ** 2)) < 1e-9


def test_sum_rules(model):
    s0, s1 = sum_rules(model)
    assert abs(s0 - 1) < 1e-6 and abs(s1 - model.m) < 1e-6


def test_survival_start(model):
    assert abs(survival_amplitude(model, 0.0) - 1) < 1e-6


def test_survival_free():
    ts = np.array([0.0, 1.3, 7.0])
    assert np.allclose(survival_amplitude(canonical_model(0.0), ts), np.exp(-1j * ts), atol=1e-15)


def test_survival_slope(model, pole):
    ts = np.linspace(5, 40, 36)
    rate = fit_decay_rate(ts, np.abs(survival_amplitude(model, ts)) ** 2)
    assert abs(rate / pole.decay_rate - 1) < 0.01


def test_split_identity(model, pole):
    ts = np.array([0.0, 1.0, 5.0, 20.0])
    gamov, bg = gamov_background_split(model, pole, ts)
    assert np.max(np.abs(survival_amplitude(model, ts) - gamov - bg)) < 1e-6


def test_gamov_term_at_zero(model, pole):
    gamov, _ = gamov_background_split(model, pole, 0.0)
    assert abs(abs(gamov) - 1 / abs(pole.eta_plus_deriv)) < 1e-15
    assert abs(abs(gamov) - 1) < 0.1


def test_split_rejects_negative_time(model, pole):
    with pytest.raises(DomainError):
        gamov_background_split(model, pole, -1.0)


@pytest.mark.parametrize("t", [10.0, 60.0])
def test_background_by_contour_rotation(model, pole, t):
    _, bg = gamov_background_split(model, pole, t)
    assert abs(background_rotated(model, pole, t) - bg) < 1e-6 * max(abs(bg), 1e-3)


def test_decay_record(model, pole):
    rec = decay_record(model, pole, np.linspace(0, 30, 7))
    assert abs(rec.p1[0] - 1) < 1e-8
    assert np.max(rec.split_residual) < 1e-6


def test_zeno_exponent(model):
    q = [1 - abs(survival_amplitude(model, h)) ** 2 for h in (1e-2, 1e-3)]
    assert abs(math.log10(q[0] / q[1]) - 2) < 0.1


@pytest.fixture(scope="module")
def mixed_grid(model, pole, mixed_state):
    return SpectralGrid.build(model, mixed_state, 20.0, res=pole)


def test_evolve_round_trip(model, mixed_state, mixed_grid):
    st = evolve_state(model, mixed_state, 0.0, grid=mixed_grid)
    assert abs(st.c1 - mixed_state.c1) < 1e-6
    assert np.max(np.abs(st.b - eval_state_profile(mixed_state, st.omega))) < 1e-6


def test_evolve_norm_conserved(model, mixed_state, mixed_grid):
    norms = [evolve_state(model, mixed_state, t, grid=mixed_grid).norm2() for t in (0.0, 5.0, 20.0)]
    assert abs(norms[0] - state_norm2(mixed_state)) < 1e-6
    assert max(norms) - min(norms) < 1e-6


def test_evolve_energy_conserved(model, pole):
    # The order-3 profile keeps the mean energy finite.
    psi = PhysicalState(1 / math.sqrt(2), 1 / math.sqrt(2), 1j, order=3)
    means, _ = observable_mean(model, pole, hamiltonian_observable(model), psi, [0.0, 5.0, 20.0])
    assert np.ptp(means.real) < 1e-6 * abs(means[0])


def test_identity_observable(model, pole, mixed_state, mixed_grid):
    means, _ = observable_mean(model, pole, identity_observable(), mixed_state, [0.0, 5.0], grid=mixed_grid)
    assert np.allclose(means.real, state_norm2(mixed_state), atol=1e-6)


def test_level_projector_matches_survival(model, pole):
    ts = [0.0, 4.0, 15.0]
    means, _ = observable_mean(model, pole, level_projector(), discrete_state(), ts)
    assert np.allclose(means.real, np.abs(survival_amplitude(model, np.array(ts))) ** 2, atol=1e-6)


def test_invariant_part_constant(model, pole, mixed_state, mixed_grid):
    vals = [invariant_mean(hamiltonian_observable(model), mixed_grid, t) for t in (0.0, 3.0, 11.0, 20.0)]
    assert max(abs(v - vals[0]) for v in vals) < 1e-8


def test_separable_term(model, pole, mixed_state, mixed_grid):
    # |χ><χ| with χ(w) = exp(-w): mean from the separable slot equals |<χ|ψ_t>|^2.
    chi = lambda w: np.exp(-w)  # noqa: E731
    obs = ObservableSpec(separable=(chi, chi))
    st = evolve_state(model, mixed_state, 3.0, grid=mixed_grid)
    means, _ = observable_mean(model, pole, obs, mixed_state, 3.0, grid=mixed_grid)
    direct = abs(np.sum(st.weights * chi(st.omega) * st.b)) ** 2
    assert abs(means - direct) < 1e-12


def test_unsupported_observable(model, pole, mixed_state):
    with pytest.raises(UnsupportedObservable):
        observable_mean(model, pole, lambda w1, w2: w1 * w2, mixed_state, 1.0)


def test_observable_rejects_plus_family(model, pole):
    with pytest.raises(DomainError):
        observable_mean(model, pole, identity_observable(), PhysicalState(1, 1, -1j), 1.0)


def test_weak_coupling_at_start(model, pole, window):
    row = weak_coupling_report(model, pole, [0.0], window)[0]
    assert abs(row.p1 - 1) < 1e-6 and abs(row.buildup) < 1e-6


@pytest.fixture(scope="module")
def canonical_rows(model, pole, window):
    return weak_coupling_report(model, pole, np.linspace(0, 2 * pole.lifetime, 41), window)


def test_weak_coupling_buildup(canonical_rows):
    assert max(abs(r.buildup - r.buildup_approx) for r in canonical_rows) < 0.08


def test_weak_coupling_population(canonical_rows):
    # The exact P1 starts quadratically while the approximant starts linearly; the gap peaks near 0.14 lifetimes.
    assert max(abs(r.p1 - r.p1_approx) for r in canonical_rows) < 0.05


def test_weak_coupling_tightens(window):
    model = canonical_model(0.05)
    res = find_pole(model)
    rows = weak_coupling_report(model, res, np.linspace(0, 2 * res.lifetime, 9), window)
    assert max(abs(r.p1 - r.p1_approx) for r in rows) < 0.01
    assert max(abs(r.buildup - r.buildup_approx) for r in rows) < 0.01


LAMBDAS = (0.4, 0.2, 0.1, 0.05)


def test_delta_concentration_unit(model):
    for _, val in delta_concentration_check(model, lambda w: np.ones_like(w), LAMBDAS):
        assert abs(val - 1) < 1e-6


def test_delta_concentration_energy(model):
    for _, val in delta_concentration_check(model, lambda w: w, LAMBDAS):
        assert abs(val - model.m) < 1e-6


def test_delta_concentration_lorentzian(model):
    rows = delta_concentration_check(model, lambda w: 1 / (1 + (w - model.m) ** 2), LAMBDAS)
    gaps = [abs(val - 1) for _, val in rows]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))


def test_fit_decay_rate_exact():
    ts = np.linspace(0, 10, 11)
    assert abs(fit_decay_rate(ts, np.exp(-0.3 * ts)) - 0.3) < 1e-12


def test_golden_rate_closeness(model, pole):
    assert abs(pole.decay_rate - 2 * math.pi * eval_v2(model, model.m)) / pole.decay_rate < 0.02
