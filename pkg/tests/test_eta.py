import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resonance_lab.eta import (
    BoundarySide,
    Sheet,
    eta,
    eta_boundary,
    eta_deriv,
    s_analytic,
    s_matrix,
)
from resonance_lab.model import Family, canonical_model, eval_v2, eval_v2_complex
from resonance_lab.numerics import DomainError, central_difference


def eta_closed_form(lam, z):
    """First-sheet η for rational_sqrt, Λ = 1, m = 1, integrated by mpmath."""
    z = mpmath.mpc(z.real, z.imag)
    val = mpmath.quad(lambda w: lam ** 2 * w / (1 + w * w) ** 2 / (w - z), [0, 1, mpmath.inf])
    return complex(z - 1 + val)


def test_free_theory():
    m = canonical_model(0.0)
    assert eta(m, 0.3 - 0.2j) == 0.3 - 0.2j - 1
    assert eta_boundary(m, 1.7) == pytest.approx(0.7)
    assert s_matrix(m, 1.3) == 1
    assert s_analytic(m, 0.5 - 0.1j) == 1


@pytest.mark.parametrize("z", [0.4 + 0.3j, 1.2 - 0.3j, -0.5 + 0.01j, 3.0 - 2.0j])
def test_eta_against_mpmath(model, z):
    assert abs(eta(model, z) - eta_closed_form(0.2, z)) < 1e-12


def test_schwarz_reflection(model):
    z = 1.2 - 0.3j
    assert abs(eta(model, z.conjugate()) - eta(model, z).conjugate()) < 1e-10


def test_sheet_jump_at_point(model):
    z = 1 - 0.05j
    diff = eta(model, z, Sheet.PLUS) - eta(model, z)
    assert abs(diff - 2j * math.pi * eval_v2_complex(model, z)) < 1e-14


@given(st.floats(0.05, 4), st.floats(0.02, 0.45), st.booleans())
@settings(max_examples=25, deadline=None)
def test_cross_sheet_reflection(x, y, below):
    model = canonical_model(0.2)
    z = complex(x, -y if below else y)
    assert abs(eta(model, z.conjugate(), Sheet.MINUS) - eta(model, z, Sheet.PLUS).conjugate()) < 1e-10
    assert abs(eta(model, z.conjugate()) - eta(model, z).conjugate()) < 1e-10
    jump = eta(model, z, Sheet.PLUS) - eta(model, z, Sheet.MINUS)
    assert abs(jump - 2j * math.pi * eval_v2_complex(model, z)) < 1e-12


def test_cut_is_domain_error(model):
    with pytest.raises(DomainError):
        eta(model, 1.0 + 0j)
    with pytest.raises(DomainError):
        eta_boundary(model, 0.0)


def test_boundary_conjugate_symmetry(model):
    w = np.linspace(0.05, 6, 50)
    above = eta_boundary(model, w, BoundarySide.ABOVE)
    below = eta_boundary(model, w, BoundarySide.BELOW)
    assert np.max(np.abs(below - np.conj(above))) < 1e-15


def test_boundary_epsilon_limit(model):
    assert abs(eta(model, 1 + 1e-6j) - eta_boundary(model, 1.0, BoundarySide.ABOVE)) < 1e-4


def test_unimodular(model):
    w = np.linspace(0.01, 10, 100)
    assert np.max(np.abs(np.abs(s_matrix(model, w)) - 1)) < 1e-12


def test_resonance_phase_sweep(model, pole):
    # Breit-Wigner: arg η(w+i0) rises by 2 atan(5) across ±5 half widths; S = conj(η)/η doubles it.
    g = abs(pole.z0.imag)
    w = np.linspace(pole.z0.real - 5 * g, pole.z0.real + 5 * g, 2001)
    phase = np.unwrap(np.angle(s_matrix(model, w)))
    sweep = abs(phase[-1] - phase[0])
    assert abs(sweep - 4 * math.atan(5)) < 0.05 * 4 * math.atan(5)


def test_s_analytic_boundary_limit(model):
    w = 1.3
    assert abs(s_analytic(model, w - 1e-6j) - s_matrix(model, w)) < 1e-4


@pytest.mark.parametrize("z", [0.7 - 0.2j, 1.5 + 0.4j, 2.0 - 0.05j])
def test_s_reflection_identity(model, z):
    assert abs(s_analytic(model, z.conjugate()).conjugate() - 1 / s_analytic(model, z)) < 1e-10


def test_eta_asymptotics(model):
    z = 1e3 * complex(math.cos(-math.pi / 4), math.sin(-math.pi / 4))
    assert abs(eta(model, z) / z - 1) < 0.01


@pytest.mark.parametrize("sheet, z", [(Sheet.FIRST, 0.6 + 0.3j), (Sheet.PLUS, 1.1 - 0.1j), (Sheet.MINUS, 0.9 + 0.2j)])
def test_eta_deriv_against_difference(model, sheet, z):
    num = central_difference(lambda s: eta(model, s, sheet), z, 1e-5)
    assert abs(eta_deriv(model, z, sheet) - num) < 1e-8


def test_exponential_family_reflection():
    m = canonical_model(0.2, Family.EXPONENTIAL_SQRT)
    z = 1.1 - 0.2j
    assert abs(eta(m, z.conjugate(), Sheet.MINUS) - eta(m, z, Sheet.PLUS).conjugate()) < 1e-10


def test_spectral_density_is_v2_over_abs_eta(model):
    from resonance_lab.eta import spectral_density
    w = np.array([0.5, 1.0, 3.0])
    ref = eval_v2(model, w) / np.abs(eta_boundary(model, w)) ** 2
    assert np.allclose(spectral_density(model, w), ref, rtol=1e-15, atol=0)
