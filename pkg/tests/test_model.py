import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resonance_lab.model import (
    Family,
    FormFactorSpec,
    ModelSpec,
    PhysicalState,
    canonical_model,
    continuum_norm2,
    discrete_state,
    eval_state_profile,
    eval_v,
    eval_v2,
    eval_v2_complex,
    eval_v_complex,
    state_norm2,
)
from resonance_lab.numerics import DomainError

FAMILIES = list(Family)


def closed_form_norm(a, p):
    """∫_0^∞ |a w/(w-p)^2|^2 dw for p = x + iy, y != 0, done by hand."""
    x, y = p.real, abs(p.imag)
    return abs(a) ** 2 * ((x * x + y * y) / (2 * y ** 3) * (math.pi / 2 + math.atan(x / y)) + x / (2 * y * y))


@pytest.mark.parametrize("family", FAMILIES)
def test_v_vanishes_at_origin(family):
    assert eval_v(FormFactorSpec(family), 0.0) == 0.0


def test_v_at_one():
    assert abs(eval_v(FormFactorSpec(Family.RATIONAL_SQRT, 0.2, 1.0), 1.0) - 0.1) < 1e-15


def test_v_negative_is_domain_error():
    with pytest.raises(DomainError):
        eval_v(FormFactorSpec(), -0.1)


def test_v2_at_minus_half_i():
    spec = FormFactorSpec(Family.RATIONAL_SQRT, 0.2, 1.0)
    assert abs(eval_v2_complex(spec, -0.5j) - (-(8 / 9) * 0.04j)) < 1e-15


@pytest.mark.parametrize("family", FAMILIES)
def test_v2_complex_on_axis(family):
    spec = FormFactorSpec(family, 0.3, 1.4)
    w = np.random.default_rng(1).uniform(0, 20, 100)
    assert np.max(np.abs(eval_v2_complex(spec, w + 0j) - eval_v(spec, w) ** 2)) < 1e-14


@pytest.mark.parametrize("family", FAMILIES)
def test_v2_reflection(family):
    spec = FormFactorSpec(family)
    z = 0.7 - 0.3j
    assert abs(eval_v2_complex(spec, z.conjugate()) - eval_v2_complex(spec, z).conjugate()) < 1e-16


@pytest.mark.parametrize("family", FAMILIES)
def test_v_complex_square_consistency(family):
    spec = FormFactorSpec(family)
    z = 1 - 0.1j
    assert abs(eval_v_complex(spec, z) ** 2 - eval_v2_complex(spec, z)) < 1e-14
    assert abs(eval_v_complex(spec, 2.0) - eval_v(spec, 2.0)) < 1e-15


def test_v_complex_branch_cut():
    with pytest.raises(DomainError):
        eval_v_complex(FormFactorSpec(), -1.0 + 0j)


def test_form_factor_pole_rejected():
    with pytest.raises(DomainError):
        eval_v2_complex(FormFactorSpec(Family.RATIONAL_SQRT, 0.2, 2.0), -2j)


@given(st.floats(0, 50), st.sampled_from(FAMILIES), st.floats(0.01, 0.5), st.floats(0.2, 5))
@settings(max_examples=50, deadline=None)
def test_v_real_nonnegative(w, family, lam, scale):
    v = eval_v(FormFactorSpec(family, lam, scale), w)
    assert v >= 0 and math.isfinite(v)
    assert abs(eval_v2(FormFactorSpec(family, lam, scale), w) - v * v) <= 1e-15 + 1e-13 * v * v


def test_spec_validation():
    with pytest.raises(ValueError):
        FormFactorSpec(coupling=-1)
    with pytest.raises(ValueError):
        FormFactorSpec(scale=0)
    with pytest.raises(ValueError):
        ModelSpec(m=0)


def test_with_coupling():
    m = canonical_model(0.2).with_coupling(0.1)
    assert m.coupling == 0.1 and m.form_factor.scale == 1.0


def test_profile_value():
    psi = PhysicalState(c1=0, a=1, p=1j)
    assert abs(eval_state_profile(psi, 1.0) - 0.5j) < 1e-15


def test_zero_amplitude_profile():
    psi = PhysicalState(c1=1, a=0)
    assert np.all(eval_state_profile(psi, np.linspace(0, 5, 9)) == 0)


def test_family_tags():
    assert PhysicalState(a=1, p=1j).family == "minus"
    assert PhysicalState(a=1, p=-1j).family == "plus"
    assert discrete_state().family == "both"


def test_real_pole_rejected():
    with pytest.raises(ValueError):
        PhysicalState(a=1, p=2.0)


@pytest.mark.parametrize("a, p", [(1, 1j), (0.5 - 0.2j, 0.7 + 0.4j), (2, -1.5 - 0.3j)])
def test_continuum_norm_closed_form(a, p):
    psi = PhysicalState(c1=0, a=a, p=p)
    assert abs(continuum_norm2(psi) - closed_form_norm(a, p)) < 1e-10 * closed_form_norm(a, p)


@given(st.complex_numbers(max_magnitude=3), st.complex_numbers(max_magnitude=3),
       st.floats(-2, 2), st.floats(0.2, 2), st.booleans())
@settings(max_examples=30, deadline=None)
def test_norm_positive_unless_zero(c1, a, x, y, upper):
    p = complex(x, y if upper else -y)
    psi = PhysicalState(c1, a, p)
    n = state_norm2(psi)
    assert math.isfinite(n)
    if abs(c1) > 1e-6 or abs(a) > 1e-6:
        assert n > 0
