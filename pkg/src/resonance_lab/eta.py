"""Dispersion function, its sheet continuations and the S-matrix.

    η(z)  = z - m + ∫_0^∞ V(w)^2 / (w - z) dw          (z off [0, ∞))
    η+(z) = η(z) + 2πi V(z)^2   for Im z < 0, η(z) above the axis
    η-(z) = η(z) - 2πi V(z)^2   for Im z > 0, η(z) below the axis
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .model import ModelSpec, eval_v2, eval_v2_complex, eval_v2_deriv_complex
from .numerics import (
    DEFAULT_TOL,
    DomainError,
    NumericalFailure,
    Tolerances,
    cauchy_integral,
    integrate_semi_infinite,
    principal_value,
)


class Sheet(str, enum.Enum):
    FIRST = "first"
    PLUS = "plus"
    MINUS = "minus"


class BoundarySide(str, enum.Enum):
    ABOVE = "above"
    BELOW = "below"


class DegenerateSpectrum(NumericalFailure):
    pass


class PoleEvaluation(NumericalFailure):
    pass


def _breaks(model: ModelSpec, z: complex):
    pts = {model.m, model.form_factor.scale}
    if z.real > 0:
        pts.add(z.real)
    return tuple(sorted(pts))


def _v2(model):
    return lambda w: eval_v2(model, w)


def sheet_correction(model: ModelSpec, z: complex, sheet: Sheet) -> complex:
    """Term added to the first-sheet value to obtain the requested sheet."""
    sheet = Sheet(sheet)
    if sheet is Sheet.PLUS and z.imag < 0:
        return 2j * math.pi * eval_v2_complex(model, z)
    if sheet is Sheet.MINUS and z.imag > 0:
        return -2j * math.pi * eval_v2_complex(model, z)
    return 0.0


def eta(model: ModelSpec, z: complex, sheet: Sheet = Sheet.FIRST, tol: Tolerances = DEFAULT_TOL) -> complex:
    z = complex(z)
    if z.imag == 0 and z.real >= 0:
        raise DomainError(f"z = {z} is on the cut; use eta_boundary")
    if model.coupling == 0:
        return z - model.m
    integral = cauchy_integral(_v2(model), z, tol, _breaks(model, z)).value
    return z - model.m + integral + sheet_correction(model, z, sheet)


def eta_deriv(model: ModelSpec, z: complex, sheet: Sheet = Sheet.FIRST, tol: Tolerances = DEFAULT_TOL) -> complex:
    """``dη/dz = 1 + ∫V^2/(w-z)^2 dw`` plus the derivative of the sheet term."""
    z = complex(z)
    if z.imag == 0 and z.real >= 0:
        raise DomainError(f"z = {z} is on the cut")
    if model.coupling == 0:
        return 1.0 + 0j
    v2 = _v2(model)
    res = integrate_semi_infinite(lambda w: v2(w) / (w - z) ** 2, tol, _breaks(model, z))
    out = 1.0 + complex(res.value)
    sheet = Sheet(sheet)
    if sheet is Sheet.PLUS and z.imag < 0:
        out += 2j * math.pi * eval_v2_deriv_complex(model, z)
    elif sheet is Sheet.MINUS and z.imag > 0:
        out -= 2j * math.pi * eval_v2_deriv_complex(model, z)
    return out


def level_shift(model: ModelSpec, w, tol: Tolerances = DEFAULT_TOL):
    """``P∫ V(w')^2/(w' - w) dw'`` (vectorized over ``w > 0``)."""
    w_arr = np.asarray(w, dtype=float)
    if np.any(w_arr <= 0):
        raise DomainError("boundary values need w > 0")
    if model.coupling == 0:
        return np.zeros_like(w_arr) if w_arr.ndim else 0.0
    return principal_value(_v2(model), w, tol).value


def eta_boundary(model: ModelSpec, w, side: BoundarySide = BoundarySide.ABOVE, tol: Tolerances = DEFAULT_TOL):
    """``η(w ± i0) = w - m + P∫V^2/(w'-w) ± iπV(w)^2`` (vectorized over ``w``)."""
    w_arr = np.asarray(w, dtype=float)
    if np.any(w_arr <= 0):
        raise DomainError("boundary values need w > 0")
    sign = 1.0 if BoundarySide(side) is BoundarySide.ABOVE else -1.0
    out = w_arr - model.m + level_shift(model, w_arr, tol) + sign * 1j * math.pi * eval_v2(model, w_arr)
    return out if np.ndim(w) else complex(out)


def s_matrix(model: ModelSpec, w, tol: Tolerances = DEFAULT_TOL):
    """``S(w) = η(w - i0)/η(w + i0)`` on the positive axis (vectorized)."""
    above = np.asarray(eta_boundary(model, w, BoundarySide.ABOVE, tol))
    if np.any(above == 0):
        raise DegenerateSpectrum("η(w + i0) vanishes on the real axis")
    # η(w - i0) = conj(η(w + i0)) since V^2 is real on the axis.
    out = np.conj(above) / above
    return out if np.ndim(w) else complex(out)


def s_analytic(model: ModelSpec, z: complex, tol: Tolerances = DEFAULT_TOL) -> complex:
    """Meromorphic continuation ``S(z) = η-(z)/η+(z)``."""
    z = complex(z)
    plus = eta(model, z, Sheet.PLUS, tol)
    if plus == 0:
        raise PoleEvaluation(f"S(z) evaluated at its pole z = {z}")
    return eta(model, z, Sheet.MINUS, tol) / plus


def spectral_density(model: ModelSpec, w, tol: Tolerances = DEFAULT_TOL):
    """``V(w)^2/|η(w + i0)|^2``, the survival-amplitude spectral weight of |1>."""
    w_arr = np.asarray(w, dtype=float)
    out = eval_v2(model, w_arr) / np.abs(eta_boundary(model, w_arr, BoundarySide.ABOVE, tol)) ** 2
    return out if np.ndim(w) else float(out)
