"""Second-sheet pole, Gamov-vector overlaps, zero norm and zero energy."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .eta import Sheet, eta, eta_deriv, level_shift
from .model import (
    ModelSpec,
    PhysicalState,
    eval_state_conj_continuation,
    eval_v,
    eval_v2,
    eval_v2_complex,
    eval_v_complex,
)
from .numerics import (
    DEFAULT_TOL,
    DomainError,
    NumericalFailure,
    Tolerances,
    WrongSheetError,
    find_root_complex,
    integrate_semi_infinite,
)


class DegenerateCoupling(NumericalFailure):
    """Zero coupling: the pole merges with the real axis."""


class AnalyticityError(DomainError):
    """State profile not analytic in the half plane the kernel needs."""


@dataclass(frozen=True)
class Resonance:
    z0: complex
    eta_plus_deriv: complex
    s_residue: complex
    seed: complex
    residual: float

    @property
    def decay_rate(self) -> float:
        return -2.0 * self.z0.imag

    @property
    def lifetime(self) -> float:
        return 1.0 / self.decay_rate

    @property
    def gamov_weight(self) -> complex:
        """``1/η+'(z0)``, the coefficient of ``exp(-i z0 t)`` in the survival amplitude."""
        return 1.0 / self.eta_plus_deriv


@dataclass(frozen=True)
class GamovOverlaps:
    """``<1|f0> = 1/sqrt(η+'(z0))`` and the continuum kernel of ``|f0>``.

    The continuum part of ``|f0>`` is the functional
    ``φ -> -(1/sqrt(η+'(z0))) [∫ V φ/(w - z0) dw + 2πi V(z0) φ(z0)]``.
    """

    discrete: complex
    z0: complex

    def continuum_kernel(self, model: ModelSpec, w):
        """Real-axis density ``-V(w)/((w - z0) sqrt(η+'(z0)))``; the 2πi pole term is separate."""
        return -eval_v(model, w) / (np.asarray(w) - self.z0) * self.discrete


def seed_pole(model: ModelSpec, tol: Tolerances = DEFAULT_TOL) -> complex:
    """Second-order pole estimate ``m + P∫V^2/(m - w) dw - iπ V(m)^2``."""
    if model.coupling == 0:
        return complex(model.m)
    shift = -level_shift(model, model.m, tol)
    return complex(model.m + shift, -math.pi * eval_v2(model, model.m))


def find_pole(model: ModelSpec, tol: Tolerances = DEFAULT_TOL) -> Resonance:
    """Zero of η+ in the lower half plane, by Newton from the second-order seed."""
    if model.coupling == 0:
        raise DegenerateCoupling("degenerate: pole on real axis (zero coupling)")
    seed = seed_pole(model, tol)

    def F(z):
        if z.imag >= 0:
            # Newton strayed to the upper half plane where η+ = η has no zero.
            return complex(np.inf)
        return eta(model, z, Sheet.PLUS, tol)

    def dF(z):
        return eta_deriv(model, z, Sheet.PLUS, tol)

    z0 = find_root_complex(F, seed, tol, dF=dF, lower_half=True)
    if z0.imag >= 0:
        raise WrongSheetError(f"pole {z0} not in the lower half plane", [z0])
    scale = model.form_factor.scale
    if model.form_factor.family.value == "rational_sqrt" and abs(z0.imag) >= scale / 2:
        raise DomainError("resonance too close to the form-factor pole at -iΛ")
    deriv = eta_deriv(model, z0, Sheet.PLUS, tol)
    eta_minus = eta(model, z0, Sheet.MINUS, tol)
    return Resonance(
        z0=z0,
        eta_plus_deriv=deriv,
        s_residue=eta_minus / deriv,
        seed=seed,
        residual=abs(eta(model, z0, Sheet.PLUS, tol)),
    )


def gamov_overlaps(res: Resonance) -> GamovOverlaps:
    return GamovOverlaps(discrete=1.0 / cmath.sqrt(res.eta_plus_deriv), z0=res.z0)


def _continued_kernel_integral(model, psi, z, sign, tol):
    """``∫ V(w) φ#(w)/(w - z) dw`` plus the continuation term ``sign·2πi V(z) φ#(z)``.

    ``φ#(w) = conj(g(w))`` is ``<ψ|w>`` and ``φ#(z)`` its rational continuation.
    """
    if not psi.has_continuum:
        return 0.0
    if complex(psi.p).conjugate() == z:
        raise DomainError("kernel pole collides with the state profile pole")

    def f(w):
        return eval_v(model, w) * eval_state_conj_continuation(psi, w) / (w - z)

    pts = sorted({model.m, abs(z), abs(psi.p), model.form_factor.scale})
    integral = complex(integrate_semi_infinite(f, tol, breakpoints=pts).value)
    correction = sign * 2j * math.pi * eval_v_complex(model, z) * eval_state_conj_continuation(psi, z)
    return integral + correction


def gamov_overlap(model: ModelSpec, res: Resonance, psi: PhysicalState, which: str = "f0",
                  tol: Tolerances = DEFAULT_TOL) -> complex:
    """``<ψ|f0>`` (which="f0") or ``<ψ|f̃0>`` (which="f0_tilde").

    ``<ψ|f0>`` continues ``<ψ|w>`` into the lower half plane (needs the φ+ family,
    Im p < 0); ``<ψ|f̃0>`` continues it into the upper half plane at ``z0*``
    (needs the φ- family, Im p > 0).
    """
    if which == "f0":
        if psi.family == "minus":
            raise AnalyticityError("<ψ|f0> needs <ψ|w> analytic below the axis (φ+ family)")
        norm = cmath.sqrt(res.eta_plus_deriv)
        kernel = _continued_kernel_integral(model, psi, res.z0, +1, tol)
    elif which == "f0_tilde":
        if psi.family == "plus":
            raise AnalyticityError("<ψ|f̃0> needs <ψ|w> analytic above the axis (φ- family)")
        # η-'(z0*) = conj(η+'(z0)) by reflection.
        norm = cmath.sqrt(res.eta_plus_deriv.conjugate())
        kernel = _continued_kernel_integral(model, psi, res.z0.conjugate(), -1, tol)
    else:
        raise ValueError(f"unknown Gamov vector {which!r}")
    return (psi.c1.conjugate() - kernel) / norm


def _gamov_prefactor(res: Resonance) -> float:
    # 1/sqrt(η-'(z0*) η+'(z0)) with η-'(z0*) = conj(η+'(z0)).
    return 1.0 / abs(res.eta_plus_deriv)


def _peak_breaks(model, res):
    return tuple(sorted({res.z0.real, model.m, model.form_factor.scale}))


def gamov_norm(model: ModelSpec, res: Resonance, tol: Tolerances = DEFAULT_TOL) -> complex:
    """``<f0|f0>`` by direct quadrature of the kernel product.

    The product ``(1/(w-s))⁻_{z0*} (1/(w-s))⁺_{z0}`` acting on ``V^2`` is the
    real-axis integral ``∫V^2/|w-z0|^2`` plus the two continuation terms
    ``-2πi (V^2(z0*) + V^2(z0))/(z0* - z0)``.
    """
    z0 = res.z0
    zc = z0.conjugate()
    direct = integrate_semi_infinite(lambda w: eval_v2(model, w) / np.abs(w - z0) ** 2, tol,
                                     breakpoints=_peak_breaks(model, res)).value
    cross = -2j * math.pi * (eval_v2_complex(model, zc) + eval_v2_complex(model, z0)) / (zc - z0)
    return _gamov_prefactor(res) * (1.0 + complex(direct) + cross)


def gamov_norm_partial_fractions(model: ModelSpec, res: Resonance, tol: Tolerances = DEFAULT_TOL) -> complex:
    """Second route: split the kernel product and use η+(z0) = η-(z0*) = 0.

    Each factor reduces to ``m - z`` plus the residual of the defining
    equation, so the result is ``1 + [(m - z0* + r-) - (m - z0 + r+)]/(z0* - z0)``.
    """
    z0 = res.z0
    zc = z0.conjugate()
    r_plus = eta(model, z0, Sheet.PLUS, tol)
    r_minus = eta(model, zc, Sheet.MINUS, tol)
    k_minus = model.m - zc + r_minus
    k_plus = model.m - z0 + r_plus
    return _gamov_prefactor(res) * (1.0 + (k_minus - k_plus) / (zc - z0))


def _energy_terms(model, res, tol):
    z0 = res.z0
    zc = z0.conjugate()
    direct = integrate_semi_infinite(lambda w: w * eval_v2(model, w) / np.abs(w - z0) ** 2, tol,
                                     breakpoints=_peak_breaks(model, res))
    cross = -2j * math.pi * (zc * eval_v2_complex(model, zc) + z0 * eval_v2_complex(model, z0)) / (zc - z0)
    # ∫V^2 (1/(w-s))⁺_{z0} and its mirror, by direct quadrature of the continued kernel.
    k_plus = complex(integrate_semi_infinite(lambda w: eval_v2(model, w) / (w - z0), tol,
                                             breakpoints=_peak_breaks(model, res)).value)
    k_plus += 2j * math.pi * eval_v2_complex(model, z0)
    k_minus = complex(integrate_semi_infinite(lambda w: eval_v2(model, w) / (w - zc), tol,
                                              breakpoints=_peak_breaks(model, res)).value)
    k_minus -= 2j * math.pi * eval_v2_complex(model, zc)
    return complex(direct.value) + cross, k_plus, k_minus


def gamov_energy(model: ModelSpec, res: Resonance, tol: Tolerances = DEFAULT_TOL) -> complex:
    """``<f0|H|f0>`` in the {|1>, |w>} basis.

    ``m - ∫V^2 k+ - ∫V^2 k- + ∫ w V^2 k- k+``, with the product kernel carrying
    the factor ``w`` (continuation terms ``-2πi (z0* V^2(z0*) + z0 V^2(z0))/(z0* - z0)``).
    """
    product, k_plus, k_minus = _energy_terms(model, res, tol)
    return _gamov_prefactor(res) * (model.m - k_plus - k_minus + product)


def gamov_energy_integrand_l1(model: ModelSpec, res: Resonance, tol: Tolerances = DEFAULT_TOL) -> float:
    """``∫|w V^2/|w - z0|^2| dw``: scale of the cancelling terms in ``gamov_energy``."""
    z0 = res.z0
    val = integrate_semi_infinite(lambda w: w * eval_v2(model, w) / np.abs(w - z0) ** 2, tol,
                                  breakpoints=_peak_breaks(model, res)).value
    return float(abs(val))
