"""Friedrichs Hamiltonian data: discrete level, form factors, test states."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .numerics import DEFAULT_TOL, DomainError, Tolerances, integrate_semi_infinite


class Family(str, enum.Enum):
    RATIONAL_SQRT = "rational_sqrt"
    EXPONENTIAL_SQRT = "exponential_sqrt"


@dataclass(frozen=True)
class FormFactorSpec:
    """Coupling ``V(w)`` between the level and the continuum.

    rational_sqrt:     ``V(w) = λ sqrt(w/Λ) / (1 + (w/Λ)^2)``
    exponential_sqrt:  ``V(w) = λ sqrt(w/Λ) exp(-w/(2Λ))``
    """

    family: Family = Family.RATIONAL_SQRT
    coupling: float = 0.2
    scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.coupling < 0:
            raise ValueError("coupling must be >= 0")
        if self.scale <= 0:
            raise ValueError("scale must be > 0")


@dataclass(frozen=True)
class ModelSpec:
    m: float = 1.0
    form_factor: FormFactorSpec = FormFactorSpec()

    def __post_init__(self):
        if self.m <= 0:
            raise ValueError("discrete level m must be > 0")

    @property
    def coupling(self) -> float:
        return self.form_factor.coupling

    def with_coupling(self, coupling: float) -> "ModelSpec":
        ff = self.form_factor
        return ModelSpec(self.m, FormFactorSpec(ff.family, coupling, ff.scale))


def canonical_model(coupling: float = 0.2, family: Family | str = Family.RATIONAL_SQRT) -> ModelSpec:
    """Benchmark model m=1, Λ=1 with the given coupling."""
    return ModelSpec(1.0, FormFactorSpec(Family(family), coupling, 1.0))


def _spec(obj) -> FormFactorSpec:
    return obj.form_factor if isinstance(obj, ModelSpec) else obj


def eval_v(spec, w):
    """Form factor on the real half line; vectorized."""
    spec = _spec(spec)
    w = np.asarray(w, dtype=float)
    if np.any(w < 0):
        raise DomainError("form factor defined for w >= 0 only")
    x = w / spec.scale
    if spec.family is Family.RATIONAL_SQRT:
        out = spec.coupling * np.sqrt(x) / (1 + x * x)
    else:
        out = spec.coupling * np.sqrt(x) * np.exp(-0.5 * x)
    return out if out.ndim else float(out)


def eval_v2(spec, w):
    """``V(w)^2`` on the real axis without the square root (vectorized)."""
    spec = _spec(spec)
    x = np.asarray(w, dtype=float) / spec.scale
    if spec.family is Family.RATIONAL_SQRT:
        out = spec.coupling ** 2 * x / (1 + x * x) ** 2
    else:
        out = spec.coupling ** 2 * x * np.exp(-x)
    return out if out.ndim else float(out)


def _check_poles(spec, z):
    if spec.family is Family.RATIONAL_SQRT:
        x = np.asarray(z, dtype=complex) / spec.scale
        if np.any(np.abs(1 + x * x) == 0):
            raise DomainError("argument at a pole of the form factor (z = ±iΛ)")


def eval_v2_complex(spec, z):
    """Analytic continuation of ``V^2``; single valued for both families."""
    spec = _spec(spec)
    _check_poles(spec, z)
    x = np.asarray(z, dtype=complex) / spec.scale
    if spec.family is Family.RATIONAL_SQRT:
        out = spec.coupling ** 2 * x / (1 + x * x) ** 2
    else:
        out = spec.coupling ** 2 * x * np.exp(-x)
    return out if out.ndim else complex(out)


def eval_v2_deriv_complex(spec, z):
    """Derivative of the continued ``V^2`` with respect to ``z``."""
    spec = _spec(spec)
    _check_poles(spec, z)
    x = np.asarray(z, dtype=complex) / spec.scale
    lam2 = spec.coupling ** 2
    if spec.family is Family.RATIONAL_SQRT:
        out = lam2 * (1 - 3 * x * x) / (1 + x * x) ** 3
    else:
        out = lam2 * (1 - x) * np.exp(-x)
    out = out / spec.scale
    return out if out.ndim else complex(out)


def eval_v_complex(spec, z):
    """Continuation of ``V`` using the principal square root (cut on (-inf, 0])."""
    spec = _spec(spec)
    zz = np.asarray(z, dtype=complex)
    if np.any((zz.imag == 0) & (zz.real <= 0)):
        raise DomainError("form factor continuation has a branch cut on (-inf, 0]")
    _check_poles(spec, zz)
    x = zz / spec.scale
    if spec.family is Family.RATIONAL_SQRT:
        out = spec.coupling * np.sqrt(x) / (1 + x * x)
    else:
        out = spec.coupling * np.sqrt(x) * np.exp(-0.5 * x)
    return out if out.ndim else complex(out)


@dataclass(frozen=True)
class PhysicalState:
    """``|ψ> = c1|1> + ∫ g(w)|w> dw`` with ``g(w) = a w / (w - p)^order``.

    ``Im p > 0`` puts the pole above the axis, so ``g`` is analytic in the
    lower half plane (the φ- family); ``Im p < 0`` gives the φ+ family.
    ``order`` 2 is the default profile; ``order`` 3 has finite mean energy.
    """

    c1: complex = 1.0
    a: complex = 0.0
    p: complex = 1j
    order: int = 2

    def __post_init__(self):
        object.__setattr__(self, "c1", complex(self.c1))
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "p", complex(self.p))
        if self.a != 0 and self.p.imag == 0:
            raise ValueError("profile pole p must be off the real axis")
        if self.order not in (2, 3):
            raise ValueError("profile order must be 2 or 3")

    @property
    def family(self) -> str:
        """'minus' (φ-, analytic below), 'plus' (φ+, analytic above) or 'both'."""
        if self.a == 0:
            return "both"
        return "minus" if self.p.imag > 0 else "plus"

    @property
    def has_continuum(self) -> bool:
        return self.a != 0


def discrete_state(c1: complex = 1.0) -> PhysicalState:
    return PhysicalState(c1=c1, a=0.0)


def eval_state_profile(psi: PhysicalState, w):
    w = np.asarray(w, dtype=float)
    if np.any(w < 0):
        raise DomainError("profile defined for w >= 0 only")
    out = psi.a * w / (w - psi.p) ** psi.order
    return out if out.ndim else complex(out)


def eval_state_profile_complex(psi: PhysicalState, z):
    z = np.asarray(z, dtype=complex)
    if psi.a != 0 and np.any(z == psi.p):
        raise DomainError("profile evaluated at its pole")
    out = psi.a * z / (z - psi.p) ** psi.order
    return out if out.ndim else complex(out)


def eval_state_conj_continuation(psi: PhysicalState, z):
    """``conj(g(conj z))``: the continuation of ``<ψ|w> = conj(g(w))``."""
    z = np.asarray(z, dtype=complex)
    out = np.conj(eval_state_profile_complex(psi, np.conj(z)))
    return out if np.ndim(out) else complex(out)


def continuum_norm2(psi: PhysicalState, tol: Tolerances = DEFAULT_TOL) -> float:
    if psi.a == 0:
        return 0.0
    res = integrate_semi_infinite(lambda w: np.abs(eval_state_profile(psi, w)) ** 2, tol,
                                  breakpoints=(max(psi.p.real, 0.0) + abs(psi.p.imag),),
                                  scale=max(abs(psi.p), 1e-3))
    return float(res.value.real)


def state_norm2(psi: PhysicalState, tol: Tolerances = DEFAULT_TOL) -> float:
    """``|c1|^2 + ∫|g|^2``."""
    return abs(psi.c1) ** 2 + continuum_norm2(psi, tol)

