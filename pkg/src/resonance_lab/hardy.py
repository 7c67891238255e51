"""Paley-Wiener support tests, the time inversion K, and the semigroup direction.

Convention: ``ĝ(s) = ∫ g(w) exp(-i w s) dw``.  A function analytic and square
integrable in the lower half plane (H²₋) has ``ĝ(s) = 0`` for ``s > 0``;
multiplying by ``exp(-iwt)`` shifts ``ĝ(s) -> ĝ(s + t)``, so ``t > 0`` keeps the
support on ``s <= 0`` while ``t < 0`` pushes it across.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .model import PhysicalState, eval_state_profile_complex

DEFAULT_SAMPLES = 2 ** 16
DEFAULT_SPAN = 200.0
MEMBER_THRESHOLD = 1e-6
NON_MEMBER_THRESHOLD = 1e-2


class GridFormatError(ValueError):
    """Sample grid not uniform or not symmetric about zero."""


class FamilyError(ValueError):
    """State not in the family the check requires."""


@dataclass(frozen=True)
class SupportReport:
    total_mass: float
    positive_side_mass: float
    ratio: float
    sample_count: int
    sample_spacing: float
    truncated: bool = False


def symmetric_grid(span: float = DEFAULT_SPAN, samples: int = DEFAULT_SAMPLES) -> np.ndarray:
    return np.linspace(-span, span, samples)


def _check_grid(w):
    if w.ndim != 1 or w.size < 4:
        raise GridFormatError("need a one-dimensional grid with at least 4 samples")
    d = np.diff(w)
    h = float(d.mean())
    if h <= 0 or np.max(np.abs(d - h)) > 1e-9 * h:
        raise GridFormatError("grid spacing is not uniform")
    if np.max(np.abs(w + w[::-1])) > 1e-9 * h:
        raise GridFormatError("grid is not symmetric about zero")
    return h


def paley_wiener_mass(w, g) -> SupportReport:
    """Fraction of ``∫|ĝ(s)|^2 ds`` on ``s > 0`` (the ``s = 0`` bin is split evenly)."""
    w = np.asarray(w, dtype=float)
    g = np.asarray(g, dtype=complex)
    if g.shape != w.shape:
        raise GridFormatError("samples and grid differ in shape")
    h = _check_grid(w)
    n = w.size
    peak = float(np.max(np.abs(g)))
    if peak == 0:
        raise ValueError("zero function has no support")
    truncated = max(abs(g[0]), abs(g[-1])) >= 1e-6 * peak
    # |ĝ(s_k)| = h |fft(g)_k| at s_k = 2π fftfreq; the grid offset only adds a phase.
    mass = (h * np.abs(np.fft.fft(g))) ** 2
    s = 2 * np.pi * np.fft.fftfreq(n, h)
    ds = 2 * np.pi / (n * h)
    total = float(mass.sum() * ds)
    positive = float((mass[s > 0].sum() + 0.5 * mass[s == 0].sum()) * ds)
    return SupportReport(total, positive, positive / total, n, h, bool(truncated))


def time_reverse(psi: PhysicalState) -> PhysicalState:
    """K: complex conjugation in the {|1>, |w>} basis; swaps the φ- and φ+ families."""
    return PhysicalState(c1=psi.c1.conjugate(), a=psi.a.conjugate(), p=psi.p.conjugate(), order=psi.order)


@dataclass(frozen=True)
class DirectionReport:
    times: np.ndarray
    ratios: np.ndarray
    reports: list = field(repr=False)

    @property
    def forward_ok(self) -> bool:
        fwd = self.ratios[self.times >= 0]
        return bool(np.all(fwd < MEMBER_THRESHOLD))

    @property
    def backward_leaks(self) -> bool:
        back = self.ratios[self.times < 0]
        return bool(back.size == 0 or np.all(back > NON_MEMBER_THRESHOLD))

    @property
    def verdict(self) -> bool:
        return self.forward_ok and self.backward_leaks


def semigroup_direction_check(profile: PhysicalState | Callable, times, span: float = DEFAULT_SPAN,
                              samples: int = DEFAULT_SAMPLES) -> DirectionReport:
    """Support ratio of ``exp(-iwt) g(w)`` for each ``t``.

    ``profile`` is a φ- family state (its rational profile is sampled on the
    whole line) or a callable already known to be analytic below the axis.
    """
    if isinstance(profile, PhysicalState):
        if profile.family != "minus":
            raise FamilyError("direction check needs a φ- family state (Im p > 0)")
        fn = lambda w: eval_state_profile_complex(profile, w)  # noqa: E731
    else:
        fn = profile
    w = symmetric_grid(span, samples)
    g = np.asarray(fn(w), dtype=complex)
    ts = np.atleast_1d(np.asarray(times, dtype=float))
    reports = [paley_wiener_mass(w, np.exp(-1j * w * t) * g) for t in ts]
    return DirectionReport(ts, np.array([r.ratio for r in reports]), reports)
