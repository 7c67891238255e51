"""Spectral amplitudes, exact decay, Gamov/background split, observables.

Time evolution uses the outgoing Lipmann-Schwinger basis ``|w+>``:

    <w+|ψ> = g(w) + V(w)/η(w - i0) [c1 - ∫ V(w') g(w') dw'/(w' - w + i0)]
    <1|w+> = V(w)/η(w + i0)
    <w|w'+> = δ(w - w') - V(w) V(w') / (η(w' + i0) (w - w' - i0))

with every ``i0`` kernel split into a principal value and a delta term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .eta import BoundarySide, Sheet, eta, eta_boundary, spectral_density
from .model import (
    ModelSpec,
    PhysicalState,
    eval_state_profile,
    eval_v,
    eval_v2,
    eval_v2_complex,
    state_norm2,
)
from .numerics import (
    DEFAULT_TOL,
    DomainError,
    Tolerances,
    integrate_semi_infinite,
    oscillatory_integral,
    principal_value,
)
from .resonance import Resonance, seed_pole


def omega_cut(model: ModelSpec) -> float:
    return 50.0 * max(model.m, model.form_factor.scale)


@dataclass(frozen=True)
class SpectralAmplitude:
    grid: np.ndarray
    values: np.ndarray
    model: ModelSpec

    def __post_init__(self):
        if np.any(np.diff(self.grid) <= 0) or self.grid[0] <= 0:
            raise ValueError("grid must be strictly increasing and positive")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("spectral amplitude has non-finite values")


@dataclass(frozen=True)
class DecayRecord:
    times: np.ndarray
    survival: np.ndarray
    gamov_term: np.ndarray
    background: np.ndarray

    @property
    def p1(self) -> np.ndarray:
        return np.abs(self.survival) ** 2

    @property
    def split_residual(self) -> np.ndarray:
        return np.abs(self.survival - self.gamov_term - self.background)


def default_grid(model: ModelSpec, points: int = 4000) -> np.ndarray:
    """Log-spaced reporting grid on [1e-3 m, 50 max(m, Λ)]."""
    return np.geomspace(1e-3 * model.m, omega_cut(model), points)


def _vg_pv(model, psi, w, tol):
    """``P∫ V(w') g(w')/(w' - w) dw'`` for the state profile (vectorized)."""
    def f(x):
        return eval_v(model, x) * eval_state_profile(psi, x)
    return principal_value(f, w, tol).value


def ls_amplitude(model: ModelSpec, psi: PhysicalState, w, tol: Tolerances = DEFAULT_TOL, eta_above=None):
    """``<w+|ψ>`` at ``w > 0`` (vectorized).

    ``1/(w' - w + i0) = P 1/(w' - w) - iπ δ(w' - w)``, so the bracket is
    ``c1 - P∫V g/(w' - w) + iπ V(w) g(w)``.
    """
    w_arr = np.atleast_1d(np.asarray(w, dtype=float))
    if np.any(w_arr <= 0):
        raise DomainError("spectral amplitude needs w > 0")
    if model.coupling == 0:
        # Free continuum: |1> is a bound state and drops out of <w+|.
        out = eval_state_profile(psi, w_arr) if psi.has_continuum else np.zeros(w_arr.shape, dtype=complex)
        return out if np.ndim(w) else complex(out[0])
    v = eval_v(model, w_arr)
    if eta_above is None:
        eta_above = eta_boundary(model, w_arr, BoundarySide.ABOVE, tol)
    eta_below = np.conj(eta_above)
    bracket = np.full(w_arr.shape, psi.c1, dtype=complex)
    g = np.zeros(w_arr.shape, dtype=complex)
    if psi.has_continuum:
        g = eval_state_profile(psi, w_arr)
        bracket = bracket - _vg_pv(model, psi, w_arr, tol) + 1j * math.pi * v * g
    out = g + v / eta_below * bracket
    return out if np.ndim(w) else complex(out[0])


def spectral_amplitude(model: ModelSpec, psi: PhysicalState, grid=None, tol: Tolerances = DEFAULT_TOL) -> SpectralAmplitude:
    grid = default_grid(model) if grid is None else np.asarray(grid, dtype=float)
    return SpectralAmplitude(grid, ls_amplitude(model, psi, grid, tol), model)


def _profile_breaks(model, psi):
    pts = {model.m, model.form_factor.scale}
    if psi.has_continuum:
        pts.add(abs(psi.p))
    return tuple(sorted(pts))


def parseval_check(model: ModelSpec, psi: PhysicalState, tol: Tolerances = DEFAULT_TOL):
    """``(∫|<w+|ψ>|^2 dw, |c1|^2 + ∫|g|^2 dw)``; completeness makes them equal."""
    lhs = integrate_semi_infinite(lambda w: np.abs(ls_amplitude(model, psi, w, tol)) ** 2, tol,
                                  breakpoints=_profile_breaks(model, psi)).value
    return float(lhs.real), float(state_norm2(psi, tol))


def sum_rules(model: ModelSpec, tol: Tolerances = DEFAULT_TOL):
    """``(∫ V^2/|η+|^2 dw, ∫ w V^2/|η+|^2 dw)``; expected ``(1, m)``."""
    def f(w):
        rho = spectral_density(model, w, tol)
        return np.stack([rho, w * rho], axis=-1)
    val = integrate_semi_infinite(f, tol, breakpoints=(model.m, model.form_factor.scale)).value
    return float(val[0].real), float(val[1].real)


_TIME_CHUNK = 16


def survival_amplitude(model: ModelSpec, t, tol: Tolerances = DEFAULT_TOL):
    """``A(t) = <1|exp(-iHt)|1> = ∫ V^2 exp(-iwt)/|η(w+i0)|^2 dw``; ``t`` may be an array."""
    if model.coupling == 0:
        out = np.exp(-1j * model.m * np.asarray(t, dtype=float))
        return out if np.ndim(t) else complex(out)
    ts = np.asarray(t, dtype=float)
    if ts.ndim == 0:
        return oscillatory_integral(lambda w: spectral_density(model, w, tol), float(ts), tol,
                                    cutoff=omega_cut(model), breakpoints=(model.m,)).value
    # Times are batched in sorted chunks so each chunk gets panels matched to its own t_max.
    flat = ts.ravel()
    order = np.argsort(np.abs(flat))
    out = np.empty(flat.size, dtype=complex)
    for start in range(0, flat.size, _TIME_CHUNK):
        idx = order[start:start + _TIME_CHUNK]
        out[idx] = oscillatory_integral(lambda w: spectral_density(model, w, tol), flat[idx], tol,
                                        cutoff=omega_cut(model), breakpoints=(model.m,)).value
    return out.reshape(ts.shape)


def gamov_background_split(model: ModelSpec, res: Resonance, t, tol: Tolerances = DEFAULT_TOL):
    """Pole term ``exp(-i z0 t)/η+'(z0)`` and the real-axis background.

    background = ∫ exp(-iwt) V^2/(η+ η-) dw + 2πi exp(-i z0 t) V^2(z0)/(η+'(z0) η-(z0)),
    the second term being the correction carried by the distribution 1/η̃+.
    """
    ts = np.asarray(t, dtype=float)
    if np.any(ts < 0):
        raise DomainError("the pole/background split is the t >= 0 semigroup expansion")
    phase = np.exp(-1j * res.z0 * ts)
    gamov = phase / res.eta_plus_deriv
    eta_minus_z0 = eta(model, res.z0, Sheet.MINUS, tol)
    real_axis = survival_amplitude(model, ts, tol)
    correction = 2j * math.pi * phase * eval_v2_complex(model, res.z0) / (res.eta_plus_deriv * eta_minus_z0)
    background = real_axis + correction
    if np.ndim(t) == 0:
        return complex(gamov), complex(background)
    return gamov, background


def background_rotated(model: ModelSpec, res: Resonance, t: float, angle: float = math.pi / 4,
                       tol: Tolerances = DEFAULT_TOL) -> complex:
    """Background by rotating the contour to the ray ``w = r exp(-i angle)``.

    ``A(t) - pole = ∫_ray exp(-izt) V^2(z)/(η(z) η+(z)) dz``; the ray must pass
    below the pole and above the form-factor singularity at ``-iΛ``.
    """
    if t <= 0:
        raise DomainError("contour rotation needs t > 0")
    direction = np.exp(-1j * angle)
    if not -angle < math.atan2(res.z0.imag, res.z0.real) < 0:
        raise DomainError("ray does not enclose the pole")

    def f(r):
        z = r * direction
        out = np.empty(r.shape, dtype=complex)
        for i, zi in enumerate(z):
            first = eta(model, zi, Sheet.FIRST, tol)
            plus = first + 2j * math.pi * eval_v2_complex(model, zi)
            out[i] = np.exp(-1j * zi * t) * eval_v2_complex(model, zi) / (first * plus)
        return out * direction

    return complex(integrate_semi_infinite(f, tol, breakpoints=(abs(res.z0),), scale=1.0 / t).value)


def decay_record(model: ModelSpec, res: Resonance, times, tol: Tolerances = DEFAULT_TOL) -> DecayRecord:
    times = np.asarray(times, dtype=float)
    survival = np.atleast_1d(survival_amplitude(model, times, tol))
    gamov, background = gamov_background_split(model, res, times, tol)
    return DecayRecord(times, survival, np.atleast_1d(gamov), np.atleast_1d(background))


# Fixed composite Gauss-Legendre grid used for Schrödinger-picture amplitudes.

_SOURCE_ORDER = 16
_TARGET_ORDER = 17


def _gl(order):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def _panel_edges(center: float, width: float, t_max: float, cut: float, knee: float):
    """Panel edges on [0, cut]: geometric toward 0, fine around the resonance,
    and wider panels beyond ``knee`` that still resolve ``exp(-iwt)`` for ``t <= t_max``."""
    base = min(0.25, 6.0 / max(t_max, 1e-9))
    far = min(1.0, 10.0 / max(t_max, 1e-9))
    fine = min(width, base)
    near0 = min(0.05, center / 4, base)
    edges = [0.0] + list(near0 * 0.5 ** np.arange(30, -1, -1))
    lo_res = max(center - 40 * width, near0)
    hi_res = min(center + 40 * width, knee)
    pieces = [(near0, lo_res, base), (lo_res, hi_res, fine), (hi_res, knee, base), (knee, cut, far)]
    for lo, hi, step in pieces:
        if hi > lo:
            edges += list(np.linspace(lo, hi, max(1, math.ceil((hi - lo) / step)) + 1)[1:])
    return np.unique(np.asarray(edges))


def _nodes_for(edges, cut, order):
    """Nodes, weights and tail coordinates ``u`` (NaN on [0, cut]) for one GL order."""
    x, w = _gl(order)
    lo, hi = edges[:-1], edges[1:]
    half = 0.5 * (hi - lo)
    nodes = (0.5 * (lo + hi))[:, None] + half[:, None] * x[None, :]
    weights = half[:, None] * w[None, :]
    # Tail [cut, inf) through w = cut + cut u/(1-u), panels graded toward u = 1.
    u_edges = np.concatenate([[0.0], 1.0 - 0.5 ** np.arange(1, 40)])
    ulo, uhi = u_edges[:-1], u_edges[1:]
    uhalf = 0.5 * (uhi - ulo)
    u = ((0.5 * (ulo + uhi))[:, None] + uhalf[:, None] * x[None, :]).ravel()
    uw = (uhalf[:, None] * w[None, :]).ravel()
    tail_nodes = cut + cut * u / (1 - u)
    tail_weights = uw * cut / (1 - u) ** 2
    return (np.concatenate([nodes.ravel(), tail_nodes]),
            np.concatenate([weights.ravel(), tail_weights]),
            np.concatenate([np.full(nodes.size, np.nan), u]),
            np.concatenate([np.full(nodes.size, np.nan), uw]))


@dataclass
class SpectralGrid:
    """Two interlaced Gauss-Legendre node sets on [0, ∞) with cached amplitudes.

    Sources carry the precomputed ``η(w+i0)`` and ``<w+|ψ>`` used inside the
    ``w'`` integrals; targets are where ``<w|ψ_t>`` is evaluated and integrated.
    """

    model: ModelSpec
    psi: PhysicalState
    t_max: float
    cut: float
    src: np.ndarray = field(repr=False)
    src_w: np.ndarray = field(repr=False)
    src_u: np.ndarray = field(repr=False)
    src_uw: np.ndarray = field(repr=False)
    tgt: np.ndarray = field(repr=False)
    tgt_w: np.ndarray = field(repr=False)
    src_eta: np.ndarray = field(repr=False)
    src_amp: np.ndarray = field(repr=False)
    tgt_eta: np.ndarray = field(repr=False)
    tgt_amp: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, model: ModelSpec, psi: PhysicalState, t_max: float = 20.0, res: Resonance | None = None,
              tol: Tolerances = DEFAULT_TOL) -> "SpectralGrid":
        if model.coupling > 0:
            z = res.z0 if res is not None else seed_pole(model, tol)
            center, width = z.real, max(abs(z.imag), 1e-4)
        else:
            center, width = model.m, 0.05
        if psi.has_continuum:
            width = min(width, abs(psi.p.imag))
        knee = omega_cut(model)
        # Continuum profiles decay only like 1/w; resolve their oscillating cross terms further out.
        # Either way the cut lies past the reporting range, so reporting points are interior.
        cut = 8 * knee if psi.has_continuum else 1.25 * knee
        edges = _panel_edges(center, width, t_max, cut, knee)
        src, src_w, src_u, src_uw = _nodes_for(edges, cut, _SOURCE_ORDER)
        tgt, tgt_w, _, _ = _nodes_for(edges, cut, _TARGET_ORDER)
        src_eta = eta_boundary(model, src, BoundarySide.ABOVE, tol)
        tgt_eta = eta_boundary(model, tgt, BoundarySide.ABOVE, tol)
        return cls(model, psi, t_max, cut, src, src_w, src_u, src_uw, tgt, tgt_w, src_eta,
                   ls_amplitude(model, psi, src, tol, eta_above=src_eta),
                   tgt_eta, ls_amplitude(model, psi, tgt, tol, eta_above=tgt_eta))

    def h_source(self, t: float) -> np.ndarray:
        """``V(w) exp(-iwt) <w+|ψ>/η(w+i0)`` on the source nodes."""
        return eval_v(self.model, self.src) * np.exp(-1j * self.src * t) * self.src_amp / self.src_eta

    def h_at(self, w, eta_above, amp, t: float) -> np.ndarray:
        return eval_v(self.model, w) * np.exp(-1j * w * t) * amp / eta_above


@dataclass(frozen=True)
class EvolvedState:
    t: float
    c1: complex
    omega: np.ndarray
    b: np.ndarray
    weights: np.ndarray | None

    def continuum_norm2(self) -> float:
        if self.weights is None:
            raise ValueError("amplitudes were evaluated off the quadrature grid")
        return float(np.sum(self.weights * np.abs(self.b) ** 2))

    def norm2(self) -> float:
        return abs(self.c1) ** 2 + self.continuum_norm2()


def _pv_on_grid(grid: SpectralGrid, h_src, targets, h_tgt, chunk=512):
    """``P∫_0^∞ h(w')/(w' - w) dw'`` from values on the fixed source nodes.

    The singular part is subtracted on the piece containing ``w``: on [0, cut]
    the constant ``h(w)`` with ``h(w) log((cut-w)/w)`` added back; on the tail,
    in the variable ``u`` of ``w = cut + cut u/(1-u)``, where the kernel becomes
    ``(1-u_w)/((u-u_w)(1-u))``.
    """
    inside = grid.src <= grid.cut
    s_in, w_in, h_in = grid.src[inside], grid.src_w[inside], h_src[inside]
    s_out, w_out, h_out = grid.src[~inside], grid.src_w[~inside], h_src[~inside]
    u_out, uw_out = grid.src_u[~inside], grid.src_uw[~inside]
    out = np.empty(targets.shape, dtype=complex)
    for start in range(0, targets.size, chunk):
        x = targets[start:start + chunk]
        hx = h_tgt[start:start + chunk]
        val = np.zeros(x.shape, dtype=complex)
        near = x <= grid.cut
        if np.any(near):
            xn, hn = x[near], hx[near]
            sub = (h_in[None, :] - hn[:, None]) / (s_in[None, :] - xn[:, None])
            v = sub @ w_in + hn * np.log((grid.cut - xn) / xn)
            v += (h_out[None, :] / (s_out[None, :] - xn[:, None])) @ w_out
            val[near] = v
        if np.any(~near):
            xf, hf = x[~near], hx[~near]
            uf = (xf - grid.cut) / xf
            weight = (1 - uf[:, None]) / (1 - u_out[None, :])
            big = h_out[None, :] * weight
            sub = (big - hf[:, None]) / (u_out[None, :] - uf[:, None])
            v = sub @ uw_out + hf * np.log((1 - uf) / uf)
            v += (h_in[None, :] / (s_in[None, :] - xf[:, None])) @ w_in
            val[~near] = v
        out[start:start + chunk] = val
    return out


def evolve_state(model: ModelSpec, psi: PhysicalState, t: float, omega=None, grid: SpectralGrid | None = None,
                 tol: Tolerances = DEFAULT_TOL) -> EvolvedState:
    """``(<1|ψ_t>, <w|ψ_t>)`` in the Schrödinger picture.

    ``<w|ψ_t> = exp(-iwt)<w+|ψ> + V(w) [P∫ h(w')/(w'-w) dw' - iπ h(w)]`` with
    ``h(w') = V(w') exp(-iw't) <w'+|ψ>/η(w'+i0)``; ``<1|ψ_t> = ∫ h``.
    With ``omega=None`` the amplitudes are returned on the grid's target nodes
    together with quadrature weights.
    """
    if grid is None:
        grid = SpectralGrid.build(model, psi, max(t, 1.0), tol=tol)
    if omega is None:
        w, eta_t, amp_t, weights = grid.tgt, grid.tgt_eta, grid.tgt_amp, grid.tgt_w
    else:
        w = np.asarray(omega, dtype=float)
        if np.any(w >= grid.cut):
            raise DomainError("amplitudes off the grid are only available on (0, cut)")
        eta_t = eta_boundary(model, w, BoundarySide.ABOVE, tol)
        amp_t = ls_amplitude(model, psi, w, tol, eta_above=eta_t)
        weights = None
    h_src = grid.h_source(t)
    c1 = complex(np.sum(grid.src_w * h_src))
    h_tgt = grid.h_at(w, eta_t, amp_t, t)
    pv = _pv_on_grid(grid, h_src, w, h_tgt)
    b = np.exp(-1j * w * t) * amp_t + eval_v(model, w) * (pv - 1j * math.pi * h_tgt)
    return EvolvedState(t, c1, w, b, weights)


@dataclass(frozen=True)
class ObservableSpec:
    """``A = A1|1><1| + ∫A_w|w><w| + ∫A_1w|1><w| + ∫A_w1|w><1| + ∫∫a(w')β(w)|w'><w|``."""

    a1: complex = 0.0
    diagonal: Callable | None = None
    one_omega: Callable | None = None
    omega_one: Callable | None = None
    separable: tuple | None = None

    def __post_init__(self):
        if self.separable is not None and len(self.separable) != 2:
            raise ValueError("separable kernel must be a pair (a, beta)")


class UnsupportedObservable(ValueError):
    pass


def identity_observable() -> ObservableSpec:
    return ObservableSpec(a1=1.0, diagonal=lambda w: np.ones_like(w))


def hamiltonian_observable(model: ModelSpec) -> ObservableSpec:
    return ObservableSpec(a1=model.m, diagonal=lambda w: w,
                          one_omega=lambda w: eval_v(model, w), omega_one=lambda w: eval_v(model, w))


def level_projector() -> ObservableSpec:
    return ObservableSpec(a1=1.0)


def mean_from_state(obs: ObservableSpec, state: EvolvedState) -> complex:
    if state.weights is None:
        raise ValueError("observable means need amplitudes on the quadrature grid")
    w, b, q = state.omega, state.b, state.weights
    out = obs.a1 * abs(state.c1) ** 2
    if obs.diagonal is not None:
        out += np.sum(q * obs.diagonal(w) * np.abs(b) ** 2)
    if obs.one_omega is not None:
        out += state.c1.conjugate() * np.sum(q * obs.one_omega(w) * b)
    if obs.omega_one is not None:
        out += state.c1 * np.sum(q * obs.omega_one(w) * np.conj(b))
    if obs.separable is not None:
        left, right = obs.separable
        out += np.sum(q * left(w) * np.conj(b)) * np.sum(q * right(w) * b)
    return complex(out)


def invariant_mean(obs: ObservableSpec, grid: SpectralGrid, t: float = 0.0) -> float:
    """``<ψ_t|A_I|ψ_t> = ∫ A_w |<w+|ψ_t>|^2 dw``; ``<w+|ψ_t> = exp(-iwt)<w+|ψ>``."""
    if obs.diagonal is None:
        return 0.0
    amp = np.exp(-1j * grid.tgt * t) * grid.tgt_amp
    return float(np.sum(grid.tgt_w * obs.diagonal(grid.tgt) * np.abs(amp) ** 2))


def observable_mean(model: ModelSpec, res: Resonance, obs: ObservableSpec, psi: PhysicalState, t,
                    grid: SpectralGrid | None = None, tol: Tolerances = DEFAULT_TOL):
    """``(<A>_t, <A_I>_t)`` for each time; the invariant part is time independent."""
    if not isinstance(obs, ObservableSpec):
        raise UnsupportedObservable("observable must be diagonal + separable (ObservableSpec)")
    if psi.family == "plus":
        raise DomainError("mean values are expanded for states of the φ- family")
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(ts < 0):
        raise DomainError("observable evolution is computed for t >= 0")
    if grid is None:
        grid = SpectralGrid.build(model, psi, max(float(ts.max()), 1.0), res=res, tol=tol)
    means = np.array([mean_from_state(obs, evolve_state(model, psi, float(ti), grid=grid, tol=tol)) for ti in ts])
    invariant = np.array([invariant_mean(obs, grid, float(ti)) for ti in ts])
    if np.ndim(t) == 0:
        return complex(means[0]), float(invariant[0])
    return means, invariant


@dataclass(frozen=True)
class WeakCouplingRow:
    t: float
    p1: float
    p1_approx: float
    buildup: float
    buildup_approx: float


def _window_edges(center, width, lo, hi, t_max):
    """Panels of half a line width at the peak, growing by 1.2 per panel up to two beat periods."""
    cap = 4 * math.pi / max(t_max, 1e-9)
    h0 = min(0.5 * width, cap)
    c = min(max(center, lo), hi)
    right, left = [c], [c]
    h = h0
    while right[-1] < hi:
        right.append(min(right[-1] + h, hi))
        h = min(1.2 * h, cap)
    h = h0
    while left[-1] > lo:
        left.append(max(left[-1] - h, lo))
        h = min(1.2 * h, cap)
    return np.unique(np.array(left[::-1] + right[1:]))


def weak_coupling_report(model: ModelSpec, res: Resonance, t_grid, window: float,
                         tol: Tolerances = DEFAULT_TOL) -> list[WeakCouplingRow]:
    """Level population and windowed radiation buildup vs the weak-coupling laws.

    ``P1(t) ≈ exp(-2πV(m)^2 t)`` and
    ``∫_{m-window}^{m+window} |<w|ψ_t>|^2 - |<w|ψ_0>|^2 dw ≈ 1 - exp(-2πV(m)^2 t)``.
    """
    psi = PhysicalState(c1=1.0)
    t_grid = np.asarray(t_grid, dtype=float)
    rate = 2 * math.pi * eval_v2(model, model.m)
    grid = SpectralGrid.build(model, psi, max(float(t_grid.max()), 1.0), res=res, tol=tol)
    lo, hi = max(model.m - window, 1e-9), model.m + window
    x, wts = _gl(_TARGET_ORDER)
    edges = _window_edges(res.z0.real, abs(res.z0.imag), lo, hi, float(t_grid.max()))
    half = 0.5 * np.diff(edges)
    omega = ((0.5 * (edges[:-1] + edges[1:]))[:, None] + half[:, None] * x[None, :]).ravel()
    q = (half[:, None] * wts[None, :]).ravel()
    initial = evolve_state(model, psi, 0.0, omega=omega, grid=grid, tol=tol)
    base = float(np.sum(q * np.abs(initial.b) ** 2))
    rows = []
    for t in t_grid:
        state = evolve_state(model, psi, float(t), omega=omega, grid=grid, tol=tol)
        p1 = abs(state.c1) ** 2
        buildup = float(np.sum(q * np.abs(state.b) ** 2)) - base
        rows.append(WeakCouplingRow(float(t), p1, math.exp(-rate * t), buildup, 1 - math.exp(-rate * t)))
    return rows


def delta_concentration_check(model: ModelSpec, f: Callable, couplings, tol: Tolerances = DEFAULT_TOL):
    """``[(λ, ∫ f V^2/|η+|^2 dw)]``: the weight concentrates to ``δ(w - m)`` as λ → 0."""
    rows = []
    for lam in couplings:
        mdl = model.with_coupling(lam)
        val = integrate_semi_infinite(lambda w: f(w) * spectral_density(mdl, w, tol), tol,
                                      breakpoints=(mdl.m, mdl.form_factor.scale)).value
        rows.append((float(lam), float(np.real(val))))
    return rows


def fit_decay_rate(times, p1) -> float:
    """Least-squares slope of ``log P1`` (returned as a positive rate)."""
    slope = np.polyfit(np.asarray(times, dtype=float), np.log(np.asarray(p1, dtype=float)), 1)[0]
    return float(-slope)
