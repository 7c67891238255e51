"""Quadrature and root-finding kernels.

All integrands are *vectorized*: ``f(x)`` receives a 1-D array of abscissae
and returns an array whose leading axis matches ``x``.  Any trailing axes are
treated as a batch of independent integrals that share one panel layout
(error control uses the max norm over the batch).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Gauss-Kronrod 21-point rule on [-1, 1] (QUADPACK qk21 constants).
_XK = np.array([
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
])
_WK = np.array([
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WK[:-1], _WK[::-1]])
# Gauss nodes are the odd-indexed Kronrod nodes.
GAUSS_INDEX = np.array([1, 3, 5, 7, 9, 11, 13, 15, 17, 19])
GAUSS_WEIGHTS = np.concatenate([_WG, _WG[::-1]])


class NumericalFailure(RuntimeError):
    """Quadrature or linear algebra did not reach the requested accuracy."""

    def __init__(self, message, best=None, error=None):
        super().__init__(message)
        self.best = best
        self.error = error


class DomainError(ValueError):
    """Argument outside the domain where the quantity is defined."""


class RootFailure(NumericalFailure):
    """Newton iteration diverged or ran out of iterations."""

    def __init__(self, message, trail=()):
        super().__init__(message, best=trail[-1] if trail else None)
        self.trail = list(trail)


class WrongSheetError(RootFailure):
    pass


@dataclass(frozen=True)
class Tolerances:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_subdivisions: int = 20000
    root_tol: float = 1e-12
    max_iterations: int = 50

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "max_subdivisions", "root_tol", "max_iterations"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.rel_tol >= 1:
            raise ValueError("rel_tol must be < 1")

    def scaled(self, factor: float) -> "Tolerances":
        """Same settings with quadrature tolerances multiplied by ``factor``."""
        return Tolerances(self.rel_tol * factor, self.abs_tol * factor,
                          self.max_subdivisions, self.root_tol, self.max_iterations)


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class QuadratureResult:
    value: complex | np.ndarray
    error_estimate: float
    evaluations: int


def _gk_panels(g, lo, hi):
    """Apply the 21-point rule on every panel [lo_i, hi_i] in one call to g."""
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = center[:, None] + half[:, None] * NODES[None, :]
    vals = np.asarray(g(x.ravel()))
    if not np.all(np.isfinite(vals)):
        raise NumericalFailure("integrand returned non-finite values")
    vals = vals.reshape((lo.size, NODES.size) + vals.shape[1:])
    extra = (1,) * (vals.ndim - 2)
    h = half.reshape((-1,) + extra)
    kron = h * np.tensordot(KRONROD_WEIGHTS, vals, axes=(0, 1))
    gauss = h * np.tensordot(GAUSS_WEIGHTS, vals[:, GAUSS_INDEX], axes=(0, 1))
    return kron, np.abs(kron - gauss)


def _adaptive(g, edges, tol: Tolerances):
    """Globally adaptive panel bisection; returns (value, error, evaluations)."""
    edges = np.asarray(edges, dtype=float)
    lo, hi = edges[:-1].copy(), edges[1:].copy()
    kron, err = _gk_panels(g, lo, hi)
    evaluations = lo.size * NODES.size
    bisections = 0
    while True:
        total = kron.sum(axis=0)
        err_total = err.sum(axis=0)
        target = np.maximum(tol.abs_tol, tol.rel_tol * np.abs(total))
        if np.all(err_total <= target):
            break
        score = (err / target).reshape(lo.size, -1).max(axis=1)
        split = score > 1.0 / lo.size
        width_ok = (hi - lo) > 64 * np.finfo(float).eps * np.maximum(1.0, np.abs(lo))
        split &= width_ok
        n_split = int(split.sum())
        if n_split == 0 or bisections + n_split > tol.max_subdivisions:
            worst = float(np.max(err_total))
            raise NumericalFailure(
                f"quadrature did not converge after {bisections} subdivisions "
                f"(achieved error {worst:.3e})",
                best=total, error=worst)
        mid = 0.5 * (lo[split] + hi[split])
        new_lo = np.concatenate([lo[split], mid])
        new_hi = np.concatenate([mid, hi[split]])
        k_new, e_new = _gk_panels(g, new_lo, new_hi)
        evaluations += new_lo.size * NODES.size
        bisections += n_split
        keep = ~split
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        kron = np.concatenate([kron[keep], k_new])
        err = np.concatenate([err[keep], e_new])
        order = np.argsort(lo, kind="stable")
        lo, hi, kron, err = lo[order], hi[order], kron[order], err[order]
    value = kron.sum(axis=0)
    error = float(np.max(err.sum(axis=0)))
    if np.ndim(value) == 0:
        value = complex(value)
    return value, error, evaluations


def _semi_infinite_map(a, scale):
    def to_x(u):
        return a + scale * u / (1.0 - u)

    def jac(u):
        return scale / (1.0 - u) ** 2

    def to_u(x):
        return (x - a) / (scale + x - a)

    return to_x, jac, to_u


def _broadcast_jac(vals, jac):
    vals = np.asarray(vals)
    return vals * jac.reshape((-1,) + (1,) * (vals.ndim - 1))


def integrate(f, a, b, tol: Tolerances = DEFAULT_TOL, breakpoints=(), scale=1.0) -> QuadratureResult:
    """Adaptive Gauss-Kronrod integral of ``f`` over [a, b]; ``b`` may be ``inf``.

    The semi-infinite case uses ``x = a + scale*u/(1-u)`` on ``u`` in [0, 1).
    """
    breaks = sorted(float(p) for p in breakpoints if a < p < b)
    if math.isinf(b):
        to_x, jac, to_u = _semi_infinite_map(a, scale)

        def g(u):
            return _broadcast_jac(f(to_x(u)), jac(u))

        edges = [0.0] + [to_u(p) for p in breaks] + [1.0]
        value, error, n = _adaptive(g, edges, tol)
    else:
        value, error, n = _adaptive(f, [a] + breaks + [b], tol)
    return QuadratureResult(value, error, n)


def integrate_semi_infinite(f, tol: Tolerances = DEFAULT_TOL, breakpoints=(), scale=1.0) -> QuadratureResult:
    """Integral of ``f`` over (0, inf)."""
    return integrate(f, 0.0, math.inf, tol, breakpoints, scale)


def cauchy_integral(f, z, tol: Tolerances = DEFAULT_TOL, breakpoints=()) -> QuadratureResult:
    """``∫_0^∞ f(w)/(w - z) dw`` for ``z`` off the half line [0, ∞).

    For ``Re z > 0`` the near-singular part ``f(Re z)/(w - z)`` is subtracted on
    [0, 2 Re z] and its logarithmic integral added back in closed form.
    """
    z = complex(z)
    if z.imag == 0.0 and z.real >= 0.0:
        raise DomainError(f"z = {z} lies on the cut [0, inf)")
    x = z.real
    if x <= 0.0 or abs(z.imag) > x:
        return integrate_semi_infinite(lambda w: f(w) / (w - z), tol, breakpoints)
    fx = complex(np.asarray(f(np.array([x])))[0])
    near = integrate(lambda w: (f(w) - fx) / (w - z), 0.0, 2 * x, tol,
                     tuple(breakpoints) + (x,))
    far = integrate(lambda w: f(w) / (w - z), 2 * x, math.inf, tol, breakpoints, scale=max(x, 1.0))
    log_part = fx * (np.log(2 * x - z) - np.log(-z))
    return QuadratureResult(near.value + far.value + log_part,
                            near.error_estimate + far.error_estimate,
                            near.evaluations + far.evaluations + 1)


def principal_value(f, x, tol: Tolerances = DEFAULT_TOL, chunk: int = 2048) -> QuadratureResult:
    """``P∫_0^∞ f(w)/(w - x) dw`` for ``x > 0``; ``x`` may be an array (batched).

    Symmetric subtraction on [0, 2x]: with ``w = x(1 ± s)`` the singular part
    cancels, leaving ``∫_0^1 [f(x+xs) - f(x-xs)]/s ds`` plus the regular tail
    ``∫_0^∞ f(2x+v)/(x+v) dv``.  Batches are processed in fixed-size chunks.
    """
    xs_all = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xs_all <= 0) or not np.all(np.isfinite(xs_all)):
        raise DomainError("principal value requires x > 0")

    def _eval(w):
        # w has shape (k, n); f is vectorized over a flat array.
        return np.asarray(f(w.ravel())).reshape(w.shape)

    values = []
    error = 0.0
    evaluations = 0
    for start in range(0, xs_all.size, chunk):
        xs = xs_all[start:start + chunk]

        def sym(s, xs=xs):
            w_plus = xs[None, :] * (1.0 + s[:, None])
            w_minus = xs[None, :] * (1.0 - s[:, None])
            return (_eval(w_plus) - _eval(w_minus)) / s[:, None]

        def tail(v, xs=xs):
            w = 2 * xs[None, :] + v[:, None]
            return _eval(w) / (xs[None, :] + v[:, None])

        near = integrate(sym, 0.0, 1.0, tol)
        far = integrate(tail, 0.0, math.inf, tol, scale=max(float(np.median(xs)), 1e-3))
        values.append(np.atleast_1d(near.value) + np.atleast_1d(far.value))
        error = max(error, near.error_estimate + far.error_estimate)
        evaluations += near.evaluations + far.evaluations
    value = np.concatenate(values)
    if np.ndim(x) == 0:
        value = value[0]
        value = complex(value) if np.iscomplexobj(value) else float(value)
    return QuadratureResult(value, error, evaluations)


def _asymptotic_tail(f, c, ts):
    """``∫_c^∞ f(w) exp(-iwt) dw = exp(-ict) Σ_k f^(k)(c)/(it)^(k+1)`` (repeated integration by parts).

    Derivatives by fourth-order central differences on the scale of ``c``.
    Returns the sum of four terms and the magnitude of the last one.
    """
    h = 0.05 * c
    pts = c + h * np.arange(-2, 3)
    v = np.asarray(f(pts), dtype=complex)
    d0 = v[2]
    d1 = (-v[4] + 8 * v[3] - 8 * v[1] + v[0]) / (12 * h)
    d2 = (-v[4] + 16 * v[3] - 30 * v[2] + 16 * v[1] - v[0]) / (12 * h * h)
    d3 = (v[4] - 2 * v[3] + 2 * v[1] - v[0]) / (2 * h ** 3)
    it = 1j * ts
    terms = [d / it ** (k + 1) for k, d in enumerate((d0, d1, d2, d3))]
    total = np.exp(-1j * c * ts) * sum(terms)
    return total, float(np.max(np.abs(terms[-1])))


# Below this value of |t|·cutoff the tail is integrated directly instead.
_ASYMPTOTIC_MIN_PHASE = 40.0


def oscillatory_integral(f, t, tol: Tolerances = DEFAULT_TOL, cutoff=64.0, breakpoints=()) -> QuadratureResult:
    """``∫_0^∞ f(w) exp(-i w t) dw``; ``t`` may be an array (batched over times).

    On [0, cutoff] the initial panels are no wider than ``pi/(4|t|max + 1)``.
    The remainder [cutoff, inf) uses the integration-by-parts expansion when
    ``|t|·cutoff`` is large and the semi-infinite map otherwise.
    """
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    width = math.pi / (4 * float(np.max(np.abs(ts))) + 1)
    n_panels = max(1, math.ceil(cutoff / width))
    edges = np.linspace(0.0, cutoff, n_panels + 1)
    if breakpoints:
        edges = np.unique(np.concatenate([edges, [p for p in breakpoints if 0 < p < cutoff]]))

    def g(w):
        vals = np.asarray(f(w))
        return vals[:, None] * np.exp(-1j * w[:, None] * ts[None, :])

    value, error, n = _adaptive(g, edges, tol)
    value = np.asarray(value, dtype=complex).copy()

    fast = np.abs(ts) * cutoff >= _ASYMPTOTIC_MIN_PHASE
    if fast.any():
        tail, last = _asymptotic_tail(f, cutoff, ts[fast])
        value[fast] += tail
        error += last
        n += 5
    if (~fast).any():
        slow_t = ts[~fast]
        to_x, jac, _ = _semi_infinite_map(cutoff, cutoff)

        def g_tail(u):
            w = to_x(u)
            vals = np.asarray(f(w))[:, None] * np.exp(-1j * w[:, None] * slow_t[None, :])
            return _broadcast_jac(vals, jac(u))

        tail_val, tail_err, n_tail = _adaptive(g_tail, [0.0, 1.0], tol)
        value[~fast] += np.asarray(tail_val)
        error += tail_err
        n += n_tail
    if np.ndim(t) == 0:
        value = complex(value[0])
    return QuadratureResult(value, error, n)


def central_difference(F, z, step=None):
    z = complex(z)
    h = step if step is not None else 1e-6 * (1 + abs(z))
    return (F(z + h) - F(z - h)) / (2 * h)


def find_root_complex(F, seed, tol: Tolerances = DEFAULT_TOL, dF=None, lower_half=False) -> complex:
    """Damped Newton iteration for ``F(z) = 0`` starting at ``seed``.

    Steps that increase ``|F|`` are halved (up to 30 times).  With
    ``lower_half=True`` a root with ``Im z >= 0`` raises ``WrongSheetError``.
    """
    z = complex(seed)
    fz = complex(F(z))
    trail = [z]
    for _ in range(tol.max_iterations):
        if abs(fz) <= tol.root_tol:
            break
        d = complex(dF(z)) if dF is not None else complex(central_difference(F, z))
        if d == 0 or not np.isfinite(d):
            raise RootFailure("vanishing derivative in Newton iteration", trail)
        step = -fz / d
        for _ in range(30):
            z_new = z + step
            f_new = complex(F(z_new))
            if np.isfinite(f_new) and abs(f_new) < abs(fz):
                break
            step *= 0.5
        else:
            raise RootFailure("Newton step damping failed", trail)
        z, fz = z_new, f_new
        trail.append(z)
    else:
        if abs(fz) > tol.root_tol:
            raise RootFailure(f"no convergence in {tol.max_iterations} iterations "
                              f"(|F| = {abs(fz):.3e})", trail)
    if lower_half and z.imag >= 0:
        raise WrongSheetError(f"root {z} is not in the lower half plane", trail)
    return z
