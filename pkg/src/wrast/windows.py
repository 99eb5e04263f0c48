"""Window functions, their spectra, and admissibility constants.

A window h gates the line integrals of the transforms; inversion is possible
exactly when the admissibility constant

    c_h = integral |hhat(xi)|^2 / |xi| dxi

is finite and nonzero.  The integrand is singular at xi = 0, so the
quadrature walks dyadic shells toward 0 and declares divergence when the
shell sums stop decaying (a log-divergent integral contributes a constant
amount per shell).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import gamma, roots_legendre

from .grids import Grid, SampledSignal, dft, eval_offgrid

_GL_NODES, _GL_WEIGHTS = roots_legendre(32)


class WindowError(ValueError):
    pass


class InadmissibleWindowError(WindowError):
    """Raised when an operation requires a window with finite, nonzero c_h."""


@dataclass
class Window:
    """Window given by its spectral form hhat and optionally its time form h.

    ``spectral_fn`` maps xi -> hhat(xi); for dim > 1 it takes arrays whose
    last axis has length dim.  ``decay_bound`` is a radius beyond which
    |hhat| < 1e-14.
    """

    spectral_fn: Callable[[np.ndarray], np.ndarray]
    time_fn: Callable[[np.ndarray], np.ndarray] | None = None
    decay_bound: float = 8.0
    label: str = "window"
    dim: int = 1

    def spectrum(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        out = np.asarray(self.spectral_fn(xi), dtype=np.complex128)
        if not np.all(np.isfinite(out.real)) or not np.all(np.isfinite(out.imag)):
            raise WindowError(f"{self.label}: spectral_fn returned non-finite values")
        return out

    def time_values(self, t) -> np.ndarray:
        if self.time_fn is None:
            raise WindowError(f"{self.label}: no time-domain form available")
        return np.asarray(self.time_fn(np.asarray(t, dtype=float)),
                          dtype=np.complex128)


@dataclass(frozen=True)
class AdmissibilityReport:
    """c_h and the derived reconstruction normalization.

    Divergence is an explicit flag; c_h then holds the finite partial sum
    actually accumulated, never an inf sentinel.
    """

    c_h: float
    divergent: bool
    admissible: bool
    n: int
    normalization: float | None


@dataclass(frozen=True)
class RigidAdmissibilityReport:
    """Speed-and-rotation admissibility integral for the rank-d transform."""

    integral: float
    divergent: bool
    admissible: bool
    n: int
    d: int
    normalization: float | None


def _gl_shell(fn, a: float, b: float) -> float:
    """32-point Gauss-Legendre on [a, b]."""
    x = 0.5 * (b - a) * _GL_NODES + 0.5 * (b + a)
    return float(0.5 * (b - a) * np.sum(_GL_WEIGHTS * fn(x)))


def _half_line_shells(fn, outer: float, floor: float = 1e-12):
    """Integrals of fn over dyadic shells [outer/2^(k+1), outer/2^k] down to floor."""
    sums = []
    hi = outer
    while hi > floor:
        lo = hi / 2.0
        sums.append(_gl_shell(fn, lo, hi))
        hi = lo
    return np.array(sums)


def _log_divergent(shells: np.ndarray, scale: float) -> bool:
    """Ratio test: shell sums of an integrable singularity decay geometrically;
    a 1/|xi| tail contributes ~const per shell."""
    tail = shells[-8:]
    if np.all(np.abs(tail) <= 1e-14 * max(scale, 1e-300)):
        return False
    ratios = np.abs(tail[1:]) / np.maximum(np.abs(tail[:-1]), 1e-300)
    return bool(np.median(ratios) > 0.85)


def admissibility_constant(h: Window, tol: float = 1e-9, n: int = 1) -> AdmissibilityReport:
    """Estimate c_h = integral |hhat|^2/|xi| dxi with divergence detection.

    Flags divergence outright when |hhat(0)| > tol (the integrand then has a
    non-integrable |hhat(0)|^2/|xi| core) and otherwise applies the dyadic
    ratio test near 0.
    """
    if h.spectral_fn is None and h.time_fn is None:
        raise WindowError("window has neither spectral nor time form")
    if tol <= 0:
        raise WindowError("tol must be positive")
    if h.dim != 1:
        raise WindowError("admissibility_constant applies to 1D windows")

    h0 = abs(complex(h.spectrum(np.array(0.0))))
    if h0 > tol:
        # the integrand behaves like |hhat(0)|^2/|xi| near 0: log-divergent
        return AdmissibilityReport(c_h=0.0, divergent=True, admissible=False,
                                   n=n, normalization=None)

    def integrand_pos(xi):
        return np.abs(h.spectrum(xi)) ** 2 / np.abs(xi)

    def integrand_neg(xi):
        return np.abs(h.spectrum(-xi)) ** 2 / np.abs(xi)

    total = 0.0
    divergent = False
    for fn in (integrand_pos, integrand_neg):
        shells = _half_line_shells(fn, h.decay_bound)
        total += float(shells.sum())
        if _log_divergent(shells, total):
            divergent = True
    if divergent:
        return AdmissibilityReport(c_h=total, divergent=True, admissible=False,
                                   n=n, normalization=None)
    admissible = total > 1e-300
    norm = gamma(n / 2.0) / (np.pi ** (n / 2.0) * total) if admissible else None
    return AdmissibilityReport(c_h=total, divergent=False, admissible=admissible,
                               n=n, normalization=norm)


def normalization_constant(h: Window, n: int, report: AdmissibilityReport | None = None) -> float:
    """N = Gamma(n/2) / (pi^(n/2) c_h); defined only for admissible windows."""
    if n < 1:
        raise WindowError("dimension n must be >= 1")
    if report is None:
        report = admissibility_constant(h, n=n)
    if not report.admissible:
        raise InadmissibleWindowError(
            f"{h.label}: c_h is {'divergent' if report.divergent else 'zero'}; "
            "reconstruction is undefined for inadmissible windows")
    return float(gamma(n / 2.0) / (np.pi ** (n / 2.0) * report.c_h))


def rigid_admissibility(h: Window, n: int, d: int, so_rule,
                        shell_floor: float = 1e-10) -> RigidAdmissibilityReport:
    """Admissibility integral over speeds and rotations for the rank-d transform,

        integral_0^inf dv/v integral_SO(n) dR |hhat(v * (first d entries of
        the first row of R))|^2,

    estimated on dyadic speed shells (Gauss-Legendre within each shell,
    ``so_rule`` nodes for the rotation average) with the same ratio test as
    the 1D constant.
    """
    if not (1 <= d <= n):
        raise WindowError(f"need 1 <= d <= n, got d={d}, n={n}")
    if h.dim != d:
        raise WindowError(f"window dim {h.dim} != d={d}")
    rows = np.asarray([np.asarray(R)[0, :d] for R in so_rule.nodes])
    weights = np.asarray(so_rule.weights)
    # rotation nodes whose first-row block vanishes see hhat(0) at every
    # speed; they sit on a Haar-null set yet carry rule weight, so keeping
    # them would bias the integral low by exactly that weight
    live = np.linalg.norm(rows, axis=1) > 1e-13
    rows = rows[live]
    weights = weights[live] / weights[live].sum()

    def angular_mean(v):
        v = np.atleast_1d(v)
        args = v[:, None, None] * rows[None, :, :]
        vals = np.abs(h.spectrum(args if d > 1 else args[..., 0])) ** 2
        return vals @ weights

    def integrand(v):
        return angular_mean(v) / v

    # |first-row block| <= 1, so the spectral argument is inside the decay
    # radius once v > decay_bound; a few extra octaves cover the d < n case
    # where most directions shrink the argument.
    outer = h.decay_bound * 2.0 ** 12
    total = 0.0
    divergent = False
    shells = _half_line_shells(integrand, outer, floor=shell_floor)
    total = float(shells.sum())
    if _log_divergent(shells, total):
        divergent = True
    admissible = (not divergent) and total > 1e-300
    return RigidAdmissibilityReport(
        integral=total, divergent=divergent, admissible=admissible, n=n, d=d,
        normalization=(1.0 / total) if admissible else None)


# ---------------------------------------------------------------------------
# built-in windows
# ---------------------------------------------------------------------------


def _theta(u: np.ndarray) -> np.ndarray:
    """Unit step with the symmetric midpoint value theta(0) = 1/2."""
    u = np.asarray(u)
    return np.where(u > 0, 1.0, np.where(u < 0, 0.0, 0.5))


def _ast_spectral(xi):
    xi = np.asarray(xi, dtype=float)
    # clamp the exponent on the gated side so xi << 0 cannot overflow
    return _theta(xi) * np.exp(-2.0 * np.pi * np.maximum(xi, 0.0)) + 0j


def _ast_time(t):
    t = np.asarray(t, dtype=float)
    return -1.0 / (2j * np.pi * (t + 1j))


def _gauss_d1_spectral(xi):
    xi = np.asarray(xi, dtype=float)
    return xi * np.exp(-np.pi * xi ** 2) + 0j


def _gauss_d1_time(t):
    t = np.asarray(t, dtype=float)
    return 1j * t * np.exp(-np.pi * t ** 2)


def _gauss_d2_spectral(xi):
    xi = np.asarray(xi, dtype=float)
    return xi ** 2 * np.exp(-np.pi * xi ** 2) + 0j


def _gauss_d2_time(t):
    t = np.asarray(t, dtype=float)
    return (1.0 / (2.0 * np.pi) - t ** 2) * np.exp(-np.pi * t ** 2) + 0j


_MORLET_XI0 = 1.0


def _morlet_spectral(xi):
    xi = np.asarray(xi, dtype=float)
    return (np.exp(-np.pi * (xi - _MORLET_XI0) ** 2)
            - np.exp(-np.pi * _MORLET_XI0 ** 2) * np.exp(-np.pi * xi ** 2)) + 0j


def _morlet_time(t):
    t = np.asarray(t, dtype=float)
    return (np.exp(2j * np.pi * _MORLET_XI0 * t)
            - np.exp(-np.pi * _MORLET_XI0 ** 2)) * np.exp(-np.pi * t ** 2)


_BUILTINS = {
    "ast": lambda: Window(_ast_spectral, _ast_time, decay_bound=5.2, label="ast"),
    "gauss-deriv-1": lambda: Window(_gauss_d1_spectral, _gauss_d1_time,
                                    decay_bound=3.5, label="gauss-deriv-1"),
    "gauss-d2": lambda: Window(_gauss_d2_spectral, _gauss_d2_time,
                               decay_bound=3.6, label="gauss-d2"),
    "morlet-like": lambda: Window(_morlet_spectral, _morlet_time,
                                  decay_bound=4.5, label="morlet-like"),
}


def builtin_window(name: str) -> Window:
    try:
        factory = _BUILTINS[name]
    except KeyError:
        raise WindowError(
            f"unknown window {name!r}; available: {sorted(_BUILTINS)}") from None
    return factory()


def tensor_window(*parts: Window, label: str | None = None) -> Window:
    """d-dimensional window as a tensor product of 1D windows."""
    if any(p.dim != 1 for p in parts):
        raise WindowError("tensor_window expects 1D factors")
    d = len(parts)

    def spectral(xi):
        xi = np.asarray(xi, dtype=float)
        if xi.shape[-1] != d:
            raise WindowError(f"expected last axis of length {d}")
        out = np.ones(xi.shape[:-1], dtype=np.complex128)
        for k, p in enumerate(parts):
            out = out * p.spectrum(xi[..., k])
        return out

    time = None
    if all(p.time_fn is not None for p in parts):
        def time(t):
            t = np.asarray(t, dtype=float)
            out = np.ones(t.shape[:-1], dtype=np.complex128)
            for k, p in enumerate(parts):
                out = out * p.time_values(t[..., k])
            return out

    return Window(spectral, time, decay_bound=max(p.decay_bound for p in parts),
                  label=label or "x".join(p.label for p in parts), dim=d)


def window_from_samples(signal: SampledSignal, label: str = "sampled",
                        check_tol: float = 1e-8) -> Window:
    """Window built from samples; the spectrum is the band-limited (DFT)
    interpolant of the sampled time values."""
    if signal.grid.ndim != 1:
        raise WindowError("sampled windows must be 1D")
    spec = dft(signal)
    nodes = signal.grid.axis_nodes(0)
    p_nodes = spec.grid.axis_nodes(0)

    def spectral(xi):
        xi = np.asarray(xi, dtype=float)
        flatxi = np.atleast_1d(xi).ravel()
        # evaluate  sum_t h(t) exp(-2 pi i xi t) dt  via the sample sum
        ker = np.exp(-2j * np.pi * np.outer(flatxi, nodes))
        out = ker @ (signal.flat * signal.grid.cell_volume)
        return out.reshape(np.shape(xi)) if np.shape(xi) else out[0]

    def time(t):
        t = np.asarray(t, dtype=float)
        flat = np.atleast_2d(np.atleast_1d(t).ravel()).T
        out = eval_offgrid(spec, flat)
        return out.reshape(np.shape(t)) if np.shape(t) else out[0]

    bound = float(np.abs(p_nodes).max())
    win = Window(spectral, time, decay_bound=bound, label=label)
    # declared time form must reproduce the samples it came from
    recon = win.time_values(nodes)
    err = np.max(np.abs(recon - signal.flat)) / max(np.max(np.abs(signal.flat)), 1e-300)
    if err > check_tol:
        raise WindowError(f"sampled window round-trip error {err:.2e} > {check_tol}")
    return win
