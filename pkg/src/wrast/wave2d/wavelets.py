"""Travelling wavelets adapted to the wave equation.

Each point z = x + i t' of the real-space/imaginary-time region labels one
wavelet e_z; pairing a solution against e_z in the degree-s inner product
evaluates the solution's analytic-signal extension at z.  The wavelets have
closed-form space-time profiles, norms, frequency statistics, and overlaps
(the reproducing kernel), all on the rational function
Gamma(s+1) / (2 pi (t' - i u))^(s+1); integer s keeps every formula
branch-free.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gamma

from ..grids import Grid
from .solutions import WaveError, WaveSolution, theta


def _split_z(z) -> tuple[float, float]:
    if isinstance(z, complex) or np.iscomplexobj(z):
        zc = complex(z)
        return zc.real, zc.imag
    x, t = z
    return float(x), float(t)


def _gated_exp(arg: np.ndarray, gate: np.ndarray) -> np.ndarray:
    """exp(arg) * gate with arg clamped to <= 0 off the gate (it is <= 0 on
    the gate by construction, so the clamp only prevents overflow)."""
    return np.exp(np.minimum(arg, 0.0)) * gate


def wavelet_ez(s: int, z, p_grid: Grid) -> WaveSolution:
    """The wavelet e_z as a WaveSolution:

        ehat_+(p) = theta(p t') |p|^s exp(-2 pi i p conj(z))
        ehat_-(p) = theta(-p t') |p|^s exp(-2 pi i p z)
    """
    if s < 1:
        raise WaveError("wavelets need s >= 1")
    x, tp = _split_z(z)
    if tp == 0:
        raise WaveError("t' = 0 does not label a wavelet")
    p = p_grid.axis_nodes(0)
    mag = np.abs(p) ** s
    gate_plus = theta(p * tp)
    gate_minus = theta(-p * tp)
    osc = np.exp(-2j * np.pi * p * x)
    plus = mag * osc * _gated_exp(-2.0 * np.pi * p * tp, gate_plus)
    minus = mag * osc * _gated_exp(2.0 * np.pi * p * tp, gate_minus)
    return WaveSolution(p_grid, plus, minus, s=s)


def wavelet_norm_sq_exact(s: int, t_prime: float) -> float:
    """||e_z||_s^2 = 2 Gamma(s+1) / (4 pi |t'|)^(s+1)."""
    if t_prime == 0:
        raise WaveError("t' = 0 does not label a wavelet")
    return float(2.0 * gamma(s + 1) / (4.0 * np.pi * abs(t_prime)) ** (s + 1))


def mother_wavelet(s: int, p_grid: Grid) -> WaveSolution:
    """The basic left-moving wavelet (z = i): phihat_+ = theta(p) p^s e^{-2 pi p}."""
    return wavelet_ez(s, 1j, p_grid)


def mother_wavelet_l2(s: int, p_grid: Grid) -> np.ndarray:
    """The L2-absorbed profile theta(p) p^(s/2) e^{-2 pi p} (the classical
    fiducial vector of continuous affine-group analysis)."""
    p = p_grid.axis_nodes(0)
    gate = theta(p)
    return gate * np.abs(p) ** (s / 2.0) * _gated_exp(-2.0 * np.pi * p, gate)


def ez_spacetime(s: int, z1, pts) -> np.ndarray:
    """Left-moving component of e_z1 in space-time, closed form:

        e_{z1+}(x, t) = Gamma(s+1) / (2 pi (t1' - i (u - x1)))^(s+1),  u = x + t,

    valid for t1' > 0 (other cases follow by reflections).
    """
    x1, tp = _split_z(z1)
    if tp <= 0:
        raise WaveError("closed form requires t1' > 0")
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    u = pts[:, 0] + pts[:, 1]
    base = 2.0 * np.pi * (tp - 1j * (u - x1))
    return gamma(s + 1) / base ** (s + 1)


def ez_spacetime_spectral(s: int, z1, pts, p_max: float = 6.0,
                          dp: float = 2e-5) -> np.ndarray:
    """Half-line quadrature of the same component, used as the cross-check:
    integral_0^inf p^s exp(2 pi i p (u - x1 + i t1')) dp on a half-offset grid."""
    x1, tp = _split_z(z1)
    if tp <= 0:
        raise WaveError("spectral form requires t1' > 0")
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    u = pts[:, 0] + pts[:, 1]
    p = (np.arange(int(p_max / dp)) + 0.5) * dp
    phases = np.exp(2j * np.pi * np.outer(u - x1, p))
    damp = p ** s * np.exp(-2.0 * np.pi * p * tp)
    return (phases * damp).sum(axis=1) * dp


@dataclass(frozen=True)
class ColorStats:
    nu: float
    delta_nu: float
    nu_grid: float | None = None
    delta_nu_grid: float | None = None


def color_stats(s: int, t_prime: float, p_grid: Grid | None = None,
                check_tol: float = 1e-4) -> ColorStats:
    """Mean frequency (color) and spread of e_z:

        nu = (s+1) / (4 pi t'),   delta_nu = sqrt(s+1) / (4 pi |t'|).

    With a frequency grid supplied, both are recomputed as |p|^(-s)-weighted
    moments of the wavelet spectrum and must agree within ``check_tol``.
    """
    if t_prime == 0:
        raise WaveError("t' = 0 does not label a wavelet")
    nu = (s + 1) / (4.0 * np.pi * t_prime)
    dnu = np.sqrt(s + 1) / (4.0 * np.pi * abs(t_prime))
    if p_grid is None:
        return ColorStats(nu, dnu)
    ez = wavelet_ez(s, 1j * t_prime, p_grid)
    p = ez.p
    comp, sign = ((ez.fhat_plus, +1.0) if t_prime > 0 else (ez.fhat_minus, -1.0))
    dens = np.abs(comp) ** 2
    nz = np.abs(p) > 1e-14
    dens = np.where(nz, dens * np.abs(np.where(nz, p, 1.0)) ** (-float(s)), 0.0)
    mass = dens.sum()
    freq = sign * p
    m1 = float((dens * freq).sum() / mass)
    m2 = float((dens * freq ** 2).sum() / mass)
    nu_g, dnu_g = m1, float(np.sqrt(max(m2 - m1 ** 2, 0.0)))
    if abs(nu_g - nu) > check_tol * max(abs(nu), 1e-300):
        raise WaveError(f"grid color {nu_g} vs closed form {nu}")
    if abs(dnu_g - dnu) > check_tol * max(abs(dnu), 1e-300):
        raise WaveError(f"grid spread {dnu_g} vs closed form {dnu}")
    return ColorStats(nu, dnu, nu_g, dnu_g)


def single_overlap(s: int, z1, z) -> complex:
    """<e_{z1}, e_z>_s for the travelling components on one half-line:

        theta(t1' t') Gamma(s+1) / (2 pi (|t1' + t'| - i sgn(t')(x1 - x)))^(s+1).
    """
    x1, t1 = _split_z(z1)
    x, t = _split_z(z)
    if t1 == 0 or t == 0:
        raise WaveError("overlaps need t' != 0 on both points")
    if t1 * t < 0:
        return 0.0j
    sgn = 1.0 if t > 0 else -1.0
    base = 2.0 * np.pi * (abs(t1 + t) - 1j * sgn * (x1 - x))
    return complex(gamma(s + 1) / base ** (s + 1))


def reproducing_kernel(s: int, z1, z) -> complex:
    """K(z1, z) = <<e_{z1}, e_z>>_s in closed form:

        2 theta(t1' t') Gamma(s+1) / (2 pi |t1'+t'|)^(s+1)
            * Re[(1 - i (x1-x)/(t1'+t'))^(-s-1)].
    """
    x1, t1 = _split_z(z1)
    x, t = _split_z(z)
    if t1 == 0 or t == 0:
        raise WaveError("the kernel needs t' != 0 on both points")
    if t1 * t < 0:
        return 0.0
    ratio = (x1 - x) / (t1 + t)
    re = np.real((1.0 - 1j * ratio) ** (-(s + 1)))
    return float(2.0 * gamma(s + 1) / (2.0 * np.pi * abs(t1 + t)) ** (s + 1) * re)


def kernel_gram(s: int, zs) -> np.ndarray:
    zs = list(zs)
    G = np.empty((len(zs), len(zs)))
    for i, zi in enumerate(zs):
        for j, zj in enumerate(zs):
            G[i, j] = reproducing_kernel(s, zi, zj)
    return G
