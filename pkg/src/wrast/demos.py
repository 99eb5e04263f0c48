"""Deterministic demo signals and wave solutions for the CLI and tests."""

from __future__ import annotations

import numpy as np

from .grids import Grid, SampledSignal, SpectralSignal, idft
from .wave2d import WaveSolution, wavelet_ez


class DemoError(ValueError):
    pass


def gauss2d(n: int = 64, extent: float = 6.4) -> SampledSignal:
    g = Grid.centered([n, n], [extent / n, extent / n])
    pts = g.points()
    vals = np.exp(-np.pi * (pts ** 2).sum(axis=1))
    return SampledSignal(g, vals.reshape(g.shape))


def random_bandlimited(grid: Grid, band: tuple[float, float], seed: int,
                       real: bool = False) -> SampledSignal:
    """Random signal whose spectrum is supported on band[0] <= |p| <= band[1]."""
    rng = np.random.default_rng(seed)
    dual = grid.dual()
    modes = dual.points()
    radius = np.linalg.norm(modes, axis=1)
    mask = (radius >= band[0]) & (radius <= band[1])
    coeff = np.zeros(len(modes), dtype=np.complex128)
    coeff[mask] = rng.standard_normal(mask.sum()) + 1j * rng.standard_normal(mask.sum())
    # smooth taper inside the annulus keeps the signal spatially localized
    mid = 0.5 * (band[0] + band[1])
    width = 0.25 * (band[1] - band[0]) + 1e-12
    coeff *= np.exp(-((radius - mid) / width) ** 2)
    if real:
        spec = SpectralSignal(dual, coeff.reshape(dual.shape), primal_grid=grid)
        vals = idft(spec).values.real.astype(np.complex128)
        return SampledSignal(grid, vals)
    spec = SpectralSignal(dual, coeff.reshape(dual.shape), primal_grid=grid)
    sig = idft(spec)
    peak = np.max(np.abs(sig.values))
    return SampledSignal(grid, sig.values / (peak if peak > 0 else 1.0))


def bandlimited2d(seed: int = 0, n: int = 64, extent: float = 6.4,
                  band: tuple[float, float] = (0.7, 3.5)) -> SampledSignal:
    g = Grid.centered([n, n], [extent / n, extent / n])
    return random_bandlimited(g, band, seed)


def wavepacket1p1(seed: int = 0, s: int = 1, n: int = 512,
                  dp: float = 0.02) -> WaveSolution:
    """Gaussian positive-component bump centered at p = 1; minus part zero."""
    del seed  # deterministic; kept for a uniform demo signature
    grid = Grid.half_offset(n, dp)
    p = grid.axis_nodes(0)
    plus = np.exp(-((p - 1.0) / 0.25) ** 2) * (p > 0)
    return WaveSolution(grid, plus.astype(np.complex128),
                        np.zeros(n, dtype=np.complex128), s=s)


def random_wave_solution(seed: int, s: int = 1, n: int = 512, dp: float = 0.02,
                         band: tuple[float, float] = (0.4, 2.0),
                         components: str = "both") -> WaveSolution:
    """Smooth random solution with spectra supported on band <= |p| <= band."""
    rng = np.random.default_rng(seed)
    grid = Grid.half_offset(n, dp)
    p = grid.axis_nodes(0)

    def bump():
        out = np.zeros(n, dtype=np.complex128)
        for _ in range(3):
            c = rng.uniform(*band) * rng.choice([-1.0, 1.0])
            w = rng.uniform(0.1, 0.3)
            a = rng.standard_normal() + 1j * rng.standard_normal()
            out += a * np.exp(-((p - c) / w) ** 2)
        mask = (np.abs(p) >= band[0] * 0.5) & (np.abs(p) <= band[1] * 2.0)
        return out * mask

    plus = bump() if components in ("both", "plus") else np.zeros(n, complex)
    minus = bump() if components in ("both", "minus") else np.zeros(n, complex)
    return WaveSolution(grid, plus, minus, s=s)


def two_wavelet(s: int = 1, z1: complex = 1j, z2: complex = 2 + 0.5j,
                n: int = 4096, dp: float = 5e-3) -> WaveSolution:
    """Superposition of two travelling-wavelet atoms e_z1 + e_z2."""
    grid = Grid.half_offset(n, dp)
    a = wavelet_ez(s, z1, grid)
    b = wavelet_ez(s, z2, grid)
    return WaveSolution(grid, a.fhat_plus + b.fhat_plus,
                        a.fhat_minus + b.fhat_minus, s=s)


DEMOS = {
    "gauss2d": gauss2d,
    "bandlimited2d": bandlimited2d,
    "wavepacket1p1": wavepacket1p1,
    "two-wavelet": two_wavelet,
}
