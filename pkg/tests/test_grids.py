import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wrast.grids import (Axis, Grid, GridError, SampledSignal, SpectralSignal,
                         dft, eval_offgrid, idft, quad_1d, quad_nd)


def riemann_fourier(values, nodes, spacing, p):
    """Independent oracle: direct Riemann sum of integral f(x) e^{-2pi i p x} dx."""
    return np.array([np.sum(values * np.exp(-2j * np.pi * pk * nodes)) * spacing
                     for pk in p])


def test_axis_validation():
    with pytest.raises(GridError):
        Axis(1, 0.5)
    with pytest.raises(GridError):
        Axis(8, -1.0)
    with pytest.raises(GridError):
        Axis(8, 0.0)


def test_dual_grid_spacing():
    g = Grid.regular(64, 0.25, -8.0)
    d = g.dual()
    assert d.axes[0].spacing == pytest.approx(1.0 / (64 * 0.25))
    assert g.dual().is_dual_of(g)


def test_signal_shape_and_finiteness():
    g = Grid.regular(8, 1.0)
    with pytest.raises(GridError):
        SampledSignal(g, np.zeros(7))
    bad = np.zeros(8, dtype=complex)
    bad[3] = np.nan
    with pytest.raises(GridError):
        SampledSignal(g, bad)


def test_dft_zero_and_dc():
    g = Grid.regular(32, 0.5, -8.0)
    assert np.allclose(dft(SampledSignal(g, np.zeros(32))).values, 0.0)
    F = dft(SampledSignal(g, np.ones(32)))
    p = F.grid.axis_nodes(0)
    onzero = np.abs(p) < 1e-14
    assert onzero.sum() == 1
    # all mass in the DC bin
    assert np.max(np.abs(F.values[~onzero])) < 1e-12 * np.abs(F.values[onzero][0])


def test_dft_gaussian_self_dual():
    # exp(-pi x^2) is its own transform under the 2pi-in-exponent convention
    g = Grid.regular(256, 16.0 / 256, -8.0)
    x = g.axis_nodes(0)
    f = SampledSignal(g, np.exp(-np.pi * x ** 2))
    F = dft(f)
    p = F.grid.axis_nodes(0)
    assert np.max(np.abs(F.values - np.exp(-np.pi * p ** 2))) < 1e-10
    # and the transform itself matches the direct Riemann-sum oracle
    oracle = riemann_fourier(f.values, x, g.axes[0].spacing, p)
    assert np.max(np.abs(F.values - oracle)) < 1e-12


def test_idft_impulse_single_mode():
    g = Grid.regular(32, 0.5, -8.0)
    F0 = dft(SampledSignal(g, np.zeros(32)))
    vals = np.zeros(32, dtype=complex)
    k0 = 20
    vals[k0] = 1.0
    F = SpectralSignal(F0.grid, vals, primal_grid=g)
    f = idft(F)
    p0 = F.grid.axis_nodes(0)[k0]
    dp = F.grid.axes[0].spacing
    expected = np.exp(2j * np.pi * p0 * g.axis_nodes(0)) * dp
    assert np.max(np.abs(f.values - expected)) < 1e-14


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=8, max_value=4096), st.integers(min_value=0, max_value=2 ** 31 - 1))
def test_roundtrip_random_sizes(count, seed):
    rng = np.random.default_rng(seed)
    g = Grid.regular(count, 0.1 + rng.random(), float(rng.standard_normal()))
    f = SampledSignal(g, rng.standard_normal(count) + 1j * rng.standard_normal(count))
    back = idft(dft(f))
    scale = np.max(np.abs(f.values))
    assert np.max(np.abs(back.values - f.values)) < 1e-12 * scale
    assert back.grid == g


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 31 - 1))
def test_plancherel_and_linearity(seed):
    rng = np.random.default_rng(seed)
    g = Grid.regular([24, 18], [0.3, 0.7], [-3.6, -6.3])
    a = rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape)
    b = rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape)
    fa, fb = SampledSignal(g, a), SampledSignal(g, b)
    lhs = np.sum(np.abs(a) ** 2) * g.cell_volume
    Fa = dft(fa)
    rhs = np.sum(np.abs(Fa.values) ** 2) * Fa.grid.cell_volume
    assert abs(lhs - rhs) < 1e-10 * abs(rhs)
    alpha, beta = complex(rng.standard_normal(), rng.standard_normal()), 2.5
    Fmix = dft(SampledSignal(g, alpha * a + beta * b))
    assert np.allclose(Fmix.values, alpha * Fa.values + beta * dft(fb).values,
                       rtol=1e-12, atol=1e-12)


def test_roundtrip_2d_preserves_origin():
    rng = np.random.default_rng(1)
    g = Grid.half_offset([16, 16], [0.5, 0.25])
    f = SampledSignal(g, rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape))
    back = idft(dft(f))
    assert np.max(np.abs(back.values - f.values)) < 1e-12
    assert back.grid == g


def test_eval_offgrid_matches_nodes():
    rng = np.random.default_rng(2)
    g = Grid.regular([16, 16], [0.5, 0.5], [-4.0, -4.0])
    f = SampledSignal(g, rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape))
    F = dft(f)
    pts = g.points()[::7]
    vals = eval_offgrid(F, pts)
    assert np.max(np.abs(vals - f.values.reshape(-1)[::7])) < 1e-11


def test_quad_constant_periodic():
    assert quad_1d(np.ones(17), 0.3, periodic=True) == pytest.approx(17 * 0.3)


def test_quad_gaussian():
    # oracle: integral exp(-pi x^2) dx = 1
    x = np.arange(-8.0, 8.0 + 1e-3, 1e-3)
    val = quad_1d(np.exp(-np.pi * x ** 2), 1e-3)
    assert abs(val - 1.0) < 1e-8


def test_quad_odd_function():
    x = np.linspace(-5, 5, 2001)
    assert abs(quad_1d(x ** 3 * np.exp(-x ** 2), x[1] - x[0])) < 1e-14


def test_quad_errors():
    with pytest.raises(GridError):
        quad_1d(np.array([]), 0.1)
    with pytest.raises(GridError):
        quad_1d(np.array([1.0]), 0.1)
    with pytest.raises(GridError):
        quad_1d(np.array([1.0, np.inf]), 0.1)


@settings(max_examples=15, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 31 - 1))
def test_quad_linearity(seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    b = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    c1, c2 = complex(*rng.standard_normal(2)), complex(*rng.standard_normal(2))
    lhs = quad_1d(c1 * a + c2 * b, 0.2)
    rhs = c1 * quad_1d(a, 0.2) + c2 * quad_1d(b, 0.2)
    assert abs(lhs - rhs) < 1e-12 * max(abs(lhs), 1.0)


def test_quad_nd_separable():
    g = Grid.regular([41, 41], [0.2, 0.2], [-4.0, -4.0])
    pts = g.points()
    vals = np.exp(-np.pi * (pts ** 2).sum(axis=1))
    # oracle: product of two 1D Gaussian integrals = 1, truncation ~1e-11
    assert abs(quad_nd(vals, g) - 1.0) < 1e-6
