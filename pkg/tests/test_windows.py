import numpy as np
import pytest

from wrast.grids import Grid, SampledSignal, dft
from wrast.radon import so_n_quadrature
from wrast.windows import (AdmissibilityReport, InadmissibleWindowError, Window,
                           WindowError, admissibility_constant, builtin_window,
                           normalization_constant, rigid_admissibility,
                           tensor_window, window_from_samples)


def quad_oracle_c_h(spectral, lo=1e-10, hi=12.0, n=400_000):
    """Independent oracle: dense log-spaced Riemann quadrature of
    integral |hhat(xi)|^2/|xi| dxi over both half-lines."""
    s = np.linspace(np.log(lo), np.log(hi), n)
    xi = np.exp(s)
    w = np.gradient(s)
    total = 0.0
    for sign in (+1.0, -1.0):
        total += float(np.sum(np.abs(spectral(sign * xi)) ** 2 * w))
    return total


def test_ast_window_values():
    w = builtin_window("ast")
    assert complex(w.spectrum(0.0)) == pytest.approx(0.5)  # theta(0) = 1/2
    assert complex(w.spectrum(1.0)) == pytest.approx(np.exp(-2 * np.pi))
    assert complex(w.spectrum(-3.0)) == 0.0
    # time form is the conjugate Cauchy kernel
    assert complex(w.time_values(0.0)) == pytest.approx(-1.0 / (2j * np.pi * 1j))


def test_ast_window_inadmissible():
    rep = admissibility_constant(builtin_window("ast"))
    assert rep.divergent and not rep.admissible
    assert rep.normalization is None


def test_gauss_deriv1_c_h():
    # oracle: integral |xi| e^{-2 pi xi^2} dxi = 1/(2 pi) = 0.15915494...
    w = builtin_window("gauss-deriv-1")
    assert complex(w.spectrum(0.0)) == 0.0
    rep = admissibility_constant(w)
    assert rep.admissible and not rep.divergent
    assert rep.c_h == pytest.approx(1.0 / (2 * np.pi), abs=1e-6)
    oracle = quad_oracle_c_h(w.spectrum)
    assert rep.c_h == pytest.approx(oracle, rel=1e-6)


def test_gauss_d2_c_h():
    # oracle: integral |xi|^3 e^{-2 pi xi^2} dxi = 1/(4 pi^2)
    w = builtin_window("gauss-d2")
    rep = admissibility_constant(w)
    assert rep.admissible
    assert rep.c_h == pytest.approx(1.0 / (4 * np.pi ** 2), rel=1e-8)


def test_zero_window_degenerate():
    w = Window(lambda xi: np.zeros_like(np.asarray(xi, float)) + 0j,
               decay_bound=2.0, label="zero")
    rep = admissibility_constant(w)
    assert rep.c_h == 0.0 and not rep.admissible and not rep.divergent
    with pytest.raises(InadmissibleWindowError):
        normalization_constant(w, 2)


def test_normalization_values():
    # Gamma(1/2) = sqrt(pi) so n=1, c_h=1 gives N=1
    unit = AdmissibilityReport(c_h=1.0, divergent=False, admissible=True, n=1,
                               normalization=None)
    w = builtin_window("gauss-deriv-1")
    assert normalization_constant(w, 1, report=unit) == pytest.approx(1.0)
    # n=3, c_h=1: Gamma(3/2)/pi^{3/2} = 1/(2 pi)
    unit3 = AdmissibilityReport(c_h=1.0, divergent=False, admissible=True, n=3,
                                normalization=None)
    assert normalization_constant(w, 3, report=unit3) == pytest.approx(1.0 / (2 * np.pi))
    # n=2 with the first-derivative Gaussian: N = 1/(pi c_h) = 2
    assert normalization_constant(w, 2) == pytest.approx(2.0, rel=1e-5)


def test_admissible_implies_hhat0_zero():
    for name in ("gauss-deriv-1", "gauss-d2", "morlet-like"):
        w = builtin_window(name)
        if admissibility_constant(w).admissible:
            assert abs(complex(w.spectrum(0.0))) < 1e-12


def test_c_h_translation_invariance():
    w = builtin_window("gauss-deriv-1")
    a = 0.73
    shifted = Window(lambda xi: np.exp(-2j * np.pi * a * np.asarray(xi)) * w.spectrum(xi),
                     decay_bound=w.decay_bound, label="shifted")
    r0 = admissibility_constant(w)
    r1 = admissibility_constant(shifted)
    assert r1.c_h == pytest.approx(r0.c_h, rel=1e-10)


def test_scaling_homogeneity():
    w = builtin_window("gauss-deriv-1")
    s = 1.7
    scaled = Window(lambda xi: s * w.spectrum(xi), decay_bound=w.decay_bound,
                    label="scaled")
    r0 = admissibility_constant(w)
    r1 = admissibility_constant(scaled)
    assert r1.c_h == pytest.approx(s ** 2 * r0.c_h, rel=1e-10)
    assert normalization_constant(scaled, 2, report=r1) == pytest.approx(
        normalization_constant(w, 2, report=r0) / s ** 2, rel=1e-10)


def test_time_and_spectral_forms_agree_under_dft():
    for name in ("gauss-deriv-1", "gauss-d2", "morlet-like"):
        w = builtin_window(name)
        g = Grid.regular(512, 32.0 / 512, -16.0)
        t = g.axis_nodes(0)
        F = dft(SampledSignal(g, w.time_values(t)))
        p = F.grid.axis_nodes(0)
        assert np.max(np.abs(F.values - w.spectrum(p))) < 1e-8


def test_ast_forms_agree_away_from_jump():
    # the Cauchy-kernel window decays like 1/t and its spectrum jumps at 0,
    # so the sampled pair only converges pointwise away from the jump, at
    # the O(1/L) truncation rate
    w = builtin_window("ast")
    g = Grid.regular(2048, 128.0 / 2048, -64.0)
    t = g.axis_nodes(0)
    F = dft(SampledSignal(g, w.time_values(t)))
    p = F.grid.axis_nodes(0)
    away = np.abs(p) > 0.5
    assert np.max(np.abs(F.values[away] - w.spectrum(p[away]))) < 2e-3


def test_rigid_admissibility_d1_matches_c_h_route():
    # for d=1 the speed/rotation integral reduces to c_h/2 for every n
    w = builtin_window("gauss-deriv-1")
    c_h = admissibility_constant(w).c_h
    for n in (2, 3):
        rule = so_n_quadrature(n, 24)
        rep = rigid_admissibility(w, n=n, d=1, so_rule=rule)
        assert rep.admissible
        assert rep.integral == pytest.approx(c_h / 2.0, rel=1e-4)


def test_rigid_admissibility_zero_window():
    zero = Window(lambda xi: np.zeros(np.asarray(xi, float).shape[:-1]) + 0j,
                  decay_bound=2.0, label="zero2", dim=2)
    rep = rigid_admissibility(zero, n=2, d=2, so_rule=so_n_quadrature(2, 8))
    assert rep.integral == 0.0 and not rep.admissible


def test_rigid_admissibility_ast_divergent():
    rep = rigid_admissibility(builtin_window("ast"), n=2, d=1,
                              so_rule=so_n_quadrature(2, 16))
    assert rep.divergent and not rep.admissible


def test_rigid_admissibility_d2_n2():
    # oracle: two resolutions of the same dense quadrature agree to 1e-3,
    # documenting that this separable window is admissible for d = n = 2
    w2 = tensor_window(builtin_window("gauss-deriv-1"), builtin_window("gauss-deriv-1"))
    coarse = rigid_admissibility(w2, n=2, d=2, so_rule=so_n_quadrature(2, 32))
    fine = rigid_admissibility(w2, n=2, d=2, so_rule=so_n_quadrature(2, 64))
    assert coarse.admissible and fine.admissible
    assert coarse.integral > 0
    assert coarse.integral == pytest.approx(fine.integral, rel=1e-3)


def test_rigid_admissibility_rejects_bad_d():
    w = builtin_window("gauss-deriv-1")
    with pytest.raises(WindowError):
        rigid_admissibility(w, n=2, d=3, so_rule=so_n_quadrature(2, 8))


def test_unknown_window_lists_alternatives():
    with pytest.raises(WindowError, match="gauss-deriv-1"):
        builtin_window("nope")


def test_window_from_samples_roundtrip():
    g = Grid.regular(256, 16.0 / 256, -8.0)
    t = g.axis_nodes(0)
    base = builtin_window("gauss-deriv-1")
    win = window_from_samples(SampledSignal(g, base.time_values(t)), label="sampled")
    xi = np.linspace(-2.0, 2.0, 41)
    assert np.max(np.abs(win.spectrum(xi) - base.spectrum(xi))) < 1e-8
