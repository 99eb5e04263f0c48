"""Solutions of the 1+1 dimensional wave equation as spectral pairs.

A solution f(x, t) = f_plus(x + t) + f_minus(x - t) is stored through the
Fourier coefficients of its two travelling parts on a shared 1D frequency
grid.  The natural inner product carries the weight |p|^(-s); the symmetry
group (translations, boosts, reflections, dilations) acts unitarily on it
for conformal weight kappa with s = 2 Re(kappa) - 1.

Frequency grids are usually built with a half-bin offset so p = 0 is not a
node; the |p|^(-s) weight then needs no special casing and sign flips are
grid-exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import make_interp_spline

from ..grids import Grid, SampledSignal, SpectralSignal, idft


class WaveError(ValueError):
    pass


class AliasingError(WaveError):
    """A spectral rescale would need data beyond the sampled band."""


def theta(u) -> np.ndarray:
    """Unit step with theta(0) = 1/2."""
    u = np.asarray(u)
    return np.where(u > 0, 1.0, np.where(u < 0, 0.0, 0.5))


@dataclass(frozen=True)
class WaveSolution:
    """Spectral pair (fhat_plus, fhat_minus) on a 1D frequency grid.

    ``s`` is the Sobolev degree: the squared norm weights the spectra by
    |p|^(-s).  For s > 0 any p = 0 node must carry zero amplitude.
    """

    p_grid: Grid
    fhat_plus: np.ndarray
    fhat_minus: np.ndarray
    s: int

    def __post_init__(self):
        if self.p_grid.ndim != 1:
            raise WaveError("wave solutions live on a 1D frequency grid")
        if not (isinstance(self.s, (int, np.integer)) and self.s >= 0):
            raise WaveError(f"s must be a nonnegative integer, got {self.s}")
        for name in ("fhat_plus", "fhat_minus"):
            arr = np.asarray(getattr(self, name), dtype=np.complex128)
            if arr.shape != (self.p_grid.npoints,):
                raise WaveError(f"{name}: expected shape ({self.p_grid.npoints},)")
            if not np.all(np.isfinite(arr.view(np.float64))):
                raise WaveError(f"{name}: non-finite values")
            object.__setattr__(self, name, arr)
        if self.s > 0:
            p = self.p
            onzero = np.abs(p) < 1e-14
            if np.any(onzero):
                if (np.any(self.fhat_plus[onzero] != 0)
                        or np.any(self.fhat_minus[onzero] != 0)):
                    raise WaveError(
                        "s > 0 requires vanishing amplitude at p = 0")

    @property
    def p(self) -> np.ndarray:
        return self.p_grid.axis_nodes(0)

    @property
    def dp(self) -> float:
        return self.p_grid.axes[0].spacing

    def replace(self, plus=None, minus=None, s=None) -> "WaveSolution":
        return WaveSolution(self.p_grid,
                            self.fhat_plus if plus is None else plus,
                            self.fhat_minus if minus is None else minus,
                            self.s if s is None else s)

    def __add__(self, other: "WaveSolution") -> "WaveSolution":
        _check_compatible(self, other)
        return self.replace(plus=self.fhat_plus + other.fhat_plus,
                            minus=self.fhat_minus + other.fhat_minus)

    def __mul__(self, c: complex) -> "WaveSolution":
        return self.replace(plus=c * self.fhat_plus, minus=c * self.fhat_minus)

    __rmul__ = __mul__


def _check_compatible(a: WaveSolution, b: WaveSolution) -> None:
    if a.p_grid != b.p_grid:
        raise WaveError("solutions live on different frequency grids")
    if a.s != b.s:
        raise WaveError(f"Sobolev degrees differ: {a.s} vs {b.s}")


def make_p_grid(count: int = 512, spacing: float = 0.02) -> Grid:
    """Symmetric half-offset frequency grid (no p = 0 node)."""
    return Grid.half_offset(count, spacing)


def _weight(p: np.ndarray, s: int) -> np.ndarray:
    if s == 0:
        return np.ones_like(p)
    w = np.empty_like(p)
    onzero = np.abs(p) < 1e-14
    w[~onzero] = np.abs(p[~onzero]) ** (-float(s))
    w[onzero] = 0.0  # amplitudes there are zero by the s > 0 invariant
    return w


def inner_product(g: WaveSolution, f: WaveSolution) -> complex:
    """<<g, f>>_s, antilinear in g."""
    _check_compatible(g, f)
    w = _weight(f.p, f.s)
    return complex(np.sum(w * (np.conj(g.fhat_plus) * f.fhat_plus
                               + np.conj(g.fhat_minus) * f.fhat_minus)) * f.dp)


def sobolev_norm_sq(sol: WaveSolution) -> float:
    """Squared Sobolev norm: sum |p|^(-s) (|fhat_+|^2 + |fhat_-|^2) dp."""
    w = _weight(sol.p, sol.s)
    return float(np.sum(w * (np.abs(sol.fhat_plus) ** 2
                             + np.abs(sol.fhat_minus) ** 2)) * sol.dp)


def evaluate_spacetime(sol: WaveSolution, pts) -> np.ndarray:
    """f(x, t) = sum_p e^{2 pi i p (x+t)} fhat_+ dp + e^{2 pi i p (x-t)} fhat_- dp."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    u = pts[:, 0] + pts[:, 1]
    v = pts[:, 0] - pts[:, 1]
    p = sol.p
    out = (np.exp(2j * np.pi * np.outer(u, p)) @ sol.fhat_plus
           + np.exp(2j * np.pi * np.outer(v, p)) @ sol.fhat_minus)
    return out * sol.dp


def frequency_components(sol: WaveSolution):
    """Split into (f_+^+, f_+^-, f_-^-, f_-^+).

    Superscripts are frequency signs: the minus (right-moving) part carries
    frequency -p, so its p > 0 half is the negative-frequency piece.
    """
    p = sol.p
    pos, neg = theta(p), theta(-p)
    zero = np.zeros_like(sol.fhat_plus)
    f_pp = sol.replace(plus=pos * sol.fhat_plus, minus=zero)
    f_pm = sol.replace(plus=neg * sol.fhat_plus, minus=zero)
    f_mm = sol.replace(plus=zero, minus=pos * sol.fhat_minus)
    f_mp = sol.replace(plus=zero, minus=neg * sol.fhat_minus)
    return f_pp, f_pm, f_mm, f_mp


def positive_frequency_part(sol: WaveSolution) -> WaveSolution:
    f_pp, _, _, f_mp = frequency_components(sol)
    return f_pp + f_mp


def negative_frequency_part(sol: WaveSolution) -> WaveSolution:
    _, f_pm, f_mm, _ = frequency_components(sol)
    return f_pm + f_mm


def time_propagate(sol: WaveSolution, dt: float) -> WaveSolution:
    """Evolve by dt: phases e^{2 pi i p dt} on the left, e^{-2 pi i p dt} on
    the right part (the first order form of the wave equation in time)."""
    phase = np.exp(2j * np.pi * sol.p * dt)
    return sol.replace(plus=sol.fhat_plus * phase,
                       minus=sol.fhat_minus * np.conj(phase))


# ---------------------------------------------------------------------------
# symmetry operations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Translation:
    u0: float
    v0: float


@dataclass(frozen=True)
class Lorentz:
    lam: float

    def __post_init__(self):
        if not self.lam > 0:
            raise WaveError("Lorentz parameter must be positive")


@dataclass(frozen=True)
class SpaceReflection:
    pass


@dataclass(frozen=True)
class TotalReflection:
    pass


@dataclass(frozen=True)
class Dilation:
    alpha: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise WaveError("dilation parameter must be positive")


def _flip(values: np.ndarray, p: np.ndarray) -> np.ndarray:
    """values(-p), exact on symmetric grids."""
    if not np.allclose(p, -p[::-1], rtol=0, atol=1e-12 * (abs(p[-1]) + 1)):
        raise WaveError("sign flip needs a symmetric frequency grid")
    return values[::-1].copy()


def _resample(values: np.ndarray, p: np.ndarray, scale: float,
              alias_tol: float = 1e-10) -> np.ndarray:
    """values(scale * p) by per-sign-half quintic splines.

    Spectra of travelling parts generically carry a kink at p = 0 (a step
    gate times a smooth envelope), so each half-line is interpolated
    separately; global trigonometric interpolation would smear the kink.
    Requested points beyond the sampled band must carry negligible mass,
    otherwise an AliasingError is raised.
    """
    if scale <= 0:
        raise WaveError("resample scale must be positive")
    p_max = np.abs(p).max()
    if scale > 1.0:
        outside = np.abs(p) > p_max / scale
        total = float(np.sum(np.abs(values) ** 2))
        tail = float(np.sum(np.abs(values[outside]) ** 2))
        if total > 0 and tail > alias_tol * total:
            raise AliasingError(
                f"rescale by {scale} needs spectrum beyond the grid "
                f"(tail fraction {tail / total:.2e})")
    out = np.zeros_like(values)
    target = scale * p
    for half in (p > 0, p < 0):
        if not np.any(half):
            continue
        src_p = p[half]
        order = np.argsort(src_p)
        spl_re = make_interp_spline(src_p[order], values[half][order].real, k=5)
        spl_im = make_interp_spline(src_p[order], values[half][order].imag, k=5)
        sel = half  # sign(scale * p) == sign(p) for scale > 0
        t = target[sel]
        inside = np.abs(t) <= p_max
        vals = np.zeros(t.size, dtype=np.complex128)
        vals[inside] = spl_re(t[inside]) + 1j * spl_im(t[inside])
        out[sel] = vals
    return out


def apply_symmetry(sol: WaveSolution, op, kappa: complex | None = None) -> WaveSolution:
    """Apply a symmetry with conformal weight kappa (default (s+1)/2).

    Translations and boosts act independently on the two travelling parts;
    reflections exchange or flip them; dilations rescale both.  All are
    unitary in the degree-s norm when 2 Re(kappa) - 1 = s.
    """
    if kappa is None:
        kappa = (sol.s + 1) / 2.0
    if abs(2 * np.real(kappa) - 1 - sol.s) > 1e-12:
        raise WaveError(f"kappa={kappa} incompatible with s={sol.s}")
    p = sol.p
    if isinstance(op, Translation):
        return sol.replace(plus=sol.fhat_plus * np.exp(-2j * np.pi * p * op.u0),
                           minus=sol.fhat_minus * np.exp(-2j * np.pi * p * op.v0))
    if isinstance(op, Lorentz):
        lam = op.lam
        plus = lam ** (1 - kappa) * _resample(sol.fhat_plus, p, lam)
        minus = lam ** (kappa - 1) * _resample(sol.fhat_minus, p, 1.0 / lam)
        return sol.replace(plus=plus, minus=minus)
    if isinstance(op, SpaceReflection):
        return sol.replace(plus=_flip(sol.fhat_minus, p),
                           minus=_flip(sol.fhat_plus, p))
    if isinstance(op, TotalReflection):
        return sol.replace(plus=_flip(sol.fhat_plus, p),
                           minus=_flip(sol.fhat_minus, p))
    if isinstance(op, Dilation):
        a = op.alpha
        factor = a ** (1 - kappa)
        return sol.replace(plus=factor * _resample(sol.fhat_plus, p, a),
                           minus=factor * _resample(sol.fhat_minus, p, a))
    raise WaveError(f"unknown symmetry operation {op!r}")


def weight_shift(sol: WaveSolution, s_new: int) -> WaveSolution:
    """Unitary reweighting |p|^((s_new - s)/2) moving degree s to s_new."""
    if s_new < 0:
        raise WaveError("target degree must be >= 0")
    if s_new == sol.s:
        return sol
    expo = (s_new - sol.s) / 2.0
    p = sol.p
    w = np.zeros_like(p)
    onzero = np.abs(p) < 1e-14
    w[~onzero] = np.abs(p[~onzero]) ** expo
    if np.any(onzero) and expo < 0:
        if np.any(sol.fhat_plus[onzero] != 0) or np.any(sol.fhat_minus[onzero] != 0):
            raise WaveError("cannot lower the degree with mass at p = 0")
    return sol.replace(plus=w * sol.fhat_plus, minus=w * sol.fhat_minus, s=s_new)
