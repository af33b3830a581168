"""Free waves: half-wave spectral representation, exact evolution, energy.

A free wave is stored as the pair of spectral coefficient arrays
(a_plus, a_minus) of the half-waves e^{+-it|xi|}, so that

    phi_hat(t)   = e^{it|xi|} a_plus + e^{-it|xi|} a_minus
    phi_t_hat(t) = i|xi| (e^{it|xi|} a_plus - e^{-it|xi|} a_minus).

Evolution is exact per mode; energy is conserved to rounding error.  The
zero mode is excluded throughout (|xi|^{-1} is singular there and all
waves of interest are frequency-localized away from 0).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.fft as _fft

from .bumps import annulus_envelope, ball_bump, pick_nw
from .grid import Field, Grid, GridMismatchError, _forward_factor

_W = -1  # scipy.fft workers


@dataclass(frozen=True)
class WaveState:
    """Position/velocity data pair (phi(t), phi_t(t)) on a spatial grid."""

    pos: Field
    vel: Field
    time: float = 0.0

    def __post_init__(self):
        if self.pos.grid is not self.vel.grid and self.pos.grid != self.vel.grid:
            raise GridMismatchError("pos and vel live on different grids")

    @property
    def grid(self) -> Grid:
        return self.pos.grid


@dataclass(frozen=True)
class FreeWave:
    """Half-wave spectral representation of a solution of Box(phi) = 0."""

    grid: Grid
    a_plus: np.ndarray = field(repr=False)
    a_minus: np.ndarray = field(repr=False)

    def __post_init__(self):
        for a in (self.a_plus, self.a_minus):
            if a.shape != self.grid.shape:
                raise GridMismatchError("coefficient shape does not match grid")


def _zero_mode_index(grid: Grid):
    return (0,) * grid.n


def energy(w: FreeWave) -> float:
    """Conserved energy E(phi) = sum |xi|^2 (|a_plus|^2 + |a_minus|^2)."""
    xi2 = w.grid.xi_norm**2
    return float(np.sum(xi2 * (np.abs(w.a_plus) ** 2 + np.abs(w.a_minus) ** 2)))


def energy_inner_waves(a: FreeWave, b: FreeWave) -> complex:
    """Time-independent energy inner product of two free waves."""
    if a.grid != b.grid:
        raise GridMismatchError("waves on different grids")
    xi2 = a.grid.xi_norm**2
    return complex(np.sum(xi2 * (a.a_plus * np.conj(b.a_plus) + a.a_minus * np.conj(b.a_minus))))


def energy_inner(a: WaveState, b: WaveState) -> complex:
    """Energy inner product (1/2) int grad(a_pos).grad(conj b_pos) + a_vel conj(b_vel)."""
    if a.grid != b.grid:
        raise GridMismatchError("states on different grids")
    g = a.grid
    fac = _forward_factor(g)
    pa = _fft.fftn(a.pos.values, workers=_W) * fac
    pb = _fft.fftn(b.pos.values, workers=_W) * fac
    va = _fft.fftn(a.vel.values, workers=_W) * fac
    vb = _fft.fftn(b.vel.values, workers=_W) * fac
    xi2 = g.xi_norm**2
    return complex(0.5 * np.sum(xi2 * pa * np.conj(pb) + va * np.conj(vb)))


def state_energy(d: WaveState) -> float:
    return float(np.real(energy_inner(d, d)))


def from_data(d: WaveState, zero_mean_tol: float = 1e-10) -> FreeWave:
    """Half-wave splitting a_+- = (phi_hat -+ i|xi|^{-1} phi_t_hat)/2 of the data.

    The velocity must have (numerically) zero mean; a nonzero position mean
    is dropped with a warning.  Data given at time t are re-referenced to
    t = 0 so that evaluate(w, d.time) reproduces d.
    """
    g = d.grid
    fac = _forward_factor(g)
    p = _fft.fftn(d.pos.values, workers=_W) * fac
    v = _fft.fftn(d.vel.values, workers=_W) * fac
    z = _zero_mode_index(g)
    vscale = np.linalg.norm(v.ravel())
    if np.abs(v[z]) > zero_mean_tol * max(vscale, 1e-300):
        raise ValueError(
            f"velocity mean {v[z]:g} is not zero (relative {abs(v[z]) / vscale:.2e}); "
            "|xi|^{-1} is singular at the zero mode"
        )
    if np.abs(p[z]) > zero_mean_tol * max(np.linalg.norm(p.ravel()), 1e-300):
        warnings.warn("dropping nonzero position mean (zero mode excluded from free waves)")
    xin = g.xi_norm.copy()
    xin[z] = 1.0  # avoid 0/0; modes at xi=0 are zeroed below
    iv = 1j * v / xin
    ap = 0.5 * (p - iv)
    am = 0.5 * (p + iv)
    ap[z] = 0.0
    am[z] = 0.0
    if d.time != 0.0:
        ap = ap * np.exp(-1j * d.time * g.xi_norm)
        am = am * np.exp(+1j * d.time * g.xi_norm)
        ap[z] = 0.0
        am[z] = 0.0
    return FreeWave(g, ap, am)


def spectral_state(w: FreeWave, t: float) -> tuple:
    """Spectral (phi_hat(t), phi_t_hat(t)) without transforming to physical space."""
    ph = np.exp(1j * t * w.grid.xi_norm)
    p = ph * w.a_plus + np.conj(ph) * w.a_minus
    v = 1j * w.grid.xi_norm * (ph * w.a_plus - np.conj(ph) * w.a_minus)
    return p, v


def evaluate(w: FreeWave, t: float) -> WaveState:
    """Exact evolution to time t (unit phase per mode, no time-stepping error)."""
    p, v = spectral_state(w, t)
    fac = _forward_factor(w.grid)
    pos = _fft.ifftn(p / fac, workers=_W)
    vel = _fft.ifftn(v / fac, workers=_W)
    return WaveState(Field(w.grid, pos, "physical"), Field(w.grid, vel, "physical"), t)


def evaluate_gradient(w: FreeWave, t: float) -> list:
    """Physical-space arrays of the spatial derivatives d_i phi(t)."""
    p, _ = spectral_state(w, t)
    fac = _forward_factor(w.grid)
    out = []
    for xi_i in w.grid.xi_mesh:
        out.append(_fft.ifftn(1j * xi_i * p / fac, workers=_W))
    return out


def normalize(w: FreeWave, target: float = 1.0) -> FreeWave:
    e = energy(w)
    if e <= 0:
        raise ValueError("cannot normalize a zero wave")
    s = np.sqrt(target / e)
    return FreeWave(w.grid, w.a_plus * s, w.a_minus * s)


def default_band(lam: float) -> tuple:
    """Spectral support and plateau for 'frequency lambda': |xi| in [lam/2, 2 lam],
    envelope identically 1 on [3 lam/4, 3 lam/2]."""
    return (lam / 2.0, 2.0 * lam), (0.75 * lam, 1.5 * lam)


def _resolve_band(grid: Grid, lam: float, band, plateau):
    b, pl = default_band(lam)
    if band is not None:
        b = tuple(band)
    if plateau is not None:
        pl = tuple(plateau)
    elif band is not None:
        lo, hi = b
        w = 0.2 * (hi - lo)
        pl = (lo + w, hi - w)
    grid.check_headroom(b[1])
    return b, pl


def _envelope(grid: Grid, band, plateau) -> np.ndarray:
    # concentrate the envelope kernel well inside the box
    ramp = min(plateau[0] - band[0], band[1] - plateau[1])
    nw = pick_nw(ramp, grid.L / 3.0)
    return annulus_envelope(grid.xi_norm, band, plateau, nw=nw)


def _localize_halfwave(grid: Grid, a: np.ndarray, center, radius, env: np.ndarray) -> np.ndarray:
    """Multiply the half-wave position data by a radius-`radius` bump at `center`
    in physical space, then re-project onto the annulus envelope."""
    fac = _forward_factor(grid)
    pos = _fft.ifftn(a / fac, workers=_W)
    cut = ball_bump(grid.torus_distance(center), radius)
    return _fft.fftn(cut * pos, workers=_W) * fac * env


def random_wave(
    grid: Grid,
    lam: float,
    seed: int,
    localization: tuple | None = None,
    band: tuple | None = None,
    plateau: tuple | None = None,
    half: str = "+",
) -> FreeWave:
    """Random frequency-lambda wave of unit energy.

    Gaussian coefficients are laid on the smooth annulus envelope; with
    `localization=(center, radius)` the data is cut by a smooth ball bump
    of that radius and re-projected onto the annulus, so the result is
    both frequency-localized and spatially concentrated.
    """
    b, pl = _resolve_band(grid, lam, band, plateau)
    env = _envelope(grid, b, pl)
    rng = np.random.default_rng(seed)

    def draw():
        g = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
        return g * env

    if half == "+":
        ap, am = draw(), np.zeros(grid.shape, dtype=complex)
    elif half == "-":
        ap, am = np.zeros(grid.shape, dtype=complex), draw()
    elif half == "both":
        ap, am = draw(), draw()
    else:
        raise ValueError(f"half must be '+', '-' or 'both', got {half!r}")

    if localization is not None:
        center, radius = localization
        if half in ("+", "both"):
            ap = _localize_halfwave(grid, ap, center, radius, env)
        if half in ("-", "both"):
            am = _localize_halfwave(grid, am, center, radius, env)
    return normalize(FreeWave(grid, ap, am))


def plane_wave(grid: Grid, xi_target, amplitude: complex = 1.0, half: str = "+") -> FreeWave:
    """Single-mode wave amplitude*e^{i(xi.x -+ |xi|t)} at the lattice point nearest xi_target."""
    k = np.round(np.asarray(xi_target, dtype=float) * grid.L / (2 * np.pi)).astype(int)
    if np.all(k == 0):
        raise ValueError("zero mode excluded")
    idx = tuple(int(ki) % grid.N for ki in k)
    a = np.zeros(grid.shape, dtype=complex)
    a[idx] = amplitude * grid.L ** (grid.n / 2.0)  # physical amplitude 1 per unit `amplitude`
    z = np.zeros(grid.shape, dtype=complex)
    if half == "+":
        return FreeWave(grid, a, z)
    if half == "-":
        return FreeWave(grid, z, a)
    raise ValueError(f"half must be '+' or '-', got {half!r}")


def lattice_xi(grid: Grid, xi_target) -> np.ndarray:
    """The lattice frequency nearest xi_target (what plane_wave actually uses)."""
    k = np.round(np.asarray(xi_target, dtype=float) * grid.L / (2 * np.pi)).astype(int)
    return 2 * np.pi * k / grid.L


def knapp_wave(
    grid: Grid,
    lam: float,
    omega,
    cap_width: float,
    x0=None,
    seed: int | None = None,
    band: tuple | None = None,
    plateau: tuple | None = None,
) -> FreeWave:
    """Unit-energy wave with spectral support in an angular cap about `omega`.

    The cap has angular half-width `cap_width` (radians); with the default
    band the support is the |xi| ~ lam annulus intersected with the cap.
    Deterministic phases unless `seed` is given.
    """
    b, pl = _resolve_band(grid, lam, band, plateau)
    env = _envelope(grid, b, pl)
    omega = np.asarray(omega, dtype=float)
    omega = omega / np.linalg.norm(omega)
    xin = grid.xi_norm.copy()
    xin[xin == 0] = 1.0
    cosang = np.zeros(grid.shape)
    for oi, xi_i in zip(omega, grid.xi_mesh):
        cosang = cosang + oi * xi_i
    cosang = np.clip(cosang / xin, -1.0, 1.0)
    ang = np.arccos(cosang)
    cap = ball_bump(ang, cap_width)  # 1 inside cap_width/2, 0 at and beyond cap_width
    a = (env * cap).astype(complex)
    if x0 is not None:
        phase = np.zeros(grid.shape)
        for ci, xi_i in zip(np.asarray(x0, dtype=float), grid.xi_mesh):
            phase = phase + ci * xi_i
        a = a * np.exp(-1j * phase)
    if seed is not None:
        rng = np.random.default_rng(seed)
        a = a * (rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape))
    if not np.any(a):
        raise ValueError("knapp cap contains no lattice modes")
    return normalize(FreeWave(grid, a, np.zeros(grid.shape, dtype=complex)))


def bump_wave(grid: Grid, lam: float, center, band=None, plateau=None) -> FreeWave:
    """Deterministic unit-energy half-wave whose data is the annulus kernel at `center`
    (tightly localized, radius ~ 1/lam: a point-source surrogate)."""
    b, pl = _resolve_band(grid, lam, band, plateau)
    env = _envelope(grid, b, pl).astype(complex)
    phase = np.zeros(grid.shape)
    for ci, xi_i in zip(np.asarray(center, dtype=float), grid.xi_mesh):
        phase = phase + ci * xi_i
    a = env * np.exp(-1j * phase)
    return normalize(FreeWave(grid, a, np.zeros(grid.shape, dtype=complex)))


def static_bump_wave(grid: Grid, lam: float, center, band=None, plateau=None) -> FreeWave:
    """Frequency-lam wave with kernel position data at `center` and zero velocity."""
    w = bump_wave(grid, lam, center, band=band, plateau=plateau)
    # zero initial velocity: split the position data evenly between half-waves
    half = 0.5 * (w.a_plus + w.a_minus)
    return normalize(FreeWave(grid, half, half.copy()))


def focusing_wave(
    grid: Grid,
    lam: float,
    aperture_center,
    direction,
    t_focus: float,
    aperture_radius: float,
    seed: int | None = None,
    band: tuple | None = None,
    plateau: tuple | None = None,
) -> FreeWave:
    """Unit-energy aperture piece of a wave converging to a point at time t_focus.

    The full converging wave has all spectral phases aligned at the focal
    point x_f = aperture_center + t_focus*direction; its t = 0 trace is a
    shell through the aperture center, which is then cut to a ball of
    radius `aperture_radius` and re-projected onto the annulus.  Evaluated
    near t_focus the wave concentrates at x_f; such data saturates the
    cone-shell decay and fixed-time null-form bounds.
    """
    b, pl = _resolve_band(grid, lam, band, plateau)
    env = _envelope(grid, b, pl)
    e = np.asarray(direction, dtype=float)
    e = e / np.linalg.norm(e)
    x_f = np.asarray(aperture_center, dtype=float) + t_focus * e
    phase = np.zeros(grid.shape)
    for ci, xi_i in zip(x_f, grid.xi_mesh):
        phase = phase + ci * xi_i
    a = env * np.exp(-1j * (phase + t_focus * grid.xi_norm))
    if seed is not None:
        rng = np.random.default_rng(seed)
        a = a * (rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape))
    a = _localize_halfwave(grid, a, aperture_center, aperture_radius, env)
    return normalize(FreeWave(grid, a, np.zeros(grid.shape, dtype=complex)))


def wave_add(a: FreeWave, b: FreeWave) -> FreeWave:
    if a.grid != b.grid:
        raise GridMismatchError("waves on different grids")
    return FreeWave(a.grid, a.a_plus + b.a_plus, a.a_minus + b.a_minus)


def wave_sub(a: FreeWave, b: FreeWave) -> FreeWave:
    if a.grid != b.grid:
        raise GridMismatchError("waves on different grids")
    return FreeWave(a.grid, a.a_plus - b.a_plus, a.a_minus - b.a_minus)


def wave_scale(a: FreeWave, s: complex) -> FreeWave:
    return FreeWave(a.grid, a.a_plus * s, a.a_minus * s)


def zero_wave(grid: Grid) -> FreeWave:
    z = np.zeros(grid.shape, dtype=complex)
    return FreeWave(grid, z, z.copy())
