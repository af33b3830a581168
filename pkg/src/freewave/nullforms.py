"""Null forms Q0/Q_ab, their spacetime norms, and null-frame derivatives.

All derivatives are spectral: time derivatives come from the half-wave
symbol i|xi|, never from finite differences, so Box(phi) = 0 holds exactly
per mode and the null cancellations are exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.fft as _fft

from .grid import Field, Grid, GridMismatchError, _forward_factor, box_mask, lp_norm
from .waves import FreeWave, spectral_state

_W = -1

TIME_INDEX = 0  # alpha = 0 denotes d_t; 1..n are spatial axes


@dataclass(frozen=True)
class NullFormKind:
    """Q0 (alpha is None) or Q_{alpha beta} with distinct indices in {0..n}."""

    alpha: int | None = None
    beta: int | None = None

    def __post_init__(self):
        if (self.alpha is None) != (self.beta is None):
            raise ValueError("give both indices or neither")
        if self.alpha is not None and self.alpha == self.beta:
            raise ValueError("null form indices must be distinct")

    @property
    def is_q0(self) -> bool:
        return self.alpha is None

    def label(self) -> str:
        if self.is_q0:
            return "Q0"
        names = {TIME_INDEX: "t"}
        a = names.get(self.alpha, str(self.alpha))
        b = names.get(self.beta, str(self.beta))
        return f"Q{a}{b}"


Q0 = NullFormKind()


def Qab(alpha: int, beta: int) -> NullFormKind:
    return NullFormKind(alpha, beta)


@dataclass(frozen=True)
class SpacetimeCube:
    """Axis-aligned spacetime cube: spatial box [corner, corner+side]^n, times [t0, t0+side]."""

    corner: tuple
    side: float
    t0: float

    @property
    def t1(self) -> float:
        return self.t0 + self.side


def standard_cube(R: float) -> SpacetimeCube:
    """The cube 0 <= x_i <= R, R <= t <= 2R (a distance R from the data surface)."""
    return SpacetimeCube((0.0, 0.0), R, R)


@dataclass(frozen=True)
class Jet:
    """phi, phi_t, and spatial derivatives of a wave at a fixed time."""

    phi: np.ndarray = field(repr=False)
    dt: np.ndarray = field(repr=False)
    dx: tuple = field(repr=False)  # n arrays

    def deriv(self, alpha: int) -> np.ndarray:
        return self.dt if alpha == TIME_INDEX else self.dx[alpha - 1]

    @property
    def grad_norm(self) -> np.ndarray:
        """|nabla_{x,t} phi| pointwise."""
        s = np.abs(self.dt) ** 2
        for d in self.dx:
            s = s + np.abs(d) ** 2
        return np.sqrt(s)


def jet(w: FreeWave, t: float) -> Jet:
    g = w.grid
    p, v = spectral_state(w, t)
    fac = _forward_factor(g)
    phi = _fft.ifftn(p / fac, workers=_W)
    dt = _fft.ifftn(v / fac, workers=_W)
    dx = tuple(_fft.ifftn(1j * xi_i * p / fac, workers=_W) for xi_i in g.xi_mesh)
    return Jet(phi, dt, dx)


def eval_nullform_jets(kind: NullFormKind, ja: Jet, jb: Jet) -> np.ndarray:
    if kind.is_q0:
        out = ja.dt * jb.dt
        for da, db in zip(ja.dx, jb.dx):
            out = out - da * db
        return out
    return ja.deriv(kind.alpha) * jb.deriv(kind.beta) - ja.deriv(kind.beta) * jb.deriv(kind.alpha)


def eval_nullform(kind: NullFormKind, phi: FreeWave, psi: FreeWave, t: float) -> Field:
    """Pointwise Q(phi, psi)(., t) via spectral derivatives."""
    if phi.grid != psi.grid:
        raise GridMismatchError("waves on different grids")
    vals = eval_nullform_jets(kind, jet(phi, t), jet(psi, t))
    return Field(phi.grid, vals, "physical")


def nullform_norm(
    kind: NullFormKind,
    phi: FreeWave,
    psi: FreeWave,
    cube: SpacetimeCube,
    n_t: int = 17,
) -> tuple:
    """L^2_{t,x} norm of Q(phi,psi) over the cube (trapezoid in t).

    Returns (value, converged) where `converged` means halving the time
    sampling moves the result by < 0.5%.
    """
    g = phi.grid
    if n_t < 3:
        raise ValueError("need n_t >= 3 time samples")
    if n_t % 2 == 0:
        n_t += 1
    if cube.side > g.L:
        raise ValueError("cube does not fit in the box")
    region = box_mask(g, cube.corner, cube.side)
    ts = np.linspace(cube.t0, cube.t1, n_t)
    sq = np.empty(n_t)
    for i, t in enumerate(ts):
        f = eval_nullform(kind, phi, psi, t)
        sq[i] = lp_norm(f, 2, region=region) ** 2
    fine = float(np.sqrt(np.trapezoid(sq, ts)))
    coarse = float(np.sqrt(np.trapezoid(sq[::2], ts[::2])))
    converged = fine == 0.0 or abs(fine - coarse) < 5e-3 * fine
    return fine, converged


# ---------------------------------------------------------------------------
# Null frame about a spacetime origin
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FrameDerivatives:
    """E+ phi, E- phi, angular A_i phi about a frame center, with validity mask."""

    e_plus: np.ndarray = field(repr=False)
    e_minus: np.ndarray = field(repr=False)
    angular: tuple = field(repr=False)
    mask: np.ndarray = field(repr=False)  # True where the frame is valid (r >= 4h)

    @property
    def good_norm(self) -> np.ndarray:
        """|Dslash phi| = (|E+ phi|^2 + sum |A_i phi|^2)^{1/2}."""
        s = np.abs(self.e_plus) ** 2
        for a in self.angular:
            s = s + np.abs(a) ** 2
        return np.sqrt(s)


def radial_coords(grid: Grid, center) -> tuple:
    """(r, omega_list) about `center`, using torus-centered representatives."""
    rel = grid.centered_coords(center)
    r = np.zeros(grid.shape)
    for d in rel:
        r = r + np.broadcast_to(d, grid.shape) ** 2
    r = np.sqrt(r)
    safe = np.where(r == 0, 1.0, r)
    omegas = [np.broadcast_to(d, grid.shape) / safe for d in rel]
    return r, omegas


def null_frame_derivatives(
    phi: FreeWave, t: float, origin=((0.0, 0.0), 0.0)
) -> FrameDerivatives:
    """Frame derivatives E+-, A_i of phi(., t) about origin = (x0, t0).

    Points with |x - x0| < 4h are masked out (frame singular at r = 0).
    """
    g = phi.grid
    x0, t0 = origin
    j = jet(phi, t)
    r, om = radial_coords(g, x0)
    mask = r >= 4.0 * g.h
    sgn = 1.0 if t - t0 >= 0 else -1.0
    dr = np.zeros(g.shape, dtype=complex)
    for oi, di in zip(om, j.dx):
        dr = dr + oi * di
    e_plus = sgn * j.dt + dr
    e_minus = sgn * j.dt - dr
    angular = tuple(di - oi * dr for oi, di in zip(om, j.dx))
    return FrameDerivatives(e_plus, e_minus, angular, mask)
