"""Spectral multipliers: Littlewood-Paley projections, fractional derivatives,
angular sector projections, and band-limited spatial cutoff partitions.

A Multiplier is a symbol sampled on the frequency lattice; applying one to a
FreeWave multiplies both half-wave coefficient arrays, so the result is again
an exact free wave.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.fft as _fft

from .bumps import annulus_envelope, lowpass_symbol, pick_nw, smooth_step
from .grid import Field, Grid, GridMismatchError, _forward_factor
from .waves import FreeWave, WaveState, default_band

_W = -1


@dataclass(frozen=True)
class Multiplier:
    """Fourier multiplier with symbol sampled on the grid's frequency lattice."""

    grid: Grid
    symbol: np.ndarray = field(repr=False)
    label: str = ""

    def __post_init__(self):
        if self.symbol.shape != self.grid.shape:
            raise GridMismatchError("symbol shape does not match grid")


def apply_multiplier(w: FreeWave, m: Multiplier) -> FreeWave:
    if w.grid != m.grid:
        raise GridMismatchError("wave and multiplier on different grids")
    return FreeWave(w.grid, w.a_plus * m.symbol, w.a_minus * m.symbol)


def apply_multiplier_state(d: WaveState, m: Multiplier) -> WaveState:
    """Apply a multiplier to raw position/velocity data (not half-wave split)."""
    g = d.grid
    fac = _forward_factor(g)
    out = []
    for f in (d.pos, d.vel):
        spec = _fft.fftn(f.values, workers=_W) * fac
        out.append(Field(g, _fft.ifftn(spec * m.symbol / fac, workers=_W), "physical"))
    return WaveState(out[0], out[1], d.time)


# ---------------------------------------------------------------------------
# Littlewood-Paley projections and fractional derivatives
# ---------------------------------------------------------------------------


def lp_symbol(grid: Grid, lam: float, band=None, plateau=None, nw=None) -> Multiplier:
    """Annulus bump at |xi| ~ lam: 1 on the plateau, 0 outside the band."""
    b, pl = default_band(lam) if band is None else (tuple(band), None)
    if plateau is not None:
        pl = tuple(plateau)
    elif pl is None:
        lo, hi = b
        w = 0.2 * (hi - lo)
        pl = (lo + w, hi - w)
    grid.check_headroom(b[1])
    if nw is None:
        ramp = min(pl[0] - b[0], b[1] - pl[1])
        nw = pick_nw(ramp, grid.L / 3.0)
    sym = annulus_envelope(grid.xi_norm, b, pl, nw=nw)
    return Multiplier(grid, sym, f"P_{lam:g}")


def lp_project(w: FreeWave, lam: float, band=None, plateau=None, nw=None) -> FreeWave:
    return apply_multiplier(w, lp_symbol(w.grid, lam, band, plateau, nw))


def dyadic_symbols(grid: Grid, lam_min: float, lam_max: float, nw: float = 3.0) -> list:
    """Dyadic Littlewood-Paley partition covering [lam_min, lam_max].

    Built from telescoping steps S(|xi|/lam) so that the symbols sum to
    exactly 1 on lam_min <= |xi| <= lam_max (and the lowest piece also
    covers everything below lam_min except the zero mode).
    """
    lams = []
    lam = lam_min
    while lam <= lam_max * (1 + 1e-12):
        lams.append(lam)
        lam *= 2.0
    # the top piece absorbs everything up to the lattice boundary, so the
    # partition sums to exactly 1 on every mode; no headroom check needed
    rho = grid.xi_norm

    def cum(level):
        # 1 below level, ramps to 0 at 2*level
        return smooth_step(2.0 - rho / level, nw)

    out = []
    prev = np.zeros(grid.shape)
    for j, lam in enumerate(lams):
        cur = cum(lam) if j < len(lams) - 1 else np.ones(grid.shape)
        sym = cur - prev if j > 0 else cur
        prev = cur
        out.append(Multiplier(grid, sym, f"LP_{lam:g}"))
    return out


def frac_derivative(w: FreeWave, a: float, kind: str = "homogeneous") -> FreeWave:
    """|D|^a (homogeneous) or <D>^a (inhomogeneous) per-mode multiplier."""
    g = w.grid
    rho = g.xi_norm
    if kind == "homogeneous":
        sym = np.zeros(g.shape)
        nz = rho > 0
        sym[nz] = rho[nz] ** a
        # zero mode stays zero: free waves exclude it and |xi|^a may be singular
    elif kind == "inhomogeneous":
        sym = (1.0 + rho**2) ** (a / 2.0)
    else:
        raise ValueError(f"kind must be 'homogeneous' or 'inhomogeneous', got {kind!r}")
    return apply_multiplier(w, Multiplier(g, sym, f"|D|^{a:g}" if kind == "homogeneous" else f"<D>^{a:g}"))


# ---------------------------------------------------------------------------
# Angular sectors
# ---------------------------------------------------------------------------


def _angles_to(grid: Grid, omega) -> np.ndarray:
    """Pointwise angle between xi and the unit direction omega (zero mode -> 0)."""
    omega = np.asarray(omega, dtype=float)
    omega = omega / np.linalg.norm(omega)
    xin = grid.xi_norm.copy()
    xin[xin == 0] = 1.0
    c = np.zeros(grid.shape)
    for oi, xi_i in zip(omega, grid.xi_mesh):
        c = c + oi * xi_i
    return np.arccos(np.clip(c / xin, -1.0, 1.0))


def sector_symbol(
    grid: Grid,
    mu: float,
    omega,
    theta: float,
    radial_band=None,
    radial_plateau=None,
    nw_ang: float | None = None,
    nw_rad: float | None = None,
) -> Multiplier:
    """Projection onto the sector of angular half-width theta about omega,
    radially confined to the |xi| ~ mu annulus."""
    min_theta = 2.0 * np.pi / max(int(np.pi * mu * grid.L / (2 * np.pi)), 1)
    if theta < min_theta:
        raise ValueError(
            f"angular width {theta:g} below lattice resolution {min_theta:g} at radius {mu / 2:g}"
        )
    b, pl = default_band(mu) if radial_band is None else (tuple(radial_band), None)
    if radial_plateau is not None:
        pl = tuple(radial_plateau)
    elif pl is None:
        lo, hi = b
        wdt = 0.2 * (hi - lo)
        pl = (lo + wdt, hi - wdt)
    grid.check_headroom(b[1])
    if nw_rad is None:
        nw_rad = pick_nw(min(pl[0] - b[0], b[1] - pl[1]), grid.L / 3.0)
    if nw_ang is None:
        # effective transverse ramp is theta * (inner annulus radius)
        nw_ang = pick_nw(theta * mu / 2.0, grid.L / 6.0)
    ang = _angles_to(grid, omega)
    # full-width angular ramp: no plateau, best spatial concentration
    sym = smooth_step(1.0 - ang / theta, nw_ang) * annulus_envelope(
        grid.xi_norm, b, pl, nw=nw_rad
    )
    return Multiplier(grid, sym, f"P_{mu:g},{np.round(omega, 3)}")


def sector_project(w: FreeWave, mu: float, omega, theta: float, **kw) -> FreeWave:
    return apply_multiplier(w, sector_symbol(w.grid, mu, omega, theta, **kw))


@dataclass(frozen=True)
class AngularPartition:
    """Partition of unity on the circle by M arcs (n = 2 only).

    eta_j(theta) >= 0, supported on an arc of half-width `width` about
    direction theta_j = 2*pi*j/M, with sum_j eta_j == 1 exactly.  The arcs
    use a full-width ramp (no plateau) so their kernels concentrate as
    tightly as the arc width permits.
    """

    M: int
    overlap: float = 1.25  # arc half-width in units of the spacing 2*pi/M
    nw: float = 3.0

    @property
    def directions(self) -> np.ndarray:
        th = 2.0 * np.pi * np.arange(self.M) / self.M
        return np.stack([np.cos(th), np.sin(th)], axis=1)

    @property
    def width(self) -> float:
        return self.overlap * 2.0 * np.pi / self.M

    def raw(self, theta: np.ndarray, j: int) -> np.ndarray:
        d = np.abs(np.mod(theta - 2.0 * np.pi * j / self.M + np.pi, 2.0 * np.pi) - np.pi)
        return smooth_step(1.0 - d / self.width, self.nw)

    def values(self, theta: np.ndarray, j: int) -> np.ndarray:
        tot = np.zeros_like(theta)
        for k in range(self.M):
            tot += self.raw(theta, k)
        return self.raw(theta, j) / tot


def angular_partition_symbols(
    grid: Grid,
    mu: float,
    M: int,
    radial_band,
    radial_plateau,
    nw_ang: float | None = None,
    nw_rad: float | None = None,
    overlap: float = 1.4,
) -> tuple:
    """Sector multipliers (one per direction) whose sum is the radial envelope.

    Returns (directions (M, 2), list of symbols).  n = 2 only: directions are
    uniform on the circle at spacing 2*pi/M.
    """
    if grid.n != 2:
        raise NotImplementedError("angular partitions are implemented for n = 2")
    part = AngularPartition(M, overlap=overlap, nw=nw_ang if nw_ang is not None else 3.0)
    if nw_rad is None:
        nw_rad = pick_nw(min(radial_plateau[0] - radial_band[0], radial_band[1] - radial_plateau[1]), grid.L / 3.0)
    radial = annulus_envelope(grid.xi_norm, radial_band, radial_plateau, nw=nw_rad)
    theta = np.arctan2(
        np.broadcast_to(grid.xi_mesh[1], grid.shape), np.broadcast_to(grid.xi_mesh[0], grid.shape)
    )
    tot = np.zeros(grid.shape)
    raws = []
    for j in range(M):
        r = part.raw(theta, j)
        raws.append(r)
        tot += r
    tot[tot == 0] = 1.0
    syms = [Multiplier(grid, radial * r / tot, f"sector_{j}") for j, r in enumerate(raws)]
    return part.directions, syms


# ---------------------------------------------------------------------------
# Band-limited spatial cutoff partitions (chi_{x0} = P_band applied to a cube
# indicator, evaluated analytically through the continuum cube transform)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CutoffFamily:
    """Partition of unity 1 = sum chi_{x0} over a spacing-s lattice of centers.

    chi_{x0} is the band-limited mollification of the continuum indicator of
    the s-cube at x0: its Fourier transform is lowpass(|xi|) * cube_hat(xi) *
    e^{-i xi.x0}, exactly supported in |xi| <= band.  The partition property
    holds exactly on the frequency lattice because the only center-lattice
    resonance inside the band is xi = 0.
    """

    grid: Grid
    m_per_axis: int
    band: float
    nw: float = 3.0

    def __post_init__(self):
        if self.grid.L / self.m_per_axis * self.band >= 2.0 * np.pi:
            raise ValueError("band too wide for exact partition (s*band must be < 2*pi)")

    @property
    def spacing(self) -> float:
        return self.grid.L / self.m_per_axis

    @cached_property
    def centers(self) -> np.ndarray:
        ax = np.arange(self.m_per_axis) * self.spacing
        grids = np.meshgrid(*([ax] * self.grid.n), indexing="ij")
        return np.stack([c.ravel() for c in grids], axis=1)

    @cached_property
    def kernel_hat(self) -> np.ndarray:
        """Spectral side of chi centered at the origin (real, even)."""
        g = self.grid
        s = self.spacing
        cube = np.ones(g.shape)
        for xi_i in g.xi_mesh:
            cube = cube * np.sinc(xi_i * s / (2.0 * np.pi))
        # cube_hat normalized so chi(0-center) integrates the indicator: s^n sinc...
        low = lowpass_symbol(g.xi_norm, self.band, nw=self.nw)
        return cube * low * (s**g.n / g.L**g.n)  # DC coefficient = s^n/L^n

    def cutoff_hat(self, center) -> np.ndarray:
        g = self.grid
        phase = np.zeros(g.shape)
        for ci, xi_i in zip(np.asarray(center, dtype=float), g.xi_mesh):
            phase = phase + ci * xi_i
        return self.kernel_hat * np.exp(-1j * phase)

    def cutoff(self, center) -> np.ndarray:
        """Physical-space chi_{x0} (real array; bounded, rapidly decaying)."""
        vals = _fft.ifftn(self.cutoff_hat(center) * self.grid.N**self.grid.n, workers=_W)
        return np.real(vals)

    def decay_constant(self, M: int | None = None) -> float:
        """Measured C_M in |chi(x)| <= C_M (1 + |x - x0|/s)^{-M}, M = 2n+2 default."""
        if M is None:
            M = 2 * self.grid.n + 2
        chi = np.abs(self.cutoff((0.0,) * self.grid.n))
        d = self.grid.torus_distance((0.0,) * self.grid.n)
        return float(np.max(chi * (1.0 + d / self.spacing) ** M))

    def partition_residual(self) -> float:
        """max_x |sum_{x0} chi_{x0}(x) - 1| (at rounding level by construction).

        The phase sum over the center lattice vanishes except on the resonant
        modes xi in (2*pi/s)Z^n, i.e. k-indices divisible by m_per_axis.
        """
        g = self.grid
        k = np.fft.fftfreq(g.N, d=1.0 / g.N).astype(int)
        res = (k % self.m_per_axis) == 0
        mask = np.ones(g.shape, dtype=bool)
        for ax in range(g.n):
            shape = [1] * g.n
            shape[ax] = g.N
            mask = mask & res.reshape(shape)
        total_hat = np.where(mask, self.kernel_hat, 0.0) * float(self.m_per_axis**g.n)
        total = np.real(_fft.ifftn(total_hat.astype(complex) * g.N**g.n, workers=_W))
        return float(np.max(np.abs(total - 1.0)))


def spatial_cutoff(d: WaveState, family: CutoffFamily, center) -> WaveState:
    """Multiply position and velocity by chi_{center} pointwise."""
    cen = np.asarray(center, dtype=float)
    dists = np.linalg.norm(
        (family.centers - cen + family.grid.L / 2) % family.grid.L - family.grid.L / 2, axis=1
    )
    if dists.min() > 1e-9 * family.grid.L:
        raise ValueError(f"{center} is not a partition center")
    chi = family.cutoff(cen)
    return WaveState(
        Field(d.grid, d.pos.values * chi, "physical"),
        Field(d.grid, d.vel.values * chi, "physical"),
        d.time,
    )
