"""Periodic spatial grid, complex fields, and Plancherel-normalized transforms.

The spatial domain is the torus [0, L)^n sampled at N points per axis
(h = L/N).  The frequency lattice is xi_k = 2*pi*k/L with integer k per
axis in numpy FFT order.  Transforms are normalized so that the discrete
L^2 norm (quadrature weight h^n) equals the l^2 norm of the spectral
coefficients exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.fft as _fft

_FFT_WORKERS = -1  # scipy.fft: use all available cores


class GridMismatchError(ValueError):
    """Two fields living on different grids were combined."""


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on [0, L)^n.

    Parameters
    ----------
    n : int
        Spatial dimension, n >= 2.
    N : int
        Points per axis; must be an even power of two.
    L : float
        Box side length.
    """

    n: int
    N: int
    L: float

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"dimension n={self.n} must be >= 2")
        if self.N < 2 or (self.N & (self.N - 1)) != 0:
            raise ValueError(f"N={self.N} must be a power of two")
        if not self.L > 0:
            raise ValueError(f"box size L={self.L} must be positive")

    @property
    def h(self) -> float:
        return self.L / self.N

    @property
    def shape(self) -> tuple:
        return (self.N,) * self.n

    @property
    def xi_max(self) -> float:
        """Largest resolved |xi| along an axis (pi*N/L)."""
        return np.pi * self.N / self.L

    @cached_property
    def x_axes(self) -> tuple:
        ax = np.arange(self.N) * self.h
        return (ax,) * self.n

    @cached_property
    def xi_axes(self) -> tuple:
        # 2*pi*k/L for k in numpy FFT order
        ax = 2.0 * np.pi * np.fft.fftfreq(self.N, d=self.h)
        return (ax,) * self.n

    @cached_property
    def xi_mesh(self) -> tuple:
        return np.meshgrid(*self.xi_axes, indexing="ij", sparse=True)

    @cached_property
    def xi_norm(self) -> np.ndarray:
        s = np.zeros(self.shape)
        for c in self.xi_mesh:
            s = s + c**2
        return np.sqrt(s)

    @cached_property
    def x_mesh(self) -> tuple:
        return np.meshgrid(*self.x_axes, indexing="ij", sparse=True)

    def centered_coords(self, center) -> list:
        """Coordinate arrays x_i - center_i using the representative in (-L/2, L/2]."""
        out = []
        for i, c in enumerate(self.x_mesh):
            d = c - center[i]
            d = d - self.L * np.round(d / self.L)
            out.append(d)
        return out

    def torus_distance(self, center) -> np.ndarray:
        """Pointwise periodic distance |x - center| on the torus."""
        s = np.zeros(self.shape)
        for d in self.centered_coords(center):
            s = s + d**2
        return np.sqrt(s)

    def check_headroom(self, xi_top: float, margin: float = 0.9) -> None:
        """Require spectral support up to |xi| = xi_top to fit inside the lattice.

        The inscribed spectral ball has radius pi*N/L; smooth multipliers
        must vanish before it with a safety margin.
        """
        if xi_top > margin * self.xi_max:
            raise ValueError(
                f"spectral support |xi|<={xi_top:g} exceeds headroom "
                f"{margin:g}*pi*N/L={margin * self.xi_max:g}"
            )


@dataclass(frozen=True)
class Field:
    """Complex scalar field on a Grid, in physical or spectral representation."""

    grid: Grid
    values: np.ndarray = field(repr=False)
    rep: str = "physical"  # "physical" | "spectral"

    def __post_init__(self):
        if self.rep not in ("physical", "spectral"):
            raise ValueError(f"unknown representation {self.rep!r}")
        if self.values.shape != self.grid.shape:
            raise GridMismatchError(
                f"values shape {self.values.shape} != grid shape {self.grid.shape}"
            )


def _forward_factor(grid: Grid) -> float:
    # per-axis sqrt(L)/N so that sum_k |F_k|^2 == sum_x |f_x|^2 h^n
    return (np.sqrt(grid.L) / grid.N) ** grid.n


def to_spectral(f: Field) -> Field:
    if f.rep == "spectral":
        raise ValueError("field already spectral")
    vals = _fft.fftn(f.values, workers=_FFT_WORKERS) * _forward_factor(f.grid)
    return Field(f.grid, vals, "spectral")


def to_physical(f: Field) -> Field:
    if f.rep == "physical":
        raise ValueError("field already physical")
    vals = _fft.ifftn(f.values, workers=_FFT_WORKERS) / _forward_factor(f.grid)
    return Field(f.grid, vals, "physical")


def spectral_values(f: Field) -> np.ndarray:
    return f.values if f.rep == "spectral" else to_spectral(f).values


def physical_values(f: Field) -> np.ndarray:
    return f.values if f.rep == "physical" else to_physical(f).values


def box_mask(grid: Grid, corner, side) -> np.ndarray:
    """Boolean mask of the half-open axis-aligned box prod_i [corner_i, corner_i+side_i).

    Boxes may wrap around the torus.  `side` is a scalar or per-axis sequence.
    """
    sides = np.broadcast_to(np.asarray(side, dtype=float), (grid.n,))
    if np.any(sides <= 0) or np.any(sides > grid.L):
        raise ValueError(f"box sides {sides} outside (0, L]")
    mask = np.ones(grid.shape, dtype=bool)
    for i, ax in enumerate(grid.x_mesh):
        rel = np.mod(ax - corner[i], grid.L)
        # add a half-spacing tolerance so corners on lattice points are stable
        m = rel < sides[i] - 0.5 * grid.h if sides[i] < grid.L else np.ones_like(rel, bool)
        mask = mask & np.broadcast_to(m, grid.shape)
    return mask


def lp_norm(f: Field, p: float, region: np.ndarray | None = None) -> float:
    """L^p norm over the grid (or a boolean region mask), quadrature weight h^n.

    p = inf returns the sup over the region.
    """
    if f.rep != "physical":
        raise ValueError("lp_norm expects a physical-representation field")
    a = np.abs(f.values)
    if region is not None:
        if region.shape != f.grid.shape:
            raise GridMismatchError("region mask shape does not match grid")
        if not region.any():
            raise ValueError("empty region")
        a = a[region]
    if np.isinf(p):
        return float(a.max())
    if p < 1:
        raise ValueError(f"p={p} must be >= 1")
    hn = f.grid.h**f.grid.n
    return float((np.sum(a**p) * hn) ** (1.0 / p))
