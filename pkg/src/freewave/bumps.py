"""Shared family of smooth cutoff/step profiles with prolate concentration.

Every multiplier and spatial cutoff in the package is built from the single
step profile below: the normalized integral of a discrete prolate
spheroidal (Slepian) window.  Among profiles completing a 0 -> 1 transition
inside a fixed ramp, the Slepian shape is near-optimal for keeping the
kernel's energy inside a prescribed spatial radius, which is what the
localization budgets of the packet machinery require.  Gevrey-class
analytic bumps (exp(-1/(1-u^2)) and relatives) were measured to leave
kernel tails around 1e-3..1e-4 at the distances of interest -- orders of
magnitude too fat -- so they are not used.

The profile depends on one sharpness parameter `nw` (the Slepian
time-bandwidth number).  The kernel of a ramp of width w concentrates
inside |x| <~ 2*pi*nw/w, with an energy floor that drops rapidly with nw;
callers pick nw from their ramp width and target radius via `pick_nw`.

Steps satisfy step(u) + step(1-u) == 1 to ~1e-15, so partitions of unity
built from them telescope exactly.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.signal.windows import dpss

_TABLE_M = 16385


@lru_cache(maxsize=32)
def _step_spline(nw: float) -> CubicSpline:
    w = dpss(_TABLE_M, nw)
    w = np.maximum(w, 0.0)
    w = 0.5 * (w + w[::-1])  # enforce exact symmetry
    c = np.concatenate([[0.0], np.cumsum(0.5 * (w[1:] + w[:-1]))])
    c /= c[-1]
    c = 0.5 * (c + 1.0 - c[::-1])
    u = np.linspace(0.0, 1.0, _TABLE_M)
    return CubicSpline(u, c)


def smooth_step(u, nw: float = 3.0) -> np.ndarray:
    """C^2 monotone step: 0 for u <= 0, 1 for u >= 1, prolate-shaped ramp."""
    uu = np.clip(np.asarray(u, dtype=float), 0.0, 1.0)
    s = _step_spline(float(nw))(uu)
    return np.where(uu <= 0.0, 0.0, np.where(uu >= 1.0, 1.0, np.clip(s, 0.0, 1.0)))


def pick_nw(ramp_width: float, target_radius: float, lo: float = 1.5, hi: float = 6.0) -> float:
    """Sharpness whose kernel mainlobe ends just inside `target_radius`.

    The kernel of a width-`ramp_width` transition concentrates inside
    roughly 2*pi*nw/ramp_width; beyond that the energy drops to the
    Slepian floor.  Choosing nw slightly below ramp*radius/(2*pi) puts the
    floor at the target.
    """
    nw = ramp_width * target_radius / (2.0 * np.pi) - 0.25
    return float(min(max(nw, lo), hi))


def bump(u, nw: float = 3.0) -> np.ndarray:
    """Even bump: 1 at u = 0, supported on (-1, 1), built from two steps."""
    uu = np.abs(np.asarray(u, dtype=float))
    return smooth_step(2.0 * (1.0 - uu), nw)


def annulus_envelope(rho, support, plateau, nw: float = 3.0) -> np.ndarray:
    """Radial envelope equal to 1 on [plateau] and 0 outside (support).

    Parameters
    ----------
    rho : array
        Radial coordinate (|xi| values).
    support : (lo, hi)
        Open support interval; the envelope vanishes at and beyond its ends.
    plateau : (p_lo, p_hi)
        Closed interval where the envelope is exactly 1.
    """
    lo, hi = support
    p_lo, p_hi = plateau
    if not (lo < p_lo <= p_hi < hi):
        raise ValueError(f"need lo < p_lo <= p_hi < hi, got {support}, {plateau}")
    rho = np.asarray(rho, dtype=float)
    rise = smooth_step((rho - lo) / (p_lo - lo), nw)
    fall = smooth_step((hi - rho) / (hi - p_hi), nw)
    return rise * fall


def ball_bump(dist, radius, nw: float = 3.0, plateau_frac: float = 0.5) -> np.ndarray:
    """Cutoff equal to 1 for dist <= plateau_frac*radius and 0 for dist >= radius."""
    d = np.asarray(dist, dtype=float)
    if not 0.0 <= plateau_frac < 1.0:
        raise ValueError("plateau_frac must be in [0, 1)")
    return smooth_step((radius - d) / (radius * (1.0 - plateau_frac)), nw)


def lowpass_symbol(rho, band, nw: float = 3.0) -> np.ndarray:
    """Full-ramp low-pass symbol: 1 at rho = 0, 0 at and beyond rho = band.

    Using the whole band as the ramp maximizes the concentration product
    band*radius, which is what makes tight spatial cutoffs possible.
    """
    return smooth_step(1.0 - np.asarray(rho, dtype=float) / band, nw)
