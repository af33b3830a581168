"""Tubes, dyadic cubes, the bilinear Whitney close/parallel classification,
and transverse tube-intersection bounds.

Pure continuum geometry in R^n (no grid); the packet machinery maps tubes
onto the torus separately.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

HORIZON_FACTOR = 3.0  # tubes extend over 0 <= t <= 3R


@dataclass(frozen=True)
class Tube:
    """Spacetime tube {(x,t): |x - t*omega - x0| <= r, 0 <= t <= 3R}."""

    R: float
    r: float
    omega: tuple
    x0: tuple

    def __post_init__(self):
        w = np.asarray(self.omega, dtype=float)
        if abs(np.linalg.norm(w) - 1.0) > 1e-14:
            raise ValueError(f"|omega| = {np.linalg.norm(w)} is not 1")
        if not 1.0 <= self.r <= self.R:
            raise ValueError(f"need 1 <= r <= R, got r={self.r}, R={self.R}")

    @property
    def t_max(self) -> float:
        return HORIZON_FACTOR * self.R

    def center(self, t) -> np.ndarray:
        return np.asarray(self.x0, dtype=float) + np.multiply.outer(
            np.asarray(t, dtype=float), np.asarray(self.omega, dtype=float)
        )

    def contains(self, x, t) -> bool:
        if not 0.0 <= t <= self.t_max:
            return False
        return np.linalg.norm(np.asarray(x, dtype=float) - self.center(t)) <= self.r


def tube_distance(x, t, tube: Tube) -> float:
    """Euclidean spacetime distance from the point (x, t) to the tube set.

    The tube is convex, so the slice-distance is minimized by a scalar
    convex problem over the time parameter.
    """
    x = np.asarray(x, dtype=float)
    if tube.contains(x, t):
        return 0.0
    v = x - np.asarray(tube.x0, dtype=float)
    w = np.asarray(tube.omega, dtype=float)

    def sq(s):
        gap = max(np.linalg.norm(v - s * w) - tube.r, 0.0)
        return gap * gap + (t - s) * (t - s)

    res = minimize_scalar(sq, bounds=(0.0, tube.t_max), method="bounded",
                          options={"xatol": 1e-10})
    return float(np.sqrt(min(res.fun, sq(0.0), sq(tube.t_max))))


# ---------------------------------------------------------------------------
# Dyadic cubes and the Whitney close/parallel machinery
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RootCube:
    corner: tuple
    side: float


@dataclass(frozen=True)
class DyadicCube:
    """Dyadic subcube of a root cube: level j has side root.side / 2^j."""

    root: RootCube
    level: int
    index: tuple  # integer coordinates, each in [0, 2^level)

    @property
    def side(self) -> float:
        return self.root.side / (1 << self.level)

    @property
    def corner(self) -> np.ndarray:
        return np.asarray(self.root.corner, dtype=float) + self.side * np.asarray(self.index)

    def parent(self) -> "DyadicCube":
        if self.level == 0:
            raise ValueError("root cube has no parent")
        return DyadicCube(self.root, self.level - 1, tuple(i // 2 for i in self.index))


def containing_cube(root: RootCube, point, level: int) -> DyadicCube:
    side = root.side / (1 << level)
    rel = (np.asarray(point, dtype=float) - np.asarray(root.corner, dtype=float)) / side
    idx = np.floor(rel).astype(int)
    if np.any(idx < 0) or np.any(idx >= (1 << level)):
        raise ValueError(f"point {point} outside root cube")
    return DyadicCube(root, level, tuple(int(i) for i in idx))


def adjacent(a: DyadicCube, b: DyadicCube) -> bool:
    """Touching at faces or corners; a cube is adjacent to itself."""
    if a.level != b.level:
        raise ValueError("adjacency requires equal side-lengths")
    return max(abs(i - j) for i, j in zip(a.index, b.index)) <= 1


def close_relation(a: DyadicCube, b: DyadicCube) -> bool:
    """The Whitney 'close' relation: not adjacent, but parents adjacent."""
    if a.level != b.level:
        raise ValueError("close relation requires equal side-lengths")
    if a.level == 0:
        return False
    return (not adjacent(a, b)) and adjacent(a.parent(), b.parent())


@dataclass(frozen=True)
class PairClassification:
    transverse: bool
    cube_a: DyadicCube
    cube_b: DyadicCube

    @property
    def scale(self) -> float:
        return self.cube_a.side


def _jitter(point, root: RootCube, rho0: float) -> np.ndarray:
    """Deterministically push coordinates off dyadic boundaries."""
    p = np.asarray(point, dtype=float).copy()
    eps = rho0 / 17.0
    finest = rho0 / 2.0
    rel = (p - np.asarray(root.corner)) / finest
    on_boundary = np.abs(rel - np.round(rel)) < 1e-12
    p[on_boundary] += eps
    return p


def classify_pair(ta: Tube, tb: Tube, rho0: float, root: RootCube) -> PairClassification:
    """Stopping-time walk down the dyadic tree from the root.

    Returns Transverse with the first close pair of containing cubes, or
    Parallel with the side-rho0 containing cubes (then equal or adjacent).
    """
    depth_f = np.log2(root.side / rho0)
    depth = int(round(depth_f))
    if abs(depth_f - depth) > 1e-9 or depth < 0:
        raise ValueError(f"rho0 = {rho0} is not a dyadic fraction of the root side")
    pa = _jitter(ta.x0, root, rho0)
    pb = _jitter(tb.x0, root, rho0)
    for level in range(depth + 1):
        ca = containing_cube(root, pa, level)
        cb = containing_cube(root, pb, level)
        if close_relation(ca, cb):
            return PairClassification(True, ca, cb)
        if not adjacent(ca, cb):
            raise AssertionError("dichotomy violated: separated without a close ancestor")
    if not adjacent(ca, cb):
        raise AssertionError("parallel cubes must be equal or adjacent")
    return PairClassification(False, ca, cb)


# ---------------------------------------------------------------------------
# Transverse intersections
# ---------------------------------------------------------------------------


class NotTransverseError(ValueError):
    pass


def transverse_intersection_box(
    ta: Tube, tb: Tube, rho: float, t_window=None, n_samples: int = 4096
) -> dict:
    """Bounding-cube side of the sampled tube intersection, vs the R*r/rho scale.

    Samples times in `t_window` (default [R, 2R]); per time the slice
    intersection of the two balls is boxed by the intersection of their
    bounding boxes.  Returns measured side, the reference R*r/rho, and
    their ratio.
    """
    if np.allclose(ta.omega, tb.omega):
        raise NotTransverseError("parallel tubes: no finite intersection bound")
    R = ta.R
    t0, t1 = (R, 2 * R) if t_window is None else t_window
    ts = np.linspace(t0, t1, n_samples)
    ca = ta.center(ts)
    cb = tb.center(ts)
    gap = np.linalg.norm(ca - cb, axis=1)
    hit = gap <= ta.r + tb.r
    if not np.any(hit):
        raise NotTransverseError("tubes do not intersect in the window")
    lo = np.maximum(ca[hit] - ta.r, cb[hit] - tb.r)
    hi = np.minimum(ca[hit] + ta.r, cb[hit] + tb.r)
    mins = np.concatenate([lo.min(axis=0), [ts[hit].min()]])
    maxs = np.concatenate([hi.max(axis=0), [ts[hit].max()]])
    side = float(np.max(maxs - mins))
    ref = R * max(ta.r, tb.r) / rho
    return {"side": side, "reference": ref, "ratio": side / ref}


def close_pair_multiplicity(cubes: list) -> int:
    """max over cubes kappa of #{kappa' close to kappa} within the family."""
    worst = 0
    for a in cubes:
        worst = max(worst, sum(1 for b in cubes if close_relation(a, b)))
    return worst
