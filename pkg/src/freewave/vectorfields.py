"""Poincare / conformal Killing vector fields and the decay machinery built
on them: commutation checks, weighted energies, three-region decay profiles,
and the fixed-time parallel-interaction ratio.

Coordinate weights x_i on the torus use the centered representative in
(-L/2, L/2] about each field's center; identities involving them are only
asserted for waves whose support stays away from the coordinate cut.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np
import scipy.fft as _fft

from .grid import Field, Grid, _forward_factor, lp_norm
from .nullforms import NullFormKind, eval_nullform, jet, null_frame_derivatives, radial_coords
from .waves import (
    FreeWave,
    WaveState,
    energy,
    evaluate,
    from_data,
    spectral_state,
    state_energy,
)

_W = -1


@dataclass(frozen=True)
class PoincareField:
    """One generator: S, L_i, Omega_ij, d_i, d_t, or the null direction d_t + d_e.

    kind: "S" | "L" | "Omega" | "dx" | "dt" | "null"
    """

    kind: str
    i: int = 0
    j: int = 0
    center: tuple = ((0.0, 0.0), 0.0)  # (x0, t0)
    direction: tuple | None = None  # for "null": unit spatial direction e

    def label(self) -> str:
        x0, t0 = self.center
        base = {
            "S": "S",
            "L": f"L_{self.i}",
            "Omega": f"Omega_{self.i}{self.j}",
            "dx": f"d_{self.i}",
            "dt": "d_t",
            "null": "d_t+d_e",
        }[self.kind]
        return base


def poincare_family(n: int, center=((0.0, 0.0), 0.0)) -> list:
    """The full collection Gamma = (S, L_1..L_n, Omega_ij) about a center."""
    fields = [PoincareField("S", center=center)]
    fields += [PoincareField("L", i=i, center=center) for i in range(1, n + 1)]
    fields += [
        PoincareField("Omega", i=i, j=j, center=center)
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
    ]
    return fields


def _spectral_pieces(w: FreeWave, t: float):
    """phi, phi_t, Delta phi, d_i phi, d_i phi_t at time t (physical arrays)."""
    g = w.grid
    p, v = spectral_state(w, t)
    fac = _forward_factor(g)

    def inv(a):
        return _fft.ifftn(a / fac, workers=_W)

    phi = inv(p)
    dt = inv(v)
    lap = inv(-(g.xi_norm**2) * p)
    dx = [inv(1j * xi_i * p) for xi_i in g.xi_mesh]
    dxt = [inv(1j * xi_i * v) for xi_i in g.xi_mesh]
    return phi, dt, lap, dx, dxt


def apply_field(w: FreeWave, F: PoincareField, t: float) -> WaveState:
    """(F phi)(t) together with its time derivative, as a WaveState.

    Because F maps free waves to free waves (S being conformal Killing with
    [Box, S] = 2 Box still preserves Box phi = 0), the result is data of a
    genuine free wave and can be fed back through from_data.
    """
    g = w.grid
    x0, t0 = F.center
    T = t - t0
    phi, dt, lap, dx, dxt = _spectral_pieces(w, t)
    X = [np.broadcast_to(c, g.shape) for c in g.centered_coords(x0)]

    if F.kind == "dx":
        pos, vel = dx[F.i - 1], dxt[F.i - 1]
    elif F.kind == "dt":
        pos, vel = dt, lap
    elif F.kind == "null":
        e = np.asarray(F.direction, dtype=float)
        e = e / np.linalg.norm(e)
        de = sum(ei * d for ei, d in zip(e, dx))
        det = sum(ei * d for ei, d in zip(e, dxt))
        pos, vel = dt + de, lap + det
    elif F.kind == "L":
        Xi = X[F.i - 1]
        pos = Xi * dt + T * dx[F.i - 1]
        vel = Xi * lap + dx[F.i - 1] + T * dxt[F.i - 1]
    elif F.kind == "Omega":
        Xi, Xj = X[F.i - 1], X[F.j - 1]
        pos = Xi * dx[F.j - 1] - Xj * dx[F.i - 1]
        vel = Xi * dxt[F.j - 1] - Xj * dxt[F.i - 1]
    elif F.kind == "S":
        rdr = sum(Xi * d for Xi, d in zip(X, dx))
        rdrt = sum(Xi * d for Xi, d in zip(X, dxt))
        pos = T * dt + rdr
        vel = dt + T * lap + rdrt
    else:
        raise ValueError(f"unknown field kind {F.kind!r}")
    return WaveState(Field(g, pos, "physical"), Field(g, vel, "physical"), t)


def field_wave(w: FreeWave, F: PoincareField, mean_tol: float = 1e-6) -> FreeWave:
    """F phi as a FreeWave (from its t = 0 data)."""
    return from_data(apply_field(w, F, 0.0), zero_mean_tol=mean_tol)


def commutation_check(w: FreeWave, F: PoincareField, t: float) -> float:
    """Relative energy error between evolving F phi[0] and applying F at time t."""
    direct = apply_field(w, F, t)
    evolved = evaluate(field_wave(w, F), t)
    g = w.grid
    diff = WaveState(
        Field(g, evolved.pos.values - direct.pos.values, "physical"),
        Field(g, evolved.vel.values - direct.vel.values, "physical"),
        t,
    )
    return state_energy(diff) / max(state_energy(direct), 1e-300)


def gamma_power_wave(w: FreeWave, fields: tuple, mean_tol: float = 1e-6) -> FreeWave:
    """Gamma^k phi for a specific tuple of generators (applied left to right)."""
    out = w
    for F in fields:
        out = field_wave(out, F, mean_tol=mean_tol)
    return out


def sample_multi_indices(n: int, k: int, center, rng, exhaustive_upto: int = 2, n_samples: int = 6):
    """Multi-index tuples over the Poincare family: all for k <= 2, sampled beyond."""
    fam = poincare_family(n, center=center)
    if k == 0:
        return [()]
    if k <= exhaustive_upto:
        return list(product(fam, repeat=k))
    picks = []
    for _ in range(n_samples):
        picks.append(tuple(fam[rng.integers(len(fam))] for _ in range(k)))
    return picks


def weighted_energy_report(
    w: FreeWave, center, k: int, mu: float, t: float, rng=None
) -> dict:
    """Compare ||(1 + mu |x-c|)^k grad phi(0)||_2 with ||grad Gamma^k phi(t)||_2.

    Returns the weighted data norm, the worst sampled Gamma^k energy norm,
    and their ratio (the measured constant of the weighted energy estimate).
    """
    if k > 4:
        raise ValueError("k <= 4 supported")
    g = w.grid
    rng = np.random.default_rng(0) if rng is None else rng
    d0 = jet(w, 0.0)
    dist = g.torus_distance(center)
    weight = (1.0 + mu * dist) ** k
    lhs = float(
        np.sqrt(np.sum((weight * d0.grad_norm) ** 2) * g.h**g.n)
    )
    worst = 0.0
    for idx in sample_multi_indices(g.n, k, (center, 0.0), rng):
        gw = gamma_power_wave(w, idx)
        val = np.sqrt(state_energy(evaluate(gw, t)))
        worst = max(worst, float(val))
    return {"weighted_data": lhs, "worst_gamma": worst, "ratio": worst / max(lhs, 1e-300)}


# ---------------------------------------------------------------------------
# Decay profiles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DecayProfile:
    times: tuple
    interior_sup: tuple  # r <= t/2
    shell_sup: tuple  # t/2 < r < 2t
    exterior_sup: tuple  # r >= 2t
    hypothesis_met: bool
    localization_tail: float


def localization_tail(w: FreeWave, center, lam_radius: float, order: int | None = None) -> float:
    """Finite-order surrogate of the weighted-tail hypothesis:
    (int_{|x-c| >= 2 Lam} (|x-c|/Lam)^{2M} |grad phi(0)|^2)^{1/2}."""
    g = w.grid
    if order is None:
        order = g.n + 1
    d0 = jet(w, 0.0)
    dist = g.torus_distance(center)
    far = dist >= 2.0 * lam_radius
    dens = (d0.grad_norm**2) * ((dist / lam_radius) ** (2 * order))
    return float(np.sqrt(np.sum(dens[far]) * g.h**g.n))


def decay_profile(w: FreeWave, center, lam_radius: float, times) -> DecayProfile:
    """Sup of |grad phi(t)| over interior / cone-shell / exterior regions."""
    g = w.grid
    tail = localization_tail(w, center, lam_radius)
    met = tail < 10.0 * np.sqrt(energy(w))
    dist = g.torus_distance(center)
    ints, shells, exts = [], [], []
    for t in times:
        gn = jet(w, t).grad_norm
        interior = dist <= t / 2.0
        exterior = dist >= 2.0 * t
        shell = ~interior & ~exterior
        ints.append(float(gn[interior].max()) if interior.any() else 0.0)
        shells.append(float(gn[shell].max()) if shell.any() else 0.0)
        exts.append(float(gn[exterior].max()) if exterior.any() else 0.0)
    return DecayProfile(tuple(times), tuple(ints), tuple(shells), tuple(exts), met, tail)


def frame_gain_profile(w: FreeWave, center, t: float, n_shells: int = 4) -> list:
    """Measured sup|Dslash phi| / sup|E- phi| on nested cone shells |r-t| < w_k.

    The good-derivative gain should shrink as the shell tightens onto the
    cone (bad derivatives only gain ||t| - |x||).
    """
    g = w.grid
    fr = null_frame_derivatives(w, t, origin=(center, 0.0))
    r, _ = radial_coords(g, center)
    good = fr.good_norm
    bad = np.abs(fr.e_minus)
    out = []
    for k in range(n_shells):
        width = t / 2.0 ** (k + 1)
        m = fr.mask & (np.abs(r - t) < width)
        if not m.any():
            out.append(np.nan)
            continue
        out.append(float(good[m].max() / max(bad[m].max(), 1e-300)))
    return out


def fixed_time_parallel_ratio(
    kind: NullFormKind,
    phi: FreeWave,
    psi: FreeWave,
    lam_radius: float,
    R: float,
    t: float,
    center=(0.0, 0.0),
) -> dict:
    """||Q(phi,psi)(t)||_2 against the (Lam/R)^{(n+1)/2} fixed-time envelope."""
    g = phi.grid
    q = eval_nullform(kind, phi, psi, t)
    num = lp_norm(q, 2)
    env = (lam_radius / R) ** ((g.n + 1) / 2.0) * np.sqrt(energy(phi) * energy(psi))
    flags = []
    if not R <= t <= 2 * R:
        flags.append("time outside [R, 2R]")
    if not np.sqrt(R) < lam_radius < R:
        flags.append("radius outside (sqrt(R), R)")
    for w, name in ((phi, "phi"), (psi, "psi")):
        if localization_tail(w, center, lam_radius) > 10.0 * np.sqrt(energy(w)):
            flags.append(f"{name} not localized")
    return {"norm": num, "envelope": env, "ratio": num / env, "flags": flags}
