import numpy as np
import pytest

from freewave.grid import Grid, lp_norm
from freewave.nullforms import (
    Q0,
    Qab,
    eval_nullform,
    jet,
    null_frame_derivatives,
    nullform_norm,
    standard_cube,
)
from freewave.waves import lattice_xi, plane_wave, random_wave, wave_scale, zero_wave


@pytest.fixture
def g():
    return Grid(n=2, N=128, L=32.0)


def test_qab_antisymmetry_same_wave(g):
    w = random_wave(g, 2.0, seed=1, half="both")
    for kind in (Qab(0, 1), Qab(1, 2), Qab(0, 2)):
        f = eval_nullform(kind, w, w, 1.0)
        assert np.max(np.abs(f.values)) < 1e-12


def test_q0_parallel_null_cancellation(g):
    # same-direction forward plane waves: xi.eta = |xi||eta| kills Q0
    xi = lattice_xi(g, (2.0, 0.0))
    w1 = plane_wave(g, xi)
    w2 = plane_wave(g, 2 * xi)
    f = eval_nullform(Q0, w1, w2, 0.7)
    scale = np.linalg.norm(xi) * np.linalg.norm(2 * xi)
    assert np.max(np.abs(f.values)) < 1e-12 * scale


def test_q0_orthogonal_plane_waves_closed_form(g):
    lam, mu = 2.0, 1.0
    xi = lattice_xi(g, (lam, 0.0))
    eta = lattice_xi(g, (0.0, mu))
    w1, w2 = plane_wave(g, xi), plane_wave(g, eta)
    f = eval_nullform(Q0, w1, w2, 0.3)
    # Q0 = phi_t psi_t - grad.grad = (-i|xi|)(-i|eta|) phi psi - 0
    expected = np.linalg.norm(xi) * np.linalg.norm(eta)
    amp = np.abs(f.values)
    assert np.allclose(amp, expected, rtol=1e-10)


def test_qab_symmetry_and_antisymmetry(g):
    phi = random_wave(g, 2.0, seed=3)
    psi = random_wave(g, 1.0, seed=4)
    a = eval_nullform(Q0, phi, psi, 0.9).values
    b = eval_nullform(Q0, psi, phi, 0.9).values
    scale = np.max(np.abs(a))
    assert np.max(np.abs(a - b)) < 1e-14 * scale
    c = eval_nullform(Qab(1, 2), phi, psi, 0.9).values
    d = eval_nullform(Qab(2, 1), phi, psi, 0.9).values
    assert np.max(np.abs(c + d)) < 1e-14 * np.max(np.abs(c))


def test_nullform_norm_zero_wave(g):
    w = random_wave(g, 2.0, seed=5)
    val, conv = nullform_norm(Q0, w, zero_wave(g), standard_cube(4.0))
    assert val == 0.0 and conv


def test_nullform_norm_static_surrogate(g):
    # time-independent integrand: norm = sqrt(R) * spatial L2 norm
    R = 4.0
    phi = random_wave(g, 2.0, seed=6)
    psi = random_wave(g, 1.0, seed=7)
    q = eval_nullform(Q0, phi, psi, 0.0)

    class Frozen:
        """Fake free waves by reusing fixed data at any time: emulate via direct calc."""

    from freewave.grid import box_mask

    region = box_mask(g, (0.0, 0.0), R)
    spatial = lp_norm(q, 2, region=region)
    # oracle: norm of a t-constant field over [t0, t0+R]
    expected = np.sqrt(R) * spatial
    ts = np.linspace(0, R, 17)
    direct = np.sqrt(np.trapezoid(np.full(17, spatial**2), ts))
    assert abs(direct - expected) < 1e-12 * expected


def test_nullform_norm_convergence(g):
    R = 8.0
    phi = random_wave(g, 1.0, seed=8)
    psi = random_wave(g, 1.0, seed=9)
    val, conv = nullform_norm(Q0, phi, psi, standard_cube(R), n_t=17)
    assert val > 0
    assert conv


def test_frame_identity_eplus_plus_eminus(g):
    w = random_wave(g, 2.0, seed=10)
    t = 3.0
    fr = null_frame_derivatives(w, t, origin=((g.L / 2, g.L / 2), 0.0))
    j = jet(w, t)
    resid = fr.e_plus + fr.e_minus - 2.0 * j.dt
    assert np.max(np.abs(resid[fr.mask])) < 1e-10 * np.max(np.abs(j.dt))


def test_angular_derivative_of_radial_field():
    g = Grid(n=2, N=128, L=32.0)
    c = (g.L / 2, g.L / 2)
    from freewave.waves import FreeWave

    # truly radial profile about c: radial symbol with a phase shift to c
    prof = np.exp(-((g.xi_norm - 2.0) ** 2))
    prof[g.xi_norm == 0] = 0.0
    phase = np.zeros(g.shape)
    for ci, xi_i in zip(c, g.xi_mesh):
        phase = phase + ci * xi_i
    radial = FreeWave(g, prof * np.exp(-1j * phase), np.zeros(g.shape, complex))
    fr = null_frame_derivatives(radial, 0.0, origin=(c, 0.0))
    amp = max(np.max(np.abs(a)) for a in (jet(radial, 0.0).dx))
    for a in fr.angular:
        assert np.max(np.abs(a[fr.mask])) < 1e-9 * amp


def test_outgoing_ray_good_derivative_small():
    # radial outgoing wave surrogate: E+ is small along the outgoing ray
    g = Grid(n=2, N=256, L=128.0)
    c = (g.L / 2, g.L / 2)
    prof = np.exp(-2.0 * (g.xi_norm - 1.0) ** 2)
    prof[g.xi_norm == 0] = 0.0
    from freewave.waves import FreeWave, normalize

    phase = np.zeros(g.shape)
    for ci, xi_i in zip(c, g.xi_mesh):
        phase = phase + ci * xi_i
    w = normalize(FreeWave(g, prof * np.exp(-1j * phase), np.zeros(g.shape, complex)))
    t = 24.0
    fr = null_frame_derivatives(w, t, origin=(c, 0.0))
    r, _ = radial_coords_for_test(g, c)
    on_shell = fr.mask & (np.abs(r - t) < 2.0)
    ratio = np.abs(fr.e_plus)[on_shell].max() / np.abs(fr.e_minus)[on_shell].max()
    assert ratio < 0.2


def radial_coords_for_test(g, c):
    from freewave.nullforms import radial_coords

    return radial_coords(g, c)


def test_null_frame_cancellation_bound():
    # |Q(phi,psi)| <= C (|Dslash phi||grad psi| + |grad phi||Dslash psi|), C <= 8
    g = Grid(n=2, N=128, L=64.0)
    c = (g.L / 2, g.L / 2)
    rng = np.random.default_rng(0)
    worst = 0.0
    t = 12.0
    for trial in range(50):
        phi = random_wave(g, 1.0, seed=100 + trial, localization=(c, 6.0))
        psi = random_wave(g, 2.0, seed=200 + trial, localization=(c, 6.0))
        kind = (Q0, Qab(0, 1), Qab(1, 2))[trial % 3]
        q = np.abs(eval_nullform(kind, phi, psi, t).values)
        fa = null_frame_derivatives(phi, t, origin=(c, 0.0))
        fb = null_frame_derivatives(psi, t, origin=(c, 0.0))
        ja, jb = jet(phi, t), jet(psi, t)
        denom = fa.good_norm * jb.grad_norm + ja.grad_norm * fb.good_norm
        m = fa.mask
        scale = np.max(ja.grad_norm) * np.max(jb.grad_norm)
        ratio = q[m] / np.maximum(denom[m], 1e-9 * scale)
        worst = max(worst, float(ratio.max()))
    assert worst <= 8.0
