import numpy as np
import pytest

from freewave.grid import Field, Grid, box_mask, lp_norm, to_physical, to_spectral


def direct_dft(values, grid):
    """O(N^{2n}) reference DFT with the package normalization (oracle)."""
    N, n, L = grid.N, grid.n, grid.L
    h = grid.h
    ks = [np.fft.fftfreq(N, d=1.0 / N).astype(int) for _ in range(n)]
    out = np.zeros(grid.shape, dtype=complex)
    x = np.arange(N) * h
    for idx in np.ndindex(*grid.shape):
        xi = np.array([2 * np.pi * ks[d][idx[d]] / L for d in range(n)])
        acc = 0.0 + 0.0j
        for jdx in np.ndindex(*grid.shape):
            pos = np.array([x[j] for j in jdx])
            acc += values[jdx] * np.exp(-1j * np.dot(xi, pos))
        out[idx] = acc
    return out * (np.sqrt(L) / N) ** n


@pytest.fixture
def g8():
    return Grid(n=2, N=8, L=4.0)


def test_roundtrip_matches_direct_dft(g8):
    rng = np.random.default_rng(3)
    vals = rng.standard_normal(g8.shape) + 1j * rng.standard_normal(g8.shape)
    f = Field(g8, vals, "physical")
    spec = to_spectral(f)
    ref = direct_dft(vals, g8)
    assert np.max(np.abs(spec.values - ref)) < 1e-12 * np.max(np.abs(ref))
    back = to_physical(spec)
    assert np.max(np.abs(back.values - vals)) <= 1e-12 * np.max(np.abs(vals))


def test_constant_field_is_zero_mode(g8):
    f = Field(g8, np.ones(g8.shape, dtype=complex), "physical")
    spec = to_spectral(f).values
    assert abs(spec[0, 0] - g8.L ** (g8.n / 2)) < 1e-12
    spec[0, 0] = 0.0
    assert np.max(np.abs(spec)) < 1e-13


def test_plane_wave_single_coefficient(g8):
    k = (2, 3)
    xi = 2 * np.pi * np.array(k) / g8.L
    X, Y = np.meshgrid(*g8.x_axes, indexing="ij")
    f = Field(g8, np.exp(1j * (xi[0] * X + xi[1] * Y)), "physical")
    spec = to_spectral(f).values
    assert abs(spec[k]) > 0.99 * g8.L ** (g8.n / 2)
    spec[k] = 0.0
    assert np.max(np.abs(spec)) < 1e-11


def test_plancherel_100_random_fields():
    g = Grid(n=2, N=32, L=7.0)
    rng = np.random.default_rng(11)
    for _ in range(100):
        vals = rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape)
        f = Field(g, vals, "physical")
        phys = lp_norm(f, 2)
        spec = np.sqrt(np.sum(np.abs(to_spectral(f).values) ** 2))
        assert abs(phys - spec) <= 1e-12 * spec


def test_lp_norm_constant_and_zero(g8):
    one = Field(g8, np.ones(g8.shape, dtype=complex), "physical")
    assert abs(lp_norm(one, 2) - g8.L ** (g8.n / 2)) < 1e-12
    zero = Field(g8, np.zeros(g8.shape, dtype=complex), "physical")
    assert lp_norm(zero, 2) == 0.0
    assert lp_norm(one, np.inf) == 1.0


def test_lp_norm_half_box_indicator(g8):
    mask = box_mask(g8, (0.0, 0.0), (g8.L / 2, g8.L))
    vals = np.where(mask, 1.0 + 0j, 0.0)
    f = Field(g8, vals, "physical")
    # closed form: count * h^n = L^n / 2
    direct = np.sum(np.abs(vals)) * g8.h**g8.n
    assert abs(direct - g8.L**g8.n / 2) < 1e-12
    assert abs(lp_norm(f, 1) - g8.L**g8.n / 2) < 1e-12


def test_lp_norm_region_errors(g8):
    f = Field(g8, np.ones(g8.shape, dtype=complex), "physical")
    with pytest.raises(ValueError):
        lp_norm(f, 2, region=np.zeros(g8.shape, dtype=bool))


def test_quadrature_consistency_under_refinement():
    # smooth positive field sampled on N and 2N: norms agree to 1e-10
    L = 2 * np.pi

    def sample(N):
        g = Grid(n=2, N=N, L=L)
        X, Y = np.meshgrid(*g.x_axes, indexing="ij")
        vals = 2.0 + np.cos(3 * X) * np.sin(2 * Y) + 0.3j * np.sin(X + Y)
        return g, Field(g, vals.astype(complex), "physical")

    for p in (1.0, 2.0, 3.5):
        gc, fc = sample(64)
        gf, ff = sample(128)
        a, b = lp_norm(fc, p), lp_norm(ff, p)
        assert abs(a - b) <= 1e-10 * abs(b)


def test_grid_validation():
    with pytest.raises(ValueError):
        Grid(n=1, N=8, L=1.0)
    with pytest.raises(ValueError):
        Grid(n=2, N=12, L=1.0)
    with pytest.raises(ValueError):
        Grid(n=2, N=8, L=-1.0)
