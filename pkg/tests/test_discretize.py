import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardylab import discretize, domains
from hardylab.discretize import build_grid, laplacian
from hardylab.errors import ResolutionError

from conftest import square_mode


def test_grid_examples(square, interval):
    g = build_grid(interval, 0.25)
    assert np.allclose(g.nodes[:, 0], [0.25, 0.5, 0.75])
    g = build_grid(square, 0.5)
    assert g.size == 1 and np.allclose(g.nodes, [[0.5, 0.5]])
    g = build_grid(square, 1 / 3)
    assert g.size == 4
    assert np.allclose(g.nodes, [[1 / 3, 1 / 3], [2 / 3, 1 / 3], [1 / 3, 2 / 3], [2 / 3, 2 / 3]])


def test_grid_is_row_major_and_interior(square):
    g = build_grid(domains.l_shape(), 1 / 16)
    keys = g.index[:, 1] * 1000 + g.index[:, 0]
    assert np.all(np.diff(keys) > 0)
    assert np.all(g.dist > 0)
    assert g.row(g.nodes[7]) == 7
    with pytest.raises(KeyError):
        g.row((0.75, 0.75))


def test_empty_grid_raises(square):
    with pytest.raises(ResolutionError):
        build_grid(square, 1.0)


def test_laplacian_small_examples(square, interval):
    A = laplacian(build_grid(square, 0.5))
    assert A.matrix.toarray().tolist() == [[16.0]]
    A = laplacian(build_grid(interval, 0.25)).matrix.toarray()
    assert np.allclose(A, 16 * np.array([[2, -1, 0], [-1, 2, -1], [0, -1, 2]]))


def test_interval_eigenvalues_closed_form(interval):
    h = 1 / 64
    A = laplacian(build_grid(interval, h)).matrix.toarray()
    k = np.arange(1, 64)
    exact = 4 / h ** 2 * np.sin(k * np.pi * h / 2) ** 2
    assert np.allclose(np.linalg.eigvalsh(A), exact, rtol=0, atol=1e-10 * exact.max())


@pytest.mark.parametrize("name", ["l_shape", "koch", "disc"])
def test_laplacian_symmetric_psd(name):
    dom = domains.builtin(name)
    A = laplacian(build_grid(dom, 1 / 16))
    assert A.is_symmetric()
    lam = np.linalg.eigvalsh(A.matrix.toarray())[0]
    assert lam >= -1e-10 * abs(A.matrix).max()


def test_weight_examples(square, interval):
    g = build_grid(interval, 0.25)
    w = discretize.weight_operator(g, 2.0, "d").diagonal()
    assert w[0] == pytest.approx(16.0)
    g2 = build_grid(domains.l_shape(), 1 / 8)
    assert np.allclose(discretize.weight_operator(g2, 0.0).diagonal(), 1.0)
    center = build_grid(square, 0.5)
    assert discretize.weight_values(center, 2.0, "m")[0] == pytest.approx(3.2732, abs=1e-4)
    with pytest.raises(ValueError):
        discretize.weight_values(center, 2.0, "x")


def test_lattice_distance(square):
    g = build_grid(square, 1 / 32)
    assert np.allclose(discretize.lattice_distance(g), g.dist)
    gs = build_grid(domains.sector(5.0), 1 / 32)
    assert discretize.lattice_distance(gs).min() >= gs.h - 1e-14


def test_energy_zero_and_full_layer(square):
    g = build_grid(square, 1 / 32)
    assert discretize.gradient_energy_layer(g, np.zeros(g.size), 0.1) == 0.0
    f = square_mode(g)
    full = g.inner(f, laplacian(g) @ f)
    assert discretize.gradient_energy_layer(g, f, 1.0) == pytest.approx(full, rel=1e-12)
    with pytest.raises(ValueError):
        discretize.gradient_energy_layer(g, np.ones(3), 0.1)


def test_energy_layer_square_mode(square):
    g = build_grid(square, 1 / 256)
    val = discretize.gradient_energy_layer(g, square_mode(g), 0.1)
    assert val == pytest.approx(8 * np.pi ** 2 * 0.1, rel=0.15)


def test_layer_mass_basic(square):
    g = build_grid(square, 1 / 64)
    f = square_mode(g)
    assert discretize.layer_mass(g, np.zeros(g.size), 0.1) == 0.0
    assert discretize.layer_mass(g, f, 1.0) == pytest.approx(g.inner(f, f))
    with pytest.raises(ValueError):
        discretize.layer_mass(g, f[:-1], 0.1)


def test_restrict_examples(square):
    g = build_grid(square, 1 / 8)
    assert discretize.restrict(g, 0.0).size == g.size
    r = discretize.restrict(g, 0.2)
    assert set(np.round(r.nodes.ravel(), 12)) == {0.25, 0.375, 0.5, 0.625, 0.75}
    assert r.size == 25
    with pytest.raises(ResolutionError):
        discretize.restrict(build_grid(square, 1 / 3), 0.4)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from(["unit_square", "l_shape", "unit_interval", "disc"]))
def test_integration_by_parts(seed, name):
    g = build_grid(domains.builtin(name), 1 / 12)
    f = np.random.default_rng(seed).standard_normal(g.size)
    lhs = g.inner(f, laplacian(g) @ f)
    assert discretize.dirichlet_energy(g, f) == pytest.approx(lhs, rel=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.0, 0.2), st.floats(0.0, 0.2))
def test_restriction_nested_and_principal(e1, e2):
    g = build_grid(domains.l_shape(), 1 / 32)
    lo, hi = sorted((e1, e2))
    big, small = discretize.restrict(g, lo), discretize.restrict(g, hi)
    assert set(map(tuple, small.index)) <= set(map(tuple, big.index))
    rows = discretize.restriction_rows(g, hi)
    sub = laplacian(g).matrix[rows][:, rows]
    assert (sub != laplacian(small).matrix).nnz == 0


def test_save_coo(tmp_path, interval):
    A = laplacian(build_grid(interval, 0.25))
    p = tmp_path / "a.mtx"
    A.save_coo(p)
    lines = p.read_text().splitlines()
    assert lines[0] == "% 3 3 7"
    assert len(lines) == 8
