import numpy as np
import pytest
from hypothesis import given, strategies as st

from hybridflow.errors import GridError
from hybridflow.grid import (Face, EdgeValues, GridSpec, MacroField, StaggeredField, faces_to_nodes,
                             interpolate_node_to_stag, interpolate_stag_to_node, node_line_to_faces,
                             nodes_to_cell_centers, stag_to_nodes, streamfunction)


def linear_staggered(grid, a=2.0, b=3.0, c=-1.0):
    """ u = a i + b j, v = b i + c j, T = i - j sampled at their staggered locations (index units). """
    nx, ny = grid.shape
    I, J = np.meshgrid(np.arange(nx, dtype=float), np.arange(ny - 1, dtype=float) + 0.5, indexing='ij')
    u_face = a * I + b * J
    I, J = np.meshgrid(np.arange(nx - 1, dtype=float) + 0.5, np.arange(ny, dtype=float), indexing='ij')
    v_face = b * I + c * J
    I, J = np.meshgrid(np.arange(nx - 1, dtype=float) + 0.5, np.arange(ny - 1, dtype=float) + 0.5, indexing='ij')
    return StaggeredField(u_face, v_face, np.zeros((nx - 1, ny - 1)), I - J, grid)


def test_grid_spacing_defaults_to_unit_length():
    grid = GridSpec(nx=11, ny=6)
    assert grid.h == pytest.approx(0.1)
    assert GridSpec.unit_square(160).h == pytest.approx(1.0 / 159)
    assert grid.x[-1] == pytest.approx(1.0)


def test_grid_rejects_too_few_nodes():
    with pytest.raises(GridError):
        GridSpec(nx=3, ny=10)
    with pytest.raises(GridError):
        GridSpec(nx=5, ny=5, h=-0.1)


def test_sub_grid_keeps_physical_coordinates():
    grid = GridSpec.unit_square(11)
    sub = grid.sub_grid(4, 10, 0, 10)
    assert sub.shape == (7, 11)
    np.testing.assert_allclose(sub.x, grid.x[4:])
    np.testing.assert_allclose(sub.y, grid.y)


def test_staggered_shapes_are_checked():
    grid = GridSpec.unit_square(5)
    with pytest.raises(GridError):
        StaggeredField(np.zeros((5, 5)), np.zeros((4, 5)), np.zeros((4, 4)), np.zeros((4, 4)), grid)


def test_stag_to_node_is_exact_on_linear_fields():
    grid = GridSpec.unit_square(8)
    sf = linear_staggered(grid)
    for i in range(1, 7):
        for j in range(1, 7):
            u, v, T = interpolate_stag_to_node(sf, (i, j))
            assert u == pytest.approx(2.0 * i + 3.0 * j)
            assert v == pytest.approx(3.0 * i - j)
            assert T == pytest.approx(i - j)


def test_stag_to_node_rejects_boundary_nodes():
    sf = StaggeredField.zeros(GridSpec.unit_square(6))
    with pytest.raises(IndexError):
        interpolate_stag_to_node(sf, (0, 2))
    with pytest.raises(IndexError):
        interpolate_stag_to_node(sf, (2, 5))


def test_node_to_stag_midpoints():
    grid = GridSpec.unit_square(5)
    mf = MacroField.at_rest(grid)
    mf.u = np.arange(25, dtype=float).reshape(5, 5)
    assert interpolate_node_to_stag(mf, Face('u', 'vertical', 2, 1)) == pytest.approx(0.5 * (11 + 12))
    assert interpolate_node_to_stag(mf, Face('u', 'horizontal', 2, 1)) == pytest.approx(0.5 * (11 + 16))
    assert interpolate_node_to_stag(mf, Face('u', 'node', 2, 1)) == 11
    with pytest.raises(IndexError):
        interpolate_node_to_stag(mf, Face('u', 'vertical', 2, 4))


def test_uniform_staggered_field_gives_uniform_nodes():
    grid = GridSpec.unit_square(6)
    sf = StaggeredField.zeros(grid, T=0.3)
    sf.u_face[:] = 0.1
    sf.v_face[:] = -0.2
    mf = stag_to_nodes(sf)
    np.testing.assert_allclose(mf.u, 0.1)
    np.testing.assert_allclose(mf.v, -0.2)
    np.testing.assert_allclose(mf.T, 0.3)


def test_edge_values_override_and_vertical_edges_own_corners():
    grid = GridSpec.unit_square(6)
    sf = StaggeredField.zeros(grid)
    edges = {'north': EdgeValues(u=np.full(6, 0.1), T=np.full(6, 0.5)),
             'west': EdgeValues(u=np.zeros(6), T=np.ones(6))}
    mf = stag_to_nodes(sf, edges)
    np.testing.assert_allclose(mf.u[1:, -1], 0.1)
    assert mf.u[0, -1] == 0.0
    np.testing.assert_allclose(mf.T[0, :], 1.0)
    np.testing.assert_allclose(mf.T[1:-1, -1], 0.5)


@pytest.mark.parametrize('path', ['y-first', 'x-first'])
def test_streamfunction_of_a_linear_strain(path):
    grid = GridSpec.unit_square(9)
    X, Y = grid.coords()
    mf = MacroField(rho=np.ones(grid.shape), u=X.copy(), v=-Y, grid=grid)
    np.testing.assert_allclose(streamfunction(mf, path=path), X * Y, atol=1e-14)


def _sine_cell(n):
    """ psi = sin(pi x) sin(pi y) and its divergence-free velocity on an n-node grid. """
    grid = GridSpec.unit_square(n)
    X, Y = grid.coords()
    u = np.pi * np.sin(np.pi * X) * np.cos(np.pi * Y)
    v = -np.pi * np.cos(np.pi * X) * np.sin(np.pi * Y)
    return MacroField(rho=np.ones(grid.shape), u=u, v=v, grid=grid), np.sin(np.pi * X) * np.sin(np.pi * Y), grid.h


@pytest.mark.parametrize('path', ['y-first', 'x-first'])
def test_streamfunction_converges_on_a_sine_cell(path):
    errors = []
    for n in (17, 33):
        mf, psi, h = _sine_cell(n)
        error = np.max(np.abs(streamfunction(mf, path=path) - psi))
        assert error < 10 * h ** 2
        errors.append(error)
    assert errors[1] < 0.3 * errors[0]


@pytest.mark.parametrize('n', [9, 17, 33])
def test_streamfunction_paths_agree_on_a_divergence_free_field(n):
    mf, _, h = _sine_cell(n)
    gap = np.abs(streamfunction(mf, path='x-first') - streamfunction(mf, path='y-first'))
    assert np.max(gap) < 10 * h ** 2


def test_cell_centres_average_four_nodes():
    values = np.arange(16, dtype=float).reshape(4, 4)
    np.testing.assert_allclose(nodes_to_cell_centers(values)[0, 0], (0 + 1 + 4 + 5) / 4)


@given(st.floats(-5, 5), st.floats(-5, 5), st.integers(4, 30))
def test_line_round_trip_is_exact_for_affine_lines(a, b, n):
    line = a + b * np.arange(n)
    nodes = faces_to_nodes(node_line_to_faces(line))
    np.testing.assert_allclose(nodes[1:-1], line[1:-1], atol=1e-9)
