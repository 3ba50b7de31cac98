from typing import Dict, Optional

import numpy as np
from scipy.integrate import cumulative_trapezoid

from hybridflow.grid.fields import MacroField, StaggeredField, EdgeValues, Face


def interpolate_stag_to_node(sf: StaggeredField, loc):
    """ (u, v, T) at interior node loc = (i, j) from the surrounding staggered samples. """
    i, j = loc
    nx, ny = sf.grid.shape
    if not (1 <= i <= nx - 2 and 1 <= j <= ny - 2):
        raise IndexError(f"node {loc} is not an interior node of a {nx}x{ny} grid")
    u = 0.5 * (sf.u_face[i, j - 1] + sf.u_face[i, j])
    v = 0.5 * (sf.v_face[i - 1, j] + sf.v_face[i, j])
    T = 0.25 * (sf.T_center[i - 1, j - 1] + sf.T_center[i, j - 1] + sf.T_center[i - 1, j] + sf.T_center[i, j])
    return u, v, T


def interpolate_node_to_stag(mf: MacroField, face: Face):
    values = getattr(mf, face.component)
    nx, ny = values.shape
    i, j = face.i, face.j
    if face.orientation == 'vertical':
        if not (0 <= i < nx and 0 <= j < ny - 1):
            raise IndexError(f"vertical face {i, j} outside the grid")
        return 0.5 * (values[i, j] + values[i, j + 1])
    if face.orientation == 'horizontal':
        if not (0 <= i < nx - 1 and 0 <= j < ny):
            raise IndexError(f"horizontal face {i, j} outside the grid")
        return 0.5 * (values[i, j] + values[i + 1, j])
    if face.orientation == 'node':
        if not (0 <= i < nx and 0 <= j < ny):
            raise IndexError(f"node {i, j} outside the grid")
        return values[i, j]
    raise ValueError(f"Unknown face orientation {face.orientation}")


def node_line_to_faces(line):
    """ Mid-point values between consecutive nodes of a line. """
    line = np.asarray(line, dtype=float)
    return 0.5 * (line[:-1] + line[1:])


def faces_to_nodes(faces):
    """ Node values along a line from the face mid-points between them; end nodes take the nearest face. """
    faces = np.asarray(faces, dtype=float)
    out = np.empty(faces.shape[0] + 1)
    out[1:-1] = 0.5 * (faces[:-1] + faces[1:])
    out[0], out[-1] = faces[0], faces[-1]
    return out


def nodes_to_cell_centers(values):
    return 0.25 * (values[:-1, :-1] + values[1:, :-1] + values[:-1, 1:] + values[1:, 1:])


def _edge_average(centers, side):
    """ Zero-gradient node values along an edge, from the adjacent row of cell centres. """
    row = {'west': centers[0, :], 'east': centers[-1, :], 'south': centers[:, 0], 'north': centers[:, -1]}[side]
    return faces_to_nodes(row)


def _set_edge(array, side, values):
    index = {'west': (0, slice(None)), 'east': (-1, slice(None)),
             'south': (slice(None), 0), 'north': (slice(None), -1)}[side]
    array[index] = values


def stag_to_nodes(sf: StaggeredField, edges: Optional[Dict[str, EdgeValues]] = None) -> MacroField:
    """ Whole-field staggered -> node conversion. Horizontal edges are written first so that
        vertical edge values own the corners. """
    edges = edges or {}
    nx, ny = sf.grid.shape
    u = np.empty((nx, ny))
    v = np.empty((nx, ny))
    T = np.empty((nx, ny))
    p = np.empty((nx, ny))

    u[:, 1:-1] = 0.5 * (sf.u_face[:, :-1] + sf.u_face[:, 1:])
    v[1:-1, :] = 0.5 * (sf.v_face[:-1, :] + sf.v_face[1:, :])
    T[1:-1, 1:-1] = nodes_to_cell_centers(sf.T_center)
    p[1:-1, 1:-1] = nodes_to_cell_centers(sf.p_center)

    # tangential components, nearest face line when the edge carries no values
    u[:, 0], u[:, -1] = sf.u_face[:, 0], sf.u_face[:, -1]
    v[0, :], v[-1, :] = sf.v_face[0, :], sf.v_face[-1, :]

    for side in ('south', 'north', 'west', 'east'):
        _set_edge(p, side, _edge_average(sf.p_center, side))
        edge = edges.get(side)
        if edge is None or edge.T is None:
            _set_edge(T, side, _edge_average(sf.T_center, side))
        else:
            _set_edge(T, side, edge.T)
        if edge is not None and edge.u is not None:
            _set_edge(u, side, edge.u)
        if edge is not None and edge.v is not None:
            _set_edge(v, side, edge.v)

    return MacroField(rho=np.ones((nx, ny)), u=u, v=v, T=T, p=p, grid=sf.grid)


def streamfunction(mf: MacroField, h=None, path='y-first'):
    """ psi with u = d(psi)/dy, v = -d(psi)/dx, anchored to 0 at the south-west corner. """
    h = h if h is not None else (mf.grid.h if mf.grid is not None else 1.0 / (mf.shape[0] - 1))
    if path == 'y-first':
        base = -cumulative_trapezoid(mf.v[:, 0], dx=h, initial=0.0)
        return base[:, None] + cumulative_trapezoid(mf.u, dx=h, axis=1, initial=0.0)
    if path == 'x-first':
        base = cumulative_trapezoid(mf.u[0, :], dx=h, initial=0.0)
        return base[None, :] - cumulative_trapezoid(mf.v, dx=h, axis=0, initial=0.0)
    raise ValueError(f"Unknown integration path {path}")
