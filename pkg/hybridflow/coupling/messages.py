from dataclasses import dataclass
from typing import Optional

import numpy as np

from hybridflow.errors import ConfigurationError, DivergenceError, LayoutError, MessageError
from hybridflow.grid import node_line_to_faces
from hybridflow.lbm.lattice import CS2
from hybridflow.lbm.boundaries import BoundaryCondition


@dataclass(frozen=True)
class DecompositionLayout:
    """ Two-zone split of an n_nodes cavity across split_axis.
        'vertical' puts the LBM zone on the west (nodes 0..i1 along x), 'horizontal' on the south.
        i1 is the LBM artificial boundary, i2 = i1 - overlap_cols the FVM one. """
    split_axis: str
    n_nodes: int
    lbm_cells: int
    overlap_cols: int = 3

    def __post_init__(self):
        if self.split_axis not in ('vertical', 'horizontal'):
            raise LayoutError(f"Unknown split axis {self.split_axis}")
        if self.overlap_cols < 1:
            raise LayoutError(f"overlap must be at least one cell, got {self.overlap_cols}")
        if self.i1 + 1 < 4 or self.i1 > self.n_nodes - 2:
            raise LayoutError(f"LBM zone boundary {self.i1} leaves no room in a {self.n_nodes}-node cavity")
        if self.i2 < 1 or self.n_nodes - self.i2 < 4:
            raise LayoutError(f"FVM zone boundary {self.i2} leaves no room in a {self.n_nodes}-node cavity")

    @classmethod
    def halves(cls, n_nodes, overlap_cols=3, split_axis='vertical'):
        return cls(split_axis=split_axis, n_nodes=n_nodes, lbm_cells=n_nodes // 2, overlap_cols=overlap_cols)

    @property
    def i1(self):
        return self.lbm_cells

    @property
    def i2(self):
        return self.lbm_cells - self.overlap_cols

    @property
    def stitch(self):
        """ Last node index taken from the LBM zone when stitching. """
        return (self.i1 + self.i2) // 2

    @property
    def axis(self):
        return 0 if self.split_axis == 'vertical' else 1

    @property
    def lbm_interface_side(self):
        return 'east' if self.split_axis == 'vertical' else 'north'

    @property
    def fvm_interface_side(self):
        return 'west' if self.split_axis == 'vertical' else 'south'

    def lbm_window(self):
        n = self.n_nodes - 1
        return (0, self.i1, 0, n) if self.split_axis == 'vertical' else (0, n, 0, self.i1)

    def fvm_window(self):
        n = self.n_nodes - 1
        return (self.i2, n, 0, n) if self.split_axis == 'vertical' else (0, n, self.i2, n)


@dataclass(frozen=True)
class UnitBridge:
    """ Lattice <-> nondimensional scaling for an n-cell cavity. Lattice and nondimensional
        velocities coincide; one lattice step advances 1/n nondimensional time units. """
    n: int
    lid_velocity: float = 0.1

    def __post_init__(self):
        if self.n < 1:
            raise ConfigurationError("lattice length must be positive")

    @property
    def dF(self):
        return 1.0 / self.n

    def time_step(self, lattice_steps):
        return lattice_steps * self.dF

    def reynolds(self, nu_lattice):
        return self.lid_velocity * self.n / nu_lattice

    def strain_to_lattice(self, strain):
        """ Nondimensional strain rate to lattice units (one node spacing per length unit 1/n). """
        return tuple(np.asarray(s) / self.n for s in strain)


@dataclass
class InterfaceMessage:
    """ Values along one interface line. Node arrays hold one value per line node, face arrays
        one value per segment between consecutive nodes. """
    u: Optional[np.ndarray] = None
    v: Optional[np.ndarray] = None
    T: Optional[np.ndarray] = None
    normal_faces: Optional[np.ndarray] = None
    T_faces: Optional[np.ndarray] = None
    strain: Optional[tuple] = None
    pressure: Optional[tuple] = None
    f: Optional[np.ndarray] = None
    g: Optional[np.ndarray] = None

    def check(self, n_nodes, require=()):
        for name in require:
            if getattr(self, name) is None:
                raise MessageError(f"interface message lacks {name}")
        for name in ('u', 'v', 'T'):
            value = getattr(self, name)
            if value is not None and np.shape(value)[-1] != n_nodes:
                raise MessageError(f"{name} carries {np.shape(value)[-1]} values for {n_nodes} interface nodes")
        for name in ('normal_faces', 'T_faces'):
            value = getattr(self, name)
            if value is not None and np.shape(value)[-1] != n_nodes - 1:
                raise MessageError(f"{name} carries {np.shape(value)[-1]} values for {n_nodes - 1} interface faces")
        return self


def reconstruct_density(p_S, p_bar, rho0):
    """ Lattice density from a pressure sample around the strip mean. """
    if not rho0 > 0:
        raise DivergenceError(f"mean lattice density of the overlap strip is {rho0}, not positive")
    rho = rho0 + (np.asarray(p_S) - p_bar) / CS2
    if np.any(rho <= 0):
        raise DivergenceError(f"reconstructed interface density fell to {np.min(rho):.4g}")
    return rho


def line(values, axis, index):
    return values[index, :] if axis == 0 else values[:, index]


def interface_strain(mf, axis, index, spacing=1.0):
    """ (Sxx, Sxy, Syy) along a node line from centred differences; the derivative normal to
        the line of the normal velocity closes the trace. """
    u, v = mf.u, mf.v
    if axis == 0:
        du_dx = (u[index + 1, :] - u[index - 1, :]) / (2 * spacing)
        dv_dx = (v[index + 1, :] - v[index - 1, :]) / (2 * spacing)
        du_dy = np.gradient(u[index, :], spacing)
        dv_dy = -du_dx
    else:
        dv_dy = (v[:, index + 1] - v[:, index - 1]) / (2 * spacing)
        du_dy = (u[:, index + 1] - u[:, index - 1]) / (2 * spacing)
        dv_dx = np.gradient(v[:, index], spacing)
        du_dx = -dv_dy
    return du_dx, 0.5 * (du_dy + dv_dx), dv_dy


def _zone_line(mf, axis, index, zone):
    n_lines = mf.shape[axis]
    if not 0 < index < n_lines - 1:
        raise LayoutError(f"interface line {index} lies outside the interior of the {zone} zone ({n_lines} lines)")


def transfer_fvm_to_lbm(mf, layout: DecompositionLayout, with_strain=False, with_pressure=False) -> InterfaceMessage:
    """ Node values of the FVM zone field along I1, the LBM artificial boundary. Strain is in
        lattice units; pressure is (line samples, strip mean). """
    index = layout.overlap_cols
    axis = layout.axis
    _zone_line(mf, axis, index, 'FVM')
    message = InterfaceMessage(u=line(mf.u, axis, index), v=line(mf.v, axis, index), T=line(mf.T, axis, index))
    if with_strain:
        message.strain = interface_strain(mf, axis, index, spacing=1.0)
    if with_pressure:
        strip = slice(0, index + 1)
        p_strip = mf.p[strip, :] if axis == 0 else mf.p[:, strip]
        message.pressure = (line(mf.p, axis, index), float(np.mean(p_strip)))
    return message


def transfer_lbm_to_fvm(mf, layout: DecompositionLayout, index=None) -> InterfaceMessage:
    """ Lattice moments along I2, with the normal velocity and temperature also averaged onto the
        staggered faces of the FVM boundary. """
    index = layout.i2 if index is None else index
    axis = layout.axis
    _zone_line(mf, axis, index, 'LBM')
    u, v, T = line(mf.u, axis, index), line(mf.v, axis, index), line(mf.T, axis, index)
    normal = u if axis == 0 else v
    return InterfaceMessage(u=u, v=v, T=T, normal_faces=node_line_to_faces(normal), T_faces=node_line_to_faces(T))


def interface_closure(message: InterfaceMessage, side, scheme, rho_b=None, thermal=False) -> BoundaryCondition:
    if scheme == 'velocity-gradient' and message.strain is None:
        raise MessageError("velocity-gradient closure needs the strain rate in the interface message")
    return BoundaryCondition(side=side, velocity=(message.u, message.v),
                             temperature=message.T if thermal else None, density=rho_b, scheme=scheme,
                             strain=message.strain, span='full')


def apply_interface_closure(state, model, message: InterfaceMessage, side, scheme, rho_b=None):
    """ Writes the interface-node populations of state from message. """
    bc = interface_closure(message, side, scheme, rho_b=rho_b, thermal=state.g is not None)
    bc.apply_flow(state, model)
    if state.g is not None:
        bc.apply_energy(state)
    return state
