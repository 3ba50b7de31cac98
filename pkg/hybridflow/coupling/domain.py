from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np
import wandb
from tqdm import tqdm

from hybridflow.errors import ConfigurationError, DivergenceError
from hybridflow.grid import GridSpec, MacroField, node_line_to_faces
from hybridflow.lbm import (LatticeModel, LBMSolver, BoundaryCondition, relaxation_times, buoyancy_coefficient,
                            nondimensional_transport, relative_change)
from hybridflow.fvm import SimpleSolver, SimpleConfig, EdgeCondition
from hybridflow.coupling.messages import (DecompositionLayout, UnitBridge, InterfaceMessage, interface_closure,
                                          reconstruct_density, transfer_fvm_to_lbm, transfer_lbm_to_fvm)

# fraction of the measured lattice mass drift drained through the interface per exchange
MASS_GAIN = 0.5


def _wall_conditions(kind, sides, lid_velocity):
    """ LBM wall closures for the physical sides of a zone, horizontal sides first. """
    walls = []
    for side in ('south', 'north', 'west', 'east'):
        if side not in sides:
            continue
        velocity = (lid_velocity, 0.0) if kind == 'lid' and side == 'north' else (0.0, 0.0)
        T = {'west': 1.0, 'east': 0.0}.get(side) if kind == 'convection' else None
        walls.append(BoundaryCondition(side=side, velocity=velocity, temperature=T))
    return walls


class LBMZone:
    def __init__(self, grid: GridSpec, model: LatticeModel, kind, layout: DecompositionLayout, scheme,
                 buoyancy=0.0, lid_velocity=0.1, density_anchor='extrapolate', side=None):
        """ side defaults to the LBM artificial boundary of the layout; a lattice standing in for
            the FVM zone passes the opposite side. """
        self.layout = layout
        self.scheme = scheme
        self.density_anchor = density_anchor
        self.thermal = model.thermal
        self.side = side or layout.lbm_interface_side
        physical = [s for s in ('west', 'east', 'south', 'north') if s != self.side]
        self.interface = BoundaryCondition(side=self.side, span='full')
        self.solver = LBMSolver(grid, model, _wall_conditions(kind, physical, lid_velocity) + [self.interface],
                                buoyancy=buoyancy, thermal=self.thermal)
        self.outflow_bias = 0.0
        self.mass_rate = 0.0

    @property
    def n_line(self):
        return self.solver.grid.shape[1 - self.layout.axis]

    def advance(self, n_steps):
        before = self.mass()
        self.solver.advance(n_steps)
        self.mass_rate = (self.mass() - before) / n_steps

    def mass(self):
        return float(self.solver.state.f.sum())

    def macro(self):
        return self.solver.macro()

    def strip_density(self):
        rho = self.solver.state.f.sum(axis=0)
        strip = slice(self.layout.i2, self.layout.i1 + 1)
        return float(np.mean(rho[strip, :] if self.layout.axis == 0 else rho[:, strip]))

    def receive(self, message: InterfaceMessage):
        message.check(self.n_line)
        if message.f is not None:
            self._overwrite(message)
            return
        require = ('u', 'v') + (('strain',) if self.scheme == 'velocity-gradient' else ())
        message.check(self.n_line, require=require)
        message = self._balance_mass(message)
        rho_b = None
        if self.density_anchor == 'pressure' and message.pressure is not None:
            rho0 = self.strip_density()
            p_S, p_bar = message.pressure
            rho_b = reconstruct_density(rho0 * np.asarray(p_S), rho0 * p_bar, rho0)
        bc = interface_closure(message, self.side, self.scheme, rho_b=rho_b, thermal=self.thermal)
        self.solver.boundaries[-1] = bc
        self.interface = bc

    def _balance_mass(self, message):
        """ Integral control of the zone mass. Velocities taken from another discretisation need not
            carry zero net lattice flux, so a uniform shift of the interface normal velocity drains
            whatever the zone gained per step until its mass is steady. Wall corners keep their values. """
        if self.mass_rate:
            self.outflow_bias += MASS_GAIN * self.mass_rate / (self.strip_density() * (self.n_line - 2))
            self.mass_rate = 0.0
        if not self.outflow_bias:
            return message
        name = 'u' if self.layout.axis == 0 else 'v'
        sign = 1.0 if self.side in ('east', 'north') else -1.0
        normal = np.array(getattr(message, name), dtype=float)
        normal[1:-1] += sign * self.outflow_bias
        return replace(message, **{name: normal})

    def _overwrite(self, message):
        nx, ny = self.solver.grid.shape
        index = {'east': nx - 1, 'north': ny - 1}.get(self.side, 0)
        state = self.solver.state
        if self.layout.axis == 0:
            state.f[:, index, :] = message.f
            if state.g is not None:
                state.g[:, index, :] = message.g
        else:
            state.f[:, :, index] = message.f
            if state.g is not None:
                state.g[:, :, index] = message.g

    def emit(self, index=None) -> InterfaceMessage:
        """ Macroscopic values along the FVM artificial boundary. """
        return transfer_lbm_to_fvm(self.macro(), self.layout, index)

    def emit_populations(self, index):
        state = self.solver.state
        if self.layout.axis == 0:
            return InterfaceMessage(f=state.f[:, index, :].copy(),
                                    g=None if state.g is None else state.g[:, index, :].copy())
        return InterfaceMessage(f=state.f[:, :, index].copy(), g=None if state.g is None else state.g[:, :, index].copy())


class FVMZone:
    def __init__(self, grid: GridSpec, kind, layout: DecompositionLayout, transport, cfg: SimpleConfig,
                 lid_velocity=0.1):
        self.layout = layout
        self.grid = grid
        self.side = layout.fvm_interface_side
        thermal = kind == 'convection'
        nx = grid.nx
        lid = np.zeros(nx)
        if kind == 'lid':
            lid[:-1] = lid_velocity
            if self.side != 'west':
                lid[0] = 0.0
        edges = {'west': EdgeCondition(temperature=1.0 if thermal else None),
                 'east': EdgeCondition(temperature=0.0 if thermal else None),
                 'south': EdgeCondition(), 'north': EdgeCondition(tangent=lid)}
        edges[self.side] = EdgeCondition(kind='interface', temperature=0.0 if thermal else None)
        self.solver = SimpleSolver(grid, transport.nu, edges, cfg, alpha=transport.alpha if thermal else None,
                                   buoyancy=transport.buoyancy, name='coupling/fvm')
        self.thermal = thermal

    @property
    def n_line(self):
        return self.grid.shape[1 - self.layout.axis]

    def advance(self, n_iterations, dt):
        return self.solver.advance(n_iterations, dt)

    def macro(self):
        return self.solver.macro()

    def receive(self, message: InterfaceMessage):
        message.check(self.n_line, require=('u', 'v', 'normal_faces'))
        tangent = message.v if self.layout.axis == 0 else message.u
        T_faces = None
        if self.thermal:
            T_faces = message.T_faces if message.T_faces is not None else node_line_to_faces(message.T)
        self.solver.edges[self.side] = EdgeCondition(kind='interface', normal=np.asarray(message.normal_faces),
                                                     tangent=np.asarray(tangent), temperature=T_faces)
        self.solver.impose_boundaries()

    def emit(self, with_strain=False, with_pressure=False) -> InterfaceMessage:
        return transfer_fvm_to_lbm(self.macro(), self.layout, with_strain=with_strain, with_pressure=with_pressure)


def stitch(layout: DecompositionLayout, lbm: MacroField, other: MacroField, grid: GridSpec) -> MacroField:
    """ Whole-cavity field: LBM nodes up to the strip midpoint, the other zone beyond it. """
    cut = layout.stitch
    offset = layout.i2
    out = {}
    for name in ('rho', 'u', 'v', 'T', 'p'):
        a, b = getattr(lbm, name), getattr(other, name)
        if layout.axis == 0:
            out[name] = np.concatenate([a[:cut + 1, :], b[cut + 1 - offset:, :]], axis=0)
        else:
            out[name] = np.concatenate([a[:, :cut + 1], b[:, cut + 1 - offset:]], axis=1)
    return MacroField(grid=grid, **out)


def interface_mismatch(layout: DecompositionLayout, lbm: MacroField, other: MacroField):
    """ Largest velocity disagreement between the zones over the overlap strip. """
    strip_lbm = slice(layout.i2, layout.i1 + 1)
    strip_other = slice(0, layout.overlap_cols + 1)
    diffs = []
    for name in ('u', 'v'):
        a, b = getattr(lbm, name), getattr(other, name)
        if layout.axis == 0:
            diffs.append(np.max(np.abs(a[strip_lbm, :] - b[strip_other, :])))
        else:
            diffs.append(np.max(np.abs(a[:, strip_lbm] - b[:, strip_other])))
    return float(max(diffs))


class CoupledResult(NamedTuple):
    field: MacroField
    exchanges: int
    interface_mismatch: float
    converged: bool


def _zone_grids(layout: DecompositionLayout, grid: GridSpec):
    return grid.sub_grid(*layout.lbm_window()), grid.sub_grid(*layout.fvm_window())


def _lattice_model(case):
    tau_v, tau_T = relaxation_times(case.kind, case.grid - 1, re=case.re, ra=case.ra, pr=case.pr, ma=case.ma,
                                    lid_velocity=case.lid_velocity)
    thermal = case.kind == 'convection'
    model = LatticeModel(tau_v=tau_v, tau_T=tau_T if thermal else None)
    buoyancy = buoyancy_coefficient(case.ma, case.grid - 1, case.ra) if thermal else 0.0
    return model, buoyancy


def run_coupled(case, layout: DecompositionLayout, scheme='noneq-extrapolation', exchange_every=0,
                fvm_iterations=5, max_exchanges=20000, tol=1e-6, simple_cfg: SimpleConfig = None,
                density_anchor='auto', progress_bar=False) -> CoupledResult:
    """ Overlapping LBM/FVM domain decomposition advanced in lock step until the stitched field is steady. """
    if case.kind not in ('lid', 'convection'):
        raise ConfigurationError(f"domain decomposition cannot solve case kind {case.kind}")
    if layout.n_nodes != case.grid:
        raise ConfigurationError(f"layout covers {layout.n_nodes} nodes, case grid has {case.grid}")
    grid = GridSpec.unit_square(case.grid)
    lbm_grid, fvm_grid = _zone_grids(layout, grid)
    bridge = UnitBridge(n=case.grid - 1, lid_velocity=case.lid_velocity)
    model, buoyancy = _lattice_model(case)
    transport = nondimensional_transport(case.kind, re=case.re, ra=case.ra, pr=case.pr, ma=case.ma,
                                         lid_velocity=case.lid_velocity)
    if density_anchor == 'auto':
        density_anchor = 'pressure' if case.kind == 'convection' else 'extrapolate'

    lbm = LBMZone(lbm_grid, model, case.kind, layout, scheme, buoyancy=buoyancy, lid_velocity=case.lid_velocity,
                  density_anchor=density_anchor)
    fvm = FVMZone(fvm_grid, case.kind, layout, transport, simple_cfg or SimpleConfig(), case.lid_velocity)
    lbm_steps = exchange_every or bridge.n
    dt = bridge.time_step(lbm_steps)
    with_strain = scheme == 'velocity-gradient'
    with_pressure = density_anchor == 'pressure'
    print(f"coupled {layout.split_axis} {case.kind}: LBM nodes 0..{layout.i1}, FVM nodes {layout.i2}.., "
          f"{lbm_steps} lattice steps per exchange, scheme {scheme}")

    previous = stitch(layout, lbm.macro(), fvm.macro(), grid)
    mismatch = np.inf
    for exchange in tqdm(range(1, max_exchanges + 1), disable=not progress_bar, desc='coupling'):
        try:
            fvm.advance(fvm_iterations, dt)
            lbm.receive(fvm.emit(with_strain=with_strain, with_pressure=with_pressure))
            lbm.advance(lbm_steps)
            fvm.receive(lbm.emit())
        except DivergenceError as err:
            err.field = previous
            raise
        lbm_field, fvm_field = lbm.macro(), fvm.macro()
        current = stitch(layout, lbm_field, fvm_field, grid)
        change = relative_change(current, previous)
        mismatch = interface_mismatch(layout, lbm_field, fvm_field)
        previous = current
        if wandb.run:
            wandb.log({'coupling/exchange': exchange, 'coupling/change': change, 'coupling/mismatch': mismatch})
        if change < tol:
            print(f"coupled: converged after {exchange} exchanges, interface mismatch {mismatch:.3e}")
            return CoupledResult(field=current, exchanges=exchange, interface_mismatch=mismatch, converged=True)
    raise DivergenceError(f"coupled run did not settle within {max_exchanges} exchanges", field=previous)


def run_lbm_pair(case, layout: DecompositionLayout, n_steps) -> MacroField:
    """ Both zones on the lattice, exchanging full populations every step. The stitched field
        reproduces a single-lattice run of the whole cavity exactly. """
    grid = GridSpec.unit_square(case.grid)
    grid_a, grid_b = _zone_grids(layout, grid)
    model, buoyancy = _lattice_model(case)
    a = LBMZone(grid_a, model, case.kind, layout, 'noneq-extrapolation', buoyancy=buoyancy,
                lid_velocity=case.lid_velocity)
    b = LBMZone(grid_b, model, case.kind, layout, 'noneq-extrapolation', buoyancy=buoyancy,
                lid_velocity=case.lid_velocity, side=layout.fvm_interface_side)

    overlap = layout.overlap_cols
    phases = ('flow_step', 'energy_step') if model.thermal else ('flow_step',)
    for _ in range(n_steps):
        # the energy collision reads the interface velocity, so populations cross after each phase
        for phase in phases:
            getattr(a.solver, phase)()
            getattr(b.solver, phase)()
            # node i1 of a is node `overlap` of b; node 0 of b is node i2 of a
            from_b = b.emit_populations(overlap)
            from_a = a.emit_populations(layout.i2)
            a.receive(from_b)
            b.receive(from_a)
    return stitch(layout, a.macro(), b.macro(), grid)
