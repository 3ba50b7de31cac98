from dataclasses import dataclass, replace

import numpy as np
import wandb
from tqdm import tqdm

from hybridflow.errors import ConfigurationError, DivergenceError
from hybridflow.grid import GridSpec, MacroField, nodes_to_cell_centers
from hybridflow.lbm import LatticeModel, LBMSolver, cavity_boundaries, relaxation_times, buoyancy_coefficient
from hybridflow.lbm import nondimensional_transport
from hybridflow.fvm import SimpleSolver, SimpleConfig, cavity_edges
from hybridflow.mcm import BoundarySpec, WalkerConfig, solve_field_mcm


@dataclass(frozen=True)
class FieldSplitConfig:
    """ engine 'fvm': coarse energy grid of half the lattice resolution, substeps lattice steps per
        energy step (0 means twice the coarse cell count). engine 'mcm': exchange_steps lattice steps
        between random-walk solves on the lattice nodes. """
    engine: str
    lbm_nodes: int
    substeps: int = 0
    exchange_steps: int = 200
    max_outer: int = 20000
    tol: float = 1e-6
    eps_abs: float = 1e-3

    def __post_init__(self):
        if self.engine not in ('fvm', 'mcm'):
            raise ConfigurationError(f"Unknown thermal engine {self.engine}")
        if self.engine == 'fvm' and (self.lbm_nodes - 1) % 2:
            raise ConfigurationError(f"{self.lbm_nodes} lattice nodes do not register with a 2:1 coarse grid")

    @property
    def coarse_cells(self):
        return (self.lbm_nodes - 1) // 2

    @property
    def steps_per_exchange(self):
        if self.engine == 'fvm':
            return self.substeps or 2 * self.coarse_cells
        return self.exchange_steps


def _check_registration(shape, cfg: FieldSplitConfig):
    n = 2 * cfg.coarse_cells + 1
    if tuple(shape) != (n, n) or cfg.engine != 'fvm':
        raise ConfigurationError(f"fine field {tuple(shape)} does not register with {cfg.coarse_cells} coarse cells")


def restrict_velocity(mf: MacroField, cfg: FieldSplitConfig):
    """ Coarse face velocities read from the collocated lattice nodes: (u_face, v_face). """
    _check_registration(mf.shape, cfg)
    return mf.u[0::2, 1::2].copy(), mf.v[1::2, 0::2].copy()


def prolong_temperature(theta, cfg: FieldSplitConfig, boundary=None):
    """ Fine node temperatures from coarse cell centres by bilinear interpolation.
        boundary maps a side to its node values; a missing side is adiabatic and takes the adjacent
        row of coarse centres, the zero-gradient closure the coarse energy grid itself applies.
        West and east values own the corners. """
    boundary = boundary or {}
    m = cfg.coarse_cells
    if theta.shape != (m, m):
        raise ConfigurationError(f"coarse field {theta.shape} does not match {m} coarse cells")
    fine = np.zeros((2 * m + 1, 2 * m + 1))
    fine[1::2, 1::2] = theta
    fine[2:-1:2, 1::2] = 0.5 * (theta[:-1, :] + theta[1:, :])
    fine[1::2, 2:-1:2] = 0.5 * (theta[:, :-1] + theta[:, 1:])
    fine[2:-1:2, 2:-1:2] = nodes_to_cell_centers(theta)

    for side in ('south', 'north'):
        j, j1 = (0, 1) if side == 'south' else (-1, -2)
        values = boundary.get(side)
        fine[1:-1, j] = fine[1:-1, j1] if values is None else np.asarray(values)[1:-1]
    for side in ('west', 'east'):
        i, i1 = (0, 1) if side == 'west' else (-1, -2)
        values = boundary.get(side)
        fine[i, :] = fine[i1, :] if values is None else values
    return fine


def _flow_lattice(case):
    if case.kind != 'convection':
        raise ConfigurationError(f"field splitting needs a natural-convection case, got {case.kind}")
    grid = GridSpec.unit_square(case.grid)
    tau_v, _ = relaxation_times(case.kind, case.grid - 1, ra=case.ra, pr=case.pr, ma=case.ma)
    solver = LBMSolver(grid, LatticeModel(tau_v=tau_v), cavity_boundaries('convection'),
                       buoyancy=buoyancy_coefficient(case.ma, case.grid - 1, case.ra), thermal=False)
    theta = np.zeros(grid.shape)
    theta[0, :] = 1.0
    solver.theta = theta
    return grid, solver


def _hot_cold(n):
    return {'west': np.ones(n), 'east': np.zeros(n)}


def _velocity_change(current, previous):
    scale = max(np.max(np.abs(current.u)), np.max(np.abs(current.v)), 1e-12)
    return max(np.max(np.abs(current.u - previous.u)), np.max(np.abs(current.v - previous.v))) / scale


def run_hybrid_lbm_fvm(case, cfg: FieldSplitConfig, simple_cfg: SimpleConfig = None, progress_bar=False) -> MacroField:
    """ Isothermal lattice flow driven by a coarse finite-volume energy equation. """
    grid, lbm = _flow_lattice(case)
    if cfg.lbm_nodes != case.grid:
        raise ConfigurationError(f"field split configured for {cfg.lbm_nodes} nodes, case grid has {case.grid}")
    m = cfg.coarse_cells
    coarse = GridSpec(nx=m + 1, ny=m + 1, h=1.0 / m)
    transport = nondimensional_transport(case.kind, ra=case.ra, pr=case.pr, ma=case.ma)
    energy = SimpleSolver(coarse, transport.nu, cavity_edges('convection', coarse), simple_cfg,
                          alpha=transport.alpha, name='field_split/energy')
    steps = cfg.steps_per_exchange
    dt = steps / (case.grid - 1)
    print(f"lbm-fvm field split: {grid.nx}x{grid.ny} lattice, {m}x{m} energy cells, {steps} lattice steps per energy step")

    previous = lbm.macro()
    for outer in tqdm(range(1, cfg.max_outer + 1), disable=not progress_bar, desc='lbm-fvm'):
        try:
            lbm.advance(steps)
        except DivergenceError as err:
            err.field = previous
            raise
        current = lbm.macro()
        energy.sf.u_face, energy.sf.v_face = restrict_velocity(current, cfg)
        T_coarse = energy.energy_step(dt)
        theta = prolong_temperature(T_coarse, cfg, _hot_cold(grid.ny))
        d_theta = float(np.max(np.abs(theta - lbm.theta)))
        d_u = _velocity_change(current, previous)
        lbm.theta = theta
        current.T = theta
        previous = current
        if wandb.run:
            wandb.log({'coupling/outer': outer, 'coupling/theta_change': d_theta, 'coupling/velocity_change': d_u})
        if max(d_theta, d_u) < cfg.tol:
            print(f"lbm-fvm: converged after {outer} energy steps")
            return current
    raise DivergenceError(f"lbm-fvm field split did not settle within {cfg.max_outer} energy steps", field=previous)


def run_hybrid_lbm_mcm(case, cfg: FieldSplitConfig, walker_cfg: WalkerConfig, threads=None,
                       progress_bar=False) -> MacroField:
    """ Isothermal lattice flow driven by random-walk temperatures on the lattice nodes. The stop test
        compares changes with the statistical noise of the walk estimates. """
    grid, lbm = _flow_lattice(case)
    transport = nondimensional_transport(case.kind, ra=case.ra, pr=case.pr, ma=case.ma)
    bounds = BoundarySpec.heated_cavity(grid.shape)
    print(f"lbm-mcm field split: {grid.nx}x{grid.ny} nodes, {walker_cfg.n_walkers} walkers per node, "
          f"{cfg.exchange_steps} lattice steps per walk solve")

    previous = lbm.macro()
    stderr = np.zeros(grid.shape)
    for outer in range(1, cfg.max_outer + 1):
        try:
            lbm.advance(cfg.exchange_steps)
        except DivergenceError as err:
            err.field = previous
            raise
        current = lbm.macro()
        field = solve_field_mcm(bounds, replace(walker_cfg, stream=outer), u=current.u, v=current.v,
                                alpha=transport.alpha, h=grid.h, threads=threads, progress_bar=progress_bar)
        noise = max(cfg.eps_abs, 3.0 * float(np.median(field.stderr[1:-1, 1:-1])))
        d_theta = float(np.max(np.abs(field.T - lbm.theta)))
        d_u = _velocity_change(current, previous)
        lbm.theta = field.T
        stderr = field.stderr
        current.T, current.T_stderr = field.T, stderr
        previous = current
        if wandb.run:
            wandb.log({'coupling/outer': outer, 'coupling/theta_change': d_theta, 'coupling/velocity_change': d_u,
                       'coupling/noise': noise})
        print(f"lbm-mcm: outer {outer}, theta change {d_theta:.3e}, velocity change {d_u:.3e}, noise {noise:.3e}")
        if d_theta < noise and d_u < noise:
            return current
    raise DivergenceError(f"lbm-mcm field split did not settle within {cfg.max_outer} walk solves", field=previous)
