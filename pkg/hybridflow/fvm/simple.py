from dataclasses import dataclass
from typing import Dict, NamedTuple, Optional

import numpy as np
import scipy.sparse as sparse
from scipy.sparse.linalg import spsolve
import wandb
from tqdm import tqdm

from hybridflow.errors import ConfigurationError, DivergenceError
from hybridflow.grid import GridSpec, MacroField, StaggeredField, EdgeValues, stag_to_nodes, faces_to_nodes
from hybridflow.fvm.transport import TransportSpec, BoundarySide, assemble_and_sweep, solve_transport
from hybridflow.lbm.units import nondimensional_transport


@dataclass
class SimpleConfig:
    relax_u: float = 0.7
    relax_v: float = 0.7
    relax_p: float = 0.3
    relax_t: float = 0.9
    max_outer: int = 20000
    sweeps: int = 2
    divergence_window: int = 50
    tol_continuity: float = 1e-6
    tol_steady: float = 1e-8

    def __post_init__(self):
        for name in ('relax_u', 'relax_v', 'relax_p', 'relax_t'):
            value = getattr(self, name)
            if not 0.0 < value <= 1.0:
                raise ConfigurationError(f"{name} must lie in (0, 1], got {value}")


@dataclass
class EdgeCondition:
    """ Boundary data of one FVM edge.
        normal: velocity through the boundary faces (scalar or one value per face).
        tangent: tangential velocity at the edge nodes (scalar or one value per node).
        temperature: face-centre temperatures, None for an adiabatic edge.
        kind 'interface' edges absorb the net boundary mass imbalance. """
    kind: str = 'wall'
    normal: object = 0.0
    tangent: object = 0.0
    temperature: Optional[object] = None


def cavity_edges(kind, grid: GridSpec, lid_velocity=0.1):
    lid = np.zeros(grid.nx)
    if kind == 'lid':
        lid[1:-1] = lid_velocity
    hot = 1.0 if kind == 'convection' else None
    cold = 0.0 if kind == 'convection' else None
    return {'west': EdgeCondition(temperature=hot), 'east': EdgeCondition(temperature=cold),
            'south': EdgeCondition(), 'north': EdgeCondition(tangent=lid)}


class PressureCorrection(NamedTuple):
    p_prime: np.ndarray
    continuity: float


def pressure_correction(sf: StaggeredField, d_u, d_v, relax_p=0.3) -> PressureCorrection:
    """ Solves for p', corrects face velocities in place and relaxes the pressure.
        d_u: (nx, ny-1), d_v: (nx-1, ny), zero on boundary faces. Cell (0, 0) is the pressure reference. """
    h = sf.grid.h
    u, v = sf.u_face, sf.v_face
    mx, my = sf.p_center.shape

    aE = np.zeros((mx, my))
    aW = np.zeros((mx, my))
    aN = np.zeros((mx, my))
    aS = np.zeros((mx, my))
    aE[:-1, :] = h * d_u[1:-1, :]
    aW[1:, :] = h * d_u[1:-1, :]
    aN[:, :-1] = h * d_v[:, 1:-1]
    aS[:, 1:] = h * d_v[:, 1:-1]
    b = h * (u[:-1, :] - u[1:, :]) + h * (v[:, :-1] - v[:, 1:])
    continuity = float(np.max(np.abs(b)) / h ** 2)

    aP = aE + aW + aN + aS
    aP[0, 0], aE[0, 0], aN[0, 0], b[0, 0] = 1.0, 0.0, 0.0, 0.0
    aP = np.where(aP > 0, aP, 1.0)
    matrix = sparse.diags([aP.ravel(), -aN.ravel()[:-1], -aS.ravel()[1:], -aE.ravel()[:-my], -aW.ravel()[my:]],
                          [0, 1, -1, my, -my], format='csc')
    p_prime = spsolve(matrix, b.ravel()).reshape(mx, my)

    u[1:-1, :] += d_u[1:-1, :] * (p_prime[:-1, :] - p_prime[1:, :])
    v[:, 1:-1] += d_v[:, 1:-1] * (p_prime[:, :-1] - p_prime[:, 1:])
    sf.p_center += relax_p * p_prime
    return PressureCorrection(p_prime=p_prime, continuity=continuity)


class IterationReport(NamedTuple):
    change: float
    continuity: float
    residual: float


class SimpleSolver:
    """ SIMPLE on a MAC grid with QUICK deferred correction and line-TDMA sweeps.
        A thermal solver also carries the energy equation and the Boussinesq source. """
    def __init__(self, grid: GridSpec, nu, edges: Dict[str, EdgeCondition], cfg: SimpleConfig = None,
                 alpha=None, buoyancy=0.0, sf: StaggeredField = None, name='simple'):
        self.grid = grid
        self.nu = nu
        self.alpha = alpha
        self.buoyancy = buoyancy
        self.edges = dict(edges)
        self.cfg = cfg or SimpleConfig()
        self.sf = sf if sf is not None else StaggeredField.zeros(grid)
        self.name = name
        self.iterations = 0
        self.converged = False
        self._growth = 0
        self._last_residual = np.inf
        self.impose_boundaries()

    @property
    def thermal(self):
        return self.alpha is not None

    def _edge(self, side):
        return self.edges.get(side, EdgeCondition())

    def impose_boundaries(self):
        sf, h = self.sf, self.grid.h
        sf.u_face[0, :] = self._edge('west').normal
        sf.u_face[-1, :] = self._edge('east').normal
        sf.v_face[:, 0] = self._edge('south').normal
        sf.v_face[:, -1] = self._edge('north').normal

        interface = [side for side in ('west', 'east', 'south', 'north') if self._edge(side).kind == 'interface']
        if not interface:
            return
        net_in = h * (sf.u_face[0].sum() - sf.u_face[-1].sum() + sf.v_face[:, 0].sum() - sf.v_face[:, -1].sum())
        n_faces = sum(sf.u_face.shape[1] if side in ('west', 'east') else sf.v_face.shape[0] for side in interface)
        delta = net_in / (h * n_faces)
        for side in interface:
            if side == 'west':
                sf.u_face[0, :] -= delta
            elif side == 'east':
                sf.u_face[-1, :] += delta
            elif side == 'south':
                sf.v_face[:, 0] -= delta
            else:
                sf.v_face[:, -1] += delta

    def _tangent(self, side, n_nodes):
        return np.broadcast_to(np.asarray(self._edge(side).tangent, dtype=float), (n_nodes,))

    def momentum_spec(self, component) -> TransportSpec:
        sf, h = self.sf, self.grid.h
        u, v, p = sf.u_face, sf.v_face, sf.p_center
        nx, ny = self.grid.shape
        if component == 'u':
            return TransportSpec(
                role='u', gamma=self.nu, h=h,
                flux_x=h * 0.5 * (u[:-1, :] + u[1:, :]),
                flux_y=h * 0.5 * (v[:-1, :] + v[1:, :]),
                sides={'west': BoundarySide('node', u[0, :]), 'east': BoundarySide('node', u[-1, :]),
                       'south': BoundarySide('face', self._tangent('south', nx)[1:-1]),
                       'north': BoundarySide('face', self._tangent('north', nx)[1:-1])},
                source=h * (p[:-1, :] - p[1:, :]))
        if component == 'v':
            source = h * (p[:, :-1] - p[:, 1:])
            if self.buoyancy:
                source = source + self.buoyancy * h ** 2 * 0.5 * (sf.T_center[:, :-1] + sf.T_center[:, 1:])
            return TransportSpec(
                role='v', gamma=self.nu, h=h,
                flux_x=h * 0.5 * (u[:, :-1] + u[:, 1:]),
                flux_y=h * 0.5 * (v[:, :-1] + v[:, 1:]),
                sides={'south': BoundarySide('node', v[:, 0]), 'north': BoundarySide('node', v[:, -1]),
                       'west': BoundarySide('face', self._tangent('west', ny)[1:-1]),
                       'east': BoundarySide('face', self._tangent('east', ny)[1:-1])},
                source=source)
        raise ValueError(f"Unknown velocity component {component}")

    def energy_spec(self) -> TransportSpec:
        sf, h = self.sf, self.grid.h
        sides = {}
        for side in ('west', 'east', 'south', 'north'):
            T = self._edge(side).temperature
            sides[side] = BoundarySide('neumann') if T is None else BoundarySide('face', T)
        return TransportSpec(role='T', gamma=self.alpha, h=h, flux_x=h * sf.u_face, flux_y=h * sf.v_face,
                             sides=sides)

    def iterate(self, dt=None, old=None) -> IterationReport:
        """ One outer SIMPLE iteration. dt adds the implicit transient term against the fields in old. """
        cfg, sf, h = self.cfg, self.sf, self.grid.h
        self.impose_boundaries()
        u_prev, v_prev, T_prev = sf.u_face.copy(), sf.v_face.copy(), sf.T_center.copy()

        spec_u, spec_v = self.momentum_spec('u'), self.momentum_spec('v')
        res_u = assemble_and_sweep(spec_u, sf.u_face[1:-1, :], cfg.relax_u, cfg.sweeps, dt,
                                   None if old is None else old.u_face[1:-1, :])
        res_v = assemble_and_sweep(spec_v, sf.v_face[:, 1:-1], cfg.relax_v, cfg.sweeps, dt,
                                   None if old is None else old.v_face[:, 1:-1])
        sf.u_face[1:-1, :] = res_u.phi
        sf.v_face[:, 1:-1] = res_v.phi

        d_u = np.zeros_like(sf.u_face)
        d_v = np.zeros_like(sf.v_face)
        d_u[1:-1, :] = h / res_u.aP
        d_v[:, 1:-1] = h / res_v.aP
        pc = pressure_correction(sf, d_u, d_v, cfg.relax_p)

        residual = res_u.residual + res_v.residual
        if self.thermal:
            res_T = assemble_and_sweep(self.energy_spec(), sf.T_center, cfg.relax_t, cfg.sweeps, dt,
                                       None if old is None else old.T_center)
            sf.T_center = res_T.phi
            residual += res_T.residual

        if not all(np.all(np.isfinite(a)) for a in (sf.u_face, sf.v_face, sf.p_center, sf.T_center)):
            raise DivergenceError(f"{self.name}: NaN after {self.iterations} outer iterations", field=self.macro())
        self._watch_divergence(residual + pc.continuity)

        scale = max(np.max(np.abs(sf.u_face)), np.max(np.abs(sf.v_face)), 1e-12)
        change = max(np.max(np.abs(sf.u_face - u_prev)), np.max(np.abs(sf.v_face - v_prev))) / scale
        if self.thermal:
            change = max(change, np.max(np.abs(sf.T_center - T_prev)) / max(np.max(np.abs(sf.T_center)), 1e-12))
        self.iterations += 1
        return IterationReport(change=float(change), continuity=pc.continuity, residual=float(residual))

    def _watch_divergence(self, residual):
        self._growth = self._growth + 1 if residual > self._last_residual else 0
        self._last_residual = residual
        if self._growth >= self.cfg.divergence_window:
            raise DivergenceError(f"{self.name}: residual grew for {self._growth} consecutive iterations",
                                  field=self.macro())

    def advance(self, n_iterations, dt=None):
        """ One implicit time step of size dt (nondimensional) using n_iterations outer iterations. """
        old = self.sf.copy() if dt is not None else None
        report = None
        for _ in range(n_iterations):
            report = self.iterate(dt=dt, old=old)
        return report

    def solve(self, max_outer=None, progress_bar=False, log_every=100):
        cfg = self.cfg
        max_outer = max_outer or cfg.max_outer
        report = None
        for it in tqdm(range(max_outer), disable=not progress_bar, desc=self.name):
            report = self.iterate()
            if wandb.run and it % log_every == 0:
                wandb.log({f'{self.name}/change': report.change, f'{self.name}/continuity': report.continuity,
                           f'{self.name}/residual': report.residual, f'{self.name}/iteration': self.iterations})
            if report.change < cfg.tol_steady and report.continuity < cfg.tol_continuity:
                self.converged = True
                break
        status = 'converged' if self.converged else 'stopped without converging'
        print(f"{self.name}: {status} after {self.iterations} iterations "
              f"(change {report.change:.3e}, continuity {report.continuity:.3e})")
        return self.macro()

    def energy_step(self, dt, tol=1e-10, max_iterations=500):
        """ Implicit energy update over dt with the current face velocities frozen. """
        self.impose_boundaries()
        self.sf.T_center = solve_transport(self.energy_spec(), self.sf.T_center, tol=tol,
                                           max_iterations=max_iterations, dt=dt)
        return self.sf.T_center

    def edge_values(self):
        nx, ny = self.grid.shape
        sf = self.sf
        # normal components come from the boundary faces, which carry any interface mass correction
        faces = {'west': sf.u_face[0, :], 'east': sf.u_face[-1, :], 'south': sf.v_face[:, 0], 'north': sf.v_face[:, -1]}
        values = {}
        for side in ('west', 'east', 'south', 'north'):
            edge = self._edge(side)
            n_nodes = ny if side in ('west', 'east') else nx
            normal = faces[side]
            tangent = self._tangent(side, n_nodes)
            T = None
            if edge.temperature is not None:
                T = faces_to_nodes(np.broadcast_to(np.asarray(edge.temperature, dtype=float), (n_nodes - 1,)))
            if side in ('west', 'east'):
                u = faces_to_nodes(normal)
                if edge.kind == 'interface':
                    # an artificial edge meets the walls at the wall velocity, not at its nearest face
                    end = 0 if side == 'west' else -1
                    u[0], u[-1] = self._tangent('south', nx)[end], self._tangent('north', nx)[end]
                values[side] = EdgeValues(u=u, v=tangent, T=T)
            else:
                values[side] = EdgeValues(u=tangent, v=faces_to_nodes(normal), T=T)
        return values

    def macro(self) -> MacroField:
        return stag_to_nodes(self.sf, self.edge_values())


def solve_simple(case, cfg: SimpleConfig = None, progress_bar=False) -> MacroField:
    """ Whole-cavity SIMPLE solve of a lid-driven or natural-convection case. """
    if case.kind not in ('lid', 'convection'):
        raise ConfigurationError(f"fvm cannot solve case kind {case.kind}")
    grid = GridSpec.unit_square(case.grid)
    transport = nondimensional_transport(case.kind, re=case.re, ra=case.ra, pr=case.pr, ma=case.ma,
                                         lid_velocity=case.lid_velocity)
    thermal = case.kind == 'convection'
    solver = SimpleSolver(grid, transport.nu, cavity_edges(case.kind, grid, case.lid_velocity), cfg,
                          alpha=transport.alpha if thermal else None, buoyancy=transport.buoyancy)
    print(f"fvm {case.kind}: {grid.nx}x{grid.ny} nodes, nu={transport.nu:.4g}")
    return solver.solve(progress_bar=progress_bar)
