from typing import Optional, Sequence

import numpy as np
import wandb
from tqdm import tqdm

from hybridflow.errors import DivergenceError
from hybridflow.grid import GridSpec, MacroField
from hybridflow.lbm.lattice import E, E5, CS, CS2, DT, LatticeModel, LatticeState, BodyForceSpec
from hybridflow.lbm.equilibrium import equilibrium_f_field, equilibrium_g_field
from hybridflow.lbm.boundaries import BoundaryCondition, macroscopic, temperature


def stream(post, directions):
    out = np.empty_like(post)
    for k, (ex, ey) in enumerate(directions):
        out[k] = np.roll(post[k], shift=(ex, ey), axis=(0, 1))
    return out


def forcing_term(feq, ux, uy, force: BodyForceSpec):
    """ Per-direction source carrying a body acceleration (Gx, Gy). """
    F = np.empty_like(feq)
    for i in range(9):
        F[i] = ((E[i, 0] - ux) * force.Gx + (E[i, 1] - uy) * force.Gy) / CS2 * feq[i]
    return F


def moments(state: LatticeState, grid: Optional[GridSpec] = None) -> MacroField:
    rho, ux, uy = macroscopic(state.f)
    T = temperature(state.g) if state.g is not None else np.zeros_like(rho)
    mf = MacroField(rho=rho, u=ux, v=uy, T=T, p=rho * CS2, grid=grid)
    return mf.validate()


def step_flow(state: LatticeState, model: LatticeModel, force: Optional[BodyForceSpec] = None,
              boundaries: Sequence[BoundaryCondition] = ()) -> LatticeState:
    f = state.f
    rho, ux, uy = macroscopic(f)
    feq = equilibrium_f_field(rho, ux, uy)
    post = f - (f - feq) / model.tau_v
    if force is not None:
        post += forcing_term(feq, ux, uy, force) * DT
    new = LatticeState(stream(post, E), state.g)
    for bc in boundaries:
        bc.apply_flow(new, model)
    if not np.all(np.isfinite(new.f)):
        raise DivergenceError("NaN detected in the flow populations")
    return new


def step_energy(state: LatticeState, model: LatticeModel, boundaries: Sequence[BoundaryCondition] = (),
                velocity=None) -> LatticeState:
    """ Advect-diffuse g with the given velocity, by default the one carried by state.f. """
    if velocity is None:
        _, ux, uy = macroscopic(state.f)
    else:
        ux, uy = velocity
    if np.any(np.hypot(ux, uy) >= CS):
        raise DivergenceError("advecting velocity reached the lattice sound speed")
    g = state.g
    geq = equilibrium_g_field(temperature(g), ux, uy)
    post = g - (g - geq) / model.tau_T
    new = LatticeState(state.f, stream(post, E5))
    for bc in boundaries:
        bc.apply_energy(new)
    if not np.all(np.isfinite(new.g)):
        raise DivergenceError("NaN detected in the energy populations")
    return new


def initial_state(shape, rho=1.0, u=0.0, v=0.0, T=None):
    f = equilibrium_f_field(np.broadcast_to(rho, shape), np.broadcast_to(u, shape), np.broadcast_to(v, shape))
    g = None
    if T is not None:
        g = equilibrium_g_field(np.broadcast_to(T, shape), np.broadcast_to(u, shape), np.broadcast_to(v, shape))
    return LatticeState(f, g)


def cavity_boundaries(kind, lid_velocity=0.1, sides=('west', 'east', 'south', 'north')):
    """ Wall closures of a cavity, horizontal edges first so vertical edges own the corners. """
    walls = []
    for side in ('south', 'north', 'west', 'east'):
        if side not in sides:
            continue
        velocity = (lid_velocity, 0.0) if kind == 'lid' and side == 'north' else (0.0, 0.0)
        temperature_value = {'west': 1.0, 'east': 0.0}.get(side) if kind == 'convection' else None
        walls.append(BoundaryCondition(side=side, velocity=velocity, temperature=temperature_value))
    return walls


class LBMSolver:
    """ Drives a lattice through time with a fixed list of closures.
        thermal=True evolves g; otherwise buoyancy reads the externally set theta. """
    def __init__(self, grid: GridSpec, model: LatticeModel, boundaries, buoyancy=0.0, thermal=False,
                 theta=None, T_init=0.0):
        self.grid = grid
        self.model = model
        self.boundaries = list(boundaries)
        self.buoyancy = buoyancy
        self.thermal = thermal
        self.theta = theta
        self.state = initial_state(grid.shape, T=T_init if thermal else None)
        self.steps = 0

    def force(self):
        if self.buoyancy == 0.0:
            return None
        theta = temperature(self.state.g) if self.thermal else self.theta
        if theta is None:
            return None
        return BodyForceSpec.buoyancy(theta, self.buoyancy)

    def flow_step(self):
        self.state = step_flow(self.state, self.model, self.force(), self.boundaries)
        self.steps += 1

    def energy_step(self):
        self.state = step_energy(self.state, self.model, self.boundaries)

    def step(self):
        self.flow_step()
        if self.thermal:
            self.energy_step()

    def advance(self, n_steps):
        for _ in range(n_steps):
            self.step()
        return self

    def macro(self) -> MacroField:
        mf = moments(self.state, grid=self.grid)
        if not self.thermal and self.theta is not None:
            mf.T = np.array(self.theta, dtype=float)
        return mf

    def run(self, max_steps, check_every=500, steady_tol=1e-7, progress_bar=False, log_prefix='lbm'):
        """ Step until the relative velocity change per step, measured every check_every steps,
            drops below steady_tol. """
        previous = self.macro()
        pbar = tqdm(total=max_steps, disable=not progress_bar, desc=log_prefix)
        change = np.inf
        while self.steps < max_steps:
            n = min(check_every, max_steps - self.steps)
            try:
                self.advance(n)
            except DivergenceError as err:
                err.field = previous
                raise
            current = self.macro()
            change = relative_change(current, previous) / n
            pbar.update(n)
            pbar.set_postfix(change=f"{change:.2e}")
            if wandb.run:
                wandb.log({f'{log_prefix}/step': self.steps, f'{log_prefix}/change': change})
            previous = current
            if change < steady_tol:
                break
        pbar.close()
        print(f"{log_prefix}: stopped after {self.steps} steps, relative change {change:.3e}")
        return previous


def relative_change(current: MacroField, previous: MacroField):
    scale = max(np.max(np.abs(current.u)), np.max(np.abs(current.v)), 1e-12)
    du = max(np.max(np.abs(current.u - previous.u)), np.max(np.abs(current.v - previous.v))) / scale
    dT = np.max(np.abs(current.T - previous.T)) / max(np.max(np.abs(current.T)), 1e-12)
    return max(du, dT)
