from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from hybridflow.errors import MessageError, ConfigurationError
from hybridflow.lbm.lattice import E, W, CS2
from hybridflow.lbm.equilibrium import equilibrium_f_field, equilibrium_g_field

SIDES = ('west', 'east', 'south', 'north')
INWARD = {'west': (1, 0), 'east': (-1, 0), 'south': (0, 1), 'north': (0, -1)}


class EdgeNodes(NamedTuple):
    boundary: tuple
    inner: tuple
    second: tuple


def edge_nodes(shape, side, span='auto', periodic=False) -> EdgeNodes:
    """ Wet boundary nodes of one edge with their first and second inner neighbours.
        Vertical edges own the corners unless span says otherwise; a corner's inner
        neighbour is the diagonal one, except along periodic edges. """
    if side not in SIDES:
        raise ConfigurationError(f"Unknown side {side}")
    nx, ny = shape
    vertical = side in ('west', 'east')
    if span == 'auto':
        span = 'full' if vertical else 'interior'
    n_along = ny if vertical else nx
    along = np.arange(n_along) if span == 'full' else np.arange(1, n_along - 1)
    fixed = {'west': 0, 'east': nx - 1, 'south': 0, 'north': ny - 1}[side]
    di, dj = INWARD[side]

    corner = (along == 0) | (along == n_along - 1)

    def shifted(k):
        normal = fixed + k * (di if vertical else dj)
        # only corners step diagonally; every other node reads its true normal neighbours
        tangent = along if periodic else np.where(corner, np.clip(along, k, n_along - 1 - k), along)
        normal = np.full_like(along, normal)
        return (normal, tangent) if vertical else (tangent, normal)

    return EdgeNodes(boundary=shifted(0), inner=shifted(1), second=shifted(2))


def macroscopic(f):
    """ Density and velocity of populations shaped (9, ...), summed in a fixed order. """
    rho = f[0] + f[1] + f[2] + f[3] + f[4] + f[5] + f[6] + f[7] + f[8]
    ux = ((f[1] + f[5] + f[8]) - (f[3] + f[6] + f[7])) / rho
    uy = ((f[2] + f[5] + f[6]) - (f[4] + f[7] + f[8])) / rho
    return rho, ux, uy


def temperature(g):
    return g[0] + g[1] + g[2] + g[3] + g[4]


def bc_noneq_extrapolation(f_inner, u_b, rho_b=None, g_inner=None, T_b=None):
    """ Boundary populations from the equilibrium at the prescribed state plus the
        non-equilibrium part of the inner neighbour. rho_b=None copies the inner density. """
    rho_f, ux_f, uy_f = macroscopic(f_inner)
    rho_b = rho_f if rho_b is None else rho_b
    f_b = equilibrium_f_field(rho_b, u_b[0], u_b[1]) + f_inner - equilibrium_f_field(rho_f, ux_f, uy_f)
    g_b = None
    if g_inner is not None:
        T_f = temperature(g_inner)
        g_b = equilibrium_g_field(T_b, u_b[0], u_b[1]) + g_inner - equilibrium_g_field(T_f, ux_f, uy_f)
    return f_b, g_b


def bc_velocity_gradient(rho_b, u_b, strain, tau_v):
    """ Equilibrium plus the first-order non-equilibrium built from the strain rate.
        strain = (Sxx, Sxy, Syy). """
    sxx, sxy, syy = (np.asarray(s, dtype=float) for s in strain)
    feq = equilibrium_f_field(rho_b, u_b[0], u_b[1])
    rho_b = np.broadcast_to(rho_b, feq.shape[1:])
    f_b = np.empty_like(feq)
    for i in range(9):
        ex, ey = E[i]
        q_s = (ex * ex - CS2) * sxx + 2.0 * ex * ey * sxy + (ey * ey - CS2) * syy
        f_b[i] = feq[i] - tau_v * W[i] / CS2 * rho_b * q_s
    return f_b


@dataclass
class BoundaryCondition:
    """ Wet-node closure of one edge. Values are scalars or arrays over the edge nodes.
        temperature=None on a thermal lattice means an adiabatic edge. """
    side: str
    velocity: tuple = (0.0, 0.0)
    temperature: Optional[object] = None
    density: Optional[object] = None
    scheme: str = 'noneq-extrapolation'
    strain: Optional[tuple] = None
    span: str = 'auto'
    periodic: bool = False

    def __post_init__(self):
        if self.scheme not in ('noneq-extrapolation', 'velocity-gradient'):
            raise ConfigurationError(f"Unknown boundary scheme {self.scheme}")

    def nodes(self, shape):
        return edge_nodes(shape, self.side, self.span, self.periodic)

    def _velocity(self, n):
        return tuple(np.broadcast_to(np.asarray(c, dtype=float), (n,)) for c in self.velocity)

    def apply_flow(self, state, model):
        nodes = self.nodes(state.shape)
        ib, jb = nodes.boundary
        f_inner = state.f[:, nodes.inner[0], nodes.inner[1]]
        u_b = self._velocity(len(ib))
        if self.scheme == 'noneq-extrapolation':
            f_b, _ = bc_noneq_extrapolation(f_inner, u_b, rho_b=self.density)
        else:
            if self.strain is None:
                raise MessageError(f"velocity-gradient closure on the {self.side} edge has no strain rate")
            rho_b = self.density if self.density is not None else macroscopic(f_inner)[0]
            f_b = bc_velocity_gradient(rho_b, u_b, self.strain, model.tau_v)
        state.f[:, ib, jb] = f_b

    def apply_energy(self, state):
        nodes = self.nodes(state.shape)
        ib, jb = nodes.boundary
        f_inner = state.f[:, nodes.inner[0], nodes.inner[1]]
        g_inner = state.g[:, nodes.inner[0], nodes.inner[1]]
        if self.temperature is None:
            g_second = state.g[:, nodes.second[0], nodes.second[1]]
            T_b = (4.0 * temperature(g_inner) - temperature(g_second)) / 3.0
        else:
            T_b = np.broadcast_to(np.asarray(self.temperature, dtype=float), (len(ib),))
        _, g_b = bc_noneq_extrapolation(f_inner, self._velocity(len(ib)), g_inner=g_inner, T_b=T_b)
        state.g[:, ib, jb] = g_b
