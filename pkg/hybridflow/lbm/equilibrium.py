import numpy as np

from hybridflow.errors import DomainError
from hybridflow.lbm.lattice import E, W, E5, W5, CS, CS2


def _check_velocity(u):
    if np.hypot(*u) >= CS:
        raise DomainError(f"|u| = {np.hypot(*u):.4g} is not below the lattice sound speed")


def equilibrium_f(rho, u, i):
    """ Second-order D2Q9 equilibrium of direction i. """
    if not rho > 0:
        raise DomainError(f"density must be positive, got {rho}")
    _check_velocity(u)
    eu = E[i, 0] * u[0] + E[i, 1] * u[1]
    usq = u[0] ** 2 + u[1] ** 2
    return rho * W[i] * (1.0 + eu / CS2 + eu ** 2 / (2 * CS2 ** 2) - usq / (2 * CS2))


def equilibrium_g(T, u, i):
    """ Linear D2Q5 equilibrium of direction i. The advecting velocity is not range-checked here. """
    eu = E5[i, 0] * u[0] + E5[i, 1] * u[1]
    return W5[i] * T * (1.0 + eu / CS2)


def equilibrium_f_field(rho, ux, uy):
    rho, ux, uy = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (rho, ux, uy)))
    usq = ux ** 2 + uy ** 2
    feq = np.empty((9,) + rho.shape)
    for i in range(9):
        eu = E[i, 0] * ux + E[i, 1] * uy
        feq[i] = rho * W[i] * (1.0 + 3.0 * eu + 4.5 * eu ** 2 - 1.5 * usq)
    return feq


def equilibrium_g_field(T, ux, uy):
    T, ux, uy = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (T, ux, uy)))
    geq = np.empty((5,) + T.shape)
    for i in range(5):
        eu = E5[i, 0] * ux + E5[i, 1] * uy
        geq[i] = W5[i] * T * (1.0 + 3.0 * eu)
    return geq
