from dataclasses import dataclass

import numpy as np

from hybridflow.errors import ConfigurationError
from hybridflow.lbm.lattice import CS, CS2

LID_VELOCITY = 0.1


def relaxation_times(kind, h_lattice, re=None, ra=None, pr=None, ma=0.1, lid_velocity=LID_VELOCITY):
    """ (tau_v, tau_T) for a cavity of h_lattice lattice units.
        Lid-driven cavities have no energy lattice and return tau_T = tau_v. """
    if h_lattice <= 0:
        raise ConfigurationError("lattice length must be positive")
    if kind == 'lid':
        if re is None or re <= 0:
            raise ConfigurationError("re must be positive")
        nu = lid_velocity * h_lattice / re
        tau_v = nu / (CS2 * 1.0) + 0.5
        return tau_v, tau_v
    if kind == 'convection':
        if pr is None or pr <= 0:
            raise ConfigurationError("pr must be positive")
        if ra is None or ra < 0:
            raise ConfigurationError("ra must be non-negative")
        u_c = ma * CS
        # Ra = 0 keeps the transport scales of Ra = 1 and switches buoyancy off
        ra_eff = ra if ra > 0 else 1.0
        nu = u_c * h_lattice * np.sqrt(pr / ra_eff)
        alpha = nu / pr
        return nu / CS2 + 0.5, 3.0 * alpha + 0.5
    raise ConfigurationError(f"Unknown case kind {kind}")


def buoyancy_coefficient(ma, h_lattice, ra=1.0):
    """ Lattice acceleration per unit theta. """
    if ra == 0:
        return 0.0
    return ma ** 2 * CS2 / h_lattice


@dataclass(frozen=True)
class Transport:
    """ Nondimensional transport coefficients shared by every solver.
        Lattice velocities equal nondimensional velocities, one lattice step is 1/n time units. """
    nu: float
    alpha: float
    buoyancy: float


def nondimensional_transport(kind, re=None, ra=None, pr=None, ma=0.1, lid_velocity=LID_VELOCITY):
    if kind == 'lid':
        if re is None or re <= 0:
            raise ConfigurationError("re must be positive")
        nu = lid_velocity / re
        return Transport(nu=nu, alpha=nu, buoyancy=0.0)
    if kind == 'convection':
        if pr is None or pr <= 0:
            raise ConfigurationError("pr must be positive")
        if ra is None or ra < 0:
            raise ConfigurationError("ra must be non-negative")
        ra_eff = ra if ra > 0 else 1.0
        nu = ma * np.sqrt(pr / (3.0 * ra_eff))
        alpha = ma / np.sqrt(3.0 * ra_eff * pr)
        return Transport(nu=nu, alpha=alpha, buoyancy=ma ** 2 / 3.0 if ra > 0 else 0.0)
    if kind == 'conduction':
        return Transport(nu=0.0, alpha=1.0, buoyancy=0.0)
    raise ConfigurationError(f"Unknown case kind {kind}")
