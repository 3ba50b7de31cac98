from dataclasses import dataclass
from typing import Optional

import numpy as np

from hybridflow.errors import ConfigurationError

# D2Q9: rest, axis directions (+x, +y, -x, -y), diagonals (1,1), (-1,1), (-1,-1), (1,-1)
E = np.array([[0, 0], [1, 0], [0, 1], [-1, 0], [0, -1], [1, 1], [-1, 1], [-1, -1], [1, -1]])
W = np.array([4 / 9] + [1 / 9] * 4 + [1 / 36] * 4)
OPPOSITE = np.array([0, 3, 4, 1, 2, 7, 8, 5, 6])

# D2Q5 shares the first five D2Q9 directions
E5 = E[:5]
W5 = np.array([1 / 3] + [1 / 6] * 4)

CS2 = 1.0 / 3.0
CS = np.sqrt(CS2)
DT = 1.0


def check_isotropy(e=E, w=W, cs2=CS2, atol=1e-14):
    """ Moment conditions of the velocity set up to second order. """
    first = (w[:, None] * e).sum(axis=0)
    second = np.einsum('i,ia,ib->ab', w, e, e)
    return (abs(w.sum() - 1.0) < atol and np.allclose(first, 0.0, atol=atol)
            and np.allclose(second, cs2 * np.eye(2), atol=atol))


@dataclass(frozen=True)
class LatticeModel:
    tau_v: float
    tau_T: Optional[float] = None

    def __post_init__(self):
        if not self.tau_v > 0.5:
            raise ConfigurationError(f"tau_v must exceed 0.5, got {self.tau_v}")
        if self.tau_T is not None and not self.tau_T > 0.5:
            raise ConfigurationError(f"tau_T must exceed 0.5, got {self.tau_T}")
        if not check_isotropy():
            raise ConfigurationError("D2Q9 weights violate the isotropy conditions")

    @property
    def thermal(self):
        return self.tau_T is not None

    @property
    def nu(self):
        return (self.tau_v - 0.5) * CS2 * DT

    @property
    def alpha(self):
        if self.tau_T is None:
            return None
        # D2Q5 with a rest weight of 1/3 diffuses at (tau_T - 1/2) / 3
        return (self.tau_T - 0.5) / 3.0


class LatticeState:
    """ f: (9, nx, ny) flow populations, g: (5, nx, ny) thermal populations or None. """
    def __init__(self, f, g=None):
        self.f = f
        self.g = g

    @property
    def shape(self):
        return self.f.shape[1:]

    def copy(self):
        return LatticeState(self.f.copy(), None if self.g is None else self.g.copy())

    def __repr__(self):
        return f"f: {self.f.shape} -- g: {None if self.g is None else self.g.shape}"


@dataclass
class BodyForceSpec:
    """ Body-force density per unit mass, Gx and Gy broadcastable to the node grid. """
    Gx: object = 0.0
    Gy: object = 0.0

    @classmethod
    def buoyancy(cls, theta, coefficient, theta_ref=0.0):
        return cls(Gx=0.0, Gy=coefficient * (np.asarray(theta) - theta_ref))

    def check(self, limit=0.1 * CS):
        magnitude = np.hypot(self.Gx, self.Gy) * DT
        if np.max(magnitude) >= limit:
            raise ConfigurationError(f"body force {np.max(magnitude):.3g} per step is not small against c_s")
        return self
