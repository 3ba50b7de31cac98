from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from hybridflow.errors import GridError, DivergenceError


@dataclass(frozen=True)
class GridSpec:
    """ Uniform rectangular node grid. Node (i, j) sits at (x0 + i*h, y0 + j*h). """
    nx: int
    ny: int
    h: Optional[float] = None
    x0: float = 0.0
    y0: float = 0.0

    def __post_init__(self):
        if self.nx < 4 or self.ny < 4:
            raise GridError(f"grid needs at least 4 nodes per direction, got {self.nx}x{self.ny}")
        if self.h is None:
            object.__setattr__(self, 'h', 1.0 / (max(self.nx, self.ny) - 1))
        if not self.h > 0:
            raise GridError(f"grid spacing must be positive, got {self.h}")

    @classmethod
    def unit_square(cls, n):
        return cls(nx=n, ny=n, h=1.0 / (n - 1))

    @property
    def shape(self):
        return self.nx, self.ny

    @property
    def x(self):
        return self.x0 + self.h * np.arange(self.nx)

    @property
    def y(self):
        return self.y0 + self.h * np.arange(self.ny)

    def coords(self):
        return np.meshgrid(self.x, self.y, indexing='ij')

    def sub_grid(self, i_start, i_stop, j_start, j_stop):
        """ Node window [i_start, i_stop] x [j_start, j_stop], bounds inclusive. """
        return GridSpec(nx=i_stop - i_start + 1, ny=j_stop - j_start + 1, h=self.h,
                        x0=self.x0 + i_start * self.h, y0=self.y0 + j_start * self.h)


class MacroField:
    """ Node-collocated macroscopic fields, every array shaped (nx, ny). """
    def __init__(self, rho, u, v, T=None, p=None, grid: Optional[GridSpec] = None, T_stderr=None):
        self.rho = rho
        self.u = u
        self.v = v
        self.T = T if T is not None else np.zeros_like(u)
        self.p = p if p is not None else np.zeros_like(u)
        self.grid = grid
        self.T_stderr = T_stderr

    @classmethod
    def at_rest(cls, grid: GridSpec, T=0.0):
        ones = np.ones(grid.shape)
        return cls(rho=ones.copy(), u=np.zeros(grid.shape), v=np.zeros(grid.shape), T=T * ones, grid=grid)

    @property
    def shape(self):
        return self.u.shape

    def validate(self):
        for name in ('rho', 'u', 'v', 'T', 'p'):
            if not np.all(np.isfinite(getattr(self, name))):
                raise DivergenceError(f"non-finite values in {name}", field=self)
        if np.any(self.rho <= 0):
            raise DivergenceError("density became non-positive", field=self)
        return self

    def copy(self):
        return MacroField(rho=self.rho.copy(), u=self.u.copy(), v=self.v.copy(), T=self.T.copy(), p=self.p.copy(),
                          grid=self.grid, T_stderr=None if self.T_stderr is None else self.T_stderr.copy())

    def __repr__(self):
        return (f"rho: {self.rho.shape} -- u: {self.u.shape} -- v: {self.v.shape} -- "
                f"T: {self.T.shape} -- p: {self.p.shape}")


class StaggeredField:
    """ MAC layout over the cells of a node grid.
        u_face: (nx, ny-1) at (i h, (j+1/2) h)
        v_face: (nx-1, ny) at ((i+1/2) h, j h)
        p_center, T_center: (nx-1, ny-1) at cell centres. """
    def __init__(self, u_face, v_face, p_center, T_center, grid: GridSpec):
        nx, ny = grid.shape
        expected = (('u_face', u_face, (nx, ny - 1)), ('v_face', v_face, (nx - 1, ny)),
                    ('p_center', p_center, (nx - 1, ny - 1)), ('T_center', T_center, (nx - 1, ny - 1)))
        for name, value, shape in expected:
            if value.shape != shape:
                raise GridError(f"{name} has shape {value.shape}, expected {shape}")
        self.u_face = u_face
        self.v_face = v_face
        self.p_center = p_center
        self.T_center = T_center
        self.grid = grid

    @classmethod
    def zeros(cls, grid: GridSpec, T=0.0):
        nx, ny = grid.shape
        return cls(u_face=np.zeros((nx, ny - 1)), v_face=np.zeros((nx - 1, ny)), p_center=np.zeros((nx - 1, ny - 1)),
                   T_center=np.full((nx - 1, ny - 1), float(T)), grid=grid)

    def copy(self):
        return StaggeredField(self.u_face.copy(), self.v_face.copy(), self.p_center.copy(), self.T_center.copy(),
                              self.grid)

    def __repr__(self):
        return (f"u_face: {self.u_face.shape} -- v_face: {self.v_face.shape} -- "
                f"p_center: {self.p_center.shape} -- T_center: {self.T_center.shape}")


@dataclass
class EdgeValues:
    """ Node values along one domain edge. u or v None keeps the interpolated value, T None means zero normal gradient. """
    u: Optional[np.ndarray] = None
    v: Optional[np.ndarray] = None
    T: Optional[np.ndarray] = None


class Face(NamedTuple):
    """ A staggered sample location.
        orientation 'vertical': ((i) h, (j+1/2) h), 'horizontal': ((i+1/2) h, j h), 'node': (i h, j h). """
    component: str
    orientation: str
    i: int
    j: int
