from dataclasses import dataclass, field
from typing import Dict, NamedTuple, Optional

import numpy as np

from hybridflow.errors import ConfigurationError
from hybridflow.fvm.quick import quick_correction
from hybridflow.fvm.tdma import solve_tridiag_array

# Boundary side modes:
#   'node'    known neighbour value one full spacing away
#   'face'    known value on the boundary face, half a spacing away
#   'neumann' zero diffusive flux
SIDE_MODES = ('node', 'face', 'neumann')


@dataclass
class BoundarySide:
    mode: str
    values: object = 0.0

    def __post_init__(self):
        if self.mode not in SIDE_MODES:
            raise ConfigurationError(f"Unknown boundary mode {self.mode}")


@dataclass
class TransportSpec:
    """ Steady or implicit-transient convection-diffusion of one variable on a uniform CV grid.
        flux_x: (mx + 1, my) volume fluxes through x-faces, positive along +x.
        flux_y: (mx, my + 1) volume fluxes through y-faces, positive along +y.
        source: (mx, my) source integrated over each CV. """
    role: str
    gamma: float
    flux_x: np.ndarray
    flux_y: np.ndarray
    sides: Dict[str, BoundarySide]
    h: float
    source: Optional[np.ndarray] = None
    quick: bool = True


class Links(NamedTuple):
    aP: np.ndarray
    aE: np.ndarray
    aW: np.ndarray
    aN: np.ndarray
    aS: np.ndarray
    b: np.ndarray


class SweepResult(NamedTuple):
    phi: np.ndarray
    residual: float
    aP: np.ndarray


def _side_arrays(side, links, inflow):
    """ (row index, neighbour-link array, inflow flux along the side, second-row index). """
    aP, aE, aW, aN, aS, b = links
    return {'west': ((0, slice(None)), aW, inflow['west'], (1, slice(None))),
            'east': ((-1, slice(None)), aE, inflow['east'], (-2, slice(None))),
            'south': ((slice(None), 0), aS, inflow['south'], (slice(None), 1)),
            'north': ((slice(None), -1), aN, inflow['north'], (slice(None), -2))}[side]


def build_links(spec: TransportSpec, phi, relax=1.0, dt=None, phi_old=None) -> Links:
    mx, my = phi.shape
    if spec.flux_x.shape != (mx + 1, my) or spec.flux_y.shape != (mx, my + 1):
        raise ConfigurationError(f"flux shapes {spec.flux_x.shape}, {spec.flux_y.shape} do not match {phi.shape}")
    D = spec.gamma
    Fe, Fw = spec.flux_x[1:], spec.flux_x[:-1]
    Fn, Fs = spec.flux_y[:, 1:], spec.flux_y[:, :-1]

    aE = D + np.maximum(-Fe, 0.0)
    aW = D + np.maximum(Fw, 0.0)
    aN = D + np.maximum(-Fn, 0.0)
    aS = D + np.maximum(Fs, 0.0)
    aP = (D + np.maximum(Fe, 0.0)) + (D + np.maximum(-Fw, 0.0)) + (D + np.maximum(Fn, 0.0)) + (D + np.maximum(-Fs, 0.0))
    b = np.zeros_like(phi) if spec.source is None else np.array(spec.source, dtype=float)

    links = Links(aP, aE, aW, aN, aS, b)
    inflow = {'west': Fw[0, :], 'east': -Fe[-1, :], 'south': Fs[:, 0], 'north': -Fn[:, -1]}
    for side, bc in spec.sides.items():
        row, a_nb, f_in, second = _side_arrays(side, links, inflow)
        values = np.broadcast_to(np.asarray(bc.values, dtype=float), a_nb[row].shape)
        if bc.mode == 'node':
            b[row] += a_nb[row] * values
        elif bc.mode == 'face':
            aP[row] += 2.0 * D - (D + np.maximum(-f_in, 0.0))
            b[row] += (2.0 * D + f_in) * values
            if min(mx, my) >= 2:
                # second-order wall gradient, deferred
                b[row] += D * (2.0 * values - 3.0 * phi[row] + phi[second]) / 3.0
        else:
            aP[row] -= D
            b[row] += np.maximum(f_in, 0.0) * phi[row]
        a_nb[row] = 0.0

    if spec.quick:
        cx = quick_correction(phi, spec.flux_x[1:-1], axis=0)
        b[:-1] -= cx
        b[1:] += cx
        cy = quick_correction(phi, spec.flux_y[:, 1:-1], axis=1)
        b[:, :-1] -= cy
        b[:, 1:] += cy

    if dt is not None:
        a0 = spec.h ** 2 / dt
        aP = aP + a0
        b += a0 * (phi if phi_old is None else phi_old)

    if np.any(aP <= 0):
        raise ConfigurationError(f"non-positive diagonal coefficient in the {spec.role} equation")
    aP = aP / relax
    b += (1.0 - relax) * aP * phi
    return Links(aP, aE, aW, aN, aS, b)


def residual(phi, links: Links):
    aP, aE, aW, aN, aS, b = links
    r = aP * phi - b
    r[:-1] -= aE[:-1] * phi[1:]
    r[1:] -= aW[1:] * phi[:-1]
    r[:, :-1] -= aN[:, :-1] * phi[:, 1:]
    r[:, 1:] -= aS[:, 1:] * phi[:, :-1]
    return float(np.abs(r).sum() / max(np.abs(aP * phi).sum(), 1e-30))


def line_sweeps(phi, links: Links, n_sweeps=1):
    """ Alternating x-line and y-line TDMA passes. """
    aP, aE, aW, aN, aS, b = links
    phi = phi.copy()
    for _ in range(n_sweeps):
        rhs = b.copy()
        rhs[:, :-1] += aN[:, :-1] * phi[:, 1:]
        rhs[:, 1:] += aS[:, 1:] * phi[:, :-1]
        phi = solve_tridiag_array(-aW, aP, -aE, rhs)

        rhs = b.copy()
        rhs[:-1] += aE[:-1] * phi[1:]
        rhs[1:] += aW[1:] * phi[:-1]
        phi = solve_tridiag_array((-aS).T, aP.T, (-aN).T, rhs.T).T
    return phi


def assemble_and_sweep(spec: TransportSpec, phi, relax=1.0, sweeps=1, dt=None, phi_old=None) -> SweepResult:
    links = build_links(spec, phi, relax=relax, dt=dt, phi_old=phi_old)
    new = line_sweeps(phi, links, sweeps)
    return SweepResult(phi=new, residual=residual(phi, links), aP=links.aP)


def solve_transport(spec: TransportSpec, phi, tol=1e-10, max_iterations=5000, relax=1.0, dt=None, phi_old=None):
    """ Repeats assemble_and_sweep until the normalised residual drops below tol. """
    phi_old = phi.copy() if dt is not None and phi_old is None else phi_old
    for _ in range(max_iterations):
        result = assemble_and_sweep(spec, phi, relax=relax, sweeps=1, dt=dt, phi_old=phi_old)
        phi = result.phi
        if result.residual < tol:
            break
    return phi
