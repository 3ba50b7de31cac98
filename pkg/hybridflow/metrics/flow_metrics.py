from typing import NamedTuple

import numpy as np
from scipy.integrate import trapezoid

from hybridflow.errors import DegenerateFieldError, GridError
from hybridflow.grid import GridSpec, MacroField, streamfunction
from hybridflow.mcm import analytic_conduction


def _grid_of(shape, grid=None):
    return grid if grid is not None else GridSpec(nx=shape[0], ny=shape[1])


def _quadratic_peak(window):
    """ Stationary point of the least-squares quadratic through a 3x3 window, offsets in cells. """
    dx, dy = np.meshgrid([-1.0, 0.0, 1.0], [-1.0, 0.0, 1.0], indexing='ij')
    dx, dy = dx.ravel(), dy.ravel()
    A = np.stack([np.ones(9), dx, dy, dx ** 2, dx * dy, dy ** 2], axis=1)
    coef, *_ = np.linalg.lstsq(A, window.ravel(), rcond=None)
    _, b, c, d, e, f = coef
    hessian = np.array([[2 * d, e], [e, 2 * f]])
    if abs(np.linalg.det(hessian)) < 1e-300:
        return 0.0, 0.0
    offset = np.linalg.solve(hessian, [-b, -c])
    return tuple(np.clip(offset, -1.0, 1.0))


def vortex_center(psi, grid: GridSpec = None):
    """ Location of the global |psi| extremum, refined by a quadratic fit over its 3x3 neighbourhood. """
    psi = np.asarray(psi, dtype=float)
    grid = _grid_of(psi.shape, grid)
    i, j = np.unravel_index(np.argmax(np.abs(psi)), psi.shape)
    if i in (0, psi.shape[0] - 1) or j in (0, psi.shape[1] - 1):
        raise DegenerateFieldError(f"stream function extremum at boundary node ({i}, {j})")
    ox, oy = _quadratic_peak(psi[i - 1:i + 2, j - 1:j + 2])
    return grid.x0 + (i + ox) * grid.h, grid.y0 + (j + oy) * grid.h


class NusseltProfile(NamedTuple):
    Y: np.ndarray
    Nu: np.ndarray
    Nu_max: float
    Y_at_Nu_max: float
    Nu_ave: float


def nusselt_profile(T, grid: GridSpec = None, smooth=False) -> NusseltProfile:
    """ Local Nusselt number -dT/dX on the hot wall X = 0 by a one-sided second-order difference.
        smooth applies a 3-point average along the wall, used for random-walk temperatures. """
    T = np.asarray(T, dtype=float)
    if T.shape[0] < 3:
        raise GridError("Nusselt number needs at least 3 nodes across the cavity")
    grid = _grid_of(T.shape, grid)
    Nu = (3.0 * T[0] - 4.0 * T[1] + T[2]) / (2.0 * grid.h)
    if smooth and Nu.size >= 3:
        Nu = Nu.copy()
        Nu[1:-1] = (Nu[:-2] + Nu[1:-1] + Nu[2:]) / 3.0
    Y = grid.y
    k = int(np.argmax(Nu))
    Nu_ave = trapezoid(Nu, Y) / (Y[-1] - Y[0])
    return NusseltProfile(Y=Y, Nu=Nu, Nu_max=float(Nu[k]), Y_at_Nu_max=float(Y[k]), Nu_ave=float(Nu_ave))


def mid_line(values, axis):
    """ Samples on the mid plane normal to axis; even node counts average the two middle lines. """
    values = np.asarray(values, dtype=float)
    n = values.shape[axis]
    if n % 2:
        return np.take(values, n // 2, axis=axis)
    return np.take(values, [n // 2 - 1, n // 2], axis=axis).mean(axis=axis)


def centerline_profiles(mf: MacroField):
    """ u along the vertical mid line x = 0.5 and v along the horizontal mid line y = 0.5. """
    grid = _grid_of(mf.shape, mf.grid)
    return {'y': grid.y, 'u_centerline': mid_line(mf.u, axis=0),
            'x': grid.x, 'v_centerline': mid_line(mf.v, axis=1)}


def profile_agreement(a, b, trim=0.1):
    """ Max pointwise difference of two profiles, ignoring a fraction trim at each end. """
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise GridError(f"profiles of different length {a.shape} and {b.shape}")
    skip = int(np.floor(trim * a.size))
    window = slice(skip, a.size - skip) if skip else slice(None)
    return float(np.max(np.abs(a[window] - b[window])))


def conduction_metrics(mf: MacroField):
    """ Random-walk conduction field against the series solution. """
    grid = _grid_of(mf.shape, mf.grid)
    X, Y = grid.coords()
    exact = analytic_conduction(X, Y)
    inner = (slice(1, -1), slice(1, -1))
    deviation = np.abs(mf.T - exact)[inner]
    metrics = {'max_deviation': float(deviation.max()),
               'center_T': float(mid_line(mid_line(mf.T, axis=0), axis=0))}
    if mf.T_stderr is not None:
        se = mf.T_stderr[inner]
        z = np.where(se > 0, deviation / np.where(se > 0, se, 1.0), np.where(deviation > 0, np.inf, 0.0))
        metrics['max_deviation_se'] = float(z.max())
    return metrics


def extract_metrics(case, mf: MacroField):
    """ Scalar metrics compared against reference records. Identical fields give identical metrics. """
    if case.kind == 'lid':
        x, y = vortex_center(streamfunction(mf), mf.grid)
        return {'vortex_x': float(x), 'vortex_y': float(y)}
    if case.kind == 'convection':
        nu = nusselt_profile(mf.T, mf.grid, smooth=case.method == 'lbm-mcm')
        return {'Nu_max': nu.Nu_max, 'Y_at_Nu_max': nu.Y_at_Nu_max, 'Nu_ave': nu.Nu_ave}
    return conduction_metrics(mf)
