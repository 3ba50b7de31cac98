from typing import NamedTuple

import numpy as np

from hybridflow.errors import PecletViolationError


class TransitionProbs(NamedTuple):
    """ Move probabilities towards +x, -x, +y, -y; scalars or arrays over nodes. """
    px_plus: object
    px_minus: object
    py_plus: object
    py_minus: object


def transition_probs(u, v, alpha, dx, dy, node=None) -> TransitionProbs:
    """ Upwind-consistent walk probabilities of the steady advection-diffusion stencil.
        Zero velocity gives the pure-conduction probabilities. """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    ax = alpha * dy / dx
    ay = alpha * dx / dy
    numerators = (ax - u * dy, ax + 0.0 * u, ay - v * dx, ay + 0.0 * v)

    bad = np.zeros(np.broadcast(u, v).shape, dtype=bool)
    for num in numerators:
        bad |= np.broadcast_to(num < 0, bad.shape)
    if np.any(bad):
        where = node if node is not None else (tuple(int(k) for k in np.argwhere(bad)[0]) if bad.ndim else None)
        raise PecletViolationError(f"cell Peclet limit violated at node {where}: a move probability is negative",
                                   node=where)

    denominator = numerators[0] + numerators[1] + numerators[2] + numerators[3]
    px_plus = numerators[0] / denominator
    px_minus = numerators[1] / denominator
    py_plus = numerators[2] / denominator
    # closes the sum to one in floating point
    py_minus = 1.0 - ((px_plus + px_minus) + py_plus)
    if np.ndim(px_plus) == 0:
        return TransitionProbs(float(px_plus), float(px_minus), float(py_plus), float(py_minus))
    return TransitionProbs(px_plus, px_minus, py_plus, py_minus)


def cumulative_table(probs: TransitionProbs, shape):
    """ Cumulative thresholds (3, nx, ny) in draw order +x, +y, -x; -y takes the rest. """
    px_plus = np.broadcast_to(probs.px_plus, shape)
    py_plus = np.broadcast_to(probs.py_plus, shape)
    px_minus = np.broadcast_to(probs.px_minus, shape)
    c1 = np.array(px_plus, dtype=float)
    c2 = c1 + py_plus
    c3 = c2 + px_minus
    return np.stack([c1, c2, c3])
