import numpy as np

from hybridflow.errors import ConfigurationError


def analytic_conduction(X, Y, n_terms=200):
    """ Series solution on the unit square with theta = 1 on Y = 1 and theta = 0 on the other walls.
        Even terms vanish; sinh ratios are evaluated in log space. """
    if n_terms < 1:
        raise ConfigurationError(f"series needs at least one term, got {n_terms}")
    X, Y = np.broadcast_arrays(np.asarray(X, dtype=float), np.asarray(Y, dtype=float))
    n = np.arange(1, n_terms + 1, 2, dtype=float).reshape((-1,) + (1,) * X.ndim)
    a = n * np.pi * Y
    b = n * np.pi
    ratio = np.exp(a - b) * (-np.expm1(-2.0 * a)) / (-np.expm1(-2.0 * b))
    terms = (2.0 / n) * ratio * np.sin(n * np.pi * X)
    return (2.0 / np.pi) * terms.sum(axis=0)
