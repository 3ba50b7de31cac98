import numpy as np


def solve_tridiag_array(a, b, c, d):
    """
    Thomas algorithm over many independent systems at once.

    Parameters
    ----------
    a, b, c, d : ndarray, shape (n, num_systems)
        Lower diagonal (a[0] unused), main diagonal, upper diagonal (c[-1] unused)
        and right-hand side.

    Returns
    -------
    x : ndarray, shape (n, num_systems)
    """
    n = d.shape[0]
    b = np.array(b, dtype=float, copy=True)
    d = np.array(d, dtype=float, copy=True)

    for k in range(1, n):
        m = a[k] / b[k - 1]
        b[k] = b[k] - m * c[k - 1]
        d[k] = d[k] - m * d[k - 1]

    x = b
    x[-1] = d[-1] / b[-1]
    for k in range(n - 2, -1, -1):
        x[k] = (d[k] - c[k] * x[k + 1]) / b[k]
    return x


def solve_tridiag(a, b, c, d):
    """ Single system version, 1-D inputs of length n. """
    x = solve_tridiag_array(np.asarray(a, float)[:, None], np.asarray(b, float)[:, None],
                            np.asarray(c, float)[:, None], np.asarray(d, float)[:, None])
    return x[:, 0]
