import numpy as np

# Upstream-weighted quadratic interpolation: phi_f = 3/4 phi_U + 3/8 phi_D - 1/8 phi_UU
QUICK_U = 0.75
QUICK_D = 0.375
QUICK_UU = -0.125


def quick_face(phi_uu, phi_u, phi_d, flow_sign=1.0):
    """ Face value from the two upstream and one downstream nodes.
        phi_uu, phi_u, phi_d are ordered along the flow; flow_sign == 0 falls back to the central average. """
    if flow_sign == 0:
        return 0.5 * (phi_u + phi_d)
    return QUICK_U * phi_u + QUICK_D * phi_d + QUICK_UU * phi_uu


def quick_correction(phi, flux, axis=0):
    """ Deferred correction F * (phi_quick - phi_upwind) on the faces between consecutive
        unknowns along axis. Faces without a second upstream unknown keep upwinding.
        phi: (m, ...), flux: (m - 1, ...) through the internal faces. Returns (m - 1, ...). """
    phi = np.moveaxis(phi, axis, 0)
    flux = np.moveaxis(flux, axis, 0)
    m = phi.shape[0]
    correction = np.zeros_like(flux)
    if m < 3:
        return np.moveaxis(correction, 0, axis)
    left, right = phi[:-1], phi[1:]

    # positive flow through face k (between k and k+1): U = k, D = k+1, UU = k-1
    pos = np.zeros_like(flux)
    pos[1:] = (QUICK_U - 1.0) * left[1:] + QUICK_D * right[1:] + QUICK_UU * phi[:-2]
    # negative flow: U = k+1, D = k, UU = k+2
    neg = np.zeros_like(flux)
    neg[:-1] = (QUICK_U - 1.0) * right[:-1] + QUICK_D * left[:-1] + QUICK_UU * phi[2:]

    correction = np.where(flux > 0, flux * pos, flux * neg)
    return np.moveaxis(correction, 0, axis)
