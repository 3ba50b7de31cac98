import os

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
import numpy as np
import wandb

from hybridflow.grid import GridSpec, MacroField, streamfunction
from hybridflow.metrics.flow_metrics import centerline_profiles, nusselt_profile


def _grid(mf: MacroField):
    return mf.grid if mf.grid is not None else GridSpec(nx=mf.shape[0], ny=mf.shape[1])


def plot_temperature(mf: MacroField, save_path):
    X, Y = _grid(mf).coords()
    fig, ax = plt.subplots(figsize=(4, 4))
    contour = ax.contourf(X, Y, mf.T, levels=21, cmap='coolwarm')
    ax.contour(X, Y, mf.T, levels=11, colors='k', linewidths=0.5)
    fig.colorbar(contour, ax=ax)
    ax.set_aspect('equal')
    ax.set_title('temperature')
    fig.tight_layout()
    fig.savefig(save_path, dpi=120)
    plt.close(fig)


def plot_streamlines(mf: MacroField, save_path):
    X, Y = _grid(mf).coords()
    psi = streamfunction(mf)
    fig, ax = plt.subplots(figsize=(4, 4))
    ax.contour(X, Y, psi, levels=25, colors='k', linewidths=0.6)
    ax.set_aspect('equal')
    ax.set_title('stream function')
    fig.tight_layout()
    fig.savefig(save_path, dpi=120)
    plt.close(fig)


def plot_centerlines(mf: MacroField, save_path):
    prof = centerline_profiles(mf)
    fig, (ax_u, ax_v) = plt.subplots(1, 2, figsize=(7, 3.5))
    ax_u.plot(prof['u_centerline'], prof['y'])
    ax_u.set_xlabel('u (x = 0.5)')
    ax_u.set_ylabel('y')
    ax_v.plot(prof['x'], prof['v_centerline'])
    ax_v.set_xlabel('x')
    ax_v.set_ylabel('v (y = 0.5)')
    fig.tight_layout()
    fig.savefig(save_path, dpi=120)
    plt.close(fig)


def plot_nusselt(mf: MacroField, save_path, smooth=False):
    nu = nusselt_profile(mf.T, mf.grid, smooth=smooth)
    fig, ax = plt.subplots(figsize=(4, 3.5))
    ax.plot(nu.Nu, nu.Y)
    ax.plot([nu.Nu_max], [nu.Y_at_Nu_max], 'o')
    ax.set_xlabel('Nu')
    ax.set_ylabel('Y')
    fig.tight_layout()
    fig.savefig(save_path, dpi=120)
    plt.close(fig)


def save_figures(mf: MacroField, case, path):
    """ PNG figures for one run; pushed to the active wandb run if there is one. """
    os.makedirs(path, exist_ok=True)
    plots = {'temperature': plot_temperature}
    if case.kind != 'conduction':
        plots.update(streamlines=plot_streamlines, centerlines=plot_centerlines)
    if case.kind == 'convection':
        plots['nusselt'] = lambda field, file_path: plot_nusselt(field, file_path, smooth=case.method == 'lbm-mcm')
    if not np.all(np.isfinite(mf.u)):
        print("Skipping figures of a non-finite field")
        return []

    all_file_paths = []
    for name, plot in plots.items():
        file_path = os.path.join(path, f'{name}.png')
        plot(mf, file_path)
        all_file_paths.append(file_path)
        if wandb.run:
            wandb.log({f'figures/{name}': wandb.Image(file_path)})
    return all_file_paths
