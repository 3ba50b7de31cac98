import os

import numpy as np
import pandas as pd

from hybridflow import __version__, utils
from hybridflow.config import RunConfig, serialize_config
from hybridflow.grid import GridSpec, MacroField, streamfunction
from hybridflow.metrics.flow_metrics import centerline_profiles, mid_line, nusselt_profile
from hybridflow.metrics.suite import format_outcome

FLOAT_FORMAT = '%.9g'


def _to_csv(df: pd.DataFrame, path, header_lines=()):
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        for line in header_lines:
            f.write(f"# {line}\n")
        df.to_csv(f, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')


def field_frame(mf: MacroField) -> pd.DataFrame:
    """ One row per node, x-index outermost. """
    grid = mf.grid if mf.grid is not None else GridSpec(nx=mf.shape[0], ny=mf.shape[1])
    X, Y = grid.coords()
    with np.errstate(all='ignore'):
        psi = streamfunction(mf, h=grid.h)
    columns = {'x': X, 'y': Y, 'u': mf.u, 'v': mf.v, 'T': mf.T, 'p': mf.p, 'psi': psi}
    if mf.T_stderr is not None:
        columns['T_stderr'] = mf.T_stderr
    return pd.DataFrame({name: np.asarray(values, dtype=float).ravel() for name, values in columns.items()})


def profile_frame(mf: MacroField, case) -> pd.DataFrame:
    if case.kind == 'conduction':
        grid = mf.grid if mf.grid is not None else GridSpec(nx=mf.shape[0], ny=mf.shape[1])
        return pd.DataFrame({'y': grid.y, 'T_centerline': mid_line(mf.T, axis=0)})
    profiles = centerline_profiles(mf)
    if case.kind == 'convection':
        nu = nusselt_profile(mf.T, mf.grid, smooth=case.method == 'lbm-mcm')
        profiles.update(Y=nu.Y, Nu=nu.Nu)
    return pd.DataFrame(profiles)


def report_lines(case, metrics, outcomes=(), diverged=False):
    lines = [f"case = {case.label()}", f"diverged = {'true' if diverged else 'false'}"]
    lines += [f"{name} = {FLOAT_FORMAT % value}" for name, value in metrics.items()]
    lines += [format_outcome(o) for o in outcomes]
    return lines


def write_outputs(mf: MacroField, metrics, cfg: RunConfig, case, outcomes=(), diverged=False, directory=None):
    """ Write the requested result files; output bytes depend only on the field, metrics and config. """
    directory = utils.create_folders(directory or cfg.output.directory)
    formats = cfg.output.formats
    written = []
    if 'fields' in formats:
        grid = mf.grid if mf.grid is not None else GridSpec(nx=mf.shape[0], ny=mf.shape[1])
        header = [f"hybridflow {__version__}",
                  f"grid nx={grid.nx} ny={grid.ny} h={FLOAT_FORMAT % grid.h}",
                  f"case kind={case.kind} re={case.re:g} ra={case.ra:g} pr={case.pr:g} ma={case.ma:g}",
                  f"solver {case.method}",
                  f"diverged={'true' if diverged else 'false'}"]
        path = os.path.join(directory, 'fields.csv')
        _to_csv(field_frame(mf), path, header)
        written.append(path)
    if 'profiles' in formats and not diverged:
        path = os.path.join(directory, 'profiles.csv')
        _to_csv(profile_frame(mf, case), path)
        written.append(path)
    if 'report' in formats:
        path = os.path.join(directory, 'report.txt')
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            f.write('\n'.join(report_lines(case, metrics, outcomes, diverged)) + '\n')
        written.append(path)
    if 'config' in formats:
        path = os.path.join(directory, 'config.txt')
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(serialize_config(cfg))
        written.append(path)
    if cfg.output.plots and not diverged:
        from hybridflow.analysis.visualization import save_figures
        written += save_figures(mf, case, os.path.join(directory, 'figures'))
    print(f"Wrote {len(written)} files to {directory}")
    return written
