import os

import numpy as np
import pandas as pd

from hybridflow.config import case_from_config
from hybridflow.grid import GridSpec, MacroField
from hybridflow.metrics import CaseSpec, extract_metrics
from hybridflow.metrics.suite import run_case
from hybridflow.outputs import field_frame, profile_frame, report_lines, write_outputs


def test_conduction_run_with_figures(run_config):
    run_config.output.plots = True
    case = case_from_config(run_config)
    mf = run_case(case, run_config)
    written = write_outputs(mf, extract_metrics(case, mf), run_config, case)
    names = sorted(os.path.basename(path) for path in written)
    assert names == ['config.txt', 'fields.csv', 'profiles.csv', 'report.txt', 'temperature.png']
    frame = pd.read_csv(os.path.join(run_config.output.directory, 'fields.csv'), comment='#')
    assert len(frame) == 49
    np.testing.assert_allclose(frame['T'].to_numpy().reshape(7, 7), mf.T, atol=1e-8)


def test_formats_select_the_files(run_config, tmp_path):
    run_config.output.formats = ['report']
    case = case_from_config(run_config)
    mf = MacroField.at_rest(GridSpec.unit_square(7))
    written = write_outputs(mf, {'center_T': 0.25}, run_config, case, directory=str(tmp_path / 'only_report'))
    assert [os.path.basename(p) for p in written] == ['report.txt']


def test_convection_profiles_carry_the_nusselt_number():
    grid = GridSpec.unit_square(9)
    X, _ = grid.coords()
    mf = MacroField.at_rest(grid)
    mf.T = 1.0 - X
    frame = profile_frame(mf, CaseSpec('convection', grid=9))
    assert list(frame.columns) == ['y', 'u_centerline', 'x', 'v_centerline', 'Y', 'Nu']
    np.testing.assert_allclose(frame['Nu'], 1.0)


def test_field_frame_orders_nodes_x_outermost():
    grid = GridSpec.unit_square(5)
    X, Y = grid.coords()
    frame = field_frame(MacroField(rho=np.ones(grid.shape), u=X, v=Y, grid=grid))
    assert list(frame.columns) == ['x', 'y', 'u', 'v', 'T', 'p', 'psi']
    assert frame['y'].iloc[1] == 0.25 and frame['x'].iloc[1] == 0.0


def test_report_lines():
    lines = report_lines(CaseSpec('lid', grid=33), {'vortex_x': 0.61875}, diverged=False)
    assert lines == ['case = lid-re100/lbm/n33', 'diverged = false', 'vortex_x = 0.61875']
