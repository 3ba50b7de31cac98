import numpy as np
import pytest

from hybridflow.config import RunConfig
from hybridflow.errors import ConfigurationError, DegenerateFieldError, DivergenceError, GridError
from hybridflow.grid import GridSpec, MacroField
from hybridflow.metrics import (CaseSpec, ReferenceRecord, centerline_profiles, conduction_metrics, extract_metrics,
                                fixture_set, mid_line, nusselt_profile, profile_agreement, tolerance_bands,
                                vortex_center)
from hybridflow.metrics.suite import evaluate, format_report, run_suite
from hybridflow.mcm import analytic_conduction


def test_case_keys():
    assert CaseSpec('lid', re=100).key == 'lid-re100'
    assert CaseSpec('lid-driven', re=1000).key == 'lid-re1000'
    assert CaseSpec('natural-convection', ra=1e5).key == 'convection-ra100000'
    assert CaseSpec('conduction', method='mcm').key == 'conduction'
    assert CaseSpec('lid', grid=33, method='hybrid2').label() == 'lid-re100/hybrid2/n33'


@pytest.mark.parametrize('kwargs, message', [
    (dict(kind='lid', re=-5.0), 're must be positive'),
    (dict(kind='convection', ra=-1.0), 'ra must be non-negative'),
    (dict(kind='convection', pr=0.0), 'pr must be positive'),
    (dict(kind='lid', ma=0.3), 'ma must lie'),
    (dict(kind='lid', grid=3), 'grid must have'),
    (dict(kind='lid', method='mcm'), 'cannot solve lid'),
    (dict(kind='stokes'), 'Unknown case kind'),
])
def test_invalid_cases(kwargs, message):
    with pytest.raises(ConfigurationError, match=message):
        CaseSpec(**kwargs)


def test_vortex_center_of_an_offset_peak():
    grid = GridSpec.unit_square(161)
    X, Y = grid.coords()
    psi = -np.exp(-((X - 0.6137) ** 2 + (Y - 0.7241) ** 2) / 0.02)
    x, y = vortex_center(psi, grid)
    assert x == pytest.approx(0.6137, abs=1e-4)
    assert y == pytest.approx(0.7241, abs=1e-4)


def test_vortex_center_of_a_cell_flow():
    grid = GridSpec.unit_square(41)
    X, Y = grid.coords()
    # psi = sin(pi x) sin(pi y)
    u = np.pi * np.sin(np.pi * X) * np.cos(np.pi * Y)
    v = -np.pi * np.cos(np.pi * X) * np.sin(np.pi * Y)
    metrics = extract_metrics(CaseSpec('lid', grid=41), MacroField(rho=np.ones(grid.shape), u=u, v=v, grid=grid))
    assert metrics['vortex_x'] == pytest.approx(0.5, abs=0.01)
    assert metrics['vortex_y'] == pytest.approx(0.5, abs=0.01)


def test_vortex_on_the_boundary_is_degenerate():
    X, _ = GridSpec.unit_square(11).coords()
    with pytest.raises(DegenerateFieldError):
        vortex_center(X)


def test_linear_temperature_has_unit_nusselt_number():
    grid = GridSpec.unit_square(21)
    X, _ = grid.coords()
    nu = nusselt_profile(1.0 - X, grid)
    np.testing.assert_allclose(nu.Nu, 1.0)
    assert nu.Nu_max == pytest.approx(1.0)
    assert nu.Nu_ave == pytest.approx(1.0)


def test_quadratic_temperature_is_differentiated_exactly():
    grid = GridSpec.unit_square(11)
    X, Y = grid.coords()
    T = 1.0 - 2.0 * X * (1.0 + Y) + X ** 2
    nu = nusselt_profile(T, grid)
    np.testing.assert_allclose(nu.Nu, 2.0 * (1.0 + grid.y))
    assert nu.Y_at_Nu_max == 1.0
    assert nu.Nu_max == pytest.approx(4.0)
    assert nu.Nu_ave == pytest.approx(3.0)
    smooth = nusselt_profile(T, grid, smooth=True)
    np.testing.assert_allclose(smooth.Nu[1:-1], nu.Nu[1:-1])


def test_nusselt_needs_three_columns():
    with pytest.raises(GridError):
        nusselt_profile(np.zeros((2, 5)))


def test_mid_lines():
    values = np.arange(20.0).reshape(4, 5)
    np.testing.assert_allclose(mid_line(values, axis=1), values[:, 2])
    np.testing.assert_allclose(mid_line(values, axis=0), 0.5 * (values[1] + values[2]))


def test_centerline_profiles():
    grid = GridSpec.unit_square(9)
    X, Y = grid.coords()
    profiles = centerline_profiles(MacroField(rho=np.ones(grid.shape), u=Y, v=X, grid=grid))
    np.testing.assert_allclose(profiles['u_centerline'], grid.y)
    np.testing.assert_allclose(profiles['v_centerline'], grid.x)


def test_profile_agreement_ignores_the_ends():
    a = np.zeros(20)
    b = np.zeros(20)
    b[0] = 5.0
    b[10] = 0.1
    assert profile_agreement(a, b) == pytest.approx(0.1)
    assert profile_agreement(a, b, trim=0.0) == pytest.approx(5.0)
    with pytest.raises(GridError):
        profile_agreement(a, b[:-1])


def test_conduction_metrics():
    grid = GridSpec.unit_square(41)
    X, Y = grid.coords()
    mf = MacroField.at_rest(grid)
    mf.T = analytic_conduction(X, Y) + 0.001
    mf.T_stderr = np.full(grid.shape, 0.002)
    metrics = conduction_metrics(mf)
    assert metrics['center_T'] == pytest.approx(0.251, abs=1e-6)
    assert metrics['max_deviation'] == pytest.approx(0.001, abs=1e-9)
    assert metrics['max_deviation_se'] == pytest.approx(0.5, abs=1e-6)
    mf.T_stderr = np.zeros(grid.shape)
    assert conduction_metrics(mf)['max_deviation_se'] == np.inf


def test_reference_records():
    record = ReferenceRecord('convection-ra10000', 'lbm', 'Nu_max', 3.5, 0.1, 'unit', relative=True)
    assert record.band == pytest.approx(0.35)
    assert record.accepts(3.8) and not record.accepts(3.9)
    assert not ReferenceRecord('c', 'reference', 'Nu_max', 1.0, 0.1, 'unit').gated
    with pytest.raises(ConfigurationError):
        ReferenceRecord('c', 'lbm', 'Nu_max', 1.0, 0.0, 'unit')
    with pytest.raises(ConfigurationError):
        ReferenceRecord('c', 'lbm', 'Nu_max', 1.0, 0.1, '')


def test_paper_tables_fixture():
    fixtures = fixture_set('paper_tables')
    records = {(r.case, r.method, r.metric): r for r in fixtures.records}
    assert records[('lid-re100', 'reference', 'vortex_x')].expected == 0.6172
    assert records[('lid-re1000', 'hybrid2', 'vortex_y')].expected == 0.56875
    assert records[('convection-ra1000000', 'lbm-fvm-split', 'Nu_max')].tolerance == pytest.approx(0.04)
    assert records[('convection-ra100000', 'lbm-mcm', 'Nu_ave')].tolerance == 0.06
    coupled = records[('convection-ra100000', 'coupled-horizontal', 'Nu_max')]
    assert coupled.accepts(7.7907) and coupled.accepts(7.8382)
    assert not any(case.method == 'reference' for case in fixtures.cases)
    assert all(case.grid == 161 for case in fixtures.cases if case.kind == 'convection')
    assert len({(case.key, case.method) for case in fixtures.cases}) == len(fixtures.cases)


def test_fixture_bands_can_be_overridden():
    fixtures = fixture_set('lid', tolerance_bands(RunConfig().tolerance) | {'vortex': 0.05})
    assert all(r.tolerance == 0.05 for r in fixtures.records)
    smoke = fixture_set('smoke')
    assert {(c.key, c.method, c.grid) for c in smoke.cases} == {('lid-re100', 'lbm', 33), ('conduction', 'mcm', 11)}
    with pytest.raises(ConfigurationError):
        fixture_set('unknown')


def linear_field(case, cfg):
    grid = GridSpec.unit_square(case.grid)
    X, _ = grid.coords()
    mf = MacroField.at_rest(grid)
    mf.T = 1.0 - X
    return mf


def diverging(case, cfg):
    raise DivergenceError("NaN detected in the flow populations")


def test_suite_isolates_failures():
    key = 'convection-ra10000'
    records = [ReferenceRecord(key, 'lbm', 'Nu_max', 1.0, 0.01, 'unit'),
               ReferenceRecord(key, 'lbm', 'Nu_ave', 1.0, 0.01, 'unit'),
               ReferenceRecord(key, 'fvm', 'Nu_max', 99.0, 0.01, 'unit'),
               ReferenceRecord(key, 'fvm', 'Nu_ave', 1.0, 0.01, 'unit'),
               ReferenceRecord(key, 'lbm-mcm', 'Nu_max', 1.0, 0.01, 'unit'),
               ReferenceRecord(key, 'reference', 'Nu_max', 3.53, 0.03, 'unit')]
    cases = [CaseSpec('convection', grid=9, method=m) for m in ('lbm', 'fvm', 'lbm-mcm')]
    solvers = {'lbm': linear_field, 'fvm': linear_field, 'lbm-mcm': diverging}
    report = run_suite(cases, records, solvers=solvers)
    failed = {(o.method, o.metric) for o in report.failures}
    assert failed == {('fvm', 'Nu_max'), ('lbm-mcm', 'Nu_max')}
    assert report.exit_status == 3
    assert [o.note for o in report.outcomes if o.method == 'lbm-mcm'] == ['diverged']
    assert list(report.errors) == ['convection-ra10000/lbm-mcm/n9']
    text = format_report(report)
    assert 'INFO convection-ra10000 reference Nu_max' in text
    assert 'FAIL convection-ra10000 fvm Nu_max' in text
    assert text.endswith('3/5 metrics within band\n')


def test_empty_suite_passes():
    report = run_suite([], [])
    assert report.exit_status == 0
    assert format_report(report) == '0/0 metrics within band\n'


def test_missing_metric_fails():
    records = [ReferenceRecord('lid-re100', 'lbm', 'vortex_x', 0.6, 0.1, 'unit')]
    [outcome] = evaluate(records, 'lid-re100', 'lbm', {})
    assert not outcome.passed and np.isnan(outcome.measured)
