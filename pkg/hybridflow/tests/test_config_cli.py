import os

import numpy as np
import pytest

from hybridflow.cli import main
from hybridflow.config import default_config, parse_config, serialize_config
from hybridflow.errors import DivergenceError, ParseError
from hybridflow.grid import GridSpec, MacroField
from hybridflow.mcm import analytic_conduction
from hybridflow.metrics import suite

EXAMPLE = """\
# lid-driven cavity on the finite-volume solver
case.kind = lid
case.re = 400
case.grid = 65   # nodes per side
method.solver = fvm

output.formats = [fields, report]
"""


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding='utf-8')
    return str(path)


def conduction_text(directory, threads=1):
    return (f"case.kind = conduction\ncase.grid = 7\nmethod.solver = mcm\nmcm.n_walkers = 200\n"
            f"general.threads = {threads}\noutput.directory = {directory}\n")


def test_parse_example():
    cfg = parse_config(EXAMPLE)
    assert cfg.case.kind == 'lid'
    assert cfg.case.re == 400.0
    assert cfg.case.grid == 65
    assert cfg.method.solver == 'fvm'
    assert cfg.output.formats == ['fields', 'report']
    assert cfg.mcm.n_walkers == 10000


def test_semantic_errors_carry_line_numbers():
    with pytest.raises(ParseError) as info:
        parse_config("case.kind = lid\n\ncase.re = -5\n")
    assert info.value.diagnostics == [(3, 're must be positive')]


def test_every_bad_line_is_reported():
    text = "case.re 100\ncase.colour = red\ncase.grid = many\n"
    with pytest.raises(ParseError) as info:
        parse_config(text)
    lines = [lineno for lineno, _ in info.value.diagnostics]
    assert lines == [1, 2, 3, 0]
    assert info.value.diagnostics[1][1] == 'unknown key case.colour'
    assert info.value.diagnostics[-1][1] == 'missing required key case.kind'


def test_incompatible_solver_is_rejected():
    with pytest.raises(ParseError, match='cannot solve conduction'):
        parse_config("case.kind = conduction\nmethod.solver = fvm\n")


def test_serialized_config_parses_back():
    cfg = default_config('convection', ra=1e5, grid=161)
    cfg.method.solver = 'lbm-fvm-split'
    cfg.output.plots = True
    text = serialize_config(cfg)
    assert 'output.plots = true' in text
    assert 'case.ra = 100000.0' in text
    again = parse_config(text)
    assert again == cfg
    assert serialize_config(again) == text


def test_validate_command(tmp_path, capsys):
    assert main(['validate', write(tmp_path, 'ok.cfg', EXAMPLE)]) == 0
    path = write(tmp_path, 'bad.cfg', "case.kind = lid\n\ncase.re = -5\n")
    assert main(['validate', path]) == 1
    assert f"{path}:3: re must be positive" in capsys.readouterr().err


def test_usage_errors():
    assert main([]) == 1
    assert main(['frobnicate']) == 1
    assert main(['--help']) == 0
    assert main(['validate', 'no/such/file.cfg']) == 1


def test_run_writes_reproducible_outputs(tmp_path):
    first, second = tmp_path / 'first', tmp_path / 'second'
    assert main(['run', write(tmp_path, 'a.cfg', conduction_text(first, threads=1))]) == 0
    assert main(['run', write(tmp_path, 'b.cfg', conduction_text(second, threads=4))]) == 0
    fields = (first / 'fields.csv').read_bytes()
    assert fields == (second / 'fields.csv').read_bytes()

    header = fields.decode().splitlines()
    assert header[0] == '# hybridflow 0.1.0'
    assert '# diverged=false' in header
    assert header[5] == 'x,y,u,v,T,p,psi,T_stderr'
    assert len(header) == 6 + 49

    report = (first / 'report.txt').read_text().splitlines()
    assert report[:2] == ['case = conduction/mcm/n7', 'diverged = false']
    assert any(line.startswith('center_T = ') for line in report)
    assert any('conduction mcm center_T' in line for line in report)
    assert (first / 'config.txt').read_text() == serialize_config(parse_config(conduction_text(first)))
    assert (first / 'profiles.csv').exists()


def test_output_flag_overrides_the_directory(tmp_path):
    path = write(tmp_path, 'c.cfg', conduction_text(tmp_path / 'unused'))
    assert main(['run', path, '--output', str(tmp_path / 'chosen')]) == 0
    assert (tmp_path / 'chosen' / 'report.txt').exists()
    assert not (tmp_path / 'unused').exists()


def test_divergent_run_writes_a_partial_dump(tmp_path, monkeypatch):
    def diverging(case, cfg):
        raise DivergenceError("NaN detected in the flow populations",
                              field=MacroField.at_rest(GridSpec.unit_square(case.grid)))

    monkeypatch.setitem(suite.METHODS, 'mcm', diverging)
    out = tmp_path / 'out'
    assert main(['run', write(tmp_path, 'd.cfg', conduction_text(out))]) == 2
    assert '# diverged=true' in (out / 'fields.csv').read_text().splitlines()
    assert not (out / 'profiles.csv').exists()
    assert 'diverged = true' in (out / 'report.txt').read_text()


def analytic_field(offset):
    def solve(case, cfg):
        grid = GridSpec.unit_square(case.grid)
        X, Y = grid.coords()
        mf = MacroField.at_rest(grid)
        mf.T = analytic_conduction(X, Y) + offset
        mf.T_stderr = np.full(grid.shape, 0.01)
        return mf
    return solve


@pytest.mark.parametrize('offset, status', [(0.0, 0), (0.1, 3)])
def test_suite_exit_status_follows_the_bands(tmp_path, monkeypatch, offset, status):
    monkeypatch.setitem(suite.METHODS, 'mcm', analytic_field(offset))
    assert main(['suite', 'conduction', '--output', str(tmp_path)]) == status
    text = (tmp_path / 'suite_report.txt').read_text()
    assert text.endswith(f"{2 if status == 0 else 0}/2 metrics within band\n")


def test_unknown_fixture_set():
    assert main(['suite', 'tables_of_doom']) == 1
