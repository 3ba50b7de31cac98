import pytest
import wandb

from hybridflow.config import default_config


@pytest.fixture(autouse=True)
def no_wandb_run(monkeypatch):
    monkeypatch.setattr(wandb, 'run', None)


@pytest.fixture
def run_config(tmp_path):
    """ Small settings for end-to-end tests. """
    cfg = default_config('conduction', grid=7)
    cfg.method.solver = 'mcm'
    cfg.mcm.n_walkers = 200
    cfg.output.directory = str(tmp_path / 'outputs')
    return cfg
