import os

from omegaconf import OmegaConf
import wandb

THREADS_ENV = 'HYBRIDFLOW_THREADS'


def create_folders(directory):
    os.makedirs(directory, exist_ok=True)
    return directory


def worker_count(threads=None):
    """ Explicit count first, then HYBRIDFLOW_THREADS, then every available core. """
    if threads:
        return max(1, int(threads))
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def setup_wandb(cfg):
    if cfg.general.wandb == 'disabled':
        return cfg
    config_dict = OmegaConf.to_container(OmegaConf.structured(cfg), resolve=True)
    kwargs = {'name': cfg.general.name, 'project': f'hybridflow_{cfg.case.kind}', 'config': config_dict,
              'reinit': True, 'mode': cfg.general.wandb}
    wandb.init(**kwargs)
    return cfg
