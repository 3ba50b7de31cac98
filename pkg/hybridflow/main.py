import hydra
import omegaconf

from hybridflow import utils
from hybridflow.config import case_from_config, from_hydra
from hybridflow.errors import DivergenceError
from hybridflow.metrics import extract_metrics, fixture_set, tolerance_bands
from hybridflow.metrics.suite import evaluate, run_case
from hybridflow.outputs import write_outputs


@hydra.main(version_base='1.3', config_path='../configs', config_name='config')
def main(cfg: omegaconf.DictConfig):
    run_cfg = from_hydra(cfg)
    utils.setup_wandb(run_cfg)
    case = case_from_config(run_cfg)
    print(f"Run {run_cfg.general.name}: {case.label()}")

    # hydra.job.chdir puts us in the run directory
    try:
        mf = run_case(case, run_cfg)
    except DivergenceError as err:
        print(f"[WARNING]: {case.label()} diverged: {err}")
        if err.field is not None:
            write_outputs(err.field, {}, run_cfg, case, diverged=True, directory='.')
        raise

    metrics = extract_metrics(case, mf)
    records = fixture_set('paper_tables', tolerance_bands(run_cfg.tolerance)).records
    outcomes = evaluate(records, case.key, case.method, metrics)
    write_outputs(mf, metrics, run_cfg, case, outcomes, directory='.')
    for name, value in metrics.items():
        print(f"{name} = {value:.6g}")


if __name__ == '__main__':
    main()
