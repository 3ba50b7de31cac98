from typing import Callable, Dict, List, NamedTuple, Optional

import numpy as np
import wandb

from hybridflow.config import RunConfig
from hybridflow.coupling import (DecompositionLayout, FieldSplitConfig, run_coupled, run_hybrid_lbm_fvm,
                                 run_hybrid_lbm_mcm)
from hybridflow.errors import DivergenceError, HybridFlowError
from hybridflow.fvm import SimpleConfig, solve_simple
from hybridflow.lbm import solve_lbm
from hybridflow.mcm import WalkerConfig, solve_conduction
from hybridflow.metrics.cases import CaseSpec
from hybridflow.metrics.flow_metrics import extract_metrics


def simple_config(cfg: RunConfig) -> SimpleConfig:
    s = cfg.simple
    return SimpleConfig(relax_u=s.relax_u, relax_v=s.relax_v, relax_p=s.relax_p, relax_t=s.relax_t,
                        max_outer=s.max_outer, sweeps=s.sweeps, divergence_window=s.divergence_window,
                        tol_continuity=cfg.tolerance.continuity, tol_steady=cfg.tolerance.steady)


def walker_config(case: CaseSpec, cfg: RunConfig) -> WalkerConfig:
    return WalkerConfig(n_walkers=cfg.mcm.n_walkers, seed=case.seed, max_steps=cfg.mcm.max_steps)


def _lbm(case, cfg):
    return solve_lbm(case, cfg.lbm, progress_bar=cfg.general.progress_bar)


def _fvm(case, cfg):
    return solve_simple(case, simple_config(cfg), progress_bar=cfg.general.progress_bar)


def _decomposed(split_axis, scheme=None):
    def run(case, cfg):
        m = cfg.method
        chosen = scheme or ('noneq-extrapolation' if m.scheme == 'auto' else m.scheme)
        layout = DecompositionLayout.halves(case.grid, overlap_cols=m.overlap, split_axis=split_axis)
        result = run_coupled(case, layout, scheme=chosen, exchange_every=m.exchange_every,
                             fvm_iterations=m.fvm_iterations, max_exchanges=m.max_exchanges,
                             tol=cfg.tolerance.coupling, simple_cfg=simple_config(cfg),
                             density_anchor=m.density_anchor, progress_bar=cfg.general.progress_bar)
        return result.field
    return run


def _lbm_fvm_split(case, cfg):
    split = FieldSplitConfig('fvm', case.grid, substeps=cfg.method.substeps, max_outer=cfg.method.max_exchanges,
                             tol=cfg.tolerance.coupling)
    return run_hybrid_lbm_fvm(case, split, simple_config(cfg), progress_bar=cfg.general.progress_bar)


def _lbm_mcm(case, cfg):
    split = FieldSplitConfig('mcm', case.grid, exchange_steps=cfg.mcm.exchange_steps, max_outer=cfg.mcm.max_outer,
                             eps_abs=cfg.mcm.eps_abs)
    return run_hybrid_lbm_mcm(case, split, walker_config(case, cfg), threads=cfg.general.threads,
                              progress_bar=cfg.general.progress_bar)


def _mcm(case, cfg):
    return solve_conduction(case, walker_config(case, cfg), threads=cfg.general.threads,
                            progress_bar=cfg.general.progress_bar)


METHODS: Dict[str, Callable] = {
    'lbm': _lbm,
    'fvm': _fvm,
    'hybrid1': _decomposed('vertical', 'noneq-extrapolation'),
    'hybrid2': _decomposed('vertical', 'velocity-gradient'),
    'coupled-vertical': _decomposed('vertical'),
    'coupled-horizontal': _decomposed('horizontal'),
    'lbm-fvm-split': _lbm_fvm_split,
    'lbm-mcm': _lbm_mcm,
    'mcm': _mcm,
}


def run_case(case: CaseSpec, cfg: RunConfig, solvers=None):
    solvers = solvers or METHODS
    print(f"Running {case.label()}")
    return solvers[case.method](case, cfg)


class Outcome(NamedTuple):
    case: str
    method: str
    metric: str
    expected: float
    measured: float
    band: float
    passed: bool
    gated: bool
    source: str
    note: str = ''

    @property
    def delta(self):
        return self.measured - self.expected


def evaluate(records, case_key, method, metrics, note='') -> List[Outcome]:
    """ Compare measured metrics with the records of one (case, method) pair. Missing metrics fail. """
    outcomes = []
    for record in records:
        if record.case != case_key or record.method != method:
            continue
        measured = metrics.get(record.metric, np.nan)
        passed = bool(np.isfinite(measured) and record.accepts(measured))
        outcomes.append(Outcome(record.case, record.method, record.metric, record.expected, float(measured),
                                record.band, passed, record.gated, record.source, note))
    return outcomes


def reference_rows(records, case_key) -> List[Outcome]:
    return [Outcome(r.case, r.method, r.metric, r.expected, r.expected, r.band, True, False, r.source)
            for r in records if not r.gated and r.case == case_key]


class SuiteReport(NamedTuple):
    outcomes: List[Outcome]
    errors: Dict[str, str]

    @property
    def failures(self):
        return [o for o in self.outcomes if o.gated and not o.passed]

    @property
    def exit_status(self):
        return 3 if self.failures else 0


def format_outcome(o: Outcome):
    if not o.gated:
        return f"INFO {o.case} {o.method} {o.metric} value={o.expected:.6g} [{o.source}]"
    status = 'PASS' if o.passed else 'FAIL'
    line = (f"{status} {o.case} {o.method} {o.metric} measured={o.measured:.6g} expected={o.expected:.6g} "
            f"delta={o.delta:+.3e} band={o.band:.3g} [{o.source}]")
    return f"{line} ({o.note})" if o.note else line


def format_report(report: SuiteReport):
    lines = [format_outcome(o) for o in report.outcomes]
    lines += [f"ERROR {label}: {message}" for label, message in report.errors.items()]
    gated = [o for o in report.outcomes if o.gated]
    lines.append(f"{len(gated) - len(report.failures)}/{len(gated)} metrics within band")
    return '\n'.join(lines) + '\n'


def run_suite(cases, fixtures, cfg: Optional[RunConfig] = None, solvers=None) -> SuiteReport:
    """ Run every case and judge its metrics; a diverging case fails its own records only. """
    cfg = cfg or RunConfig()
    fixtures = list(fixtures)
    outcomes, errors = [], {}
    seen_keys = set()
    for case in cases:
        if case.key not in seen_keys:
            outcomes += reference_rows(fixtures, case.key)
            seen_keys.add(case.key)
        try:
            mf = run_case(case, cfg, solvers)
            metrics = extract_metrics(case, mf)
            note = ''
        except HybridFlowError as err:
            print(f"{case.label()} failed: {err}")
            errors[case.label()] = str(err)
            metrics, note = {}, 'diverged' if isinstance(err, DivergenceError) else type(err).__name__
        case_outcomes = evaluate(fixtures, case.key, case.method, metrics, note)
        outcomes += case_outcomes
        if wandb.run:
            wandb.log({f'bench/{case.label()}/{o.metric}': o.measured for o in case_outcomes})
    report = SuiteReport(outcomes, errors)
    print(f"Suite finished: {len(report.failures)} failing metrics")
    return report
