from dataclasses import dataclass, field, fields
from typing import List

from omegaconf import MISSING, OmegaConf
from omegaconf.errors import OmegaConfBaseException

from hybridflow.errors import ConfigurationError, ParseError
from hybridflow.metrics.cases import CaseSpec, KIND_ALIASES, METHODS_BY_KIND

SCHEMES = ('auto', 'noneq-extrapolation', 'velocity-gradient')
DENSITY_ANCHORS = ('auto', 'extrapolate', 'pressure')
WANDB_MODES = ('disabled', 'online', 'offline')
OUTPUT_FORMATS = ('fields', 'profiles', 'report', 'config')


@dataclass
class GeneralSection:
    name: str = 'hybridflow'
    wandb: str = 'disabled'
    threads: int = 0
    progress_bar: bool = False


@dataclass
class CaseSection:
    kind: str = MISSING
    re: float = 100.0
    ra: float = 1e4
    pr: float = 0.71
    ma: float = 0.1
    grid: int = 160
    lid_velocity: float = 0.1


@dataclass
class MethodSection:
    solver: str = 'lbm'
    overlap: int = 3
    scheme: str = 'auto'
    exchange_every: int = 0
    fvm_iterations: int = 5
    substeps: int = 0
    max_exchanges: int = 20000
    density_anchor: str = 'auto'


@dataclass
class McmSection:
    n_walkers: int = 10000
    seed: int = 20240601
    max_steps: int = 0
    exchange_steps: int = 200
    eps_abs: float = 1e-3
    max_outer: int = 20


@dataclass
class SimpleSection:
    relax_u: float = 0.7
    relax_v: float = 0.7
    relax_p: float = 0.3
    relax_t: float = 0.9
    max_outer: int = 20000
    sweeps: int = 2
    divergence_window: int = 50


@dataclass
class LbmSection:
    max_steps: int = 400000
    check_every: int = 500
    steady_tol: float = 1e-7


@dataclass
class OutputSection:
    directory: str = 'outputs'
    formats: List[str] = field(default_factory=lambda: list(OUTPUT_FORMATS))
    plots: bool = False


@dataclass
class ToleranceSection:
    continuity: float = 1e-6
    steady: float = 1e-8
    coupling: float = 1e-6
    vortex: float = 0.02
    nu: float = 0.03
    location: float = 0.02


@dataclass
class RunConfig:
    general: GeneralSection = field(default_factory=GeneralSection)
    case: CaseSection = field(default_factory=CaseSection)
    method: MethodSection = field(default_factory=MethodSection)
    mcm: McmSection = field(default_factory=McmSection)
    simple: SimpleSection = field(default_factory=SimpleSection)
    lbm: LbmSection = field(default_factory=LbmSection)
    output: OutputSection = field(default_factory=OutputSection)
    tolerance: ToleranceSection = field(default_factory=ToleranceSection)


def default_config(kind='lid', **case):
    cfg = RunConfig()
    cfg.case.kind = kind
    for key, value in case.items():
        setattr(cfg.case, key, value)
    return cfg


def semantic_errors(cfg: RunConfig):
    """ (key, message) for every value that parses but cannot describe a run. """
    errors = []

    def check(ok, key, message):
        if not ok:
            errors.append((key, message))

    c = cfg.case
    check(c.kind in KIND_ALIASES, 'case.kind', f"unknown case kind {c.kind}")
    check(c.re > 0, 'case.re', "re must be positive")
    check(c.ra >= 0, 'case.ra', "ra must be non-negative")
    check(c.pr > 0, 'case.pr', "pr must be positive")
    check(0 < c.ma < 0.3, 'case.ma', "ma must lie in (0, 0.3)")
    check(c.grid >= 4, 'case.grid', "grid must have at least 4 nodes per side")
    check(c.lid_velocity > 0, 'case.lid_velocity', "lid_velocity must be positive")
    if c.kind in KIND_ALIASES:
        methods = METHODS_BY_KIND[KIND_ALIASES[c.kind]]
        check(cfg.method.solver in methods, 'method.solver',
              f"solver {cfg.method.solver} cannot solve {c.kind} cases, expected one of {', '.join(methods)}")
    m = cfg.method
    check(m.overlap >= 1, 'method.overlap', "overlap must be at least 1")
    check(m.scheme in SCHEMES, 'method.scheme', f"scheme must be one of {', '.join(SCHEMES)}")
    check(m.density_anchor in DENSITY_ANCHORS, 'method.density_anchor',
          f"density_anchor must be one of {', '.join(DENSITY_ANCHORS)}")
    for key in ('exchange_every', 'substeps'):
        check(getattr(m, key) >= 0, f'method.{key}', f"{key} must be non-negative")
    for key in ('fvm_iterations', 'max_exchanges'):
        check(getattr(m, key) >= 1, f'method.{key}', f"{key} must be at least 1")
    check(cfg.mcm.n_walkers >= 1, 'mcm.n_walkers', "n_walkers must be at least 1")
    check(cfg.mcm.max_steps >= 0, 'mcm.max_steps', "max_steps must be non-negative")
    check(cfg.mcm.exchange_steps >= 1, 'mcm.exchange_steps', "exchange_steps must be at least 1")
    check(cfg.mcm.max_outer >= 1, 'mcm.max_outer', "max_outer must be at least 1")
    for key in ('relax_u', 'relax_v', 'relax_p', 'relax_t'):
        check(0 < getattr(cfg.simple, key) <= 1, f'simple.{key}', f"{key} must lie in (0, 1]")
    check(cfg.lbm.check_every >= 1, 'lbm.check_every', "check_every must be at least 1")
    check(cfg.general.wandb in WANDB_MODES, 'general.wandb', f"wandb must be one of {', '.join(WANDB_MODES)}")
    check(cfg.general.threads >= 0, 'general.threads', "threads must be non-negative")
    unknown = [f for f in cfg.output.formats if f not in OUTPUT_FORMATS]
    check(not unknown, 'output.formats', f"unknown output formats {', '.join(unknown)}")
    return errors


def parse_config(text) -> RunConfig:
    """ Parse `section.key = value` lines. Every invalid line is reported at once with its line number. """
    schema = OmegaConf.structured(RunConfig)
    known = {f"{section.name}.{item.name}" for section in fields(RunConfig) for item in fields(section.type)}
    diagnostics = []
    lines_of = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition('=')
        key, value = key.strip(), value.strip()
        if not sep or not key:
            diagnostics.append((lineno, f"expected 'section.key = value', got '{raw.strip()}'"))
            continue
        if key not in known:
            diagnostics.append((lineno, f"unknown key {key}"))
            continue
        try:
            schema = OmegaConf.merge(schema, OmegaConf.from_dotlist([f"{key}={value}"]))
        except OmegaConfBaseException as err:
            message = str(err).splitlines()[0]
            diagnostics.append((lineno, f"invalid value for {key}: {message}"))
            continue
        lines_of[key] = lineno

    if OmegaConf.is_missing(schema.case, 'kind'):
        diagnostics.append((0, "missing required key case.kind"))
    if diagnostics:
        raise ParseError(diagnostics)

    cfg = OmegaConf.to_object(schema)
    errors = semantic_errors(cfg)
    if errors:
        raise ParseError([(lines_of.get(key, 0), message) for key, message in errors])
    return cfg


def _format_value(value):
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, list):
        return '[' + ', '.join(_format_value(v) for v in value) + ']'
    return str(value)


def serialize_config(cfg: RunConfig):
    """ Every key, defaults included, in schema order. parse_config reads it back unchanged. """
    lines = []
    for section in fields(RunConfig):
        values = getattr(cfg, section.name)
        for item in fields(values):
            lines.append(f"{section.name}.{item.name} = {_format_value(getattr(values, item.name))}")
    return '\n'.join(lines) + '\n'


def case_from_config(cfg: RunConfig) -> CaseSpec:
    c = cfg.case
    return CaseSpec(kind=c.kind, re=c.re, ra=c.ra, pr=c.pr, ma=c.ma, grid=c.grid, lid_velocity=c.lid_velocity,
                    method=cfg.method.solver, seed=cfg.mcm.seed)


def from_hydra(dict_cfg) -> RunConfig:
    """ Hydra-composed DictConfig checked against the same schema as the line format. """
    sections = {name: dict_cfg[name] for name in (f.name for f in fields(RunConfig)) if name in dict_cfg}
    try:
        merged = OmegaConf.merge(OmegaConf.structured(RunConfig), sections)
        cfg = OmegaConf.to_object(merged)
    except OmegaConfBaseException as err:
        raise ConfigurationError(str(err).splitlines()[0]) from err
    errors = semantic_errors(cfg)
    if errors:
        raise ConfigurationError('; '.join(f"{key}: {message}" for key, message in errors))
    return cfg
