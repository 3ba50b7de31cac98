from dataclasses import dataclass

from hybridflow.errors import ConfigurationError

KIND_ALIASES = {
    'lid': 'lid', 'lid-driven': 'lid',
    'convection': 'convection', 'natural-convection': 'convection',
    'conduction': 'conduction',
}

METHODS_BY_KIND = {
    'lid': ('lbm', 'fvm', 'hybrid1', 'hybrid2', 'coupled-vertical', 'coupled-horizontal'),
    'convection': ('lbm', 'fvm', 'coupled-vertical', 'coupled-horizontal', 'lbm-fvm-split', 'lbm-mcm'),
    'conduction': ('mcm',),
}


def canonical_kind(kind):
    try:
        return KIND_ALIASES[kind]
    except KeyError:
        raise ConfigurationError(f"Unknown case kind {kind}") from None


@dataclass(frozen=True)
class CaseSpec:
    """ One benchmark run: physical case, grid resolution (nodes per side) and method. """
    kind: str
    re: float = 100.0
    ra: float = 1e4
    pr: float = 0.71
    ma: float = 0.1
    grid: int = 160
    lid_velocity: float = 0.1
    method: str = 'lbm'
    seed: int = 20240601

    def __post_init__(self):
        object.__setattr__(self, 'kind', canonical_kind(self.kind))
        if self.kind == 'lid' and not self.re > 0:
            raise ConfigurationError("re must be positive")
        if self.kind == 'convection':
            if not self.ra >= 0:
                raise ConfigurationError("ra must be non-negative")
            if not self.pr > 0:
                raise ConfigurationError("pr must be positive")
        if not 0.0 < self.ma < 0.3:
            raise ConfigurationError("ma must lie in (0, 0.3)")
        if self.grid < 4:
            raise ConfigurationError("grid must have at least 4 nodes per side")
        if self.method not in METHODS_BY_KIND[self.kind]:
            raise ConfigurationError(f"method {self.method} cannot solve {self.kind} cases, "
                                     f"expected one of {', '.join(METHODS_BY_KIND[self.kind])}")

    @property
    def key(self):
        """ Physical case key shared by every method, e.g. lid-re100 or convection-ra100000. """
        if self.kind == 'lid':
            return f"lid-re{self.re:.7g}"
        if self.kind == 'convection':
            return f"convection-ra{self.ra:.7g}"
        return 'conduction'

    def label(self):
        return f"{self.key}/{self.method}/n{self.grid}"
