from dataclasses import dataclass
from typing import Tuple

from hybridflow.errors import ConfigurationError
from hybridflow.metrics.cases import CaseSpec

DEFAULT_BANDS = {'vortex': 0.02, 'nu': 0.03, 'location': 0.02}


@dataclass(frozen=True)
class ReferenceRecord:
    """ Expected value of one metric for one (case, method) pair. relative bands scale with |expected|.
        Records with method 'reference' carry published benchmark values and are reported, not gated. """
    case: str
    method: str
    metric: str
    expected: float
    tolerance: float
    source: str
    relative: bool = False

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ConfigurationError(f"tolerance of {self.case}/{self.method}/{self.metric} must be positive")
        if not self.source:
            raise ConfigurationError(f"{self.case}/{self.method}/{self.metric} has no source tag")

    @property
    def band(self):
        return self.tolerance * abs(self.expected) if self.relative else self.tolerance

    @property
    def gated(self):
        return self.method != 'reference'

    def accepts(self, value):
        return abs(value - self.expected) <= self.band


@dataclass(frozen=True)
class FixtureSet:
    name: str
    cases: Tuple[CaseSpec, ...]
    records: Tuple[ReferenceRecord, ...]


def _centre(case, method, xy, source, band):
    return (ReferenceRecord(case, method, 'vortex_x', xy[0], band, source),
            ReferenceRecord(case, method, 'vortex_y', xy[1], band, source))


def _nusselt(case, method, nu_max, y_max, source, band, location, nu_ave=None, ave_band=None):
    rows = (ReferenceRecord(case, method, 'Nu_max', nu_max, band, source, relative=True),
            ReferenceRecord(case, method, 'Y_at_Nu_max', y_max, location, source))
    if nu_ave is not None:
        rows += (ReferenceRecord(case, method, 'Nu_ave', nu_ave, ave_band or band, source, relative=True),)
    return rows


def _pair_band(low, high, slack):
    """ (centre, relative band) covering [low, high] widened by slack. """
    centre = 0.5 * (low + high)
    return centre, slack + 0.5 * (high - low) / centre


REYNOLDS = (100, 400, 1000)
RAYLEIGH = (1e4, 1e5, 1e6)

GHIA_CENTRES = {100: (0.6172, 0.7344), 400: (0.5547, 0.6055), 1000: (0.5313, 0.5625)}
FVM_CENTRES = {100: (0.6125, 0.7375), 400: (0.5500, 0.60625), 1000: (0.5250, 0.55625)}
LBM_CENTRES = {100: (0.61875, 0.74375), 400: (0.55625, 0.6125), 1000: (0.53125, 0.56875)}
HYBRID1_CENTRES = {100: (0.6125, 0.7375), 400: (0.5547, 0.6055), 1000: (0.5313, 0.5625)}
HYBRID2_CENTRES = {100: (0.6000, 0.71875), 400: (0.5750, 0.60625), 1000: (0.54375, 0.56875)}

NU_MAX = {
    'lbm-fvm-split': (3.5324, 7.6970, 17.3354),
    'fvm': (3.5486, 7.8382, 17.8399),
    'lbm': (3.5481, 7.7907, 17.5133),
    'reference': (3.5309, 7.7201, 17.5360),
}
NU_LOCATION = {
    'lbm-fvm-split': (0.1437, 0.0812, 0.0437),
    'fvm': (0.1375, 0.0813, 0.0334),
    'lbm': (0.1375, 0.0750, 0.0313),
    'reference': (0.1439, 0.0820, 0.0392),
}
# Nu_max, Y_at_Nu_max, Nu_ave
LBM_MCM = {1e4: (3.50, 0.15, 2.21), 1e5: (7.38, 0.08, 4.38)}
LBM_MCM_BANDS = {1e4: (0.05, 0.05), 1e5: (0.07, 0.06)}
DAVIS = {1e4: (3.53, 0.15, 2.24), 1e5: (7.72, 0.08, 4.52)}


def lid_records(bands=DEFAULT_BANDS):
    rows = ()
    vortex = bands['vortex']
    for re in REYNOLDS:
        key = CaseSpec('lid', re=re).key
        rows += _centre(key, 'reference', GHIA_CENTRES[re], 'ghia-1982', vortex)
        rows += _centre(key, 'fvm', FVM_CENTRES[re], 'hybrid-study/vortex-centres', vortex)
        rows += _centre(key, 'lbm', LBM_CENTRES[re], 'hybrid-study/vortex-centres', vortex)
        rows += _centre(key, 'hybrid1', HYBRID1_CENTRES[re], 'hybrid-study/vortex-centres', vortex)
        rows += _centre(key, 'hybrid2', HYBRID2_CENTRES[re], 'hybrid-study/vortex-centres', vortex)
    return rows


def convection_records(bands=DEFAULT_BANDS):
    rows = ()
    for k, ra in enumerate(RAYLEIGH):
        key = CaseSpec('convection', ra=ra).key
        for method in ('reference', 'fvm', 'lbm', 'lbm-fvm-split'):
            # the field split loses a further percent at the highest Rayleigh number
            band = bands['nu'] + (0.01 if method == 'lbm-fvm-split' and ra == 1e6 else 0.0)
            source = 'de-vahl-davis-1983' if method == 'reference' else 'hybrid-study/nusselt'
            rows += _nusselt(key, method, NU_MAX[method][k], NU_LOCATION[method][k], source, band,
                             bands['location'])
    # both decompositions sit within 2% of the band spanned by the two pure methods
    key = CaseSpec('convection', ra=1e5).key
    centre, band = _pair_band(NU_MAX['lbm'][1], NU_MAX['fvm'][1], 0.02)
    for method in ('coupled-vertical', 'coupled-horizontal'):
        rows += (ReferenceRecord(key, method, 'Nu_max', centre, band, 'hybrid-study/decomposed-nusselt',
                                 relative=True),)
    return rows


def mcm_records(bands=DEFAULT_BANDS):
    rows = ()
    for ra, (nu_max, y_max, nu_ave) in LBM_MCM.items():
        key = CaseSpec('convection', ra=ra).key
        band, ave_band = LBM_MCM_BANDS[ra]
        ref_max, ref_y, ref_ave = DAVIS[ra]
        rows += _nusselt(key, 'reference', ref_max, ref_y, 'de-vahl-davis-1983', bands['nu'], bands['location'],
                         nu_ave=ref_ave)
        rows += _nusselt(key, 'lbm-mcm', nu_max, y_max, 'hybrid-study/lbm-mcm', band, bands['location'],
                         nu_ave=nu_ave, ave_band=ave_band)
    return rows


def conduction_records(bands=DEFAULT_BANDS):
    return (ReferenceRecord('conduction', 'mcm', 'center_T', 0.25, 0.02, 'symmetry'),
            ReferenceRecord('conduction', 'mcm', 'max_deviation_se', 0.0, 4.0, 'series-solution'))


def _cases(records, **overrides):
    cases = []
    seen = set()
    for record in records:
        if not record.gated or (record.case, record.method) in seen:
            continue
        seen.add((record.case, record.method))
        kind, _, value = record.case.partition('-')
        params = {}
        if kind == 'lid':
            params['re'] = float(value[2:])
        elif kind == 'convection':
            params['ra'] = float(value[2:])
        params.update(overrides.get(kind, {}))
        cases.append(CaseSpec(kind, method=record.method, **params))
    return tuple(cases)


def smoke_set():
    """ Coarse grids, minutes not hours. """
    records = (_centre('lid-re100', 'lbm', GHIA_CENTRES[100], 'ghia-1982', 0.03)
               + (ReferenceRecord('conduction', 'mcm', 'center_T', 0.25, 0.02, 'symmetry'),))
    return FixtureSet('smoke', _cases(records, lid={'grid': 33}, conduction={'grid': 11}), records)


GROUPS = {
    'lid': lid_records,
    'convection': convection_records,
    'mcm': mcm_records,
    'conduction': conduction_records,
}


def fixture_set(name, bands=None) -> FixtureSet:
    """ Named bundle of cases and the records they are judged against. bands overrides the vortex,
        nu and location tolerances of the deterministic methods. """
    bands = {**DEFAULT_BANDS, **(bands or {})}
    if name == 'smoke':
        return smoke_set()
    if name == 'paper_tables':
        records = sum((build(bands) for build in GROUPS.values()), ())
    elif name in GROUPS:
        records = GROUPS[name](bands)
    else:
        raise ConfigurationError(f"Unknown fixture set {name}, expected one of "
                                 f"{', '.join(sorted(GROUPS) + ['paper_tables', 'smoke'])}")
    # odd node count keeps the 2:1 energy grid of the field split registered
    return FixtureSet(name, _cases(records, convection={'grid': 161}, conduction={'grid': 41}), records)


def tolerance_bands(tolerance):
    """ Band overrides read from a tolerance config section. """
    return {'vortex': tolerance.vortex, 'nu': tolerance.nu, 'location': tolerance.location}
