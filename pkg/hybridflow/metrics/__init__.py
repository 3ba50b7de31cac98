from hybridflow.metrics.cases import CaseSpec, canonical_kind, METHODS_BY_KIND
from hybridflow.metrics.references import ReferenceRecord, FixtureSet, fixture_set, tolerance_bands
from hybridflow.metrics.flow_metrics import (vortex_center, nusselt_profile, NusseltProfile, centerline_profiles,
                                             profile_agreement, conduction_metrics, extract_metrics, mid_line)
