from hybridflow.fvm.quick import quick_face, quick_correction
from hybridflow.fvm.tdma import solve_tridiag, solve_tridiag_array
from hybridflow.fvm.transport import (TransportSpec, BoundarySide, assemble_and_sweep, build_links, line_sweeps,
                                      solve_transport)
from hybridflow.fvm.simple import (SimpleConfig, SimpleSolver, EdgeCondition, cavity_edges, pressure_correction,
                                   solve_simple)
