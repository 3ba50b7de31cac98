from hybridflow.lbm.lattice import E, W, E5, W5, OPPOSITE, CS, CS2, LatticeModel, LatticeState, BodyForceSpec
from hybridflow.lbm.equilibrium import equilibrium_f, equilibrium_g, equilibrium_f_field, equilibrium_g_field
from hybridflow.lbm.boundaries import (BoundaryCondition, edge_nodes, macroscopic, bc_noneq_extrapolation,
                                       bc_velocity_gradient)
from hybridflow.lbm.solver import (LBMSolver, moments, step_flow, step_energy, initial_state, cavity_boundaries,
                                   relative_change)
from hybridflow.lbm.units import relaxation_times, buoyancy_coefficient, nondimensional_transport, Transport
from hybridflow.lbm.cavity import cavity_solver, solve_lbm
