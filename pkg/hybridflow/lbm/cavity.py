from hybridflow.errors import ConfigurationError
from hybridflow.grid import GridSpec, MacroField
from hybridflow.lbm.lattice import LatticeModel
from hybridflow.lbm.solver import LBMSolver, cavity_boundaries
from hybridflow.lbm.units import relaxation_times, buoyancy_coefficient


def cavity_solver(case) -> LBMSolver:
    if case.kind not in ('lid', 'convection'):
        raise ConfigurationError(f"lbm cannot solve case kind {case.kind}")
    grid = GridSpec.unit_square(case.grid)
    h_lattice = case.grid - 1
    tau_v, tau_T = relaxation_times(case.kind, h_lattice, re=case.re, ra=case.ra, pr=case.pr, ma=case.ma,
                                    lid_velocity=case.lid_velocity)
    thermal = case.kind == 'convection'
    model = LatticeModel(tau_v=tau_v, tau_T=tau_T if thermal else None)
    buoyancy = buoyancy_coefficient(case.ma, h_lattice, case.ra) if thermal else 0.0
    print(f"lbm {case.kind}: {grid.nx}x{grid.ny} nodes, tau_v={tau_v:.4f}" +
          (f", tau_T={tau_T:.4f}" if thermal else ''))
    return LBMSolver(grid, model, cavity_boundaries(case.kind, case.lid_velocity), buoyancy=buoyancy,
                     thermal=thermal)


def solve_lbm(case, settings, progress_bar=False) -> MacroField:
    solver = cavity_solver(case)
    return solver.run(settings.max_steps, settings.check_every, settings.steady_tol, progress_bar=progress_bar)
