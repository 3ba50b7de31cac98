from hybridflow.coupling.messages import (DecompositionLayout, UnitBridge, InterfaceMessage, reconstruct_density,
                                          transfer_fvm_to_lbm, transfer_lbm_to_fvm,
                                          interface_strain, interface_closure, apply_interface_closure)
from hybridflow.coupling.domain import (LBMZone, FVMZone, CoupledResult, run_coupled, run_lbm_pair, stitch,
                                        interface_mismatch)
from hybridflow.coupling.field import (FieldSplitConfig, restrict_velocity, prolong_temperature, run_hybrid_lbm_fvm,
                                       run_hybrid_lbm_mcm)
