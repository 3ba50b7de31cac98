from hybridflow.mcm.probabilities import TransitionProbs, transition_probs, cumulative_table
from hybridflow.mcm.streams import node_generator, walker_generator
from hybridflow.mcm.walker import (EdgeRule, BoundarySpec, WalkerConfig, Estimate, McmField, walker_moves,
                                   walk_batch, random_walk, estimate_temperature, solve_field_mcm, solve_conduction)
from hybridflow.mcm.analytic import analytic_conduction
