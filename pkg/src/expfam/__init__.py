"""Exponential families on finite sets and maximisation of the divergence
from them."""

from .circuits import (CircuitBasis, CircuitVector, brute_force_circuits, circuit_basis,
                       circuit_through, closure_membership, connected_components,
                       coparallel_classes, mixture_decomposition, rank_of_class)
from .errors import *  # noqa: F401,F403
from .family import (ExponentialFamily, StateSpace, build_family, convex_support_vertices,
                     density, family_from_normal_space, is_partition_family, moment_map)
from .maximize import (KernelDirection, MaximizerReport, criticality_check, dbar,
                       local_maximizers, max_divergence_oracle, partition_maximizers,
                       psi_family, psi_plus)
from .optimality import (caratheodory_witness, check_log2_structure, equality_case,
                         inclusion_optimal_partition_check, one_dim_optimality,
                         optimality_report, random_uniform_family, scan_conjecture,
                         zero_dim_optimality)
from .partition import Partition
from .projection import (ProjectionResult, divergence, entropy, partition_divergence,
                         partition_project, ri_project, truncate)
from .zoo import (HierarchicalSpec, direct_sum, grouping_family, hierarchical_family,
                  marginal_polytope_vertex_count, partition_family, three_state_family,
                  unique_log2_family_N3)
