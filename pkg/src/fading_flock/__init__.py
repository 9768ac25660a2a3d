"""Gradient-flow multi-agent systems with strong short-range repulsion and
fading long-range attraction: simulation, dilute-partition clustering, and
convergence diagnostics."""

from .analysis import (BlowupReport, ClusterDiagnostics, EquilibriumReport,
                       ExpansionCheck, FloorEstimate, PinnedSetDistance,
                       SelfClusteringVerdict, centroid_hierarchy,
                       cluster_diagnostics, collision_bound,
                       dissipation_floor_estimate, equilibrium_report,
                       hierarchy_expansion_check, hierarchy_table,
                       pinned_edge_set_distance, repulsion_blowup_check,
                       self_clustering_detect)
from .dynamics import (Configuration, ConfigurationMetrics, IntegratorParams,
                       Snapshot, StiffnessError, Trajectory,
                       configuration_metrics, edge_lengths,
                       finite_difference_gradient, is_valid_configuration,
                       potential, restricted_field, simulate, subsystem_field,
                       vector_field)
from .graph import (Graph, VertexPartition, complete_graph,
                    iter_vertex_partitions, path_graph, star_graph)
from .interaction import (InteractionFunction, InteractionMap, LennardJones,
                          TabulatedFunction, ValidationCheck,
                          ValidationReport)
from .partition import (DilutingWitness, FrameworkPartition, coarsen,
                        diluting_subsequence, enumerate_dilute,
                        find_nontrivial_dilute, threshold_components)

__version__ = "0.1.0"

__all__ = [
    "BlowupReport", "ClusterDiagnostics", "Configuration",
    "ConfigurationMetrics", "DilutingWitness", "EquilibriumReport",
    "ExpansionCheck", "FloorEstimate", "FrameworkPartition", "Graph",
    "IntegratorParams", "InteractionFunction", "InteractionMap",
    "LennardJones", "PinnedSetDistance", "SelfClusteringVerdict", "Snapshot",
    "StiffnessError", "TabulatedFunction", "Trajectory", "ValidationCheck",
    "ValidationReport", "VertexPartition", "centroid_hierarchy",
    "cluster_diagnostics", "coarsen", "collision_bound", "complete_graph",
    "configuration_metrics", "dissipation_floor_estimate",
    "diluting_subsequence", "edge_lengths", "enumerate_dilute",
    "equilibrium_report", "find_nontrivial_dilute",
    "finite_difference_gradient", "hierarchy_expansion_check", "hierarchy_table",
    "is_valid_configuration", "iter_vertex_partitions", "path_graph",
    "pinned_edge_set_distance", "potential", "repulsion_blowup_check",
    "restricted_field", "self_clustering_detect", "simulate", "star_graph",
    "subsystem_field", "threshold_components", "vector_field",
]
