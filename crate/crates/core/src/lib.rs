//! Exact and parameterized algorithms for discrete k-clustering under
//! Minkowski-type distances, plus hardness-reduction instance generators.

pub mod centroids;
pub mod cost;
pub mod data;
pub mod error;
pub mod generators;
pub mod hypergraph;
pub mod metric;
pub mod real;
pub mod selection;
pub mod solver;

pub use cost::{cost_cmp, cost_eval, cost_le, enumerate_cost_set, BasisSum, CostSet, CostValue, Tolerance};
pub use data::{regularize, Centroid, DataPoint, Dataset, InitialCluster};
pub use error::{Error, Result};
pub use generators::{
    gen_hioct_from_3sat, gen_l0_clustering_from_clique, gen_l0_selection_from_mcc, gen_l1_selection_from_mcc,
    gen_linf2_from_hioct, gen_linf_clustering_from_clique, gen_linf_selection_from_mcc, gen_lp_selection_from_mcc,
    verify_reduction, CnfFormula, Graph, HioctInstance, Reduction, Source, VerifyConfig, VerifyReport,
};
pub use metric::{alpha_for, dist, DistanceOrder, Vector};
pub use real::Real;
pub use selection::{select, SelectConfig, Selection, SelectionInstance, SelectionResult};
pub use solver::{
    solve_bruteforce, solve_color_coding, solve_linf_bipartition, Clustering, ClusteringInstance, IterationPolicy,
    SolveConfig, SolveOutcome,
};
