//! Cost-aware network dismantling.
//!
//! Finds node sets whose removal breaks a graph into components of at most
//! `C` nodes while keeping the total removal cost low. Costs can be uniform,
//! the node's degree at removal time, or arbitrary external weights.
//!
//! The main strategy ([`gnd`]) recursively bisects the largest component
//! using the sign pattern of an approximate second eigenvector of a
//! node-weighted Laplacian, then removes a weighted vertex cover of the cut
//! edges. [`gndr`] refines a finished plan by reinserting nodes that turned
//! out to be unnecessary. Random removal and an adaptive degree attack are
//! provided for comparison.
//!
//! The spectral routines are generic over [`Scalar`] (`f32` or `f64`);
//! the aliases below fix the common choice.

pub mod baselines;
pub mod cost;
pub mod dismantle;
mod dsu;
pub mod error;
pub mod generators;
pub mod graph;
pub mod partition;
mod residual;
pub mod scalar;
pub mod spectral;

pub use baselines::{adaptive_degree_plan, aggregate_curves, random_removal_plan, AggregatePoint};
pub use cost::{removal_costs, CostLedger, CostModel, ExternalWeights};
pub use dismantle::{
    fragmentation_curve, gcc_fraction_at_cost, gnd, gndr, max_component_after, partial_dismantle_cost,
    DismantlingPlan, GndOptions, Method, Removal, Target, TrajectoryPoint, WeightRecompute,
};
pub use error::{Error, Result};
pub use graph::{
    connected_components, gcc_size, induced_subgraph, parse_edge_list, remove_nodes, write_edge_list,
    ComponentLabeling, Graph, NodeMap,
};
pub use partition::{
    bisect, separating_edges, sign_split, weighted_vertex_cover, BisectionResult, CoverStrategy, Side,
    VertexCover,
};
pub use scalar::Scalar;
pub use spectral::{
    power_iteration, power_iteration_with_rng, shift_constant, FiedlerApproximation, NodeWeights,
    ShiftBound, SpectralConfig, WeightedLaplacian,
};

pub type Laplacian<'g> = WeightedLaplacian<'g, f64>;
pub type Laplacian32<'g> = WeightedLaplacian<'g, f32>;
pub type Weights = NodeWeights<f64>;
pub type Weights32 = NodeWeights<f32>;
pub type Fiedler = FiedlerApproximation<f64>;
pub type Fiedler32 = FiedlerApproximation<f32>;
pub type Bisection = BisectionResult<f64>;
pub type Cover = VertexCover<f64>;
