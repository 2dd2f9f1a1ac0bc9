//! Open loop layout optimization with exact door-to-door distances.
//!
//! Rectangular cells carry a door (pick-up point) on one edge. A layout places
//! the cells on the plane without overlap; material flows travel between doors
//! along shortest feasible paths, which must either run outside every cell or
//! along cell boundaries. This crate provides:
//!
//! * [`geometry`] — orientation/intersection predicates and the buffered
//!   interior-crossing test used for path feasibility,
//! * [`layout`] — cell specs, orientations, placements and the overlap predicate,
//! * [`encoding`] — the 3n-gene chromosome and its decoder into feasible layouts,
//! * [`distance`] — the 5n-node visibility graph, all-pairs shortest paths and
//!   the flow-weighted objective,
//! * [`metaheuristics`] — SGA, DE, SADE and PSO over the unit hypercube,
//! * [`validator`] — an independent feasibility oracle over the same constraints,
//! * [`instance`] — problem instance I/O and random generation,
//! * [`metrics`] — convex-hull based layout quality metrics.

pub mod distance;
pub mod encoding;
pub mod geometry;
pub mod instance;
pub mod layout;
pub mod metaheuristics;
pub mod metrics;
pub mod validator;

pub use distance::{evaluate, evaluate_layout, EvalConfig, FlowMatrix, ShortestPaths};
pub use encoding::{decode, Chromosome};
pub use instance::Instance;
pub use layout::{DoorSide, Layout, Placement, RectangleSpec};
pub use metaheuristics::{run, run_experiment, Algo, OptimizerConfig, RunTrace};
