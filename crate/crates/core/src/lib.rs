//! Local admissible invariants of genus-2 curves.
//!
//! The non-archimedean side works on polarized metric graphs in exact
//! rational arithmetic: Laplacian solves, effective resistance, Green's
//! functions for arbitrary vertex + edge-density measures, the admissible
//! measure, and the invariants ε, φ, λ. The archimedean side evaluates
//! genus-2 theta functions with characteristics and derives ‖Δ₂‖, ‖H‖,
//! δ_F, S, φ and λ from a period matrix.

pub mod catalog;
pub mod format;
pub mod graph;
pub mod invariants;
pub mod linalg;
pub mod poly;
pub mod potential;
pub mod rational;
pub mod theta;

pub use catalog::{FiberTag, FiberType};
pub use graph::{EdgeId, GraphDivisor, GraphError, GraphMeasure, GraphPoint, PMGraph, VertexId};
pub use invariants::{NodeCounts, NonArchReport};
pub use poly::{PiecewisePoly, Quadratic};
pub use rational::Q;
