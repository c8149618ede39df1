//! Scattering on open quantum graphs: the family-of-paths linear system,
//! closed-form amplitudes for standard families, and scattering entropies.

pub mod average;
pub mod closed_forms;
pub mod entropy;
pub mod engine;
pub mod families;
pub mod graph;
pub mod graph_json;
pub mod linalg;
pub mod sweep;

pub use engine::{scattering_amplitude, scattering_matrix, EngineError, ScatteringMatrix};
pub use graph::{BoundaryCondition, Edge, GraphError, MetricGraph, OpenGraph, VertexAmplitudes};
