//! Paths of Lagrangian planes and their Maslov index.
//!
//! The index is computed from its spectral-flow definition: the path domain is
//! split into segments on which a circle arc `e^{i phi}, phi in [0, eps]`
//! avoids the spectrum of `U_s V_Z^*` at the segment ends, and the changes in
//! the number of eigenvalues on that arc are summed. Crossing forms give an
//! independent evaluation at regular crossings.

mod crossing;
mod flow;
mod index;
mod path;

pub use crossing::{crossing_form, maslov_via_crossings, two_path_crossing_form, CrossingReport};
pub use flow::{spectral_flow, spectral_flow_detailed, EigenTracks, FlowCrossing, FlowResult};
pub use index::{doubled_pair, maslov_index, maslov_two_paths, MaslovOptions, MaslovResult, Method, PartitionSegment};
pub use path::{LagrangianPath, Sampler};
