//! End-to-end scenarios: homotopy squares for one-dimensional families and
//! spectral flow identities, driven by serializable specifications.

mod flow;
mod spec;
mod square;

pub use flow::{run_spectral_flow_identity, FlowIdentityReport};
pub use spec::{BandSpec, ComplexMatrixSpec, FamilySpec, FourierTermSpec, PotentialSpec, ScenarioSpec};
pub use square::{run_square, Family1D, HomotopySquare, SideReport, SquareReport, SweepKind};
