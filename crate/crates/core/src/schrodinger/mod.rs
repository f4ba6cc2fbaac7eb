//! Schrödinger operators `-u'' + V u` on `[0, 1]` with `C^m`-valued functions.
//!
//! Boundary traces are `Gamma1 u = (u(1), u(0))` and
//! `Gamma2 u = (u'(1), -u'(0))` in `C^{2m}`, so that the Green identity reads
//! `<-u'', v> - <u, -v''> = omega((Gamma1 u, Gamma2 u), (Gamma1 v, Gamma2 v))`
//! in the standard space `C^{2m} x C^{2m}`.

mod extension;
mod oracle;
mod potential;
mod trace;
pub mod verify;

pub use extension::{extension_plane, ExtensionKind, ExtensionPlane};
pub use oracle::{oracle_spectrum, sturm_count, OracleProblem, SpectrumResult};
pub use potential::{Potential1D, Smoothness};
pub use trace::{solution_space_trace, BoundaryTriple1D, DEFAULT_STEPS};
pub use verify::{
    kernel_bridge, scalar_robin_path, theta_periodic_path, verify_identity_rr15, verify_robin_monotone, BridgeEntry,
    BridgeReport, IdentityReport, KernelPoint, RobinReport, VerifyConfig,
};
