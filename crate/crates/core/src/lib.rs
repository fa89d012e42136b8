//! Counterfactual quantum clock toolkit.
//!
//! Simulates clocks that reveal the elapsed time between two events even
//! when the measurement outcome certifies that the clock never evolved.
//! The crate covers the full verification chain:
//!
//! - [`linalg`] — labeled finite-dimensional state vectors, unitaries and
//!   Born-rule measurement over the clock basis,
//! - [`protocol`] — the forward protocol and the two defining conditions of
//!   a counterfactual outcome,
//! - [`synth`] — construction of the measurement unitary for any number of
//!   distinguishable times, plus the no-ancilla impossibility search,
//! - [`tsvf`] — two-state-vector (backwards-in-time) certification,
//! - [`ontic`] — convex-cone witness search refuting noncontextual ontic
//!   models of the counterfactual clock,
//! - [`engineered`] — continuous-time engineered-clock numerics with
//!   quantified type-1/type-2 error rates,
//! - [`acceptance`] — the end-to-end acceptance suite shared by the test
//!   harness and the CLI.

pub mod acceptance;
pub mod engineered;
pub mod linalg;
pub mod numeric;
pub mod ontic;
pub mod protocol;
pub mod synth;
pub mod tsvf;

pub use linalg::{
    apply_unitary, make_state, measure, BasisLabel, ClockSpace, Outcome, OutcomeDistribution,
    Projector, StateVector, UnitaryMatrix,
};
pub use protocol::{ClockSpec, Interpretation, OutcomeConvention, ProtocolResult};
pub use synth::SynthRequest;

/// Absolute tolerance used for most numerical comparisons.
pub const TOL: f64 = 1e-10;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
