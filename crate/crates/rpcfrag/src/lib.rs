//! Ruelle probability cascades as a time-inhomogeneous fragmentation of
//! exchangeable partitions, together with the Bolthausen-Sznitman coalescent
//! that runs the same tree backwards.
//!
//! The crate is layered bottom-up:
//!
//! * [`partition`], [`mass`]: combinatorial state (set partitions, ranked
//!   mass vectors) with fragmentation and coagulation operators.
//! * [`laws`]: closed-form partition laws, rates, and moments.
//! * [`sample`]: exact samplers (stick breaking, seating rules, paint box).
//! * [`cascade`]: the Poisson cascade construction and subordinator nesting.
//! * [`engine`]: forward fragmentation and backward coalescent simulators.
//! * [`oracle`]: brute-force enumeration and statistical test machinery.
//! * [`verify`]: the acceptance checks tying samplers to closed forms.
//!
//! Numeric code is generic over [`scalar::Real`], implemented for `f32` and
//! `f64`. The aliases below fix the default f64 instantiations.

pub mod cascade;
pub mod engine;
pub mod error;
pub mod laws;
pub mod mass;
pub mod numeric;
pub mod oracle;
pub mod partition;
pub mod sample;
pub mod scalar;

pub use error::{Error, Result};
pub use laws::{Composition, ParamDomain};
pub use partition::SetPartition;
pub use sample::RandomStream;
pub use scalar::Real;

/// Default mass-partition state.
pub type MassPartition = mass::MassPartition<f64>;
/// Default parameter pair of the two-parameter family.
pub type PdParams = laws::PdParams<f64>;
/// Default size-biased mass sequence.
pub type SizeBiasedSequence = sample::SizeBiasedSequence<f64>;
