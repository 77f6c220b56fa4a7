//! Fractional-operator classes of harmonic functions `f = h + conj(g)` on the
//! unit disk.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfn`]: log-domain Gamma/Beta kernel and the operator weight
//!   `Γ(2−ν)Γ(n+1)/Γ(n+1−ν)`.
//! * [`params`]: the class parameters `(β, λ, k, ν)`.
//! * [`series`]: truncated harmonic series, evaluation, the fractional
//!   operator and the mixed θ-derivative functional `E(z)`.
//! * [`classes`]: the coefficient weights φ, ψ and membership certificates.
//! * [`structure`]: extreme points, Hadamard convolution, convex combinations.
//! * [`verify`]: grid minimisation of `Re E` and seeded verification suites.
//! * [`io`]: the coefficient-file JSON format and grid CSV output.

// `!(x >= 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classes;
pub mod error;
pub mod io;
pub mod params;
pub mod series;
pub mod specfn;
pub mod structure;
pub mod verify;

pub use classes::{MembershipReport, Part, Verdict, WeightPair};
pub use error::{Error, Result};
pub use params::ClassParams;
pub use series::{EvalPoint, HarmonicFunction, NegativeCoefficientForm};
pub use structure::WeightDecomposition;
pub use verify::{DiskGrid, VerificationReport};

/// Absolute tolerance used for verdicts and weight-sum checks.
pub const TOLERANCE: f64 = 1e-12;
