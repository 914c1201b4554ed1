//! Strictly localized near-single-photon states, their normal-ordered field
//! correlations, and their propagation through causal linear filters.
//!
//! Units: `c = 1`, field scale `K = 1`, frequencies in units of the carrier.

// Negated float comparisons are deliberate throughout: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod fields;
pub mod filters;
pub mod fock;
pub mod pipeline;
pub mod propagation;
pub mod signal;
pub mod state;

pub use error::{Error, Result};
pub use fields::{Representation, TwoTimeKernel};
pub use filters::{DeltaTrain, FabryPerot, Filter, LinearFilter, QuarterWaveStack};
pub use pipeline::{FilteredPulse, LocalizedPulse};
pub use signal::{SeedParams, TimeGrid, Trace};
