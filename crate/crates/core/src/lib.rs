//! Secure multicasting with physical-layer service integration assisted by an
//! intelligent reflecting surface.
//!
//! A single-antenna access point serves `K` users: one confidential message for user 0
//! and a common multicast message for everyone. The IRS phase vector and the power
//! split are designed to trace the secrecy/multicast capacity region.

// Negated float comparisons are used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algorithms;
pub mod analysis;
pub mod channel;
pub mod error;
pub mod linalg;
pub mod model;
pub mod sdp;
pub mod rng;

pub use channel::{generate_channels, ChannelSet, ScenarioConfig};
pub use error::{Error, Result};
pub use model::{Feasibility, PhaseVector, PowerSplit, QuadraticForm, RatePair};
