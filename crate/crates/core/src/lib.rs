//! Simulation and numerical analysis of the single-server queue with single
//! vacations and balking customers.
//!
//! * [`dist`]: parametric input laws and their transforms.
//! * [`recursion`]: the workload recursion and the auxiliary `Z`/`Y` sequences.
//! * [`stability`]: Loynes sequence and Monte Carlo stability diagnostics.
//! * [`simulate`]: stationary estimation and an event-driven reference simulator.
//! * [`solve`]: the stationary Volterra equation and the transform series.
//! * [`tail`]: heavy-tail class checks and tail-equivalence verification.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod dist;
pub mod error;
pub mod io;
pub mod quad;
pub mod recursion;
pub mod rng;
pub mod simulate;
pub mod solve;
pub mod stability;
pub mod tail;

pub use dist::{DistSpec, Family, QueueModel};
pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
