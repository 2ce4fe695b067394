//! Reliability and security analysis of wireless-powered decode-and-forward
//! multi-relay networks with transceiver I/Q imbalance, imperfect channel
//! estimates and nonlinear (saturating) energy harvesters.
//!
//! Two independent routes are provided for every metric:
//!
//! * [`mc`] simulates the system model trial by trial with reproducible,
//!   counter-based random streams;
//! * [`analytic`] evaluates the closed-form outage and intercept
//!   probabilities (modified Bessel `K1` plus a Gauss-Chebyshev remainder).
//!
//! The [`cli`] module wires both into JSON-configured parameter sweeps that
//! emit CSV.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod channel;
pub mod cli;
pub mod energy;
pub mod error;
pub mod iqi;
pub mod link;
pub mod mc;
pub mod scenario;

pub use error::{Error, Result};
pub use scenario::Scenario;
