//! Constrained binary optimization with simulated variational quantum
//! algorithms.
//!
//! The crate provides:
//! - an exact statevector simulator for the QAOA and Two-Local circuit
//!   families ([`statevector`], [`ansatz`]),
//! - constrained binary quadratic problems with penalized diagonal
//!   landscapes ([`problem`]), seeded instance generators and a brute-force
//!   oracle ([`instances`]),
//! - in-constraint metrics: feasibility mass, in-constraint energy,
//!   approximation ratio, optimal-mass fraction ([`metrics`]),
//! - a derivative-free linear-approximation trust-region optimizer that
//!   honors explicit inequality constraints such as a lower bound on the
//!   in-constraint probability ([`cobyla`]),
//! - an experiment harness: single runs, parameter-grid scans, seeded
//!   sweeps, CSV reports ([`harness`]).

pub mod ansatz;
pub mod cobyla;
pub mod error;
pub mod harness;
pub mod instances;
pub mod metrics;
pub mod problem;
pub mod rng;
pub mod statevector;

pub use error::{Error, Result};
