//! Power market for a shared amplify-and-forward relay.
//!
//! A single relay with a total power budget serves several source
//! destination pairs. Each user decides how much relay power to buy at a
//! posted unit price; the relay picks the price that maximizes its revenue.
//! This crate provides the closed-form per-user demand curve, the
//! Kalai-Smorodinsky bargaining allocation that splits the budget fairly
//! when demand exceeds supply, the analytic revenue-optimal price, two
//! baseline allocation schemes, seeded scenario generators, and an
//! experiment harness with deterministic parallel Monte Carlo sweeps.
//!
//! The flow mirrors how the market clears: [`model`] defines links and SNR
//! primitives, [`demand`] turns a price into per-user demand, [`ksbs`]
//! allocates the budget at a given price, [`pricing`] finds the price the
//! relay should post, [`baselines`] provides comparison schemes, and
//! [`scenarios`] plus [`harness`] generate networks and run experiments.

pub mod baselines;
pub mod demand;
pub mod error;
pub mod harness;
pub mod ksbs;
pub mod model;
pub mod pricing;
pub mod scenarios;
#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
