//! Guaranteed bounds on maximum marginal probabilities in credal Bayesian networks.
//!
//! A credal network is compiled, under a topological order, into an ordered
//! arithmetic circuit ([`ac`]); parameter leaves are then moved onto sum-node
//! edges to obtain a sum-product network whose sum nodes carry CPD labels
//! ([`spn`]). Dropping the ties between same-label sum nodes gives a credal SPN
//! on which the maximum is computed in one bottom-up pass ([`bounds`]). The
//! [`oracle`] module holds brute-force references used to check all of this.

pub mod ac;
pub mod bounds;
pub mod error;
pub mod model;
pub mod oracle;
pub mod spn;
pub mod synth;

pub use error::{Error, Result};
