//! Discrete Bayesian networks with credal parameters, decision nodes, events and
//! enrichment constructions.

mod credal;
mod decision;
mod enrich;
mod event;
mod network;
mod structure;
mod treatment;

pub use credal::{CredalIssue, CredalSet, PROB_TOL};
pub use decision::{augment_with_decision, DecisionTable};
pub use enrich::{credal_from_intervention, enrich, enrich_maximal};
pub use event::{Event, Indicators};
pub use network::{CredalNetwork, Parameters, Violation};
pub use structure::{NetworkStructure, Variable};
pub use treatment::build_treatment_example;
