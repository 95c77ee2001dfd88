//! Command-line front end: JSON network documents, queries and the demo.

pub mod commands;
pub mod document;
pub mod report;

pub use commands::{run, Outcome};
pub use document::NetworkDocument;
pub use report::QueryResultDocument;
