//! Command-line front end: reads distribution documents, runs flags,
//! prolongations, structure certificates and tangency claims, and writes
//! text or JSON reports.

pub mod commands;
pub mod document;
pub mod error;
pub mod golden;
pub mod report;

pub use document::Document;
pub use error::CliError;
pub use report::Report;
