//! Command-line front end for `boij-core`: job configuration, result
//! documents, batch runs and corpus generation.

pub mod batch;
pub mod config;
pub mod corpus;
pub mod execute;

pub use config::{Command, JobConfig, Resolved};
pub use execute::{execute, Outcome, DEGREE_CAP_ENV, SCHEMA_VERSION};
