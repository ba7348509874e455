//! Scenario files, run reports, orbit dumps, plots and oracle fixtures for
//! the `attractorlab` command line.

pub mod cli;
pub mod fixtures;
pub mod formats;
pub mod report;
pub mod scenario;
