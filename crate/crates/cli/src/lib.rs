//! Scenario-driven front end for the qdice simulation core: declarative
//! JSON experiment files, staged execution, table rendering, and built-in
//! demos.

pub mod demos;
pub mod output;
pub mod runner;
pub mod scenario;
