#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod config;
pub mod error;
pub mod geodesic_lab;
pub mod exec;
pub mod ph_calculus;
pub mod poly_engine;
pub mod spectral_probe;
pub mod suite;
pub mod sphere_model;

pub use error::{Error, Result};
pub use exec::Exec;
pub use config::Config;
pub use suite::{run_suite, run_suites, Report, RunOptions, SuiteName, SuiteReport};
