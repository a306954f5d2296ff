//! Generators, exhaustive enumerators and property suites for `flux-core`.
//!
//! Random generation is seeded and split into one stream per case, so a
//! suite run is reproducible regardless of how rayon schedules the cases.

pub mod config;
pub mod exhaustive;
pub mod gen;
pub mod library;
pub mod program;
pub mod report;
pub mod shrink;
pub mod suites;
pub mod terms;

pub use config::GenConfig;
pub use exhaustive::types_upto;
pub use gen::{sample_envs, sample_values, TypeGen, SAMPLE_LIMIT};
pub use library::Library;
pub use program::{program_oracle, ProgramOracleError};
pub use report::{Outcome, Report, SuiteReport};
pub use shrink::{shrink, Shrink};
pub use suites::run_suites;
pub use terms::{forest_expr, GenFailure, TermGen};
