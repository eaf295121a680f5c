//! Model files, the expression parser and the report-producing subcommands
//! behind the `bvkit` binary.

pub mod commands;
pub mod expr;
pub mod model;
pub mod report;

pub use commands::{run, run_model, Options, COMMANDS};
pub use expr::{parse_expression, ParseError, Parsed, Warning};
pub use model::{load_model, parse_model, LoadError, Model};
pub use report::{Check, Detail, Report, Status};
