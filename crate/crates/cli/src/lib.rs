//! Command-line front end for the hypsolve solver.

pub mod commands;
pub mod parse;
pub mod render;
pub mod report;

pub use commands::{batch_command, solve_command, Mode, Options, Summary};
pub use parse::{parse_operator, ParseError};
pub use report::{solution_from_json, solution_json, Report, Status};
