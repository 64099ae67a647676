//! MiniLang: the small imperative language every mutation operator targets.

pub mod ast;
pub mod check;
pub mod interp;
pub mod lexer;
pub mod parser;
pub mod printer;
pub mod rewrite;

pub use ast::*;
pub use check::{check, TypeInfo};
pub use interp::{execute, execute_with_coverage, Outcome, Status, TrapKind, Value};
pub use printer::{expr_to_string, pretty_print};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LangError {
    #[error("syntax error at {line}:{column}: expected {expected}, found {found}")]
    Syntax {
        line: u32,
        column: u32,
        expected: String,
        found: String,
    },
    #[error("static check failed at {line}:{column} (node {node}): {message}")]
    Static {
        node: NodeId,
        line: u32,
        column: u32,
        message: String,
    },
    #[error("invalid entry point: {0}")]
    Entry(String),
}

/// Parses, numbers and statically checks a compilation unit.
pub fn parse(source: &str) -> Result<Program, LangError> {
    let mut program = parse_unchecked(source)?;
    program.renumber();
    check(&program)?;
    Ok(program)
}

/// Parses and numbers without the static check.
pub fn parse_unchecked(source: &str) -> Result<Program, LangError> {
    let mut parser = parser::Parser::new(source)?;
    let mut program = parser.program()?;
    program.renumber();
    Ok(program)
}
