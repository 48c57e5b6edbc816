//! The experiment description language: lexer, parser, pretty-printer and
//! elaborator into `hmsim-core` objects.

pub mod ast;
pub mod elaborate;
pub mod lexer;
pub mod parser;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use ast::{ExperimentSpec, Ident, Pos, Statement};
pub use elaborate::{elaborate, ElaborationError, ElaborationErrorKind, Experiment, Warning};
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::parse;

/// A lexical or syntax error with its source position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParseError {
    pub message: String,
    pub line: usize,
    pub column: usize,
    pub expected: Option<String>,
}

impl ParseError {
    pub fn new(message: String, pos: Pos, expected: Option<String>) -> Self {
        Self {
            message,
            line: pos.line,
            column: pos.column,
            expected,
        }
    }

    pub fn pos(&self) -> Pos {
        Pos::new(self.line, self.column)
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Any failure turning source text into an experiment.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EdlError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("elaboration error at {0}")]
    Elaborate(#[from] ElaborationError),
}

impl EdlError {
    pub fn pos(&self) -> Pos {
        match self {
            EdlError::Parse(e) => e.pos(),
            EdlError::Elaborate(e) => e.pos,
        }
    }
}

/// Tokenizes and parses source text.
pub fn parse_source(source: &str) -> Result<ExperimentSpec, ParseError> {
    parse(&tokenize(source)?)
}

/// Parses and elaborates source text.
pub fn load(source: &str) -> Result<Experiment, EdlError> {
    Ok(elaborate(&parse_source(source)?)?)
}
