//! Text format for programs and the bundled example corpus.
//!
//! ```text
//! #universe p, q.                 % optional extra universe atoms
//! p :- sum{1:p, -1:q} >= 0.       % rule
//! q.                              % fact
//! :- sum{1:p} < 1.                % constraint
//! p | q.                          % disjunctive fact
//! ```

mod corpus;
mod lexer;
mod parser;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::syntax::{AggregateExpression, Program, Rule};

pub use corpus::{corpus, corpus_program, corpus_source, p4_prime, CORPUS_NAMES};

/// 1-based position of a token or node; `length` counts characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl SourceSpan {
    /// From the start of `self` to the end of `end`; single-line spans only
    /// keep an exact length.
    pub(crate) fn through(self, end: SourceSpan) -> SourceSpan {
        let length = if end.line == self.line {
            end.column + end.length - self.column
        } else {
            self.length
        };
        SourceSpan { length, ..self }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    pub expected: Vec<String>,
}

impl ParseError {
    pub(crate) fn new(span: SourceSpan, message: impl Into<String>, expected: &[&str]) -> Self {
        ParseError {
            span,
            message: message.into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

/// A program together with the source positions of its rules and of each
/// body expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedProgram {
    pub program: Program,
    pub rule_spans: Vec<SourceSpan>,
    pub expression_spans: Vec<Vec<SourceSpan>>,
}

pub fn parse_program(source: &str) -> Result<Program, ParseError> {
    parser::parse(source).map(|p| p.program)
}

pub fn parse_program_with_spans(source: &str) -> Result<ParsedProgram, ParseError> {
    parser::parse(source)
}

pub fn parse_expression(source: &str) -> Result<AggregateExpression, ParseError> {
    parser::parse_expression(source)
}

pub fn render_expression(a: &AggregateExpression) -> String {
    let elements: Vec<String> = a
        .elements()
        .iter()
        .map(|e| format!("{}:{}", e.weight, e.atom))
        .collect();
    format!("{}{{{}}} {} {}", a.function(), elements.join(", "), a.op(), a.bound())
}

pub fn render_rule(r: &Rule) -> String {
    let head: Vec<&str> = r.head().iter().map(|a| a.name()).collect();
    let body: Vec<String> = r.body().iter().map(render_expression).collect();
    match (head.is_empty(), body.is_empty()) {
        (true, true) => ".".to_string(),
        (false, true) => format!("{}.", head.join(" | ")),
        (true, false) => format!(":- {}.", body.join(", ")),
        (false, false) => format!("{} :- {}.", head.join(" | "), body.join(", ")),
    }
}

/// Canonical text, one statement per line. Parsing it back yields an equal
/// program.
pub fn render_program(p: &Program) -> String {
    let mut out = String::new();
    if !p.declared_atoms().is_empty() {
        let names: Vec<&str> = p.declared_atoms().iter().map(|a| a.name()).collect();
        out.push_str(&format!("#universe {}.\n", names.join(", ")));
    }
    for r in p.rules() {
        out.push_str(&render_rule(r));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests;
