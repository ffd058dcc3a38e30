use std::fmt::Write as _;
use std::io::Read;

use aggsem::frontend::{parse_program_with_spans, ParseError, ParsedProgram, SourceSpan};

/// A diagnostic that ends the invocation with exit status 2.
#[derive(Debug)]
pub struct Failure(pub String);

impl Failure {
    pub fn new(message: impl Into<String>) -> Self {
        Failure(message.into())
    }
}

/// Program text together with the name used in diagnostics.
pub struct Source {
    pub name: String,
    pub text: String,
}

impl Source {
    /// Reads `path`, or standard input for `-`.
    pub fn read(path: &str) -> Result<Source, Failure> {
        let text = if path == "-" {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Failure::new(format!("cannot read standard input: {e}")))?;
            text
        } else {
            std::fs::read_to_string(path).map_err(|e| Failure::new(format!("cannot read {path}: {e}")))?
        };
        let name = if path == "-" { "<stdin>" } else { path };
        Ok(Source {
            name: name.to_string(),
            text,
        })
    }

    pub fn inline(name: &str, text: &str) -> Source {
        Source {
            name: name.to_string(),
            text: text.to_string(),
        }
    }

    pub fn parse(&self) -> Result<ParsedProgram, Failure> {
        parse_program_with_spans(&self.text).map_err(|e| self.parse_failure(&e))
    }

    pub fn parse_failure(&self, e: &ParseError) -> Failure {
        let mut message = e.message.clone();
        if !e.expected.is_empty() {
            let _ = write!(message, " (expected {})", e.expected.join(", "));
        }
        Failure(self.diagnostic(e.span, &message))
    }

    /// `name:line:col: message`, followed by the offending line and a caret
    /// marker under the span.
    pub fn diagnostic(&self, span: SourceSpan, message: &str) -> String {
        let mut out = format!("{}:{span}: {message}", self.name);
        let Some(line) = self.text.lines().nth(span.line.saturating_sub(1)) else {
            return out;
        };
        let gutter = span.line.to_string();
        let pad = " ".repeat(gutter.len());
        let width = line.chars().count();
        let start = span.column.saturating_sub(1).min(width);
        let marks = span.length.clamp(1, (width - start).max(1));
        let _ = write!(
            out,
            "\n{gutter} | {line}\n{pad} | {}{}",
            " ".repeat(start),
            "^".repeat(marks)
        );
        out
    }
}
