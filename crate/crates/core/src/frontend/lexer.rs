use std::fmt;

use super::{ParseError, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Token {
    Ident(String),
    Integer(String),
    Universe,
    If,
    Colon,
    Comma,
    Dot,
    Pipe,
    LBrace,
    RBrace,
    Cmp(&'static str),
    Eof,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(s) => write!(f, "`{s}`"),
            Token::Integer(s) => write!(f, "integer {s}"),
            Token::Universe => f.write_str("\"#universe\""),
            Token::If => f.write_str("\":-\""),
            Token::Colon => f.write_str("\":\""),
            Token::Comma => f.write_str("\",\""),
            Token::Dot => f.write_str("\".\""),
            Token::Pipe => f.write_str("\"|\""),
            Token::LBrace => f.write_str("\"{\""),
            Token::RBrace => f.write_str("\"}\""),
            Token::Cmp(s) => write!(f, "\"{s}\""),
            Token::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Spanned {
    pub token: Token,
    pub span: SourceSpan,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn take_while(&mut self, mut keep: impl FnMut(char) -> bool) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek().filter(|c| keep(*c)) {
            out.push(c);
            self.bump();
        }
        out
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub(crate) fn tokenize(source: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut cur = Cursor {
        chars: source.chars().peekable(),
        line: 1,
        column: 1,
    };
    let mut out = Vec::new();
    loop {
        let (line, column) = (cur.line, cur.column);
        let span = |length: usize| SourceSpan { line, column, length };
        let Some(c) = cur.peek() else {
            // right after the last token, so trailing blank lines and
            // comments do not move end-of-input errors away from the text
            let span = out.last().map_or(span(0), |t: &Spanned| SourceSpan {
                column: t.span.column + t.span.length,
                length: 0,
                ..t.span
            });
            out.push(Spanned {
                token: Token::Eof,
                span,
            });
            return Ok(out);
        };
        let token = match c {
            c if c.is_whitespace() => {
                cur.bump();
                continue;
            }
            '%' => {
                cur.take_while(|c| c != '\n');
                continue;
            }
            'a'..='z' => Token::Ident(cur.take_while(is_ident_char)),
            '0'..='9' => Token::Integer(cur.take_while(|c| c.is_ascii_digit())),
            '-' => {
                cur.bump();
                let digits = cur.take_while(|c| c.is_ascii_digit());
                if digits.is_empty() {
                    return Err(ParseError::new(span(1), "`-` must be followed by digits", &["integer"]));
                }
                Token::Integer(format!("-{digits}"))
            }
            '#' => {
                cur.bump();
                let word = cur.take_while(is_ident_char);
                if word != "universe" {
                    return Err(ParseError::new(
                        span(word.chars().count() + 1),
                        format!("unknown directive `#{word}`"),
                        &["\"#universe\""],
                    ));
                }
                Token::Universe
            }
            ':' => {
                cur.bump();
                if cur.peek() == Some('-') {
                    cur.bump();
                    Token::If
                } else {
                    Token::Colon
                }
            }
            '<' | '>' | '!' | '=' => {
                cur.bump();
                let eq = cur.peek() == Some('=');
                let op = match (c, eq) {
                    ('<', true) => "<=",
                    ('<', false) => "<",
                    ('>', true) => ">=",
                    ('>', false) => ">",
                    ('!', true) => "!=",
                    ('=', _) => "=",
                    _ => return Err(ParseError::new(span(1), "`!` must be followed by `=`", &["\"!=\""])),
                };
                if eq && c != '=' {
                    cur.bump();
                }
                Token::Cmp(op)
            }
            ',' | '.' | '|' | '{' | '}' => {
                cur.bump();
                match c {
                    ',' => Token::Comma,
                    '.' => Token::Dot,
                    '|' => Token::Pipe,
                    '{' => Token::LBrace,
                    _ => Token::RBrace,
                }
            }
            other => {
                let message = if other.is_ascii_uppercase() {
                    format!("unexpected character `{other}`: atoms start with a lowercase letter")
                } else {
                    format!("unexpected character `{other}`")
                };
                return Err(ParseError::new(span(1), message, &[]));
            }
        };
        let length = if line == cur.line { cur.column - column } else { 1 };
        out.push(Spanned {
            token,
            span: span(length),
        });
    }
}
