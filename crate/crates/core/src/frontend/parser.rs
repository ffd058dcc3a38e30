use std::collections::BTreeSet;

use num_bigint::BigInt;

use super::lexer::{tokenize, Spanned, Token};
use super::{ParseError, ParsedProgram, SourceSpan};
use crate::syntax::{
    AggregateExpression, AggregateFunction, Atom, ComparisonOp, Program, Rule, SyntaxError, WeightedAtom,
};

const RULE_START: &[&str] = &["atom", "\":-\"", "\".\"", "\"#universe\""];
const FUNCTIONS: &[&str] = &["\"sum\"", "\"times\"", "\"avg\"", "\"min\"", "\"max\""];
const COMPARISONS: &[&str] = &["\"<\"", "\"<=\"", "\">=\"", "\">\"", "\"=\"", "\"!=\""];

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.tokens[self.pos].clone();
        if t.token != Token::Eof {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let t = self.peek();
        ParseError::new(t.span, format!("unexpected {}", t.token), expected)
    }

    fn expect(&mut self, token: Token) -> Result<SourceSpan, ParseError> {
        if self.peek().token == token {
            Ok(self.next().span)
        } else {
            Err(self.unexpected(&[&token.to_string()]))
        }
    }

    fn eat(&mut self, token: Token) -> bool {
        let hit = self.peek().token == token;
        if hit {
            self.next();
        }
        hit
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        match &self.peek().token {
            Token::Ident(name) => {
                let atom = Atom::new(name).map_err(|e| ParseError::new(self.peek().span, e.to_string(), &["atom"]))?;
                self.next();
                Ok(atom)
            }
            _ => Err(self.unexpected(&["atom"])),
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        match &self.peek().token {
            Token::Integer(digits) => {
                let value = digits.parse().expect("lexer yields well-formed integers");
                self.next();
                Ok(value)
            }
            _ => Err(self.unexpected(&["integer"])),
        }
    }

    fn program(&mut self) -> Result<ParsedProgram, ParseError> {
        let mut rules = Vec::new();
        let mut declared = BTreeSet::new();
        let mut rule_spans = Vec::new();
        let mut expression_spans = Vec::new();
        loop {
            match self.peek().token {
                Token::Eof => break,
                Token::Universe => {
                    self.next();
                    loop {
                        declared.insert(self.atom()?);
                        if !self.eat(Token::Comma) {
                            break;
                        }
                    }
                    self.expect(Token::Dot)?;
                }
                Token::Ident(_) | Token::If | Token::Dot => {
                    let (rule, span, spans) = self.rule()?;
                    rules.push(rule);
                    rule_spans.push(span);
                    expression_spans.push(spans);
                }
                _ => return Err(self.unexpected(RULE_START)),
            }
        }
        Ok(ParsedProgram {
            program: Program::with_declared(rules, declared),
            rule_spans,
            expression_spans,
        })
    }

    fn rule(&mut self) -> Result<(Rule, SourceSpan, Vec<SourceSpan>), ParseError> {
        let start = self.peek().span;
        let mut head = Vec::new();
        if matches!(self.peek().token, Token::Ident(_)) {
            loop {
                head.push(self.atom()?);
                if !self.eat(Token::Pipe) {
                    break;
                }
            }
        }
        let mut body = Vec::new();
        let mut spans = Vec::new();
        if self.eat(Token::If) {
            loop {
                let (expr, span) = self.aggregate()?;
                body.push(expr);
                spans.push(span);
                if !self.eat(Token::Comma) {
                    break;
                }
            }
        } else if !head.is_empty() && self.peek().token != Token::Dot {
            let expected = if head.len() == 1 {
                &["\"|\"", "\":-\"", "\".\""][..]
            } else {
                &["\":-\"", "\".\""][..]
            };
            return Err(self.unexpected(expected));
        }
        let end = self.expect(Token::Dot)?;
        Ok((Rule::new(head, body), start.through(end), spans))
    }

    fn aggregate(&mut self) -> Result<(AggregateExpression, SourceSpan), ParseError> {
        let start = self.peek().span;
        let function = match &self.peek().token {
            Token::Ident(word) => AggregateFunction::from_keyword(word)
                .ok_or_else(|| ParseError::new(start, format!("unknown aggregation function `{word}`"), FUNCTIONS))?,
            _ => return Err(self.unexpected(FUNCTIONS)),
        };
        self.next();
        self.expect(Token::LBrace)?;
        let mut elements = Vec::new();
        let mut element_spans = Vec::new();
        if self.peek().token != Token::RBrace {
            loop {
                let element_start = self.peek().span;
                let weight = self.integer()?;
                self.expect(Token::Colon)?;
                let atom_span = self.peek().span;
                let atom = self.atom()?;
                element_spans.push((atom.clone(), element_start.through(atom_span)));
                elements.push(WeightedAtom::new(weight, atom));
                if !self.eat(Token::Comma) {
                    break;
                }
            }
        }
        self.expect(Token::RBrace)?;
        let op = match self.peek().token {
            Token::Cmp(symbol) => ComparisonOp::from_symbol(symbol).expect("lexer yields known comparisons"),
            _ => return Err(self.unexpected(COMPARISONS)),
        };
        self.next();
        let bound_span = self.peek().span;
        let bound = self.integer()?;
        let span = start.through(bound_span);
        match AggregateExpression::new(function, elements, op, bound) {
            Ok(expr) => Ok((expr, span)),
            Err(SyntaxError::DuplicateElement(dup)) => {
                // point at the second occurrence
                let at = element_spans
                    .iter()
                    .filter(|(a, _)| *a == dup)
                    .nth(1)
                    .map_or(span, |(_, s)| *s);
                Err(ParseError::new(
                    at,
                    format!("atom `{dup}` occurs more than once in one aggregate"),
                    &[],
                ))
            }
            Err(e) => Err(ParseError::new(span, e.to_string(), &[])),
        }
    }
}

pub(crate) fn parse(source: &str) -> Result<ParsedProgram, ParseError> {
    let tokens = tokenize(source)?;
    Parser { tokens, pos: 0 }.program()
}

/// Parses exactly one aggregate expression, e.g. `sum{1:p} >= 0`.
pub(crate) fn parse_expression(source: &str) -> Result<AggregateExpression, ParseError> {
    let tokens = tokenize(source)?;
    let mut parser = Parser { tokens, pos: 0 };
    let (expr, _) = parser.aggregate()?;
    if parser.peek().token != Token::Eof {
        return Err(parser.unexpected(&["end of input"]));
    }
    Ok(expr)
}
