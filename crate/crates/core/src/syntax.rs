//! Abstract syntax for propositional programs whose rule bodies are
//! conjunctions of aggregate expressions.
//!
//! All types are immutable once built. Atom order everywhere is
//! lexicographic by name, which makes every enumeration in the crate
//! reproducible.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("invalid atom name `{0}`: atoms match [a-z][A-Za-z0-9_]*")]
    InvalidAtom(String),
    #[error("atom `{0}` occurs more than once in one aggregate element list")]
    DuplicateElement(Atom),
}

/// Integers serialize as decimal strings, as aggregate values do.
pub(crate) fn serialize_bigint<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// A propositional atom, identified by its name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Atom(Arc<str>);

impl Atom {
    pub fn new(name: &str) -> Result<Self, SyntaxError> {
        if is_atom_name(name) {
            Ok(Atom(Arc::from(name)))
        } else {
            Err(SyntaxError::InvalidAtom(name.to_string()))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl TryFrom<String> for Atom {
    type Error = SyntaxError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        Atom::new(&value)
    }
}

impl From<Atom> for String {
    fn from(atom: Atom) -> String {
        atom.0.to_string()
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AggregateFunction {
    Sum,
    Times,
    Avg,
    Min,
    Max,
}

impl AggregateFunction {
    pub const ALL: [AggregateFunction; 5] = [
        AggregateFunction::Sum,
        AggregateFunction::Times,
        AggregateFunction::Avg,
        AggregateFunction::Min,
        AggregateFunction::Max,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            AggregateFunction::Sum => "sum",
            AggregateFunction::Times => "times",
            AggregateFunction::Avg => "avg",
            AggregateFunction::Min => "min",
            AggregateFunction::Max => "max",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.keyword() == word)
    }
}

impl fmt::Display for AggregateFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComparisonOp {
    Lt,
    Le,
    Ge,
    Gt,
    Eq,
    Ne,
}

impl ComparisonOp {
    pub const ALL: [ComparisonOp; 6] = [
        ComparisonOp::Lt,
        ComparisonOp::Le,
        ComparisonOp::Ge,
        ComparisonOp::Gt,
        ComparisonOp::Eq,
        ComparisonOp::Ne,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            ComparisonOp::Lt => "<",
            ComparisonOp::Le => "<=",
            ComparisonOp::Ge => ">=",
            ComparisonOp::Gt => ">",
            ComparisonOp::Eq => "=",
            ComparisonOp::Ne => "!=",
        }
    }

    pub fn from_symbol(symbol: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|op| op.symbol() == symbol)
    }

    /// Applies the operator to an already computed ordering of `lhs` against `rhs`.
    pub fn holds_for(self, ordering: std::cmp::Ordering) -> bool {
        use std::cmp::Ordering::*;
        match self {
            ComparisonOp::Lt => ordering == Less,
            ComparisonOp::Le => ordering != Greater,
            ComparisonOp::Ge => ordering != Less,
            ComparisonOp::Gt => ordering == Greater,
            ComparisonOp::Eq => ordering == Equal,
            ComparisonOp::Ne => ordering != Equal,
        }
    }
}

impl fmt::Display for ComparisonOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct WeightedAtom {
    #[serde(serialize_with = "serialize_bigint")]
    pub weight: BigInt,
    pub atom: Atom,
}

impl WeightedAtom {
    pub fn new(weight: impl Into<BigInt>, atom: Atom) -> Self {
        WeightedAtom {
            weight: weight.into(),
            atom,
        }
    }
}

/// `function{w1:p1, ..., wn:pn} op bound`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AggregateExpression {
    function: AggregateFunction,
    elements: Vec<WeightedAtom>,
    op: ComparisonOp,
    #[serde(serialize_with = "serialize_bigint")]
    bound: BigInt,
}

impl AggregateExpression {
    /// Builds an expression, rejecting element lists that mention an atom twice.
    pub fn new(
        function: AggregateFunction,
        elements: Vec<WeightedAtom>,
        op: ComparisonOp,
        bound: impl Into<BigInt>,
    ) -> Result<Self, SyntaxError> {
        if let Some(dup) = first_duplicate(&elements) {
            return Err(SyntaxError::DuplicateElement(dup));
        }
        Ok(Self::new_unchecked(function, elements, op, bound))
    }

    pub(crate) fn new_unchecked(
        function: AggregateFunction,
        elements: Vec<WeightedAtom>,
        op: ComparisonOp,
        bound: impl Into<BigInt>,
    ) -> Self {
        AggregateExpression {
            function,
            elements,
            op,
            bound: bound.into(),
        }
    }

    pub fn function(&self) -> AggregateFunction {
        self.function
    }

    pub fn elements(&self) -> &[WeightedAtom] {
        &self.elements
    }

    pub fn op(&self) -> ComparisonOp {
        self.op
    }

    pub fn bound(&self) -> &BigInt {
        &self.bound
    }

    /// Same function and elements, different comparison.
    pub fn with_comparison(&self, op: ComparisonOp, bound: impl Into<BigInt>) -> Self {
        AggregateExpression {
            function: self.function,
            elements: self.elements.clone(),
            op,
            bound: bound.into(),
        }
    }
}

fn first_duplicate(elements: &[WeightedAtom]) -> Option<Atom> {
    let mut seen = BTreeSet::new();
    elements.iter().find(|e| !seen.insert(&e.atom)).map(|e| e.atom.clone())
}

/// The atoms occurring in the element list of `a`.
pub fn expression_atoms(a: &AggregateExpression) -> BTreeSet<Atom> {
    a.elements.iter().map(|e| e.atom.clone()).collect()
}

/// `h1 | ... | hm :- A1, ..., An.`
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Rule {
    head: BTreeSet<Atom>,
    body: Vec<AggregateExpression>,
}

impl Rule {
    pub fn new(head: impl IntoIterator<Item = Atom>, body: Vec<AggregateExpression>) -> Self {
        Rule {
            head: head.into_iter().collect(),
            body,
        }
    }

    pub fn fact(atom: Atom) -> Self {
        Rule::new([atom], Vec::new())
    }

    pub fn constraint(body: Vec<AggregateExpression>) -> Self {
        Rule::new([], body)
    }

    pub fn head(&self) -> &BTreeSet<Atom> {
        &self.head
    }

    pub fn body(&self) -> &[AggregateExpression] {
        &self.body
    }

    pub fn is_constraint(&self) -> bool {
        self.head.is_empty()
    }

    pub fn is_fact(&self) -> bool {
        self.body.is_empty()
    }

    pub fn is_non_disjunctive(&self) -> bool {
        self.head.len() <= 1
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Program {
    rules: Vec<Rule>,
    declared_atoms: BTreeSet<Atom>,
}

impl Program {
    pub fn new(rules: Vec<Rule>) -> Self {
        Program {
            rules,
            declared_atoms: BTreeSet::new(),
        }
    }

    pub fn with_declared(rules: Vec<Rule>, declared_atoms: BTreeSet<Atom>) -> Self {
        Program { rules, declared_atoms }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn declared_atoms(&self) -> &BTreeSet<Atom> {
        &self.declared_atoms
    }

    /// A copy of this program with `rule` appended.
    pub fn with_rule(&self, rule: Rule) -> Self {
        let mut rules = self.rules.clone();
        rules.push(rule);
        Program {
            rules,
            declared_atoms: self.declared_atoms.clone(),
        }
    }

    /// A copy keeping only the rules selected by `keep`; declarations are retained.
    pub fn filter_rules(&self, mut keep: impl FnMut(usize, &Rule) -> bool) -> Self {
        Program {
            rules: self
                .rules
                .iter()
                .enumerate()
                .filter(|(i, r)| keep(*i, r))
                .map(|(_, r)| r.clone())
                .collect(),
            declared_atoms: self.declared_atoms.clone(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

/// Declared atoms, head atoms and element atoms of every body expression.
pub fn program_atoms(p: &Program) -> BTreeSet<Atom> {
    let mut atoms = p.declared_atoms.clone();
    for rule in &p.rules {
        atoms.extend(rule.head.iter().cloned());
        for expr in &rule.body {
            atoms.extend(expr.elements.iter().map(|e| e.atom.clone()));
        }
    }
    atoms
}

pub fn is_non_disjunctive(p: &Program) -> bool {
    p.rules.iter().all(Rule::is_non_disjunctive)
}

/// A set of true atoms.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Interpretation(BTreeSet<Atom>);

impl Interpretation {
    pub fn new() -> Self {
        Interpretation(BTreeSet::new())
    }

    pub fn members(&self) -> &BTreeSet<Atom> {
        &self.0
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.0.contains(atom)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &Interpretation) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Atom> {
        self.0.iter()
    }

    /// Parses a comma separated list of atom names; the empty string is the empty set.
    pub fn parse_list(text: &str) -> Result<Self, SyntaxError> {
        let text = text.trim();
        let text = text.strip_prefix('{').and_then(|t| t.strip_suffix('}')).unwrap_or(text);
        text.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(Atom::new)
            .collect()
    }
}

impl FromIterator<Atom> for Interpretation {
    fn from_iter<T: IntoIterator<Item = Atom>>(iter: T) -> Self {
        Interpretation(iter.into_iter().collect())
    }
}

impl From<BTreeSet<Atom>> for Interpretation {
    fn from(set: BTreeSet<Atom>) -> Self {
        Interpretation(set)
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, atom) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{atom}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    /// Index of the offending rule in program order.
    pub rule: usize,
    pub message: String,
}

/// Structural checks. An empty result means the program is well formed.
pub fn validate(p: &Program) -> Vec<Diagnostic> {
    let mut diagnostics = Vec::new();
    for (i, rule) in p.rules.iter().enumerate() {
        for expr in &rule.body {
            if let Some(dup) = first_duplicate(&expr.elements) {
                diagnostics.push(Diagnostic {
                    severity: Severity::Error,
                    rule: i,
                    message: format!("atom `{dup}` occurs more than once in an aggregate"),
                });
            }
        }
        if let Some(first) = p.rules[..i].iter().position(|r| r == rule) {
            diagnostics.push(Diagnostic {
                severity: Severity::Warning,
                rule: i,
                message: format!("rule duplicates rule {}", first + 1),
            });
        }
    }
    diagnostics
}

/// Shorthand used across the crate's tests and the corpus builders.
pub fn atom(name: &str) -> Atom {
    Atom::new(name).expect("valid atom name")
}

pub fn interpretation<'a>(names: impl IntoIterator<Item = &'a str>) -> Interpretation {
    names.into_iter().map(atom).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sum(elems: &[(i64, &str)], op: ComparisonOp, bound: i64) -> AggregateExpression {
        AggregateExpression::new(
            AggregateFunction::Sum,
            elems.iter().map(|(w, a)| WeightedAtom::new(*w, atom(a))).collect(),
            op,
            bound,
        )
        .unwrap()
    }

    fn p1() -> Program {
        Program::new(vec![
            Rule::new([atom("p")], vec![sum(&[(1, "p"), (-1, "q")], ComparisonOp::Ge, 0)]),
            Rule::new([atom("p")], vec![sum(&[(1, "q")], ComparisonOp::Gt, 0)]),
            Rule::new([atom("q")], vec![sum(&[(1, "p")], ComparisonOp::Gt, 0)]),
        ])
    }

    #[test]
    fn atom_names() {
        assert!(Atom::new("o_ab").is_ok());
        assert!(Atom::new("x1").is_ok());
        assert!(Atom::new("X").is_err());
        assert!(Atom::new("1x").is_err());
        assert!(Atom::new("").is_err());
        assert!(Atom::new("a-b").is_err());
    }

    #[test]
    fn expression_atoms_examples() {
        let r1 = sum(&[(1, "p"), (-1, "q")], ComparisonOp::Ge, 0);
        assert_eq!(expression_atoms(&r1), [atom("p"), atom("q")].into());
        assert!(expression_atoms(&sum(&[], ComparisonOp::Ge, 0)).is_empty());
        let a3 = AggregateExpression::new(
            AggregateFunction::Avg,
            vec![
                WeightedAtom::new(1, atom("p1")),
                WeightedAtom::new(2, atom("p2")),
                WeightedAtom::new(3, atom("p3")),
                WeightedAtom::new(6, atom("p4")),
            ],
            ComparisonOp::Eq,
            2,
        )
        .unwrap();
        assert_eq!(expression_atoms(&a3).len(), 4);
    }

    #[test]
    fn duplicate_elements_rejected() {
        let err = AggregateExpression::new(
            AggregateFunction::Sum,
            vec![WeightedAtom::new(1, atom("p")), WeightedAtom::new(2, atom("p"))],
            ComparisonOp::Ge,
            0,
        )
        .unwrap_err();
        assert_eq!(err, SyntaxError::DuplicateElement(atom("p")));
    }

    #[test]
    fn program_atoms_and_disjunction() {
        assert_eq!(program_atoms(&p1()), [atom("p"), atom("q")].into());
        assert!(program_atoms(&Program::default()).is_empty());
        assert!(is_non_disjunctive(&p1()));
        assert!(is_non_disjunctive(&Program::default()));
        let disj = Program::new(vec![Rule::new([atom("p"), atom("q")], vec![])]);
        assert!(!is_non_disjunctive(&disj));
    }

    #[test]
    fn declared_atoms_extend_universe() {
        let p = Program::with_declared(vec![Rule::fact(atom("a"))], [atom("z")].into());
        assert_eq!(program_atoms(&p), [atom("a"), atom("z")].into());
    }

    #[test]
    fn validate_reports_duplicates() {
        assert!(validate(&p1()).is_empty());

        let bad = AggregateExpression::new_unchecked(
            AggregateFunction::Sum,
            vec![WeightedAtom::new(1, atom("p")), WeightedAtom::new(2, atom("p"))],
            ComparisonOp::Ge,
            0,
        );
        let diags = validate(&Program::new(vec![Rule::new([atom("q")], vec![bad])]));
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].severity, Severity::Error);

        let twice = Program::new(vec![Rule::fact(atom("q")), Rule::fact(atom("q"))]);
        let diags = validate(&twice);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].severity, Severity::Warning);
        assert_eq!(diags[0].rule, 1);
    }

    #[test]
    fn interpretation_display_and_parse() {
        let x = interpretation(["q", "p"]);
        assert_eq!(x.to_string(), "{p,q}");
        assert_eq!(Interpretation::parse_list("p, q").unwrap(), x);
        assert_eq!(Interpretation::parse_list("{p,q}").unwrap(), x);
        assert!(Interpretation::parse_list("").unwrap().is_empty());
        assert!(Interpretation::parse_list("P").is_err());
    }

    #[test]
    fn interpretation_order_is_lexicographic() {
        let a = interpretation(["a", "c"]);
        let b = interpretation(["b"]);
        assert!(a < b);
        assert!(Interpretation::new() < a);
    }
}
