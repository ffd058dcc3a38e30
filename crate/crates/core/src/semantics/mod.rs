//! The five answer-set semantics.
//!
//! FFLP answer sets are ⊆-minimal models of the reduct. GZ, LPST, MR and
//! DPB answer sets are models reconstructed as the least fixpoint of an
//! immediate consequence operator relative to the candidate. Everything is
//! brute force over the subsets of the program universe and runs on
//! bitmasks internally, which caps universes at 64 atoms (enumeration has a
//! lower default cap).

mod compiled;
mod operators;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::parallel::{self, Strategy};
use crate::syntax::{expression_atoms, program_atoms, AggregateExpression, Atom, Interpretation, Program};
use compiled::{full_mask, CompiledExpr, CompiledProgram, Mask, Universe};
use operators::DpbCutoff;

/// Default universe cap for enumeration and minimal models.
pub const DEFAULT_MAX_ATOMS: usize = 20;

/// Enumeration materializes every candidate; beyond this no override helps.
pub const HARD_MAX_ATOMS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SemanticsId {
    Fflp,
    Gz,
    Lpst,
    Mr,
    Dpb,
}

impl SemanticsId {
    pub const ALL: [SemanticsId; 5] = [
        SemanticsId::Fflp,
        SemanticsId::Gz,
        SemanticsId::Lpst,
        SemanticsId::Mr,
        SemanticsId::Dpb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SemanticsId::Fflp => "fflp",
            SemanticsId::Gz => "gz",
            SemanticsId::Lpst => "lpst",
            SemanticsId::Mr => "mr",
            SemanticsId::Dpb => "dpb",
        }
    }

    pub fn has_operator(self) -> bool {
        self != SemanticsId::Fflp
    }

    /// Parses a comma-separated list; `all` expands to the five semantics.
    /// Duplicates are dropped, order of first mention is kept.
    pub fn parse_list(text: &str) -> Result<Vec<SemanticsId>, UnknownSemantics> {
        let mut out = Vec::new();
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let items = if part.eq_ignore_ascii_case("all") {
                SemanticsId::ALL.to_vec()
            } else {
                vec![part.parse()?]
            };
            for s in items {
                if !out.contains(&s) {
                    out.push(s);
                }
            }
        }
        if out.is_empty() {
            return Err(UnknownSemantics(text.to_string()));
        }
        Ok(out)
    }
}

impl fmt::Display for SemanticsId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown semantics '{0}' (expected fflp, gz, lpst, mr, dpb or all)")]
pub struct UnknownSemantics(pub String);

impl FromStr for SemanticsId {
    type Err = UnknownSemantics;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SemanticsId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownSemantics(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("universe of {atoms} atoms exceeds the cap of {cap}")]
    UniverseTooLarge { atoms: usize, cap: usize },
    #[error("{0} semantics is only defined for non-disjunctive programs")]
    Disjunctive(SemanticsId),
    #[error("{0} semantics has no immediate consequence operator")]
    NoOperator(SemanticsId),
    #[error("atom {0} is not in the program universe")]
    UnknownAtom(Atom),
    #[error("{0} is not a model of the program")]
    NotAModel(Interpretation),
    #[error("{y} is not a subset of {x}")]
    NotSubset { y: Interpretation, x: Interpretation },
}

/// Successive stages `T↑0 = ∅, T↑1, ...` of the operator relative to a
/// candidate. When converged, the last two stages are equal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixpointTrace {
    pub semantics: SemanticsId,
    pub candidate: Interpretation,
    pub stages: Vec<Interpretation>,
    pub converged: bool,
}

impl FixpointTrace {
    pub fn fixpoint(&self) -> &Interpretation {
        self.stages.last().expect("a trace always holds the empty stage")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Index of a rule the candidate violates.
    NotAModel {
        rule: usize,
    },
    /// A proper subset of the candidate that models the reduct.
    SmallerModel {
        model: Interpretation,
    },
    Trace {
        trace: FixpointTrace,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckVerdict {
    pub semantics: SemanticsId,
    pub candidate: Interpretation,
    pub is_answer_set: bool,
    /// Why the candidate was rejected; for accepted candidates under an
    /// operator-based semantics, the reconstructing trace.
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchMode {
    #[default]
    All,
    /// Stop at the first answer set by cardinality, then lexicographic order.
    First,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerateOptions {
    pub max_atoms: usize,
    pub mode: SearchMode,
    pub strategy: Strategy,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            max_atoms: DEFAULT_MAX_ATOMS,
            mode: SearchMode::All,
            strategy: Strategy::default(),
        }
    }
}

fn compile(p: &Program, extra: &[&Interpretation]) -> Result<CompiledProgram, SemanticsError> {
    let atoms = program_atoms(p);
    for x in extra {
        if let Some(a) = x.iter().find(|a| !atoms.contains(*a)) {
            return Err(SemanticsError::UnknownAtom(a.clone()));
        }
    }
    CompiledProgram::new(p, Universe::new(atoms)?)
}

fn require_operator(s: SemanticsId, cp: &CompiledProgram) -> Result<(), SemanticsError> {
    if !s.has_operator() {
        return Err(SemanticsError::NoOperator(s));
    }
    if !cp.non_disjunctive {
        return Err(SemanticsError::Disjunctive(s));
    }
    Ok(())
}

/// The rules whose bodies `x` satisfies, in their original order.
pub fn reduct(p: &Program, x: &Interpretation) -> Program {
    p.filter_rules(|_, r| r.body().iter().all(|a| crate::aggregate::satisfies(x, a)))
}

pub fn is_model(x: &Interpretation, p: &Program) -> bool {
    violated_rule(x, p).is_none()
}

/// Index of the first rule `x` violates.
pub fn violated_rule(x: &Interpretation, p: &Program) -> Option<usize> {
    p.rules().iter().position(|r| {
        !r.head().iter().any(|a| x.contains(a)) && r.body().iter().all(|a| crate::aggregate::satisfies(x, a))
    })
}

/// All ⊆-minimal models of `p` whose atoms lie in `universe`, in
/// lexicographic order. The universe must contain every atom of `p`.
pub fn minimal_models(
    p: &Program,
    universe: &BTreeSet<Atom>,
    max_atoms: usize,
) -> Result<Vec<Interpretation>, SemanticsError> {
    let cap = max_atoms.min(HARD_MAX_ATOMS);
    if universe.len() > cap {
        return Err(SemanticsError::UniverseTooLarge {
            atoms: universe.len(),
            cap,
        });
    }
    if let Some(a) = program_atoms(p).into_iter().find(|a| !universe.contains(a)) {
        return Err(SemanticsError::UnknownAtom(a));
    }
    let cp = CompiledProgram::new(p, Universe::new(universe.clone())?)?;
    let n = universe.len();
    let size = 1usize << n;
    let model: Vec<bool> = (0..size).map(|m| cp.is_model(m as Mask)).collect();
    // below[m]: some proper subset of m is a model
    let mut below = vec![false; size];
    for m in 1..size {
        below[m] = compiled::bits(m as Mask).any(|i| {
            let sub = m & !(1 << i);
            model[sub] || below[sub]
        });
    }
    let mut out: Vec<Interpretation> = (0..size)
        .filter(|&m| model[m] && !below[m])
        .map(|m| cp.universe.interpretation(m as Mask))
        .collect();
    out.sort();
    Ok(out)
}

fn single_expression(a: &AggregateExpression) -> (Universe, CompiledExpr) {
    let universe = Universe::new(expression_atoms(a)).expect("expression with more than 64 atoms");
    let e = CompiledExpr::new(a, &universe).expect("expression atoms are in their own universe");
    (universe, e)
}

fn restricted(universe: &Universe, x: &Interpretation) -> Mask {
    x.iter().filter_map(|a| universe.index(a)).fold(0, |m, i| m | 1 << i)
}

/// `x ⊨ a` and `a` mentions the same atoms of `y` as of `x`.
///
/// # Panics
/// If `a` has more than 64 elements; the same holds for the other `sat_*`.
pub fn sat_gz(y: &Interpretation, x: &Interpretation, a: &AggregateExpression) -> bool {
    let (u, e) = single_expression(a);
    operators::gz_holds(&e, restricted(&u, y), restricted(&u, x))
}

/// Every `Z` with `y ⊆ Z ⊆ x` satisfies `a`; vacuously true when `y ⊄ x`.
/// Convex expressions are decided from `y` and `x` alone.
pub fn sat_lpst(y: &Interpretation, x: &Interpretation, a: &AggregateExpression) -> bool {
    if !y.is_subset(x) {
        return true;
    }
    let (u, e) = single_expression(a);
    operators::lpst_holds(&e, restricted(&u, y), restricted(&u, x))
}

/// [`sat_lpst`] without the convexity shortcut.
pub fn sat_lpst_exhaustive(y: &Interpretation, x: &Interpretation, a: &AggregateExpression) -> bool {
    if !y.is_subset(x) {
        return true;
    }
    let (u, e) = single_expression(a);
    operators::lpst_holds_exhaustive(&e, restricted(&u, y), restricted(&u, x))
}

/// `x ⊨ a` and some subset of `y` satisfies `a`.
pub fn sat_mr(y: &Interpretation, x: &Interpretation, a: &AggregateExpression) -> bool {
    let (u, e) = single_expression(a);
    operators::mr_holds(&e, restricted(&u, y), restricted(&u, x))
}

/// `T^s_{P,x}(y)`. Requires a non-disjunctive program, `y ⊆ x` and `x ⊨ p`.
pub fn operator_step(
    s: SemanticsId,
    p: &Program,
    x: &Interpretation,
    y: &Interpretation,
) -> Result<Interpretation, SemanticsError> {
    let cp = compile(p, &[x, y])?;
    require_operator(s, &cp)?;
    if !y.is_subset(x) {
        return Err(SemanticsError::NotSubset {
            y: y.clone(),
            x: x.clone(),
        });
    }
    let xm = cp.universe.mask(x)?;
    if !cp.is_model(xm) {
        return Err(SemanticsError::NotAModel(x.clone()));
    }
    let ym = cp.universe.mask(y)?;
    let next = cp.step(s, xm, ym, &cp.active_rules(xm), DpbCutoff::Exact);
    Ok(cp.universe.interpretation(next))
}

pub fn least_fixpoint(s: SemanticsId, p: &Program, x: &Interpretation) -> Result<FixpointTrace, SemanticsError> {
    let cp = compile(p, &[x])?;
    require_operator(s, &cp)?;
    let xm = cp.universe.mask(x)?;
    if !cp.is_model(xm) {
        return Err(SemanticsError::NotAModel(x.clone()));
    }
    Ok(trace(&cp, s, x, xm))
}

fn trace(cp: &CompiledProgram, s: SemanticsId, x: &Interpretation, xm: Mask) -> FixpointTrace {
    let (stages, converged) = cp.fixpoint_stages(s, xm);
    FixpointTrace {
        semantics: s,
        candidate: x.clone(),
        stages: stages.into_iter().map(|m| cp.universe.interpretation(m)).collect(),
        converged,
    }
}

/// Decides whether `x` is an `s`-answer set of `p`.
pub fn check(s: SemanticsId, p: &Program, x: &Interpretation) -> Result<CheckVerdict, SemanticsError> {
    let cp = compile(p, &[x])?;
    if s.has_operator() {
        require_operator(s, &cp)?;
    }
    let xm = cp.universe.mask(x)?;
    let verdict = |is_answer_set, witness| CheckVerdict {
        semantics: s,
        candidate: x.clone(),
        is_answer_set,
        witness: Some(witness),
    };
    if let Some(rule) = cp.violated_rule(xm) {
        return Ok(verdict(false, Witness::NotAModel { rule }));
    }
    if s == SemanticsId::Fflp {
        return Ok(match cp.smaller_reduct_model(xm) {
            Some(y) => verdict(
                false,
                Witness::SmallerModel {
                    model: cp.universe.interpretation(y),
                },
            ),
            None => CheckVerdict {
                semantics: s,
                candidate: x.clone(),
                is_answer_set: true,
                witness: None,
            },
        });
    }
    let trace = trace(&cp, s, x, xm);
    let ok = trace.converged && trace.fixpoint() == x;
    Ok(verdict(ok, Witness::Trace { trace }))
}

/// All `s`-answer sets of `p` over `program_atoms(p)`, in lexicographic
/// order; with [`SearchMode::First`], at most the first one by cardinality
/// then lexicographic order.
pub fn enumerate_answer_sets(
    s: SemanticsId,
    p: &Program,
    opts: &EnumerateOptions,
) -> Result<Vec<Interpretation>, SemanticsError> {
    let atoms = program_atoms(p);
    let cap = opts.max_atoms.min(HARD_MAX_ATOMS);
    if atoms.len() > cap {
        return Err(SemanticsError::UniverseTooLarge {
            atoms: atoms.len(),
            cap,
        });
    }
    let cp = CompiledProgram::new(p, Universe::new(atoms)?)?;
    if s.has_operator() {
        require_operator(s, &cp)?;
    }
    let n = cp.universe.len();
    match opts.mode {
        SearchMode::All => {
            let candidates: Vec<Mask> = (0..=full_mask(n)).collect();
            let found = parallel::filter_map(opts.strategy, &candidates, |&m| cp.is_answer_set(s, m).then_some(m));
            let mut out: Vec<Interpretation> = found.into_iter().map(|m| cp.universe.interpretation(m)).collect();
            out.sort();
            Ok(out)
        }
        SearchMode::First => {
            for k in 0..=n {
                let mut level: Vec<(Vec<usize>, Mask)> = (0..=full_mask(n))
                    .filter(|m| m.count_ones() as usize == k)
                    .map(|m| (compiled::bits(m).collect(), m))
                    .collect();
                level.sort();
                if let Some((_, m)) = parallel::find_first(opts.strategy, &level, |(_, m)| cp.is_answer_set(s, *m)) {
                    return Ok(vec![cp.universe.interpretation(*m)]);
                }
            }
            Ok(Vec::new())
        }
    }
}
