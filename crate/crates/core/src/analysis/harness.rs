use std::collections::BTreeMap;

use serde::Serialize;

use super::generator::{generate_programs, GeneratorConfig, GeneratorError, Restriction};
use crate::frontend::render_program;
use crate::parallel::{self, Strategy};
use crate::semantics::{enumerate_answer_sets, EnumerateOptions, SemanticsError, SemanticsId};
use crate::syntax::{Interpretation, Program};

/// A program on which an asserted containment fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub program_index: usize,
    /// Rendered source, ready to feed back to the parser.
    pub program: String,
    /// An answer set of `from` that is not one of `to`.
    pub interpretation: Interpretation,
}

/// Containment `from ⊆ to` of answer-set collections.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArcReport {
    pub from: SemanticsId,
    pub to: SemanticsId,
    /// Weakest restriction under which the containment is guaranteed.
    pub restriction: Restriction,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Refusal {
    pub program_index: usize,
    pub semantics: SemanticsId,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub restriction: Restriction,
    pub seed: u64,
    pub programs_tested: usize,
    pub arcs: Vec<ArcReport>,
    pub refusals: Vec<Refusal>,
}

impl RelationReport {
    pub fn violation_count(&self) -> usize {
        self.arcs.iter().map(|a| a.violations.len()).sum()
    }

    pub fn is_clean(&self) -> bool {
        self.violation_count() == 0
    }
}

/// The containments asserted for programs whose expressions all satisfy
/// `restriction`.
pub fn expected_arcs(restriction: Restriction) -> Vec<(SemanticsId, SemanticsId, Restriction)> {
    use SemanticsId::*;
    let mut arcs = vec![
        (Gz, Lpst, Restriction::Arbitrary),
        (Lpst, Dpb, Restriction::Arbitrary),
        (Lpst, Fflp, Restriction::Arbitrary),
        (Fflp, Mr, Restriction::Arbitrary),
    ];
    if restriction != Restriction::Arbitrary {
        // monotone and anti-monotone expressions are convex as well
        arcs.extend([
            (Mr, Lpst, Restriction::Convex),
            (Mr, Fflp, Restriction::Convex),
            (Fflp, Lpst, Restriction::Convex),
        ]);
    }
    if matches!(restriction, Restriction::Monotone | Restriction::AntiMonotone) {
        arcs.extend([
            (Dpb, Lpst, restriction),
            (Dpb, Fflp, restriction),
            (Dpb, Mr, restriction),
        ]);
    }
    arcs
}

/// Answer sets of `p` under each semantics.
pub type AnswerSetTable = BTreeMap<SemanticsId, Result<Vec<Interpretation>, SemanticsError>>;

pub fn answer_set_table(p: &Program, opts: &EnumerateOptions) -> AnswerSetTable {
    SemanticsId::ALL
        .into_iter()
        .map(|s| (s, enumerate_answer_sets(s, p, opts)))
        .collect()
}

/// Generates `n` programs from `cfg` and checks every containment of
/// [`expected_arcs`] for `cfg.class_filter` on each of them.
pub fn verify_relationships(
    cfg: &GeneratorConfig,
    n: usize,
    strategy: Strategy,
) -> Result<RelationReport, GeneratorError> {
    let programs = generate_programs(cfg, n)?;
    verify_programs(&programs, cfg.class_filter, cfg.seed, strategy)
}

/// [`verify_relationships`] on given programs, assumed to satisfy `restriction`.
pub fn verify_programs(
    programs: &[Program],
    restriction: Restriction,
    seed: u64,
    strategy: Strategy,
) -> Result<RelationReport, GeneratorError> {
    let inner = EnumerateOptions {
        strategy: Strategy::Sequential,
        ..Default::default()
    };
    let indexed: Vec<(usize, &Program)> = programs.iter().enumerate().collect();
    let tables = parallel::map(strategy, &indexed, |(_, p)| answer_set_table(p, &inner));

    let mut arcs: Vec<ArcReport> = expected_arcs(restriction)
        .into_iter()
        .map(|(from, to, restriction)| ArcReport {
            from,
            to,
            restriction,
            violations: Vec::new(),
        })
        .collect();
    let mut refusals = Vec::new();
    for ((index, program), table) in indexed.iter().zip(&tables) {
        for (s, result) in table {
            if let Err(e) = result {
                refusals.push(Refusal {
                    program_index: *index,
                    semantics: *s,
                    reason: e.to_string(),
                });
            }
        }
        for arc in &mut arcs {
            let (Ok(from), Ok(to)) = (&table[&arc.from], &table[&arc.to]) else {
                continue;
            };
            for x in from.iter().filter(|x| !to.contains(x)) {
                arc.violations.push(Violation {
                    program_index: *index,
                    program: render_program(program),
                    interpretation: x.clone(),
                });
            }
        }
    }
    Ok(RelationReport {
        restriction,
        seed,
        programs_tested: programs.len(),
        arcs,
        refusals,
    })
}

/// For every ordered pair `(s1, s2)`, the answer sets of `s1` that are not
/// answer sets of `s2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivergenceMatrix {
    pub answer_sets: AnswerSetTable,
    pub cells: BTreeMap<(SemanticsId, SemanticsId), Result<Vec<Interpretation>, SemanticsError>>,
}

impl DivergenceMatrix {
    pub fn cell(&self, from: SemanticsId, to: SemanticsId) -> &Result<Vec<Interpretation>, SemanticsError> {
        &self.cells[&(from, to)]
    }
}

pub fn divergence_witnesses(p: &Program, opts: &EnumerateOptions) -> DivergenceMatrix {
    let answer_sets = answer_set_table(p, opts);
    let mut cells = BTreeMap::new();
    for from in SemanticsId::ALL {
        for to in SemanticsId::ALL {
            let cell = match (&answer_sets[&from], &answer_sets[&to]) {
                (Err(e), _) | (_, Err(e)) => Err(e.clone()),
                (Ok(a), Ok(b)) => Ok(a.iter().filter(|x| !b.contains(x)).cloned().collect()),
            };
            cells.insert((from, to), cell);
        }
    }
    DivergenceMatrix { answer_sets, cells }
}
