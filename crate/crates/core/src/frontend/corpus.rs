//! The worked example programs, bundled as source text.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::parse_program;
use crate::syntax::Program;

const SOURCES: [(&str, &str); 13] = [
    ("P1", include_str!("../../corpus/P1.lp")),
    ("P1p", include_str!("../../corpus/P1p.lp")),
    ("P2", include_str!("../../corpus/P2.lp")),
    ("P3", include_str!("../../corpus/P3.lp")),
    ("P3p", include_str!("../../corpus/P3p.lp")),
    ("P4", include_str!("../../corpus/P4.lp")),
    ("P4p", include_str!("../../corpus/P4p.lp")),
    ("P5", include_str!("../../corpus/P5.lp")),
    ("P5p", include_str!("../../corpus/P5p.lp")),
    ("P6", include_str!("../../corpus/P6.lp")),
    ("P6p", include_str!("../../corpus/P6p.lp")),
    ("Psum", include_str!("../../corpus/Psum.lp")),
    ("Peq", include_str!("../../corpus/Peq.lp")),
];

/// Corpus names in their canonical order. A trailing `p` marks the primed
/// variant of a program.
pub const CORPUS_NAMES: [&str; 13] = [
    "P1", "P1p", "P2", "P3", "P3p", "P4", "P4p", "P5", "P5p", "P6", "P6p", "Psum", "Peq",
];

pub fn corpus_source(name: &str) -> Option<&'static str> {
    SOURCES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn corpus_program(name: &str) -> Option<Program> {
    corpus_source(name).map(|s| parse_program(s).expect("corpus programs parse"))
}

pub fn corpus() -> BTreeMap<&'static str, Program> {
    SOURCES
        .iter()
        .map(|(name, source)| (*name, parse_program(source).expect("corpus programs parse")))
        .collect()
}

/// P4 with the weight `w` of `c_ac` in the rule for `c_ab`; the bundled
/// `P4p` uses `w = 10`.
pub fn p4_prime(w: impl Into<BigInt>) -> Program {
    let source = format!(
        "o_ab.\no_ac.\no_bc.\n\
         c_ab :- sum{{80:o_ab, {}:c_ac}} > 50.\n\
         c_ac :- sum{{30:o_ac, 30:c_ab}} > 50.\n\
         c_bc :- sum{{30:o_bc, 30:c_ba}} > 50.\n",
        w.into()
    );
    parse_program(&source).expect("P4' template parses")
}
