//! Answer-set semantics for propositional logic programs with aggregate
//! expressions.
//!
//! Programs are disjunctive rules whose bodies are conjunctions of
//! aggregate expressions `agg{w1:p1, ..., wn:pn} op bound`. The crate
//! parses and renders them, evaluates and classifies aggregates exactly,
//! computes answer sets under the FFLP, GZ, LPST, MR and DPB semantics by
//! brute force, and checks the containments between those semantics on
//! random programs.
//!
//! ```
//! use aggsem::frontend::parse_program;
//! use aggsem::semantics::{enumerate_answer_sets, EnumerateOptions, SemanticsId};
//!
//! let p = parse_program("p :- sum{1:p} >= 0.").unwrap();
//! let opts = EnumerateOptions::default();
//! assert_eq!(enumerate_answer_sets(SemanticsId::Lpst, &p, &opts).unwrap().len(), 1);
//! assert!(enumerate_answer_sets(SemanticsId::Gz, &p, &opts).unwrap().is_empty());
//! ```

pub mod aggregate;
pub mod analysis;
pub mod frontend;
pub mod parallel;
pub mod semantics;
pub mod syntax;

pub use parallel::Strategy;
