//! Dependency graphs, random programs and the differential harness that
//! checks the containments between the semantics.

mod generator;
mod graph;
mod harness;

pub use generator::{generate_program, generate_programs, GeneratorConfig, GeneratorError, Restriction};
pub use graph::{dependency_graph, is_acyclic, is_aggregate_stratified, DependencyGraph};
pub use harness::{
    answer_set_table, divergence_witnesses, expected_arcs, verify_programs, verify_relationships, AnswerSetTable,
    ArcReport, DivergenceMatrix, Refusal, RelationReport, Violation,
};

/// Generated programs over at most `atoms` atoms with at most `rules` rules.
#[cfg(test)]
pub(crate) fn arb_program(
    atoms: usize,
    rules: usize,
) -> impl proptest::strategy::Strategy<Value = crate::syntax::Program> {
    use proptest::prelude::*;
    any::<u64>().prop_map(move |seed| {
        let cfg = GeneratorConfig {
            atom_count: atoms,
            rule_count: rules,
            seed,
            ..Default::default()
        };
        generate_program(&cfg, 0).expect("default config is satisfiable")
    })
}
