use proptest::prelude::*;

use super::*;
use crate::syntax::{atom, validate, AggregateFunction, ComparisonOp, WeightedAtom};

fn sum(elems: &[(i64, &str)], op: ComparisonOp, bound: i64) -> AggregateExpression {
    AggregateExpression::new(
        AggregateFunction::Sum,
        elems.iter().map(|(w, a)| WeightedAtom::new(*w, atom(a))).collect(),
        op,
        bound,
    )
    .unwrap()
}

#[test]
fn parses_rule_r1() {
    let p = parse_program("p :- sum{1:p, -1:q} >= 0.").unwrap();
    let expected = Rule::new([atom("p")], vec![sum(&[(1, "p"), (-1, "q")], ComparisonOp::Ge, 0)]);
    assert_eq!(p.rules(), &[expected]);
}

#[test]
fn empty_source_is_empty_program() {
    assert_eq!(parse_program("").unwrap(), Program::default());
    assert_eq!(parse_program("  % only a comment\n").unwrap(), Program::default());
}

#[test]
fn missing_bound_fails_at_end() {
    let err = parse_program("p :- sum{1:p} >").unwrap_err();
    assert_eq!(
        err.span,
        SourceSpan {
            line: 1,
            column: 16,
            length: 0
        }
    );
    assert_eq!(err.expected, vec!["integer"]);
    assert!(err.message.contains("end of input"));
}

#[test]
fn duplicate_element_is_a_parse_error() {
    let err = parse_program("q :- sum{1:p, 2:p} > 0.").unwrap_err();
    assert_eq!(err.span.column, 15);
    assert!(err.message.contains("more than once"));
}

#[test]
fn statements_of_every_shape() {
    let src = "#universe r, s.\np | q.\n:- min{} < 3.\n.\nq :- max{2:p} = 2, avg{} != 0.\n";
    let parsed = parse_program_with_spans(src).unwrap();
    let p = &parsed.program;
    assert_eq!(p.declared_atoms().len(), 2);
    assert_eq!(p.rules().len(), 4);
    assert!(p.rules()[0].is_fact() && !p.rules()[0].is_non_disjunctive());
    assert!(p.rules()[1].is_constraint());
    assert!(p.rules()[2].is_constraint() && p.rules()[2].is_fact());
    assert_eq!(
        parsed.rule_spans[3],
        SourceSpan {
            line: 5,
            column: 1,
            length: 30
        }
    );
    assert_eq!(parsed.expression_spans[3].len(), 2);
    assert_eq!(render_program(p), src);
}

#[test]
fn keywords_are_valid_atoms() {
    let p = parse_program("sum :- sum{1:max} > 0.").unwrap();
    assert_eq!(p.rules()[0].head().iter().next().unwrap().name(), "sum");
}

#[test]
fn rejections() {
    for bad in [
        "p",
        "p :- .",
        "p :- sum{1:p} > 0",
        "p :- count{1:p} > 0.",
        "p :- sum{p} > 0.",
        "p :- sum{1:p} => 0.",
        "p :- sum{1:p,} > 0.",
        "#universe .",
        "P.",
        "p q.",
        "p :- sum{1:p} > 0 q.",
    ] {
        assert!(parse_program(bad).is_err(), "accepted {bad:?}");
    }
}

#[test]
fn expression_parser() {
    let a = parse_expression("times{0:p1,3:p2,-2:p3,-4:p4} = 8").unwrap();
    assert_eq!(a.function(), AggregateFunction::Times);
    assert_eq!(a.elements().len(), 4);
    assert!(parse_expression("sum{1:p} > 0.").is_err());
    assert_eq!(render_expression(&parse_expression("avg{} = 0").unwrap()), "avg{} = 0");
}

#[test]
fn renders_examples() {
    let p2 = corpus_program("P2").unwrap();
    assert_eq!(render_program(&p2), "p :- sum{1:p} > 0.\np :- sum{1:p} < 1.\n");
    assert_eq!(render_rule(&Rule::fact(atom("q"))), "q.");
    let r13 = Rule::constraint(vec![sum(&[(1, "p")], ComparisonOp::Lt, 1)]);
    assert_eq!(render_rule(&r13), ":- sum{1:p} < 1.");
}

#[test]
fn corpus_round_trips_and_validates() {
    let all = corpus();
    assert_eq!(all.len(), CORPUS_NAMES.len());
    for (name, p) in &all {
        assert!(validate(p).is_empty(), "{name}");
        assert_eq!(&parse_program(&render_program(p)).unwrap(), p, "{name}");
    }
    assert_eq!(all["P1"].rules().len(), 3);
    assert_eq!(all["P3"].rules().len(), 8);
    assert_eq!(p4_prime(10), all["P4p"]);
    assert_ne!(p4_prime(0), all["P4p"]);
}

#[test]
fn error_display_mentions_position() {
    let err = parse_program("p :-\n  sum{1:p} >").unwrap_err();
    assert_eq!(err.to_string(), "2:13: unexpected end of input (expected integer)");
}

proptest! {
    // Removing or duplicating one character either yields another valid
    // program that round-trips, or a positioned error; it never panics.
    #[test]
    fn mutations_never_panic(name in prop::sample::select(CORPUS_NAMES.to_vec()), pos in 0usize..400, dup in any::<bool>()) {
        let source = corpus_source(name).unwrap();
        let chars: Vec<char> = source.chars().collect();
        let pos = pos % chars.len();
        let mut mutated = chars.clone();
        if dup {
            mutated.insert(pos, chars[pos]);
        } else {
            mutated.remove(pos);
        }
        let text: String = mutated.into_iter().collect();
        match parse_program(&text) {
            Ok(p) => prop_assert_eq!(parse_program(&render_program(&p)).unwrap(), p),
            Err(e) => prop_assert!(e.span.line >= 1 && e.span.column >= 1 && !e.message.is_empty()),
        }
    }

    #[test]
    fn dropping_a_terminator_is_rejected(name in prop::sample::select(CORPUS_NAMES.to_vec())) {
        let source = corpus_source(name).unwrap();
        let stripped = source.trim_end().trim_end_matches('.');
        prop_assert!(parse_program(stripped).is_err());
    }
}
