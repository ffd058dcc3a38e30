use std::fmt::Write as _;

use aggsem::aggregate::{
    classify_exact, classify_syntactic, feasible_bounds, is_satisfiable, Bounds, MonotonicityClass,
    DEFAULT_CLASSIFY_CAP,
};
use aggsem::analysis::{
    dependency_graph, divergence_witnesses, is_acyclic, is_aggregate_stratified, verify_relationships, GeneratorConfig,
};
use aggsem::frontend::{
    corpus_source, parse_expression, render_expression, render_rule, ParsedProgram, SourceSpan, CORPUS_NAMES,
};
use aggsem::semantics::{
    check as check_candidate, enumerate_answer_sets, EnumerateOptions, SearchMode, SemanticsError, SemanticsId,
    Witness, DEFAULT_MAX_ATOMS, HARD_MAX_ATOMS,
};
use aggsem::syntax::{program_atoms, AggregateExpression, ComparisonOp, Interpretation};
use serde::Serialize;
use serde_json::{json, Value};

use crate::source::{Failure, Source};
use crate::{CheckArgs, ClassifyArgs, CompareArgs, CorpusArgs, Format, FuzzArgs, GraphArgs, SolveArgs};

const SUCCESS: u8 = 0;
const NEGATIVE: u8 = 1;
const REFUSED: u8 = 2;

/// Everything one invocation prints; the format picks `text` or `document`.
pub struct Output {
    pub document: Value,
    pub text: String,
    pub status: u8,
    pub warnings: Vec<String>,
}

fn document(command: &str, inputs: Value, results: impl Serialize) -> Result<Value, Failure> {
    let results =
        serde_json::to_value(results).map_err(|e| Failure::new(format!("cannot serialize the report: {e}")))?;
    Ok(json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "inputs": inputs,
        "results": results,
    }))
}

#[derive(Serialize)]
struct ErrorInfo {
    message: String,
    span: Option<SourceSpan>,
}

impl ErrorInfo {
    /// Disjunctive refusals point at the first disjunctive rule.
    fn from_semantics(e: &SemanticsError, parsed: &ParsedProgram) -> Self {
        let span = match e {
            SemanticsError::Disjunctive(_) => parsed
                .program
                .rules()
                .iter()
                .position(|r| !r.is_non_disjunctive())
                .map(|i| parsed.rule_spans[i]),
            _ => None,
        };
        ErrorInfo {
            message: e.to_string(),
            span,
        }
    }

    fn text(&self) -> String {
        match self.span {
            Some(span) => format!("{span}: {}", self.message),
            None => self.message.clone(),
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn join_sets(sets: &[Interpretation]) -> String {
    if sets.is_empty() {
        return "none".to_string();
    }
    sets.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn universe_cap(requested: Option<usize>, warnings: &mut Vec<String>) -> usize {
    let cap = requested.unwrap_or(DEFAULT_MAX_ATOMS);
    if cap > DEFAULT_MAX_ATOMS {
        warnings.push(format!(
            "--max-atoms {cap} exceeds the default of {DEFAULT_MAX_ATOMS}; exponential work in the universe size"
        ));
    }
    if cap > HARD_MAX_ATOMS {
        warnings.push(format!("--max-atoms is limited to {HARD_MAX_ATOMS}"));
    }
    cap
}

#[derive(Serialize)]
struct SemanticsResult {
    semantics: SemanticsId,
    answer_sets: Option<Vec<Interpretation>>,
    error: Option<ErrorInfo>,
}

fn answer_set_results(
    semantics: &[SemanticsId],
    parsed: &ParsedProgram,
    opts: &EnumerateOptions,
) -> Vec<SemanticsResult> {
    semantics
        .iter()
        .map(|&s| match enumerate_answer_sets(s, &parsed.program, opts) {
            Ok(sets) => SemanticsResult {
                semantics: s,
                answer_sets: Some(sets),
                error: None,
            },
            Err(e) => SemanticsResult {
                semantics: s,
                answer_sets: None,
                error: Some(ErrorInfo::from_semantics(&e, parsed)),
            },
        })
        .collect()
}

fn write_results(text: &mut String, results: &[SemanticsResult]) {
    for r in results {
        let _ = match (&r.answer_sets, &r.error) {
            (Some(sets), _) => writeln!(text, "{}: {}", r.semantics, join_sets(sets)),
            (None, Some(e)) => writeln!(text, "{}: refused: {}", r.semantics, e.text()),
            (None, None) => Ok(()),
        };
    }
}

pub fn solve(args: &SolveArgs) -> Result<Output, Failure> {
    let source = Source::read(&args.file)?;
    let parsed = source.parse()?;
    let mut warnings = Vec::new();
    let max_atoms = universe_cap(args.max_atoms, &mut warnings);
    let mode = if args.first { SearchMode::First } else { SearchMode::All };
    let opts = EnumerateOptions {
        max_atoms,
        mode,
        ..Default::default()
    };
    let results = answer_set_results(&args.semantics.0, &parsed, &opts);

    let status = if results.iter().any(|r| r.error.is_some()) {
        REFUSED
    } else if results
        .iter()
        .any(|r| r.answer_sets.as_ref().is_some_and(Vec::is_empty))
    {
        NEGATIVE
    } else {
        SUCCESS
    };
    let mut text = String::new();
    write_results(&mut text, &results);
    let inputs = json!({
        "file": source.name,
        "semantics": args.semantics.0,
        "max_atoms": max_atoms,
        "mode": if args.first { "first" } else { "all" },
    });
    Ok(Output {
        document: document("solve", inputs, &results)?,
        text,
        status,
        warnings,
    })
}

#[derive(Serialize)]
struct CheckResult {
    semantics: SemanticsId,
    is_answer_set: Option<bool>,
    witness: Option<Witness>,
    error: Option<ErrorInfo>,
}

pub fn check(args: &CheckArgs) -> Result<Output, Failure> {
    let source = Source::read(&args.file)?;
    let parsed = source.parse()?;
    let candidate = Interpretation::parse_list(&args.model).map_err(|e| Failure::new(format!("--model: {e}")))?;
    let universe = program_atoms(&parsed.program);
    if let Some(a) = candidate.iter().find(|a| !universe.contains(*a)) {
        return Err(Failure::new(format!(
            "--model: atom {a} is not in the universe of {}",
            source.name
        )));
    }

    let results: Vec<CheckResult> = args
        .semantics
        .0
        .iter()
        .map(|&s| match check_candidate(s, &parsed.program, &candidate) {
            Ok(v) => CheckResult {
                semantics: s,
                is_answer_set: Some(v.is_answer_set),
                witness: v.witness,
                error: None,
            },
            Err(e) => CheckResult {
                semantics: s,
                is_answer_set: None,
                witness: None,
                error: Some(ErrorInfo::from_semantics(&e, &parsed)),
            },
        })
        .collect();

    let mut text = String::new();
    for r in &results {
        let Some(accepted) = r.is_answer_set else {
            if let Some(e) = &r.error {
                let _ = writeln!(text, "{}: refused: {}", r.semantics, e.text());
            }
            continue;
        };
        let _ = writeln!(text, "{}: {}", r.semantics, yes_no(accepted));
        match &r.witness {
            Some(Witness::NotAModel { rule }) => {
                let _ = writeln!(
                    text,
                    "  not a model: violates rule at {}: {}",
                    parsed.rule_spans[*rule],
                    render_rule(&parsed.program.rules()[*rule])
                );
            }
            Some(Witness::SmallerModel { model }) => {
                let _ = writeln!(text, "  smaller model of the reduct: {model}");
            }
            Some(Witness::Trace { trace }) => {
                let stages: Vec<String> = trace.stages.iter().map(ToString::to_string).collect();
                let _ = writeln!(text, "  trace: {}", stages.join(" -> "));
                if !accepted {
                    let _ = writeln!(text, "  stalls at {}", trace.fixpoint());
                }
            }
            None => {}
        }
    }
    let status = if results.iter().any(|r| r.error.is_some()) {
        REFUSED
    } else if results.iter().all(|r| r.is_answer_set == Some(true)) {
        SUCCESS
    } else {
        NEGATIVE
    };
    let inputs = json!({
        "file": source.name,
        "model": candidate,
        "semantics": args.semantics.0,
    });
    Ok(Output {
        document: document("check", inputs, &results)?,
        text,
        status,
        warnings: Vec::new(),
    })
}

#[derive(Serialize)]
struct BoundCheck {
    bound: i64,
    satisfiable: bool,
}

#[derive(Serialize)]
struct Classification {
    expression: String,
    span: Option<SourceSpan>,
    syntactic: MonotonicityClass,
    exact: Option<MonotonicityClass>,
    exact_skipped: Option<String>,
    bounds: Bounds,
    satisfiable: bool,
    bound_checks: Vec<BoundCheck>,
}

fn classify_one(a: &AggregateExpression, span: Option<SourceSpan>, cap: usize, bounds: &[i64]) -> Classification {
    let (exact, exact_skipped) = match classify_exact(a, cap) {
        Ok(c) => (Some(c), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Classification {
        expression: render_expression(a),
        span,
        syntactic: classify_syntactic(a),
        exact,
        exact_skipped,
        bounds: feasible_bounds(a),
        satisfiable: is_satisfiable(a),
        bound_checks: bounds
            .iter()
            .map(|&k| BoundCheck {
                bound: k,
                satisfiable: is_satisfiable(&a.with_comparison(ComparisonOp::Eq, k)),
            })
            .collect(),
    }
}

pub fn classify(args: &ClassifyArgs) -> Result<Output, Failure> {
    let mut warnings = Vec::new();
    let cap = args.max_atoms.unwrap_or(DEFAULT_CLASSIFY_CAP);
    if cap > DEFAULT_CLASSIFY_CAP {
        warnings.push(format!(
            "--max-atoms {cap} exceeds the default of {DEFAULT_CLASSIFY_CAP}; exponential work in the expression size"
        ));
    }
    let bounds = args.bound.as_ref().map_or(&[][..], |b| &b.0[..]);

    let (name, expressions) = match &args.file {
        Some(path) => {
            let source = Source::read(path)?;
            let parsed = source.parse()?;
            let expressions: Vec<(AggregateExpression, Option<SourceSpan>)> = parsed
                .program
                .rules()
                .iter()
                .zip(&parsed.expression_spans)
                .flat_map(|(rule, spans)| rule.body().iter().cloned().zip(spans.iter().copied().map(Some)))
                .collect();
            (Some(source.name), expressions)
        }
        None => {
            let mut expressions = Vec::new();
            for text in &args.expr {
                let a = parse_expression(text).map_err(|e| Source::inline("--expr", text).parse_failure(&e))?;
                expressions.push((a, None));
            }
            (None, expressions)
        }
    };
    let results: Vec<Classification> = expressions
        .iter()
        .map(|(a, span)| classify_one(a, *span, cap, bounds))
        .collect();

    let mut text = String::new();
    for c in &results {
        let _ = match c.span {
            Some(span) => writeln!(text, "{span}: {}", c.expression),
            None => writeln!(text, "{}", c.expression),
        };
        let _ = writeln!(text, "  syntactic: {}", c.syntactic);
        let _ = match (&c.exact, &c.exact_skipped) {
            (Some(exact), _) => writeln!(text, "  exact: {exact}"),
            (None, Some(reason)) => writeln!(text, "  exact: skipped ({reason})"),
            (None, None) => Ok(()),
        };
        let _ = writeln!(text, "  bounds: ({}, {})", c.bounds.lower, c.bounds.upper);
        let _ = writeln!(text, "  satisfiable: {}", yes_no(c.satisfiable));
        for b in &c.bound_checks {
            let _ = writeln!(text, "  = {}: {}", b.bound, yes_no(b.satisfiable));
        }
    }
    let inputs = json!({
        "file": name,
        "expressions": args.expr,
        "bounds": bounds,
        "max_atoms": cap,
    });
    Ok(Output {
        document: document("classify", inputs, &results)?,
        text,
        status: SUCCESS,
        warnings,
    })
}

#[derive(Serialize)]
struct Difference {
    from: SemanticsId,
    to: SemanticsId,
    /// Answer sets of `from` that are not answer sets of `to`.
    sets: Option<Vec<Interpretation>>,
    error: Option<ErrorInfo>,
}

#[derive(Serialize)]
struct Comparison {
    answer_sets: Vec<SemanticsResult>,
    differences: Vec<Difference>,
}

pub fn compare(args: &CompareArgs) -> Result<Output, Failure> {
    let source = Source::read(&args.file)?;
    let parsed = source.parse()?;
    let mut warnings = Vec::new();
    let max_atoms = universe_cap(args.max_atoms, &mut warnings);
    let opts = EnumerateOptions {
        max_atoms,
        ..Default::default()
    };
    let matrix = divergence_witnesses(&parsed.program, &opts);
    let answer_sets = SemanticsId::ALL
        .iter()
        .map(|s| match &matrix.answer_sets[s] {
            Ok(sets) => SemanticsResult {
                semantics: *s,
                answer_sets: Some(sets.clone()),
                error: None,
            },
            Err(e) => SemanticsResult {
                semantics: *s,
                answer_sets: None,
                error: Some(ErrorInfo::from_semantics(e, &parsed)),
            },
        })
        .collect::<Vec<_>>();
    let mut differences = Vec::new();
    for from in SemanticsId::ALL {
        for to in SemanticsId::ALL.into_iter().filter(|to| *to != from) {
            let (sets, error) = match matrix.cell(from, to) {
                Ok(sets) => (Some(sets.clone()), None),
                Err(e) => (None, Some(ErrorInfo::from_semantics(e, &parsed))),
            };
            differences.push(Difference { from, to, sets, error });
        }
    }

    let mut text = String::new();
    write_results(&mut text, &answer_sets);
    let divergent: Vec<&Difference> = differences
        .iter()
        .filter(|d| d.sets.as_ref().is_some_and(|s| !s.is_empty()))
        .collect();
    if divergent.is_empty() {
        text.push_str("no differences\n");
    }
    for d in divergent {
        let sets = d.sets.as_deref().unwrap_or_default();
        let _ = writeln!(text, "{} not {}: {}", d.from, d.to, join_sets(sets));
    }
    let inputs = json!({ "file": source.name, "max_atoms": max_atoms });
    let results = Comparison {
        answer_sets,
        differences,
    };
    Ok(Output {
        document: document("compare", inputs, &results)?,
        text,
        status: SUCCESS,
        warnings,
    })
}

pub fn graph(args: &GraphArgs, format: Format) -> Result<Output, Failure> {
    let source = Source::read(&args.file)?;
    let parsed = source.parse()?;
    let g = dependency_graph(&parsed.program);
    let dot = g.to_dot();
    let acyclic = is_acyclic(&g);
    let stratified = is_aggregate_stratified(&parsed.program);

    let mut text = format!(
        "vertices: {}\nedges: {}\nacyclic: {}\nstratified: {}\n",
        g.vertices.len(),
        g.edges.len(),
        yes_no(acyclic),
        yes_no(stratified)
    );
    match args.dot.as_deref() {
        Some("-") if format == Format::Json => {
            return Err(Failure::new(
                "--dot - conflicts with --format json; the document already holds the graph",
            ));
        }
        Some("-") => text.push_str(&dot),
        Some(path) => {
            std::fs::write(path, &dot).map_err(|e| Failure::new(format!("cannot write {path}: {e}")))?;
        }
        None => {}
    }
    let inputs = json!({ "file": source.name, "dot": args.dot });
    let results = json!({
        "vertices": g.vertices,
        "edges": g.edges,
        "acyclic": acyclic,
        "stratified": stratified,
        "dot": dot,
    });
    Ok(Output {
        document: document("graph", inputs, results)?,
        text,
        status: SUCCESS,
        warnings: Vec::new(),
    })
}

pub fn fuzz(args: &FuzzArgs) -> Result<Output, Failure> {
    let cfg = GeneratorConfig {
        atom_count: args.atoms,
        rule_count: args.rules,
        class_filter: args.restriction,
        allow_constraints: !args.no_constraints,
        acyclic_only: args.acyclic,
        seed: args.seed,
        ..Default::default()
    };
    let report = verify_relationships(&cfg, args.count, aggsem::Strategy::default())
        .map_err(|e| Failure::new(format!("generator: {e}")))?;

    let mut text = format!(
        "restriction: {}\nseed: {}\nprograms: {}\n",
        report.restriction, report.seed, report.programs_tested
    );
    for arc in &report.arcs {
        let verdict = match arc.violations.len() {
            0 => "ok".to_string(),
            n => format!("{n} violations"),
        };
        let _ = writeln!(text, "{} in {} ({}): {verdict}", arc.from, arc.to, arc.restriction);
        for v in &arc.violations {
            let _ = writeln!(text, "  program {}: {}", v.program_index, v.interpretation);
            for line in v.program.lines() {
                let _ = writeln!(text, "    {line}");
            }
        }
    }
    let _ = writeln!(text, "refusals: {}", report.refusals.len());
    for r in &report.refusals {
        let _ = writeln!(
            text,
            "  program {} under {}: {}",
            r.program_index, r.semantics, r.reason
        );
    }
    let inputs = json!({
        "seed": args.seed,
        "count": args.count,
        "restriction": args.restriction,
        "atoms": args.atoms,
        "rules": args.rules,
        "acyclic": args.acyclic,
        "constraints": !args.no_constraints,
    });
    Ok(Output {
        status: if report.is_clean() { SUCCESS } else { NEGATIVE },
        document: document("fuzz", inputs, &report)?,
        text,
        warnings: Vec::new(),
    })
}

pub fn corpus(args: &CorpusArgs) -> Result<Output, Failure> {
    let Some(name) = &args.name else {
        let text = CORPUS_NAMES.iter().map(|n| format!("{n}\n")).collect();
        return Ok(Output {
            document: document("corpus", json!({ "name": null }), json!({ "names": CORPUS_NAMES }))?,
            text,
            status: SUCCESS,
            warnings: Vec::new(),
        });
    };
    let source = corpus_source(name).ok_or_else(|| {
        Failure::new(format!(
            "no corpus program named {name} (available: {})",
            CORPUS_NAMES.join(", ")
        ))
    })?;
    Ok(Output {
        document: document("corpus", json!({ "name": name }), json!({ "source": source }))?,
        text: source.to_string(),
        status: SUCCESS,
        warnings: Vec::new(),
    })
}
