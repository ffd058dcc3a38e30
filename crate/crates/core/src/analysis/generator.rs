use std::fmt;
use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::aggregate::{classify_syntactic, MonotonicityClass};
use crate::syntax::{atom, AggregateExpression, AggregateFunction, Atom, ComparisonOp, Program, Rule, WeightedAtom};

/// Which aggregate expressions a generated program may contain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Restriction {
    Arbitrary,
    Convex,
    Monotone,
    AntiMonotone,
}

impl Restriction {
    pub const ALL: [Restriction; 4] = [
        Restriction::Arbitrary,
        Restriction::Convex,
        Restriction::Monotone,
        Restriction::AntiMonotone,
    ];

    pub fn class(self) -> Option<MonotonicityClass> {
        match self {
            Restriction::Arbitrary => None,
            Restriction::Convex => Some(MonotonicityClass::Convex),
            Restriction::Monotone => Some(MonotonicityClass::Monotone),
            Restriction::AntiMonotone => Some(MonotonicityClass::AntiMonotone),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Restriction::Arbitrary => "arbitrary",
            Restriction::Convex => "convex",
            Restriction::Monotone => "monotone",
            Restriction::AntiMonotone => "anti_monotone",
        }
    }
}

impl fmt::Display for Restriction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Restriction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().replace('-', "_");
        Restriction::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown restriction '{s}' (expected arbitrary, convex, monotone or anti_monotone)"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorConfig {
    /// 1..=8
    pub atom_count: usize,
    /// 0..=10; each program gets between 1 and this many rules.
    pub rule_count: usize,
    /// 0..=3 expressions per body.
    pub max_body: usize,
    /// 0..=4 elements per expression.
    pub max_elements: usize,
    pub weight_range: RangeInclusive<i64>,
    pub bound_range: RangeInclusive<i64>,
    pub functions: Vec<AggregateFunction>,
    pub ops: Vec<ComparisonOp>,
    pub class_filter: Restriction,
    pub allow_constraints: bool,
    /// Body atoms only come after the head atom in a fixed order, which
    /// keeps the dependency graph acyclic.
    pub acyclic_only: bool,
    pub seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            atom_count: 4,
            rule_count: 5,
            max_body: 2,
            max_elements: 3,
            weight_range: -3..=3,
            bound_range: -4..=4,
            functions: AggregateFunction::ALL.to_vec(),
            ops: ComparisonOp::ALL.to_vec(),
            class_filter: Restriction::Arbitrary,
            allow_constraints: true,
            acyclic_only: false,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("{field} = {value} is outside {allowed}")]
    OutOfRange {
        field: &'static str,
        value: usize,
        allowed: &'static str,
    },
    #[error("{0} is empty")]
    Empty(&'static str),
    #[error("no allowed function, operator and sign combination is {0}")]
    NoTemplate(Restriction),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sign {
    Positive,
    Negative,
    Any,
}

/// A function/operator/sign combination whose members all pass the filter.
#[derive(Debug, Clone, Copy)]
struct Template {
    function: AggregateFunction,
    op: ComparisonOp,
    sign: Sign,
}

fn has(range: &RangeInclusive<i64>, sign: Sign) -> bool {
    match sign {
        Sign::Positive => *range.end() > 0,
        Sign::Negative => *range.start() < 0,
        Sign::Any => !range.is_empty(),
    }
}

fn sample(rng: &mut ChaCha8Rng, range: &RangeInclusive<i64>, sign: Sign) -> i64 {
    match sign {
        Sign::Positive => rng.gen_range((*range.start()).max(1)..=*range.end()),
        Sign::Negative => rng.gen_range(*range.start()..=(*range.end()).min(-1)),
        Sign::Any => rng.gen_range(range.clone()),
    }
}

fn fits(a: &AggregateExpression, filter: Option<MonotonicityClass>) -> bool {
    filter.is_none_or(|c| classify_syntactic(a).implies(c))
}

/// Checked generator state for one configuration.
struct Plan<'a> {
    cfg: &'a GeneratorConfig,
    atoms: Vec<Atom>,
    templates: Vec<Template>,
    /// Shortcuts `sum{1:p} op bound` usable under the config.
    simple: Vec<(ComparisonOp, i64)>,
}

impl<'a> Plan<'a> {
    fn new(cfg: &'a GeneratorConfig) -> Result<Self, GeneratorError> {
        let check = |field, value: usize, max: usize, allowed| {
            if (field == "atom_count" && value == 0) || value > max {
                Err(GeneratorError::OutOfRange { field, value, allowed })
            } else {
                Ok(())
            }
        };
        check("atom_count", cfg.atom_count, 8, "1..=8")?;
        check("rule_count", cfg.rule_count, 10, "0..=10")?;
        check("max_body", cfg.max_body, 3, "0..=3")?;
        check("max_elements", cfg.max_elements, 4, "0..=4")?;
        if cfg.weight_range.is_empty() {
            return Err(GeneratorError::Empty("weight_range"));
        }
        if cfg.bound_range.is_empty() {
            return Err(GeneratorError::Empty("bound_range"));
        }
        if cfg.functions.is_empty() {
            return Err(GeneratorError::Empty("functions"));
        }
        if cfg.ops.is_empty() {
            return Err(GeneratorError::Empty("ops"));
        }

        let filter = cfg.class_filter.class();
        let mut templates = Vec::new();
        // signs only matter under a filter
        let signs: &[Sign] = if filter.is_some() {
            &[Sign::Positive, Sign::Negative, Sign::Any]
        } else {
            &[Sign::Any]
        };
        for &function in &cfg.functions {
            for &op in &cfg.ops {
                for &sign in signs {
                    if !has(&cfg.weight_range, sign) || !has(&cfg.bound_range, sign) {
                        continue;
                    }
                    let (w, b) = match sign {
                        Sign::Positive => (1, 1),
                        Sign::Negative => (-1, -1),
                        Sign::Any => (0, 0),
                    };
                    let proto = AggregateExpression::new(function, vec![WeightedAtom::new(w, atom("a"))], op, b)
                        .expect("single element");
                    if fits(&proto, filter) {
                        templates.push(Template { function, op, sign });
                    }
                }
            }
        }
        if templates.is_empty() {
            return Err(GeneratorError::NoTemplate(cfg.class_filter));
        }

        let mut simple = Vec::new();
        if cfg.functions.contains(&AggregateFunction::Sum) && cfg.weight_range.contains(&1) && cfg.atom_count > 0 {
            let positive = if filter.is_some() {
                (ComparisonOp::Ge, 1)
            } else {
                (ComparisonOp::Gt, 0)
            };
            for (op, bound) in [positive, (ComparisonOp::Lt, 1)] {
                let e =
                    AggregateExpression::new(AggregateFunction::Sum, vec![WeightedAtom::new(1, atom("a"))], op, bound)
                        .expect("single element");
                if cfg.ops.contains(&op) && cfg.bound_range.contains(&bound) && fits(&e, filter) {
                    simple.push((op, bound));
                }
            }
        }

        let names = ["a", "b", "c", "d", "e", "f", "g", "h"];
        Ok(Plan {
            cfg,
            atoms: names[..cfg.atom_count].iter().map(|n| atom(n)).collect(),
            templates,
            simple,
        })
    }

    fn expression(&self, rng: &mut ChaCha8Rng, pool: &[Atom]) -> AggregateExpression {
        let filter = self.cfg.class_filter.class();
        if !self.simple.is_empty() && !pool.is_empty() && rng.gen_bool(0.3) {
            let (op, bound) = *self.simple.choose(rng).expect("non-empty");
            let p = pool.choose(rng).expect("non-empty").clone();
            return AggregateExpression::new(AggregateFunction::Sum, vec![WeightedAtom::new(1, p)], op, bound)
                .expect("single element");
        }
        loop {
            let t = *self.templates.choose(rng).expect("non-empty");
            let n = rng.gen_range(0..=self.cfg.max_elements.min(pool.len()));
            let chosen: Vec<&Atom> = pool.choose_multiple(rng, n).collect();
            let elements = chosen
                .into_iter()
                .map(|a| WeightedAtom::new(sample(rng, &self.cfg.weight_range, t.sign), a.clone()))
                .collect();
            let bound = sample(rng, &self.cfg.bound_range, t.sign);
            let e = AggregateExpression::new(t.function, elements, t.op, bound).expect("distinct atoms");
            if fits(&e, filter) {
                return e;
            }
        }
    }

    fn program(&self, index: u64) -> Program {
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let count = if self.cfg.rule_count == 0 {
            0
        } else {
            rng.gen_range(1..=self.cfg.rule_count)
        };
        let mut rules = Vec::with_capacity(count);
        for _ in 0..count {
            let constraint = self.cfg.allow_constraints && rng.gen_bool(0.15);
            let (head, pool): (Vec<Atom>, &[Atom]) = if constraint {
                (Vec::new(), &self.atoms)
            } else {
                let h = rng.gen_range(0..self.atoms.len());
                let pool = if self.cfg.acyclic_only {
                    &self.atoms[h + 1..]
                } else {
                    &self.atoms[..]
                };
                (vec![self.atoms[h].clone()], pool)
            };
            let body_len = rng.gen_range(0..=self.cfg.max_body);
            let body = (0..body_len).map(|_| self.expression(&mut rng, pool)).collect();
            rules.push(Rule::new(head, body));
        }
        Program::new(rules)
    }
}

/// The `index`-th program of the sequence determined by `cfg`.
pub fn generate_program(cfg: &GeneratorConfig, index: u64) -> Result<Program, GeneratorError> {
    Ok(Plan::new(cfg)?.program(index))
}

/// Programs `0..n` of the sequence determined by `cfg`.
pub fn generate_programs(cfg: &GeneratorConfig, n: usize) -> Result<Vec<Program>, GeneratorError> {
    let plan = Plan::new(cfg)?;
    Ok((0..n as u64).map(|i| plan.program(i)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{dependency_graph, is_acyclic};
    use crate::syntax::{is_non_disjunctive, program_atoms};

    #[test]
    fn deterministic() {
        let cfg = GeneratorConfig {
            seed: 1,
            ..Default::default()
        };
        assert_eq!(generate_program(&cfg, 0), generate_program(&cfg, 0));
        let several = generate_programs(&cfg, 20).unwrap();
        assert_ne!(several[0], several[1]);
    }

    #[test]
    fn respects_filters() {
        for restriction in [Restriction::Convex, Restriction::Monotone, Restriction::AntiMonotone] {
            let cfg = GeneratorConfig {
                class_filter: restriction,
                seed: 7,
                ..Default::default()
            };
            for p in generate_programs(&cfg, 200).unwrap() {
                for r in p.rules() {
                    for a in r.body() {
                        assert!(
                            classify_syntactic(a).implies(restriction.class().unwrap()),
                            "{restriction}: {a:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn respects_bounds() {
        let cfg = GeneratorConfig {
            atom_count: 2,
            rule_count: 2,
            ..Default::default()
        };
        for p in generate_programs(&cfg, 100).unwrap() {
            assert!(p.rules().len() <= 2);
            assert!(program_atoms(&p).len() <= 2);
            assert!(is_non_disjunctive(&p));
        }
        assert!(generate_programs(
            &GeneratorConfig {
                rule_count: 0,
                ..Default::default()
            },
            3
        )
        .unwrap()
        .iter()
        .all(Program::is_empty));
    }

    #[test]
    fn acyclic_mode() {
        let cfg = GeneratorConfig {
            acyclic_only: true,
            allow_constraints: false,
            seed: 3,
            ..Default::default()
        };
        for p in generate_programs(&cfg, 200).unwrap() {
            assert!(is_acyclic(&dependency_graph(&p)));
            assert!(p.rules().iter().all(|r| !r.is_constraint()));
        }
    }

    #[test]
    fn unsatisfiable_configs() {
        let only_ne = GeneratorConfig {
            class_filter: Restriction::Monotone,
            ops: vec![ComparisonOp::Ne],
            ..Default::default()
        };
        assert_eq!(
            generate_program(&only_ne, 0),
            Err(GeneratorError::NoTemplate(Restriction::Monotone))
        );
        let only_avg = GeneratorConfig {
            class_filter: Restriction::Convex,
            functions: vec![AggregateFunction::Avg],
            ..Default::default()
        };
        assert!(generate_program(&only_avg, 0).is_err());
        assert!(generate_program(
            &GeneratorConfig {
                atom_count: 9,
                ..Default::default()
            },
            0
        )
        .is_err());
        assert!(generate_program(
            &GeneratorConfig {
                atom_count: 0,
                ..Default::default()
            },
            0
        )
        .is_err());
        assert!(generate_program(
            &GeneratorConfig {
                ops: vec![],
                ..Default::default()
            },
            0
        )
        .is_err());
    }
}
