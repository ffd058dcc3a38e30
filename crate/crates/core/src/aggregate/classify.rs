use std::fmt;

use num_traits::Signed;
use serde::Serialize;
use thiserror::Error;

use super::value::satisfies;
use crate::syntax::{AggregateExpression, AggregateFunction, ComparisonOp, Interpretation};

pub const DEFAULT_CLASSIFY_CAP: usize = 16;

/// How satisfaction of an expression behaves as atoms are added.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MonotonicityClass {
    Monotone,
    AntiMonotone,
    /// Both monotone and anti-monotone.
    Constant,
    Convex,
    NonConvex,
}

impl MonotonicityClass {
    pub fn is_monotone(self) -> bool {
        matches!(self, MonotonicityClass::Monotone | MonotonicityClass::Constant)
    }

    pub fn is_anti_monotone(self) -> bool {
        matches!(self, MonotonicityClass::AntiMonotone | MonotonicityClass::Constant)
    }

    pub fn is_convex(self) -> bool {
        self != MonotonicityClass::NonConvex
    }

    /// Whether every expression of class `self` also has property `other`.
    pub fn implies(self, other: MonotonicityClass) -> bool {
        match other {
            MonotonicityClass::Monotone => self.is_monotone(),
            MonotonicityClass::AntiMonotone => self.is_anti_monotone(),
            MonotonicityClass::Constant => self == MonotonicityClass::Constant,
            MonotonicityClass::Convex => self.is_convex(),
            MonotonicityClass::NonConvex => true,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MonotonicityClass::Monotone => "monotone",
            MonotonicityClass::AntiMonotone => "anti_monotone",
            MonotonicityClass::Constant => "constant",
            MonotonicityClass::Convex => "convex",
            MonotonicityClass::NonConvex => "non_convex",
        }
    }
}

impl fmt::Display for MonotonicityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Sign restriction on weights and bound together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SignRestriction {
    Positive,
    Negative,
    Unrestricted,
}

pub fn sign_restriction(a: &AggregateExpression) -> SignRestriction {
    let weights = a.elements().iter().map(|e| &e.weight);
    if a.bound().is_positive() && weights.clone().all(|w| w.is_positive()) {
        SignRestriction::Positive
    } else if a.bound().is_negative() && weights.clone().all(|w| w.is_negative()) {
        SignRestriction::Negative
    } else {
        SignRestriction::Unrestricted
    }
}

/// Class of the family the expression belongs to in the standard
/// function/sign/operator taxonomy. Sound but not complete: a family in the
/// non-convex block may still contain convex members.
pub fn classify_syntactic(a: &AggregateExpression) -> MonotonicityClass {
    use AggregateFunction::*;
    use ComparisonOp::*;
    use MonotonicityClass::*;
    use SignRestriction::*;

    // (increasing outcome, decreasing outcome) under a growing interpretation
    let direction = match (a.function(), sign_restriction(a)) {
        (Sum, Positive) | (Times, Positive) | (Max, _) => Some(true),
        (Sum, Negative) | (Min, _) => Some(false),
        _ => None,
    };
    match (direction, a.op()) {
        (None, _) | (_, Ne) => NonConvex,
        (Some(_), Eq) => Convex,
        (Some(true), Gt | Ge) | (Some(false), Lt | Le) => Monotone,
        (Some(true), Lt | Le) | (Some(false), Gt | Ge) => AntiMonotone,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("exact classification over {atoms} atoms exceeds the cap of {cap}")]
pub struct CapExceeded {
    pub atoms: usize,
    pub cap: usize,
}

/// Brute-force classification over all subsets of the expression's atoms.
pub fn classify_exact(a: &AggregateExpression, cap: usize) -> Result<MonotonicityClass, CapExceeded> {
    let n = a.elements().len();
    if n > cap || n >= 32 {
        return Err(CapExceeded { atoms: n, cap });
    }
    let size = 1usize << n;
    let sat: Vec<bool> = (0..size)
        .map(|mask| {
            let x: Interpretation = a
                .elements()
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, e)| e.atom.clone())
                .collect();
            satisfies(&x, a)
        })
        .collect();
    Ok(classify_truth_table(&sat, n))
}

/// Classifies a satisfaction table indexed by subset bitmask over `n` atoms.
fn classify_truth_table(sat: &[bool], n: usize) -> MonotonicityClass {
    let size = 1usize << n;
    let mut monotone = true;
    let mut anti = true;
    for mask in 0..size {
        if !sat[mask] {
            continue;
        }
        for bit in 0..n {
            let flipped = mask ^ (1 << bit);
            if sat[flipped] {
                continue;
            }
            if mask & (1 << bit) == 0 {
                monotone = false;
            } else {
                anti = false;
            }
        }
    }
    match (monotone, anti) {
        (true, true) => return MonotonicityClass::Constant,
        (true, false) => return MonotonicityClass::Monotone,
        (false, true) => return MonotonicityClass::AntiMonotone,
        (false, false) => {}
    }

    // convex iff the satisfying sets equal (upward closure) ∩ (downward closure)
    let mut up = sat.to_vec();
    let mut down = sat.to_vec();
    for bit in 0..n {
        for mask in 0..size {
            if mask & (1 << bit) != 0 {
                up[mask] |= up[mask ^ (1 << bit)];
            } else {
                down[mask] |= down[mask | (1 << bit)];
            }
        }
    }
    let convex = (0..size).all(|m| sat[m] == (up[m] && down[m]));
    if convex {
        MonotonicityClass::Convex
    } else {
        MonotonicityClass::NonConvex
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{atom, WeightedAtom};

    fn expr(function: AggregateFunction, weights: &[i64], op: ComparisonOp, bound: i64) -> AggregateExpression {
        AggregateExpression::new(
            function,
            weights
                .iter()
                .enumerate()
                .map(|(i, w)| WeightedAtom::new(*w, atom(&format!("p{}", i + 1))))
                .collect(),
            op,
            bound,
        )
        .unwrap()
    }

    #[test]
    fn a6_families() {
        let a6 = |op| expr(AggregateFunction::Sum, &[1, 2, 2, 3], op, 5);
        assert_eq!(classify_syntactic(&a6(ComparisonOp::Ge)), MonotonicityClass::Monotone);
        assert_eq!(classify_syntactic(&a6(ComparisonOp::Gt)), MonotonicityClass::Monotone);
        assert_eq!(
            classify_syntactic(&a6(ComparisonOp::Lt)),
            MonotonicityClass::AntiMonotone
        );
        assert_eq!(classify_syntactic(&a6(ComparisonOp::Eq)), MonotonicityClass::Convex);
        assert_eq!(classify_syntactic(&a6(ComparisonOp::Ne)), MonotonicityClass::NonConvex);

        assert_eq!(
            classify_exact(&a6(ComparisonOp::Ge), 16),
            Ok(MonotonicityClass::Monotone)
        );
        assert_eq!(
            classify_exact(&a6(ComparisonOp::Le), 16),
            Ok(MonotonicityClass::AntiMonotone)
        );
        assert_eq!(classify_exact(&a6(ComparisonOp::Eq), 16), Ok(MonotonicityClass::Convex));
        assert_eq!(
            classify_exact(&a6(ComparisonOp::Ne), 16),
            Ok(MonotonicityClass::NonConvex)
        );
    }

    #[test]
    fn min_max_rows() {
        let m = |f, op| classify_syntactic(&expr(f, &[-3, 0, 4], op, 1));
        assert_eq!(m(AggregateFunction::Min, ComparisonOp::Le), MonotonicityClass::Monotone);
        assert_eq!(
            m(AggregateFunction::Min, ComparisonOp::Gt),
            MonotonicityClass::AntiMonotone
        );
        assert_eq!(m(AggregateFunction::Max, ComparisonOp::Ge), MonotonicityClass::Monotone);
        assert_eq!(
            m(AggregateFunction::Max, ComparisonOp::Lt),
            MonotonicityClass::AntiMonotone
        );
        assert_eq!(m(AggregateFunction::Max, ComparisonOp::Eq), MonotonicityClass::Convex);
        assert_eq!(
            m(AggregateFunction::Min, ComparisonOp::Ne),
            MonotonicityClass::NonConvex
        );
    }

    #[test]
    fn sign_rows() {
        // zero weight drops both restrictions
        let z = expr(AggregateFunction::Sum, &[0, 2], ComparisonOp::Ge, 1);
        assert_eq!(sign_restriction(&z), SignRestriction::Unrestricted);
        assert_eq!(classify_syntactic(&z), MonotonicityClass::NonConvex);
        let t = expr(AggregateFunction::Times, &[0, 2], ComparisonOp::Ge, 1);
        assert_eq!(classify_syntactic(&t), MonotonicityClass::NonConvex);
        let neg = expr(AggregateFunction::Sum, &[-1, -2], ComparisonOp::Lt, -1);
        assert_eq!(classify_syntactic(&neg), MonotonicityClass::Monotone);
        let tneg = expr(AggregateFunction::Times, &[-1, -2], ComparisonOp::Lt, -1);
        assert_eq!(classify_syntactic(&tneg), MonotonicityClass::NonConvex);
        let avg = expr(AggregateFunction::Avg, &[1, 2], ComparisonOp::Ge, 1);
        assert_eq!(classify_syntactic(&avg), MonotonicityClass::NonConvex);
    }

    #[test]
    fn exact_small_cases() {
        let one = expr(AggregateFunction::Sum, &[1], ComparisonOp::Gt, 0);
        assert_eq!(classify_exact(&one, 16), Ok(MonotonicityClass::Monotone));
        let zero = expr(AggregateFunction::Sum, &[0], ComparisonOp::Eq, 0);
        assert_eq!(classify_exact(&zero, 16), Ok(MonotonicityClass::Constant));
        let empty_avg = expr(AggregateFunction::Avg, &[], ComparisonOp::Eq, 0);
        assert_eq!(classify_exact(&empty_avg, 16), Ok(MonotonicityClass::Constant));
        // sum{1:a, -1:b} = 0: true, false, false, true
        let zigzag = expr(AggregateFunction::Sum, &[1, -1], ComparisonOp::Eq, 0);
        assert_eq!(classify_exact(&zigzag, 16), Ok(MonotonicityClass::NonConvex));
    }

    #[test]
    fn exact_cap() {
        let big = expr(AggregateFunction::Sum, &[1; 5], ComparisonOp::Ge, 1);
        assert_eq!(classify_exact(&big, 4), Err(CapExceeded { atoms: 5, cap: 4 }));
    }

    #[test]
    fn implications() {
        use MonotonicityClass::*;
        assert!(Constant.implies(Monotone) && Constant.implies(AntiMonotone) && Constant.implies(Convex));
        assert!(Monotone.implies(Convex) && !Monotone.implies(AntiMonotone));
        assert!(!NonConvex.implies(Convex));
    }
}
