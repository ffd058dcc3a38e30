use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::value::{compare, AggregateValue};
use crate::syntax::{serialize_bigint, AggregateExpression, AggregateFunction, ComparisonOp};

/// Intermediate products of the `times` bound computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TimesTrace {
    /// Product of all non-zero weights.
    #[serde(serialize_with = "serialize_bigint")]
    pub pi_pm: BigInt,
    /// Product of all zero weights: 0 if any weight is zero, 1 otherwise.
    #[serde(serialize_with = "serialize_bigint")]
    pub pi_0: BigInt,
    /// Greatest negative weight; `None` stands for negative infinity (no negative weight).
    #[serde(serialize_with = "serialize_opt_bigint")]
    pub w_max_neg: Option<BigInt>,
}

fn serialize_opt_bigint<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => serialize_bigint(v, s),
        None => s.serialize_none(),
    }
}

/// Smallest and greatest feasible outcome of the aggregation function.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub lower: AggregateValue,
    pub upper: AggregateValue,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<TimesTrace>,
}

impl Bounds {
    fn new(lower: AggregateValue, upper: AggregateValue) -> Self {
        Bounds {
            lower,
            upper,
            trace: None,
        }
    }

    pub fn is_undefined(&self) -> bool {
        !self.lower.is_defined() && !self.upper.is_defined()
    }
}

pub fn feasible_bounds(a: &AggregateExpression) -> Bounds {
    let weights = a.elements().iter().map(|e| &e.weight);
    match a.function() {
        AggregateFunction::Sum => {
            let lower: BigInt = weights.clone().filter(|w| w.is_negative()).sum();
            let upper: BigInt = weights.filter(|w| w.is_positive()).sum();
            Bounds::new(AggregateValue::Int(lower), AggregateValue::Int(upper))
        }
        AggregateFunction::Avg => match (weights.clone().min(), weights.max()) {
            (Some(lo), Some(hi)) => Bounds::new(AggregateValue::Int(lo.clone()), AggregateValue::Int(hi.clone())),
            _ => Bounds::new(AggregateValue::Undefined, AggregateValue::Undefined),
        },
        AggregateFunction::Min => {
            let lower = weights
                .min()
                .map_or(AggregateValue::PosInf, |w| AggregateValue::Int(w.clone()));
            Bounds::new(lower, AggregateValue::PosInf)
        }
        AggregateFunction::Max => {
            let upper = weights
                .max()
                .map_or(AggregateValue::NegInf, |w| AggregateValue::Int(w.clone()));
            Bounds::new(AggregateValue::NegInf, upper)
        }
        AggregateFunction::Times => times_bounds(a),
    }
}

fn times_bounds(a: &AggregateExpression) -> Bounds {
    let weights = a.elements().iter().map(|e| &e.weight);
    let pi_pm: BigInt = weights.clone().filter(|w| !w.is_zero()).product();
    let pi_0: BigInt = weights.clone().filter(|w| w.is_zero()).product();
    let w_max_neg = weights.filter(|w| w.is_negative()).max().cloned();

    let lower = if pi_pm.is_negative() {
        pi_pm.clone()
    } else {
        match &w_max_neg {
            Some(w) => &pi_pm / w,
            None => pi_0.clone(),
        }
    };
    let upper = if pi_pm.is_positive() {
        pi_pm.clone()
    } else {
        // a negative product contains at least one negative weight
        let w = w_max_neg.as_ref().expect("negative product has a negative factor");
        &pi_pm / w
    };
    Bounds {
        lower: AggregateValue::Int(lower),
        upper: AggregateValue::Int(upper),
        trace: Some(TimesTrace { pi_pm, pi_0, w_max_neg }),
    }
}

/// Whether some interpretation satisfies `a`.
///
/// Every operator except `=` is decided from the feasible bounds. Equality
/// with `min`/`max` reduces to membership of the bound among the weights;
/// with `sum`, `times` and `avg` it is a subset-sum/-product search over all
/// `2^n` subsets of the element list, exponential in the number of elements.
pub fn is_satisfiable(a: &AggregateExpression) -> bool {
    let bounds = feasible_bounds(a);
    if bounds.is_undefined() {
        return false;
    }
    let bound = a.bound();
    match a.op() {
        ComparisonOp::Lt | ComparisonOp::Le => compare(&bounds.lower, a.op(), bound),
        ComparisonOp::Gt | ComparisonOp::Ge => compare(&bounds.upper, a.op(), bound),
        ComparisonOp::Ne => {
            compare(&bounds.lower, ComparisonOp::Ne, bound) || compare(&bounds.upper, ComparisonOp::Ne, bound)
        }
        ComparisonOp::Eq => match a.function() {
            AggregateFunction::Min | AggregateFunction::Max => a.elements().iter().any(|e| &e.weight == bound),
            AggregateFunction::Sum | AggregateFunction::Avg | AggregateFunction::Times => equality_reachable(a),
        },
    }
}

/// Gray-code walk over all subsets of the element list, maintaining the
/// running sum, count, zero count and product of non-zero weights
/// incrementally so that each step costs one update.
fn equality_reachable(a: &AggregateExpression) -> bool {
    let weights: Vec<&BigInt> = a.elements().iter().map(|e| &e.weight).collect();
    let bound = a.bound();
    let n = weights.len();
    assert!(n < 64, "equality search over {n} elements is out of reach");

    let mut included = 0u64;
    let mut sum = BigInt::zero();
    let mut count = 0u64;
    let mut zeros = 0u64;
    let mut nonzero_product = BigInt::one();

    let hit = |sum: &BigInt, count: u64, zeros: u64, product: &BigInt| match a.function() {
        AggregateFunction::Sum => sum == bound,
        AggregateFunction::Avg => count > 0 && *sum == bound * BigInt::from(count),
        AggregateFunction::Times => {
            if zeros > 0 {
                bound.is_zero()
            } else {
                product == bound
            }
        }
        AggregateFunction::Min | AggregateFunction::Max => unreachable!(),
    };

    if hit(&sum, count, zeros, &nonzero_product) {
        return true;
    }
    for step in 1u64..(1u64 << n) {
        let bit = step.trailing_zeros() as usize;
        let w = weights[bit];
        let adding = included & (1 << bit) == 0;
        included ^= 1 << bit;
        if adding {
            sum += w;
            count += 1;
            if w.is_zero() {
                zeros += 1;
            } else {
                nonzero_product *= w;
            }
        } else {
            sum -= w;
            count -= 1;
            if w.is_zero() {
                zeros -= 1;
            } else {
                nonzero_product /= w;
            }
        }
        if hit(&sum, count, zeros, &nonzero_product) {
            return true;
        }
    }
    false
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
    fn example_bounds() {
        let a1 = expr(AggregateFunction::Sum, &[1, 3, 3, -4], ComparisonOp::Eq, 0);
        let b = feasible_bounds(&a1);
        assert_eq!((b.lower, b.upper), (AggregateValue::int(-4), AggregateValue::int(7)));

        let a2 = expr(AggregateFunction::Times, &[0, 3, -2, -4], ComparisonOp::Eq, 0);
        let b = feasible_bounds(&a2);
        assert_eq!(
            (b.lower.clone(), b.upper.clone()),
            (AggregateValue::int(-12), AggregateValue::int(24))
        );
        let trace = b.trace.unwrap();
        assert_eq!(trace.pi_pm, BigInt::from(24));
        assert_eq!(trace.pi_0, BigInt::from(0));
        assert_eq!(trace.w_max_neg, Some(BigInt::from(-2)));

        let a4 = expr(AggregateFunction::Min, &[0, 3, -2, -4], ComparisonOp::Eq, 0);
        let b = feasible_bounds(&a4);
        assert_eq!((b.lower, b.upper), (AggregateValue::int(-4), AggregateValue::PosInf));
    }

    #[test]
    fn times_bound_cases() {
        // no negative weight: lower is pi_0
        let b = feasible_bounds(&expr(AggregateFunction::Times, &[2, 3], ComparisonOp::Eq, 0));
        assert_eq!((b.lower, b.upper), (AggregateValue::int(1), AggregateValue::int(6)));
        let b = feasible_bounds(&expr(AggregateFunction::Times, &[0, 3], ComparisonOp::Eq, 0));
        assert_eq!((b.lower, b.upper), (AggregateValue::int(0), AggregateValue::int(3)));
        // negative product
        let b = feasible_bounds(&expr(AggregateFunction::Times, &[-2, 3], ComparisonOp::Eq, 0));
        assert_eq!((b.lower, b.upper), (AggregateValue::int(-6), AggregateValue::int(3)));
        let b = feasible_bounds(&expr(AggregateFunction::Times, &[], ComparisonOp::Eq, 0));
        assert_eq!((b.lower, b.upper), (AggregateValue::int(1), AggregateValue::int(1)));
        assert_eq!(b.trace.unwrap().w_max_neg, None);
    }

    #[test]
    fn empty_avg_unsatisfiable() {
        let b = feasible_bounds(&expr(AggregateFunction::Avg, &[], ComparisonOp::Eq, 0));
        assert!(b.is_undefined());
        for op in ComparisonOp::ALL {
            for bound in -3..=3 {
                assert!(!is_satisfiable(&expr(AggregateFunction::Avg, &[], op, bound)));
            }
        }
    }

    #[test]
    fn equality_examples() {
        assert!(!is_satisfiable(&expr(
            AggregateFunction::Sum,
            &[1, 3, 3, -4],
            ComparisonOp::Eq,
            -2
        )));
        assert!(!is_satisfiable(&expr(
            AggregateFunction::Sum,
            &[1, 3, 3, -4],
            ComparisonOp::Eq,
            5
        )));
        assert!(is_satisfiable(&expr(
            AggregateFunction::Sum,
            &[1, 3, 3, -4],
            ComparisonOp::Eq,
            0
        )));
        assert!(is_satisfiable(&expr(
            AggregateFunction::Times,
            &[0, 3, -2, -4],
            ComparisonOp::Eq,
            8
        )));
        assert!(!is_satisfiable(&expr(
            AggregateFunction::Times,
            &[0, 3, -2, -4],
            ComparisonOp::Eq,
            2
        )));
        assert!(is_satisfiable(&expr(
            AggregateFunction::Avg,
            &[1, 2, 3, 6],
            ComparisonOp::Eq,
            4
        )));
        assert!(!is_satisfiable(&expr(
            AggregateFunction::Avg,
            &[1, 2, 3, 6],
            ComparisonOp::Eq,
            5
        )));
    }

    #[test]
    fn min_max_infinite_bounds() {
        let a4 = |op, b| expr(AggregateFunction::Min, &[0, 3, -2, -4], op, b);
        assert!(is_satisfiable(&a4(ComparisonOp::Ge, 1000)));
        assert!(is_satisfiable(&a4(ComparisonOp::Gt, 1000)));
        assert!(!is_satisfiable(&a4(ComparisonOp::Lt, -4)));
        let a5 = |op, b| expr(AggregateFunction::Max, &[1, 3, 3, -4], op, b);
        assert!(is_satisfiable(&a5(ComparisonOp::Le, -1000)));
        assert!(!is_satisfiable(&a5(ComparisonOp::Gt, 3)));
        // min over no elements is always +inf
        assert!(!is_satisfiable(&expr(AggregateFunction::Min, &[], ComparisonOp::Lt, 5)));
        assert!(is_satisfiable(&expr(AggregateFunction::Min, &[], ComparisonOp::Ne, 5)));
    }
}
