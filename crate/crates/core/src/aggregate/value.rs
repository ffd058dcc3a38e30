use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::syntax::{AggregateExpression, AggregateFunction, ComparisonOp, Interpretation};

/// Exact outcome of applying an aggregation function to a multiset of weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AggregateValue {
    Int(BigInt),
    /// Only produced by `avg`; always normalized with a positive denominator.
    Rat(BigRational),
    PosInf,
    NegInf,
    /// `avg` over the empty multiset.
    Undefined,
}

impl AggregateValue {
    pub fn int(value: impl Into<BigInt>) -> Self {
        AggregateValue::Int(value.into())
    }

    pub fn rat(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        AggregateValue::Rat(BigRational::new(numer.into(), denom.into()))
    }

    pub fn is_defined(&self) -> bool {
        !matches!(self, AggregateValue::Undefined)
    }

    /// Total order on defined values: `NegInf < finite < PosInf`.
    /// `None` whenever either side is undefined.
    pub fn cmp_value(&self, other: &AggregateValue) -> Option<Ordering> {
        use AggregateValue::*;
        match (self, other) {
            (Undefined, _) | (_, Undefined) => None,
            (NegInf, NegInf) | (PosInf, PosInf) => Some(Ordering::Equal),
            (NegInf, _) | (_, PosInf) => Some(Ordering::Less),
            (PosInf, _) | (_, NegInf) => Some(Ordering::Greater),
            (Int(a), Int(b)) => Some(a.cmp(b)),
            (Int(a), Rat(b)) => Some(cmp_int_rat(a, b)),
            (Rat(a), Int(b)) => Some(cmp_int_rat(b, a).reverse()),
            (Rat(a), Rat(b)) => Some((a.numer() * b.denom()).cmp(&(b.numer() * a.denom()))),
        }
    }

    /// Compares against an integer bound. Infinite values compare below or
    /// above every bound; `Undefined` compares with nothing.
    pub fn cmp_bound(&self, bound: &BigInt) -> Option<Ordering> {
        match self {
            AggregateValue::Undefined => None,
            AggregateValue::PosInf => Some(Ordering::Greater),
            AggregateValue::NegInf => Some(Ordering::Less),
            AggregateValue::Int(v) => Some(v.cmp(bound)),
            // denominator > 0, so s/c ? w0  <=>  s ? w0 * c
            AggregateValue::Rat(r) => Some(r.numer().cmp(&(bound * r.denom()))),
        }
    }
}

fn cmp_int_rat(a: &BigInt, b: &BigRational) -> Ordering {
    (a * b.denom()).cmp(b.numer())
}

impl fmt::Display for AggregateValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AggregateValue::Int(v) => write!(f, "{v}"),
            AggregateValue::Rat(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            AggregateValue::Rat(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            AggregateValue::PosInf => f.write_str("inf"),
            AggregateValue::NegInf => f.write_str("-inf"),
            AggregateValue::Undefined => f.write_str("undefined"),
        }
    }
}

impl Serialize for AggregateValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `[w_i | p_i in x]`, in element order.
pub fn weight_multiset(a: &AggregateExpression, x: &Interpretation) -> Vec<BigInt> {
    a.elements()
        .iter()
        .filter(|e| x.contains(&e.atom))
        .map(|e| e.weight.clone())
        .collect()
}

/// Applies an aggregation function to the given weights.
pub fn aggregate<'a>(function: AggregateFunction, weights: impl IntoIterator<Item = &'a BigInt>) -> AggregateValue {
    let mut weights = weights.into_iter();
    match function {
        AggregateFunction::Sum => AggregateValue::Int(weights.sum()),
        AggregateFunction::Times => AggregateValue::Int(weights.product()),
        AggregateFunction::Avg => {
            let (total, count) = weights.fold((BigInt::zero(), 0u64), |(s, c), w| (s + w, c + 1));
            if count == 0 {
                AggregateValue::Undefined
            } else {
                AggregateValue::Rat(BigRational::new(total, BigInt::from(count)))
            }
        }
        AggregateFunction::Min => match weights.next() {
            None => AggregateValue::PosInf,
            Some(first) => AggregateValue::Int(weights.fold(first, |m, w| m.min(w)).clone()),
        },
        AggregateFunction::Max => match weights.next() {
            None => AggregateValue::NegInf,
            Some(first) => AggregateValue::Int(weights.fold(first, |m, w| m.max(w)).clone()),
        },
    }
}

pub fn evaluate(a: &AggregateExpression, x: &Interpretation) -> AggregateValue {
    aggregate(
        a.function(),
        a.elements().iter().filter(|e| x.contains(&e.atom)).map(|e| &e.weight),
    )
}

/// Truth of `v op bound`. Undefined satisfies no operator.
pub fn compare(v: &AggregateValue, op: ComparisonOp, bound: &BigInt) -> bool {
    v.cmp_bound(bound).is_some_and(|ord| op.holds_for(ord))
}

pub fn satisfies(x: &Interpretation, a: &AggregateExpression) -> bool {
    compare(&evaluate(a, x), a.op(), a.bound())
}
