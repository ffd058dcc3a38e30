//! Exact evaluation, satisfaction, feasible bounds, satisfiability and
//! monotonicity classification of aggregate expressions.
//!
//! No floating point is used anywhere: averages are exact rationals and
//! are compared against integer bounds by cross-multiplication.

mod bounds;
mod classify;
mod value;

pub use bounds::{feasible_bounds, is_satisfiable, Bounds, TimesTrace};
pub use classify::{
    classify_exact, classify_syntactic, sign_restriction, CapExceeded, MonotonicityClass, SignRestriction,
    DEFAULT_CLASSIFY_CAP,
};
pub use value::{aggregate, compare, evaluate, satisfies, weight_multiset, AggregateValue};
