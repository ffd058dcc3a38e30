//! Bitmask form of a program over a fixed, sorted universe.
//!
//! Atom `i` of the universe (in lexicographic order) is bit `i`. All
//! enumeration inside the engine runs on masks; conversion back to
//! [`Interpretation`] happens only at the API boundary.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::SemanticsError;
use crate::aggregate::{aggregate, classify_syntactic, compare};
use crate::syntax::{AggregateExpression, AggregateFunction, Atom, ComparisonOp, Interpretation, Program};

pub(crate) type Mask = u64;

pub(crate) const MAX_UNIVERSE: usize = 64;

#[derive(Debug, Clone)]
pub(crate) struct Universe {
    atoms: Vec<Atom>,
}

impl Universe {
    pub(crate) fn new(atoms: BTreeSet<Atom>) -> Result<Self, SemanticsError> {
        if atoms.len() > MAX_UNIVERSE {
            return Err(SemanticsError::UniverseTooLarge {
                atoms: atoms.len(),
                cap: MAX_UNIVERSE,
            });
        }
        Ok(Universe {
            atoms: atoms.into_iter().collect(),
        })
    }

    pub(crate) fn len(&self) -> usize {
        self.atoms.len()
    }

    pub(crate) fn index(&self, atom: &Atom) -> Option<usize> {
        self.atoms.binary_search(atom).ok()
    }

    pub(crate) fn mask(&self, x: &Interpretation) -> Result<Mask, SemanticsError> {
        x.iter().try_fold(0, |m, a| match self.index(a) {
            Some(i) => Ok(m | 1 << i),
            None => Err(SemanticsError::UnknownAtom(a.clone())),
        })
    }

    pub(crate) fn interpretation(&self, mask: Mask) -> Interpretation {
        bits(mask).map(|i| self.atoms[i].clone()).collect()
    }
}

pub(crate) fn full_mask(n: usize) -> Mask {
    if n >= 64 {
        Mask::MAX
    } else {
        (1 << n) - 1
    }
}

pub(crate) fn bits(mask: Mask) -> impl Iterator<Item = usize> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        }
    })
}

/// All submasks of `mask`, including `0` and `mask` itself, in increasing order.
pub(crate) fn submasks(mask: Mask) -> impl Iterator<Item = Mask> {
    let mut next = Some(0);
    std::iter::from_fn(move || {
        let current = next?;
        next = if current == mask {
            None
        } else {
            Some((current.wrapping_sub(mask)) & mask)
        };
        Some(current)
    })
}

/// Weights and bound that fit in `i64`; evaluated with `i128` arithmetic.
#[derive(Debug, Clone)]
struct SmallWeights {
    elements: Vec<(u32, i64)>,
    bound: i64,
}

#[derive(Debug, Clone)]
pub(crate) struct CompiledExpr {
    function: AggregateFunction,
    op: ComparisonOp,
    bound: BigInt,
    elements: Vec<(u32, BigInt)>,
    small: Option<SmallWeights>,
    pub(crate) atoms: Mask,
    /// The expression's syntactic class guarantees convexity.
    pub(crate) convex: bool,
}

impl CompiledExpr {
    pub(crate) fn new(a: &AggregateExpression, universe: &Universe) -> Result<Self, SemanticsError> {
        let elements = a
            .elements()
            .iter()
            .map(|e| match universe.index(&e.atom) {
                Some(i) => Ok((i as u32, e.weight.clone())),
                None => Err(SemanticsError::UnknownAtom(e.atom.clone())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let small = a.bound().to_i64().and_then(|bound| {
            let elements = elements
                .iter()
                .map(|(i, w)| w.to_i64().map(|w| (*i, w)))
                .collect::<Option<Vec<_>>>()?;
            Some(SmallWeights { elements, bound })
        });
        let atoms = elements.iter().fold(0, |m, (i, _)| m | 1 << i);
        Ok(CompiledExpr {
            function: a.function(),
            op: a.op(),
            bound: a.bound().clone(),
            elements,
            small,
            atoms,
            convex: classify_syntactic(a).is_convex(),
        })
    }

    /// Classical satisfaction by the interpretation `mask`.
    pub(crate) fn holds(&self, mask: Mask) -> bool {
        if let Some(small) = &self.small {
            if let Some(result) = self.holds_small(small, mask) {
                return result;
            }
        }
        self.holds_exact(mask)
    }

    pub(crate) fn holds_exact(&self, mask: Mask) -> bool {
        let weights = self
            .elements
            .iter()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, w)| w);
        compare(&aggregate(self.function, weights), self.op, &self.bound)
    }

    /// `None` when an intermediate product leaves `i128`.
    fn holds_small(&self, small: &SmallWeights, mask: Mask) -> Option<bool> {
        let present = small
            .elements
            .iter()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, w)| *w as i128);
        let bound = small.bound as i128;
        let ordering = match self.function {
            AggregateFunction::Sum => present.sum::<i128>().cmp(&bound),
            AggregateFunction::Times => {
                let mut product: i128 = 1;
                for w in present {
                    product = product.checked_mul(w)?;
                }
                product.cmp(&bound)
            }
            AggregateFunction::Avg => {
                let (sum, count) = present.fold((0i128, 0i128), |(s, c), w| (s + w, c + 1));
                if count == 0 {
                    return Some(false);
                }
                sum.cmp(&(bound * count))
            }
            AggregateFunction::Min => match present.min() {
                Some(m) => m.cmp(&bound),
                None => std::cmp::Ordering::Greater,
            },
            AggregateFunction::Max => match present.max() {
                Some(m) => m.cmp(&bound),
                None => std::cmp::Ordering::Less,
            },
        };
        Some(self.op.holds_for(ordering))
    }
}

#[derive(Debug, Clone)]
pub(crate) struct CompiledRule {
    pub(crate) head: Mask,
    pub(crate) body: Vec<CompiledExpr>,
}

impl CompiledRule {
    pub(crate) fn body_holds(&self, mask: Mask) -> bool {
        self.body.iter().all(|e| e.holds(mask))
    }
}

#[derive(Debug, Clone)]
pub(crate) struct CompiledProgram {
    pub(crate) universe: Universe,
    pub(crate) rules: Vec<CompiledRule>,
    /// Union of the atoms of every body expression.
    pub(crate) body_atoms: Mask,
    pub(crate) non_disjunctive: bool,
}

impl CompiledProgram {
    pub(crate) fn new(p: &Program, universe: Universe) -> Result<Self, SemanticsError> {
        let rules = p
            .rules()
            .iter()
            .map(|r| {
                let head = universe.mask(&r.head().iter().cloned().collect())?;
                let body = r
                    .body()
                    .iter()
                    .map(|a| CompiledExpr::new(a, &universe))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(CompiledRule { head, body })
            })
            .collect::<Result<Vec<_>, SemanticsError>>()?;
        let body_atoms = rules.iter().flat_map(|r| r.body.iter()).fold(0, |m, e| m | e.atoms);
        Ok(CompiledProgram {
            non_disjunctive: rules.iter().all(|r| r.head.count_ones() <= 1),
            universe,
            rules,
            body_atoms,
        })
    }

    /// Index of the first rule violated by `x`, if any.
    pub(crate) fn violated_rule(&self, x: Mask) -> Option<usize> {
        self.rules.iter().position(|r| r.head & x == 0 && r.body_holds(x))
    }

    pub(crate) fn is_model(&self, x: Mask) -> bool {
        self.violated_rule(x).is_none()
    }
}
