//! Satisfaction relations, immediate consequence operators and answer-set
//! checks on bitmasks.

use super::compiled::{submasks, CompiledExpr, CompiledProgram, Mask};
use super::SemanticsId;

pub(crate) fn gz_holds(e: &CompiledExpr, y: Mask, x: Mask) -> bool {
    e.holds(x) && e.atoms & y == e.atoms & x
}

/// Every `Z` with `y ⊆ Z ⊆ x` satisfies `e`. Vacuously true when `y ⊄ x`.
pub(crate) fn lpst_holds(e: &CompiledExpr, y: Mask, x: Mask) -> bool {
    if y & !x != 0 {
        return true;
    }
    if e.convex {
        return e.holds(y) && e.holds(x);
    }
    lpst_holds_exhaustive(e, y, x)
}

pub(crate) fn lpst_holds_exhaustive(e: &CompiledExpr, y: Mask, x: Mask) -> bool {
    if y & !x != 0 {
        return true;
    }
    // atoms outside atoms(e) cannot change the outcome
    submasks(x & !y & e.atoms).all(|s| e.holds(y | s))
}

pub(crate) fn mr_holds(e: &CompiledExpr, y: Mask, x: Mask) -> bool {
    e.holds(x) && submasks(y & e.atoms).any(|z| e.holds(z))
}

/// What the DPB step does once the running intersection is contained in `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum DpbCutoff {
    /// Stop only on an empty intersection; the result is exact.
    Exact,
    /// Stop as soon as the intersection is within `y` and return `y`.
    /// Valid only when `y` is a stage of the fixpoint iteration, where
    /// `y ⊆ T(y)` holds by monotonicity.
    WithinStage,
}

impl CompiledProgram {
    /// Heads of rules whose body `z` satisfies classically.
    fn classical_heads(&self, z: Mask) -> Mask {
        self.rules.iter().filter(|r| r.body_holds(z)).fold(0, |m, r| m | r.head)
    }

    /// One application of the operator for `s` (not FFLP). `active[i]`
    /// caches whether `x` satisfies the body of rule `i`; every relation
    /// other than DPB requires it.
    pub(crate) fn step(&self, s: SemanticsId, x: Mask, y: Mask, active: &[bool], cutoff: DpbCutoff) -> Mask {
        let relation: fn(&CompiledExpr, Mask, Mask) -> bool = match s {
            SemanticsId::Gz => gz_holds,
            SemanticsId::Lpst => lpst_holds,
            SemanticsId::Mr => mr_holds,
            SemanticsId::Dpb => return self.dpb_step(x, y, cutoff),
            SemanticsId::Fflp => unreachable!("FFLP has no operator"),
        };
        self.rules
            .iter()
            .zip(active)
            .filter(|(r, &a)| a && r.body.iter().all(|e| relation(e, y, x)))
            .fold(0, |m, (r, _)| m | r.head)
    }

    fn dpb_step(&self, x: Mask, y: Mask, cutoff: DpbCutoff) -> Mask {
        let mut acc = Mask::MAX;
        for s in submasks(x & !y & self.body_atoms) {
            acc &= self.classical_heads(y | s);
            match cutoff {
                DpbCutoff::Exact if acc == 0 => return 0,
                DpbCutoff::WithinStage if acc & !y == 0 => return y,
                _ => {}
            }
        }
        acc
    }

    pub(crate) fn active_rules(&self, x: Mask) -> Vec<bool> {
        self.rules.iter().map(|r| r.body_holds(x)).collect()
    }

    /// Stages from `∅`, ending with the repeated fixpoint when converged.
    pub(crate) fn fixpoint_stages(&self, s: SemanticsId, x: Mask) -> (Vec<Mask>, bool) {
        let active = self.active_rules(x);
        let mut stages = vec![0];
        // stages strictly grow until the fixpoint, so n + 1 steps always suffice for a model
        for _ in 0..=self.universe.len() + 1 {
            let last = *stages.last().expect("stages start non-empty");
            let next = self.step(s, x, last, &active, DpbCutoff::WithinStage);
            stages.push(next);
            if next == last {
                return (stages, true);
            }
        }
        (stages, false)
    }

    /// A proper subset of `x` that models the reduct relative to `x`.
    pub(crate) fn smaller_reduct_model(&self, x: Mask) -> Option<Mask> {
        let reduct: Vec<_> = self.rules.iter().filter(|r| r.body_holds(x)).collect();
        submasks(x)
            .take_while(|&y| y != x)
            .find(|&y| reduct.iter().all(|r| r.head & y != 0 || !r.body_holds(y)))
    }

    pub(crate) fn is_answer_set(&self, s: SemanticsId, x: Mask) -> bool {
        if !self.is_model(x) {
            return false;
        }
        match s {
            SemanticsId::Fflp => self.smaller_reduct_model(x).is_none(),
            _ => {
                let (stages, converged) = self.fixpoint_stages(s, x);
                converged && stages.last() == Some(&x)
            }
        }
    }
}
