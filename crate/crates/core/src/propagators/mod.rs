//! Propagators: the multiset ordering constraint and the side constraints
//! used by the benchmark models.

use std::fmt::Debug;

use crate::{DomainStore, PruneResult, Value, VarId};

mod lex;
mod msetord;
mod sum;

pub use lex::{propagate_lex_leq, LexLeq};
pub use msetord::{
    ceilings, check_disentailed, check_entailed, floors, lemma_supports_x, lemma_supports_y,
    propagate_msetord, MsetOrderingConstraint,
};
pub use sum::{propagate_sum_eq, propagate_sum_geq, SumEq, SumGeq};

/// Verdict of one propagation call.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PropagationOutcome {
    /// Domains are consistent; the constraint may still prune later.
    Fixpoint,
    /// No assignment of the current domains satisfies the constraint.
    Failure,
    /// Every assignment of the current domains satisfies the constraint.
    Entailed,
}

pub trait Propagator<V: Value>: Debug {
    /// Variables whose domain changes should wake this propagator.
    fn scope(&self) -> Vec<VarId>;

    fn propagate(&self, store: &mut DomainStore<V>) -> PropagationOutcome;

    fn name(&self) -> &'static str;
}

/// `Err(())` on failure, otherwise whether the domain changed.
#[inline]
fn step(res: PruneResult) -> Result<bool, ()> {
    match res {
        PruneResult::Changed => Ok(true),
        PruneResult::Unchanged => Ok(false),
        PruneResult::Failure => Err(()),
    }
}
