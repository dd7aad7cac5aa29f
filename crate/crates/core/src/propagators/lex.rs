//! GAC for `xs <=lex ys` over vectors of distinct variables.
//!
//! `feasible[i]` says the suffixes from `i` can still be ordered. A value
//! of `x_i` is supported when some earlier position can be made strictly
//! smaller (with the prefix before it made equal), or when the prefix can
//! be made equal and either `v < max(y_i)` or `v` equals some value of
//! `y_i` and the suffix after `i` stays feasible. Dually for `y_i`.

use std::cmp::Ordering;
use std::collections::HashSet;

use super::{step, PropagationOutcome, Propagator};
use crate::{DomainStore, Error, Result, Value, VarId};

#[derive(Debug, Clone)]
pub struct LexLeq {
    xs: Vec<VarId>,
    ys: Vec<VarId>,
}

impl LexLeq {
    pub fn new<V: Value>(store: &DomainStore<V>, xs: Vec<VarId>, ys: Vec<VarId>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::Model(format!(
                "lex ordering over vectors of length {} and {}",
                xs.len(),
                ys.len()
            )));
        }
        let mut seen = HashSet::new();
        for &v in xs.iter().chain(&ys) {
            if !store.is_valid(v) {
                return Err(Error::Model(format!("unknown variable {v}")));
            }
            if !seen.insert(v) {
                return Err(Error::Model(format!("variable {v} repeated in a lex ordering")));
            }
        }
        Ok(Self { xs, ys })
    }
}

pub fn propagate_lex_leq<V: Value>(store: &mut DomainStore<V>, xs: &[VarId], ys: &[VarId]) -> PropagationOutcome {
    let n = xs.len();
    let strict_at: Vec<bool> = (0..n).map(|i| store.min(xs[i]) < store.max(ys[i])).collect();
    let mut feasible = vec![true; n + 1];
    for i in (0..n).rev() {
        feasible[i] = strict_at[i]
            || (feasible[i + 1] && store.domain(xs[i]).intersects(store.domain(ys[i])));
    }
    if !feasible[0] {
        return PropagationOutcome::Failure;
    }

    // With feasible[0], an equal prefix is always possible up to the first
    // position that can be strict; past it nothing is constrained.
    for i in 0..n {
        let (x, y) = (xs[i], ys[i]);
        let (x_min, y_max) = (store.min(x), store.max(y));
        let (x_cap, y_floor) = if feasible[i + 1] {
            (y_max, x_min)
        } else {
            (y_max - V::one(), x_min + V::one())
        };
        if step(store.prune_above(x, x_cap)).is_err() || step(store.prune_below(y, y_floor)).is_err() {
            return PropagationOutcome::Failure;
        }
        if strict_at[i] {
            break;
        }
    }

    let entailed = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| store.max(x).cmp(&store.min(y)))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
        != Ordering::Greater;
    if entailed {
        PropagationOutcome::Entailed
    } else {
        PropagationOutcome::Fixpoint
    }
}

impl<V: Value> Propagator<V> for LexLeq {
    fn scope(&self) -> Vec<VarId> {
        self.xs.iter().chain(&self.ys).copied().collect()
    }

    fn propagate(&self, store: &mut DomainStore<V>) -> PropagationOutcome {
        propagate_lex_leq(store, &self.xs, &self.ys)
    }

    fn name(&self) -> &'static str {
        "lex_leq"
    }
}
