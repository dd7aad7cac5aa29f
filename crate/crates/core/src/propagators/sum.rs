//! Bounds-consistent linear sums: `Σ x = total` and `Σ w·x >= bound` with
//! non-negative weights.

use super::{step, PropagationOutcome, Propagator};
use crate::{DomainStore, Error, Result, Value, VarId};

#[derive(Debug, Clone)]
pub struct SumEq<V> {
    vars: Vec<VarId>,
    total: V,
}

impl<V: Value> SumEq<V> {
    pub fn new(store: &DomainStore<V>, vars: Vec<VarId>, total: V) -> Result<Self> {
        check_vars(store, &vars)?;
        Ok(Self { vars, total })
    }
}

#[derive(Debug, Clone)]
pub struct SumGeq<V> {
    weights: Vec<V>,
    vars: Vec<VarId>,
    bound: V,
}

impl<V: Value> SumGeq<V> {
    pub fn new(store: &DomainStore<V>, weights: Vec<V>, vars: Vec<VarId>, bound: V) -> Result<Self> {
        check_vars(store, &vars)?;
        if weights.len() != vars.len() {
            return Err(Error::Model(format!(
                "{} weights for {} variables",
                weights.len(),
                vars.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| w.is_negative()) {
            return Err(Error::Model(format!("negative weight {w}")));
        }
        Ok(Self { weights, vars, bound })
    }
}

fn check_vars<V: Value>(store: &DomainStore<V>, vars: &[VarId]) -> Result<()> {
    match vars.iter().find(|v| !store.is_valid(**v)) {
        Some(bad) => Err(Error::Model(format!("unknown variable {bad}"))),
        None => Ok(()),
    }
}

pub fn propagate_sum_eq<V: Value>(store: &mut DomainStore<V>, vars: &[VarId], total: V) -> PropagationOutcome {
    let mut lo = vars.iter().fold(V::zero(), |acc, &v| acc + store.min(v));
    let mut hi = vars.iter().fold(V::zero(), |acc, &v| acc + store.max(v));
    loop {
        if lo > total || hi < total {
            return PropagationOutcome::Failure;
        }
        let mut changed = false;
        for &v in vars {
            let (min, max) = (store.min(v), store.max(v));
            let ub = total - (lo - min);
            let lb = total - (hi - max);
            let upper = step(store.prune_above(v, ub));
            let lower = step(store.prune_below(v, lb));
            match (upper, lower) {
                (Ok(a), Ok(b)) => changed |= a || b,
                _ => return PropagationOutcome::Failure,
            }
            lo = lo - min + store.min(v);
            hi = hi - max + store.max(v);
        }
        if !changed {
            break;
        }
    }
    if vars.iter().all(|&v| store.is_bound(v)) {
        PropagationOutcome::Entailed
    } else {
        PropagationOutcome::Fixpoint
    }
}

pub fn propagate_sum_geq<V: Value>(
    store: &mut DomainStore<V>,
    weights: &[V],
    vars: &[VarId],
    bound: V,
) -> PropagationOutcome {
    let hi = weights
        .iter()
        .zip(vars)
        .fold(V::zero(), |acc, (&w, &v)| acc + w * store.max(v));
    if hi < bound {
        return PropagationOutcome::Failure;
    }
    // raising lower bounds leaves `hi` alone, so one pass reaches the fixpoint
    for (&w, &v) in weights.iter().zip(vars) {
        if w.is_zero() {
            continue;
        }
        let need = bound - (hi - w * store.max(v));
        if step(store.prune_below(v, need.div_ceil(&w))).is_err() {
            return PropagationOutcome::Failure;
        }
    }
    let lo = weights
        .iter()
        .zip(vars)
        .fold(V::zero(), |acc, (&w, &v)| acc + w * store.min(v));
    if lo >= bound {
        PropagationOutcome::Entailed
    } else {
        PropagationOutcome::Fixpoint
    }
}

impl<V: Value> Propagator<V> for SumEq<V> {
    fn scope(&self) -> Vec<VarId> {
        self.vars.clone()
    }

    fn propagate(&self, store: &mut DomainStore<V>) -> PropagationOutcome {
        propagate_sum_eq(store, &self.vars, self.total)
    }

    fn name(&self) -> &'static str {
        "sum_eq"
    }
}

impl<V: Value> Propagator<V> for SumGeq<V> {
    fn scope(&self) -> Vec<VarId> {
        self.vars.clone()
    }

    fn propagate(&self, store: &mut DomainStore<V>) -> PropagationOutcome {
        propagate_sum_geq(store, &self.weights, &self.vars, self.bound)
    }

    fn name(&self) -> &'static str {
        "sum_geq"
    }
}
