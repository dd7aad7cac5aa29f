//! Depth-first search over a trailed store.
//!
//! Propagators sit in a FIFO queue with a per-constraint "queued" flag and
//! run until nothing changes. Entailed propagators are switched off for the
//! rest of the subtree; the switch-offs are trailed and restored when the
//! search backtracks past them. Branching is static: variables in creation
//! order, values ascending, one child per value.

use std::collections::VecDeque;
use std::fmt;
use std::time::{Duration, Instant};

use crate::propagators::{LexLeq, MsetOrderingConstraint, PropagationOutcome, Propagator, SumEq, SumGeq};
use crate::{DomainStore, Error, Result, Value, ValueRange, VarId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineOutcome {
    Fixpoint,
    Failure,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Branching decisions taken.
    pub nodes: u64,
    pub failures: u64,
    pub solutions: u64,
    /// Propagator invocations.
    pub propagations: u64,
    pub elapsed: Duration,
}

impl fmt::Display for SearchStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "solutions={} nodes={} failures={} propagations={} time={:.2?}",
            self.solutions, self.nodes, self.failures, self.propagations, self.elapsed
        )
    }
}

pub struct Model<V: Value> {
    store: DomainStore<V>,
    constraints: Vec<Box<dyn Propagator<V>>>,
    watchers: Vec<Vec<usize>>,
    active: Vec<bool>,
    deactivated: Vec<usize>,
    queue: VecDeque<usize>,
    queued: Vec<bool>,
    stats: SearchStats,
}

impl<V: Value> fmt::Debug for Model<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Model")
            .field("vars", &self.store.num_vars())
            .field("constraints", &self.constraints)
            .finish()
    }
}

impl<V: Value> Model<V> {
    pub fn new(range: ValueRange<V>) -> Self {
        Self {
            store: DomainStore::new(range),
            constraints: Vec::new(),
            watchers: Vec::new(),
            active: Vec::new(),
            deactivated: Vec::new(),
            queue: VecDeque::new(),
            queued: Vec::new(),
            stats: SearchStats::default(),
        }
    }

    pub fn store(&self) -> &DomainStore<V> {
        &self.store
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn new_var<I: IntoIterator<Item = V>>(&mut self, values: I) -> Result<VarId> {
        let v = self.store.new_var(values)?;
        self.watchers.push(Vec::new());
        Ok(v)
    }

    pub fn new_interval_var(&mut self, lo: V, hi: V) -> Result<VarId> {
        let v = self.store.new_interval_var(lo, hi)?;
        self.watchers.push(Vec::new());
        Ok(v)
    }

    pub fn post(&mut self, prop: Box<dyn Propagator<V>>) -> Result<usize> {
        let scope = prop.scope();
        if let Some(bad) = scope.iter().find(|v| !self.store.is_valid(**v)) {
            return Err(Error::Model(format!("constraint scope names unknown {bad}")));
        }
        let id = self.constraints.len();
        let mut scope = scope;
        scope.sort_unstable();
        scope.dedup();
        for v in scope {
            self.watchers[v.0].push(id);
        }
        self.constraints.push(prop);
        self.active.push(true);
        self.queued.push(false);
        self.enqueue(id);
        Ok(id)
    }

    pub fn post_msetord(&mut self, xs: Vec<VarId>, ys: Vec<VarId>, strict: bool) -> Result<usize> {
        let c = MsetOrderingConstraint::new(&self.store, xs, ys, strict)?;
        self.post(Box::new(c))
    }

    pub fn post_sum_eq(&mut self, vars: Vec<VarId>, total: V) -> Result<usize> {
        let c = SumEq::new(&self.store, vars, total)?;
        self.post(Box::new(c))
    }

    pub fn post_sum_geq(&mut self, weights: Vec<V>, vars: Vec<VarId>, bound: V) -> Result<usize> {
        let c = SumGeq::new(&self.store, weights, vars, bound)?;
        self.post(Box::new(c))
    }

    pub fn post_lex_leq(&mut self, xs: Vec<VarId>, ys: Vec<VarId>) -> Result<usize> {
        let c = LexLeq::new(&self.store, xs, ys)?;
        self.post(Box::new(c))
    }

    fn enqueue(&mut self, c: usize) {
        if self.active[c] && !self.queued[c] {
            self.queued[c] = true;
            self.queue.push_back(c);
        }
    }

    fn enqueue_watchers(&mut self) {
        for v in self.store.drain_changed() {
            for i in 0..self.watchers[v.0].len() {
                let c = self.watchers[v.0][i];
                self.enqueue(c);
            }
        }
    }

    fn clear_queue(&mut self) {
        for c in self.queue.drain(..) {
            self.queued[c] = false;
        }
    }

    /// Run queued propagators until no domain changes. Newly posted
    /// constraints start out queued.
    pub fn propagate_to_fixpoint(&mut self) -> EngineOutcome {
        self.enqueue_watchers();
        while let Some(c) = self.queue.pop_front() {
            self.queued[c] = false;
            if !self.active[c] {
                continue;
            }
            self.stats.propagations += 1;
            match self.constraints[c].propagate(&mut self.store) {
                PropagationOutcome::Failure => {
                    self.clear_queue();
                    self.store.clear_changed();
                    return EngineOutcome::Failure;
                }
                PropagationOutcome::Entailed => {
                    self.active[c] = false;
                    self.deactivated.push(c);
                }
                PropagationOutcome::Fixpoint => {}
            }
            self.enqueue_watchers();
        }
        EngineOutcome::Fixpoint
    }

    fn reactivate_to(&mut self, len: usize) {
        for c in self.deactivated.drain(len..) {
            self.active[c] = true;
        }
    }

    /// Enumerate solutions up to `limit`. The store is returned to its
    /// state before the call, so solving again yields the same answer.
    pub fn solve_all(&mut self, limit: Option<usize>) -> (Vec<Vec<V>>, SearchStats) {
        let start = Instant::now();
        self.stats = SearchStats::default();
        let root = self.store.mark();
        let root_deactivated = self.deactivated.len();
        self.clear_queue();
        for c in 0..self.constraints.len() {
            self.enqueue(c);
        }
        let mut solutions = Vec::new();
        self.search(limit, &mut solutions);
        self.clear_queue();
        self.store.undo_to(root).expect("root mark is innermost");
        self.reactivate_to(root_deactivated);
        self.stats.solutions = solutions.len() as u64;
        self.stats.elapsed = start.elapsed();
        (solutions, self.stats)
    }

    pub fn solve_first(&mut self) -> (Option<Vec<V>>, SearchStats) {
        let (mut sols, stats) = self.solve_all(Some(1));
        (sols.pop(), stats)
    }

    /// Returns false once the solution cap is hit.
    fn search(&mut self, limit: Option<usize>, solutions: &mut Vec<Vec<V>>) -> bool {
        if self.propagate_to_fixpoint() == EngineOutcome::Failure {
            self.stats.failures += 1;
            return true;
        }
        let n = self.store.num_vars();
        let Some(var) = (0..n).map(VarId).find(|&v| !self.store.is_bound(v)) else {
            solutions.push((0..n).map(|i| self.store.min(VarId(i))).collect());
            return limit.is_none_or(|cap| solutions.len() < cap);
        };
        for value in self.store.values(var) {
            self.stats.nodes += 1;
            let mark = self.store.mark();
            let deactivated = self.deactivated.len();
            self.store.fix(var, value);
            let go_on = self.search(limit, solutions);
            self.clear_queue();
            self.store.undo_to(mark).expect("search marks are LIFO");
            self.reactivate_to(deactivated);
            if !go_on {
                return false;
            }
        }
        true
    }
}
