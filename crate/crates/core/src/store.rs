//! Trailed finite-domain variable store.
//!
//! Domains are bitsets (one `u64` per 64 values) anchored at the variable's
//! initial minimum. Every mutation logs the words it overwrites together
//! with the old cached bounds, so undoing to a mark restores domains
//! exactly and costs time proportional to the work being undone.

use std::fmt;

use crate::{Error, Result, Value, ValueRange};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PruneResult {
    Changed,
    Unchanged,
    Failure,
}

/// Handle returned by [`DomainStore::mark`]; must be undone innermost first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MarkToken {
    depth: usize,
    trail_len: usize,
}

/// Finite non-empty set of integers with cached min, max and size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain<V> {
    base: V,
    words: Vec<u64>,
    size: usize,
    min: V,
    max: V,
}

type WordLog = Vec<(u32, u64)>;

impl<V: Value> Domain<V> {
    fn from_sorted(values: &[V]) -> Self {
        let base = values[0];
        let max = *values.last().unwrap();
        let span = max.offset_from(base) + 1;
        let mut words = vec![0u64; span.div_ceil(64)];
        for &v in values {
            let i = v.offset_from(base);
            words[i / 64] |= 1 << (i % 64);
        }
        Self {
            base,
            words,
            size: values.len(),
            min: base,
            max,
        }
    }

    fn interval(lo: V, hi: V) -> Self {
        let span = hi.offset_from(lo) + 1;
        let mut words = vec![u64::MAX; span.div_ceil(64)];
        if !span.is_multiple_of(64) {
            *words.last_mut().unwrap() = (1u64 << (span % 64)) - 1;
        }
        Self {
            base: lo,
            words,
            size: span,
            min: lo,
            max: hi,
        }
    }

    pub fn min(&self) -> V {
        self.min
    }

    pub fn max(&self) -> V {
        self.max
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_bound(&self) -> bool {
        self.size == 1
    }

    pub fn contains(&self, v: V) -> bool {
        if v < self.min || v > self.max {
            return false;
        }
        let i = v.offset_from(self.base);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Values in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = V> + '_ {
        let lo = self.min.offset_from(self.base);
        let hi = self.max.offset_from(self.base);
        (lo / 64..=hi / 64).flat_map(move |w| {
            let mut bits = self.words[w];
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(V::at_offset(self.base, w * 64 + b))
            })
        })
    }

    pub fn values(&self) -> Vec<V> {
        self.iter().collect()
    }

    pub fn intersects(&self, other: &Self) -> bool {
        if self.max < other.min || other.max < self.min {
            return false;
        }
        if self.size <= other.size {
            self.iter().any(|v| other.contains(v))
        } else {
            other.iter().any(|v| self.contains(v))
        }
    }

    /// Highest set offset `<= limit`, if any.
    fn highest_at_or_below(&self, limit: usize) -> Option<usize> {
        let mut w = limit / 64;
        let mut bits = self.words[w] & mask_upto(limit % 64);
        loop {
            if bits != 0 {
                return Some(w * 64 + 63 - bits.leading_zeros() as usize);
            }
            if w == 0 {
                return None;
            }
            w -= 1;
            bits = self.words[w];
        }
    }

    /// Lowest set offset `>= limit`, if any.
    fn lowest_at_or_above(&self, limit: usize) -> Option<usize> {
        let mut w = limit / 64;
        if w >= self.words.len() {
            return None;
        }
        let mut bits = self.words[w] & !mask_below(limit % 64);
        loop {
            if bits != 0 {
                return Some(w * 64 + bits.trailing_zeros() as usize);
            }
            w += 1;
            if w == self.words.len() {
                return None;
            }
            bits = self.words[w];
        }
    }

    fn set_word(&mut self, w: usize, value: u64, log: &mut WordLog) {
        let old = self.words[w];
        if old != value {
            log.push((w as u32, old));
            self.size -= (old & !value).count_ones() as usize;
            self.words[w] = value;
        }
    }

    /// Clears every offset in `from..=to`.
    fn clear_span(&mut self, from: usize, to: usize, log: &mut WordLog) {
        for w in from / 64..=to / 64 {
            let lo = if w == from / 64 { from % 64 } else { 0 };
            let hi = if w == to / 64 { to % 64 } else { 63 };
            let span = mask_upto(hi) & !mask_below(lo);
            let next = self.words[w] & !span;
            self.set_word(w, next, log);
        }
    }

    fn prune_above(&mut self, bound: V, log: &mut WordLog) -> PruneResult {
        if bound >= self.max {
            return PruneResult::Unchanged;
        }
        if bound < self.min {
            return PruneResult::Failure;
        }
        let keep = bound.offset_from(self.base);
        let top = self.max.offset_from(self.base);
        self.clear_span(keep + 1, top, log);
        let new_max = self.highest_at_or_below(keep).expect("min survives");
        self.max = V::at_offset(self.base, new_max);
        PruneResult::Changed
    }

    fn prune_below(&mut self, bound: V, log: &mut WordLog) -> PruneResult {
        if bound <= self.min {
            return PruneResult::Unchanged;
        }
        if bound > self.max {
            return PruneResult::Failure;
        }
        let keep = bound.offset_from(self.base);
        let bottom = self.min.offset_from(self.base);
        self.clear_span(bottom, keep - 1, log);
        let new_min = self.lowest_at_or_above(keep).expect("max survives");
        self.min = V::at_offset(self.base, new_min);
        PruneResult::Changed
    }

    fn remove(&mut self, v: V, log: &mut WordLog) -> PruneResult {
        if !self.contains(v) {
            return PruneResult::Unchanged;
        }
        if self.size == 1 {
            return PruneResult::Failure;
        }
        let i = v.offset_from(self.base);
        self.clear_span(i, i, log);
        if v == self.min {
            self.min = V::at_offset(self.base, self.lowest_at_or_above(i).unwrap());
        } else if v == self.max {
            self.max = V::at_offset(self.base, self.highest_at_or_below(i).unwrap());
        }
        PruneResult::Changed
    }

    fn fix(&mut self, v: V, log: &mut WordLog) -> PruneResult {
        if !self.contains(v) {
            return PruneResult::Failure;
        }
        if self.size == 1 {
            return PruneResult::Unchanged;
        }
        let i = v.offset_from(self.base);
        let lo = self.min.offset_from(self.base);
        let hi = self.max.offset_from(self.base);
        for w in lo / 64..=hi / 64 {
            let next = if w == i / 64 { 1 << (i % 64) } else { 0 };
            self.set_word(w, next, log);
        }
        self.min = v;
        self.max = v;
        PruneResult::Changed
    }
}

impl<V: Value> fmt::Display for Domain<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

#[inline]
fn mask_upto(bit: usize) -> u64 {
    if bit == 63 {
        u64::MAX
    } else {
        (1u64 << (bit + 1)) - 1
    }
}

#[inline]
fn mask_below(bit: usize) -> u64 {
    (1u64 << bit) - 1
}

#[derive(Debug, Clone)]
struct TrailEntry<V> {
    var: VarId,
    min: V,
    max: V,
    size: usize,
    words_from: usize,
}

/// Variables, their domains, and the undo trail.
#[derive(Debug, Clone)]
pub struct DomainStore<V> {
    range: ValueRange<V>,
    domains: Vec<Domain<V>>,
    /// Dense copies of each domain's bounds, so bound scans stay in cache.
    mins: Vec<V>,
    maxs: Vec<V>,
    trail: Vec<TrailEntry<V>>,
    word_trail: WordLog,
    marks: Vec<usize>,
    changed: Vec<VarId>,
    dirty: Vec<bool>,
}

impl<V: Value> DomainStore<V> {
    /// Empty store; every variable's values must lie inside `range`.
    pub fn new(range: ValueRange<V>) -> Self {
        Self {
            range,
            domains: Vec::new(),
            mins: Vec::new(),
            maxs: Vec::new(),
            trail: Vec::new(),
            word_trail: Vec::new(),
            marks: Vec::new(),
            changed: Vec::new(),
            dirty: Vec::new(),
        }
    }

    pub fn range(&self) -> ValueRange<V> {
        self.range
    }

    pub fn new_var<I: IntoIterator<Item = V>>(&mut self, values: I) -> Result<VarId> {
        let mut values: Vec<V> = values.into_iter().collect();
        if values.is_empty() {
            return Err(Error::Model("empty initial domain".into()));
        }
        values.sort_unstable();
        values.dedup();
        if let Some(&v) = values.iter().find(|&&v| !self.range.contains(v)) {
            return Err(Error::Model(format!(
                "value {v} outside the store range {}",
                self.range
            )));
        }
        Ok(self.push(Domain::from_sorted(&values)))
    }

    /// Variable with the interval domain `lo..=hi`.
    pub fn new_interval_var(&mut self, lo: V, hi: V) -> Result<VarId> {
        if lo > hi {
            return Err(Error::Model(format!("empty initial domain {lo}..{hi}")));
        }
        if !self.range.contains(lo) || !self.range.contains(hi) {
            return Err(Error::Model(format!(
                "interval {lo}..{hi} outside the store range {}",
                self.range
            )));
        }
        Ok(self.push(Domain::interval(lo, hi)))
    }

    fn push(&mut self, domain: Domain<V>) -> VarId {
        self.mins.push(domain.min);
        self.maxs.push(domain.max);
        self.domains.push(domain);
        self.dirty.push(false);
        VarId(self.domains.len() - 1)
    }

    pub fn num_vars(&self) -> usize {
        self.domains.len()
    }

    pub fn is_valid(&self, v: VarId) -> bool {
        v.0 < self.domains.len()
    }

    pub fn domain(&self, v: VarId) -> &Domain<V> {
        &self.domains[v.0]
    }

    pub fn min(&self, v: VarId) -> V {
        self.mins[v.0]
    }

    pub fn max(&self, v: VarId) -> V {
        self.maxs[v.0]
    }

    pub fn size(&self, v: VarId) -> usize {
        self.domains[v.0].size
    }

    pub fn contains(&self, v: VarId, value: V) -> bool {
        self.domains[v.0].contains(value)
    }

    pub fn is_bound(&self, v: VarId) -> bool {
        self.domains[v.0].is_bound()
    }

    pub fn value(&self, v: VarId) -> Option<V> {
        let d = &self.domains[v.0];
        d.is_bound().then_some(d.min)
    }

    pub fn values(&self, v: VarId) -> Vec<V> {
        self.domains[v.0].values()
    }

    pub fn prune_above(&mut self, v: VarId, bound: V) -> PruneResult {
        if bound >= self.maxs[v.0] {
            return PruneResult::Unchanged;
        }
        self.mutate(v, |d, log| d.prune_above(bound, log))
    }

    pub fn prune_below(&mut self, v: VarId, bound: V) -> PruneResult {
        if bound <= self.mins[v.0] {
            return PruneResult::Unchanged;
        }
        self.mutate(v, |d, log| d.prune_below(bound, log))
    }

    pub fn remove_value(&mut self, v: VarId, value: V) -> PruneResult {
        self.mutate(v, |d, log| d.remove(value, log))
    }

    /// Reduce the domain to `{value}`.
    pub fn fix(&mut self, v: VarId, value: V) -> PruneResult {
        self.mutate(v, |d, log| d.fix(value, log))
    }

    fn mutate<F>(&mut self, v: VarId, op: F) -> PruneResult
    where
        F: FnOnce(&mut Domain<V>, &mut WordLog) -> PruneResult,
    {
        let d = &mut self.domains[v.0];
        let entry = TrailEntry {
            var: v,
            min: d.min,
            max: d.max,
            size: d.size,
            words_from: self.word_trail.len(),
        };
        let res = op(d, &mut self.word_trail);
        if res == PruneResult::Changed {
            self.mins[v.0] = d.min;
            self.maxs[v.0] = d.max;
            self.trail.push(entry);
            if !self.dirty[v.0] {
                self.dirty[v.0] = true;
                self.changed.push(v);
            }
        } else {
            debug_assert_eq!(self.word_trail.len(), entry.words_from);
        }
        res
    }

    pub fn mark(&mut self) -> MarkToken {
        self.marks.push(self.trail.len());
        MarkToken {
            depth: self.marks.len() - 1,
            trail_len: self.trail.len(),
        }
    }

    pub fn depth(&self) -> usize {
        self.marks.len()
    }

    /// Restore every domain to its state when `token` was taken.
    pub fn undo_to(&mut self, token: MarkToken) -> Result<()> {
        if token.depth + 1 != self.marks.len() || self.marks[token.depth] != token.trail_len {
            return Err(Error::Usage(format!(
                "undo to mark at depth {} while the innermost mark is at depth {}",
                token.depth,
                self.marks.len() as isize - 1
            )));
        }
        self.marks.pop();
        while self.trail.len() > token.trail_len {
            let e = self.trail.pop().unwrap();
            let d = &mut self.domains[e.var.0];
            for &(w, old) in self.word_trail[e.words_from..].iter().rev() {
                d.words[w as usize] = old;
            }
            self.word_trail.truncate(e.words_from);
            d.min = e.min;
            d.max = e.max;
            d.size = e.size;
            self.mins[e.var.0] = e.min;
            self.maxs[e.var.0] = e.max;
        }
        self.clear_changed();
        Ok(())
    }

    /// Variables modified since the last drain, in first-change order.
    pub fn drain_changed(&mut self) -> Vec<VarId> {
        for v in &self.changed {
            self.dirty[v.0] = false;
        }
        std::mem::take(&mut self.changed)
    }

    pub fn clear_changed(&mut self) {
        for v in self.changed.drain(..) {
            self.dirty[v.0] = false;
        }
    }
}
