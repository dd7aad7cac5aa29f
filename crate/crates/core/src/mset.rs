//! Multisets over a bounded integer range, stored as dense occurrence
//! vectors, and the total multiset ordering on them.

use std::cmp::Ordering;
use std::fmt;

use crate::{Error, Result, Value};

/// Outcome of a multiset comparison. The order is total, so the standard
/// library ordering is reused.
pub type MsetOrdering = Ordering;

/// Inclusive integer range `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ValueRange<V> {
    lo: V,
    hi: V,
}

impl<V: Value> ValueRange<V> {
    pub fn new(lo: V, hi: V) -> Result<Self> {
        if lo > hi {
            return Err(Error::RangeViolation(format!("empty range {lo}..{hi}")));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> V {
        self.lo
    }

    pub fn hi(&self) -> V {
        self.hi
    }

    pub fn width(&self) -> usize {
        self.hi.offset_from(self.lo) + 1
    }

    pub fn contains(&self, v: V) -> bool {
        self.lo <= v && v <= self.hi
    }

    /// Index of `v` counted from `lo`. The caller guarantees `contains(v)`.
    #[inline]
    pub fn offset(&self, v: V) -> usize {
        v.offset_from(self.lo)
    }

    #[inline]
    pub fn value_at(&self, offset: usize) -> V {
        V::at_offset(self.lo, offset)
    }

    fn check(&self, v: V) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::RangeViolation(format!(
                "value {v} outside {}..{}",
                self.lo, self.hi
            )))
        }
    }
}

impl<V: Value> fmt::Display for ValueRange<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

/// A multiset as per-value counts over a fixed range.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OccurrenceVector<V> {
    range: ValueRange<V>,
    counts: Vec<usize>,
    cardinality: usize,
}

impl<V: Value> OccurrenceVector<V> {
    pub fn empty(range: ValueRange<V>) -> Self {
        Self {
            range,
            counts: vec![0; range.width()],
            cardinality: 0,
        }
    }

    pub fn from_values<I>(values: I, range: ValueRange<V>) -> Result<Self>
    where
        I: IntoIterator<Item = V>,
    {
        let mut occ = Self::empty(range);
        for v in values {
            occ.insert(v)?;
        }
        Ok(occ)
    }

    pub fn range(&self) -> ValueRange<V> {
        self.range
    }

    pub fn cardinality(&self) -> usize {
        self.cardinality
    }

    pub fn is_empty(&self) -> bool {
        self.cardinality == 0
    }

    /// Counts indexed by offset from `range().lo()`.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Number of occurrences of `v`; zero for values outside the range.
    pub fn count(&self, v: V) -> usize {
        if self.range.contains(v) {
            self.counts[self.range.offset(v)]
        } else {
            0
        }
    }

    pub fn insert(&mut self, v: V) -> Result<()> {
        self.insert_n(v, 1)
    }

    pub fn insert_n(&mut self, v: V, n: usize) -> Result<()> {
        self.range.check(v)?;
        self.counts[self.range.offset(v)] += n;
        self.cardinality += n;
        Ok(())
    }

    pub fn remove(&mut self, v: V) -> Result<()> {
        self.range.check(v)?;
        let slot = &mut self.counts[self.range.offset(v)];
        if *slot == 0 {
            return Err(Error::Precondition(format!("{v} is not in the multiset")));
        }
        *slot -= 1;
        self.cardinality -= 1;
        Ok(())
    }

    /// Copy with one occurrence of `out_value` swapped for `in_value`.
    pub fn replace(&self, out_value: V, in_value: V) -> Result<Self> {
        self.range.check(in_value)?;
        let mut next = self.clone();
        next.remove(out_value)?;
        next.insert(in_value)?;
        Ok(next)
    }

    /// Elements in descending order, repeated by multiplicity.
    pub fn iter_desc(&self) -> impl Iterator<Item = V> + '_ {
        self.counts
            .iter()
            .enumerate()
            .rev()
            .flat_map(move |(i, &c)| std::iter::repeat_n(self.range.value_at(i), c))
    }

    /// Multiset comparison: the first value, scanning from the top of the
    /// range, whose counts differ decides; the side holding more copies of
    /// it is the greater multiset.
    pub fn compare(&self, other: &Self) -> Result<MsetOrdering> {
        if self.range != other.range {
            return Err(Error::RangeViolation(format!(
                "cannot compare multisets over {} and {}",
                self.range, other.range
            )));
        }
        Ok(compare_counts(&self.counts, &other.counts))
    }
}

/// Top-down scan over two equally long count arrays.
pub(crate) fn compare_counts(a: &[usize], b: &[usize]) -> Ordering {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .rev()
        .zip(b.iter().rev())
        .map(|(x, y)| x.cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

impl<V: Value> fmt::Display for OccurrenceVector<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{{")?;
        for (i, v) in self.iter_desc().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}}}")
    }
}

pub fn mset_from_values<V: Value>(values: &[V], range: ValueRange<V>) -> Result<OccurrenceVector<V>> {
    OccurrenceVector::from_values(values.iter().copied(), range)
}

pub fn mset_compare<V: Value>(
    a: &OccurrenceVector<V>,
    b: &OccurrenceVector<V>,
) -> Result<MsetOrdering> {
    a.compare(b)
}

pub fn mset_replace<V: Value>(
    a: &OccurrenceVector<V>,
    out_value: V,
    in_value: V,
) -> Result<OccurrenceVector<V>> {
    a.replace(out_value, in_value)
}
