//! Generalised arc consistency for `multiset(xs) <= multiset(ys)` (or `<`).
//!
//! Support rests on monotonicity: lowering an element of the left multiset
//! or raising one on the right can only help. So the constraint is
//! satisfiable iff the floors of `xs` are ordered before the ceilings of
//! `ys`, and a value `v` for `x_i` is supported iff swapping `x_i`'s floor
//! for `v` keeps that relation (dually for `y_j` and its ceiling).
//!
//! Propagation builds both occurrence vectors once, takes their per-value
//! difference, and locates the topmost differing value. Each variable's
//! threshold is then read off in O(1) from that position, the next
//! differing value below it, and a precomputed "next nonzero below"
//! table. One call is O(n + m + d) plus the bitset work of the prunes.

use std::cmp::Ordering;
use std::collections::HashMap;

use super::{step, PropagationOutcome, Propagator};
use crate::mset::compare_counts;
use crate::{DomainStore, Error, OccurrenceVector, Result, Value, ValueRange, VarId};

#[derive(Debug, Clone)]
pub struct MsetOrderingConstraint<V> {
    xs: Vec<VarId>,
    ys: Vec<VarId>,
    strict: bool,
    range: ValueRange<V>,
    // distinct variables with their occurrence counts, first-seen order
    x_groups: Vec<(VarId, usize)>,
    y_groups: Vec<(VarId, usize)>,
}

impl<V: Value> MsetOrderingConstraint<V> {
    /// The value range is fixed here from the current domains; domains only
    /// shrink afterwards so it never has to grow.
    pub fn new(store: &DomainStore<V>, xs: Vec<VarId>, ys: Vec<VarId>, strict: bool) -> Result<Self> {
        if let Some(bad) = xs.iter().chain(&ys).find(|v| !store.is_valid(**v)) {
            return Err(Error::Model(format!("unknown variable {bad}")));
        }
        let x_groups = group(&xs);
        let y_groups = group(&ys);
        let on_x: HashMap<VarId, usize> = x_groups.iter().copied().collect();
        if let Some((shared, _)) = y_groups.iter().find(|(v, _)| on_x.contains_key(v)) {
            return Err(Error::Model(format!(
                "variable {shared} appears on both sides of a multiset ordering"
            )));
        }
        let lo = xs.iter().chain(&ys).map(|&v| store.min(v)).min();
        let hi = xs.iter().chain(&ys).map(|&v| store.max(v)).max();
        let range = match (lo, hi) {
            (Some(lo), Some(hi)) => ValueRange::new(lo, hi)?,
            _ => ValueRange::new(V::zero(), V::zero())?,
        };
        Ok(Self {
            xs,
            ys,
            strict,
            range,
            x_groups,
            y_groups,
        })
    }

    pub fn xs(&self) -> &[VarId] {
        &self.xs
    }

    pub fn ys(&self) -> &[VarId] {
        &self.ys
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn range(&self) -> ValueRange<V> {
        self.range
    }

    fn accepts(&self, ord: Ordering) -> bool {
        ord == Ordering::Less || (!self.strict && ord == Ordering::Equal)
    }
}

fn group(vars: &[VarId]) -> Vec<(VarId, usize)> {
    let mut index: HashMap<VarId, usize> = HashMap::new();
    let mut out: Vec<(VarId, usize)> = Vec::new();
    for &v in vars {
        match index.get(&v) {
            Some(&i) => out[i].1 += 1,
            None => {
                index.insert(v, out.len());
                out.push((v, 1));
            }
        }
    }
    out
}

/// Multiset of domain minima, one entry per occurrence.
pub fn floors<V: Value>(store: &DomainStore<V>, vars: &[VarId], range: ValueRange<V>) -> OccurrenceVector<V> {
    let mut occ = OccurrenceVector::empty(range);
    for &v in vars {
        occ.insert(store.min(v)).expect("domain minimum inside constraint range");
    }
    occ
}

/// Multiset of domain maxima, one entry per occurrence.
pub fn ceilings<V: Value>(store: &DomainStore<V>, vars: &[VarId], range: ValueRange<V>) -> OccurrenceVector<V> {
    let mut occ = OccurrenceVector::empty(range);
    for &v in vars {
        occ.insert(store.max(v)).expect("domain maximum inside constraint range");
    }
    occ
}

/// True iff no assignment of the current domains satisfies `c`.
pub fn check_disentailed<V: Value>(store: &DomainStore<V>, c: &MsetOrderingConstraint<V>) -> bool {
    let lo = floors(store, &c.xs, c.range);
    let hi = ceilings(store, &c.ys, c.range);
    !c.accepts(lo.compare(&hi).unwrap())
}

/// True iff every assignment of the current domains satisfies `c`.
pub fn check_entailed<V: Value>(store: &DomainStore<V>, c: &MsetOrderingConstraint<V>) -> bool {
    let hi = ceilings(store, &c.xs, c.range);
    let lo = floors(store, &c.ys, c.range);
    c.accepts(hi.compare(&lo).unwrap())
}

/// Support test for `var = value` on the x side, straight from the
/// monotone support argument: O(d) per call. Used to cross-check the
/// linear-time thresholds.
pub fn lemma_supports_x<V: Value>(
    store: &DomainStore<V>,
    c: &MsetOrderingConstraint<V>,
    var: VarId,
    value: V,
) -> bool {
    let mut lo = floors(store, &c.xs, c.range);
    let floor = store.min(var);
    for _ in c.xs.iter().filter(|&&x| x == var) {
        lo = lo.replace(floor, value).unwrap();
    }
    let hi = ceilings(store, &c.ys, c.range);
    c.accepts(lo.compare(&hi).unwrap())
}

/// Support test for `var = value` on the y side; see [`lemma_supports_x`].
pub fn lemma_supports_y<V: Value>(
    store: &DomainStore<V>,
    c: &MsetOrderingConstraint<V>,
    var: VarId,
    value: V,
) -> bool {
    let lo = floors(store, &c.xs, c.range);
    let mut hi = ceilings(store, &c.ys, c.range);
    let ceiling = store.max(var);
    for _ in c.ys.iter().filter(|&&y| y == var) {
        hi = hi.replace(ceiling, value).unwrap();
    }
    c.accepts(lo.compare(&hi).unwrap())
}

/// Comparison state shared by every threshold computation in one call.
struct Scan {
    /// `floors(xs)[u] - ceilings(ys)[u]` per value offset.
    diff: Vec<i64>,
    /// `below[u]`: highest offset `< u` with a nonzero difference.
    below: Vec<Option<usize>>,
}

impl Scan {
    fn new(lo: &[usize], hi: &[usize]) -> Self {
        let diff: Vec<i64> = lo.iter().zip(hi).map(|(&a, &b)| a as i64 - b as i64).collect();
        let mut below = Vec::with_capacity(diff.len() + 1);
        let mut last = None;
        for (u, &d) in diff.iter().enumerate() {
            below.push(last);
            if d != 0 {
                last = Some(u);
            }
        }
        below.push(last);
        Self { diff, below }
    }

    fn top(&self) -> Option<usize> {
        self.below[self.diff.len()]
    }

    fn sign_at(&self, u: Option<usize>) -> Ordering {
        u.map_or(Ordering::Equal, |u| self.diff[u].cmp(&0))
    }

    /// Comparison decided strictly below `top` once `k` copies are taken
    /// off the left side at offset `at < top`.
    fn after_decrement(&self, top: usize, at: usize, k: i64) -> Ordering {
        match self.below[top] {
            Some(b) if b > at => self.diff[b].cmp(&0),
            _ => {
                let t = self.diff[at] - k;
                if t != 0 {
                    t.cmp(&0)
                } else {
                    self.sign_at(self.below[at])
                }
            }
        }
    }
}

fn group_counts<V: Value>(
    store: &DomainStore<V>,
    groups: &[(VarId, usize)],
    range: ValueRange<V>,
    bound: fn(&DomainStore<V>, VarId) -> V,
) -> Vec<usize> {
    let mut counts = vec![0; range.width()];
    for &(var, k) in groups {
        counts[range.offset(bound(store, var))] += k;
    }
    counts
}

/// Establish GAC on `c`. One pass builds the floor and ceiling counts, one
/// pass prunes each side and collects the bounds needed for entailment.
pub fn propagate_msetord<V: Value>(
    store: &mut DomainStore<V>,
    c: &MsetOrderingConstraint<V>,
) -> PropagationOutcome {
    let range = c.range;
    let scan = Scan::new(
        &group_counts(store, &c.x_groups, range, DomainStore::min),
        &group_counts(store, &c.y_groups, range, DomainStore::max),
    );
    let top = scan.top();
    if !c.accepts(scan.sign_at(top)) {
        return PropagationOutcome::Failure;
    }

    let mut x_ceilings = vec![0usize; range.width()];
    for &(var, k) in &c.x_groups {
        let f = range.offset(store.min(var));
        let ub = match top {
            None => f,
            Some(a) if f >= a => f,
            Some(a) => match (scan.diff[a] + k as i64).cmp(&0) {
                Ordering::Less => a,
                Ordering::Greater => a - 1,
                Ordering::Equal if c.accepts(scan.after_decrement(a, f, k as i64)) => a,
                Ordering::Equal => a - 1,
            },
        };
        if step(store.prune_above(var, range.value_at(ub))).is_err() {
            return PropagationOutcome::Failure;
        }
        x_ceilings[range.offset(store.max(var))] += k;
    }

    let mut y_floors = vec![0usize; range.width()];
    for &(var, k) in &c.y_groups {
        let ceil = range.offset(store.max(var));
        let lb = match top {
            None => Some(ceil),
            Some(a) if ceil > a => Some(ceil),
            Some(a) if ceil < a => None,
            Some(a) => match (scan.diff[a] + k as i64).cmp(&0) {
                Ordering::Less => None,
                Ordering::Greater => Some(ceil),
                Ordering::Equal => match scan.below[a] {
                    None => None,
                    Some(b) if c.accepts(scan.diff[b].cmp(&0)) => None,
                    Some(b) if c.accepts(scan.after_decrement(a, b, k as i64)) => Some(b),
                    Some(b) => Some(b + 1),
                },
            },
        };
        if let Some(lb) = lb {
            if step(store.prune_below(var, range.value_at(lb))).is_err() {
                return PropagationOutcome::Failure;
            }
        }
        y_floors[range.offset(store.min(var))] += k;
    }

    if c.accepts(compare_counts(&x_ceilings, &y_floors)) {
        PropagationOutcome::Entailed
    } else {
        PropagationOutcome::Fixpoint
    }
}

impl<V: Value> Propagator<V> for MsetOrderingConstraint<V> {
    fn scope(&self) -> Vec<VarId> {
        self.x_groups
            .iter()
            .chain(&self.y_groups)
            .map(|&(v, _)| v)
            .collect()
    }

    fn propagate(&self, store: &mut DomainStore<V>) -> PropagationOutcome {
        propagate_msetord(store, self)
    }

    fn name(&self) -> &'static str {
        if self.strict {
            "msetord_lt"
        } else {
            "msetord_leq"
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn store() -> DomainStore<i64> {
        DomainStore::new(ValueRange::new(-10, 10).unwrap())
    }

    fn vars(s: &mut DomainStore<i64>, doms: &[&[i64]]) -> Vec<VarId> {
        doms.iter().map(|d| s.new_var(d.iter().copied()).unwrap()).collect()
    }

    fn ms(vals: &[i64], c: &MsetOrderingConstraint<i64>) -> OccurrenceVector<i64> {
        OccurrenceVector::from_values(vals.iter().copied(), c.range()).unwrap()
    }

    #[test]
    fn floors_and_ceilings() {
        let mut s = store();
        let xs = vars(&mut s, &[&[1, 2, 3], &[2, 3]]);
        let c = MsetOrderingConstraint::new(&s, xs.clone(), vec![], false).unwrap();
        assert_eq!(floors(&s, &xs, c.range()), ms(&[1, 2], &c));
        assert_eq!(ceilings(&s, &xs, c.range()), ms(&[3, 3], &c));
        assert!(floors(&s, &[], c.range()).is_empty());

        let bound = vars(&mut s, &[&[5], &[5]]);
        let c = MsetOrderingConstraint::new(&s, bound.clone(), vec![], false).unwrap();
        assert_eq!(floors(&s, &bound, c.range()), ms(&[5, 5], &c));
        assert_eq!(ceilings(&s, &bound, c.range()), ms(&[5, 5], &c));
    }

    #[test]
    fn disentailment_examples() {
        let mut s = store();
        let v = vars(&mut s, &[&[3], &[2]]);
        let c = MsetOrderingConstraint::new(&s, vec![v[0]], vec![v[1]], false).unwrap();
        assert!(check_disentailed(&s, &c));

        let mut s = store();
        let v = vars(&mut s, &[&[1, 2], &[1, 3], &[0, 2], &[1, 2]]);
        let c = MsetOrderingConstraint::new(&s, v[..2].to_vec(), v[2..].to_vec(), false).unwrap();
        assert!(!check_disentailed(&s, &c));

        let mut s = store();
        let v = vars(&mut s, &[&[1], &[1]]);
        let c = MsetOrderingConstraint::new(&s, vec![v[0]], vec![v[1]], true).unwrap();
        assert!(check_disentailed(&s, &c));
    }

    #[test]
    fn entailment_examples() {
        let mut s = store();
        let v = vars(&mut s, &[&[0, 1], &[0, 1], &[5]]);
        let c = MsetOrderingConstraint::new(&s, v[..2].to_vec(), vec![v[2]], false).unwrap();
        assert!(check_entailed(&s, &c));

        let mut s = store();
        let v = vars(&mut s, &[&[1, 2], &[1, 2]]);
        let c = MsetOrderingConstraint::new(&s, vec![v[0]], vec![v[1]], false).unwrap();
        assert!(!check_entailed(&s, &c));

        let mut s = store();
        let v = vars(&mut s, &[&[2], &[2]]);
        let c = MsetOrderingConstraint::new(&s, vec![v[0]], vec![v[1]], false).unwrap();
        assert!(check_entailed(&s, &c));
    }

    #[test]
    fn prunes_x_above_the_top_difference() {
        let mut s = store();
        let v = vars(&mut s, &[&[1, 2, 3], &[1, 2, 3], &[2], &[2]]);
        let c = MsetOrderingConstraint::new(&s, v[..2].to_vec(), v[2..].to_vec(), false).unwrap();
        let out = propagate_msetord(&mut s, &c);
        assert_ne!(out, PropagationOutcome::Failure);
        assert_eq!(s.values(v[0]), vec![1, 2]);
        assert_eq!(s.values(v[1]), vec![1, 2]);
        assert_eq!(s.values(v[2]), vec![2]);
    }

    #[test]
    fn prunes_y_below() {
        let mut s = store();
        let v = vars(&mut s, &[&[2], &[2], &[1, 2, 3]]);
        let c = MsetOrderingConstraint::new(&s, v[..2].to_vec(), vec![v[2]], false).unwrap();
        assert_eq!(propagate_msetord(&mut s, &c), PropagationOutcome::Entailed);
        assert_eq!(s.values(v[2]), vec![3]);
    }

    #[test]
    fn equal_bound_sides() {
        let mut s = store();
        let v = vars(&mut s, &[&[1], &[1]]);
        let leq = MsetOrderingConstraint::new(&s, vec![v[0]], vec![v[1]], false).unwrap();
        assert_eq!(propagate_msetord(&mut s, &leq), PropagationOutcome::Entailed);
        let lt = MsetOrderingConstraint::new(&s, vec![v[0]], vec![v[1]], true).unwrap();
        assert_eq!(propagate_msetord(&mut s, &lt), PropagationOutcome::Failure);
    }

    #[test]
    fn empty_sides() {
        let mut s = store();
        let c = MsetOrderingConstraint::<i64>::new(&s, vec![], vec![], false).unwrap();
        assert_eq!(propagate_msetord(&mut s, &c), PropagationOutcome::Entailed);
        let c = MsetOrderingConstraint::<i64>::new(&s, vec![], vec![], true).unwrap();
        assert_eq!(propagate_msetord(&mut s, &c), PropagationOutcome::Failure);

        let y = s.new_var([0, 1]).unwrap();
        let c = MsetOrderingConstraint::new(&s, vec![], vec![y], true).unwrap();
        assert_eq!(propagate_msetord(&mut s, &c), PropagationOutcome::Entailed);
        let x = s.new_var([0, 1]).unwrap();
        let c = MsetOrderingConstraint::new(&s, vec![x], vec![], false).unwrap();
        assert_eq!(propagate_msetord(&mut s, &c), PropagationOutcome::Failure);
    }

    #[test]
    fn repeated_variable_counts_twice() {
        // x occurs twice: {{x,x}} <= {{2,1}} forces x <= 1
        let mut s = store();
        let v = vars(&mut s, &[&[0, 1, 2], &[2], &[1]]);
        let c = MsetOrderingConstraint::new(&s, vec![v[0], v[0]], vec![v[1], v[2]], false).unwrap();
        assert_eq!(propagate_msetord(&mut s, &c), PropagationOutcome::Entailed);
        assert_eq!(s.values(v[0]), vec![0, 1]);
    }

    #[test]
    fn rejects_shared_and_unknown_variables() {
        let mut s = store();
        let v = vars(&mut s, &[&[0, 1], &[0, 1]]);
        assert!(matches!(
            MsetOrderingConstraint::new(&s, vec![v[0]], vec![v[1], v[0]], false),
            Err(Error::Model(_))
        ));
        assert!(MsetOrderingConstraint::new(&s, vec![VarId(9)], vec![v[1]], false).is_err());
    }

    #[test]
    fn thresholds_agree_with_lemma_on_holey_domains() {
        let mut s = store();
        let v = vars(&mut s, &[&[-3, 0, 4], &[1, 5, 7], &[-2, 4, 6], &[0, 4], &[3, 4, 5]]);
        let c = MsetOrderingConstraint::new(&s, v[..2].to_vec(), v[2..].to_vec(), false).unwrap();
        let keep_x: Vec<Vec<i64>> = v[..2]
            .iter()
            .map(|&x| s.values(x).into_iter().filter(|&a| lemma_supports_x(&s, &c, x, a)).collect())
            .collect();
        let keep_y: Vec<Vec<i64>> = v[2..]
            .iter()
            .map(|&y| s.values(y).into_iter().filter(|&a| lemma_supports_y(&s, &c, y, a)).collect())
            .collect();
        propagate_msetord(&mut s, &c);
        for (x, keep) in v[..2].iter().zip(&keep_x) {
            assert_eq!(&s.values(*x), keep);
        }
        for (y, keep) in v[2..].iter().zip(&keep_y) {
            assert_eq!(&s.values(*y), keep);
        }
    }
}
