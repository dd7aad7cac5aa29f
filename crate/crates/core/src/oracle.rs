//! Brute-force reference implementations for differential testing.
//!
//! Nothing here touches the occurrence-vector code or the propagators:
//! multisets are compared by sorting, and consistency is decided by walking
//! the full cartesian product of the domains.

use std::cmp::Ordering;

use crate::{Error, Result, Value};

/// Upper bound on the number of tuples any oracle will enumerate.
pub const ENUMERATION_GUARD: u64 = 10_000_000;

/// Sort both sequences descending and compare lexicographically; a proper
/// prefix is the smaller one.
pub fn oracle_compare<V: Ord + Copy>(a: &[V], b: &[V]) -> Ordering {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable_by(|p, q| q.cmp(p));
    b.sort_unstable_by(|p, q| q.cmp(p));
    a.cmp(&b)
}

/// A multiset ordering instance given by explicit value sets.
///
/// `domains` lists the distinct variables; `xs` and `ys` index into it, so a
/// variable may occur several times on one side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleInstance<V> {
    pub domains: Vec<Vec<V>>,
    pub xs: Vec<usize>,
    pub ys: Vec<usize>,
    pub strict: bool,
}

impl<V: Value> OracleInstance<V> {
    /// Every position its own variable.
    pub fn from_sides(xs: Vec<Vec<V>>, ys: Vec<Vec<V>>, strict: bool) -> Self {
        let n = xs.len();
        let m = ys.len();
        let mut domains = xs;
        domains.extend(ys);
        Self {
            domains,
            xs: (0..n).collect(),
            ys: (n..n + m).collect(),
            strict,
        }
    }

    fn holds(&self, tuple: &[V]) -> bool {
        let left: Vec<V> = self.xs.iter().map(|&i| tuple[i]).collect();
        let right: Vec<V> = self.ys.iter().map(|&i| tuple[i]).collect();
        match oracle_compare(&left, &right) {
            Ordering::Less => true,
            Ordering::Equal => !self.strict,
            Ordering::Greater => false,
        }
    }
}

fn guard<V>(domains: &[Vec<V>]) -> Result<()> {
    let mut total: u64 = 1;
    for d in domains {
        if d.is_empty() {
            return Err(Error::Model("empty domain in oracle instance".into()));
        }
        total = total.saturating_mul(d.len() as u64);
    }
    if total > ENUMERATION_GUARD {
        return Err(Error::OracleScope(format!(
            "{total} assignments exceed the guard of {ENUMERATION_GUARD}"
        )));
    }
    Ok(())
}

/// Visit every tuple of the cartesian product, first domain most
/// significant, values in the order given. Stops when `visit` returns false.
fn for_each_tuple<V: Copy>(domains: &[Vec<V>], mut visit: impl FnMut(&[usize], &[V]) -> bool) {
    let mut idx = vec![0usize; domains.len()];
    let mut tuple: Vec<V> = domains.iter().map(|d| d[0]).collect();
    loop {
        if !visit(&idx, &tuple) {
            return;
        }
        let mut k = domains.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < domains[k].len() {
                tuple[k] = domains[k][idx[k]];
                break;
            }
            idx[k] = 0;
            tuple[k] = domains[k][0];
        }
    }
}

/// Exact GAC domains for each distinct variable, or `None` when no tuple
/// satisfies the instance.
pub fn oracle_gac<V: Value>(inst: &OracleInstance<V>) -> Result<Option<Vec<Vec<V>>>> {
    guard(&inst.domains)?;
    let mut supported: Vec<Vec<bool>> = inst.domains.iter().map(|d| vec![false; d.len()]).collect();
    let mut any = false;
    for_each_tuple(&inst.domains, |idx, tuple| {
        if inst.holds(tuple) {
            any = true;
            for (k, &i) in idx.iter().enumerate() {
                supported[k][i] = true;
            }
        }
        true
    });
    if !any {
        return Ok(None);
    }
    let pruned = inst
        .domains
        .iter()
        .zip(&supported)
        .map(|(d, s)| {
            let mut kept: Vec<V> = d.iter().zip(s).filter(|(_, &ok)| ok).map(|(&v, _)| v).collect();
            kept.sort_unstable();
            kept
        })
        .collect();
    Ok(Some(pruned))
}

pub fn oracle_satisfiable<V: Value>(inst: &OracleInstance<V>) -> Result<bool> {
    guard(&inst.domains)?;
    let mut found = false;
    for_each_tuple(&inst.domains, |_, tuple| {
        found = inst.holds(tuple);
        !found
    });
    Ok(found)
}

/// Constraint semantics for whole-model enumeration. Indices refer to
/// variable positions in the domain list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleConstraint<V> {
    Mset { xs: Vec<usize>, ys: Vec<usize>, strict: bool },
    SumEq { vars: Vec<usize>, total: V },
    SumGeq { weights: Vec<V>, vars: Vec<usize>, bound: V },
    LexLeq { xs: Vec<usize>, ys: Vec<usize> },
}

impl<V: Value> OracleConstraint<V> {
    pub fn holds(&self, tuple: &[V]) -> bool {
        let pick = |ids: &[usize]| ids.iter().map(|&i| tuple[i]).collect::<Vec<V>>();
        match self {
            Self::Mset { xs, ys, strict } => match oracle_compare(&pick(xs), &pick(ys)) {
                Ordering::Less => true,
                Ordering::Equal => !strict,
                Ordering::Greater => false,
            },
            Self::SumEq { vars, total } => {
                vars.iter().fold(V::zero(), |acc, &i| acc + tuple[i]) == *total
            }
            Self::SumGeq { weights, vars, bound } => {
                weights
                    .iter()
                    .zip(vars)
                    .fold(V::zero(), |acc, (&w, &i)| acc + w * tuple[i])
                    >= *bound
            }
            Self::LexLeq { xs, ys } => pick(xs) <= pick(ys),
        }
    }
}

/// Every tuple satisfying all constraints, in lexicographic order of
/// (first variable, ascending values).
pub fn oracle_solutions<V: Value>(
    domains: &[Vec<V>],
    constraints: &[OracleConstraint<V>],
) -> Result<Vec<Vec<V>>> {
    guard(domains)?;
    let sorted: Vec<Vec<V>> = domains
        .iter()
        .map(|d| {
            let mut d = d.clone();
            d.sort_unstable();
            d.dedup();
            d
        })
        .collect();
    let mut out = Vec::new();
    for_each_tuple(&sorted, |_, tuple| {
        if constraints.iter().all(|c| c.holds(tuple)) {
            out.push(tuple.to_vec());
        }
        true
    });
    Ok(out)
}
