//! Ranking assignments of a small soft-constraint problem by the multiset
//! of their violation costs: the best assignments are those whose cost
//! multiset is minimal, so the worst violation is reduced first.
//!
//! ```text
//! var x : 0,1,2
//! var y : 0,1
//! soft c1 on x y : 0,0=2 ; 1,1=1
//! ```
//! Tuples not listed in a table cost 0.

use std::cmp::Ordering;
use std::collections::HashMap;

use msetord_core::{Mset, Range};

use crate::{CliError, Report, Result};

pub const MAX_COST: i64 = 4;
pub const MAX_ASSIGNMENTS: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoftConstraint {
    pub name: String,
    pub scope: Vec<usize>,
    pub costs: HashMap<Vec<i64>, i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzyProblem {
    pub names: Vec<String>,
    pub domains: Vec<Vec<i64>>,
    pub soft: Vec<SoftConstraint>,
}

fn ints(list: &str, line: usize) -> Result<Vec<i64>> {
    list.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| CliError::parse(line, format!("expected an integer, found {t:?}")))
        })
        .collect()
}

impl FuzzyProblem {
    pub fn parse(text: &str) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        let mut domains = Vec::new();
        let mut soft = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (head, rest) = body
                .split_once(':')
                .ok_or_else(|| CliError::parse(line, "missing ':'"))?;
            let words: Vec<&str> = head.split_whitespace().collect();
            match words.as_slice() {
                ["var", name] => {
                    if names.iter().any(|n| n == name) {
                        return Err(CliError::parse(line, format!("variable {name} declared twice")));
                    }
                    let mut d = ints(rest, line)?;
                    d.sort_unstable();
                    d.dedup();
                    names.push(name.to_string());
                    domains.push(d);
                }
                ["soft", name, "on", vars @ ..] if !vars.is_empty() => {
                    let scope = vars
                        .iter()
                        .map(|v| {
                            names
                                .iter()
                                .position(|n| n == v)
                                .ok_or_else(|| CliError::parse(line, format!("unknown variable {v}")))
                        })
                        .collect::<Result<Vec<usize>>>()?;
                    let mut costs = HashMap::new();
                    for entry in rest.split(';').map(str::trim).filter(|e| !e.is_empty()) {
                        let (tuple, cost) = entry
                            .split_once('=')
                            .ok_or_else(|| CliError::parse(line, format!("missing '=' in {entry:?}")))?;
                        let tuple = ints(tuple, line)?;
                        if tuple.len() != scope.len() {
                            return Err(CliError::parse(
                                line,
                                format!("tuple {tuple:?} does not match {} variables", scope.len()),
                            ));
                        }
                        let cost: i64 = cost
                            .trim()
                            .parse()
                            .map_err(|_| CliError::parse(line, format!("bad cost {cost:?}")))?;
                        if !(0..=MAX_COST).contains(&cost) {
                            return Err(CliError::parse(line, format!("cost {cost} outside 0..={MAX_COST}")));
                        }
                        costs.insert(tuple, cost);
                    }
                    soft.push(SoftConstraint {
                        name: name.to_string(),
                        scope,
                        costs,
                    });
                }
                _ => return Err(CliError::parse(line, format!("cannot read {head:?}"))),
            }
        }
        if names.is_empty() {
            return Err(CliError::parse(1, "no variables declared"));
        }
        if let Some(i) = domains.iter().position(Vec::is_empty) {
            return Err(CliError::Usage(format!("variable {} has an empty domain", names[i])));
        }
        let total = domains.iter().fold(1u64, |acc, d| acc.saturating_mul(d.len() as u64));
        if total > MAX_ASSIGNMENTS {
            return Err(CliError::Usage(format!(
                "{total} assignments exceed the limit of {MAX_ASSIGNMENTS}"
            )));
        }
        Ok(Self { names, domains, soft })
    }

    fn profile(&self, assignment: &[i64], range: Range) -> Mset {
        let costs = self.soft.iter().map(|c| {
            let key: Vec<i64> = c.scope.iter().map(|&i| assignment[i]).collect();
            c.costs.get(&key).copied().unwrap_or(0)
        });
        Mset::from_values(costs, range).expect("costs validated at parse time")
    }

    /// All assignments with a minimal cost multiset, in enumeration order.
    pub fn best(&self) -> (Mset, Vec<Vec<i64>>) {
        let range = Range::new(0, MAX_COST).unwrap();
        let mut best: Option<Mset> = None;
        let mut winners = Vec::new();
        let mut idx = vec![0usize; self.domains.len()];
        'outer: loop {
            let assignment: Vec<i64> = idx.iter().zip(&self.domains).map(|(&i, d)| d[i]).collect();
            let profile = self.profile(&assignment, range);
            let ord = best.as_ref().map_or(Ordering::Less, |b| profile.compare(b).unwrap());
            match ord {
                Ordering::Less => {
                    best = Some(profile);
                    winners = vec![assignment];
                }
                Ordering::Equal => winners.push(assignment),
                Ordering::Greater => {}
            }
            for k in (0..idx.len()).rev() {
                idx[k] += 1;
                if idx[k] < self.domains[k].len() {
                    continue 'outer;
                }
                idx[k] = 0;
            }
            break;
        }
        (best.expect("at least one assignment"), winners)
    }
}

pub fn cmd_fuzzy(text: &str) -> Result<Report> {
    let problem = FuzzyProblem::parse(text)?;
    let (profile, winners) = problem.best();
    let mut out = format!("best profile {profile} ({} assignments)\n", winners.len());
    for w in &winners {
        let line: Vec<String> = problem.names.iter().zip(w).map(|(n, v)| format!("{n}={v}")).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    Ok(Report::ok(out))
}
