//! Per-call timing of the multiset ordering propagator on large random
//! instances.

use std::time::Instant;

use msetord_core::propagators::propagate_msetord;
use msetord_core::{MsetOrd, Range, Store, VarId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{CliError, Result};

pub const MAX_N: usize = 1_000_000;
pub const MAX_D: usize = 100_000;
pub const DEFAULT_REPS: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PerfPoint {
    pub n: usize,
    pub d: usize,
    pub nanos_per_call: u128,
}

/// `n` x-variables and `n` y-variables with interval domains over `0..d`.
/// The x intervals are uniform; the y intervals end in the upper half of
/// the range, which keeps the instance satisfiable so every call does the
/// full scan instead of failing early.
pub fn random_instance(n: usize, d: usize, seed: u64) -> Result<(Store, MsetOrd)> {
    if n == 0 || n > MAX_N || d == 0 || d > MAX_D {
        return Err(CliError::Usage(format!(
            "perf needs 1 <= n <= {MAX_N} and 1 <= d <= {MAX_D}, got n={n} d={d}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = d as i64 - 1;
    let mut store = Store::new(Range::new(0, top)?);
    let mut interval = |store: &mut Store, lo: i64, hi_from: i64| -> msetord_core::Result<VarId> {
        let a = rng.gen_range(lo..=top);
        let b = rng.gen_range(a.max(hi_from)..=top);
        store.new_interval_var(a, b)
    };
    let xs = (0..n)
        .map(|_| interval(&mut store, 0, 0))
        .collect::<msetord_core::Result<Vec<_>>>()?;
    let ys = (0..n)
        .map(|_| interval(&mut store, 0, top / 2))
        .collect::<msetord_core::Result<Vec<_>>>()?;
    let c = MsetOrd::new(&store, xs, ys, false)?;
    Ok((store, c))
}

fn time_once(store: &mut Store, c: &MsetOrd) -> u128 {
    let mark = store.mark();
    let start = Instant::now();
    std::hint::black_box(propagate_msetord(store, c));
    let t = start.elapsed().as_nanos();
    store.undo_to(mark).expect("fresh mark");
    t
}

fn median(mut samples: Vec<u128>) -> u128 {
    samples.sort_unstable();
    samples[samples.len() / 2]
}

/// Median wall time of `reps` propagation calls, each starting from the
/// same domains. The undo between calls is not timed.
pub fn time_propagation(store: &mut Store, c: &MsetOrd, reps: usize) -> u128 {
    time_once(store, c);
    median((0..reps.max(1)).map(|_| time_once(store, c)).collect())
}

pub fn measure(n: usize, d: usize, seed: u64, reps: usize) -> Result<PerfPoint> {
    Ok(measure_all(&[(n, d)], seed, reps)?.remove(0))
}

/// Time every `(n, d)` point, one call per point per round, so drift in
/// machine speed during the run affects all points alike.
pub fn measure_all(points: &[(usize, usize)], seed: u64, reps: usize) -> Result<Vec<PerfPoint>> {
    let mut instances = points
        .iter()
        .map(|&(n, d)| random_instance(n, d, seed))
        .collect::<Result<Vec<_>>>()?;
    for (store, c) in instances.iter_mut() {
        time_once(store, c);
    }
    let mut samples = vec![Vec::with_capacity(reps); points.len()];
    for _ in 0..reps.max(1) {
        for ((store, c), out) in instances.iter_mut().zip(samples.iter_mut()) {
            out.push(time_once(store, c));
        }
    }
    Ok(points
        .iter()
        .zip(samples)
        .map(|(&(n, d), s)| PerfPoint { n, d, nanos_per_call: median(s) })
        .collect())
}

pub fn run_perf(ns: &[usize], ds: &[usize], seed: u64, reps: usize) -> Result<Vec<PerfPoint>> {
    if reps < DEFAULT_REPS {
        return Err(CliError::Usage(format!("--reps must be at least {DEFAULT_REPS}")));
    }
    let points: Vec<(usize, usize)> = ns.iter().flat_map(|&n| ds.iter().map(move |&d| (n, d))).collect();
    measure_all(&points, seed, reps)
}

pub fn render_csv(points: &[PerfPoint]) -> String {
    let mut out = String::from("n,d,nanos_per_call\n");
    for p in points {
        out.push_str(&format!("{},{},{}\n", p.n, p.d, p.nanos_per_call));
    }
    out
}
