//! Acceptance suite. Runs each criterion in turn and prints one PASS/FAIL
//! line per criterion; exits non-zero if any criterion fails.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::process::ExitCode;
use std::time::Instant;

use msetord_cli::bench::{self, BenchConfig, BenchModel, Scheme, SymmetricMatrix, TemplateDesign};
use msetord_cli::check;
use msetord_cli::perf;
use msetord_core::oracle::{oracle_compare, oracle_gac, oracle_satisfiable, oracle_solutions, OracleConstraint, OracleInstance};
use msetord_core::propagators::{check_disentailed, propagate_msetord};
use msetord_core::{mset_compare, IntModel, Mset, MsetOrd, PropagationOutcome, Range, Store, VarId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const SWEEP_WIDTH: i64 = 4;
const SWEEP_MAX_LEN: usize = 3;

struct Outcome {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn mask_domain(mask: u32) -> Vec<i64> {
    (0..SWEEP_WIDTH).filter(|v| mask & (1 << v) != 0).collect()
}

/// Nondecreasing mask sequences of length `len`: one representative per
/// multiset of domains.
fn sorted_sides(len: usize, from: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if prefix.len() == len {
        out.push(prefix.clone());
        return;
    }
    let top = (1u32 << SWEEP_WIDTH) - 1;
    for m in from..=top {
        prefix.push(m);
        sorted_sides(len, m, prefix, out);
        prefix.pop();
    }
}

fn ordered_sides(len: usize) -> Vec<Vec<u32>> {
    let top = (1u32 << SWEEP_WIDTH) - 1;
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p| {
                (1..=top).map(move |m| {
                    let mut q = p.clone();
                    q.push(m);
                    q
                })
            })
            .collect();
    }
    out
}

/// Every domain combination up to reordering within a side for
/// n, m <= 3, plus every ordered combination when n + m <= 4.
fn sweep_instances() -> Vec<(Vec<u32>, Vec<u32>, bool)> {
    let mut sorted = Vec::new();
    for len in 0..=SWEEP_MAX_LEN {
        sorted_sides(len, 1, &mut Vec::new(), &mut sorted);
    }
    let mut out = Vec::new();
    for strict in [false, true] {
        for xs in &sorted {
            for ys in &sorted {
                out.push((xs.clone(), ys.clone(), strict));
            }
        }
        for n in 0..=SWEEP_MAX_LEN {
            for m in 0..=(4 - n).min(SWEEP_MAX_LEN) {
                for xs in ordered_sides(n) {
                    for ys in ordered_sides(m) {
                        let already = xs.windows(2).all(|w| w[0] <= w[1]) && ys.windows(2).all(|w| w[0] <= w[1]);
                        if !already {
                            out.push((xs.clone(), ys.clone(), strict));
                        }
                    }
                }
            }
        }
    }
    out
}

fn load(xs: &[Vec<i64>], ys: &[Vec<i64>], strict: bool, range: Range) -> (Store, MsetOrd, Vec<VarId>) {
    let mut store = Store::new(range);
    let vars: Vec<VarId> = xs
        .iter()
        .chain(ys)
        .map(|d| store.new_var(d.iter().copied()).unwrap())
        .collect();
    let c = MsetOrd::new(&store, vars[..xs.len()].to_vec(), vars[xs.len()..].to_vec(), strict).unwrap();
    (store, c, vars)
}

#[derive(Default, Clone, Copy)]
struct SweepTally {
    instances: u64,
    gac_mismatches: u64,
    lemma_mismatches: u64,
    not_idempotent: u64,
}

impl SweepTally {
    fn merge(self, o: Self) -> Self {
        Self {
            instances: self.instances + o.instances,
            gac_mismatches: self.gac_mismatches + o.gac_mismatches,
            lemma_mismatches: self.lemma_mismatches + o.lemma_mismatches,
            not_idempotent: self.not_idempotent + o.not_idempotent,
        }
    }
}

fn sweep_one(xs: &[Vec<i64>], ys: &[Vec<i64>], strict: bool) -> SweepTally {
    let inst = OracleInstance::from_sides(xs.to_vec(), ys.to_vec(), strict);
    let expected = oracle_gac(&inst).unwrap();
    let satisfiable = oracle_satisfiable(&inst).unwrap();
    let (mut store, c, vars) = load(xs, ys, strict, Range::new(0, SWEEP_WIDTH - 1).unwrap());
    let mut t = SweepTally { instances: 1, ..Default::default() };
    if check_disentailed(&store, &c) == satisfiable {
        t.lemma_mismatches += 1;
    }
    let first = propagate_msetord(&mut store, &c);
    let got = (first != PropagationOutcome::Failure).then(|| vars.iter().map(|&v| store.values(v)).collect::<Vec<_>>());
    if got != expected {
        t.gac_mismatches += 1;
    }
    if let Some(snapshot) = got {
        propagate_msetord(&mut store, &c);
        let again: Vec<Vec<i64>> = vars.iter().map(|&v| store.values(v)).collect();
        if again != snapshot {
            t.not_idempotent += 1;
        }
    }
    t
}

fn random_gac(seed: u64, trials: u64) -> (u64, u64) {
    let mismatches = (0..trials)
        .into_par_iter()
        .filter(|&trial| {
            let inst = check::random_instance(seed, trial, 5, 6);
            let expected = oracle_gac(&OracleInstance::from_sides(inst.xs.clone(), inst.ys.clone(), inst.strict));
            let (mut store, c, vars) = load(&inst.xs, &inst.ys, inst.strict, inst.range);
            let got = match propagate_msetord(&mut store, &c) {
                PropagationOutcome::Failure => None,
                _ => Some(vars.iter().map(|&v| store.values(v)).collect::<Vec<_>>()),
            };
            !matches!(expected, Ok(e) if e == got)
        })
        .count() as u64;
    (trials, mismatches)
}

fn criterion_3() -> Outcome {
    let range = Range::new(0, 4).unwrap();
    let mut family: Vec<Vec<i64>> = Vec::new();
    fn grow(prefix: &mut Vec<i64>, from: i64, out: &mut Vec<Vec<i64>>) {
        out.push(prefix.clone());
        if prefix.len() == 4 {
            return;
        }
        for v in from..5 {
            prefix.push(v);
            grow(prefix, v, out);
            prefix.pop();
        }
    }
    grow(&mut Vec::new(), 0, &mut family);
    let msets: Vec<Mset> = family.iter().map(|f| Mset::from_values(f.iter().copied(), range).unwrap()).collect();
    let n = family.len();
    let mut table = vec![Ordering::Equal; n * n];
    let mut failures = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let got = mset_compare(&msets[i], &msets[j]).unwrap();
            table[i * n + j] = got;
            if got != oracle_compare(&family[i], &family[j]) {
                failures.push(format!("{:?} vs {:?}", family[i], family[j]));
            }
        }
    }
    let mut mirror_ok = true;
    let mut totality_ok = true;
    for i in 0..n {
        for j in 0..n {
            mirror_ok &= table[i * n + j] == table[j * n + i].reverse();
            totality_ok &= (table[i * n + j] == Ordering::Equal) == (i == j);
        }
    }
    let le = |i: usize, j: usize| table[i * n + j] != Ordering::Greater;
    let transitive = (0..n).into_par_iter().all(|i| {
        (0..n).all(|j| !le(i, j) || (0..n).all(|k| !le(j, k) || le(i, k)))
    });

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut random_bad = 0u64;
    for _ in 0..100_000 {
        let lo = rng.gen_range(-20..=20);
        let width = rng.gen_range(1..=12);
        let side = |rng: &mut ChaCha8Rng| -> Vec<i64> {
            (0..rng.gen_range(0..=10)).map(|_| rng.gen_range(lo..lo + width)).collect()
        };
        let a = side(&mut rng);
        let b = side(&mut rng);
        let r = Range::new(lo, lo + width - 1).unwrap();
        let got = mset_compare(
            &Mset::from_values(a.iter().copied(), r).unwrap(),
            &Mset::from_values(b.iter().copied(), r).unwrap(),
        )
        .unwrap();
        if got != oracle_compare(&a, &b) {
            random_bad += 1;
        }
    }
    let pass = failures.is_empty() && random_bad == 0 && mirror_ok && totality_ok && transitive;
    verdict(
        pass,
        format!(
            "{n} multisets, {} exhaustive mismatches, 100000 random pairs with {random_bad} mismatches, totality {totality_ok}, mirror {mirror_ok}, transitivity {transitive}",
            failures.len()
        ),
    )
}

fn criterion_4() -> Outcome {
    let reps = 21;
    let by_n = perf::measure_all(&[(100_000, 100), (200_000, 100), (1_000_000, 100)], 7, reps).unwrap();
    let by_d = perf::measure_all(&[(1_000, 10_000), (1_000, 20_000)], 7, reps).unwrap();
    let t = |p: &perf::PerfPoint| p.nanos_per_call as f64;
    let (n1, n2, n10) = (t(&by_n[0]), t(&by_n[1]), t(&by_n[2]));
    let (d1, d2) = (t(&by_d[0]), t(&by_d[1]));
    let rn = n2 / n1;
    let rd = d2 / d1;
    let r10 = n10 / n1;
    verdict(
        rn < 2.5 && rd < 2.5 && r10 < 20.0,
        format!(
            "n 2e5/1e5 = {rn:.2} (< 2.5), d 2e4/1e4 = {rd:.2} (< 2.5), n 1e6/1e5 = {r10:.2} (< 20); medians {n1:.0}/{n2:.0}/{n10:.0} ns and {d1:.0}/{d2:.0} ns"
        ),
    )
}

fn criterion_5() -> Outcome {
    let sm = SymmetricMatrix { k: 3, n: 2, d: 2, s: 2 };
    let solve = |scheme| {
        let mut b = sm.build(scheme).unwrap();
        b.model.solve_all(None).0
    };
    let none = solve(Scheme::None);
    let mset: HashSet<Vec<i64>> = solve(Scheme::Msetord).into_iter().collect();
    let rows = |s: &[i64]| s.chunks(sm.n).map(<[i64]>::to_vec).collect::<Vec<_>>();
    let canonical: HashSet<Vec<i64>> = none
        .iter()
        .filter(|s| rows(s).windows(2).all(|w| oracle_compare(&w[0], &w[1]) != Ordering::Greater))
        .cloned()
        .collect();
    let covered = none
        .iter()
        .filter(|s| {
            let mut r = rows(s);
            r.sort_by(|a, b| oracle_compare(a, b));
            mset.contains(&r.concat())
        })
        .count();
    let pass = none.len() == 27 && mset.len() < 27 && mset == canonical && covered == none.len();
    verdict(
        pass,
        format!(
            "none {} (want 27), msetord {} vs {} canonical representatives, class coverage {covered}/{}",
            none.len(),
            mset.len(),
            canonical.len(),
            none.len()
        ),
    )
}

struct RandomModel {
    domains: Vec<Vec<i64>>,
    constraints: Vec<OracleConstraint<i64>>,
}

impl RandomModel {
    fn generate(rng: &mut ChaCha8Rng) -> Self {
        let nvars = rng.gen_range(1..=6);
        let width = rng.gen_range(1..=4);
        let domains: Vec<Vec<i64>> = (0..nvars)
            .map(|_| loop {
                let d: Vec<i64> = (0..width).filter(|_| rng.gen_bool(0.7)).collect();
                if !d.is_empty() {
                    break d;
                }
            })
            .collect();
        let mut constraints = Vec::new();
        for _ in 0..rng.gen_range(1..=4) {
            let mut ids: Vec<usize> = (0..nvars).collect();
            ids.shuffle(rng);
            let c = match rng.gen_range(0..4) {
                0 => {
                    let split = rng.gen_range(0..=nvars);
                    OracleConstraint::Mset {
                        xs: ids[..split].to_vec(),
                        ys: ids[split..].to_vec(),
                        strict: rng.gen_bool(0.3),
                    }
                }
                1 => {
                    let k = rng.gen_range(1..=nvars);
                    let total = rng.gen_range(0..=(k as i64) * (width - 1));
                    OracleConstraint::SumEq { vars: ids[..k].to_vec(), total }
                }
                2 => {
                    let k = rng.gen_range(1..=nvars);
                    let weights = (0..k).map(|_| rng.gen_range(0..=3)).collect();
                    OracleConstraint::SumGeq { weights, vars: ids[..k].to_vec(), bound: rng.gen_range(0..=(k as i64) * 3) }
                }
                _ => {
                    let k = rng.gen_range(0..=nvars / 2);
                    OracleConstraint::LexLeq { xs: ids[..k].to_vec(), ys: ids[k..2 * k].to_vec() }
                }
            };
            constraints.push(c);
        }
        Self { domains, constraints }
    }

    fn solve(&self) -> Vec<Vec<i64>> {
        let mut m = IntModel::new(Range::new(0, 3).unwrap());
        let vars: Vec<VarId> = self.domains.iter().map(|d| m.new_var(d.iter().copied()).unwrap()).collect();
        let map = |ids: &[usize]| ids.iter().map(|&i| vars[i]).collect::<Vec<_>>();
        for c in &self.constraints {
            match c {
                OracleConstraint::Mset { xs, ys, strict } => m.post_msetord(map(xs), map(ys), *strict),
                OracleConstraint::SumEq { vars, total } => m.post_sum_eq(map(vars), *total),
                OracleConstraint::SumGeq { weights, vars, bound } => m.post_sum_geq(weights.clone(), map(vars), *bound),
                OracleConstraint::LexLeq { xs, ys } => m.post_lex_leq(map(xs), map(ys)),
            }
            .unwrap();
        }
        m.solve_all(None).0
    }
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut mismatches = 0;
    let mut total_solutions = 0;
    for _ in 0..1000 {
        let rm = RandomModel::generate(&mut rng);
        let expected = oracle_solutions(&rm.domains, &rm.constraints).unwrap();
        total_solutions += expected.len();
        if rm.solve() != expected {
            mismatches += 1;
        }
    }
    verdict(
        mismatches == 0,
        format!("1000 models, {total_solutions} solutions in total, {mismatches} mismatches"),
    )
}

fn bench_counts() -> Vec<(Scheme, u64, u64, u64, u64)> {
    let models = [
        BenchModel::SymmetricMatrix(SymmetricMatrix { k: 4, n: 3, d: 3, s: 4 }),
        BenchModel::TemplateDesign(TemplateDesign { t: 3, v: 3, slots: 3, runs: 2, demands: vec![4, 2, 6] }),
    ];
    models
        .into_iter()
        .flat_map(|model| {
            let cfg = BenchConfig { model, schemes: Scheme::ALL.to_vec(), limit: None };
            bench::run_bench(&cfg).unwrap()
        })
        .map(|r| (r.scheme, r.stats.solutions, r.stats.nodes, r.stats.failures, r.stats.propagations))
        .collect()
}

fn main() -> ExitCode {
    let mut all_pass = true;
    let mut report = |id: u32, name: &str, started: Instant, o: Outcome| {
        all_pass &= o.pass;
        println!(
            "criterion {id} {name}: {} ({}; {:.1}s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            started.elapsed().as_secs_f64()
        );
    };

    let started = Instant::now();
    let sweep = sweep_instances();
    let tally = sweep
        .par_iter()
        .map(|(xs, ys, strict)| {
            let xs: Vec<Vec<i64>> = xs.iter().map(|&m| mask_domain(m)).collect();
            let ys: Vec<Vec<i64>> = ys.iter().map(|&m| mask_domain(m)).collect();
            sweep_one(&xs, &ys, *strict)
        })
        .reduce(SweepTally::default, SweepTally::merge);
    let (random_trials, random_bad) = random_gac(42, 10_000);
    report(
        1,
        "oracle equivalence",
        started,
        verdict(
            tally.gac_mismatches == 0 && random_bad == 0,
            format!(
                "{} exhaustive instances with {} mismatches, {random_trials} random instances with {random_bad} mismatches",
                tally.instances, tally.gac_mismatches
            ),
        ),
    );
    report(
        2,
        "support lemma",
        Instant::now(),
        verdict(
            tally.lemma_mismatches == 0,
            format!("{} instances, {} disagreements with enumeration", tally.instances, tally.lemma_mismatches),
        ),
    );

    let t = Instant::now();
    report(3, "comparison", t, criterion_3());
    let t = Instant::now();
    report(4, "linear time", t, criterion_4());
    let t = Instant::now();
    report(5, "symmetry breaking soundness", t, criterion_5());
    let t = Instant::now();
    report(6, "solver ground truth", t, criterion_6());

    let t = Instant::now();
    let first = bench_counts();
    let second = bench_counts();
    report(
        7,
        "idempotence and determinism",
        t,
        verdict(
            tally.not_idempotent == 0 && first == second,
            format!(
                "{} instances with {} changed by a second call, {} bench rows identical across runs: {}",
                tally.instances,
                tally.not_idempotent,
                first.len(),
                first == second
            ),
        ),
    );

    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
