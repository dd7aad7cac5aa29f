//! Differential check of the propagator against full enumeration.

use msetord_core::oracle::{oracle_gac, OracleInstance, ENUMERATION_GUARD};
use msetord_core::{MsetOrd, PropagationOutcome, Range, Store};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::InstanceFile;
use crate::{CliError, Report, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckConfig {
    pub seed: u64,
    pub trials: u64,
    /// Largest length of either vector.
    pub max_n: usize,
    pub max_width: usize,
}

impl CheckConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_width == 0 {
            return Err(CliError::Usage("--max-width must be at least 1".into()));
        }
        let worst = (self.max_width as f64).powi(2 * self.max_n as i32);
        if worst > ENUMERATION_GUARD as f64 {
            return Err(CliError::Usage(format!(
                "max-n {} with max-width {} can need {worst:.0} assignments, above the oracle guard",
                self.max_n, self.max_width
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub trial: u64,
    pub instance: InstanceFile,
    pub expected: Option<Vec<Vec<i64>>>,
    pub got: Option<Vec<Vec<i64>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub trials: u64,
    pub mismatches: u64,
    pub first: Option<Counterexample>,
}

/// Instance `trial` of the stream for `seed`; independent of how many
/// trials run before it.
pub fn random_instance(seed: u64, trial: u64, max_n: usize, max_width: usize) -> InstanceFile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let width = rng.gen_range(1..=max_width) as i64;
    let lo = rng.gen_range(-2..=2);
    let domain = |rng: &mut ChaCha8Rng| loop {
        let d: Vec<i64> = (lo..lo + width).filter(|_| rng.gen_bool(0.5)).collect();
        if !d.is_empty() {
            break d;
        }
    };
    let n = rng.gen_range(0..=max_n);
    let m = rng.gen_range(0..=max_n);
    let xs = (0..n).map(|_| domain(&mut rng)).collect();
    let ys = (0..m).map(|_| domain(&mut rng)).collect();
    InstanceFile {
        range: Range::new(lo, lo + width - 1).unwrap(),
        strict: rng.gen_bool(0.5),
        xs,
        ys,
    }
}

/// Run `propagate` on every trial and compare against the oracle. The
/// propagator is a parameter so the harness itself can be tested with a
/// deliberately wrong one.
pub fn run_check<P>(cfg: &CheckConfig, propagate: P) -> Result<CheckReport>
where
    P: Fn(&mut Store, &MsetOrd) -> PropagationOutcome,
{
    cfg.validate()?;
    let mut report = CheckReport {
        trials: cfg.trials,
        mismatches: 0,
        first: None,
    };
    for trial in 0..cfg.trials {
        let inst = random_instance(cfg.seed, trial, cfg.max_n, cfg.max_width);
        let oracle_inst = OracleInstance::from_sides(inst.xs.clone(), inst.ys.clone(), inst.strict);
        let expected = oracle_gac(&oracle_inst)?;

        let (mut store, c, xs, ys) = inst.load()?;
        let got = match propagate(&mut store, &c) {
            PropagationOutcome::Failure => None,
            _ => Some(xs.iter().chain(&ys).map(|&v| store.values(v)).collect()),
        };
        if got != expected {
            report.mismatches += 1;
            report.first.get_or_insert(Counterexample {
                trial,
                instance: inst,
                expected,
                got,
            });
        }
    }
    Ok(report)
}

pub fn render(cfg: &CheckConfig, report: &CheckReport) -> Report {
    let mut text = format!("{} trials, {} mismatches\n", report.trials, report.mismatches);
    match &report.first {
        None => Report::ok(text),
        Some(cx) => {
            text.push_str(&format!(
                "first counterexample: seed {} trial {}\n{}expected: {:?}\ngot: {:?}\n",
                cfg.seed,
                cx.trial,
                cx.instance.to_text(),
                cx.expected,
                cx.got
            ));
            Report::failed(text)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use msetord_core::propagators::propagate_msetord;

    #[test]
    fn clean_run() {
        let cfg = CheckConfig { seed: 42, trials: 500, max_n: 4, max_width: 5 };
        let report = run_check(&cfg, propagate_msetord).unwrap();
        assert_eq!(report.mismatches, 0);
        assert_eq!(render(&cfg, &report), Report::ok("500 trials, 0 mismatches\n"));
    }

    #[test]
    fn broken_propagator_is_caught() {
        let cfg = CheckConfig { seed: 42, trials: 200, max_n: 3, max_width: 4 };
        let report = run_check(&cfg, |_, _| PropagationOutcome::Fixpoint).unwrap();
        assert!(report.mismatches > 0);
        let out = render(&cfg, &report);
        assert_eq!(out.code, 1);
        let cx = report.first.unwrap();
        assert!(out.text.contains(&format!("trial {}", cx.trial)));
        // the dump is a valid instance file that reproduces the trial
        assert_eq!(InstanceFile::parse(&cx.instance.to_text()).unwrap(), cx.instance);
        assert_eq!(random_instance(42, cx.trial, 3, 4), cx.instance);
    }

    #[test]
    fn zero_trials_pass() {
        let cfg = CheckConfig { seed: 1, trials: 0, max_n: 4, max_width: 5 };
        let report = run_check(&cfg, propagate_msetord).unwrap();
        assert_eq!(render(&cfg, &report), Report::ok("0 trials, 0 mismatches\n"));
    }

    #[test]
    fn guard_is_enforced() {
        let cfg = CheckConfig { seed: 1, trials: 1, max_n: 8, max_width: 10 };
        assert_eq!(run_check(&cfg, propagate_msetord).unwrap_err().exit_code(), 2);
    }
}
