//! Benchmark model generators and CSV reporting.
//!
//! Both families are matrix models with interchangeable vectors: rows of
//! the symmetric matrix, template columns of the template-design model. A
//! symmetry scheme chains adjacent vectors with a multiset or lex ordering.

use std::fmt;
use std::str::FromStr;

use msetord_core::{IntModel, Range, SearchStats, VarId};

use crate::{CliError, Result};

pub const CSV_HEADER: &str = "model,scheme,params,solutions,nodes,failures,propagations,millis";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    None,
    Msetord,
    Lex,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::None, Scheme::Msetord, Scheme::Lex];
}

impl FromStr for Scheme {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Self::None),
            "msetord" => Ok(Self::Msetord),
            "lex" => Ok(Self::Lex),
            other => Err(CliError::Usage(format!("unknown scheme {other:?} (none|msetord|lex)"))),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::None => "none",
            Self::Msetord => "msetord",
            Self::Lex => "lex",
        })
    }
}

/// `k` interchangeable rows of `n` variables over `0..=d`, each row summing
/// to `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymmetricMatrix {
    pub k: usize,
    pub n: usize,
    pub d: i64,
    pub s: i64,
}

/// `t` interchangeable templates with `slots` slots each, `v` variations.
/// `a[i][j]` is the number of slots of variation `i` on template `j`; every
/// template is full and variation `i` is printed at least `demands[i]`
/// times with `runs` pressings of each template.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateDesign {
    pub t: usize,
    pub v: usize,
    pub slots: i64,
    pub runs: i64,
    pub demands: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BenchModel {
    SymmetricMatrix(SymmetricMatrix),
    TemplateDesign(TemplateDesign),
}

/// A generated model plus the interchangeable vectors, each listed as
/// variable ids.
#[derive(Debug)]
pub struct Built {
    pub model: IntModel,
    pub vectors: Vec<Vec<VarId>>,
}

fn chain(model: &mut IntModel, vectors: &[Vec<VarId>], scheme: Scheme) -> Result<()> {
    for pair in vectors.windows(2) {
        match scheme {
            Scheme::None => {}
            Scheme::Msetord => {
                model.post_msetord(pair[0].clone(), pair[1].clone(), false)?;
            }
            Scheme::Lex => {
                model.post_lex_leq(pair[0].clone(), pair[1].clone())?;
            }
        }
    }
    Ok(())
}

fn bound_check(name: &str, value: i64, lo: i64, hi: i64) -> Result<()> {
    if value < lo || value > hi {
        return Err(CliError::Usage(format!("{name}={value} outside {lo}..={hi}")));
    }
    Ok(())
}

impl SymmetricMatrix {
    pub fn validate(&self) -> Result<()> {
        bound_check("k", self.k as i64, 1, 12)?;
        bound_check("n", self.n as i64, 1, 12)?;
        bound_check("d", self.d, 0, 30)?;
        bound_check("s", self.s, 0, self.n as i64 * self.d)
    }

    pub fn build(&self, scheme: Scheme) -> Result<Built> {
        self.validate()?;
        let mut model = IntModel::new(Range::new(0, self.d)?);
        let mut rows = Vec::with_capacity(self.k);
        for _ in 0..self.k {
            let row = (0..self.n)
                .map(|_| model.new_interval_var(0, self.d))
                .collect::<msetord_core::Result<Vec<_>>>()?;
            model.post_sum_eq(row.clone(), self.s)?;
            rows.push(row);
        }
        chain(&mut model, &rows, scheme)?;
        Ok(Built { model, vectors: rows })
    }
}

impl TemplateDesign {
    pub fn validate(&self) -> Result<()> {
        bound_check("t", self.t as i64, 1, 8)?;
        bound_check("v", self.v as i64, 1, 8)?;
        bound_check("s", self.slots, 1, 12)?;
        bound_check("runs", self.runs, 1, 1000)?;
        if self.demands.len() != self.v {
            return Err(CliError::Usage(format!(
                "{} demands given for {} variations",
                self.demands.len(),
                self.v
            )));
        }
        for &d in &self.demands {
            bound_check("demand", d, 0, 1_000_000)?;
        }
        Ok(())
    }

    pub fn build(&self, scheme: Scheme) -> Result<Built> {
        self.validate()?;
        let mut model = IntModel::new(Range::new(0, self.slots)?);
        // row-major: a[i][j] is variable i * t + j
        let mut a = Vec::with_capacity(self.v);
        for _ in 0..self.v {
            let row = (0..self.t)
                .map(|_| model.new_interval_var(0, self.slots))
                .collect::<msetord_core::Result<Vec<_>>>()?;
            a.push(row);
        }
        let templates: Vec<Vec<VarId>> = (0..self.t).map(|j| a.iter().map(|row| row[j]).collect()).collect();
        for col in &templates {
            model.post_sum_eq(col.clone(), self.slots)?;
        }
        for (row, &demand) in a.iter().zip(&self.demands) {
            model.post_sum_geq(vec![self.runs; self.t], row.clone(), demand)?;
        }
        chain(&mut model, &templates, scheme)?;
        Ok(Built { model, vectors: templates })
    }
}

impl BenchModel {
    pub fn name(&self) -> &'static str {
        match self {
            Self::SymmetricMatrix(_) => "symmetric-matrix",
            Self::TemplateDesign(_) => "template-design",
        }
    }

    pub fn params(&self) -> String {
        match self {
            Self::SymmetricMatrix(m) => format!("k={} n={} d={} s={}", m.k, m.n, m.d, m.s),
            Self::TemplateDesign(m) => format!(
                "t={} v={} s={} runs={} demands={}",
                m.t,
                m.v,
                m.slots,
                m.runs,
                m.demands.iter().map(i64::to_string).collect::<Vec<_>>().join(":")
            ),
        }
    }

    pub fn build(&self, scheme: Scheme) -> Result<Built> {
        match self {
            Self::SymmetricMatrix(m) => m.build(scheme),
            Self::TemplateDesign(m) => m.build(scheme),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub model: BenchModel,
    pub schemes: Vec<Scheme>,
    pub limit: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub model: &'static str,
    pub scheme: Scheme,
    pub params: String,
    pub stats: SearchStats,
}

impl BenchRow {
    pub fn to_csv(&self) -> String {
        let s = &self.stats;
        format!(
            "{},{},{},{},{},{},{},{}",
            self.model,
            self.scheme,
            self.params,
            s.solutions,
            s.nodes,
            s.failures,
            s.propagations,
            s.elapsed.as_millis()
        )
    }
}

pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    cfg.schemes
        .iter()
        .map(|&scheme| {
            let mut built = cfg.model.build(scheme)?;
            let (_, stats) = built.model.solve_all(cfg.limit);
            Ok(BenchRow {
                model: cfg.model.name(),
                scheme,
                params: cfg.model.params(),
                stats,
            })
        })
        .collect()
}

pub fn render_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_csv());
        out.push('\n');
    }
    out
}
