//! Instance files and the `compare` / `propagate` commands.
//!
//! ```text
//! range 0 3
//! rel leq          # or: rel lt
//! x 2 : 1,2,3 | 1,2,3
//! y 2 : 2 | 2
//! ```

use std::fmt::Write as _;

use msetord_core::propagators::{check_entailed, propagate_msetord};
use msetord_core::{Mset, MsetOrd, PropagationOutcome, Range, Store, VarId};

use crate::{CliError, Report, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub range: Range,
    pub strict: bool,
    pub xs: Vec<Vec<i64>>,
    pub ys: Vec<Vec<i64>>,
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn parse_int(tok: &str, line: usize) -> Result<i64> {
    tok.trim()
        .parse()
        .map_err(|_| CliError::parse(line, format!("expected an integer, found {tok:?}")))
}

fn parse_vector(rest: &str, line: usize, range: Range) -> Result<Vec<Vec<i64>>> {
    let (count, doms) = rest
        .split_once(':')
        .ok_or_else(|| CliError::parse(line, "missing ':' after vector length"))?;
    let count: usize = count
        .trim()
        .parse()
        .map_err(|_| CliError::parse(line, format!("bad vector length {:?}", count.trim())))?;
    let doms = doms.trim();
    let parsed: Vec<Vec<i64>> = if doms.is_empty() {
        Vec::new()
    } else {
        doms.split('|')
            .map(|d| {
                let mut vals = d
                    .split(',')
                    .map(|t| parse_int(t, line))
                    .collect::<Result<Vec<i64>>>()?;
                if let Some(v) = vals.iter().find(|v| !range.contains(**v)) {
                    return Err(CliError::parse(line, format!("value {v} outside range {range}")));
                }
                vals.sort_unstable();
                vals.dedup();
                Ok(vals)
            })
            .collect::<Result<_>>()?
    };
    if parsed.len() != count {
        return Err(CliError::parse(
            line,
            format!("declared {count} variables but listed {} domains", parsed.len()),
        ));
    }
    Ok(parsed)
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut range = None;
        let mut strict = None;
        let mut xs = None;
        let mut ys = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = strip_comment(raw);
            if body.is_empty() {
                continue;
            }
            let (key, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
            match key {
                "range" => {
                    let toks: Vec<&str> = rest.split_whitespace().collect();
                    if toks.len() != 2 {
                        return Err(CliError::parse(line, "expected 'range <lo> <hi>'"));
                    }
                    let r = Range::new(parse_int(toks[0], line)?, parse_int(toks[1], line)?)
                        .map_err(|e| CliError::parse(line, e.to_string()))?;
                    range = Some(r);
                }
                "rel" => {
                    strict = Some(match rest.trim() {
                        "leq" => false,
                        "lt" => true,
                        other => return Err(CliError::parse(line, format!("unknown relation {other:?}"))),
                    });
                }
                "x" | "y" => {
                    let r = range.ok_or_else(|| CliError::parse(line, "'range' must come first"))?;
                    let slot = if key == "x" { &mut xs } else { &mut ys };
                    if slot.is_some() {
                        return Err(CliError::parse(line, format!("duplicate '{key}' line")));
                    }
                    let doms = parse_vector(rest, line, r)?;
                    *slot = Some(doms);
                }
                other => return Err(CliError::parse(line, format!("unknown directive {other:?}"))),
            }
        }
        let last = text.lines().count().max(1);
        Ok(Self {
            range: range.ok_or_else(|| CliError::parse(last, "missing 'range' line"))?,
            strict: strict.ok_or_else(|| CliError::parse(last, "missing 'rel' line"))?,
            xs: xs.ok_or_else(|| CliError::parse(last, "missing 'x' line"))?,
            ys: ys.ok_or_else(|| CliError::parse(last, "missing 'y' line"))?,
        })
    }

    /// Render back to the file format; `parse(to_text())` round-trips.
    pub fn to_text(&self) -> String {
        let side = |doms: &[Vec<i64>]| {
            doms.iter()
                .map(|d| d.iter().map(i64::to_string).collect::<Vec<_>>().join(","))
                .collect::<Vec<_>>()
                .join(" | ")
        };
        format!(
            "range {} {}\nrel {}\nx {} : {}\ny {} : {}\n",
            self.range.lo(),
            self.range.hi(),
            if self.strict { "lt" } else { "leq" },
            self.xs.len(),
            side(&self.xs),
            self.ys.len(),
            side(&self.ys),
        )
    }

    pub fn load(&self) -> Result<(Store, MsetOrd, Vec<VarId>, Vec<VarId>)> {
        let mut store = Store::new(self.range);
        let xs = self
            .xs
            .iter()
            .map(|d| store.new_var(d.iter().copied()))
            .collect::<msetord_core::Result<Vec<_>>>()?;
        let ys = self
            .ys
            .iter()
            .map(|d| store.new_var(d.iter().copied()))
            .collect::<msetord_core::Result<Vec<_>>>()?;
        let c = MsetOrd::new(&store, xs.clone(), ys.clone(), self.strict)?;
        Ok((store, c, xs, ys))
    }
}

fn render_domains(store: &Store, xs: &[VarId], ys: &[VarId], out: &mut String) {
    for (prefix, vars) in [("x", xs), ("y", ys)] {
        for (i, &v) in vars.iter().enumerate() {
            let _ = writeln!(out, "{prefix}{}: {}", i + 1, store.domain(v));
        }
    }
}

/// Propagate the instance once. Prints the pruned domains, `FAILURE`
/// (exit 1), or `ENTAILED` followed by the untouched domains when the input
/// already satisfies the relation for every assignment.
pub fn cmd_propagate(text: &str, force_strict: bool) -> Result<Report> {
    let mut inst = InstanceFile::parse(text)?;
    inst.strict |= force_strict;
    let (mut store, c, xs, ys) = inst.load()?;
    let mut out = String::new();
    if check_entailed(&store, &c) {
        out.push_str("ENTAILED\n");
        render_domains(&store, &xs, &ys, &mut out);
        return Ok(Report::ok(out));
    }
    if propagate_msetord(&mut store, &c) == PropagationOutcome::Failure {
        return Ok(Report::failed("FAILURE\n"));
    }
    render_domains(&store, &xs, &ys, &mut out);
    Ok(Report::ok(out))
}

/// Whitespace- or comma-separated integers; the empty string is the empty
/// multiset.
pub fn parse_multiset(literal: &str) -> Result<Vec<i64>> {
    literal
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| parse_int(t, 1))
        .collect()
}

pub fn cmd_compare(a: &str, b: &str) -> Result<Report> {
    let a = parse_multiset(a)?;
    let b = parse_multiset(b)?;
    let lo = a.iter().chain(&b).min().copied().unwrap_or(0);
    let hi = a.iter().chain(&b).max().copied().unwrap_or(0);
    let range = Range::new(lo, hi)?;
    let ma = Mset::from_values(a, range)?;
    let mb = Mset::from_values(b, range)?;
    let word = match ma.compare(&mb)? {
        std::cmp::Ordering::Less => "LESS",
        std::cmp::Ordering::Equal => "EQUAL",
        std::cmp::Ordering::Greater => "GREATER",
    };
    Ok(Report::ok(format!("{word}\n")))
}

/// Two-line file: one multiset literal per line.
pub fn cmd_compare_file(text: &str) -> Result<Report> {
    let lines: Vec<&str> = text.lines().map(strip_comment).collect();
    if lines.len() != 2 {
        return Err(CliError::parse(lines.len().max(1), "expected exactly two multiset lines"));
    }
    cmd_compare(lines[0], lines[1])
}
