//! Subcommand implementations. Each returns the text to print and the exit
//! status; `main` only parses arguments and writes output.

use std::fmt;

use serde::Serialize;
use slicetower::homology::bredon_homology;
use slicetower::mackey::parse_coefficients;
use slicetower::tower::{tower, verify_tower};
use slicetower::{parse_rep, Error, Group};

use crate::document::TowerDocument;
use crate::render::{render_latex, render_text};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Latex,
}

/// A domain or usage error, reported with exit status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        match e {
            Error::EvenPrime => UsageError(
                "p = 2 is not supported: slice towers here are only defined for odd primes".into(),
            ),
            other => UsageError(other.to_string()),
        }
    }
}

impl From<serde_json::Error> for UsageError {
    fn from(e: serde_json::Error) -> Self {
        UsageError(format!("could not serialize output: {e}"))
    }
}

pub struct Output {
    pub stdout: String,
    pub code: i32,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { stdout, code: EXIT_OK }
    }
}

pub type CmdResult = std::result::Result<Output, UsageError>;

pub fn group(p: u64, k: u32) -> std::result::Result<Group, UsageError> {
    Ok(Group::new(p, k)?)
}

fn json<T: Serialize>(value: &T) -> std::result::Result<String, UsageError> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

pub fn tower_document(p: u64, k: u32, n: i64, verify: bool) -> std::result::Result<TowerDocument, UsageError> {
    let g = group(p, k)?;
    let t = tower(n, &g)?;
    let checks = if verify { Some(verify_tower(&t)?) } else { None };
    Ok(TowerDocument::new(&t, checks.as_deref()))
}

pub fn cmd_tower(p: u64, k: u32, n: i64, format: Format, verify: bool) -> CmdResult {
    let doc = tower_document(p, k, n, verify)?;
    let stdout = match format {
        Format::Text => render_text(&doc),
        Format::Json => json(&doc)?,
        Format::Latex => render_latex(&doc),
    };
    let code = if doc.all_passed() { EXIT_OK } else { EXIT_VERIFY_FAILED };
    Ok(Output { stdout, code })
}

/// Parses `A..B` (inclusive) or a single `N`.
pub fn parse_range(s: &str) -> std::result::Result<(i64, i64), UsageError> {
    let bad = || UsageError(format!("invalid degree range '{s}', expected N or A..B"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if lo > hi || lo < 0 {
        return Err(bad());
    }
    Ok((lo, hi))
}

#[derive(Serialize)]
struct VerifyReport {
    p: u64,
    k: u32,
    towers: Vec<TowerDocument>,
    slices: usize,
    failures: usize,
}

pub fn cmd_verify(p: u64, k: u32, range: (i64, i64), format: Format) -> CmdResult {
    let mut towers = Vec::new();
    for n in range.0..=range.1 {
        towers.push(tower_document(p, k, n, true)?);
    }
    let slices = towers.iter().map(|t| t.stages.len()).sum();
    let failed = |t: &TowerDocument| t.stages.iter().filter(|s| !s.verification.as_ref().is_some_and(|v| v.passed)).count();
    let failures = towers.iter().map(failed).sum();
    let code = if failures == 0 { EXIT_OK } else { EXIT_VERIFY_FAILED };
    let stdout = match format {
        Format::Json => json(&VerifyReport { p, k, towers, slices, failures })?,
        _ => {
            let mut out = String::new();
            for t in &towers {
                let bad = failed(t);
                let status = if bad == 0 { "ok" } else { "FAILED" };
                out.push_str(&format!("n = {:<3} {:>2} slices  {status}\n", t.metadata.n, t.stages.len()));
                for s in &t.stages {
                    if let Some(f) = s.verification.as_ref().and_then(|v| v.failure.as_ref()) {
                        out.push_str(&format!("    dim {}: {f:?}\n", s.slice.dim));
                    }
                }
            }
            let g = &towers.first().map(|t| t.metadata.group.clone()).unwrap_or_default();
            out.push_str(&format!("{g}: {slices} slices checked, {failures} failed\n"));
            out
        }
    };
    Ok(Output { stdout, code })
}

/// Which level of a Mackey-functor-valued answer to print.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Top,
    All,
    At(u32),
}

pub fn parse_level(s: &str) -> std::result::Result<Level, String> {
    match s {
        "top" => Ok(Level::Top),
        "all" => Ok(Level::All),
        other => other.parse().map(Level::At).map_err(|_| format!("expected 'top', 'all' or a level number, got '{other}'")),
    }
}

fn orbit(g: &Group, level: u32) -> String {
    match level {
        0 => "G/e".into(),
        l => format!("G/C_{}", g.pow(l)),
    }
}

#[derive(Serialize)]
struct HomologyReport {
    rep: String,
    coefficients: String,
    degree: i64,
    /// bottom (`G/e`) first
    levels: Vec<String>,
}

pub fn cmd_homology(rep: &str, coeff: &str, degree: i64, level: Level, p: u64, k: u32, format: Format) -> CmdResult {
    let g = group(p, k)?;
    let v = parse_rep(rep, &g).map_err(|e| UsageError(format!("--rep: {e}")))?;
    let m = parse_coefficients(coeff, &g).map_err(|e| UsageError(format!("--coeff: {e}")))?;
    let h = bredon_homology(&v.split(), &m, degree)?;
    let values: Vec<String> = h.values().iter().map(|a| a.to_string()).collect();
    let chosen: Vec<u32> = match level {
        Level::Top => vec![k],
        Level::All => (0..=k).rev().collect(),
        Level::At(l) if l <= k => vec![l],
        Level::At(l) => return Err(Error::LevelOutOfRange { level: l, k }.into()),
    };
    let stdout = match format {
        Format::Json => json(&HomologyReport {
            rep: v.ascii_string(),
            coefficients: m.name().to_string(),
            degree,
            levels: values,
        })?,
        _ if chosen.len() == 1 => format!("{}\n", values[chosen[0] as usize]),
        _ => chosen
            .iter()
            .map(|&l| format!("{:<6} {}\n", orbit(&g, l), values[l as usize]))
            .collect(),
    };
    Ok(Output::ok(stdout))
}

pub fn cmd_mackey(show: &str, p: u64, k: u32, format: Format) -> CmdResult {
    let g = group(p, k)?;
    let m = parse_coefficients(show, &g)?;
    let stdout = match format {
        Format::Json => json(&m.summary())?,
        _ => m.lewis_diagram() + "\n",
    };
    Ok(Output::ok(stdout))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3..12").unwrap(), (3, 12));
        assert_eq!(parse_range("7").unwrap(), (7, 7));
        assert!(parse_range("5..3").is_err());
        assert!(parse_range("a..3").is_err());
    }

    #[test]
    fn levels() {
        assert_eq!(parse_level("top").unwrap(), Level::Top);
        assert_eq!(parse_level("1").unwrap(), Level::At(1));
        assert!(parse_level("x").is_err());
    }

    #[test]
    fn even_prime_message() {
        let e = group(2, 1).err().unwrap();
        assert!(e.0.contains("odd prime"));
    }
}
