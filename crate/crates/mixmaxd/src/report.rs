//! Human-readable and JSON summaries of a search.

use std::fmt::Write as _;
use std::time::Duration;

use mixmaxd_core::lattice::word_text;
use mixmaxd_core::{Regime, SearchOutcome};
use serde::Serialize;

use crate::io::format_sig;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub regime: String,
    /// Scaled metric.
    pub rho: f64,
    pub n: usize,
    pub m: u64,
    pub q: usize,
    pub r: usize,
    pub code: String,
    pub s: Vec<usize>,
    pub u: String,
    /// Scaled levels per dimension.
    pub levels: Vec<Vec<f64>>,
    pub ties: usize,
    pub evaluated: u64,
    pub improvements: Vec<f64>,
    pub wall_seconds: f64,
}

pub fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::Auto => "auto",
        Regime::Exhaustive => "exhaustive",
        Regime::Qrs => "qrs",
        Regime::Extend => "extend",
    }
}

pub fn summarize(outcome: &SearchOutcome, n: usize, elapsed: Duration) -> Summary {
    let spec = outcome.certificate();
    let code = spec.code();
    Summary {
        regime: regime_name(outcome.regime).into(),
        rho: outcome.rho,
        n,
        m: outcome.m,
        q: code.q(),
        r: code.r(),
        code: code.canonical_text(),
        s: spec.sizes().to_vec(),
        u: word_text(spec.shift(), code.p()),
        levels: spec.levels().iter().map(|l| l.values().to_vec()).collect(),
        ties: outcome.ties.len(),
        evaluated: outcome.evaluated,
        improvements: outcome.trace.iter().filter(|t| t.improved).map(|t| t.rho).collect(),
        wall_seconds: elapsed.as_secs_f64(),
    }
}

pub fn human(summary: &Summary, names: &[String]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "regime      {}", summary.regime);
    let _ = writeln!(out, "rho         {} (scaled metric)", format_sig(summary.rho));
    let _ = writeln!(out, "runs        m = {} for n = {}", summary.m, summary.n);
    let _ = writeln!(out, "lattice     q = {}, r = {}, H = {{{}}}", summary.q, summary.r, summary.code);
    let _ = writeln!(out, "sizes       {:?}", summary.s);
    let _ = writeln!(out, "translation {}", summary.u);
    for (name, levels) in names.iter().zip(&summary.levels) {
        let cells: Vec<String> = levels.iter().map(|&v| format_sig(v)).collect();
        let _ = writeln!(out, "levels      {name}: {{{}}}", cells.join(", "));
    }
    let _ = writeln!(out, "ties        {}", summary.ties);
    let _ = writeln!(out, "evaluated   {}", summary.evaluated);
    let _ = writeln!(out, "wall time   {:.3} s", summary.wall_seconds);
    out
}
