//! Re-checks a certificate against a design file.
//!
//! The shallow checks recompute `m`, lattice membership and the pairwise
//! separation from the rows themselves. `deep` adds the brute-force oracles
//! wherever they fit in their budgets.

use anyhow::Result;
use mixmaxd_core::assembly::{realize, separation, separation_bruteforce, DEFAULT_ROW_CAP};
use mixmaxd_core::lattice::count_points;
use mixmaxd_core::oracle::{
    oracle_count, oracle_family, oracle_tiny_maximin, OracleError, OracleReport,
};
use mixmaxd_core::space::{to_f64, Rational};

use crate::io::Certificate;

/// Coordinates are printed with twelve significant digits.
const ROW_TOL: f64 = 1e-9;
const RHO_TOL: f64 = 1e-9;
const PAIRWISE_CAP: usize = 20_000;

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub checks: Vec<OracleReport>,
    /// Checks that did not fit their budget.
    pub skipped: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.agree)
    }

    fn push(&mut self, subject: impl Into<String>, oracle: f64, fast: f64, tolerance: f64) {
        self.checks.push(OracleReport::new(subject, oracle, fast, tolerance));
    }

    fn flag(&mut self, subject: impl Into<String>, ok: bool) {
        self.push(subject, 1.0, if ok { 1.0 } else { 0.0 }, 0.0);
    }

    fn budget<T>(&mut self, subject: &str, r: Result<T, OracleError>) -> Result<Option<T>> {
        match r {
            Ok(v) => Ok(Some(v)),
            Err(e @ OracleError::BudgetExceeded { .. }) => {
                self.skipped.push(format!("{subject}: {e}"));
                Ok(None)
            }
            Err(e) => Err(e.into()),
        }
    }

    pub fn table(&self) -> String {
        let mut out = format!("{:<34} {:>16} {:>16} {:>9}  {}\n", "check", "oracle", "fast", "tol", "ok");
        for c in &self.checks {
            out.push_str(&format!(
                "{:<34} {:>16.12} {:>16.12} {:>9.1e}  {}\n",
                c.subject,
                c.oracle,
                c.fast,
                c.tolerance,
                if c.agree { "yes" } else { "NO" }
            ));
        }
        for s in &self.skipped {
            out.push_str(&format!("skipped: {s}\n"));
        }
        out
    }
}

/// `rows` are in the original, unscaled units.
pub fn verify(cert: &Certificate, rows: &[Vec<f64>], deep: bool) -> Result<VerifyReport> {
    let spec = cert.spec()?;
    let weights: Vec<f64> = cert.weights()?.iter().map(to_f64).collect();
    let p = cert.p;
    let mut report = VerifyReport::default();

    let m = count_points(spec.code(), spec.sizes(), spec.shift())?;
    report.push("m (lattice count)", cert.m as f64, m as f64, 0.0);
    report.push("m (rows in file)", cert.m as f64, rows.len() as f64, 0.0);
    report.flag("m >= n", m >= cert.n as u64);
    report.flag("row width", rows.iter().all(|r| r.len() == p));
    if rows.iter().any(|r| r.len() != p) {
        return Ok(report);
    }

    let scaled: Vec<Vec<f64>> =
        rows.iter().map(|r| r.iter().zip(&weights).map(|(x, w)| x * w).collect()).collect();

    // Each coordinate must be a chosen level and the parity word must lie
    // in the translated code.
    let off_lattice = scaled
        .iter()
        .filter(|row| {
            let mut word = 0u32;
            for (k, &x) in row.iter().enumerate() {
                let levels = &cert.levels[k];
                match levels.iter().position(|&l| (l - x).abs() <= ROW_TOL * weights[k].max(1.0)) {
                    Some(i) => word |= ((i % 2) as u32) << k,
                    None => return true,
                }
            }
            !spec.code().contains(word ^ spec.shift())
        })
        .count();
    report.push("rows off the lattice", 0.0, off_lattice as f64, 0.0);

    let design = realize(&spec, DEFAULT_ROW_CAP)?;
    let mut expected: Vec<Vec<f64>> = design
        .rows()
        .map(|r| r.iter().zip(&weights).map(|(x, w)| x / w).collect())
        .collect();
    let mut got = rows.to_vec();
    let lex = |a: &Vec<f64>, b: &Vec<f64>| {
        a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(core::cmp::Ordering::Equal)
    };
    expected.sort_by(lex);
    got.sort_by(lex);
    let drift = if expected.len() == got.len() {
        expected
            .iter()
            .zip(&got)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    report.push("rows vs realization (max |diff|)", 0.0, drift, ROW_TOL);

    report.push("rho (lattice formula)", cert.rho, separation(&spec), RHO_TOL);
    if scaled.len() <= PAIRWISE_CAP {
        report.push("rho (pairwise on rows)", cert.rho, pairwise(&scaled), RHO_TOL);
    } else {
        report.skipped.push(format!("rho (pairwise on rows): {} rows", scaled.len()));
    }

    if deep {
        deep_checks(cert, &spec, &design, &mut report)?;
    }
    Ok(report)
}

fn pairwise(rows: &[Vec<f64>]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let d: f64 = rows[i].iter().zip(&rows[j]).map(|(a, b)| (a - b) * (a - b)).sum();
            best = best.min(d);
        }
    }
    best.sqrt()
}

fn deep_checks(
    cert: &Certificate,
    spec: &mixmaxd_core::DesignSpec,
    design: &mixmaxd_core::Design,
    report: &mut VerifyReport,
) -> Result<()> {
    let m = spec.count();
    if let Some(c) =
        report.budget("oracle count", oracle_count(spec.code(), spec.sizes(), spec.shift()))?
    {
        report.push("m (box enumeration)", m as f64, c as f64, 0.0);
    }
    match separation_bruteforce(design) {
        Ok(rho) => report.push("rho (brute force on realization)", separation(spec), rho, RHO_TOL),
        Err(e) => report.skipped.push(format!("rho (brute force on realization): {e}")),
    }

    let ground = cert.ground()?;
    for (k, g) in ground.iter().enumerate() {
        let s = cert.s[k];
        match g {
            Some(g) => {
                let exact = spec.levels()[k].exact().map(<[Rational]>::to_vec);
                let Some(y) = exact else {
                    report.flag(format!("dim {} levels exact", k + 1), false);
                    continue;
                };
                let subject = format!("dim {} admissible (s = {s})", k + 1);
                if let Some(front) = report.budget(&subject, oracle_family(g, s))? {
                    let ds = y.windows(2).map(|w| &w[1] - &w[0]).min();
                    let dp = y.windows(3).map(|w| &w[2] - &w[0]).min();
                    let on_front = front.iter().any(|f| Some(&f.d_star) == ds.as_ref() && f.d_plus == dp);
                    let in_ground = y.iter().all(|v| g.contains(v));
                    report.flag(subject, on_front && in_ground);
                }
            }
            None => {
                let y = &cert.levels[k];
                let w = to_f64(&cert.weights()?[k]);
                let gaps: Vec<f64> = y.windows(2).map(|p| p[1] - p[0]).collect();
                let even = |start: usize| {
                    let v: Vec<f64> = gaps.iter().skip(start).step_by(2).copied().collect();
                    v.iter().all(|g| (g - v[0]).abs() <= 1e-9)
                };
                let shape = if s % 2 == 1 {
                    gaps.iter().all(|g| (g - gaps[0]).abs() <= 1e-9)
                } else {
                    even(0) && (gaps.len() < 2 || even(1))
                };
                let ends = y[0].abs() <= 1e-12 && (y[y.len() - 1] - w).abs() <= 1e-9;
                report.flag(format!("dim {} continuous shape (s = {s})", k + 1), shape && ends);
            }
        }
    }

    if ground.iter().all(Option::is_some) {
        let grid: Vec<Vec<f64>> =
            ground.iter().flatten().map(|g| g.iter().map(to_f64).collect()).collect();
        if let Some(best) = report.budget("tiny maximin", oracle_tiny_maximin(&grid, cert.n))? {
            report.push("rho <= exhaustive maximin", 0.0, (cert.rho - best).max(0.0), RHO_TOL);
        }
    }
    Ok(())
}
