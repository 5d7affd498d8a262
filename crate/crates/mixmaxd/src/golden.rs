//! Reference cases with frozen expected values.

use std::time::{Duration, Instant};

use anyhow::{bail, Result};
use mixmaxd_core::assembly::{realize, separation, separation_bruteforce, DesignSpec, DEFAULT_ROW_CAP};
use mixmaxd_core::lattice::{count_points, standard_generators, word_text};
use mixmaxd_core::levels::{family_discrete, LevelSet};
use mixmaxd_core::oracle::oracle_family;
use mixmaxd_core::space::{parse_rational, FactorDomain, FactorSpace, Rational};
use mixmaxd_core::{construct, SearchOptions};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoldenResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

pub type CaseFn = fn() -> Result<(bool, String)>;

pub const CASES: &[(&str, CaseFn)] = &[
    ("mixed-end-to-end", mixed_end_to_end),
    ("mixed-ladder", mixed_ladder),
    ("cube-ten-runs", cube_ten_runs),
    ("ten-level-families", ten_level_families),
    ("translation-sizes", translation_sizes),
];

pub const TEN_LEVELS: &str = "0,0.12,0.24,0.36,0.48,0.6,0.72,0.84,0.96,1";

pub fn rationals(csv: &str) -> Vec<Rational> {
    csv.split(',').map(|t| parse_rational(t.trim()).expect("literal decimal")).collect()
}

/// Ten ordinal levels in the first dimension, two unit intervals after it.
pub fn mixed_space(n: usize) -> FactorSpace {
    let one = Rational::from_integer(1.into());
    let dims = vec![
        FactorDomain::discrete(rationals(TEN_LEVELS), one.clone()).expect("valid levels"),
        FactorDomain::continuous(one.clone()).expect("positive weight"),
        FactorDomain::continuous(one).expect("positive weight"),
    ];
    FactorSpace::new(dims, n).expect("valid space")
}

pub fn unit_cube(p: usize, n: usize) -> FactorSpace {
    let one = Rational::from_integer(1.into());
    FactorSpace::new(vec![FactorDomain::continuous(one).expect("positive weight"); p], n)
        .expect("valid space")
}

pub fn run(filter: Option<&str>) -> Vec<GoldenResult> {
    CASES
        .iter()
        .filter(|(name, _)| filter.is_none_or(|f| name.contains(f)))
        .map(|&(name, case)| {
            let start = Instant::now();
            let (passed, detail) = case().unwrap_or_else(|e| (false, format!("error: {e:#}")));
            GoldenResult { name, passed, detail, seconds: start.elapsed().as_secs_f64() }
        })
        .collect()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn mixed_end_to_end() -> Result<(bool, String)> {
    let start = Instant::now();
    let out = construct(&mixed_space(62), &SearchOptions::default())?;
    let elapsed = start.elapsed();
    let spec = out.certificate();
    let [_, even, _] = standard_generators(3)?;
    let y1 = spec.levels()[0].exact().map(<[Rational]>::to_vec);
    let checks = [
        ("rho", close(out.rho, 0.3466, 1e-4)),
        ("m", out.m == 62),
        ("code", *spec.code() == even),
        ("s", spec.sizes() == [5, 5, 5]),
        ("Y1", y1 == Some(rationals("0,0.24,0.48,0.72,1"))),
        ("time", elapsed < Duration::from_secs(10)),
    ];
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    Ok((
        failed.is_empty(),
        format!(
            "rho {:.6}, m {}, H {{{}}}, s {:?}, u {}, {:.3} s; failed: {:?}",
            out.rho,
            out.m,
            spec.code(),
            spec.sizes(),
            word_text(spec.shift(), 3),
            elapsed.as_secs_f64(),
            failed
        ),
    ))
}

pub const LADDER: [f64; 10] = [0.067, 0.100, 0.143, 0.167, 0.200, 0.250, 0.280, 0.299, 0.300, 0.347];

fn mixed_ladder() -> Result<(bool, String)> {
    let out = construct(&mixed_space(62), &SearchOptions::default())?;
    let seen: Vec<f64> = out.trace.iter().filter(|t| t.improved).map(|t| t.rho).collect();
    let ok = seen.len() == LADDER.len() && seen.iter().zip(LADDER).all(|(a, b)| close(*a, b, 1e-3));
    let text: Vec<String> = seen.iter().map(|r| format!("{r:.3}")).collect();
    Ok((ok, format!("improvements: {}", text.join(" "))))
}

fn cube_ten_runs() -> Result<(bool, String)> {
    let out = construct(&unit_cube(3, 10), &SearchOptions::default())?;
    let levels: Vec<&[f64]> = out.certificate().levels().iter().map(LevelSet::values).collect();
    let four = [0.0, 0.25, 0.75, 1.0];
    let three = [0.0, 0.5, 1.0];
    let matches = |a: &[f64], b: &[f64]| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| close(*x, *y, 1e-9));
    let fours = levels.iter().filter(|l| matches(l, &four)).count();
    let threes = levels.iter().filter(|l| matches(l, &three)).count();
    let ok = close(out.rho, 0.75, 1e-9) && out.m == 10 && fours == 1 && threes == 2;
    Ok((ok, format!("rho {:.12}, m {}, levels {:?}", out.rho, out.m, levels)))
}

/// Reference minimal sufficient sets for `s = 2..=9`.
pub const REFERENCE_FAMILIES: [(usize, &[&str]); 8] = [
    (2, &["0,1"]),
    (3, &["0,0.48,1"]),
    (4, &["0,0.36,0.72,1", "0,0.24,0.72,1", "0,0.24,0.84,1", "0,0.12,0.84,1"]),
    (5, &["0,0.24,0.48,0.72,1"]),
    (6, &["0,0.12,0.36,0.48,0.72,1"]),
    (7, &["0,0.12,0.36,0.48,0.72,0.84,1"]),
    (8, &["0,0.12,0.36,0.48,0.60,0.72,0.84,1"]),
    (9, &["0,0.12,0.24,0.36,0.48,0.60,0.72,0.84,1"]),
];

fn ten_level_families() -> Result<(bool, String)> {
    let g = rationals(TEN_LEVELS);
    let mut differ = Vec::new();
    let mut oracle_mismatch = Vec::new();
    for (s, reference) in REFERENCE_FAMILIES {
        let fam = family_discrete(&g, s)?;
        let got: Vec<Vec<Rational>> =
            fam.members().iter().map(|m| m.exact().map(<[Rational]>::to_vec).unwrap_or_default()).collect();
        let want: Vec<Vec<Rational>> = reference.iter().map(|t| rationals(t)).collect();
        if got != want {
            differ.push(s);
        }
        let oracle: Vec<(Rational, Option<Rational>)> =
            oracle_family(&g, s)?.into_iter().map(|o| (o.d_star, o.d_plus)).collect();
        let pairs: Vec<(Rational, Option<Rational>)> = fam
            .members()
            .iter()
            .map(|m| {
                let e = m.exact().expect("discrete members are exact");
                let ds = e.windows(2).map(|w| &w[1] - &w[0]).min().expect("two levels");
                (ds, e.windows(3).map(|w| &w[2] - &w[0]).min())
            })
            .collect();
        if pairs != oracle {
            oracle_mismatch.push(s);
        }
    }
    if !oracle_mismatch.is_empty() {
        bail!("families disagree with the subset oracle for s in {oracle_mismatch:?}");
    }
    Ok((
        differ.is_empty(),
        format!("oracle agrees for s = 2..9; level sets differ from the reference table for s in {differ:?}"),
    ))
}

fn translation_sizes() -> Result<(bool, String)> {
    let [_, even, _] = standard_generators(3)?;
    let s = vec![5, 5, 5];
    let y1 = LevelSet::from_exact(rationals("0,0.24,0.48,0.72,1"))?;
    let y = LevelSet::from_f64(vec![0.0, 0.25, 0.5, 0.75, 1.0])?;
    let mut rhos = Vec::new();
    let mut counts = Vec::new();
    for u in [0, 0b100] {
        let spec = DesignSpec::new(even.clone(), s.clone(), u, vec![y1.clone(), y.clone(), y.clone()])?;
        counts.push(count_points(&even, &s, u)?);
        let design = realize(&spec, DEFAULT_ROW_CAP)?;
        rhos.push((separation_bruteforce(&design)?, separation(&spec)));
    }
    let ok = counts == [63, 62]
        && close(rhos[0].0, rhos[1].0, 1e-9)
        && rhos.iter().all(|&(b, f)| close(b, f, 1e-9) && close(b, 0.3466, 1e-4));
    Ok((ok, format!("m {counts:?}, brute-force rho {:.12} / {:.12}", rhos[0].0, rhos[1].0)))
}
