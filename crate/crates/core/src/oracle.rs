//! Brute-force reference computations.
//!
//! Nothing here calls into the optimized paths; each routine recomputes its
//! answer from definitions with its own arithmetic.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::lattice::{BinaryCode, Word};
use crate::space::Rational;

pub const COUNT_BUDGET: u64 = 10_000_000;
pub const FAMILY_BUDGET: u64 = 1_000_000;
pub const MAXIMIN_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("oracle budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid oracle input: {0}")]
    Invalid(&'static str),
}

/// One comparison between a fast path and its oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub subject: String,
    pub oracle: f64,
    pub fast: f64,
    pub agree: bool,
    pub tolerance: f64,
}

impl OracleReport {
    pub fn new(subject: impl Into<String>, oracle: f64, fast: f64, tolerance: f64) -> Self {
        let agree = (oracle - fast).abs() <= tolerance;
        Self { subject: subject.into(), oracle, fast, agree, tolerance }
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Counts `x ∈ prod [0, s_k - 1]` with `(x mod 2) xor u` in the code by
/// visiting every point of the box.
pub fn oracle_count(code: &BinaryCode, s: &[usize], u: Word) -> Result<u64, OracleError> {
    let p = code.p();
    if s.len() != p {
        return Err(OracleError::DimensionMismatch { expected: p, got: s.len() });
    }
    let volume = s.iter().try_fold(1u64, |acc, &z| acc.checked_mul(z as u64)).unwrap_or(u64::MAX);
    if volume > COUNT_BUDGET {
        return Err(OracleError::BudgetExceeded { needed: volume, budget: COUNT_BUDGET });
    }
    if volume == 0 {
        return Ok(0);
    }
    let mut x = alloc::vec![0usize; p];
    let mut count = 0;
    loop {
        let mut parity: Word = 0;
        for (k, &v) in x.iter().enumerate() {
            if v % 2 == 1 {
                parity |= 1 << k;
            }
        }
        if code.words().contains(&(parity ^ u)) {
            count += 1;
        }
        let mut k = 0;
        while k < p {
            x[k] += 1;
            if x[k] < s[k] {
                break;
            }
            x[k] = 0;
            k += 1;
        }
        if k == p {
            return Ok(count);
        }
    }
}

/// An admissible subset with its exact gaps (`None` = `+∞`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleMember {
    pub levels: Vec<Rational>,
    pub d_star: Rational,
    pub d_plus: Option<Rational>,
}

/// Pareto-maximal `(d*, d+)` pairs over all `s`-subsets of `G` containing
/// `min(G)` and `max(G)`, one witness per pair, sorted by decreasing `d*`.
pub fn oracle_family(g: &[Rational], s: usize) -> Result<Vec<OracleMember>, OracleError> {
    let mut g = g.to_vec();
    g.sort();
    g.dedup();
    let len = g.len();
    if s < 2 || s > len {
        return Err(OracleError::Invalid("size out of range"));
    }
    let needed = binomial(len as u64 - 2, s as u64 - 2);
    if needed > FAMILY_BUDGET {
        return Err(OracleError::BudgetExceeded { needed, budget: FAMILY_BUDGET });
    }
    // Work in integers over a common denominator.
    let den = g.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<i128> = g
        .iter()
        .map(|r| (r.numer() * (&den / r.denom())).to_i128())
        .collect::<Option<_>>()
        .ok_or(OracleError::Invalid("levels too large for integer scaling"))?;

    let mut pairs: Vec<(i128, i128, Vec<usize>)> = Vec::new();
    let inner = s - 2;
    let mut pick: Vec<usize> = (1..=inner).collect();
    loop {
        let mut idx = alloc::vec![0];
        idx.extend_from_slice(&pick);
        idx.push(len - 1);
        let v: Vec<i128> = idx.iter().map(|&i| ints[i]).collect();
        let ds = (1..v.len()).map(|i| v[i] - v[i - 1]).min().unwrap_or(0);
        let dp = (2..v.len()).map(|i| v[i] - v[i - 2]).min().unwrap_or(i128::MAX);
        pairs.push((ds, dp, idx));
        // Next combination of `inner` indices from 1..=len-2.
        let mut i = inner;
        loop {
            if i == 0 {
                return Ok(pareto(pairs, &g, &den));
            }
            i -= 1;
            if pick[i] < len - 2 - (inner - 1 - i) {
                pick[i] += 1;
                for j in i + 1..inner {
                    pick[j] = pick[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn pareto(pairs: Vec<(i128, i128, Vec<usize>)>, g: &[Rational], den: &BigInt) -> Vec<OracleMember> {
    let mut front: Vec<(i128, i128, Vec<usize>)> = Vec::new();
    for (a, b, idx) in &pairs {
        let dominated = pairs
            .iter()
            .any(|(c, d, _)| c >= a && d >= b && (c, d) != (a, b));
        if !dominated && !front.iter().any(|(c, d, _)| (c, d) == (a, b)) {
            front.push((*a, *b, idx.clone()));
        }
    }
    front.sort_by_key(|x| core::cmp::Reverse(x.0));
    let to_rational = |v: i128| Rational::new(BigInt::from(v), den.clone());
    front
        .into_iter()
        .map(|(a, b, idx)| OracleMember {
            levels: idx.iter().map(|&i| g[i].clone()).collect(),
            d_star: to_rational(a),
            d_plus: (b != i128::MAX).then(|| to_rational(b)),
        })
        .collect()
}

/// Largest minimum pairwise distance over all `n`-point subsets of the
/// full grid `prod levels[k]`.
pub fn oracle_tiny_maximin(levels: &[Vec<f64>], n: usize) -> Result<f64, OracleError> {
    if levels.is_empty() || levels.iter().any(Vec::is_empty) {
        return Err(OracleError::Invalid("empty grid"));
    }
    let mut grid: Vec<Vec<f64>> = alloc::vec![Vec::new()];
    for axis in levels {
        grid = grid
            .iter()
            .flat_map(|pt| {
                axis.iter().map(move |&v| {
                    let mut q = pt.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    let size = grid.len();
    if n < 2 || n > size {
        return Err(OracleError::Invalid("run count out of range"));
    }
    let needed = binomial(size as u64, n as u64);
    if needed > MAXIMIN_BUDGET {
        return Err(OracleError::BudgetExceeded { needed, budget: MAXIMIN_BUDGET });
    }
    let mut dist = alloc::vec![0.0; size * size];
    for i in 0..size {
        for j in 0..size {
            dist[i * size + j] =
                grid[i].iter().zip(&grid[j]).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
        }
    }
    let mut best = 0.0f64;
    let mut chosen = Vec::with_capacity(n);
    subsets(&dist, size, n, 0, f64::INFINITY, &mut chosen, &mut best);
    Ok(libm::sqrt(best))
}

fn subsets(
    dist: &[f64],
    size: usize,
    n: usize,
    start: usize,
    current: f64,
    chosen: &mut Vec<usize>,
    best: &mut f64,
) {
    if chosen.len() == n {
        *best = best.max(current);
        return;
    }
    for i in start..size {
        if size - i < n - chosen.len() {
            break;
        }
        let mut m = current;
        for &c in chosen.iter() {
            m = m.min(dist[c * size + i]);
        }
        chosen.push(i);
        subsets(dist, size, n, i + 1, m, chosen, best);
        chosen.pop();
    }
}

/// `d^2 <= sum (w - a d)^2 + constant` over the listed `(w, a)` terms.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticConstraint {
    pub terms: Vec<(f64, f64)>,
    pub constant: f64,
}

impl QuadraticConstraint {
    fn holds(&self, d: f64) -> bool {
        let rhs: f64 = self.terms.iter().map(|&(w, a)| (w - a * d) * (w - a * d)).sum::<f64>()
            + self.constant;
        d * d <= rhs + 1e-12
    }
}

/// Largest `d` in `[lo, hi]` satisfying every constraint, found by a
/// downward grid scan followed by bisection; `lo` when none is feasible.
pub fn oracle_quadratic_scan(constraints: &[QuadraticConstraint], lo: f64, hi: f64) -> f64 {
    let feasible = |d: f64| constraints.iter().all(|c| c.holds(d));
    if feasible(hi) {
        return hi;
    }
    let step = 1e-5;
    let mut upper = hi;
    let mut d = hi - step;
    while d > lo {
        if feasible(d) {
            let mut a = d;
            let mut b = upper;
            while b - a > 1e-9 {
                let mid = 0.5 * (a + b);
                if feasible(mid) {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            return a;
        }
        upper = d;
        d -= step;
    }
    lo
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::standard_generators;
    use crate::space::parse_rational;

    #[test]
    fn counts_by_enumeration() {
        let [_, even, _] = standard_generators(3).unwrap();
        assert_eq!(oracle_count(&even, &[5, 5, 5], 0).unwrap(), 63);
        assert_eq!(oracle_count(&even, &[5, 5, 5], 0b100).unwrap(), 62);
        assert_eq!(oracle_count(&even, &[1, 1, 1], 0).unwrap(), 1);
        assert!(oracle_count(&even, &[1000, 1000, 1000], 0).is_err());
    }

    #[test]
    fn family_on_ten_levels() {
        let g: Vec<Rational> = "0,0.12,0.24,0.36,0.48,0.6,0.72,0.84,0.96,1"
            .split(',')
            .map(|t| parse_rational(t).unwrap())
            .collect();
        let f = oracle_family(&g, 3).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].d_star, parse_rational("0.48").unwrap());
        let f = oracle_family(&g, 10).unwrap();
        assert_eq!(f[0].levels, g);
        let f = oracle_family(&g, 2).unwrap();
        assert_eq!(f[0].d_plus, None);
    }

    #[test]
    fn tiny_maximin() {
        let axis = alloc::vec![0.0, 0.5, 1.0];
        let grid = [axis.clone(), axis];
        assert!((oracle_tiny_maximin(&grid, 4).unwrap() - 1.0).abs() < 1e-12);
        assert!((oracle_tiny_maximin(&grid, 2).unwrap() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn quadratic_scan() {
        let c = QuadraticConstraint { terms: alloc::vec![(1.0, 1.0)], constant: 0.5 };
        let d = oracle_quadratic_scan(&[c], 2.0 / 3.0, 1.0);
        assert!((d - 0.75).abs() < 1e-6);
        assert_eq!(oracle_quadratic_scan(&[], 0.0, 0.4), 0.4);
    }
}
