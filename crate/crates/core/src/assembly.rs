//! Designs from `(L, s, Y, u)`: realization, separation distance and the
//! choice of level sets for a fixed lattice and size vector.

use alloc::vec::Vec;

use crate::lattice::{count_points, BinaryCode, LatticeError, Word};
use crate::levels::{CandidateFamily, LevelSet, Member};
use crate::TOL;

/// Default cap on realized rows.
pub const DEFAULT_ROW_CAP: u64 = 10_000_000;

/// Largest design accepted by [`separation_bruteforce`].
pub const BRUTEFORCE_ROW_CAP: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AssemblyError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dimension {dim}: level set has {got} values but s = {expected}")]
    SizeMismatch { dim: usize, expected: usize, got: usize },
    #[error("dimension {dim}: s must be at least 2")]
    SizeTooSmall { dim: usize },
    #[error("translation has bits outside the dimension")]
    BadShift,
    #[error("design would have {0} rows, above the cap")]
    TooManyRows(u64),
    #[error("design has {0} rows; at least 2 are needed")]
    TooFewRows(usize),
    #[error("the continuous block is empty")]
    EmptyBlock,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// The tuple `(L, s, Y, u)`; `shift` is `u` as a mask.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignSpec {
    code: BinaryCode,
    sizes: Vec<usize>,
    shift: Word,
    levels: Vec<LevelSet>,
}

impl DesignSpec {
    pub fn new(
        code: BinaryCode,
        sizes: Vec<usize>,
        shift: Word,
        levels: Vec<LevelSet>,
    ) -> Result<Self, AssemblyError> {
        let p = code.p();
        for got in [sizes.len(), levels.len()] {
            if got != p {
                return Err(AssemblyError::DimensionMismatch { expected: p, got });
            }
        }
        if p < 32 && shift >> p != 0 {
            return Err(AssemblyError::BadShift);
        }
        for (k, (&s, y)) in sizes.iter().zip(&levels).enumerate() {
            if s < 2 {
                return Err(AssemblyError::SizeTooSmall { dim: k });
            }
            if y.len() != s {
                return Err(AssemblyError::SizeMismatch { dim: k, expected: s, got: y.len() });
            }
        }
        Ok(Self { code, sizes, shift, levels })
    }

    pub fn code(&self) -> &BinaryCode {
        &self.code
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn shift(&self) -> Word {
        self.shift
    }

    pub fn levels(&self) -> &[LevelSet] {
        &self.levels
    }

    pub fn p(&self) -> usize {
        self.code.p()
    }

    pub fn with_shift(&self, shift: Word) -> Result<Self, AssemblyError> {
        Self::new(self.code.clone(), self.sizes.clone(), shift, self.levels.clone())
    }

    /// `|(L ⊕ u) ∩ prod [0, s_k - 1]|`.
    pub fn count(&self) -> u64 {
        count_points(&self.code, &self.sizes, self.shift).unwrap_or(0)
    }

    /// Relabels dimensions so that new position `j` holds old `order[j]`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self, AssemblyError> {
        let p = self.p();
        if order.len() != p {
            return Err(AssemblyError::DimensionMismatch { expected: p, got: order.len() });
        }
        let shift = order
            .iter()
            .enumerate()
            .filter(|&(_, &src)| self.shift >> src & 1 == 1)
            .fold(0, |acc, (j, _)| acc | (1 << j));
        Self::new(
            self.code.permuted(order)?,
            order.iter().map(|&j| self.sizes[j]).collect(),
            shift,
            order.iter().map(|&j| self.levels[j].clone()).collect(),
        )
    }
}

/// A realized design: rows of coordinates plus the certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    p: usize,
    points: Vec<f64>,
    rho: f64,
    spec: DesignSpec,
}

impl Design {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn m(&self) -> usize {
        self.points.len() / self.p
    }

    /// Row-major coordinates.
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn rows(&self) -> core::slice::ChunksExact<'_, f64> {
        self.points.chunks_exact(self.p)
    }

    /// Separation distance in the scaled metric.
    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn certificate(&self) -> &DesignSpec {
        &self.spec
    }

    /// Same certificate and `rho`, different coordinates.
    pub fn with_points(&self, points: Vec<f64>) -> Self {
        Self { p: self.p, points, rho: self.rho, spec: self.spec.clone() }
    }
}

/// Points of `D(L, s, Y, u)` in lexicographic index order.
pub fn realize(spec: &DesignSpec, cap: u64) -> Result<Design, AssemblyError> {
    let p = spec.p();
    let m = spec.count();
    if m > cap {
        return Err(AssemblyError::TooManyRows(m));
    }
    let mut indices: Vec<Vec<u32>> = Vec::with_capacity(m as usize);
    for &h in spec.code.words() {
        let parity = h ^ spec.shift;
        let axes: Vec<Vec<u32>> = (0..p)
            .map(|k| {
                let start = parity >> k & 1;
                (start..spec.sizes[k] as u32).step_by(2).collect()
            })
            .collect();
        if axes.iter().any(Vec::is_empty) {
            continue;
        }
        let mut pos = alloc::vec![0usize; p];
        'rows: loop {
            indices.push((0..p).map(|k| axes[k][pos[k]]).collect());
            let mut k = p;
            loop {
                if k == 0 {
                    break 'rows;
                }
                k -= 1;
                pos[k] += 1;
                if pos[k] < axes[k].len() {
                    break;
                }
                pos[k] = 0;
            }
        }
    }
    indices.sort_unstable();
    let mut points = Vec::with_capacity(indices.len() * p);
    for idx in &indices {
        for (k, &i) in idx.iter().enumerate() {
            points.push(spec.levels[k].values()[i as usize]);
        }
    }
    Ok(Design { p, points, rho: separation(spec), spec: spec.clone() })
}

/// `(min_x sum_{x_k=1} d*_k^2, min_{s_k>2} d+_k)` over nonzero words.
pub fn rho_terms(words: &[Word], dstar: &[f64], dplus: &[Option<f64>]) -> (f64, Option<f64>) {
    let star = words
        .iter()
        .filter(|&&x| x != 0)
        .map(|&x| {
            let mut sum = 0.0;
            let mut bits = x;
            while bits != 0 {
                let k = bits.trailing_zeros() as usize;
                sum += dstar[k] * dstar[k];
                bits &= bits - 1;
            }
            sum
        })
        .fold(f64::INFINITY, f64::min);
    let plus = dplus.iter().flatten().copied().reduce(f64::min);
    (star, plus)
}

/// Separation distance of `D(L, s, Y, u)` from gap statistics alone; it
/// does not depend on `u`.
pub fn separation(spec: &DesignSpec) -> f64 {
    let dstar: Vec<f64> = spec.levels.iter().map(LevelSet::d_star).collect();
    let dplus: Vec<Option<f64>> = spec.levels.iter().map(LevelSet::d_plus).collect();
    let (star, plus) = rho_terms(spec.code.words(), &dstar, &dplus);
    libm::sqrt(star).min(plus.unwrap_or(f64::INFINITY))
}

/// Smallest pairwise Euclidean distance, by direct comparison.
pub fn separation_bruteforce(design: &Design) -> Result<f64, AssemblyError> {
    let m = design.m();
    if m < 2 {
        return Err(AssemblyError::TooFewRows(m));
    }
    if m > BRUTEFORCE_ROW_CAP {
        return Err(AssemblyError::TooManyRows(m as u64));
    }
    let rows: Vec<&[f64]> = design.rows().collect();
    let mut best = f64::INFINITY;
    for i in 0..m {
        for j in i + 1..m {
            let d2: f64 = rows[i].iter().zip(rows[j]).map(|(a, b)| (a - b) * (a - b)).sum();
            best = best.min(d2);
        }
    }
    Ok(libm::sqrt(best))
}

/// One instance of the common-`d+` subproblem for the continuous block.
#[derive(Debug, Clone, Copy)]
pub struct DplusBlock<'a> {
    pub words: &'a [Word],
    /// Continuous dimensions with even `s > 2` that share the value `d`.
    pub active: &'a [usize],
    /// `d*` of every dimension; read only outside `active`.
    pub dstar: &'a [f64],
    /// `d+` of every dimension (`None` = `+∞`); read only outside `active`.
    pub dplus: &'a [Option<f64>],
    pub widths: &'a [f64],
    pub sizes: &'a [usize],
    pub floor: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockSolution {
    pub value: f64,
    /// False when no `d >= floor` satisfies the constraints; `value` is then
    /// the floor.
    pub feasible: bool,
}

/// Largest `d` with `floor <= d`, `d <= d+_k` outside the block,
/// `d <= 2 w_k / (s_k - 2)` inside it, and for every nonzero word
/// `d^2 <= sum_{active} (w_k - d a_k)^2 + sum_{other} d*_k^2`,
/// where `a_k = (s_k - 2) / 2`.
pub fn solve_dplus_block(block: &DplusBlock<'_>) -> Result<BlockSolution, AssemblyError> {
    if block.active.is_empty() {
        return Err(AssemblyError::EmptyBlock);
    }
    let p = block.widths.len();
    for got in [block.dstar.len(), block.dplus.len(), block.sizes.len()] {
        if got != p {
            return Err(AssemblyError::DimensionMismatch { expected: p, got });
        }
    }
    let mut in_block: Word = 0;
    for &k in block.active {
        in_block |= 1 << k;
    }
    let slope = |k: usize| (block.sizes[k] as f64 - 2.0) / 2.0;

    let mut hi = f64::INFINITY;
    for k in 0..p {
        if in_block >> k & 1 == 1 {
            hi = hi.min(block.widths[k] / slope(k));
        } else if let Some(dp) = block.dplus[k] {
            hi = hi.min(dp);
        }
    }
    let mut gaps: Vec<(f64, f64)> = Vec::new();
    for &x in block.words.iter().filter(|&&x| x != 0) {
        let (mut a2, mut wa, mut c) = (0.0, 0.0, 0.0);
        for k in 0..p {
            if x >> k & 1 == 0 {
                continue;
            }
            if in_block >> k & 1 == 1 {
                let a = slope(k);
                a2 += a * a;
                wa += block.widths[k] * a;
                c += block.widths[k] * block.widths[k];
            } else {
                c += block.dstar[k] * block.dstar[k];
            }
        }
        // (1 - a2) d^2 + 2 wa d - c <= 0, with c >= 0 so d = 0 is feasible.
        let qa = 1.0 - a2;
        let qb = 2.0 * wa;
        if qa.abs() <= 1e-12 {
            if qb > 0.0 {
                hi = hi.min(c / qb);
            }
            continue;
        }
        let disc = qb * qb + 4.0 * qa * c;
        if qa > 0.0 {
            hi = hi.min((-qb + libm::sqrt(disc.max(0.0))) / (2.0 * qa));
        } else if disc > 0.0 {
            let root = libm::sqrt(disc);
            let r1 = (-qb + root) / (2.0 * qa);
            let r2 = (-qb - root) / (2.0 * qa);
            gaps.push((r1.min(r2), r1.max(r2)));
        }
    }
    let mut d = hi;
    while let Some(&(lo, _)) = gaps.iter().find(|&&(lo, up)| d > lo && d < up) {
        d = lo;
    }
    if d + TOL < block.floor || !d.is_finite() {
        return Ok(BlockSolution { value: block.floor, feasible: false });
    }
    Ok(BlockSolution { value: d.max(block.floor), feasible: true })
}

/// Level sets chosen for a fixed `(L, s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelChoice {
    pub members: Vec<Member>,
    pub levels: Vec<LevelSet>,
    pub rho: f64,
    /// `rho` of the all-max-`d*` starting point.
    pub initial_rho: f64,
}

/// Best level sets drawn from `families` for the lattice `code`.
///
/// Starts from the largest-`d*` members. While the separation is limited
/// by `d+`, the binding discrete dimensions step to their next member and
/// the binding continuous even dimensions are raised together to the
/// largest common `d+` the words allow. Stops as soon as the separation
/// stops increasing.
pub fn optimize_levels(
    code: &BinaryCode,
    families: &[&CandidateFamily],
) -> Result<LevelChoice, AssemblyError> {
    let p = code.p();
    if families.len() != p {
        return Err(AssemblyError::DimensionMismatch { expected: p, got: families.len() });
    }
    let sizes: Vec<usize> = families.iter().map(|f| f.size()).collect();
    let widths: Vec<f64> = families.iter().map(|f| family_width(f)).collect();
    let words = code.words();
    let evaluate = |members: &[Member]| {
        let (dstar, dplus): (Vec<f64>, Vec<Option<f64>>) =
            families.iter().zip(members).map(|(f, &m)| f.gaps(m)).unzip();
        let (star, plus) = rho_terms(words, &dstar, &dplus);
        (dstar, dplus, libm::sqrt(star), plus.unwrap_or(f64::INFINITY))
    };

    let mut members: Vec<Member> = families.iter().map(|f| f.max_dstar_member()).collect();
    let mut best = members.clone();
    let mut best_rho = f64::NEG_INFINITY;
    let mut initial_rho = None;
    loop {
        let (_, dplus, star, plus) = evaluate(&members);
        let rho = star.min(plus);
        initial_rho.get_or_insert(rho);
        if rho <= best_rho + TOL {
            break;
        }
        best.clone_from(&members);
        best_rho = rho;
        if star <= plus + TOL {
            break;
        }
        let binding: Vec<usize> = (0..p)
            .filter(|&k| dplus[k].is_some_and(|d| (d - rho).abs() <= TOL))
            .collect();
        let saturated = binding.iter().any(|&k| {
            families[k].max_d_plus().is_some_and(|cap| (cap - rho).abs() <= TOL)
        });
        if saturated || binding.is_empty() {
            break;
        }
        let mut active = Vec::new();
        for &k in &binding {
            if families[k].is_continuous_even() {
                active.push(k);
            } else if let Some(next) = families[k].next_member(members[k]) {
                members[k] = next;
            }
        }
        let (dstar, dplus, star, plus) = evaluate(&members);
        let next_rho = star.min(plus);
        if next_rho < rho - TOL {
            break;
        }
        if !active.is_empty() {
            let solution = solve_dplus_block(&DplusBlock {
                words,
                active: &active,
                dstar: &dstar,
                dplus: &dplus,
                widths: &widths,
                sizes: &sizes,
                floor: next_rho,
            })?;
            for &k in &active {
                if let Some(m) = families[k].even_member_with_dplus(solution.value) {
                    members[k] = m;
                }
            }
        }
    }
    let levels = families.iter().zip(&best).map(|(f, &m)| f.level_set(m)).collect();
    Ok(LevelChoice {
        members: best,
        levels,
        rho: best_rho,
        initial_rho: initial_rho.unwrap_or(best_rho),
    })
}

fn family_width(f: &CandidateFamily) -> f64 {
    match f {
        CandidateFamily::TwoLevel { width }
        | CandidateFamily::OddSingleton { width, .. }
        | CandidateFamily::ContinuousEven { width, .. } => *width,
        CandidateFamily::Discrete(list) => list.first().map_or(0.0, LevelSet::width),
    }
}
