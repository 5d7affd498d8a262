//! Level sets, their gap statistics and minimal sufficient families.
//!
//! For a sorted level set `γ`, `d*(γ)` is the smallest gap between adjacent
//! levels and `d+(γ)` the smallest gap between levels two positions apart
//! (`None` stands for `+∞` when `|γ| = 2`). A family is minimal sufficient
//! for `(G, s)` when every `s`-subset of `G` is weakly dominated in
//! `(d*, d+)` by a member and no member dominates another.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::space::{to_f64, Rational, ScaledDomain};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LevelError {
    #[error("a level set needs at least two values")]
    TooFew,
    #[error("levels must be sorted and distinct")]
    NotIncreasing,
    #[error("levels must start at 0")]
    NotAnchored,
    #[error("size {s} out of range 2..={max}")]
    SizeOutOfRange { s: usize, max: usize },
    #[error("no level subset satisfies the gap floor")]
    Infeasible,
    #[error("non-finite level")]
    NonFinite,
}

/// Sorted levels of one dimension with cached gap statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSet {
    values: Vec<f64>,
    exact: Option<Vec<Rational>>,
    d_star: f64,
    d_plus: Option<f64>,
}

impl LevelSet {
    /// Strictly increasing exact levels.
    pub fn from_exact(exact: Vec<Rational>) -> Result<Self, LevelError> {
        let ds = d_star_exact(&exact)?;
        let dp = d_plus_exact(&exact)?;
        Ok(Self {
            values: exact.iter().map(to_f64).collect(),
            d_star: to_f64(&ds),
            d_plus: dp.as_ref().map(to_f64),
            exact: Some(exact),
        })
    }

    /// Non-decreasing float levels; equal neighbours only arise at the
    /// degenerate end of the continuous even family.
    pub fn from_f64(values: Vec<f64>) -> Result<Self, LevelError> {
        if values.len() < 2 {
            return Err(LevelError::TooFew);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(LevelError::NonFinite);
        }
        if values.windows(2).any(|w| w[1] < w[0]) {
            return Err(LevelError::NotIncreasing);
        }
        let d_star = values.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        let d_plus = (values.len() > 2)
            .then(|| values.windows(3).map(|w| w[2] - w[0]).fold(f64::INFINITY, f64::min));
        Ok(Self { values, exact: None, d_star, d_plus })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn exact(&self) -> Option<&[Rational]> {
        self.exact.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn d_star(&self) -> f64 {
        self.d_star
    }

    /// `None` means `+∞`.
    pub fn d_plus(&self) -> Option<f64> {
        self.d_plus
    }

    /// The last level.
    pub fn width(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }
}

fn check_sorted(values: &[Rational]) -> Result<(), LevelError> {
    if values.len() < 2 {
        return Err(LevelError::TooFew);
    }
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(LevelError::NotIncreasing);
    }
    Ok(())
}

pub fn d_star_exact(values: &[Rational]) -> Result<Rational, LevelError> {
    check_sorted(values)?;
    Ok(values.windows(2).map(|w| &w[1] - &w[0]).min().unwrap_or_default())
}

/// `None` means `+∞`.
pub fn d_plus_exact(values: &[Rational]) -> Result<Option<Rational>, LevelError> {
    check_sorted(values)?;
    Ok(values.windows(3).map(|w| &w[2] - &w[0]).min())
}

pub fn d_star(values: &[f64]) -> Result<f64, LevelError> {
    Ok(LevelSet::from_f64(values.to_vec())?.d_star)
}

/// `None` means `+∞`.
pub fn d_plus(values: &[f64]) -> Result<Option<f64>, LevelError> {
    Ok(LevelSet::from_f64(values.to_vec())?.d_plus)
}

/// A member of a [`CandidateFamily`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Member {
    /// Position in a discrete list; `Index(0)` for singleton families.
    Index(usize),
    /// The adjacent-gap parameter `v1` of the continuous even family.
    Spacing(f64),
}

/// Minimal sufficient level sets of one dimension for one size.
#[derive(Debug, Clone, PartialEq)]
pub enum CandidateFamily {
    /// `{0, w}`.
    TwoLevel { width: f64 },
    /// Equally spaced `s` levels on `[0, w]`, `s` odd.
    OddSingleton { width: f64, size: usize },
    /// One-parameter family for even `s > 2` on `[0, w]`: levels
    /// `floor(i/2) v1 + (ceil(i/2) - 1) v2` for `i = 1..s`, with
    /// `v2 = (2w - s v1) / (s - 2)` and `0 <= v1 <= w / (s - 1)`.
    ContinuousEven { width: f64, size: usize },
    /// Admissible subsets of a finite set, decreasing `d*`, increasing `d+`.
    Discrete(Vec<LevelSet>),
}

impl CandidateFamily {
    pub fn size(&self) -> usize {
        match self {
            CandidateFamily::TwoLevel { .. } => 2,
            CandidateFamily::OddSingleton { size, .. }
            | CandidateFamily::ContinuousEven { size, .. } => *size,
            CandidateFamily::Discrete(list) => list.first().map_or(0, LevelSet::len),
        }
    }

    pub fn is_continuous_even(&self) -> bool {
        matches!(self, CandidateFamily::ContinuousEven { .. })
    }

    /// The member with the largest `d*`.
    pub fn max_dstar_member(&self) -> Member {
        match self {
            CandidateFamily::ContinuousEven { width, size } => {
                Member::Spacing(width / (*size as f64 - 1.0))
            }
            _ => Member::Index(0),
        }
    }

    /// Supremum of `d+` over the family; `None` means `+∞`.
    pub fn max_d_plus(&self) -> Option<f64> {
        match self {
            CandidateFamily::TwoLevel { .. } => None,
            CandidateFamily::OddSingleton { width, size } => Some(2.0 * width / (*size as f64 - 1.0)),
            CandidateFamily::ContinuousEven { width, size } => Some(2.0 * width / (*size as f64 - 2.0)),
            CandidateFamily::Discrete(list) => list.last().and_then(LevelSet::d_plus),
        }
    }

    /// `(d*, d+)` of a member without building its levels.
    pub fn gaps(&self, m: Member) -> (f64, Option<f64>) {
        match (self, m) {
            (CandidateFamily::TwoLevel { width }, _) => (*width, None),
            (CandidateFamily::OddSingleton { width, size }, _) => {
                let step = width / (*size as f64 - 1.0);
                (step, Some(2.0 * step))
            }
            (CandidateFamily::ContinuousEven { width, size }, m) => {
                let v1 = self.spacing(m);
                (v1, Some(2.0 * (width - v1) / (*size as f64 - 2.0)))
            }
            (CandidateFamily::Discrete(list), m) => {
                let y = &list[index(m)];
                (y.d_star(), y.d_plus())
            }
        }
    }

    fn spacing(&self, m: Member) -> f64 {
        match (self, m) {
            (CandidateFamily::ContinuousEven { width, size }, Member::Spacing(v1)) => {
                v1.clamp(0.0, width / (*size as f64 - 1.0))
            }
            (CandidateFamily::ContinuousEven { width, size }, Member::Index(_)) => {
                width / (*size as f64 - 1.0)
            }
            _ => 0.0,
        }
    }

    /// Member of the continuous even family whose `d+` equals `d`.
    pub fn even_member_with_dplus(&self, d: f64) -> Option<Member> {
        match self {
            CandidateFamily::ContinuousEven { width, size } => {
                Some(Member::Spacing(width - d * (*size as f64 - 2.0) / 2.0))
            }
            _ => None,
        }
    }

    /// Next discrete member (larger `d+`), if any.
    pub fn next_member(&self, m: Member) -> Option<Member> {
        match self {
            CandidateFamily::Discrete(list) if index(m) + 1 < list.len() => {
                Some(Member::Index(index(m) + 1))
            }
            _ => None,
        }
    }

    /// Member with the largest `d*` among those with `d+ >= floor - tol`,
    /// falling back to the largest `d+`.
    pub fn member_with_dplus_at_least(&self, floor: f64, tol: f64) -> Member {
        match self {
            CandidateFamily::Discrete(list) => Member::Index(
                list.iter()
                    .position(|y| y.d_plus().is_none_or(|dp| dp >= floor - tol))
                    .unwrap_or(list.len().saturating_sub(1)),
            ),
            CandidateFamily::ContinuousEven { width, size } => {
                let cap = width / (*size as f64 - 1.0);
                let v1 = (width - floor * (*size as f64 - 2.0) / 2.0).clamp(0.0, cap);
                Member::Spacing(v1)
            }
            _ => Member::Index(0),
        }
    }

    /// Levels of a member.
    pub fn level_set(&self, m: Member) -> LevelSet {
        match self {
            CandidateFamily::TwoLevel { width } => {
                LevelSet::from_f64(alloc::vec![0.0, *width]).expect("positive width")
            }
            CandidateFamily::OddSingleton { width, size } => {
                let step = width / (*size as f64 - 1.0);
                let mut v: Vec<f64> = (0..*size).map(|i| i as f64 * step).collect();
                v[size - 1] = *width;
                LevelSet::from_f64(v).expect("equally spaced")
            }
            CandidateFamily::ContinuousEven { width, size } => {
                let s = *size as f64;
                let v1 = self.spacing(m);
                let v2 = (2.0 * width - s * v1) / (s - 2.0);
                let mut v: Vec<f64> =
                    (1..=*size).map(|i| (i / 2) as f64 * v1 + (i.div_ceil(2) - 1) as f64 * v2).collect();
                v[size - 1] = *width;
                LevelSet::from_f64(v).expect("non-decreasing by construction")
            }
            CandidateFamily::Discrete(list) => list[index(m)].clone(),
        }
    }

    pub fn members(&self) -> &[LevelSet] {
        match self {
            CandidateFamily::Discrete(list) => list,
            _ => &[],
        }
    }
}

fn index(m: Member) -> usize {
    match m {
        Member::Index(i) => i,
        Member::Spacing(_) => 0,
    }
}

/// Family of `[0, w]` for size `s`.
pub fn family_continuous(width: f64, s: usize) -> Result<CandidateFamily, LevelError> {
    if !(width.is_finite() && width > 0.0) {
        return Err(LevelError::NonFinite);
    }
    Ok(match s {
        0 | 1 => return Err(LevelError::SizeOutOfRange { s, max: usize::MAX }),
        2 => CandidateFamily::TwoLevel { width },
        s if s % 2 == 1 => CandidateFamily::OddSingleton { width, size: s },
        s => CandidateFamily::ContinuousEven { width, size: s },
    })
}

fn check_ground(g: &[Rational], s: usize) -> Result<(), LevelError> {
    check_sorted(g)?;
    if !g[0].is_zero() {
        return Err(LevelError::NotAnchored);
    }
    if s < 2 || s > g.len() {
        return Err(LevelError::SizeOutOfRange { s, max: g.len() });
    }
    Ok(())
}

/// Leftmost `s`-subset with adjacent gaps `> a` and two-apart gaps `> b`.
fn greedy_strict(g: &[Rational], s: usize, a: &Rational, b: &Rational) -> Option<Vec<usize>> {
    let mut idx = alloc::vec![0usize];
    let mut j = 1;
    while idx.len() < s {
        let i = idx.len();
        let prev = &g[idx[i - 1]];
        let ok = |l: &Rational| l - prev > *a && (i < 2 || l - &g[idx[i - 2]] > *b);
        while j < g.len() && !ok(&g[j]) {
            j += 1;
        }
        if j == g.len() {
            return None;
        }
        idx.push(j);
        j += 1;
    }
    Some(idx)
}

/// Leftmost subset ending at `max(G)` with adjacent gaps `>= a` and
/// two-apart gaps `> b`.
fn greedy_anchored(g: &[Rational], s: usize, a: &Rational, b: &Rational) -> Option<Vec<usize>> {
    let last = g.len() - 1;
    let mut idx = alloc::vec![0usize];
    let mut j = 1;
    while idx.len() < s - 1 {
        let i = idx.len();
        let prev = &g[idx[i - 1]];
        let ok = |l: &Rational| l - prev >= *a && (i < 2 || l - &g[idx[i - 2]] > *b);
        while j < last && !ok(&g[j]) {
            j += 1;
        }
        if j >= last {
            return None;
        }
        idx.push(j);
        j += 1;
    }
    let i = idx.len();
    let top = &g[last];
    if top - &g[idx[i - 1]] < *a || (i >= 2 && top - &g[idx[i - 2]] <= *b) {
        return None;
    }
    idx.push(last);
    Some(idx)
}

fn pick(g: &[Rational], idx: &[usize]) -> Vec<Rational> {
    idx.iter().map(|&i| g[i].clone()).collect()
}

/// Largest `d*` over `s`-subsets of `G` with `d+ > dplus_floor`; zero when
/// no such subset exists.
pub fn max_dstar_given_dplus(
    g: &[Rational],
    s: usize,
    dplus_floor: &Rational,
) -> Result<Rational, LevelError> {
    check_ground(g, s)?;
    let mut best = Rational::zero();
    while let Some(idx) = greedy_strict(g, s, &best, dplus_floor) {
        best = d_star_exact(&pick(g, &idx))?;
    }
    Ok(best)
}

/// The `s`-subset of `G` with the largest `d+` among those with
/// `d* >= dstar_floor`, anchored at `0` and `max(G)`.
pub fn max_dplus_given_dstar(
    g: &[Rational],
    s: usize,
    dstar_floor: &Rational,
) -> Result<Vec<Rational>, LevelError> {
    check_ground(g, s)?;
    let mut floor = Rational::zero();
    let mut best = None;
    while let Some(idx) = greedy_anchored(g, s, dstar_floor, &floor) {
        let gamma = pick(g, &idx);
        let dp = d_plus_exact(&gamma)?;
        best = Some(gamma);
        match dp {
            Some(v) => floor = v,
            None => break,
        }
    }
    best.ok_or(LevelError::Infeasible)
}

/// Minimal sufficient family of `s`-subsets of a finite level set.
pub fn family_discrete(g: &[Rational], s: usize) -> Result<CandidateFamily, LevelError> {
    check_ground(g, s)?;
    if s == g.len() {
        return Ok(CandidateFamily::Discrete(alloc::vec![LevelSet::from_exact(g.to_vec())?]));
    }
    let mut floor = Rational::zero();
    let mut list = Vec::new();
    loop {
        let dstar = max_dstar_given_dplus(g, s, &floor)?;
        if dstar.is_zero() {
            break;
        }
        let gamma = max_dplus_given_dstar(g, s, &dstar)?;
        let dp = d_plus_exact(&gamma)?;
        list.push(LevelSet::from_exact(gamma)?);
        match dp {
            Some(v) => floor = v,
            None => break,
        }
    }
    Ok(CandidateFamily::Discrete(list))
}

/// Family of a scaled dimension for size `s`.
pub fn family_for(domain: &ScaledDomain, s: usize) -> Result<CandidateFamily, LevelError> {
    match domain {
        ScaledDomain::Continuous { width } => family_continuous(to_f64(width), s),
        ScaledDomain::Discrete { levels } => family_discrete(levels, s),
    }
}
