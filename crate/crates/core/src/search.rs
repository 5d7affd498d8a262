//! Search over lattices and size vectors.
//!
//! Three regimes share the same bookkeeping: the exhaustive scan over every
//! interleaved lattice (`p <= 5`), the `(q, r, s)` scan that synthesizes one
//! lattice per triple (`p <= 8`), and the extension of the best
//! eight-dimensional designs one dimension at a time (`p > 8`).

use alloc::borrow::Cow;
use alloc::vec::Vec;

use crate::assembly::{
    optimize_levels, realize, AssemblyError, Design, DesignSpec, DEFAULT_ROW_CAP,
};
use crate::lattice::{
    count_points, enumerate_ils, extend_dimension, split_index_two, standard_generators,
    synthesize_lattice, BinaryCode, LatticeError, Word,
};
use crate::levels::{family_continuous, family_for, CandidateFamily, LevelError, LevelSet};
use crate::space::{scale, FactorSpace, ScaledDomain, ScaledSpace, SpaceError};
use crate::TOL;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("no design with at least {0} runs exists in this space")]
    Infeasible(usize),
    #[error("regime {regime:?} does not support p = {p}")]
    UnsupportedDimension { regime: Regime, p: usize },
    #[error("no candidates to choose from")]
    NoCandidates,
    #[error(transparent)]
    Levels(#[from] LevelError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Auto,
    Exhaustive,
    Qrs,
    Extend,
}

impl Regime {
    /// Concrete regime for dimension `p`.
    pub fn resolve(self, p: usize) -> Regime {
        match self {
            Regime::Auto if p <= 5 => Regime::Exhaustive,
            Regime::Auto if p <= 8 => Regime::Qrs,
            Regime::Auto => Regime::Extend,
            r => r,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOptions {
    pub regime: Regime,
    /// Candidate pool size; defaults to 1 for `Qrs` and 20 for `Extend`.
    pub pool: Option<usize>,
    pub tie_cap: usize,
    pub row_cap: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { regime: Regime::Auto, pool: None, tie_cap: 64, row_cap: DEFAULT_ROW_CAP }
    }
}

/// One `(L, s, Y)` with its separation distance.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub code: BinaryCode,
    pub sizes: Vec<usize>,
    pub levels: Vec<LevelSet>,
    pub rho: f64,
}

/// An improvement (`improved`) or a tie of the running best.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep {
    pub rho: f64,
    pub code: BinaryCode,
    pub sizes: Vec<usize>,
    pub improved: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub regime: Regime,
    pub rho: f64,
    /// Candidates attaining `rho`, in the order they were found.
    pub ties: Vec<Candidate>,
    pub chosen: usize,
    pub shift: Word,
    pub m: u64,
    /// Realized in the scaled metric, dimensions in input order.
    pub design: Design,
    pub trace: Vec<TraceStep>,
    /// Number of `(L, s)` pairs whose levels were optimized.
    pub evaluated: u64,
}

impl SearchOutcome {
    pub fn certificate(&self) -> &DesignSpec {
        self.design.certificate()
    }
}

const TRACE_CAP: usize = 100_000;

/// Every family a search may ask for, computed up front.
#[derive(Debug, Clone)]
pub struct Families {
    dims: Vec<DimFamilies>,
}

#[derive(Debug, Clone)]
enum DimFamilies {
    Continuous(f64),
    /// Index `s - 2`.
    Discrete(Vec<CandidateFamily>),
}

impl Families {
    pub fn new(space: &ScaledSpace) -> Result<Self, SearchError> {
        let dims = space
            .dims()
            .iter()
            .map(|d| match d {
                ScaledDomain::Continuous { .. } => Ok(DimFamilies::Continuous(d.width_f64())),
                ScaledDomain::Discrete { levels } => Ok(DimFamilies::Discrete(
                    (2..=levels.len()).map(|s| family_for(d, s)).collect::<Result<_, _>>()?,
                )),
            })
            .collect::<Result<_, SearchError>>()?;
        Ok(Self { dims })
    }

    pub fn p(&self) -> usize {
        self.dims.len()
    }

    /// Largest admissible size of dimension `k`; `None` when unbounded.
    pub fn max_size(&self, k: usize) -> Option<usize> {
        match &self.dims[k] {
            DimFamilies::Continuous(_) => None,
            DimFamilies::Discrete(list) => Some(list.len() + 1),
        }
    }

    pub fn width(&self, k: usize) -> f64 {
        match &self.dims[k] {
            DimFamilies::Continuous(w) => *w,
            DimFamilies::Discrete(list) => list[0].members()[0].width(),
        }
    }

    pub fn get(&self, k: usize, s: usize) -> Option<Cow<'_, CandidateFamily>> {
        match &self.dims[k] {
            DimFamilies::Continuous(w) => family_continuous(*w, s).ok().map(Cow::Owned),
            DimFamilies::Discrete(list) => s.checked_sub(2).and_then(|i| list.get(i)).map(Cow::Borrowed),
        }
    }

    fn for_sizes(&self, sizes: &[usize]) -> Option<Vec<Cow<'_, CandidateFamily>>> {
        sizes.iter().enumerate().map(|(k, &s)| self.get(k, s)).collect()
    }

    /// Keeps the leading `k` dimensions.
    fn truncated(&self, k: usize) -> Self {
        Self { dims: self.dims[..k].to_vec() }
    }

    /// Largest `s` whose family can still reach `d+ >= rho_hat`.
    fn admissible(&self, k: usize, s: usize, rho_hat: f64) -> bool {
        if s == 2 {
            return true;
        }
        match &self.dims[k] {
            DimFamilies::Continuous(w) => {
                let z = s as f64;
                if s % 2 == 1 {
                    2.0 * w / (z - 1.0) >= rho_hat - TOL
                } else {
                    // d+ = 2w/(s-2) needs d* = 0.
                    2.0 * w / (z - 2.0) > rho_hat + TOL
                }
            }
            DimFamilies::Discrete(list) => list
                .get(s - 2)
                .is_some_and(|f| f.max_d_plus().is_none_or(|d| d >= rho_hat - TOL)),
        }
    }
}

/// Per-dimension size sets `S_k = {2, ..., upper_k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SBounds {
    upper: Vec<Option<usize>>,
}

impl SBounds {
    pub fn new(families: &Families) -> Self {
        Self { upper: (0..families.p()).map(|k| families.max_size(k)).collect() }
    }

    /// `None` when unbounded.
    pub fn upper(&self, k: usize) -> Option<usize> {
        self.upper[k]
    }

    pub fn contains(&self, k: usize, s: usize) -> bool {
        s >= 2 && self.upper[k].is_none_or(|u| s <= u)
    }

    /// Drops every size whose family cannot reach `d+ >= rho_hat`.
    pub fn update(&mut self, families: &Families, rho_hat: f64) {
        if rho_hat <= 0.0 {
            return;
        }
        for k in 0..self.upper.len() {
            let start = match self.upper[k] {
                Some(u) => u,
                None => libm::floor(2.0 * families.width(k) / rho_hat) as usize + 2,
            };
            let mut z = start.max(2);
            while z > 2 && !families.admissible(k, z, rho_hat) {
                z -= 1;
            }
            self.upper[k] = Some(z);
        }
    }
}

/// Translation and size chosen among tied candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Translation {
    pub candidate: usize,
    pub shift: Word,
    pub m: u64,
}

/// Smallest design size `>= n` over the candidates and the translations
/// that can change it (odd `s_k` only), earliest candidate and
/// lexicographically first `u` on ties.
pub fn choose_translation(cands: &[Candidate], n: usize) -> Result<Translation, SearchError> {
    let mut best: Option<Translation> = None;
    for (i, c) in cands.iter().enumerate() {
        let odd: Vec<usize> = (0..c.sizes.len()).filter(|&k| c.sizes[k] % 2 == 1).collect();
        let bits = odd.len().min(20);
        for t in 0u32..(1 << bits) {
            // Dimension 1 is the most significant coordinate of u.
            let shift = (0..bits)
                .filter(|&j| t >> (bits - 1 - j) & 1 == 1)
                .fold(0, |acc, j| acc | (1 << odd[j]));
            let m = count_points(&c.code, &c.sizes, shift)?;
            if m >= n as u64 && best.is_none_or(|b| m < b.m) {
                best = Some(Translation { candidate: i, shift, m });
            }
        }
    }
    best.ok_or(SearchError::NoCandidates)
}

/// Running best with its tie list and trace.
struct Tracker {
    rho: f64,
    ties: Vec<Candidate>,
    trace: Vec<TraceStep>,
    tie_cap: usize,
    evaluated: u64,
}

impl Tracker {
    fn new(tie_cap: usize) -> Self {
        Self { rho: 0.0, ties: Vec::new(), trace: Vec::new(), tie_cap: tie_cap.max(1), evaluated: 0 }
    }

    /// Returns true when `rho` improved.
    fn offer(&mut self, cand: Candidate) -> bool {
        if cand.rho > self.rho + TOL {
            self.push_trace(&cand, true);
            self.rho = cand.rho;
            self.ties.clear();
            self.ties.push(cand);
            true
        } else {
            if (cand.rho - self.rho).abs() <= TOL {
                self.push_trace(&cand, false);
                self.add_tie(cand);
            }
            false
        }
    }

    fn push_trace(&mut self, cand: &Candidate, improved: bool) {
        if self.trace.len() < TRACE_CAP {
            self.trace.push(TraceStep {
                rho: cand.rho,
                code: cand.code.clone(),
                sizes: cand.sizes.clone(),
                improved,
            });
        }
    }

    fn add_tie(&mut self, cand: Candidate) {
        if self.ties.len() < self.tie_cap {
            self.ties.push(cand);
            return;
        }
        // Past the cap, make room only for a new (q, r) class.
        let qr = |c: &Candidate| (c.code.q(), c.code.r());
        let key = qr(&cand);
        if self.ties.iter().any(|c| qr(c) == key) {
            return;
        }
        let dup = (0..self.ties.len())
            .rev()
            .find(|&i| self.ties.iter().filter(|c| qr(c) == qr(&self.ties[i])).count() > 1);
        if let Some(i) = dup {
            self.ties[i] = cand;
        }
    }
}

fn evaluate(
    code: &BinaryCode,
    sizes: &[usize],
    families: &Families,
) -> Result<Option<Candidate>, SearchError> {
    let Some(fams) = families.for_sizes(sizes) else {
        return Ok(None);
    };
    let refs: Vec<&CandidateFamily> = fams.iter().map(|f| f.as_ref()).collect();
    let choice = optimize_levels(code, &refs)?;
    Ok(Some(Candidate {
        code: code.clone(),
        sizes: sizes.to_vec(),
        levels: choice.levels,
        rho: choice.rho,
    }))
}

/// Counts split by the parity of the last coordinate: `m(z) = a ceil(z/2) +
/// b floor(z/2)` for `s = (prefix, z)` and `u = 0`.
fn last_coordinate_counts(code: &BinaryCode, prefix: &[usize]) -> (u64, u64) {
    let p = code.p();
    let (mut a, mut b) = (0u64, 0u64);
    for &h in code.words() {
        let mut term = 1u64;
        for (k, &z) in prefix.iter().enumerate() {
            let c = if h >> k & 1 == 0 { z.div_ceil(2) } else { z / 2 };
            term = term.saturating_mul(c as u64);
        }
        if h >> (p - 1) & 1 == 0 {
            a = a.saturating_add(term);
        } else {
            b = b.saturating_add(term);
        }
    }
    (a, b)
}

/// Smallest `z >= 2` with `m(prefix, z) >= n`, if within `upper`.
fn min_last(code: &BinaryCode, prefix: &[usize], upper: Option<usize>, n: usize) -> Option<usize> {
    let (a, b) = last_coordinate_counts(code, prefix);
    let n = n as u64;
    let ab = a + b;
    if ab == 0 {
        return None;
    }
    let even = 2 * n.div_ceil(ab).max(1);
    let odd = 2 * n.saturating_sub(a).div_ceil(ab).max(1) + 1;
    let z = even.min(odd) as usize;
    upper.is_none_or(|u| z <= u).then_some(z)
}

/// Moves `prefix` to its lexicographic successor within the bounds; also
/// repairs coordinates that a bound update made out of range. Returns
/// false when the prefixes are exhausted.
fn advance(prefix: &mut [usize], bounds: &SBounds, step: bool) -> bool {
    let len = prefix.len();
    let mut carry_at = if step { Some(len) } else { None };
    if let Some(j) = (0..len).find(|&j| !bounds.contains(j, prefix[j])) {
        carry_at = Some(j + 1);
        for v in prefix[j..].iter_mut() {
            *v = 2;
        }
    }
    let Some(mut k) = carry_at else {
        return true;
    };
    loop {
        if k == 0 {
            return false;
        }
        k -= 1;
        if k + 1 < len {
            for v in prefix[k + 1..].iter_mut() {
                *v = 2;
            }
        }
        prefix[k] += 1;
        if bounds.contains(k, prefix[k]) {
            return true;
        }
    }
}

fn finish(
    regime: Regime,
    tracker: Tracker,
    n: usize,
    row_cap: u64,
) -> Result<SearchOutcome, SearchError> {
    if tracker.ties.is_empty() {
        return Err(SearchError::Infeasible(n));
    }
    let t = choose_translation(&tracker.ties, n)?;
    let c = &tracker.ties[t.candidate];
    let spec = DesignSpec::new(c.code.clone(), c.sizes.clone(), t.shift, c.levels.clone())?;
    let design = realize(&spec, row_cap)?;
    Ok(SearchOutcome {
        regime,
        rho: tracker.rho,
        chosen: t.candidate,
        shift: t.shift,
        m: t.m,
        design,
        ties: tracker.ties,
        trace: tracker.trace,
        evaluated: tracker.evaluated,
    })
}

/// Scans every interleaved lattice and every admissible size vector.
pub fn search_exhaustive(space: &ScaledSpace, opts: &SearchOptions) -> Result<SearchOutcome, SearchError> {
    let p = space.p();
    if !(2..=5).contains(&p) {
        return Err(SearchError::UnsupportedDimension { regime: Regime::Exhaustive, p });
    }
    let families = Families::new(space)?;
    let n = space.n();
    let mut bounds = SBounds::new(&families);
    let mut tracker = Tracker::new(opts.tie_cap);
    for code in enumerate_ils(p)? {
        let mut prefix = alloc::vec![2usize; p - 1];
        let mut step = false;
        while advance(&mut prefix, &bounds, step) {
            step = true;
            let Some(z) = min_last(&code, &prefix, bounds.upper(p - 1), n) else {
                continue;
            };
            let mut sizes = prefix.clone();
            sizes.push(z);
            tracker.evaluated += 1;
            if let Some(cand) = evaluate(&code, &sizes, &families)? {
                if tracker.offer(cand) {
                    bounds.update(&families, tracker.rho);
                }
            }
        }
    }
    finish(Regime::Exhaustive, tracker, n, opts.row_cap)
}

/// Candidates from the identity, even-sum and diagonal lattices with sizes
/// grown from all twos; the second field is `m` at `u = 0`.
pub fn seed_simple(space: &ScaledSpace) -> Result<Vec<(Candidate, u64)>, SearchError> {
    let families = Families::new(space)?;
    seed_with(&families, space.n())
}

fn seed_with(families: &Families, n: usize) -> Result<Vec<(Candidate, u64)>, SearchError> {
    let p = families.p();
    let mut out = Vec::new();
    for code in standard_generators(p)? {
        let mut sizes = alloc::vec![2usize; p];
        loop {
            let m = count_points(&code, &sizes, 0)?;
            if m >= n as u64 {
                break;
            }
            let open: Vec<usize> =
                (0..p).filter(|&k| families.max_size(k).is_none_or(|u| sizes[k] < u)).collect();
            if open.is_empty() {
                break;
            }
            let dstar = |k: usize| {
                let f = families.get(k, sizes[k]).expect("size within family range");
                f.gaps(f.max_dstar_member()).0
            };
            let top = open.iter().map(|&k| dstar(k)).fold(f64::NEG_INFINITY, f64::max);
            let grow: Vec<usize> = open.iter().copied().filter(|&k| dstar(k) >= top - TOL).collect();
            for k in grow {
                sizes[k] += 1;
            }
        }
        if let Some(cand) = evaluate(&code, &sizes, families)? {
            let m = count_points(&code, &sizes, 0)?;
            out.push((cand, m));
        }
    }
    Ok(out)
}

/// Keeps the candidates at or above the `t`-th best separation and returns
/// that threshold.
fn prune(pool: &mut Vec<Candidate>, t: usize) -> f64 {
    if pool.is_empty() {
        return 0.0;
    }
    let mut rhos: Vec<f64> = pool.iter().map(|c| c.rho).collect();
    rhos.sort_by(|a, b| b.total_cmp(a));
    let threshold = if rhos.len() < t { rhos[rhos.len() - 1] } else { rhos[t - 1] };
    pool.retain(|c| c.rho >= threshold - TOL);
    threshold
}

/// Pool of the `(q, r, s)` scan before the final choice.
fn qrs_pool(
    families: &Families,
    n: usize,
    t: usize,
    evaluated: &mut u64,
) -> Result<Vec<Candidate>, SearchError> {
    let p = families.p();
    let mut pool: Vec<Candidate> = seed_with(families, n)?
        .into_iter()
        .filter(|(_, m)| *m >= n as u64)
        .map(|(c, _)| c)
        .collect();
    let mut rho_hat = prune(&mut pool, t);
    let mut bounds = SBounds::new(families);
    bounds.update(families, rho_hat);
    let cap = n + 2;
    let upper = |b: &SBounds, k: usize| b.upper(k).unwrap_or(cap);

    for q in (1..p).rev() {
        let mut prefix = alloc::vec![2usize; p - 1];
        let mut step = false;
        while advance(&mut prefix, &bounds, step) {
            step = true;
            // Size bound on the last coordinate.
            let prod = prefix
                .iter()
                .fold(1u128, |acc, &z| acc.saturating_mul(2 * z.div_ceil(2) as u128));
            let need = ((n as u128) << (p - q - 1)).div_ceil(prod);
            let mut z = (2 * need).saturating_sub(1).clamp(2, cap as u128) as usize;
            while z <= upper(&bounds, p - 1) {
                let mut sizes = prefix.clone();
                sizes.push(z);
                let Some(fams) = families.for_sizes(&sizes) else {
                    break;
                };
                let keys: Vec<f64> = fams
                    .iter()
                    .map(|f| f.gaps(f.member_with_dplus_at_least(rho_hat, TOL)).0)
                    .collect();
                let mut found = false;
                for r in (0..q).rev() {
                    let Some(code) = synthesize_lattice(p, q, r, &keys, rho_hat)? else {
                        continue;
                    };
                    found = true;
                    if count_points(&code, &sizes, 0)? < n as u64 {
                        break;
                    }
                    *evaluated += 1;
                    if let Some(cand) = evaluate(&code, &sizes, families)? {
                        if cand.rho >= rho_hat - TOL {
                            pool.push(cand);
                            rho_hat = prune(&mut pool, t);
                            bounds.update(families, rho_hat);
                        }
                    }
                }
                if !found {
                    break;
                }
                z += 1;
            }
        }
    }
    Ok(pool)
}

fn best_of(pool: Vec<Candidate>, tie_cap: usize, evaluated: u64) -> Tracker {
    let mut tracker = Tracker::new(tie_cap);
    tracker.evaluated = evaluated;
    for c in pool {
        tracker.offer(c);
    }
    tracker
}

/// Seeds, then one synthesized lattice per `(q, r, s)`.
pub fn search_qrs(space: &ScaledSpace, t: usize, opts: &SearchOptions) -> Result<SearchOutcome, SearchError> {
    let p = space.p();
    if !(2..=8).contains(&p) {
        return Err(SearchError::UnsupportedDimension { regime: Regime::Qrs, p });
    }
    let families = Families::new(space)?;
    let mut evaluated = 0;
    let pool = qrs_pool(&families, space.n(), t.max(1), &mut evaluated)?;
    let tracker = best_of(pool, opts.tie_cap, evaluated);
    finish(Regime::Qrs, tracker, space.n(), opts.row_cap)
}

/// Best eight-dimensional designs on the heaviest dimensions, extended to
/// the rest with two levels each.
pub fn search_extend(space: &ScaledSpace, t: usize, opts: &SearchOptions) -> Result<SearchOutcome, SearchError> {
    let p = space.p();
    if p <= 8 {
        return Err(SearchError::UnsupportedDimension { regime: Regime::Extend, p });
    }
    let order = space.weight_order();
    let permuted = space.permuted(&order)?;
    let families = Families::new(&permuted)?;
    let n = space.n();
    let mut evaluated = 0;
    let head = families.truncated(8);
    let pool = qrs_pool(&head, n, t.max(1), &mut evaluated)?;

    let mut tracker = Tracker::new(opts.tie_cap);
    for cand in pool {
        let mut code = cand.code;
        let mut sizes = cand.sizes;
        let mut dstar: Vec<f64> = cand.levels.iter().map(LevelSet::d_star).collect();
        for j in 8..p {
            let key = |x: Word| {
                (0..j).filter(|&k| x >> k & 1 == 1).map(|k| dstar[k] * dstar[k]).sum::<f64>()
            };
            let pivot = code
                .words()
                .iter()
                .copied()
                .filter(|&x| x != 0)
                .min_by(|&a, &b| key(a).total_cmp(&key(b)).then(a.cmp(&b)))
                .ok_or(SearchError::NoCandidates)?;
            let (sub, coset) = split_index_two(&code, pivot, key)?;
            code = extend_dimension(&sub, &coset, j)?;
            sizes.push(2);
            dstar.push(families.width(j));
        }
        evaluated += 1;
        if let Some(c) = evaluate(&code, &sizes, &families)? {
            tracker.offer(c);
        }
    }
    if tracker.ties.is_empty() {
        return Err(SearchError::Infeasible(n));
    }
    let tr = choose_translation(&tracker.ties, n)?;
    let c = &tracker.ties[tr.candidate];
    let spec = DesignSpec::new(c.code.clone(), c.sizes.clone(), tr.shift, c.levels.clone())?;
    let mut inverse = alloc::vec![0usize; p];
    for (j, &src) in order.iter().enumerate() {
        inverse[src] = j;
    }
    let spec = spec.permuted(&inverse)?;
    let design = realize(&spec, opts.row_cap)?;
    let unpermute = |c: Candidate| -> Result<Candidate, SearchError> {
        Ok(Candidate {
            code: c.code.permuted(&inverse)?,
            sizes: inverse.iter().map(|&j| c.sizes[j]).collect(),
            levels: inverse.iter().map(|&j| c.levels[j].clone()).collect(),
            rho: c.rho,
        })
    };
    let ties = tracker.ties.into_iter().map(unpermute).collect::<Result<_, _>>()?;
    Ok(SearchOutcome {
        regime: Regime::Extend,
        rho: tracker.rho,
        ties,
        chosen: tr.candidate,
        shift: spec.shift(),
        m: tr.m,
        design,
        trace: tracker.trace,
        evaluated,
    })
}

/// Scales the space, dispatches on `p` (or the forced regime) and returns
/// the design in the scaled metric.
pub fn construct(space: &FactorSpace, opts: &SearchOptions) -> Result<SearchOutcome, SearchError> {
    let scaled = scale(space);
    construct_scaled(&scaled, opts)
}

pub fn construct_scaled(space: &ScaledSpace, opts: &SearchOptions) -> Result<SearchOutcome, SearchError> {
    match opts.regime.resolve(space.p()) {
        Regime::Exhaustive => search_exhaustive(space, opts),
        Regime::Qrs => search_qrs(space, opts.pool.unwrap_or(1), opts),
        _ => search_extend(space, opts.pool.unwrap_or(20), opts),
    }
}
