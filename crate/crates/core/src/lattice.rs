//! Interleaved lattices through their binary codes.
//!
//! A lattice `L` with `E^p ⊆ L ⊆ Z^p` is the union of the translates
//! `H ⊕ 2z`, where `H = L ∩ {0,1}^p` is a subgroup of `GF(2)^p`. Words are
//! `p`-bit masks; bit `k` (value `1 << k`) is dimension `k`.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::space::Rational;
use crate::TOL;

/// A `p`-bit mask.
pub type Word = u32;

/// Largest supported dimension for a [`BinaryCode`].
pub const MAX_DIM: usize = 30;

/// Largest dimension for which [`synthesize_lattice`] is available.
pub const MAX_SYNTH_DIM: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("dimension {0} out of range")]
    DimensionOutOfRange(usize),
    #[error("word {0:#b} does not fit in {1} bits")]
    WordTooWide(Word, usize),
    #[error("words are not closed under XOR")]
    NotClosed,
    #[error("code does not contain the zero word")]
    MissingZero,
    #[error("code lacks full support")]
    NotFullSupport,
    #[error("generator matrix is not square with integer rows of length p")]
    BadGenerator,
    #[error("generator matrix does not span a lattice between E^p and Z^p")]
    NotInterleaved,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("pivot must be a nonzero word of the code")]
    BadPivot,
    #[error("(q, r) = ({q}, {r}) is not admissible for p = {p}")]
    BadQr { p: usize, q: usize, r: usize },
}

/// A full-support subgroup of `GF(2)^p`, stored as its sorted word list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinaryCode {
    p: usize,
    words: Vec<Word>,
}

fn check_dim(p: usize) -> Result<(), LatticeError> {
    if p == 0 || p > MAX_DIM {
        return Err(LatticeError::DimensionOutOfRange(p));
    }
    Ok(())
}

fn full_mask(p: usize) -> Word {
    if p >= 32 {
        Word::MAX
    } else {
        (1 << p) - 1
    }
}

/// XOR closure of `gens`, sorted.
pub fn span(gens: &[Word]) -> Vec<Word> {
    let mut words = alloc::vec![0];
    for &g in gens {
        if !words.contains(&g) {
            let shifted: Vec<Word> = words.iter().map(|w| w ^ g).collect();
            words.extend(shifted);
        }
    }
    words.sort_unstable();
    words
}

impl BinaryCode {
    /// Validates closure, the zero word and full support.
    pub fn new(p: usize, words: impl IntoIterator<Item = Word>) -> Result<Self, LatticeError> {
        check_dim(p)?;
        let mut words: Vec<Word> = words.into_iter().collect();
        words.sort_unstable();
        words.dedup();
        if let Some(&w) = words.iter().find(|&&w| w & !full_mask(p) != 0) {
            return Err(LatticeError::WordTooWide(w, p));
        }
        if words.first() != Some(&0) {
            return Err(LatticeError::MissingZero);
        }
        if !words.len().is_power_of_two() {
            return Err(LatticeError::NotClosed);
        }
        for &a in &words {
            for &b in &words {
                if words.binary_search(&(a ^ b)).is_err() {
                    return Err(LatticeError::NotClosed);
                }
            }
        }
        let code = Self { p, words };
        if !code.is_full_support() {
            return Err(LatticeError::NotFullSupport);
        }
        Ok(code)
    }

    /// The full grid `Z^p`.
    pub fn full(p: usize) -> Result<Self, LatticeError> {
        check_dim(p)?;
        if p > 20 {
            return Err(LatticeError::DimensionOutOfRange(p));
        }
        Ok(Self { p, words: (0..=full_mask(p)).collect() })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// `log2 |H|`.
    pub fn q(&self) -> usize {
        self.words.len().trailing_zeros() as usize
    }

    /// Number of unit vectors in the code.
    pub fn r(&self) -> usize {
        self.unit_mask().count_ones() as usize
    }

    /// Mask of dimensions `k` with `e_k` in the code.
    pub fn unit_mask(&self) -> Word {
        (0..self.p)
            .filter(|&k| self.contains(1 << k))
            .fold(0, |acc, k| acc | (1 << k))
    }

    pub fn contains(&self, w: Word) -> bool {
        self.words.binary_search(&w).is_ok()
    }

    pub fn is_full_support(&self) -> bool {
        self.words.iter().fold(0, |acc, w| acc | w) == full_mask(self.p)
    }

    /// Comma separated bitstrings, dimension 1 first in each string.
    pub fn canonical_text(&self) -> String {
        let mut out = String::new();
        for (i, &w) in self.words.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&word_text(w, self.p));
        }
        out
    }

    /// Parses [`canonical_text`](Self::canonical_text).
    pub fn from_text(text: &str) -> Result<Self, LatticeError> {
        let mut p = None;
        let mut words = Vec::new();
        for tok in text.split(',').map(str::trim) {
            if p.is_some_and(|p| p != tok.len()) || tok.is_empty() {
                return Err(LatticeError::BadGenerator);
            }
            p = Some(tok.len());
            let mut w = 0;
            for (k, b) in tok.bytes().enumerate() {
                match b {
                    b'0' => {}
                    b'1' => w |= 1 << k,
                    _ => return Err(LatticeError::BadGenerator),
                }
            }
            words.push(w);
        }
        Self::new(p.unwrap_or(0), words)
    }

    /// Relabels dimensions: bit `j` of a new word is bit `order[j]` of the old.
    pub fn permuted(&self, order: &[usize]) -> Result<Self, LatticeError> {
        if order.len() != self.p {
            return Err(LatticeError::DimensionMismatch { expected: self.p, got: order.len() });
        }
        let words = self.words.iter().map(|&w| {
            order
                .iter()
                .enumerate()
                .filter(|&(_, &src)| w >> src & 1 == 1)
                .fold(0, |acc, (j, _)| acc | (1 << j))
        });
        Self::new(self.p, words)
    }
}

impl fmt::Display for BinaryCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_text())
    }
}

/// Bitstring of a word, dimension 1 first.
pub fn word_text(w: Word, p: usize) -> String {
    (0..p).map(|k| if w >> k & 1 == 1 { '1' } else { '0' }).collect()
}

/// All interleaved lattices for `2 <= p <= 5`.
///
/// Order: `q` descending, then `r` descending, then word list ascending.
pub fn enumerate_ils(p: usize) -> Result<Vec<BinaryCode>, LatticeError> {
    if !(2..=5).contains(&p) {
        return Err(LatticeError::DimensionOutOfRange(p));
    }
    let mut all: BTreeSet<Vec<Word>> = BTreeSet::new();
    let mut frontier: Vec<Vec<Word>> = alloc::vec![alloc::vec![0]];
    while let Some(h) = frontier.pop() {
        for g in 1..=full_mask(p) {
            if h.binary_search(&g).is_err() {
                let mut next: Vec<Word> = h.iter().flat_map(|&w| [w, w ^ g]).collect();
                next.sort_unstable();
                if all.insert(next.clone()) {
                    frontier.push(next);
                }
            }
        }
    }
    let mut codes: Vec<BinaryCode> = all
        .into_iter()
        .map(|words| BinaryCode { p, words })
        .filter(BinaryCode::is_full_support)
        .collect();
    codes.sort_by(|a, b| {
        b.q().cmp(&a.q()).then(b.r().cmp(&a.r())).then_with(|| a.words.cmp(&b.words))
    });
    Ok(codes)
}

/// `H = L(G) ∩ {0,1}^p` for a square integer generator matrix.
pub fn from_generator(rows: &[Vec<i64>]) -> Result<BinaryCode, LatticeError> {
    let p = rows.len();
    check_dim(p)?;
    if rows.iter().any(|r| r.len() != p) {
        return Err(LatticeError::BadGenerator);
    }
    // E^p ⊆ L(G) iff 2 G^{-1} is an integer matrix.
    let inv = invert(rows).ok_or(LatticeError::NotInterleaved)?;
    let two = Rational::from_integer(2.into());
    if inv.iter().flatten().any(|x| !(x * &two).is_integer()) {
        return Err(LatticeError::NotInterleaved);
    }
    let gens: Vec<Word> = rows
        .iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .filter(|(_, &v)| v.rem_euclid(2) == 1)
                .fold(0, |acc, (k, _)| acc | (1 << k))
        })
        .collect();
    BinaryCode::new(p, span(&gens))
}

fn invert(rows: &[Vec<i64>]) -> Option<Vec<Vec<Rational>>> {
    let p = rows.len();
    let mut a: Vec<Vec<Rational>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<Rational> =
                r.iter().map(|&v| Rational::from_integer(v.into())).collect();
            row.extend((0..p).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    for c in 0..p {
        let piv = (c..p).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, piv);
        let lead = a[c][c].clone();
        for v in a[c].iter_mut() {
            *v /= &lead;
        }
        for r in 0..p {
            if r != c && !a[r][c].is_zero() {
                let factor = a[r][c].clone();
                let pivot_row = a[c].clone();
                for (v, pv) in a[r].iter_mut().zip(pivot_row) {
                    *v -= &factor * pv;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[p..].to_vec()).collect())
}

/// Codes of the identity, even-sum and `{0, 1_p}` generators.
pub fn standard_generators(p: usize) -> Result<[BinaryCode; 3], LatticeError> {
    check_dim(p)?;
    if p < 2 {
        return Err(LatticeError::DimensionOutOfRange(p));
    }
    let all = full_mask(p);
    let unit: Vec<Word> = (0..p).map(|k| 1 << k).collect();
    let full = BinaryCode::new(p, span(&unit))?;
    let top = 1 << (p - 1);
    let pairs: Vec<Word> = (0..p - 1).map(|k| (1 << k) | top).collect();
    let even = BinaryCode::new(p, span(&pairs))?;
    let diagonal = BinaryCode::new(p, [0, all])?;
    Ok([full, even, diagonal])
}

/// `|(L ⊕ u) ∩ prod [0, s_k - 1]|`, saturating at `u64::MAX`.
pub fn count_points(code: &BinaryCode, s: &[usize], u: Word) -> Result<u64, LatticeError> {
    if s.len() != code.p {
        return Err(LatticeError::DimensionMismatch { expected: code.p, got: s.len() });
    }
    let halves: Vec<[u64; 2]> =
        s.iter().map(|&z| [z.div_ceil(2) as u64, (z / 2) as u64]).collect();
    let mut total: u64 = 0;
    for &h in &code.words {
        let t = h ^ u;
        let term = halves
            .iter()
            .enumerate()
            .try_fold(1u64, |acc, (k, c)| acc.checked_mul(c[(t >> k & 1) as usize]));
        total = total.saturating_add(term.unwrap_or(u64::MAX));
    }
    Ok(total)
}

/// Splits a code into an index-two subgroup `H'` and its coset `H''` with
/// `pivot ∈ H''`.
///
/// Words are visited in ascending `key` order (ties by mask); each goes to
/// `H''` unless the choices already made force it into `H'`.
pub fn split_index_two(
    code: &BinaryCode,
    pivot: Word,
    key: impl Fn(Word) -> f64,
) -> Result<(Vec<Word>, Vec<Word>), LatticeError> {
    if pivot == 0 || !code.contains(pivot) {
        return Err(LatticeError::BadPivot);
    }
    // The split is a linear functional f with f(pivot) = 1; `basis` holds
    // reduced rows (leading bit, vector, value of f).
    let mut basis: Vec<(Word, Word, bool)> = Vec::new();
    let reduce = |basis: &[(Word, Word, bool)], mut w: Word| {
        let mut value = false;
        for &(lead, v, f) in basis {
            if w & lead != 0 {
                w ^= v;
                value ^= f;
            }
        }
        (w, value)
    };
    let mut order: Vec<Word> = code.words.iter().copied().filter(|&w| w != 0 && w != pivot).collect();
    order.sort_by(|&a, &b| key(a).total_cmp(&key(b)).then(a.cmp(&b)));
    for w in core::iter::once(pivot).chain(order) {
        let (rest, value) = reduce(&basis, w);
        if rest != 0 {
            // Free choice: put w in H'', i.e. f(w) = 1.
            let lead = 1 << (31 - rest.leading_zeros());
            let f = !value;
            for row in basis.iter_mut() {
                if row.1 & lead != 0 {
                    row.1 ^= rest;
                    row.2 ^= f;
                }
            }
            basis.push((lead, rest, f));
        }
    }
    let (mut sub, mut coset) = (Vec::new(), Vec::new());
    for &w in &code.words {
        if reduce(&basis, w).1 {
            coset.push(w);
        } else {
            sub.push(w);
        }
    }
    Ok((sub, coset))
}

/// `{(h, 0) : h ∈ H'} ∪ {(h, 1) : h ∈ H''}` in dimension `p + 1`.
pub fn extend_dimension(sub: &[Word], coset: &[Word], p: usize) -> Result<BinaryCode, LatticeError> {
    check_dim(p + 1)?;
    let top = 1 << p;
    BinaryCode::new(p + 1, sub.iter().copied().chain(coset.iter().map(|&h| h | top)))
}

/// Best code with `|H| = 2^q` and exactly `r` unit vectors for the given
/// per-dimension `d*` values, or `None` when every such code has a nonzero
/// word with `sum_{x_k = 1} d*_k^2 < rho_hat^2`.
///
/// The `r` unit vectors with the largest `d*` go in first. The remaining
/// words are then decided in ascending key order (ties by mask): a word is
/// excluded whenever a full-support completion avoiding it still exists,
/// otherwise it is added. This maximizes the sorted key profile of `H`.
pub fn synthesize_lattice(
    p: usize,
    q: usize,
    r: usize,
    dstar: &[f64],
    rho_hat: f64,
) -> Result<Option<BinaryCode>, LatticeError> {
    if !(2..=MAX_SYNTH_DIM).contains(&p) {
        return Err(LatticeError::DimensionOutOfRange(p));
    }
    if !(r < q && q < p) {
        return Err(LatticeError::BadQr { p, q, r });
    }
    if dstar.len() != p {
        return Err(LatticeError::DimensionMismatch { expected: p, got: dstar.len() });
    }
    let size = 1usize << p;
    let keys: Vec<f64> = (0..size)
        .map(|x| (0..p).filter(|&k| x >> k & 1 == 1).map(|k| dstar[k] * dstar[k]).sum())
        .collect();
    let floor = rho_hat * rho_hat - TOL;

    let mut dims: Vec<usize> = (0..p).collect();
    dims.sort_by(|&a, &b| dstar[b].total_cmp(&dstar[a]).then(a.cmp(&b)));
    let units: Vec<Word> = dims[..r].iter().map(|&k| 1 << k).collect();
    let mut h = Bits::from_words(size, &span(&units));
    let mut gens = units;
    let mut out = Bits::new(size);
    for &k in &dims[r..] {
        out.set(1 << k);
    }
    if h.words().iter().any(|&x| x != 0 && keys[x as usize] < floor) {
        return Ok(None);
    }
    let target = 1usize << q;
    let search = Completion { p, target };
    // Adding any word below the floor ends in `None`, so the greedy below
    // excludes all of them exactly when one completion avoids them all.
    for x in 1..size as Word {
        if keys[x as usize] < floor && !h.get(x) {
            out.set(x);
        }
    }
    // Any completion found stays valid until the greedy asks to exclude
    // one of its words, so most steps need no search.
    let Some(mut witness) = search.find(&h, &out) else {
        return Ok(None);
    };
    let mut order: Vec<Word> = (1..size as Word).collect();
    order.sort_by(|&a, &b| keys[a as usize].total_cmp(&keys[b as usize]).then(a.cmp(&b)));
    let mut cursor = 0;
    while h.count < target {
        while h.get(order[cursor]) || out.get(order[cursor]) {
            cursor += 1;
        }
        let x = order[cursor];
        if !witness.get(x) {
            out.set(x);
            continue;
        }
        let mut trial = out.clone();
        trial.set(x);
        if let Some(w) = search.find(&h, &trial) {
            witness = w;
            out = trial;
        } else {
            gens.push(x);
            h = Bits::from_words(size, &span(&gens));
            if keys[x as usize] < floor {
                return Ok(None);
            }
        }
    }
    Ok(Some(BinaryCode::new(p, h.words())?))
}

#[derive(Clone)]
struct Bits {
    bits: Vec<u64>,
    count: usize,
}

impl Bits {
    fn new(size: usize) -> Self {
        Self { bits: alloc::vec![0; size.div_ceil(64)], count: 0 }
    }

    fn from_words(size: usize, words: &[Word]) -> Self {
        let mut b = Self::new(size);
        for &w in words {
            b.set(w);
        }
        b
    }

    fn get(&self, w: Word) -> bool {
        self.bits[w as usize / 64] >> (w % 64) & 1 == 1
    }

    fn set(&mut self, w: Word) {
        if !self.get(w) {
            self.bits[w as usize / 64] |= 1 << (w % 64);
            self.count += 1;
        }
    }

    fn words(&self) -> Vec<Word> {
        let mut out = Vec::with_capacity(self.count);
        for (i, &chunk) in self.bits.iter().enumerate() {
            let mut c = chunk;
            while c != 0 {
                let b = c.trailing_zeros();
                out.push((i * 64) as Word + b);
                c &= c - 1;
            }
        }
        out
    }
}

/// Search for a full-support subgroup of size `target` containing `h`
/// and disjoint from `out`.
struct Completion {
    p: usize,
    target: usize,
}

impl Completion {
    fn find(&self, h: &Bits, out: &Bits) -> Option<Bits> {
        let have = h.count.trailing_zeros() as usize;
        let q = self.target.trailing_zeros() as usize;
        if self.p - q < q - have {
            self.dual(h, out)
        } else {
            self.extend(h, 1, out)
        }
    }

    /// Once the support is full, new generators are taken in increasing
    /// order, each the least element of its coset, so every completion is
    /// reached once.
    fn extend(&self, state: &Bits, min_gen: Word, out: &Bits) -> Option<Bits> {
        let full = full_mask(self.p);
        let words = state.words();
        let have = words.iter().fold(0, |a, w| a | w);
        if state.count == self.target {
            return (have == full).then(|| state.clone());
        }
        let size = 1usize << self.p;
        let mut seen = state.clone();
        let mut reps = Vec::new();
        let mut support = have;
        for g in 1..size as Word {
            if seen.get(g) {
                continue;
            }
            for &w in &words {
                seen.set(w ^ g);
            }
            if words.iter().all(|&w| !out.get(w ^ g)) {
                reps.push(g);
                support |= words.iter().fold(0, |a, &w| a | (w ^ g));
            }
        }
        // The completion needs target/|state| - 1 more cosets.
        if reps.len() < self.target / state.count - 1 || support != full {
            return None;
        }
        let grow = |g: Word| {
            let mut child = state.clone();
            for &w in &words {
                child.set(w ^ g);
            }
            child
        };
        let coset_support = |g: Word| words.iter().fold(have, |a, &w| a | (w ^ g));
        if state.count * 2 == self.target {
            return reps.into_iter().find(|&g| coset_support(g) == full).map(grow);
        }
        if have != full {
            // Some generator of any completion covers the least unsupported
            // coordinate; no word of `state` has it, so the rep does.
            let k = (full & !have).trailing_zeros();
            return reps
                .into_iter()
                .filter(|&g| g >> k & 1 == 1)
                .find_map(|g| self.extend(&grow(g), 1, out));
        }
        reps.into_iter()
            .filter(|&g| g >= min_gen)
            .find_map(|g| self.extend(&grow(g), g + 1, out))
    }

    /// Same question on the orthogonal side. `H' ⊇ H` avoids `out` with full
    /// support iff `W = H'^⊥` is a subspace of `H^⊥` of dimension `p - q`
    /// holding no unit vector, with `x · y = 1` for some `y ∈ W` whenever `x`
    /// is in `out`.
    fn dual(&self, h: &Bits, out: &Bits) -> Option<Bits> {
        let size = 1usize << self.p;
        let words = h.words();
        let mut base = Echelon::default();
        for &w in &words {
            base.add(w, false);
        }
        let perp: Vec<Word> = (1..size as Word)
            .filter(|&y| words.iter().all(|&w| (w & y).count_ones() % 2 == 0))
            .collect();
        let q = self.target.trailing_zeros() as usize;
        let mut w = alloc::vec![0];
        if !self.cover(&perp, &base, &out.words(), &mut w, self.p - q) {
            return None;
        }
        let words = (0..size as Word).filter(|&x| w.iter().all(|&y| (x & y).count_ones() % 2 == 0));
        Some(Bits::from_words(size, &words.collect::<Vec<_>>()))
    }

    // Branches on generators that cover the least uncovered word; one
    // exists in any solution extending `span`. The last generator solves
    // `x · y = 1` for every uncovered `x` inside `H^⊥`.
    fn cover(&self, perp: &[Word], base: &Echelon, outs: &[Word], span: &mut Vec<Word>, left: usize) -> bool {
        let odd = |a: Word, b: Word| (a & b).count_ones() % 2 == 1;
        let uncovered = outs.iter().copied().filter(|&x| span.iter().all(|&y| !odd(x, y)));
        let admissible = |span: &[Word], y: Word| {
            y != 0 && !span.contains(&y) && span.iter().all(|&w| !(w ^ y).is_power_of_two())
        };
        if left == 0 {
            return uncovered.count() == 0;
        }
        if left == 1 {
            let mut eq = base.clone();
            for x in uncovered {
                if !eq.add(x, true) {
                    return false;
                }
            }
            let Some(y) = eq.solutions(self.p).find(|&y| admissible(span, y)) else {
                return false;
            };
            let len = span.len();
            for i in 0..len {
                span.push(span[i] ^ y);
            }
            return true;
        }
        let pending = uncovered.min();
        let mut tried = Bits::new(1 << self.p);
        for &y in perp {
            if tried.get(y) || pending.is_some_and(|x| !odd(x, y)) || !admissible(span, y) {
                continue;
            }
            let len = span.len();
            for i in 0..len {
                let w = span[i] ^ y;
                span.push(w);
                tried.set(w);
            }
            if self.cover(perp, base, outs, span, left - 1) {
                return true;
            }
            span.truncate(len);
        }
        false
    }
}

/// Linear equations `a · y = b` over GF(2), one row per leading bit.
#[derive(Clone, Default)]
struct Echelon {
    rows: Vec<(Word, bool)>,
}

impl Echelon {
    /// False when the system becomes inconsistent.
    fn add(&mut self, mut a: Word, mut b: bool) -> bool {
        for &(r, c) in &self.rows {
            if a & top_bit(r) != 0 {
                a ^= r;
                b ^= c;
            }
        }
        if a == 0 {
            return !b;
        }
        // Keep rows sorted by leading bit, highest first, so one pass reduces.
        let at = self.rows.partition_point(|&(r, _)| top_bit(r) > top_bit(a));
        self.rows.insert(at, (a, b));
        true
    }

    fn solutions(&self, p: usize) -> impl Iterator<Item = Word> + '_ {
        let lead = self.rows.iter().fold(0, |acc, &(r, _)| acc | top_bit(r));
        let free: Vec<u32> = (0..p as u32).filter(|&k| lead >> k & 1 == 0).collect();
        (0u32..1 << free.len()).map(move |bits| {
            let mut y = free.iter().enumerate().fold(0, |acc, (i, &k)| acc | ((bits >> i & 1) << k));
            // Lowest leading bit first; every other bit of a row is lower.
            for &(r, c) in self.rows.iter().rev() {
                let t = top_bit(r);
                if (((r ^ t) & y).count_ones() % 2 == 1) != c {
                    y |= t;
                }
            }
            y
        })
    }
}

fn top_bit(w: Word) -> Word {
    1 << (31 - w.leading_zeros())
}
