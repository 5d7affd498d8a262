//! Factor domains, importance weights and the rescaling that turns a
//! weighted distance on `[0,1]^p` into the plain Euclidean distance on
//! `prod [0, w_k]`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational used for every discrete level and weight.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpaceError {
    #[error("malformed number {0:?}")]
    Malformed(String),
    #[error("dimension {dim}: levels must contain the endpoints 0 and 1 (endpoint missing)")]
    EndpointMissing { dim: usize },
    #[error("dimension {dim}: level outside [0, 1]")]
    LevelOutOfRange { dim: usize },
    #[error("dimension {dim}: duplicate level")]
    DuplicateLevel { dim: usize },
    #[error("dimension {dim}: weight must be positive")]
    NonPositiveWeight { dim: usize },
    #[error("at least two dimensions are required, got {0}")]
    TooFewDimensions(usize),
    #[error("run count must be at least 2, got {0}")]
    RunCountTooSmall(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid permutation")]
    InvalidPermutation,
}

/// Parses a decimal (`"0.12"`, `"-3"`, `".5"`, `"1e-2"`) or fraction
/// (`"3/4"`) without going through binary floating point.
pub fn parse_rational(text: &str) -> Result<Rational, SpaceError> {
    let bad = || SpaceError::Malformed(text.to_string());
    let t = text.trim();
    if let Some((num, den)) = t.split_once('/') {
        let n = parse_rational(num)?;
        let d = parse_rational(den)?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(n / d);
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = t[i + 1..].parse().map_err(|_| bad())?;
            (&t[..i], e)
        }
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let mut all = String::with_capacity(int_part.len() + frac_part.len());
    all.push_str(int_part);
    all.push_str(frac_part);
    let numer: BigInt = all.parse().map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u8);
    let mut value = Rational::from_integer(numer);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if negative { -value } else { value })
}

/// Nearest `f64` of an exact rational.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DomainKind {
    Continuous,
    /// Strictly increasing, starts at 0, ends at 1.
    Discrete(Vec<Rational>),
}

/// One input variable before scaling: `[0,1]` or a finite level set in it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorDomain {
    kind: DomainKind,
    weight: Rational,
}

impl FactorDomain {
    pub fn continuous(weight: Rational) -> Result<Self, SpaceError> {
        Self::checked(DomainKind::Continuous, weight, 0)
    }

    /// Levels may arrive in any order; they are sorted here.
    pub fn discrete(mut levels: Vec<Rational>, weight: Rational) -> Result<Self, SpaceError> {
        levels.sort();
        Self::checked(DomainKind::Discrete(levels), weight, 0)
    }

    pub fn binary(weight: Rational) -> Result<Self, SpaceError> {
        Self::discrete(alloc::vec![Rational::zero(), Rational::one()], weight)
    }

    fn checked(kind: DomainKind, weight: Rational, dim: usize) -> Result<Self, SpaceError> {
        if !weight.is_positive() {
            return Err(SpaceError::NonPositiveWeight { dim });
        }
        if let DomainKind::Discrete(levels) = &kind {
            if levels.windows(2).any(|w| w[0] == w[1]) {
                return Err(SpaceError::DuplicateLevel { dim });
            }
            if levels.iter().any(|l| l.is_negative() || *l > Rational::one()) {
                return Err(SpaceError::LevelOutOfRange { dim });
            }
            let ok = levels.len() >= 2
                && levels.first().is_some_and(Zero::is_zero)
                && levels.last().is_some_and(One::is_one);
            if !ok {
                return Err(SpaceError::EndpointMissing { dim });
            }
        }
        Ok(Self { kind, weight })
    }

    fn with_dim(self, dim: usize) -> Result<Self, SpaceError> {
        Self::checked(self.kind, self.weight, dim)
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    pub fn weight(&self) -> &Rational {
        &self.weight
    }

    pub fn levels(&self) -> Option<&[Rational]> {
        match &self.kind {
            DomainKind::Continuous => None,
            DomainKind::Discrete(l) => Some(l),
        }
    }

    pub fn is_binary(&self) -> bool {
        self.levels().is_some_and(|l| l.len() == 2)
    }
}

/// The whole input space together with the requested run count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorSpace {
    dims: Vec<FactorDomain>,
    n: usize,
}

impl FactorSpace {
    pub fn new(dims: Vec<FactorDomain>, n: usize) -> Result<Self, SpaceError> {
        if dims.len() < 2 {
            return Err(SpaceError::TooFewDimensions(dims.len()));
        }
        if n < 2 {
            return Err(SpaceError::RunCountTooSmall(n));
        }
        let dims = dims
            .into_iter()
            .enumerate()
            .map(|(k, d)| d.with_dim(k))
            .collect::<Result<_, _>>()?;
        Ok(Self { dims, n })
    }

    pub fn dims(&self) -> &[FactorDomain] {
        &self.dims
    }

    pub fn p(&self) -> usize {
        self.dims.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn with_n(&self, n: usize) -> Result<Self, SpaceError> {
        Self::new(self.dims.clone(), n)
    }
}

/// A dimension after multiplication by its weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScaledDomain {
    /// The interval `[0, width]`.
    Continuous { width: Rational },
    /// Levels `w * l`, strictly increasing, first 0, last `w`.
    Discrete { levels: Vec<Rational> },
}

impl ScaledDomain {
    pub fn width(&self) -> Rational {
        match self {
            ScaledDomain::Continuous { width } => width.clone(),
            ScaledDomain::Discrete { levels } => levels.last().cloned().unwrap_or_default(),
        }
    }

    pub fn width_f64(&self) -> f64 {
        to_f64(&self.width())
    }

    pub fn is_continuous(&self) -> bool {
        matches!(self, ScaledDomain::Continuous { .. })
    }

    /// `None` for a continuous dimension.
    pub fn level_count(&self) -> Option<usize> {
        match self {
            ScaledDomain::Continuous { .. } => None,
            ScaledDomain::Discrete { levels } => Some(levels.len()),
        }
    }
}

/// Search-side view of a [`FactorSpace`].
///
/// `permutation[j]` is the input dimension that sits at position `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledSpace {
    dims: Vec<ScaledDomain>,
    weights: Vec<Rational>,
    permutation: Vec<usize>,
    n: usize,
}

/// Multiplies every domain by its weight; the permutation is the identity.
pub fn scale(space: &FactorSpace) -> ScaledSpace {
    let dims = space
        .dims
        .iter()
        .map(|d| match &d.kind {
            DomainKind::Continuous => ScaledDomain::Continuous { width: d.weight.clone() },
            DomainKind::Discrete(levels) => ScaledDomain::Discrete {
                levels: levels.iter().map(|l| l * &d.weight).collect(),
            },
        })
        .collect();
    ScaledSpace {
        dims,
        weights: space.dims.iter().map(|d| d.weight.clone()).collect(),
        permutation: (0..space.p()).collect(),
        n: space.n,
    }
}

impl ScaledSpace {
    pub fn dims(&self) -> &[ScaledDomain] {
        &self.dims
    }

    pub fn dim(&self, k: usize) -> &ScaledDomain {
        &self.dims[k]
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn p(&self) -> usize {
        self.dims.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn widths_f64(&self) -> Vec<f64> {
        self.dims.iter().map(ScaledDomain::width_f64).collect()
    }

    /// Reorders dimensions so that new position `j` holds current position
    /// `order[j]`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self, SpaceError> {
        check_permutation(order, self.p())?;
        Ok(Self {
            dims: order.iter().map(|&j| self.dims[j].clone()).collect(),
            weights: order.iter().map(|&j| self.weights[j].clone()).collect(),
            permutation: order.iter().map(|&j| self.permutation[j]).collect(),
            n: self.n,
        })
    }

    /// Stable order of positions by decreasing weight.
    pub fn weight_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.p()).collect();
        order.sort_by(|&a, &b| self.weights[b].cmp(&self.weights[a]));
        order
    }

    /// Keeps only the leading `k` dimensions.
    pub fn truncated(&self, k: usize) -> Self {
        Self {
            dims: self.dims[..k].to_vec(),
            weights: self.weights[..k].to_vec(),
            permutation: self.permutation[..k].to_vec(),
            n: self.n,
        }
    }

    /// Inverse of [`scale`], including the permutation.
    pub fn unscale(&self) -> Result<FactorSpace, SpaceError> {
        let p = self.p();
        check_permutation(&self.permutation, p)?;
        let mut dims: Vec<Option<FactorDomain>> = alloc::vec![None; p];
        for (j, d) in self.dims.iter().enumerate() {
            let w = self.weights[j].clone();
            let domain = match d {
                ScaledDomain::Continuous { .. } => FactorDomain::continuous(w)?,
                ScaledDomain::Discrete { levels } => {
                    FactorDomain::discrete(levels.iter().map(|l| l / &w).collect(), w)?
                }
            };
            dims[self.permutation[j]] = Some(domain);
        }
        FactorSpace::new(dims.into_iter().map(Option::unwrap).collect(), self.n)
    }
}

fn check_permutation(order: &[usize], p: usize) -> Result<(), SpaceError> {
    if order.len() != p {
        return Err(SpaceError::DimensionMismatch { expected: p, got: order.len() });
    }
    let mut seen = alloc::vec![false; p];
    for &j in order {
        if j >= p || core::mem::replace(&mut seen[j], true) {
            return Err(SpaceError::InvalidPermutation);
        }
    }
    Ok(())
}

/// Divides scaled coordinates by the weights and restores input order.
///
/// The reported separation distance is left in the scaled metric.
pub fn unscale_design(
    design: &crate::assembly::Design,
    space: &ScaledSpace,
) -> Result<crate::assembly::Design, SpaceError> {
    let p = space.p();
    if design.p() != p {
        return Err(SpaceError::DimensionMismatch { expected: p, got: design.p() });
    }
    check_permutation(&space.permutation, p)?;
    let weights: Vec<f64> = space.weights.iter().map(to_f64).collect();
    let mut points = alloc::vec![0.0; design.points().len()];
    for (row_in, row_out) in design.points().chunks(p).zip(points.chunks_mut(p)) {
        for j in 0..p {
            row_out[space.permutation[j]] = row_in[j] / weights[j];
        }
    }
    Ok(design.with_points(points))
}

impl fmt::Display for ScaledDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScaledDomain::Continuous { width } => write!(f, "[0, {width}]"),
            ScaledDomain::Discrete { levels } => {
                f.write_str("{")?;
                for (i, l) in levels.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{l}")?;
                }
                f.write_str("}")
            }
        }
    }
}
