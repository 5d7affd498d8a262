//! Space documents, design CSV and certificate JSON.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use mixmaxd_core::assembly::DesignSpec;
use mixmaxd_core::lattice::{word_text, BinaryCode};
use mixmaxd_core::levels::LevelSet;
use mixmaxd_core::space::{
    parse_rational, FactorDomain, FactorSpace, Rational, ScaledDomain, ScaledSpace,
};
use serde::{Deserialize, Serialize};

/// A decimal given either as a JSON string or a JSON number.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
pub enum Decimal {
    Text(String),
    Number(serde_json::Number),
}

impl Decimal {
    fn parse(&self) -> Result<Rational> {
        let text = match self {
            Decimal::Text(t) => t.clone(),
            Decimal::Number(n) => n.to_string(),
        };
        parse_rational(&text).with_context(|| format!("bad decimal {text:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DimType {
    Continuous,
    Ordinal,
    Binary,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DimDoc {
    #[serde(rename = "type")]
    pub kind: DimType,
    #[serde(default)]
    pub levels: Option<Vec<Decimal>>,
    #[serde(default)]
    pub weight: Option<Decimal>,
    #[serde(default)]
    pub name: Option<String>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    #[serde(default)]
    pub n: Option<usize>,
    pub dims: Vec<DimDoc>,
}

/// A parsed space with its column names.
#[derive(Debug, Clone)]
pub struct NamedSpace {
    pub space: FactorSpace,
    pub names: Vec<String>,
}

/// `n_override` wins over the document's `n`.
pub fn parse_space(text: &str, n_override: Option<usize>) -> Result<NamedSpace> {
    let doc: SpaceDoc = serde_json::from_str(text).context("malformed space document")?;
    let Some(n) = n_override.or(doc.n) else {
        bail!("run count missing: give \"n\" in the document or --n");
    };
    let mut dims = Vec::with_capacity(doc.dims.len());
    let mut names = Vec::with_capacity(doc.dims.len());
    for (k, d) in doc.dims.iter().enumerate() {
        let weight = match &d.weight {
            Some(w) => w.parse()?,
            None => Rational::from_integer(1.into()),
        };
        let dom = match d.kind {
            DimType::Continuous => {
                if d.levels.is_some() {
                    bail!("dimension {}: levels are not allowed on a continuous factor", k + 1);
                }
                FactorDomain::continuous(weight)
            }
            DimType::Binary => {
                if d.levels.is_some() {
                    bail!("dimension {}: binary factors take no levels", k + 1);
                }
                FactorDomain::binary(weight)
            }
            DimType::Ordinal => {
                let Some(levels) = &d.levels else {
                    bail!("dimension {}: ordinal factor without levels", k + 1);
                };
                let levels = levels.iter().map(Decimal::parse).collect::<Result<Vec<_>>>()?;
                FactorDomain::discrete(levels, weight)
            }
        }
        .with_context(|| format!("dimension {}", k + 1))?;
        dims.push(dom);
        names.push(d.name.clone().unwrap_or_else(|| format!("x{}", k + 1)));
    }
    let space = FactorSpace::new(dims, n)?;
    Ok(NamedSpace { space, names })
}

pub fn read_space(path: &Path, n_override: Option<usize>) -> Result<NamedSpace> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_space(&text, n_override)
}

/// Twelve significant digits, shortest form.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    let text = rounded.to_string();
    if text == "-0" {
        "0".into()
    } else {
        text
    }
}

pub fn design_csv(names: &[String], rows: &[Vec<f64>]) -> String {
    let mut out = names.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&v| format_sig(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Header and rows of a design CSV.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().context("empty design file")?;
    let names: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let row = line
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .with_context(|| format!("design row {}", i + 1))?;
        if row.len() != names.len() {
            bail!("design row {} has {} cells, expected {}", i + 1, row.len(), names.len());
        }
        rows.push(row);
    }
    Ok((names, rows))
}

/// Everything needed to rebuild a design without rerunning the search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub p: usize,
    pub n: usize,
    pub m: u64,
    /// Separation distance in the scaled metric.
    pub rho: f64,
    /// Code words as bitstrings, dimension 1 first.
    pub code: Vec<String>,
    pub q: usize,
    pub r: usize,
    pub s: Vec<usize>,
    pub u: String,
    pub weights: Vec<String>,
    /// Scaled levels per dimension.
    pub levels: Vec<Vec<f64>>,
    /// Exact scaled levels for discrete dimensions.
    #[serde(default)]
    pub exact_levels: Vec<Option<Vec<String>>>,
    /// Scaled ground set of each discrete dimension; `None` if continuous.
    pub ground: Vec<Option<Vec<String>>>,
    pub names: Vec<String>,
}

impl Certificate {
    pub fn new(spec: &DesignSpec, rho: f64, space: &ScaledSpace, names: &[String]) -> Self {
        let code = spec.code();
        let p = code.p();
        Self {
            p,
            n: space.n(),
            m: spec.count(),
            rho,
            code: code.words().iter().map(|&w| word_text(w, p)).collect(),
            q: code.q(),
            r: code.r(),
            s: spec.sizes().to_vec(),
            u: word_text(spec.shift(), p),
            weights: space.weights().iter().map(|w| w.to_string()).collect(),
            levels: spec.levels().iter().map(|l| l.values().to_vec()).collect(),
            exact_levels: spec
                .levels()
                .iter()
                .map(|l| l.exact().map(|e| e.iter().map(|r| r.to_string()).collect()))
                .collect(),
            ground: space
                .dims()
                .iter()
                .map(|d| match d {
                    ScaledDomain::Continuous { .. } => None,
                    ScaledDomain::Discrete { levels } => {
                        Some(levels.iter().map(|r| r.to_string()).collect())
                    }
                })
                .collect(),
            names: names.to_vec(),
        }
    }

    /// Exact ground sets of the discrete dimensions.
    pub fn ground(&self) -> Result<Vec<Option<Vec<Rational>>>> {
        self.ground
            .iter()
            .map(|g| {
                g.as_ref()
                    .map(|levels| levels.iter().map(|t| Ok(parse_rational(t)?)).collect())
                    .transpose()
            })
            .collect()
    }

    pub fn weights(&self) -> Result<Vec<Rational>> {
        self.weights.iter().map(|w| Ok(parse_rational(w)?)).collect()
    }

    /// Rebuilds the lattice specification.
    pub fn spec(&self) -> Result<DesignSpec> {
        let code = BinaryCode::from_text(&self.code.join(",")).context("certificate code")?;
        let shift = parse_word(&self.u, self.p)?;
        let mut levels = Vec::with_capacity(self.p);
        for k in 0..self.levels.len() {
            let set = match self.exact_levels.get(k).and_then(Option::as_ref) {
                Some(exact) => {
                    let values = exact.iter().map(|t| parse_rational(t)).collect::<Result<Vec<_>, _>>()?;
                    LevelSet::from_exact(values)?
                }
                None => LevelSet::from_f64(self.levels[k].clone())?,
            };
            levels.push(set);
        }
        Ok(DesignSpec::new(code, self.s.clone(), shift, levels)?)
    }
}

fn parse_word(text: &str, p: usize) -> Result<u32> {
    if text.len() != p || !text.chars().all(|c| c == '0' || c == '1') {
        bail!("translation {text:?} is not a {p}-bit string");
    }
    Ok(text.chars().enumerate().filter(|(_, c)| *c == '1').fold(0, |acc, (k, _)| acc | 1 << k))
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating a temporary file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
