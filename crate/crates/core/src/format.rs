//! File formats: IFS specs, nodal sequences, CSV point tables and report
//! documents.
//!
//! Scalars are written as strings: exact rationals as `p/q` (or `p` for
//! integers), floats in scientific notation with 17 significant digits.
//! Readers also accept plain JSON numbers.

use serde::{Deserialize, Serialize};

use crate::analysis::{FlatnessReport, FlatnessVerdict, FullnessReport, FullnessVerdict, JetEstimate, ScalingFit};
use crate::error::{Error, Result};
use crate::ifs::{AffineMap, IfsSystem, NodalEntry, NodalSequence};
use crate::matrix::Matrix;
use crate::multiindex::enumerate_indices;
use crate::nodesets::{Hdeg, HdegResult, Polynomial};
use crate::scalar::{points_equal, Mode, Scalar};
use crate::vandermonde::NodeSet;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawScalar {
    Text(String),
    Number(serde_json::Number),
}

impl RawScalar {
    pub fn parse<S: Scalar>(&self) -> Result<S> {
        match self {
            RawScalar::Text(s) => S::parse_text(s),
            RawScalar::Number(n) => S::parse_text(&n.to_string()),
        }
    }
}

fn text<S: Scalar>(v: &S) -> RawScalar {
    RawScalar::Text(v.to_text())
}

fn texts<S: Scalar>(v: &[S]) -> Vec<RawScalar> {
    v.iter().map(text).collect()
}

fn parse_all<S: Scalar>(v: &[RawScalar]) -> Result<Vec<S>> {
    v.iter().map(RawScalar::parse).collect()
}

pub fn float_text(v: f64) -> String {
    v.to_text()
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

// ---------------------------------------------------------------- IFS specs

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDocument {
    /// Row-major n×n.
    pub linear: Vec<RawScalar>,
    pub translation: Vec<RawScalar>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IfsDocument {
    pub n: usize,
    pub maps: Vec<MapDocument>,
}

impl IfsDocument {
    pub fn from_system<S: Scalar>(system: &IfsSystem<S>) -> Self {
        Self {
            n: system.dim(),
            maps: system
                .maps()
                .iter()
                .map(|m| MapDocument {
                    linear: texts(m.linear().as_slice()),
                    translation: texts(m.translation()),
                })
                .collect(),
        }
    }

    pub fn to_system<S: Scalar>(&self) -> Result<IfsSystem<S>> {
        if self.n == 0 {
            return Err(Error::InvalidArgument("IFS dimension must be at least 1".into()));
        }
        let maps = self
            .maps
            .iter()
            .map(|m| {
                if m.linear.len() != self.n * self.n {
                    return Err(Error::DimensionMismatch {
                        expected: self.n * self.n,
                        actual: m.linear.len(),
                    });
                }
                let linear = Matrix::from_row_major(self.n, self.n, parse_all(&m.linear)?);
                AffineMap::new(linear, parse_all(&m.translation)?)
            })
            .collect::<Result<Vec<_>>>()?;
        IfsSystem::new(maps)
    }
}

pub fn parse_ifs_spec<S: Scalar>(json: &str) -> Result<IfsSystem<S>> {
    let doc: IfsDocument = serde_json::from_str(json).map_err(json_error)?;
    doc.to_system()
}

// ---------------------------------------------------------- nodal sequences

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDocument {
    pub k: usize,
    pub r: RawScalar,
    pub center: Vec<RawScalar>,
    pub points: Vec<Vec<RawScalar>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<RawScalar>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceDocument {
    pub n: usize,
    pub d: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    pub entries: Vec<EntryDocument>,
}

/// A nodal sequence read from a document, with its degree and optional values.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadedSequence<S> {
    pub sequence: NodalSequence<S>,
    pub d: u32,
    pub values: Option<Vec<Vec<S>>>,
}

impl SequenceDocument {
    pub fn from_sequence<S: Scalar>(seq: &NodalSequence<S>, d: u32, values: Option<&[Vec<S>]>) -> Self {
        Self {
            n: seq.dim(),
            d,
            mode: Some(S::MODE),
            entries: seq
                .entries()
                .iter()
                .enumerate()
                .map(|(i, e)| EntryDocument {
                    k: e.k,
                    r: text(e.radius()),
                    center: texts(e.nodes.center()),
                    points: e.nodes.points().iter().map(|p| texts(p)).collect(),
                    values: values.map(|v| texts(&v[i])),
                })
                .collect(),
        }
    }

    pub fn to_sequence<S: Scalar>(&self) -> Result<LoadedSequence<S>> {
        if self.n == 0 {
            return Err(Error::InvalidArgument("dimension n must be at least 1".into()));
        }
        let has_values = self.entries.first().is_some_and(|e| e.values.is_some());
        let mut entries = Vec::with_capacity(self.entries.len());
        let mut values = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            let points = e
                .points
                .iter()
                .map(|p| {
                    if p.len() != self.n {
                        return Err(Error::DimensionMismatch {
                            expected: self.n,
                            actual: p.len(),
                        });
                    }
                    parse_all(p)
                })
                .collect::<Result<Vec<Vec<S>>>>()?;
            let center: Vec<S> = parse_all(&e.center)?;
            let center_index = points
                .iter()
                .position(|p| points_equal(p, &center))
                .ok_or_else(|| Error::InvalidArgument(format!("center of entry k={} is not one of its points", e.k)))?;
            let nodes = NodeSet::new(points)?
                .with_center(center_index)?
                .with_radius(e.r.parse()?)?;
            match (&e.values, has_values) {
                (Some(v), true) => {
                    if v.len() != nodes.len() {
                        return Err(Error::DimensionMismatch {
                            expected: nodes.len(),
                            actual: v.len(),
                        });
                    }
                    values.push(parse_all(v)?);
                }
                (None, false) => {}
                _ => {
                    return Err(Error::InvalidArgument(
                        "values must be given for every entry or for none".into(),
                    ))
                }
            }
            entries.push(NodalEntry { k: e.k, nodes });
        }
        Ok(LoadedSequence {
            sequence: NodalSequence::new(entries)?,
            d: self.d,
            values: has_values.then_some(values),
        })
    }
}

pub fn parse_sequence<S: Scalar>(json: &str) -> Result<LoadedSequence<S>> {
    let doc: SequenceDocument = serde_json::from_str(json).map_err(json_error)?;
    doc.to_sequence()
}

// -------------------------------------------------------------- CSV points

/// Rows of a `x1,...,xn[,value]` table.
#[derive(Clone, Debug, PartialEq)]
pub struct PointTable<S> {
    pub n: usize,
    pub points: Vec<Vec<S>>,
    pub values: Option<Vec<S>>,
}

pub fn parse_points_csv<S: Scalar>(input: &str) -> Result<PointTable<S>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(input.as_bytes());
    let headers = reader.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    let names: Vec<&str> = headers.iter().collect();
    let has_value = names.last() == Some(&"value");
    let n = names.len() - usize::from(has_value);
    if n == 0 {
        return Err(Error::Parse("CSV header needs at least one coordinate column".into()));
    }
    for (i, name) in names[..n].iter().enumerate() {
        if *name != format!("x{}", i + 1) {
            return Err(Error::Parse(format!("expected column 'x{}', found '{name}'", i + 1)));
        }
    }
    let mut points = Vec::new();
    let mut values = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        if record.len() != names.len() {
            return Err(Error::Parse(format!(
                "row {} has {} fields, expected {}",
                points.len() + 1,
                record.len(),
                names.len()
            )));
        }
        let row = record.iter().map(S::parse_text).collect::<Result<Vec<S>>>()?;
        let mut row = row.into_iter();
        points.push(row.by_ref().take(n).collect());
        if has_value {
            values.push(row.next().expect("value column"));
        }
    }
    Ok(PointTable {
        n,
        points,
        values: has_value.then_some(values),
    })
}

pub fn write_points_csv<S: Scalar>(points: &[Vec<S>], values: Option<&[S]>) -> String {
    let n = points.first().map_or(0, Vec::len);
    let mut out = (1..=n).map(|i| format!("x{i}")).collect::<Vec<_>>().join(",");
    if values.is_some() {
        out.push_str(",value");
    }
    out.push('\n');
    for (i, p) in points.iter().enumerate() {
        let mut row: Vec<String> = p.iter().map(Scalar::to_text).collect();
        if let Some(v) = values {
            row.push(v[i].to_text());
        }
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

// ------------------------------------------------------------------ reports

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolynomialDocument {
    pub mode: Mode,
    pub n: usize,
    pub d: u32,
    pub indices: Vec<Vec<u32>>,
    pub coefficients: Vec<String>,
}

impl PolynomialDocument {
    pub fn from_polynomial<S: Scalar>(p: &Polynomial<S>) -> Self {
        Self {
            mode: S::MODE,
            n: p.dim(),
            d: p.degree_bound(),
            indices: p.indices().iter().map(|i| i.exponents().to_vec()).collect(),
            coefficients: p.coefficients().iter().map(Scalar::to_text).collect(),
        }
    }

    pub fn to_polynomial<S: Scalar>(&self) -> Result<Polynomial<S>> {
        let expected: Vec<Vec<u32>> = enumerate_indices(self.n, self.d)?
            .iter()
            .map(|i| i.exponents().to_vec())
            .collect();
        if expected != self.indices {
            return Err(Error::Parse(
                "polynomial indices are not I(n,d) in graded-lex order".into(),
            ));
        }
        let coefficients = self
            .coefficients
            .iter()
            .map(|c| S::parse_text(c))
            .collect::<Result<_>>()?;
        Polynomial::new(self.n, self.d, coefficients)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HdegDocument {
    pub mode: Mode,
    pub bound: u32,
    /// `None` when Hdeg exceeds the bound.
    pub value: Option<u32>,
    pub exceeds_bound: bool,
    pub witness: Option<PolynomialDocument>,
}

impl HdegDocument {
    pub fn from_result<S: Scalar>(r: &HdegResult<S>) -> Self {
        Self {
            mode: S::MODE,
            bound: r.bound,
            value: match r.value {
                Hdeg::Finite(e) => Some(e),
                Hdeg::ExceedsBound => None,
            },
            exceeds_bound: r.value == Hdeg::ExceedsBound,
            witness: r.witness.as_ref().map(PolynomialDocument::from_polynomial),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JetDocument {
    pub mode: Mode,
    pub d: u32,
    pub center: Vec<String>,
    pub indices: Vec<Vec<u32>>,
    pub coefficients: Vec<String>,
}

impl JetDocument {
    pub fn from_estimate<S: Scalar>(jet: &JetEstimate<S>) -> Result<Self> {
        let indices = enumerate_indices(jet.center.len(), jet.degree)?;
        Ok(Self {
            mode: S::MODE,
            d: jet.degree,
            center: jet.center.iter().map(Scalar::to_text).collect(),
            indices: indices.iter().map(|i| i.exponents().to_vec()).collect(),
            coefficients: jet.coefficients.iter().map(Scalar::to_text).collect(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FullnessEntryDocument {
    pub k: usize,
    pub r: String,
    pub normalized_determinant: String,
    pub row_scales: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FullnessDocument {
    pub mode: Mode,
    pub d: u32,
    pub threshold: String,
    pub c_inf: String,
    pub decaying: bool,
    pub verdict: FullnessVerdict,
    pub entries: Vec<FullnessEntryDocument>,
}

impl FullnessDocument {
    pub fn from_report<S: Scalar>(r: &FullnessReport<S>) -> Self {
        Self {
            mode: S::MODE,
            d: r.degree,
            threshold: float_text(r.threshold),
            c_inf: r.c_inf.to_text(),
            decaying: r.decaying,
            verdict: r.verdict,
            entries: r
                .entries
                .iter()
                .map(|e| FullnessEntryDocument {
                    k: e.k,
                    r: e.radius.to_text(),
                    normalized_determinant: e.normalized_determinant.to_text(),
                    row_scales: e.row_scales.as_ref().map(|s| s.iter().map(Scalar::to_text).collect()),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatnessDocument {
    pub mode: Mode,
    pub d: u32,
    pub p: String,
    pub e: String,
    pub e_estimated: bool,
    pub c: String,
    pub m: String,
    pub tail_threshold: String,
    pub s_values: Vec<String>,
    pub tail_max: String,
    pub tail_non_increasing: bool,
    pub s_max: String,
    pub tail_increasing: bool,
    /// "<m>-flat" or "no conclusion".
    pub verdict: String,
    pub outcome: FlatnessVerdict,
}

impl FlatnessDocument {
    pub fn from_report(mode: Mode, d: u32, r: &FlatnessReport) -> Self {
        Self {
            mode,
            d,
            p: float_text(r.p),
            e: float_text(r.e),
            e_estimated: r.e_estimated,
            c: float_text(r.c),
            m: float_text(r.m),
            tail_threshold: float_text(r.tail_threshold),
            s_values: r.s_values.iter().copied().map(float_text).collect(),
            tail_max: float_text(r.tail_max),
            tail_non_increasing: r.tail_non_increasing,
            s_max: float_text(r.s_max),
            tail_increasing: r.tail_increasing,
            verdict: r.verdict.to_string(),
            outcome: r.verdict,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingDocument {
    pub exponent: String,
    pub constant: String,
    pub residual: String,
}

impl From<&ScalingFit> for ScalingDocument {
    fn from(f: &ScalingFit) -> Self {
        Self {
            exponent: float_text(f.exponent),
            constant: float_text(f.constant),
            residual: float_text(f.residual),
        }
    }
}
