//! Fullness and flatness diagnostics on shrinking nodal sequences.
//!
//! Every limit statement is checked on a finite sequence. The proxies are:
//!
//! * "tail" = the last ⌈K/3⌉ entries (at least two when K >= 2);
//! * a sequence is *decaying* when its tail is strictly decreasing, beyond
//!   a relative margin of [`TREND_TOLERANCE`] in float mode;
//! * `lim S_k = 0` holds when the tail maximum is below the threshold and
//!   the tail is non-increasing;
//! * `S_k` bounded holds when every S_k is below 1/threshold and the tail
//!   is not strictly increasing.
//!
//! Verdicts are three-valued; finite evidence is never promoted to a proof.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ifs::NodalSequence;
use crate::matrix;
use crate::multiindex::determinant_degree;
use crate::scalar::{powi, squared_norm, Scalar};
use crate::vandermonde::{build, check_count, inverse_row_scales, normalized_determinant, NodeSet};

/// Relative margin for float-mode monotonicity tests.
pub const TREND_TOLERANCE: f64 = 1e-9;

/// Distance to the nearest integer under which an exponent counts as integral.
pub const INTEGER_TOLERANCE: f64 = 1e-9;

pub const DEFAULT_FULLNESS_THRESHOLD: f64 = 1e-9;
pub const DEFAULT_TAIL_THRESHOLD: f64 = 1e-3;

fn tail_len(k: usize) -> usize {
    k.div_ceil(3).max(2).min(k)
}

fn strictly_decreasing<S: Scalar>(values: &[S]) -> bool {
    values.len() >= 2
        && values.windows(2).all(|w| {
            if S::pivot_by_magnitude() {
                w[1].to_f64() < w[0].to_f64() * (1.0 - TREND_TOLERANCE)
            } else {
                w[1] < w[0]
            }
        })
}

fn strictly_increasing(values: &[f64]) -> bool {
    values.len() >= 2
        && values
            .windows(2)
            .all(|w| w[1] > w[0] * (1.0 + TREND_TOLERANCE) && w[1] > w[0])
}

fn non_increasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] <= w[0] * (1.0 + TREND_TOLERANCE))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FullnessVerdict {
    Satisfied,
    Violated,
    Inconclusive,
}

impl fmt::Display for FullnessVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FullnessVerdict::Satisfied => "satisfied",
            FullnessVerdict::Violated => "violated",
            FullnessVerdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FullnessEntry<S> {
    pub k: usize,
    pub radius: S,
    pub normalized_determinant: S,
    /// Certificate constants r^{|p_i|} max_j |V(A - a_0)^{-1}_{ij}|; absent
    /// when the matrix is singular.
    pub row_scales: Option<Vec<S>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FullnessReport<S> {
    pub degree: u32,
    pub threshold: f64,
    pub entries: Vec<FullnessEntry<S>>,
    /// min_k |Det V((A_k - a_0^k)/r_k)|.
    pub c_inf: S,
    /// Whether the tail of |normalized determinants| is strictly decreasing.
    pub decaying: bool,
    pub verdict: FullnessVerdict,
}

/// Checks |Det V(A_k)| >= c r_k^{n N(n+1,d-1)} along the sequence and
/// records the inverse-row certificate for each k.
pub fn check_fullness<S: Scalar>(seq: &NodalSequence<S>, d: u32, threshold: f64) -> Result<FullnessReport<S>> {
    if !(threshold > 0.0 && threshold.is_finite()) {
        return Err(Error::InvalidArgument("threshold must be positive".into()));
    }
    let mut entries = Vec::with_capacity(seq.len());
    for e in seq.entries() {
        check_count(&e.nodes, d)?;
        let nd = normalized_determinant(&e.nodes, d)?;
        let row_scales = if nd.is_zero() {
            None
        } else {
            match inverse_row_scales(&e.nodes, d) {
                Ok(s) => Some(s),
                Err(Error::NotUnisolvent { .. }) => None,
                Err(other) => return Err(other),
            }
        };
        entries.push(FullnessEntry {
            k: e.k,
            radius: e.radius().clone(),
            normalized_determinant: nd,
            row_scales,
        });
    }
    let magnitudes: Vec<S> = entries.iter().map(|e| e.normalized_determinant.magnitude()).collect();
    let c_inf = magnitudes
        .iter()
        .cloned()
        .reduce(|a, b| if b < a { b } else { a })
        .ok_or_else(|| Error::InvalidArgument("nodal sequence is empty".into()))?;
    let tail = &magnitudes[magnitudes.len() - tail_len(magnitudes.len())..];
    let decaying = strictly_decreasing(tail);
    let limit = S::from_f64(threshold).expect("finite threshold");
    let last_below = magnitudes.last().is_some_and(|m| *m <= limit);

    let verdict = if magnitudes.iter().any(|m| m.is_zero()) || (decaying && last_below) {
        FullnessVerdict::Violated
    } else if c_inf > limit && !decaying {
        FullnessVerdict::Satisfied
    } else {
        FullnessVerdict::Inconclusive
    };
    Ok(FullnessReport {
        degree: d,
        threshold,
        entries,
        c_inf,
        decaying,
        verdict,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    /// Least-squares slope e of log|Det V(A_k)| against log r_k.
    pub exponent: f64,
    /// min_k |Det V(A_k)| / r_k^e.
    pub constant: f64,
    /// Largest absolute deviation from the fitted line, in log space.
    pub residual: f64,
}

pub fn estimate_scaling_exponent<S: Scalar>(seq: &NodalSequence<S>, d: u32) -> Result<ScalingFit> {
    if seq.len() < 3 {
        return Err(Error::InvalidArgument("scaling fit needs at least 3 entries".into()));
    }
    let radii = seq.radii();
    if radii.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument("radii must be strictly decreasing".into()));
    }
    let mut xs = Vec::with_capacity(seq.len());
    let mut ys = Vec::with_capacity(seq.len());
    for e in seq.entries() {
        let det = build(&e.nodes, d)?.determinant();
        if det.is_zero() {
            return Err(Error::ZeroDeterminant { k: e.k });
        }
        xs.push(e.radius().ln_abs());
        ys.push(det.ln_abs());
    }
    let count = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / count;
    let mean_y = ys.iter().sum::<f64>() / count;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("radii do not vary".into()));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (intercept + slope * x)).abs())
        .fold(0.0, f64::max);
    let log_c = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| y - slope * x)
        .fold(f64::INFINITY, f64::min);
    Ok(ScalingFit {
        exponent: slope,
        constant: log_c.exp(),
        residual,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", content = "order", rename_all = "snake_case")]
pub enum FlatnessVerdict {
    /// m is an integer and S_k -> 0: f is m-flat.
    IntegerOrder(u32),
    /// m is not an integer and S_k is bounded: f is [m]-flat.
    FloorOrder(u32),
    NoConclusion,
}

impl FlatnessVerdict {
    pub fn order(&self) -> Option<u32> {
        match self {
            FlatnessVerdict::IntegerOrder(m) | FlatnessVerdict::FloorOrder(m) => Some(*m),
            FlatnessVerdict::NoConclusion => None,
        }
    }

    pub fn is_flat(&self) -> bool {
        self.order().is_some()
    }
}

impl fmt::Display for FlatnessVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.order() {
            Some(m) => write!(f, "{m}-flat"),
            None => f.write_str("no conclusion"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlatnessReport {
    pub p: f64,
    pub e: f64,
    pub e_estimated: bool,
    /// min_k |Det V(A_k)| / r_k^e (0 if some determinant vanishes).
    pub c: f64,
    pub m: f64,
    pub s_values: Vec<f64>,
    pub tail_threshold: f64,
    pub tail_max: f64,
    pub tail_non_increasing: bool,
    pub s_max: f64,
    pub tail_increasing: bool,
    pub verdict: FlatnessVerdict,
}

fn check_values<S: Scalar>(seq: &NodalSequence<S>, values: &[Vec<S>]) -> Result<()> {
    if values.len() != seq.len() {
        return Err(Error::DimensionMismatch {
            expected: seq.len(),
            actual: values.len(),
        });
    }
    for (e, v) in seq.entries().iter().zip(values) {
        if v.len() != e.nodes.len() {
            return Err(Error::DimensionMismatch {
                expected: e.nodes.len(),
                actual: v.len(),
            });
        }
    }
    Ok(())
}

fn max_magnitude<S: Scalar>(values: &[S]) -> S {
    values
        .iter()
        .map(Scalar::magnitude)
        .fold(S::zero(), |acc, x| if x > acc { x } else { acc })
}

/// S_k = r_k^{-p} max{|f(x)| : x ∈ A_k}.
pub fn flatness_values<S: Scalar>(seq: &NodalSequence<S>, values: &[Vec<S>], p: f64) -> Result<Vec<f64>> {
    check_values(seq, values)?;
    Ok(seq
        .entries()
        .iter()
        .zip(values)
        .map(|(e, v)| {
            let top = max_magnitude(v);
            if top.is_zero() {
                0.0
            } else {
                (top.ln_abs() - p * e.radius().ln_abs()).exp()
            }
        })
        .collect())
}

fn snap_to_integer(v: f64) -> f64 {
    let r = v.round();
    if (v - r).abs() <= INTEGER_TOLERANCE {
        r
    } else {
        v
    }
}

/// Flatness order of f at the limit point from its values on A_k.
///
/// `e` defaults to the fitted scaling exponent. Exponents within
/// [`INTEGER_TOLERANCE`] of an integer are rounded to it before m is formed.
pub fn flatness_order<S: Scalar>(
    seq: &NodalSequence<S>,
    values: &[Vec<S>],
    p: f64,
    d: u32,
    e: Option<f64>,
    tail_threshold: f64,
) -> Result<FlatnessReport> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidArgument("p must be positive".into()));
    }
    if p > f64::from(d) {
        return Err(Error::InvalidArgument(format!("p = {p} exceeds d = {d}")));
    }
    if !(tail_threshold > 0.0 && tail_threshold.is_finite()) {
        return Err(Error::InvalidArgument("tail threshold must be positive".into()));
    }
    check_values(seq, values)?;
    for entry in seq.entries() {
        check_count(&entry.nodes, d)?;
    }
    let floor = determinant_degree(seq.dim(), d);
    let (e, e_estimated) = match e {
        Some(e) => (e, false),
        None => (estimate_scaling_exponent(seq, d)?.exponent, true),
    };
    if !e.is_finite() {
        return Err(Error::InvalidArgument("exponent e must be finite".into()));
    }
    let e = snap_to_integer(e);
    if e < floor as f64 {
        return Err(Error::ExponentBelowFloor { e, floor });
    }
    let m = snap_to_integer(p - (e - floor as f64));

    let mut log_c = f64::INFINITY;
    for entry in seq.entries() {
        let det = build(&entry.nodes, d)?.determinant();
        log_c = log_c.min(det.ln_abs() - e * entry.radius().ln_abs());
    }
    let c = log_c.exp();

    let s_values = flatness_values(seq, values, p)?;
    let tail = &s_values[s_values.len() - tail_len(s_values.len())..];
    let tail_max = tail.iter().copied().fold(0.0, f64::max);
    let tail_non_increasing = non_increasing(tail);
    let tail_increasing = strictly_increasing(tail);
    let s_max = s_values.iter().copied().fold(0.0, f64::max);

    let is_integer = m.fract() == 0.0;
    let verdict = if is_integer && (0.0..=f64::from(d)).contains(&m) && tail_max < tail_threshold && tail_non_increasing
    {
        FlatnessVerdict::IntegerOrder(m as u32)
    } else if !is_integer && m >= 0.0 && m.floor() <= f64::from(d) && s_max < 1.0 / tail_threshold && !tail_increasing {
        FlatnessVerdict::FloorOrder(m.floor() as u32)
    } else {
        FlatnessVerdict::NoConclusion
    };
    Ok(FlatnessReport {
        p,
        e,
        e_estimated,
        c,
        m,
        s_values,
        tail_threshold,
        tail_max,
        tail_non_increasing,
        s_max,
        tail_increasing,
        verdict,
    })
}

/// T_k = (s_k^q / r_k^p) max{|f(x)| / |x|^q : x ∈ A_k}, an upper bound for S_k
/// when A_k lies in the ball of radius s_k about the origin.
pub fn factored_bound<S: Scalar>(
    seq: &NodalSequence<S>,
    values: &[Vec<S>],
    p: f64,
    q: f64,
    outer_radii: &[S],
) -> Result<Vec<f64>> {
    if !(q > 0.0 && q.is_finite() && p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidArgument("p and q must be positive".into()));
    }
    check_values(seq, values)?;
    if outer_radii.len() != seq.len() {
        return Err(Error::DimensionMismatch {
            expected: seq.len(),
            actual: outer_radii.len(),
        });
    }
    let mut out = Vec::with_capacity(seq.len());
    for ((entry, vals), s_k) in seq.entries().iter().zip(values).zip(outer_radii) {
        let bound = s_k.clone() * s_k.clone();
        let mut ratio_max = f64::NEG_INFINITY;
        for (index, (x, fx)) in entry.nodes.points().iter().zip(vals).enumerate() {
            let norm_sq = squared_norm(x);
            if norm_sq.is_zero() {
                return Err(Error::NodeAtOrigin { k: entry.k, index });
            }
            if norm_sq > bound {
                return Err(Error::OutsideBall {
                    index,
                    radius: s_k.to_text(),
                });
            }
            let log_ratio = fx.ln_abs() - 0.5 * q * norm_sq.ln_abs();
            ratio_max = ratio_max.max(log_ratio);
        }
        let log_t = q * s_k.ln_abs() - p * entry.radius().ln_abs() + ratio_max;
        out.push(log_t.exp());
    }
    Ok(out)
}

/// Scaled Taylor coefficients f^{(p)}(a_0)/p! estimated from node values.
#[derive(Clone, Debug, PartialEq)]
pub struct JetEstimate<S> {
    pub center: Vec<S>,
    pub degree: u32,
    pub coefficients: Vec<S>,
}

/// Solves V(A - a_0) c = values. Exact for polynomials of degree <= d.
pub fn estimate_jet<S: Scalar>(nodes: &NodeSet<S>, values: &[S], d: u32) -> Result<JetEstimate<S>> {
    check_count(nodes, d)?;
    if values.len() != nodes.len() {
        return Err(Error::DimensionMismatch {
            expected: nodes.len(),
            actual: values.len(),
        });
    }
    let center = nodes.center().to_vec();
    let v = build(&nodes.translated(&center), d)?;
    let coefficients = matrix::solve(v.entries(), values).ok_or_else(|| Error::NotUnisolvent {
        determinant: v.determinant().to_text(),
    })?;
    Ok(JetEstimate {
        center,
        degree: d,
        coefficients,
    })
}

/// Det V(A) / δ(A)^{n N(n+1,d-1)}, carried as its sign and its square so
/// that it stays exact when the diameter δ is irrational.
#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityInvariant<S> {
    pub sign: i8,
    /// Det V(A)² / (δ(A)²)^{n N(n+1,d-1)}.
    pub squared: S,
}

impl<S: Scalar> SimilarityInvariant<S> {
    pub fn to_f64(&self) -> f64 {
        f64::from(self.sign) * self.squared.to_f64().sqrt()
    }
}

pub fn similarity_invariant<S: Scalar>(nodes: &NodeSet<S>, d: u32) -> Result<SimilarityInvariant<S>> {
    check_count(nodes, d)?;
    let diam_sq = nodes.diameter_squared();
    if diam_sq.is_zero() {
        return Err(Error::InvalidArgument("diameter is zero".into()));
    }
    let det = build(nodes, d)?.determinant();
    let exponent = determinant_degree(nodes.dim(), d);
    Ok(SimilarityInvariant {
        sign: det.signum_i8(),
        squared: det.clone() * det / powi(&diam_sq, exponent),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::{catalog, iterate_word, AffineMap, IfsSystem, NodalEntry, Word};
    use crate::scalar::Rational;
    use num_traits::{One, Zero};

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn seq_1d(points: impl Fn(usize) -> (Vec<Rational>, Rational), k_max: usize) -> NodalSequence<Rational> {
        NodalSequence::new(
            (1..=k_max)
                .map(|k| {
                    let (pts, r) = points(k);
                    NodalEntry {
                        k,
                        nodes: NodeSet::new(pts.into_iter().map(|x| vec![x]).collect())
                            .unwrap()
                            .with_radius(r)
                            .unwrap(),
                    }
                })
                .collect(),
        )
        .unwrap()
    }

    fn x_squared_seq(k_max: usize) -> NodalSequence<Rational> {
        seq_1d(
            |k| {
                let h = num_traits::pow(q(1, 2), k);
                (vec![q(0, 1), h.clone(), q(2, 1) * h.clone()], q(2, 1) * h)
            },
            k_max,
        )
    }

    fn degenerate_seq(k_max: usize) -> NodalSequence<Rational> {
        seq_1d(
            |k| {
                let r = num_traits::pow(q(1, 2), k);
                (vec![q(0, 1), r.clone(), r.clone() * r.clone()], r)
            },
            k_max,
        )
    }

    fn sierpinski_seq(k: usize) -> NodalSequence<Rational> {
        let sys: IfsSystem<Rational> = catalog("sierpinski").unwrap();
        let base = NodeSet::new(sys.vertices().unwrap()).unwrap();
        iterate_word(&sys, &Word::new(vec![1]), &base, k).unwrap()
    }

    #[test]
    fn sierpinski_is_full() {
        let report = check_fullness(&sierpinski_seq(5), 1, DEFAULT_FULLNESS_THRESHOLD).unwrap();
        let first = report.entries[0].normalized_determinant.clone();
        assert!(report.entries.iter().all(|e| e.normalized_determinant == first));
        assert_eq!(report.c_inf, first.magnitude());
        assert_eq!(report.verdict, FullnessVerdict::Satisfied);
        assert!(report.entries.iter().all(|e| e.row_scales.is_some()));
    }

    #[test]
    fn collinear_is_violated() {
        let seq = NodalSequence::new(
            (1..=4)
                .map(|k| {
                    let h = num_traits::pow(q(1, 2), k);
                    let pts = (0..3).map(|i| vec![q(i, 1) * h.clone(), q(i, 1) * h.clone()]).collect();
                    NodalEntry {
                        k,
                        nodes: NodeSet::new(pts).unwrap().with_radius(q(3, 1) * h).unwrap(),
                    }
                })
                .collect(),
        )
        .unwrap();
        let report = check_fullness(&seq, 1, DEFAULT_FULLNESS_THRESHOLD).unwrap();
        assert!(report
            .entries
            .iter()
            .all(|e| e.normalized_determinant.is_zero() && e.row_scales.is_none()));
        assert_eq!(report.verdict, FullnessVerdict::Violated);
    }

    #[test]
    fn degenerating_sequence_not_satisfied() {
        let seq = degenerate_seq(8);
        let report = check_fullness(&seq, 2, DEFAULT_FULLNESS_THRESHOLD).unwrap();
        // Normalized determinant is r(1 - r) up to sign.
        for e in &report.entries {
            let r = e.radius.clone();
            assert_eq!(e.normalized_determinant.magnitude(), r.clone() * (q(1, 1) - r));
        }
        assert!(report.decaying);
        assert_ne!(report.verdict, FullnessVerdict::Satisfied);
        let strict = check_fullness(&seq, 2, 0.5).unwrap();
        assert_eq!(strict.verdict, FullnessVerdict::Violated);
    }

    #[test]
    fn scaling_fit_self_similar() {
        let fit = estimate_scaling_exponent(&sierpinski_seq(6), 1).unwrap();
        assert!((fit.exponent - 2.0).abs() < 1e-9);
        assert!(fit.residual < 1e-9);
    }

    #[test]
    fn scaling_fit_errors() {
        assert!(estimate_scaling_exponent(&sierpinski_seq(2), 1).is_err());
    }

    #[test]
    fn x_squared_is_one_flat() {
        let seq = x_squared_seq(10);
        let values: Vec<Vec<Rational>> = seq
            .entries()
            .iter()
            .map(|e| e.nodes.points().iter().map(|p| p[0].clone() * p[0].clone()).collect())
            .collect();
        let report = flatness_order(&seq, &values, 1.5, 2, Some(3.0), DEFAULT_TAIL_THRESHOLD).unwrap();
        assert_eq!(report.m, 1.5);
        assert_eq!(report.verdict, FlatnessVerdict::FloorOrder(1));
        assert_eq!(report.verdict.to_string(), "1-flat");
        for (e, s) in seq.entries().iter().zip(&report.s_values) {
            // S_k = r_k^{-1.5} (2h)^2 = r_k^{1/2}.
            let expected = e.radius().to_f64().sqrt();
            assert!((s - expected).abs() < 1e-12 * expected);
        }
    }

    #[test]
    fn constant_functions() {
        let seq = x_squared_seq(10);
        let ones: Vec<Vec<Rational>> = seq
            .entries()
            .iter()
            .map(|e| vec![Rational::one(); e.nodes.len()])
            .collect();
        for p in [0.5, 1.0, 1.5, 2.0] {
            let r = flatness_order(&seq, &ones, p, 2, Some(3.0), DEFAULT_TAIL_THRESHOLD).unwrap();
            assert_eq!(r.verdict, FlatnessVerdict::NoConclusion, "p = {p}");
        }
        let zeros: Vec<Vec<Rational>> = seq
            .entries()
            .iter()
            .map(|e| vec![Rational::zero(); e.nodes.len()])
            .collect();
        for p in [1u32, 2] {
            let r = flatness_order(&seq, &zeros, f64::from(p), 2, Some(3.0), DEFAULT_TAIL_THRESHOLD).unwrap();
            assert_eq!(r.verdict, FlatnessVerdict::IntegerOrder(p));
            assert!(r.s_values.iter().all(|s| *s == 0.0));
        }
    }

    #[test]
    fn flatness_argument_errors() {
        let seq = x_squared_seq(4);
        let zeros: Vec<Vec<Rational>> = seq
            .entries()
            .iter()
            .map(|e| vec![Rational::zero(); e.nodes.len()])
            .collect();
        assert!(matches!(
            flatness_order(&seq, &zeros, 1.0, 2, Some(2.5), DEFAULT_TAIL_THRESHOLD),
            Err(Error::ExponentBelowFloor { floor: 3, .. })
        ));
        assert!(flatness_order(&seq, &zeros, 2.5, 2, Some(3.0), DEFAULT_TAIL_THRESHOLD).is_err());
        assert!(flatness_order(&seq, &zeros[..2], 1.0, 2, Some(3.0), DEFAULT_TAIL_THRESHOLD).is_err());
    }

    #[test]
    fn estimated_exponent_snaps() {
        let seq = x_squared_seq(8);
        let zeros: Vec<Vec<Rational>> = seq
            .entries()
            .iter()
            .map(|e| vec![Rational::zero(); e.nodes.len()])
            .collect();
        let r = flatness_order(&seq, &zeros, 2.0, 2, None, DEFAULT_TAIL_THRESHOLD).unwrap();
        assert!(r.e_estimated);
        assert_eq!(r.e, 3.0);
        assert_eq!(r.verdict, FlatnessVerdict::IntegerOrder(2));
    }

    #[test]
    fn factored_bound_cases() {
        // Nodes away from the origin: A_k = {h, 2h, 3h}, centered at h.
        let seq = seq_1d(
            |k| {
                let h = num_traits::pow(q(1, 2), k);
                (vec![h.clone(), q(2, 1) * h.clone(), q(3, 1) * h.clone()], q(2, 1) * h)
            },
            6,
        );
        let qexp = 2.0;
        let values: Vec<Vec<Rational>> = seq
            .entries()
            .iter()
            .map(|e| e.nodes.points().iter().map(|p| p[0].clone() * p[0].clone()).collect())
            .collect();
        let outer: Vec<Rational> = seq
            .entries()
            .iter()
            .map(|e| q(3, 1) * e.radius().clone() / q(2, 1))
            .collect();
        let t = factored_bound(&seq, &values, 1.5, qexp, &outer).unwrap();
        let s = flatness_values(&seq, &values, 1.5).unwrap();
        for ((tk, sk), (e, out)) in t.iter().zip(&s).zip(seq.entries().iter().zip(&outer)) {
            let expected = out.to_f64().powf(qexp) / e.radius().to_f64().powf(1.5);
            assert!((tk - expected).abs() < 1e-9 * expected);
            assert!(sk <= tk);
        }
        let at_origin = x_squared_seq(3);
        let values: Vec<Vec<Rational>> = at_origin
            .entries()
            .iter()
            .map(|e| vec![Rational::zero(); e.nodes.len()])
            .collect();
        let outer = at_origin.radii();
        assert!(matches!(
            factored_bound(&at_origin, &values, 1.0, 1.0, &outer),
            Err(Error::NodeAtOrigin { .. })
        ));
    }

    #[test]
    fn jet_of_x_squared() {
        for h in [q(1, 1), q(-3, 7), q(1, 1024)] {
            let nodes = NodeSet::new(vec![vec![q(0, 1)], vec![h.clone()], vec![q(2, 1) * h.clone()]]).unwrap();
            let values: Vec<Rational> = nodes.points().iter().map(|p| p[0].clone() * p[0].clone()).collect();
            let jet = estimate_jet(&nodes, &values, 2).unwrap();
            assert_eq!(jet.coefficients, vec![q(0, 1), q(0, 1), q(1, 1)]);
        }
    }

    #[test]
    fn jet_is_relative_to_center() {
        // f(x) = x^2 around a_0 = 1: 1 + 2(x-1) + (x-1)^2.
        let nodes = NodeSet::new(vec![vec![q(1, 1)], vec![q(2, 1)], vec![q(4, 1)]]).unwrap();
        let values: Vec<Rational> = nodes.points().iter().map(|p| p[0].clone() * p[0].clone()).collect();
        assert_eq!(
            estimate_jet(&nodes, &values, 2).unwrap().coefficients,
            vec![q(1, 1), q(2, 1), q(1, 1)]
        );
    }

    #[test]
    fn sin_jet_converges() {
        let mut errors = Vec::new();
        for j in 4..=12 {
            let h = 2f64.powi(-j);
            let nodes = NodeSet::new(vec![vec![0.0], vec![h], vec![2.0 * h]]).unwrap();
            let values: Vec<f64> = nodes.points().iter().map(|p| p[0].sin()).collect();
            let jet = estimate_jet(&nodes, &values, 2).unwrap();
            errors.push((jet.coefficients[1] - 1.0).abs());
        }
        for w in errors.windows(2) {
            assert!((w[0] / w[1]).log2() >= 0.9, "{errors:?}");
        }
    }

    #[test]
    fn similarity_invariant_is_preserved() {
        let sys: IfsSystem<Rational> = catalog("sierpinski").unwrap();
        let a = NodeSet::new(vec![
            vec![q(1, 3), q(0, 1)],
            vec![q(2, 1), q(1, 5)],
            vec![q(0, 1), q(1, 1)],
        ])
        .unwrap();
        let base = similarity_invariant(&a, 1).unwrap();
        for m in sys.maps() {
            assert_eq!(similarity_invariant(&a.mapped(m).unwrap(), 1).unwrap(), base);
        }
        let rotation = AffineMap::new(
            crate::matrix::Matrix::from_row_major(2, 2, vec![q(3, 5), q(-4, 5), q(4, 5), q(3, 5)]),
            vec![q(7, 1), q(-1, 1)],
        )
        .unwrap();
        assert_eq!(similarity_invariant(&a.mapped(&rotation).unwrap(), 1).unwrap(), base);
        assert_eq!(similarity_invariant(&a.scaled(&q(5, 2)), 1).unwrap(), base);
        let flat = NodeSet::new(vec![
            vec![q(0, 1), q(0, 1)],
            vec![q(1, 1), q(1, 1)],
            vec![q(2, 1), q(2, 1)],
        ])
        .unwrap();
        let z = similarity_invariant(&flat, 1).unwrap();
        assert_eq!((z.sign, z.squared), (0, Rational::zero()));
    }
}
