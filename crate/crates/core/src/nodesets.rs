//! Hdeg of finite point sets, greedy unisolvent-subset selection and
//! Lagrange interpolation on unisolvent nodes.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::{self, select_pivot};
use crate::multiindex::{dimension, enumerate_indices, monomial_eval, IndexSet};
use crate::scalar::{points_equal, Scalar};
use crate::vandermonde::{build, check_count, evaluation_matrix, NodeSet};

/// A polynomial of degree at most d in n variables, coefficients aligned
/// with I(n,d) in graded-lex order.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<S> {
    n: usize,
    d: u32,
    coefficients: Vec<S>,
}

impl<S: Scalar> Polynomial<S> {
    pub fn new(n: usize, d: u32, coefficients: Vec<S>) -> Result<Self> {
        let required = enumerate_indices(n, d)?.len();
        if coefficients.len() != required {
            return Err(Error::DimensionMismatch {
                expected: required,
                actual: coefficients.len(),
            });
        }
        Ok(Self { n, d, coefficients })
    }

    pub fn zero(n: usize, d: u32) -> Result<Self> {
        let len = dimension(n, d) as usize;
        Self::new(n, d, vec![S::zero(); len])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree_bound(&self) -> u32 {
        self.d
    }

    pub fn coefficients(&self) -> &[S] {
        &self.coefficients
    }

    pub fn indices(&self) -> IndexSet {
        enumerate_indices(self.n, self.d).expect("n >= 1 checked at construction")
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|c| c.is_zero())
    }

    /// Degree of the highest nonzero term; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.indices()
            .iter()
            .zip(&self.coefficients)
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i.degree())
            .max()
    }

    pub fn evaluate(&self, point: &[S]) -> Result<S> {
        evaluate_polynomial(self, point)
    }
}

impl<S: Scalar> fmt::Display for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (idx, c) in self.indices().iter().zip(&self.coefficients) {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({})", c.to_text())?;
            for (var, &e) in idx.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{}", var + 1)?,
                    _ => write!(f, "*x{}^{e}", var + 1)?,
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

pub fn evaluate_polynomial<S: Scalar>(p: &Polynomial<S>, point: &[S]) -> Result<S> {
    if point.len() != p.n {
        return Err(Error::DimensionMismatch {
            expected: p.n,
            actual: point.len(),
        });
    }
    p.indices()
        .iter()
        .zip(&p.coefficients)
        .try_fold(S::zero(), |acc, (idx, c)| {
            Ok(acc + c.clone() * monomial_eval(point, idx)?)
        })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Hdeg {
    Finite(u32),
    ExceedsBound,
}

impl fmt::Display for Hdeg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hdeg::Finite(e) => write!(f, "{e}"),
            Hdeg::ExceedsBound => f.write_str("exceeds bound"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HdegResult<S> {
    pub value: Hdeg,
    /// A nonzero polynomial of degree `value` vanishing on every point.
    pub witness: Option<Polynomial<S>>,
    pub bound: u32,
}

fn validate_points<S: Scalar>(points: &[Vec<S>]) -> Result<usize> {
    let n = points
        .first()
        .map(Vec::len)
        .ok_or_else(|| Error::InvalidArgument("point list is empty".into()))?;
    if n == 0 {
        return Err(Error::InvalidArgument(
            "points must have at least one coordinate".into(),
        ));
    }
    if let Some(bad) = points.iter().find(|p| p.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: bad.len(),
        });
    }
    Ok(n)
}

/// Least degree e <= bound of a nonzero polynomial vanishing on `points`.
pub fn hdeg<S: Scalar>(points: &[Vec<S>], bound: u32) -> Result<HdegResult<S>> {
    if bound == 0 {
        return Err(Error::InvalidArgument("Hdeg bound must be at least 1".into()));
    }
    let n = validate_points(points)?;
    for (i, a) in points.iter().enumerate() {
        if let Some(j) = points[i + 1..].iter().position(|b| points_equal(a, b)) {
            return Err(Error::DuplicatePoint {
                first: i,
                second: i + 1 + j,
            });
        }
    }
    for e in 1..=bound {
        let indices = enumerate_indices(n, e)?;
        let m = evaluation_matrix(points, &indices)?;
        if let Some(kernel) = matrix::kernel_vector(&m) {
            return Ok(HdegResult {
                value: Hdeg::Finite(e),
                witness: Some(Polynomial::new(n, e, kernel)?),
                bound,
            });
        }
    }
    Ok(HdegResult {
        value: Hdeg::ExceedsBound,
        witness: None,
        bound,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Selection<S> {
    Unisolvent(NodeSet<S>),
    /// Every point lies on a common hypersurface of degree <= d.
    Degenerate {
        rank: usize,
        required: usize,
    },
}

/// Greedy rank-increasing scan in input order.
///
/// A point is kept iff its monomial row is independent of the rows kept so
/// far. Rows are reduced incrementally; the residual pivot is the largest
/// entry in float mode and the first nonzero entry in exact mode.
pub fn select_unisolvent<S: Scalar>(points: &[Vec<S>], n: usize, d: u32) -> Result<Selection<S>> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension n must be at least 1".into()));
    }
    if let Some(bad) = points.iter().find(|p| p.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: bad.len(),
        });
    }
    let indices = enumerate_indices(n, d)?;
    let required = indices.len();
    let rows = evaluation_matrix(points, &indices)?;
    let reference = rows.max_abs();

    // Reduced basis rows, each normalized to 1 at its pivot column.
    let mut basis: Vec<(usize, Vec<S>)> = Vec::with_capacity(required);
    let mut kept = Vec::with_capacity(required);
    for (i, point) in points.iter().enumerate() {
        if kept.len() == required {
            break;
        }
        let mut residual = rows.row(i).to_vec();
        for (col, b) in &basis {
            let factor = residual[*col].clone();
            if factor.is_zero() {
                continue;
            }
            for (r, bv) in residual.iter_mut().zip(b) {
                *r = r.clone() - factor.clone() * bv.clone();
            }
        }
        let candidates = residual.iter().cloned().enumerate();
        let Some(col) = select_pivot(candidates, &reference) else {
            continue;
        };
        let p = residual[col].clone();
        let normalized: Vec<S> = residual.into_iter().map(|v| v / p.clone()).collect();
        basis.push((col, normalized));
        kept.push(point.clone());
    }
    if kept.len() < required {
        return Ok(Selection::Degenerate {
            rank: kept.len(),
            required,
        });
    }
    Ok(Selection::Unisolvent(NodeSet::new(kept)?))
}

/// The unique degree-<=d polynomial taking `values` on `nodes`.
pub fn interpolate<S: Scalar>(nodes: &NodeSet<S>, values: &[S], d: u32) -> Result<Polynomial<S>> {
    check_count(nodes, d)?;
    if values.len() != nodes.len() {
        return Err(Error::DimensionMismatch {
            expected: nodes.len(),
            actual: values.len(),
        });
    }
    let v = build(nodes, d)?;
    let coefficients = matrix::solve(v.entries(), values).ok_or_else(|| Error::NotUnisolvent {
        determinant: v.determinant().to_text(),
    })?;
    Polynomial::new(nodes.dim(), d, coefficients)
}
