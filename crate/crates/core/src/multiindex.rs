//! Multi-indices, the graded-lexicographic index set I(n,d), and the
//! dimension count N(n,d) = C(n+d, d).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{powi, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Total degree |i| = i_1 + ... + i_n.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Componentwise product of factorials, i! = i_1! ... i_n!.
    pub fn factorial(&self) -> u128 {
        self.0.iter().map(|&e| (1..=u128::from(e)).product::<u128>()).product()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

/// I(n,d) in graded-lexicographic order: by total degree, then by
/// descending exponent of x_1, x_2, ... (so `(1,0)` precedes `(0,1)`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSet {
    n: usize,
    d: u32,
    indices: Vec<MultiIndex>,
}

impl IndexSet {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn iter(&self) -> std::slice::Iter<'_, MultiIndex> {
        self.indices.iter()
    }

    pub fn position(&self, index: &MultiIndex) -> Option<usize> {
        self.indices.iter().position(|i| i == index)
    }
}

impl<'a> IntoIterator for &'a IndexSet {
    type Item = &'a MultiIndex;
    type IntoIter = std::slice::Iter<'a, MultiIndex>;

    fn into_iter(self) -> Self::IntoIter {
        self.indices.iter()
    }
}

fn push_exact_degree(prefix: &mut Vec<u32>, remaining_vars: usize, degree: u32, out: &mut Vec<MultiIndex>) {
    if remaining_vars == 1 {
        prefix.push(degree);
        out.push(MultiIndex(prefix.clone()));
        prefix.pop();
        return;
    }
    for first in (0..=degree).rev() {
        prefix.push(first);
        push_exact_degree(prefix, remaining_vars - 1, degree - first, out);
        prefix.pop();
    }
}

pub fn enumerate_indices(n: usize, d: u32) -> Result<IndexSet> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension n must be at least 1".into()));
    }
    let mut indices = Vec::with_capacity(dimension(n, d) as usize);
    let mut prefix = Vec::with_capacity(n);
    for degree in 0..=d {
        push_exact_degree(&mut prefix, n, degree, &mut indices);
    }
    Ok(IndexSet { n, d, indices })
}

/// N(n,d) = C(n+d, d). Defined for n = 0 as well (N(0,d) = 1).
pub fn dimension(n: usize, d: u32) -> u64 {
    let n = n as u64;
    let d = u64::from(d);
    let k = n.min(d);
    // Multiplicative formula; each partial product is itself a binomial.
    (1..=k).fold(1u64, |acc, i| acc * (n + d - k + i) / i)
}

/// N(n+1, d-1), the per-coordinate homogeneity degree of Det V(A).
/// Zero for d = 0.
pub fn homogeneity_degree(n: usize, d: u32) -> u64 {
    if d == 0 {
        0
    } else {
        dimension(n + 1, d - 1)
    }
}

/// n * N(n+1, d-1), the total degree of Det V(A) and the exponent in the
/// fullness condition.
pub fn determinant_degree(n: usize, d: u32) -> u64 {
    n as u64 * homogeneity_degree(n, d)
}

/// The five expressions for the sum of degrees of all monomials of degree
/// at most d in n variables. They are always equal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeSums(pub [u64; 5]);

impl DegreeSums {
    pub fn all_equal(&self) -> bool {
        self.0.iter().all(|&v| v == self.0[0])
    }
}

pub fn degree_sum_all_forms(n: usize, d: u32) -> Result<DegreeSums> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidArgument("degree sums need n >= 1 and d >= 1".into()));
    }
    let nn = n as u64;
    let by_enumeration: u64 = enumerate_indices(n, d)?.iter().map(|i| u64::from(i.degree())).sum();
    let per_variable = nn * (1..=d).map(|i| u64::from(i) * dimension(n - 1, d - i)).sum::<u64>();
    let per_degree: u64 = (1..=d).map(|i| u64::from(i) * dimension(n - 1, i)).sum();
    let partial_dims = nn * (0..d).map(|i| dimension(n, i)).sum::<u64>();
    let closed_form = determinant_degree(n, d);
    Ok(DegreeSums([
        by_enumeration,
        per_variable,
        per_degree,
        partial_dims,
        closed_form,
    ]))
}

/// x^i with 0^0 = 1.
pub fn monomial_eval<S: Scalar>(point: &[S], index: &MultiIndex) -> Result<S> {
    if point.len() != index.dim() {
        return Err(Error::DimensionMismatch {
            expected: index.dim(),
            actual: point.len(),
        });
    }
    Ok(point
        .iter()
        .zip(index.exponents())
        .fold(S::one(), |acc, (x, &e)| acc * powi(x, u64::from(e))))
}
