//! Node sets and the n-dimensional Vandermonde matrix V(A) = (a_i^j).

use crate::error::{Error, Result};
use crate::ifs::AffineMap;
use crate::matrix::{self, Matrix};
use crate::multiindex::{dimension, enumerate_indices, homogeneity_degree, monomial_eval, IndexSet};
use crate::scalar::{points_equal, powi, squared_distance, Scalar};

/// A finite list of distinct points in R^n with a designated center point
/// and an optional radius of a ball around it that contains every point.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeSet<S> {
    n: usize,
    points: Vec<Vec<S>>,
    center: usize,
    radius: Option<S>,
}

impl<S: Scalar> NodeSet<S> {
    pub fn new(points: Vec<Vec<S>>) -> Result<Self> {
        let n = match points.first() {
            Some(p) if !p.is_empty() => p.len(),
            Some(_) => {
                return Err(Error::InvalidArgument(
                    "points must have at least one coordinate".into(),
                ))
            }
            None => return Err(Error::InvalidArgument("node set is empty".into())),
        };
        if let Some(bad) = points.iter().find(|p| p.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: bad.len(),
            });
        }
        check_distinct(&points)?;
        Ok(Self {
            n,
            points,
            center: 0,
            radius: None,
        })
    }

    pub fn with_center(mut self, center: usize) -> Result<Self> {
        if center >= self.points.len() {
            return Err(Error::InvalidArgument(format!(
                "center index {center} out of range for {} points",
                self.points.len()
            )));
        }
        self.center = center;
        if let Some(r) = self.radius.take() {
            return self.with_radius(r);
        }
        Ok(self)
    }

    /// Attaches a radius; every point must lie within it of the center.
    pub fn with_radius(mut self, radius: S) -> Result<Self> {
        if radius <= S::zero() {
            return Err(Error::MissingRadius);
        }
        let bound = radius.clone() * radius.clone();
        let center = &self.points[self.center];
        for (index, p) in self.points.iter().enumerate() {
            let dist = squared_distance(p, center);
            if !within(&dist, &bound) {
                return Err(Error::OutsideBall {
                    index,
                    radius: radius.to_text(),
                });
            }
        }
        self.radius = Some(radius);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<S>] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Vec<S>> {
        self.points
    }

    pub fn center_index(&self) -> usize {
        self.center
    }

    pub fn center(&self) -> &[S] {
        &self.points[self.center]
    }

    pub fn radius(&self) -> Option<&S> {
        self.radius.as_ref()
    }

    /// A - v. Radius and center index are kept.
    pub fn translated(&self, v: &[S]) -> Self {
        Self {
            n: self.n,
            points: self
                .points
                .iter()
                .map(|p| p.iter().zip(v).map(|(x, y)| x.clone() - y.clone()).collect())
                .collect(),
            center: self.center,
            radius: self.radius.clone(),
        }
    }

    /// Every coordinate multiplied by `factor` (radius scaled by |factor|).
    pub fn scaled(&self, factor: &S) -> Self {
        Self {
            n: self.n,
            points: self
                .points
                .iter()
                .map(|p| p.iter().map(|x| x.clone() * factor.clone()).collect())
                .collect(),
            center: self.center,
            radius: self.radius.as_ref().map(|r| r.clone() * factor.magnitude()),
        }
    }

    /// Image under an affine map; the radius is dropped.
    pub fn mapped(&self, map: &AffineMap<S>) -> Result<Self> {
        let points = self.points.iter().map(|p| map.apply(p)).collect::<Result<Vec<_>>>()?;
        NodeSet::new(points)?.with_center(self.center)
    }

    /// Squared diameter, max pairwise squared Euclidean distance.
    pub fn diameter_squared(&self) -> S {
        let mut best = S::zero();
        for (i, a) in self.points.iter().enumerate() {
            for b in &self.points[i + 1..] {
                let d = squared_distance(a, b);
                if d > best {
                    best = d;
                }
            }
        }
        best
    }
}

fn within<S: Scalar>(value: &S, bound: &S) -> bool {
    if S::pivot_by_magnitude() {
        // Float mode: allow round-off from the arithmetic that produced the points.
        value.to_f64() <= bound.to_f64() * (1.0 + 1e-12) + 1e-300
    } else {
        value <= bound
    }
}

fn check_distinct<S: Scalar>(points: &[Vec<S>]) -> Result<()> {
    for (i, a) in points.iter().enumerate() {
        for (j, b) in points.iter().enumerate().skip(i + 1) {
            if points_equal(a, b) {
                return Err(Error::DuplicatePoint { first: i, second: j });
            }
        }
    }
    Ok(())
}

/// Evaluation matrix: one row per point, one column per multi-index.
pub fn evaluation_matrix<S: Scalar>(points: &[Vec<S>], indices: &IndexSet) -> Result<Matrix<S>> {
    let mut m = Matrix::zeros(points.len(), indices.len());
    for (i, p) in points.iter().enumerate() {
        for (j, idx) in indices.iter().enumerate() {
            m.set(i, j, monomial_eval(p, idx)?);
        }
    }
    Ok(m)
}

/// V(A): rows indexed by points, columns by I(n,d) in graded-lex order.
#[derive(Clone, Debug, PartialEq)]
pub struct VMatrix<S> {
    n: usize,
    d: u32,
    entries: Matrix<S>,
}

impl<S: Scalar> VMatrix<S> {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn entries(&self) -> &Matrix<S> {
        &self.entries
    }

    pub fn determinant(&self) -> S {
        self.entries.determinant()
    }
}

pub(crate) fn check_count<S: Scalar>(nodes: &NodeSet<S>, d: u32) -> Result<()> {
    let required = dimension(nodes.dim(), d) as usize;
    if nodes.len() != required {
        return Err(Error::NodeCount {
            n: nodes.dim(),
            d,
            required,
            actual: nodes.len(),
        });
    }
    Ok(())
}

pub fn build<S: Scalar>(nodes: &NodeSet<S>, d: u32) -> Result<VMatrix<S>> {
    check_count(nodes, d)?;
    let indices = enumerate_indices(nodes.dim(), d)?;
    Ok(VMatrix {
        n: nodes.dim(),
        d,
        entries: evaluation_matrix(nodes.points(), &indices)?,
    })
}

/// Det V(A): Bareiss over the integers in exact mode, pivoted LU in float mode.
pub fn determinant<S: Scalar>(m: &VMatrix<S>) -> S {
    m.determinant()
}

fn positive_radius<S: Scalar>(nodes: &NodeSet<S>) -> Result<S> {
    match nodes.radius() {
        Some(r) if *r > S::zero() => Ok(r.clone()),
        _ => Err(Error::MissingRadius),
    }
}

/// (A - a_0) / r, the configuration whose determinant is scale-free.
fn normalized_nodes<S: Scalar>(nodes: &NodeSet<S>) -> Result<NodeSet<S>> {
    let r = positive_radius(nodes)?;
    let centered = nodes.translated(nodes.center());
    Ok(centered.scaled(&(S::one() / r)))
}

/// Det V((A - a_0)/r) = Det V(A) / r^{n N(n+1,d-1)}.
pub fn normalized_determinant<S: Scalar>(nodes: &NodeSet<S>, d: u32) -> Result<S> {
    check_count(nodes, d)?;
    Ok(build(&normalized_nodes(nodes)?, d)?.determinant())
}

/// (Det V(phi(A)), (Det P)^{N(n+1,d-1)} Det V(A)). The two always agree.
pub fn affine_image_determinant_check<S: Scalar>(nodes: &NodeSet<S>, map: &AffineMap<S>, d: u32) -> Result<(S, S)> {
    check_count(nodes, d)?;
    if map.dim() != nodes.dim() {
        return Err(Error::DimensionMismatch {
            expected: nodes.dim(),
            actual: map.dim(),
        });
    }
    let det_p = map.linear_determinant();
    if det_p.is_zero() {
        return Err(Error::Singular);
    }
    let image = build(&nodes.mapped(map)?, d)?.determinant();
    let predicted = powi(&det_p, homogeneity_degree(nodes.dim(), d)) * build(nodes, d)?.determinant();
    Ok((image, predicted))
}

/// For each row i of V(A - a_0)^{-1}: r^{|p_i|} times its largest absolute entry.
///
/// Computed as the row maxima of V((A - a_0)/r)^{-1}, which equals
/// diag(r^{|p_i|}) V(A - a_0)^{-1}.
pub fn inverse_row_scales<S: Scalar>(nodes: &NodeSet<S>, d: u32) -> Result<Vec<S>> {
    check_count(nodes, d)?;
    let v = build(&normalized_nodes(nodes)?, d)?;
    let inv = matrix::inverse(v.entries()).ok_or_else(|| Error::NotUnisolvent {
        determinant: v.determinant().to_text(),
    })?;
    Ok((0..inv.rows())
        .map(|i| {
            inv.row(i)
                .iter()
                .map(Scalar::magnitude)
                .fold(S::zero(), |acc, x| if x > acc { x } else { acc })
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_traits::{One, Zero};

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn nodes(points: &[&[i64]]) -> NodeSet<Rational> {
        NodeSet::new(points.iter().map(|p| p.iter().map(|&v| q(v, 1)).collect()).collect()).unwrap()
    }

    fn rows(m: &VMatrix<Rational>) -> Vec<Vec<Rational>> {
        m.entries().row_vecs()
    }

    fn ints(v: &[&[i64]]) -> Vec<Vec<Rational>> {
        v.iter().map(|r| r.iter().map(|&x| q(x, 1)).collect()).collect()
    }

    #[test]
    fn build_examples() {
        let m = build(&nodes(&[&[0], &[1], &[2]]), 2).unwrap();
        assert_eq!(rows(&m), ints(&[&[1, 0, 0], &[1, 1, 1], &[1, 2, 4]]));
        let m = build(&nodes(&[&[0, 0], &[1, 0], &[0, 1]]), 1).unwrap();
        assert_eq!(rows(&m), ints(&[&[1, 0, 0], &[1, 1, 0], &[1, 0, 1]]));
        let err = build(&nodes(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]), 1).unwrap_err();
        assert!(matches!(err, Error::NodeCount { required: 3, .. }));
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(build(&nodes(&[&[0], &[1], &[2]]), 2).unwrap().determinant(), q(2, 1));
        assert!(build(&nodes(&[&[0, 0], &[1, 1], &[2, 2]]), 1)
            .unwrap()
            .determinant()
            .is_zero());
        assert_eq!(
            build(&nodes(&[&[0, 0], &[1, 0], &[0, 1]]), 1).unwrap().determinant(),
            q(1, 1)
        );
    }

    #[test]
    fn normalized_determinant_examples() {
        let a = nodes(&[&[0], &[1], &[2]]).with_radius(q(2, 1)).unwrap();
        assert_eq!(normalized_determinant(&a, 2).unwrap(), q(1, 4));
        let scaled = a.scaled(&q(3, 7));
        assert_eq!(normalized_determinant(&scaled, 2).unwrap(), q(1, 4));
        let shifted = a.translated(&[q(-5, 3)]);
        assert_eq!(normalized_determinant(&shifted, 2).unwrap(), q(1, 4));
        let no_radius = nodes(&[&[0], &[1], &[2]]);
        assert_eq!(normalized_determinant(&no_radius, 2), Err(Error::MissingRadius));
    }

    #[test]
    fn radius_must_contain_points() {
        let a = nodes(&[&[0], &[1], &[2]]);
        assert!(matches!(
            a.clone().with_radius(q(3, 2)),
            Err(Error::OutsideBall { index: 2, .. })
        ));
        assert_eq!(a.clone().with_radius(q(0, 1)).unwrap_err(), Error::MissingRadius);
        assert!(a.with_center(1).unwrap().with_radius(q(1, 1)).is_ok());
    }

    #[test]
    fn duplicates_rejected() {
        let err = NodeSet::new(ints(&[&[1, 2], &[3, 4], &[1, 2]])).unwrap_err();
        assert_eq!(err, Error::DuplicatePoint { first: 0, second: 2 });
    }

    #[test]
    fn affine_check_examples() {
        let a = nodes(&[&[0], &[1], &[2]]);
        let id = AffineMap::identity(1);
        let (lhs, rhs) = affine_image_determinant_check(&a, &id, 2).unwrap();
        assert_eq!((lhs.clone(), rhs), (q(2, 1), q(2, 1)));
        let double = AffineMap::new(Matrix::from_row_major(1, 1, vec![q(2, 1)]), vec![q(0, 1)]).unwrap();
        let (lhs, rhs) = affine_image_determinant_check(&a, &double, 2).unwrap();
        assert_eq!((lhs, rhs), (q(16, 1), q(16, 1)));
        let shift = AffineMap::new(Matrix::identity(1), vec![q(9, 4)]).unwrap();
        let (lhs, rhs) = affine_image_determinant_check(&a, &shift, 2).unwrap();
        assert_eq!((lhs, rhs), (q(2, 1), q(2, 1)));
        let singular = AffineMap::new(Matrix::zeros(1, 1), vec![q(0, 1)]).unwrap();
        assert_eq!(affine_image_determinant_check(&a, &singular, 2), Err(Error::Singular));
    }

    #[test]
    fn row_scales_examples() {
        for r in [q(1, 1), q(3, 5), q(7, 2)] {
            let a = NodeSet::new(vec![vec![q(0, 1)], vec![r.clone()]])
                .unwrap()
                .with_radius(r.clone())
                .unwrap();
            assert_eq!(
                inverse_row_scales(&a, 1).unwrap(),
                vec![Rational::one(), Rational::one()]
            );
        }
        let a = nodes(&[&[0, 0], &[2, 1], &[-1, 3]]).with_radius(q(4, 1)).unwrap();
        let base = inverse_row_scales(&a, 1).unwrap();
        assert_eq!(inverse_row_scales(&a.scaled(&q(5, 3)), 1).unwrap(), base);
        let flat = nodes(&[&[0, 0], &[1, 1], &[2, 2]]).with_radius(q(3, 1)).unwrap();
        assert!(matches!(inverse_row_scales(&flat, 1), Err(Error::NotUnisolvent { .. })));
    }
}
