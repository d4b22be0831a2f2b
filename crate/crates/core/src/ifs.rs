//! Affine contractions, iterated function systems, Williams' fixed-point
//! sampling of attractors and the shrinking nodal sequences built from a
//! single composed similarity.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::{self, Matrix};
use crate::scalar::{powi, squared_distance, Scalar, FLOAT_DEDUP_TOLERANCE};
use crate::vandermonde::NodeSet;

/// Upper limit on the number of words `williams_points` will enumerate.
pub const MAX_WILLIAMS_WORDS: u128 = 1 << 22;

/// Relative tolerance of the float-mode similarity test.
const FLOAT_SIMILARITY_TOLERANCE: f64 = 1e-12;

/// x -> L x + t.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap<S> {
    linear: Matrix<S>,
    translation: Vec<S>,
}

impl<S: Scalar> AffineMap<S> {
    pub fn new(linear: Matrix<S>, translation: Vec<S>) -> Result<Self> {
        if !linear.is_square() {
            return Err(Error::InvalidArgument("linear part must be square".into()));
        }
        if translation.len() != linear.rows() {
            return Err(Error::DimensionMismatch {
                expected: linear.rows(),
                actual: translation.len(),
            });
        }
        if linear.rows() == 0 {
            return Err(Error::InvalidArgument("affine map of dimension 0".into()));
        }
        Ok(Self { linear, translation })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            linear: Matrix::identity(n),
            translation: vec![S::zero(); n],
        }
    }

    /// x -> scale * x + translation.
    pub fn homothety(scale: S, translation: Vec<S>) -> Self {
        let n = translation.len();
        let mut linear = Matrix::zeros(n, n);
        for i in 0..n {
            linear.set(i, i, scale.clone());
        }
        Self { linear, translation }
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn linear(&self) -> &Matrix<S> {
        &self.linear
    }

    pub fn translation(&self) -> &[S] {
        &self.translation
    }

    pub fn apply(&self, x: &[S]) -> Result<Vec<S>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: x.len(),
            });
        }
        Ok(self
            .linear
            .mul_vec(x)
            .into_iter()
            .zip(&self.translation)
            .map(|(a, b)| a + b.clone())
            .collect())
    }

    /// `self ∘ inner`, i.e. x -> self(inner(x)).
    pub fn after(&self, inner: &Self) -> Self {
        let linear = self.linear.mul(&inner.linear);
        let translation = self
            .linear
            .mul_vec(&inner.translation)
            .into_iter()
            .zip(&self.translation)
            .map(|(a, b)| a + b.clone())
            .collect();
        Self { linear, translation }
    }

    pub fn linear_determinant(&self) -> S {
        self.linear.determinant()
    }

    /// λ² when LᵀL = λ² I with λ > 0.
    pub fn similarity_ratio_squared(&self) -> Option<S> {
        let gram = self.linear.transpose().mul(&self.linear);
        let n = self.dim();
        let lambda_sq = gram[(0, 0)].clone();
        if lambda_sq <= S::zero() {
            return None;
        }
        let tol = if S::pivot_by_magnitude() {
            FLOAT_SIMILARITY_TOLERANCE * lambda_sq.to_f64()
        } else {
            0.0
        };
        for i in 0..n {
            for j in 0..n {
                let expected = if i == j { lambda_sq.clone() } else { S::zero() };
                let diff = (gram[(i, j)].clone() - expected).magnitude();
                let ok = if S::pivot_by_magnitude() {
                    diff.to_f64() <= tol
                } else {
                    diff.is_zero()
                };
                if !ok {
                    return None;
                }
            }
        }
        Some(lambda_sq)
    }

    /// λ, if the map is a similarity and λ is representable.
    pub fn similarity_ratio(&self) -> Option<S> {
        self.similarity_ratio_squared()?.sqrt_exact()
    }

    /// Lipschitz constant K of the map (operator 2-norm of L).
    pub fn lipschitz_bound(&self) -> f64 {
        if let Some(sq) = self.similarity_ratio_squared() {
            return sq.to_f64().sqrt();
        }
        spectral_norm(&self.linear)
    }

    pub fn is_contraction(&self) -> bool {
        match self.similarity_ratio_squared() {
            Some(sq) => sq < S::one(),
            None => self.lipschitz_bound() < 1.0,
        }
    }

    /// The unique solution of (I - L) x = t.
    pub fn fixed_point(&self) -> Result<Vec<S>> {
        let n = self.dim();
        let mut system = Matrix::<S>::identity(n);
        for i in 0..n {
            for j in 0..n {
                let v = system[(i, j)].clone() - self.linear[(i, j)].clone();
                system.set(i, j, v);
            }
        }
        matrix::solve(&system, &self.translation).ok_or(Error::Singular)
    }
}

/// Largest singular value via power iteration on LᵀL.
fn spectral_norm<S: Scalar>(linear: &Matrix<S>) -> f64 {
    let n = linear.rows();
    let l: Vec<f64> = linear.as_slice().iter().map(Scalar::to_f64).collect();
    let gram: Vec<f64> = (0..n * n)
        .map(|ij| {
            let (i, j) = (ij / n, ij % n);
            (0..n).map(|k| l[k * n + i] * l[k * n + j]).sum()
        })
        .collect();
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut eigen = 0.0;
    for _ in 0..500 {
        let w: Vec<f64> = (0..n).map(|i| (0..n).map(|j| gram[i * n + j] * v[j]).sum()).collect();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        let next = norm;
        v = w.into_iter().map(|x| x / norm).collect();
        if (next - eigen).abs() <= 1e-15 * next {
            eigen = next;
            break;
        }
        eigen = next;
    }
    eigen.sqrt()
}

/// A finite family of contractions φ_1, ..., φ_p of R^n.
#[derive(Clone, Debug, PartialEq)]
pub struct IfsSystem<S> {
    n: usize,
    maps: Vec<AffineMap<S>>,
    all_similarities: bool,
}

impl<S: Scalar> IfsSystem<S> {
    pub fn new(maps: Vec<AffineMap<S>>) -> Result<Self> {
        let n = maps
            .first()
            .map(AffineMap::dim)
            .ok_or_else(|| Error::InvalidArgument("an IFS needs at least one map".into()))?;
        for (i, m) in maps.iter().enumerate() {
            if m.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: m.dim(),
                });
            }
            if !m.is_contraction() {
                return Err(Error::NotContraction { index: i + 1 });
            }
        }
        let all_similarities = maps.iter().all(|m| m.similarity_ratio_squared().is_some());
        Ok(Self {
            n,
            maps,
            all_similarities,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn maps(&self) -> &[AffineMap<S>] {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn all_similarities(&self) -> bool {
        self.all_similarities
    }

    /// Map φ_i for a 1-based label i.
    pub fn map(&self, label: usize) -> Result<&AffineMap<S>> {
        label
            .checked_sub(1)
            .and_then(|i| self.maps.get(i))
            .ok_or(Error::MapIndex {
                index: label,
                count: self.maps.len(),
            })
    }

    /// Fixed points of the generating maps, in map order.
    pub fn vertices(&self) -> Result<Vec<Vec<S>>> {
        self.maps.iter().map(AffineMap::fixed_point).collect()
    }
}

/// A word (i_1, ..., i_q) over 1-based map labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(labels: Vec<usize>) -> Self {
        Self(labels)
    }

    pub fn labels(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&labels.join(","))
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let labels = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("invalid map label '{t}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Word(labels))
    }
}

/// φ_{i_1} ∘ ... ∘ φ_{i_q}.
pub fn compose<S: Scalar>(system: &IfsSystem<S>, word: &Word) -> Result<AffineMap<S>> {
    let (first, rest) = word.labels().split_first().ok_or(Error::EmptyWord)?;
    let mut out = system.map(*first)?.clone();
    for &label in rest {
        out = out.after(system.map(label)?);
    }
    Ok(out)
}

fn lexicographic<S: Scalar>(a: &[S], b: &[S]) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

/// Sorts points lexicographically and removes duplicates (exact equality in
/// exact mode, distance below the dedup tolerance in float mode).
pub fn sort_dedup<S: Scalar>(mut points: Vec<Vec<S>>) -> Vec<Vec<S>> {
    points.sort_by(|a, b| lexicographic(a, b));
    if !S::pivot_by_magnitude() {
        points.dedup();
        return points;
    }
    let tol_sq = FLOAT_DEDUP_TOLERANCE * FLOAT_DEDUP_TOLERANCE;
    let mut kept: Vec<Vec<S>> = Vec::with_capacity(points.len());
    for p in points {
        let lead = p[0].to_f64();
        let duplicate = kept
            .iter()
            .rev()
            .take_while(|k| lead - k[0].to_f64() < FLOAT_DEDUP_TOLERANCE)
            .any(|k| squared_distance(k, &p).to_f64() < tol_sq);
        if !duplicate {
            kept.push(p);
        }
    }
    kept
}

/// Fixed points of all compositions of length at most `max_depth`,
/// sorted and deduplicated.
pub fn williams_points<S: Scalar>(system: &IfsSystem<S>, max_depth: usize) -> Result<Vec<Vec<S>>> {
    if max_depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    let p = system.len() as u128;
    let words = (1..=max_depth as u32).try_fold(0u128, |acc, q| p.checked_pow(q).and_then(|c| acc.checked_add(c)));
    match words {
        Some(w) if w <= MAX_WILLIAMS_WORDS => {}
        other => {
            return Err(Error::TooManyWords {
                words: other.unwrap_or(u128::MAX),
                limit: MAX_WILLIAMS_WORDS,
            })
        }
    }

    let mut points = Vec::new();
    // Depth-first over words, reusing the composed prefix.
    let mut stack: Vec<(AffineMap<S>, usize)> = system.maps().iter().rev().map(|m| (m.clone(), 1)).collect();
    while let Some((map, len)) = stack.pop() {
        points.push(map.fixed_point()?);
        if len < max_depth {
            for m in system.maps().iter().rev() {
                stack.push((map.after(m), len + 1));
            }
        }
    }
    Ok(sort_dedup(points))
}

#[derive(Clone, Debug, PartialEq)]
pub struct NodalEntry<S> {
    pub k: usize,
    pub nodes: NodeSet<S>,
}

impl<S: Scalar> NodalEntry<S> {
    /// r_k. Entries always carry a radius.
    pub fn radius(&self) -> &S {
        self.nodes.radius().expect("nodal entries carry a radius")
    }
}

/// A_1, ..., A_K together with their centers a_0^k and radii r_k.
#[derive(Clone, Debug, PartialEq)]
pub struct NodalSequence<S> {
    n: usize,
    entries: Vec<NodalEntry<S>>,
}

impl<S: Scalar> NodalSequence<S> {
    pub fn new(entries: Vec<NodalEntry<S>>) -> Result<Self> {
        let n = entries
            .first()
            .map(|e| e.nodes.dim())
            .ok_or_else(|| Error::InvalidArgument("nodal sequence is empty".into()))?;
        for e in &entries {
            if e.nodes.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: e.nodes.dim(),
                });
            }
            if e.nodes.radius().is_none() {
                return Err(Error::MissingRadius);
            }
        }
        Ok(Self { n, entries })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[NodalEntry<S>] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn radii(&self) -> Vec<S> {
        self.entries.iter().map(|e| e.radius().clone()).collect()
    }
}

/// A_k = ψ^k(base) for ψ = compose(word), with center ψ^k(a_0) and
/// r_k = 2 λ^k max{|x - s| : x ∈ base}, s the fixed point of ψ.
///
/// In exact mode an irrational max{|x - s|} is replaced by a rational upper
/// bound; the ratio r_{k+1}/r_k = λ is unaffected.
pub fn iterate_word<S: Scalar>(
    system: &IfsSystem<S>,
    word: &Word,
    base: &NodeSet<S>,
    iterations: usize,
) -> Result<NodalSequence<S>> {
    if !system.all_similarities() {
        let index = system
            .maps()
            .iter()
            .position(|m| m.similarity_ratio_squared().is_none())
            .unwrap_or(0);
        return Err(Error::NotSimilarity { index: index + 1 });
    }
    if iterations == 0 {
        return Err(Error::InvalidArgument("iteration count must be at least 1".into()));
    }
    if base.dim() != system.dim() {
        return Err(Error::DimensionMismatch {
            expected: system.dim(),
            actual: base.dim(),
        });
    }
    let psi = compose(system, word)?;
    let lambda = psi.similarity_ratio().ok_or(Error::IrrationalRatio)?;
    let s = psi.fixed_point()?;
    let reach_sq = base
        .points()
        .iter()
        .map(|x| squared_distance(x, &s))
        .fold(S::zero(), |acc, d| if d > acc { d } else { acc });
    let reach = reach_sq.sqrt_upper();
    let two = S::from_i64(2);

    let mut entries = Vec::with_capacity(iterations);
    let mut current: Vec<Vec<S>> = base.points().to_vec();
    for k in 1..=iterations {
        current = current.iter().map(|p| psi.apply(p)).collect::<Result<_>>()?;
        let r_k = two.clone() * powi(&lambda, k as u64) * reach.clone();
        let nodes = NodeSet::new(current.clone())?
            .with_center(base.center_index())?
            .with_radius(r_k)?;
        entries.push(NodalEntry { k, nodes });
    }
    NodalSequence::new(entries)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Catalog {
    Cantor,
    Koch,
    Sierpinski,
    Menger,
}

impl Catalog {
    pub const ALL: [Catalog; 4] = [Catalog::Cantor, Catalog::Koch, Catalog::Sierpinski, Catalog::Menger];

    pub fn name(self) -> &'static str {
        match self {
            Catalog::Cantor => "cantor",
            Catalog::Koch => "koch",
            Catalog::Sierpinski => "sierpinski",
            Catalog::Menger => "menger",
        }
    }

    pub fn system<S: Scalar>(self) -> Result<IfsSystem<S>> {
        let third = S::from_ratio(1, 3);
        let half = S::from_ratio(1, 2);
        let maps = match self {
            Catalog::Cantor => vec![
                AffineMap::homothety(third.clone(), vec![S::zero()]),
                AffineMap::homothety(third, vec![S::from_ratio(2, 3)]),
            ],
            Catalog::Sierpinski => [(0, 0), (1, 0), (0, 1)]
                .into_iter()
                .map(|(a, b)| AffineMap::homothety(half.clone(), vec![S::from_ratio(a, 2), S::from_ratio(b, 2)]))
                .collect(),
            Catalog::Menger => {
                let mut maps = Vec::with_capacity(20);
                for a in 0..3i64 {
                    for b in 0..3i64 {
                        for c in 0..3i64 {
                            if [a, b, c].iter().filter(|&&v| v == 1).count() >= 2 {
                                continue;
                            }
                            let offset = vec![S::from_ratio(a, 3), S::from_ratio(b, 3), S::from_ratio(c, 3)];
                            maps.push(AffineMap::homothety(third.clone(), offset));
                        }
                    }
                }
                maps
            }
            Catalog::Koch => {
                if S::MODE != crate::scalar::Mode::Float {
                    return Err(Error::FloatOnly("the Koch curve".into()));
                }
                let f = |v: f64| S::from_f64(v).expect("finite constant");
                let c = 1.0 / 6.0;
                let s = 3f64.sqrt() / 6.0;
                let rot = |sin: f64, t: [f64; 2]| {
                    AffineMap::new(
                        Matrix::from_row_major(2, 2, vec![f(c), f(-sin), f(sin), f(c)]),
                        vec![f(t[0]), f(t[1])],
                    )
                };
                vec![
                    AffineMap::homothety(third.clone(), vec![S::zero(), S::zero()]),
                    rot(s, [1.0 / 3.0, 0.0])?,
                    rot(-s, [0.5, s])?,
                    AffineMap::homothety(third, vec![S::from_ratio(2, 3), S::zero()]),
                ]
            }
        };
        IfsSystem::new(maps)
    }
}

impl FromStr for Catalog {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Catalog::ALL
            .into_iter()
            .find(|c| c.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::UnknownSystem(s.to_string()))
    }
}

/// Looks up a classical self-similar fractal by name.
pub fn catalog<S: Scalar>(name: &str) -> Result<IfsSystem<S>> {
    name.parse::<Catalog>()?.system()
}
