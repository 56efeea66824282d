//! Finite pointed metric spaces with exact rational distances.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational, Q};

pub type SpaceRef = Arc<MetricSpace>;

/// A finite pointed metric space.
///
/// Values built through [`MetricSpace::new`] satisfy every metric axiom.
/// [`MetricSpace::from_parts`] only checks the shape (square matrix, base in
/// range) so that malformed inputs can still be inspected with
/// [`MetricSpace::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricSpace {
    labels: Vec<String>,
    base: usize,
    dist: Vec<Vec<Rational>>,
}

/// A failed metric axiom together with the indices that witness it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateLabel {
        i: usize,
        j: usize,
    },
    Diagonal {
        i: usize,
    },
    Negative {
        i: usize,
        j: usize,
    },
    Asymmetric {
        i: usize,
        j: usize,
    },
    Positivity {
        i: usize,
        j: usize,
    },
    /// `d(i,k) > d(i,j) + d(j,k)`.
    Triangle {
        i: usize,
        k: usize,
        via: usize,
    },
}

impl Violation {
    pub fn axiom(&self) -> &'static str {
        match self {
            Violation::DuplicateLabel { .. } => "duplicate-label",
            Violation::Diagonal { .. } => "diagonal",
            Violation::Negative { .. } => "nonnegativity",
            Violation::Asymmetric { .. } => "symmetry",
            Violation::Positivity { .. } => "positivity",
            Violation::Triangle { .. } => "triangle",
        }
    }

    /// Human-readable form using the space's labels, e.g. `triangle(e,2 via 1)`.
    pub fn describe(&self, space: &MetricSpace) -> String {
        let l = |i: usize| space.label(i);
        match *self {
            Violation::DuplicateLabel { i, j } => format!("duplicate-label({},{})", i, j),
            Violation::Diagonal { i } => format!("diagonal({})", l(i)),
            Violation::Negative { i, j } => format!("nonnegativity({},{})", l(i), l(j)),
            Violation::Asymmetric { i, j } => format!("symmetry({},{})", l(i), l(j)),
            Violation::Positivity { i, j } => format!("positivity({},{})", l(i), l(j)),
            Violation::Triangle { i, k, via } => {
                format!("triangle({},{} via {})", l(i), l(k), l(via))
            }
        }
    }
}

impl MetricSpace {
    /// Builds a space and rejects it unless every metric axiom holds.
    pub fn new(labels: Vec<String>, base: usize, dist: Vec<Vec<Rational>>) -> Result<Self> {
        let space = Self::from_parts(labels, base, dist)?;
        let violations = space.validate();
        if violations.is_empty() {
            Ok(space)
        } else {
            let listing: Vec<String> = violations.iter().map(|v| v.describe(&space)).collect();
            Err(Error::InvalidSpace(listing.join(", ")))
        }
    }

    /// Shape checks only; axioms are left to [`MetricSpace::validate`].
    pub fn from_parts(labels: Vec<String>, base: usize, dist: Vec<Vec<Rational>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidSpace("a pointed space needs at least one point".into()));
        }
        if base >= n {
            return Err(Error::IndexOutOfRange { index: base, len: n });
        }
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidSpace(format!("distance matrix must be {n}x{n} to match the point list")));
        }
        Ok(Self { labels, base, dist })
    }

    /// Every violated axiom, in a deterministic order. Empty iff the space is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.len();
        let d = &self.dist;
        let mut out = Vec::new();
        let mut seen = std::collections::HashMap::new();
        for (i, l) in self.labels.iter().enumerate() {
            if let Some(&j) = seen.get(l.as_str()) {
                out.push(Violation::DuplicateLabel { i: j, j: i });
            } else {
                seen.insert(l.as_str(), i);
            }
        }
        for i in 0..n {
            if !d[i][i].is_zero() {
                out.push(Violation::Diagonal { i });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if d[i][j].is_negative() || d[j][i].is_negative() {
                    out.push(Violation::Negative { i, j });
                }
                if d[i][j] != d[j][i] {
                    out.push(Violation::Asymmetric { i, j });
                }
                if d[i][j].is_zero() || d[j][i].is_zero() {
                    out.push(Violation::Positivity { i, j });
                }
            }
        }
        for i in 0..n {
            for k in (i + 1)..n {
                for j in 0..n {
                    if j == i || j == k {
                        continue;
                    }
                    if d[i][k] > &d[i][j] + &d[j][k] {
                        out.push(Violation::Triangle { i, k, via: j });
                    }
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels.iter().position(|l| l == label).ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn d(&self, i: usize, j: usize) -> &Rational {
        &self.dist[i][j]
    }

    pub fn distances(&self) -> &[Vec<Rational>] {
        &self.dist
    }

    /// Indices other than the base point, ascending.
    pub fn non_base(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&i| i != self.base)
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: i, len: self.len() })
        }
    }

    pub fn diameter(&self) -> Rational {
        self.dist.iter().flat_map(|row| row.iter()).max().cloned().unwrap_or_else(rational::zero)
    }

    /// Smallest positive distance, `None` for a one-point space.
    pub fn separation(&self) -> Option<Rational> {
        let n = self.len();
        (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).map(|(i, j)| self.dist[i][j].clone()).min()
    }

    /// Distinct positive distances, ascending.
    pub fn distinct_distances(&self) -> Vec<Rational> {
        let n = self.len();
        let set: BTreeSet<Rational> =
            (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).map(|(i, j)| self.dist[i][j].clone()).collect();
        set.into_iter().collect()
    }

    /// Points `0, 1, ..., n` on the integer line with the base at `0`.
    pub fn path(n: usize) -> Self {
        let labels = (0..=n).map(|i| i.to_string()).collect();
        let dist = (0..=n).map(|i| (0..=n).map(|j| rational::int((i as i64 - j as i64).abs())).collect()).collect();
        Self { labels, base: 0, dist }
    }

    /// `n` points at mutual distance one: base `0` and points `x1..x{n-1}`.
    pub fn equilateral(n: usize) -> Self {
        assert!(n >= 1, "equilateral space needs at least one point");
        let labels = std::iter::once("0".to_string()).chain((1..n).map(|i| format!("x{i}"))).collect();
        let dist =
            (0..n).map(|i| (0..n).map(|j| if i == j { rational::zero() } else { rational::one() }).collect()).collect();
        Self { labels, base: 0, dist }
    }

    /// Points on the real line at the given rational positions; labels are supplied.
    pub fn on_line(labels: Vec<String>, base: usize, positions: &[Rational]) -> Result<Self> {
        let dist = positions.iter().map(|a| positions.iter().map(|b| (a - b).abs()).collect()).collect();
        Self::new(labels, base, dist)
    }
}

impl fmt::Display for MetricSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}} base {}", self.labels.join(","), self.label(self.base))
    }
}

#[derive(Serialize, Deserialize)]
struct SpaceFile {
    points: Vec<String>,
    base: usize,
    dist: Vec<Vec<Q>>,
}

impl Serialize for MetricSpace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SpaceFile {
            points: self.labels.clone(),
            base: self.base,
            dist: self.dist.iter().map(|row| row.iter().cloned().map(Q).collect()).collect(),
        }
        .serialize(s)
    }
}

/// Deserialization checks the shape only; use [`MetricSpace::validate`]
/// (or re-build through [`MetricSpace::new`]) before relying on the axioms.
impl<'de> Deserialize<'de> for MetricSpace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = SpaceFile::deserialize(d)?;
        let dist = file.dist.into_iter().map(|row| row.into_iter().map(|q| q.0).collect()).collect();
        MetricSpace::from_parts(file.points, file.base, dist).map_err(serde::de::Error::custom)
    }
}

/// A map between the point sets of two spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointMap {
    source: SpaceRef,
    target: SpaceRef,
    image: Vec<usize>,
    base_preserving: bool,
    lipschitz: Rational,
}

impl PointMap {
    pub fn new(source: SpaceRef, target: SpaceRef, image: Vec<usize>) -> Result<Self> {
        if image.len() != source.len() {
            return Err(Error::InvalidSpace(format!(
                "point map has {} images for {} points",
                image.len(),
                source.len()
            )));
        }
        for &y in &image {
            target.check_index(y)?;
        }
        let base_preserving = image[source.base()] == target.base();
        let n = source.len();
        let mut lipschitz = rational::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                let ratio = target.d(image[i], image[j]) / source.d(i, j);
                if ratio > lipschitz {
                    lipschitz = ratio;
                }
            }
        }
        Ok(Self { source, target, image, base_preserving, lipschitz })
    }

    pub fn source(&self) -> &SpaceRef {
        &self.source
    }

    pub fn target(&self) -> &SpaceRef {
        &self.target
    }

    pub fn image(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    pub fn is_base_preserving(&self) -> bool {
        self.base_preserving
    }

    pub fn lipschitz_number(&self) -> &Rational {
        &self.lipschitz
    }

    /// A self-map is a retraction when it fixes every point of its image.
    pub fn is_retraction(&self) -> bool {
        self.source == self.target && self.image.iter().all(|&y| self.image[y] == y)
    }
}

/// `min_{a ∈ A} d(x, a)`.
pub fn distance_to_set(space: &MetricSpace, x: usize, set: &[usize]) -> Result<Rational> {
    space.check_index(x)?;
    let mut best: Option<&Rational> = None;
    for &a in set {
        space.check_index(a)?;
        let v = space.d(x, a);
        if best.is_none_or(|b| v < b) {
            best = Some(v);
        }
    }
    best.cloned().ok_or(Error::EmptySet("distance to an empty set"))
}

/// The coproduct `M ∐ N` together with the embeddings of both summands.
#[derive(Debug, Clone)]
pub struct Sum {
    pub space: MetricSpace,
    /// `left[i]` is the index of point `i` of `M` in the sum.
    pub left: Vec<usize>,
    /// `right[j]` is the index of point `j` of `N` in the sum.
    pub right: Vec<usize>,
}

/// Disjoint union with the base points glued; cross distances pass through the base.
pub fn sum(m: &MetricSpace, n: &MetricSpace) -> MetricSpace {
    sum_with_embeddings(m, n).space
}

/// Like [`sum`], also returning the summand embeddings.
///
/// Points of `M` keep their order and labels; non-base points of `N` follow,
/// with a `'` appended to any label that would collide.
pub fn sum_with_embeddings(m: &MetricSpace, n: &MetricSpace) -> Sum {
    let mut labels = m.labels.clone();
    let mut used: HashSet<String> = labels.iter().cloned().collect();
    let left: Vec<usize> = (0..m.len()).collect();
    let mut right = vec![m.base; n.len()];
    for j in n.non_base() {
        let mut label = n.labels[j].clone();
        while used.contains(&label) {
            label.push('\'');
        }
        used.insert(label.clone());
        right[j] = labels.len();
        labels.push(label);
    }
    let total = labels.len();
    // (comes from M, index within its summand)
    let mut origin: Vec<(bool, usize)> = (0..m.len()).map(|i| (true, i)).collect();
    origin.extend(n.non_base().map(|j| (false, j)));
    let mut dist = vec![vec![rational::zero(); total]; total];
    for a in 0..total {
        for b in 0..total {
            let (sa, ia) = origin[a];
            let (sb, ib) = origin[b];
            dist[a][b] = match (sa, sb) {
                (true, true) => m.d(ia, ib).clone(),
                (false, false) => n.d(ia, ib).clone(),
                (true, false) => m.d(ia, m.base) + n.d(n.base, ib),
                (false, true) => n.d(ia, n.base) + m.d(m.base, ib),
            };
        }
    }
    Sum { space: MetricSpace { labels, base: m.base, dist }, left, right }
}

/// Quotient `M/C`: the points of `C` collapse to a single class.
///
/// Classes appear in the order of their smallest member. Singleton classes
/// are labelled `[x]`; the collapsed class takes `class_label` when given,
/// otherwise `[c1,c2,...]`. The base point of the quotient is the class of
/// the base point of `M`. Also returns the quotient map.
pub fn quotient(m: &MetricSpace, collapse: &[usize], class_label: Option<&str>) -> Result<(MetricSpace, PointMap)> {
    if collapse.is_empty() {
        return Err(Error::EmptySet("quotient by an empty set"));
    }
    for &c in collapse {
        m.check_index(c)?;
    }
    let set: BTreeSet<usize> = collapse.iter().copied().collect();
    let members: Vec<usize> = set.iter().copied().collect();
    let first = members[0];

    // representatives: Some(x) for singleton class of x, None for [C]
    let mut reps: Vec<Option<usize>> = Vec::new();
    let mut class_of = vec![0usize; m.len()];
    for x in 0..m.len() {
        if set.contains(&x) {
            if x == first {
                reps.push(None);
            }
        } else {
            reps.push(Some(x));
        }
    }
    let collapsed_index = reps.iter().position(|r| r.is_none()).expect("collapsed class present");
    for x in 0..m.len() {
        class_of[x] = if set.contains(&x) {
            collapsed_index
        } else {
            reps.iter().position(|r| *r == Some(x)).expect("singleton class present")
        };
    }
    let to_set: Vec<Rational> = (0..m.len()).map(|x| distance_to_set(m, x, &members)).collect::<Result<_>>()?;

    let labels: Vec<String> = reps
        .iter()
        .map(|r| match r {
            Some(x) => format!("[{}]", m.label(*x)),
            None => match class_label {
                Some(l) => l.to_string(),
                None => {
                    let names: Vec<&str> = members.iter().map(|&c| m.label(c)).collect();
                    format!("[{}]", names.join(","))
                }
            },
        })
        .collect();

    let k = reps.len();
    let mut dist = vec![vec![rational::zero(); k]; k];
    for a in 0..k {
        for b in 0..k {
            if a == b {
                continue;
            }
            dist[a][b] = match (reps[a], reps[b]) {
                (Some(x), Some(y)) => {
                    let through = &to_set[x] + &to_set[y];
                    std::cmp::min(m.d(x, y).clone(), through)
                }
                (Some(x), None) | (None, Some(x)) => to_set[x].clone(),
                (None, None) => unreachable!("only one collapsed class"),
            };
        }
    }
    let base = class_of[m.base];
    let q = MetricSpace { labels, base, dist };
    let map = PointMap::new(Arc::new(m.clone()), Arc::new(q.clone()), class_of)?;
    Ok((q, map))
}

/// Restriction of the metric to `subset`; points keep their labels and
/// appear in ascending index order.
pub fn subspace(m: &MetricSpace, subset: &[usize]) -> Result<MetricSpace> {
    for &s in subset {
        m.check_index(s)?;
    }
    let set: BTreeSet<usize> = subset.iter().copied().collect();
    if !set.contains(&m.base) {
        return Err(Error::BaseNotInSubset);
    }
    let idx: Vec<usize> = set.into_iter().collect();
    let labels = idx.iter().map(|&i| m.labels[i].clone()).collect();
    let dist = idx.iter().map(|&i| idx.iter().map(|&j| m.d(i, j).clone()).collect()).collect();
    let base = idx.iter().position(|&i| i == m.base).expect("base kept");
    Ok(MetricSpace { labels, base, dist })
}
