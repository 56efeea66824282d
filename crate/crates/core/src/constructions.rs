//! Equivalence witnesses built from metric and linear constructions.
//!
//! * [`quotient_witness`]: a retraction `φ` splits `M` into `φ(M) ∐ M/φ(M)`.
//! * [`projection_split`]: a projection `π` with `π(B) ⊆ B ∪ {0}` replaces a
//!   basis `B` by `π(B) ∪ σ(B)` where `σ = id − π`.
//! * [`normalize_basis`]: every `δ(x)` is rescaled to unit norm.
//! * [`discrete_witness`]: the telescoping map from a finite space onto a path.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::free::{delta, free_norm, same_space, FreeVector};
use crate::linalg::{self, Matrix};
use crate::lip::LipFunction;
use crate::metric::{quotient, subspace, sum_with_embeddings, MetricSpace, PointMap, SpaceRef};
use crate::rational::{self, Rational};
use crate::witness::{operator_norm_with, LinearWitness};

/// A basis of a finite free space `F(M₀)` viewed as a metric space with the
/// distances inherited from the free norm: the base point plays the role of
/// the zero vector and vector `i` is point `i + 1`.
#[derive(Debug, Clone)]
pub struct BasisSpace {
    ambient: SpaceRef,
    vectors: Vec<FreeVector>,
    space: SpaceRef,
    /// Columns are basis vectors in `δ`-coordinates of the ambient space.
    coords: Matrix,
}

impl BasisSpace {
    /// Rejects bases that are dependent, fail to span, contain zero or
    /// repeat a vector.
    pub fn new(ambient: &SpaceRef, vectors: Vec<FreeVector>, labels: Vec<String>) -> Result<Self> {
        let dim = ambient.len() - 1;
        if labels.len() != vectors.len() {
            return Err(Error::InvalidBasis("one label per vector required".into()));
        }
        if vectors.iter().any(|v| !same_space(v.space(), ambient)) {
            return Err(Error::SpaceMismatch);
        }
        if vectors.len() != dim {
            return Err(Error::InvalidBasis(format!(
                "{} vectors cannot form a basis of a {dim}-dimensional space",
                vectors.len()
            )));
        }
        let rows: Vec<usize> = ambient.non_base().collect();
        let coords: Matrix = rows.iter().map(|&y| vectors.iter().map(|v| v.coeff(y)).collect()).collect();
        if linalg::rank(&coords) < dim {
            return Err(Error::InvalidBasis("vectors are linearly dependent".into()));
        }

        let mut all_labels = Vec::with_capacity(dim + 1);
        all_labels.push(ambient.label(ambient.base()).to_string());
        all_labels.extend(labels);
        let zero = FreeVector::zero(ambient.clone());
        let points: Vec<&FreeVector> = std::iter::once(&zero).chain(vectors.iter()).collect();
        let k = points.len();
        let mut dist = vec![vec![rational::zero(); k]; k];
        for a in 0..k {
            for b in (a + 1)..k {
                let v = free_norm(&points[a].sub(points[b])?);
                dist[a][b] = v.clone();
                dist[b][a] = v;
            }
        }
        let space = MetricSpace::new(all_labels, 0, dist).map_err(|e| Error::InvalidBasis(e.to_string()))?;
        Ok(Self { ambient: ambient.clone(), vectors, space: Arc::new(space), coords })
    }

    /// The points of `M₀` themselves: `δ(x)` for every non-base `x`.
    pub fn canonical(ambient: &SpaceRef) -> Self {
        let vectors = ambient.non_base().map(|x| delta(ambient, x).expect("in range")).collect();
        let labels = ambient.non_base().map(|x| ambient.label(x).to_string()).collect();
        Self::new(ambient, vectors, labels).expect("point evaluations form a basis")
    }

    pub fn ambient(&self) -> &SpaceRef {
        &self.ambient
    }

    pub fn vectors(&self) -> &[FreeVector] {
        &self.vectors
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn point_of(&self, i: usize) -> usize {
        i + 1
    }

    /// Coefficients of `m` in this basis.
    pub fn coordinates(&self, m: &FreeVector) -> Result<Vec<Rational>> {
        if !same_space(m.space(), &self.ambient) {
            return Err(Error::SpaceMismatch);
        }
        linalg::solve(&self.coords, &m.to_dense()).ok_or(Error::Singular)
    }

    /// The linear extension of the inclusion of the basis into its own free
    /// space: `F(M₀) → F(B)`, sending each basis vector `b` to `δ(b)`.
    pub fn extension_map(&self) -> LinearWitness {
        let images = self
            .ambient
            .non_base()
            .map(|x| {
                let c = self.coordinates(&delta(&self.ambient, x).expect("in range")).expect("basis spans");
                let terms = c.into_iter().enumerate().map(|(i, ci)| (self.point_of(i), ci));
                (x, FreeVector::new(self.space.clone(), terms).expect("in range"))
            })
            .collect();
        LinearWitness::new(self.ambient.clone(), self.space.clone(), images).expect("complete table")
    }
}

/// The smallest `K` with `‖f̂‖ ≤ K·L(f)` for every scalar `f` on the basis:
/// the operator norm of [`BasisSpace::extension_map`].
pub fn free_basis_constant(ambient: &SpaceRef, vectors: Vec<FreeVector>, labels: Vec<String>) -> Result<Rational> {
    let basis = BasisSpace::new(ambient, vectors, labels)?;
    Ok(operator_norm_with(&basis.extension_map(), Exec::default()).0)
}

/// Witness `F(M) → F(φ(M) ∐ M/φ(M))` for a retraction `φ`.
#[derive(Debug, Clone)]
pub struct QuotientWitness {
    pub witness: LinearWitness,
    /// `φ(M)` as a subspace of `M`.
    pub retract: SpaceRef,
    /// `M/φ(M)`.
    pub quotient: SpaceRef,
    pub quotient_map: PointMap,
    /// Index in the target of each point of `φ(M)` (ascending source order).
    pub retract_embedding: Vec<usize>,
    /// Index in the target of each class of `M/φ(M)`.
    pub quotient_embedding: Vec<usize>,
    pub retraction_lipschitz: Rational,
}

/// `δ(x) ↦ δ(φ(x)) + δ([x])`, where `[x]` is the class of `x` in `M/φ(M)`
/// (the class of `φ(M)` itself is the base point).
pub fn quotient_witness(phi: &PointMap) -> Result<QuotientWitness> {
    let m = phi.source();
    if !same_space(m, phi.target()) {
        return Err(Error::SpaceMismatch);
    }
    if let Some(x) = (0..m.len()).find(|&x| phi.image(phi.image(x)) != phi.image(x)) {
        return Err(Error::NotRetraction { point: x });
    }
    if phi.image(m.base()) != m.base() {
        return Err(Error::BaseNotInSubset);
    }
    let mut fixed: Vec<usize> = (0..m.len()).filter(|&x| phi.image(x) == x).collect();
    fixed.sort_unstable();
    let retract = subspace(m, &fixed)?;
    let (quot, q) = quotient(m, &fixed, None)?;
    let sum = sum_with_embeddings(&retract, &quot);
    let target: SpaceRef = Arc::new(sum.space);

    let images = m
        .non_base()
        .map(|x| {
            let p = fixed.binary_search(&phi.image(x)).expect("image is fixed");
            let terms = [(sum.left[p], rational::one()), (sum.right[q.image(x)], rational::one())];
            (x, FreeVector::new(target.clone(), terms).expect("in range"))
        })
        .collect::<BTreeMap<_, _>>();
    let witness = LinearWitness::new(m.clone(), target, images)?;
    Ok(QuotientWitness {
        witness,
        retract: Arc::new(retract),
        quotient: Arc::new(quot),
        quotient_map: q,
        retract_embedding: sum.left,
        quotient_embedding: sum.right,
        retraction_lipschitz: phi.lipschitz_number().clone(),
    })
}

/// Result of replacing a basis `B` by `π(B) ∪ σ(B)`.
#[derive(Debug, Clone)]
pub struct ProjectionSplit {
    pub source: BasisSpace,
    pub target: BasisSpace,
    /// `δ(b) ↦ δ(π b) + δ(σ b)` (zero terms dropped).
    pub witness: LinearWitness,
    /// `π` and `σ` as operators on the ambient free space.
    pub projection: LinearWitness,
    pub complement: LinearWitness,
    pub projection_norm: Rational,
    pub complement_norm: Rational,
}

/// Splits `basis` along the projection given by `projection[i]`, the index of
/// `π(bᵢ)` in the basis or `None` for zero.
///
/// New vectors are the distinct `π(bᵢ)` (original labels) followed by the
/// nonzero `σ(bᵢ) = bᵢ − π(bᵢ)` (labelled `sigma(label)`).
pub fn projection_split(basis: &BasisSpace, projection: &[Option<usize>]) -> Result<ProjectionSplit> {
    let k = basis.vectors().len();
    if projection.len() != k {
        return Err(Error::InvalidProjection(format!("expected {k} images, got {}", projection.len())));
    }
    let labels = &basis.space().labels()[1..];
    for (i, p) in projection.iter().enumerate() {
        if let Some(j) = *p {
            if j >= k {
                return Err(Error::InvalidProjection(format!("image of `{}` lies outside the basis", labels[i])));
            }
            if projection[j] != Some(j) {
                return Err(Error::InvalidProjection(format!(
                    "not idempotent: `{}` maps to `{}`, which is not fixed",
                    labels[i], labels[j]
                )));
            }
        }
    }
    let ambient = basis.ambient().clone();
    let vectors = basis.vectors();
    let pi_of = |i: usize| match projection[i] {
        Some(j) => vectors[j].clone(),
        None => FreeVector::zero(ambient.clone()),
    };

    let mut new_vectors = Vec::new();
    let mut new_labels = Vec::new();
    // position of π(bᵢ) and σ(bᵢ) in the new basis
    let mut pi_pos: Vec<Option<usize>> = vec![None; k];
    let mut sigma_pos: Vec<Option<usize>> = vec![None; k];
    for j in 0..k {
        if projection[j] == Some(j) {
            pi_pos[j] = Some(new_vectors.len());
            new_vectors.push(vectors[j].clone());
            new_labels.push(labels[j].clone());
        }
    }
    for i in 0..k {
        if let Some(j) = projection[i] {
            pi_pos[i] = pi_pos[j];
        }
        if projection[i] != Some(i) {
            sigma_pos[i] = Some(new_vectors.len());
            new_vectors.push(vectors[i].sub(&pi_of(i))?);
            new_labels.push(format!("sigma({})", labels[i]));
        }
    }
    let target = BasisSpace::new(&ambient, new_vectors, new_labels)?;

    let tspace = target.space().clone();
    let images = (0..k)
        .map(|i| {
            let terms = pi_pos[i].iter().chain(sigma_pos[i].iter()).map(|&p| (target.point_of(p), rational::one()));
            (basis.point_of(i), FreeVector::new(tspace.clone(), terms).expect("in range"))
        })
        .collect::<BTreeMap<_, _>>();
    let witness = LinearWitness::new(basis.space().clone(), tspace, images)?;

    // π on δ-coordinates: δx = Σ cᵢ bᵢ ↦ Σ cᵢ π(bᵢ)
    let pi_images = ambient
        .non_base()
        .map(|x| {
            let c = basis.coordinates(&delta(&ambient, x)?)?;
            let mut out = FreeVector::zero(ambient.clone());
            for (i, ci) in c.iter().enumerate() {
                if !ci.is_zero() {
                    out = out.combine(&pi_of(i), ci)?;
                }
            }
            Ok((x, out))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    let sigma_images =
        pi_images.iter().map(|(&x, p)| Ok((x, delta(&ambient, x)?.sub(p)?))).collect::<Result<BTreeMap<_, _>>>()?;
    let projection_map = LinearWitness::new(ambient.clone(), ambient.clone(), pi_images)?;
    let complement = LinearWitness::new(ambient.clone(), ambient.clone(), sigma_images)?;
    let projection_norm = operator_norm_with(&projection_map, Exec::default()).0;
    let complement_norm = operator_norm_with(&complement, Exec::default()).0;

    Ok(ProjectionSplit {
        source: basis.clone(),
        target,
        witness,
        projection: projection_map,
        complement,
        projection_norm,
        complement_norm,
    })
}

/// Outcome of the extension-bound check for one scalar function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionCheck {
    pub function_lipschitz: Rational,
    pub extension_lipschitz: Rational,
    pub bound: Rational,
    pub holds: bool,
}

impl ProjectionSplit {
    /// For `f` on the new basis, `h(b) = f(π b) + f(σ b)` on the old basis
    /// must satisfy `L(h) ≤ L(f)·(‖π‖ + ‖σ‖)`.
    pub fn check_extension_bound(&self, f: &LipFunction) -> Result<ExtensionCheck> {
        let h = self.witness.pullback(f)?;
        let function_lipschitz = f.lipschitz_number();
        let extension_lipschitz = h.lipschitz_number();
        let bound = &function_lipschitz * (&self.projection_norm + &self.complement_norm);
        let holds = extension_lipschitz <= bound;
        Ok(ExtensionCheck { function_lipschitz, extension_lipschitz, bound, holds })
    }

    /// `π ∘ π = π` on the ambient space.
    pub fn is_idempotent(&self) -> bool {
        self.projection.then(&self.projection).is_ok_and(|pp| pp == self.projection)
    }
}

/// Basis `μ(δx) = δx / d(x, e)` together with the witness
/// `F(M₀) → F(μ(M₀))`, `δx ↦ d(x, e)·δ(μx)`. Points keep their labels.
#[derive(Debug, Clone)]
pub struct Normalization {
    pub basis: BasisSpace,
    pub witness: LinearWitness,
}

pub fn normalize_basis(ambient: &SpaceRef) -> Result<Normalization> {
    let base = ambient.base();
    let points: Vec<usize> = ambient.non_base().collect();
    let vectors = points
        .iter()
        .map(|&x| Ok(delta(ambient, x)?.scale(&(rational::one() / ambient.d(x, base)))))
        .collect::<Result<Vec<_>>>()?;
    let labels = points.iter().map(|&x| ambient.label(x).to_string()).collect();
    let basis = BasisSpace::new(ambient, vectors, labels)?;
    let images = points
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let v = FreeVector::new(basis.space().clone(), [(basis.point_of(i), ambient.d(x, base).clone())]);
            v.map(|v| (x, v))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    let witness = LinearWitness::new(ambient.clone(), basis.space().clone(), images)?;
    Ok(Normalization { basis, witness })
}

/// Telescoping witness from a finite space onto the unit path.
#[derive(Debug, Clone)]
pub struct DiscreteWitness {
    pub witness: LinearWitness,
    pub path: SpaceRef,
    /// Smallest positive distance `θ`.
    pub separation: Rational,
    /// Diameter `D`.
    pub diameter: Rational,
}

impl DiscreteWitness {
    /// `2·D/θ`.
    pub fn conditioning_bound(&self) -> Rational {
        rational::int(2) * &self.diameter / &self.separation
    }
}

/// Enumerates the non-base points `x₁..xₙ` in index order and maps
/// `δ(x_k) ↦ δ(k) − δ(k−1)` into the path `{0, 1, …, n}`.
pub fn discrete_witness(m: &SpaceRef) -> Result<DiscreteWitness> {
    let separation = m.separation().ok_or(Error::EmptySet("a single-point space has no separation"))?;
    let n = m.len() - 1;
    let path: SpaceRef = Arc::new(MetricSpace::path(n));
    let images = m
        .non_base()
        .enumerate()
        .map(|(i, x)| {
            let k = i + 1;
            let v = FreeVector::new(path.clone(), [(k, rational::one()), (k - 1, -rational::one())]);
            v.map(|v| (x, v))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    let witness = LinearWitness::new(m.clone(), path.clone(), images)?;
    Ok(DiscreteWitness { witness, path, separation, diameter: m.diameter() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free::free_norm_dual;
    use crate::rational::{int, ratio};
    use crate::witness::{operator_norm, validate_witness};

    fn line(n: usize) -> SpaceRef {
        Arc::new(MetricSpace::path(n))
    }

    fn retraction(m: &SpaceRef, image: Vec<usize>) -> PointMap {
        PointMap::new(m.clone(), m.clone(), image).unwrap()
    }

    #[test]
    fn quotient_witness_clamp() {
        let m = line(2);
        let qw = quotient_witness(&retraction(&m, vec![0, 1, 1])).unwrap();
        let t = qw.witness.target();
        assert_eq!(t.labels(), &["0", "1", "[2]"]);
        assert_eq!(qw.witness.image(1), FreeVector::new(t.clone(), [(1, int(1))]).unwrap());
        assert_eq!(qw.witness.image(2), FreeVector::new(t.clone(), [(1, int(1)), (2, int(1))]).unwrap());
        assert!(validate_witness(&qw.witness).valid);
    }

    #[test]
    fn quotient_witness_inverse_matches_function_formula() {
        // (T⁻¹ g)(x) = g(x) on φ(M) and g(y) − g(φ(y)) on the class [y]
        let m = line(3);
        let phi = retraction(&m, vec![0, 1, 1, 1]);
        let qw = quotient_witness(&phi).unwrap();
        let inv = qw.witness.inverse().unwrap();
        let g = LipFunction::new(m.clone(), vec![int(0), int(2), int(-1), int(5)]).unwrap();
        let pulled = inv.pullback(&g).unwrap();
        let target = qw.witness.target();
        for (p, &x) in [0usize, 1].iter().enumerate() {
            assert_eq!(pulled.value(qw.retract_embedding[p]), g.value(x));
        }
        for y in [2usize, 3] {
            let class = qw.quotient_embedding[qw.quotient_map.image(y)];
            assert_eq!(pulled.value(class), &(g.value(y) - g.value(phi.image(y))));
            assert_eq!(target.label(class), format!("[{y}]"));
        }
    }

    #[test]
    fn quotient_witness_degenerate_retractions() {
        let m = line(2);
        let qw = quotient_witness(&retraction(&m, vec![0, 1, 2])).unwrap();
        assert_eq!(qw.quotient.len(), 1);
        assert_eq!(qw.witness.target().distances(), m.distances());
        assert_eq!(operator_norm(&qw.witness), int(1));

        let qw = quotient_witness(&retraction(&m, vec![0, 0, 0])).unwrap();
        assert_eq!(qw.retract.len(), 1);
        assert_eq!(qw.witness.target().labels(), &["0", "[1]", "[2]"]);
        assert!(validate_witness(&qw.witness).valid);
    }

    #[test]
    fn quotient_witness_rejections() {
        let m = line(2);
        assert!(matches!(quotient_witness(&retraction(&m, vec![0, 2, 1])), Err(Error::NotRetraction { .. })));
        assert!(matches!(quotient_witness(&retraction(&m, vec![1, 1, 1])), Err(Error::BaseNotInSubset)));
    }

    fn labels(b: &BasisSpace) -> Vec<String> {
        b.space().labels()[1..].to_vec()
    }

    #[test]
    fn projection_split_identity_and_zero() {
        let basis = BasisSpace::canonical(&line(2));
        let split = projection_split(&basis, &[Some(0), Some(1)]).unwrap();
        assert_eq!(split.target.vectors(), basis.vectors());
        assert_eq!(split.complement_norm, int(0));
        assert!(validate_witness(&split.witness).valid);

        let split = projection_split(&basis, &[None, None]).unwrap();
        assert_eq!(split.target.vectors(), basis.vectors());
        assert_eq!(split.projection_norm, int(0));
        assert_eq!(split.target.space().labels(), &["0", "sigma(1)", "sigma(2)"]);
    }

    #[test]
    fn projection_split_on_line() {
        let ambient = line(2);
        let basis = BasisSpace::canonical(&ambient);
        let split = projection_split(&basis, &[Some(0), Some(0)]).unwrap();
        let d1 = delta(&ambient, 1).unwrap();
        let d2 = delta(&ambient, 2).unwrap();
        assert_eq!(split.target.vectors(), &[d1.clone(), d2.sub(&d1).unwrap()]);
        let t = split.target.space();
        assert_eq!(split.witness.image(2), FreeVector::new(t.clone(), [(1, int(1)), (2, int(1))]).unwrap());
        assert!(split.is_idempotent());
        assert!(validate_witness(&split.witness).valid);
        let f = LipFunction::new(t.clone(), vec![int(0), int(1), int(-1)]).unwrap();
        assert!(split.check_extension_bound(&f).unwrap().holds);
    }

    #[test]
    fn projection_split_rejections() {
        let basis = BasisSpace::canonical(&line(3));
        assert!(matches!(projection_split(&basis, &[Some(1), Some(2), Some(2)]), Err(Error::InvalidProjection(_))));
        assert!(matches!(projection_split(&basis, &[Some(5), Some(1), Some(2)]), Err(Error::InvalidProjection(_))));
    }

    #[test]
    fn normalize_examples() {
        let eq = Arc::new(MetricSpace::equilateral(3));
        let n = normalize_basis(&eq).unwrap();
        assert_eq!(n.witness.matrix(), linalg::identity(2));

        let two = Arc::new(MetricSpace::on_line(vec!["e".into(), "x".into()], 0, &[int(0), int(2)]).unwrap());
        let n = normalize_basis(&two).unwrap();
        assert_eq!(n.basis.vectors()[0].coeff(1), ratio(1, 2));
        assert_eq!(n.witness.image(1).coeff(1), int(2));

        let ln = line(2);
        let n = normalize_basis(&ln).unwrap();
        for v in n.basis.vectors() {
            assert_eq!(free_norm_dual(v).0, int(1));
        }
        let report = validate_witness(&n.witness);
        assert!(report.valid);
        assert!(report.condition_number().is_some());
    }

    #[test]
    fn basis_constant_examples() {
        let ambient = line(2);
        let canonical = BasisSpace::canonical(&ambient);
        let l = labels(&canonical);
        assert_eq!(free_basis_constant(&ambient, canonical.vectors().to_vec(), l.clone()).unwrap(), int(1));
        let halved: Vec<FreeVector> = canonical.vectors().iter().map(|v| v.scale(&ratio(1, 2))).collect();
        assert_eq!(free_basis_constant(&ambient, halved, l.clone()).unwrap(), int(1));

        let dependent = vec![canonical.vectors()[0].clone(), canonical.vectors()[0].scale(&int(2))];
        assert!(matches!(free_basis_constant(&ambient, dependent, l), Err(Error::InvalidBasis(_))));
    }

    #[test]
    fn discrete_examples() {
        let eq = Arc::new(MetricSpace::equilateral(3));
        let dw = discrete_witness(&eq).unwrap();
        let report = validate_witness(&dw.witness);
        assert!(report.valid);
        assert_eq!(report.forward_norm, int(2));
        let inv = report.inverse.unwrap();
        assert_eq!(inv.image(2), FreeVector::new(eq.clone(), [(1, int(1)), (2, int(1))]).unwrap());
        assert_eq!(dw.separation, int(1));
        assert_eq!(dw.diameter, int(1));

        let single = Arc::new(MetricSpace::path(1));
        let report = validate_witness(&discrete_witness(&single).unwrap().witness);
        assert_eq!(report.condition_number(), Some(int(1)));
    }
}
