//! Linear maps between free spaces given by image tables.
//!
//! A witness stores, for every non-base point `x` of its source, the image of
//! `δ(x)` as a finitely supported vector over the target. Matrices in
//! `δ`-coordinates are derived on demand.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::free::{delta, free_norm, same_space, FreeVector};
use crate::linalg::{self, Matrix};
use crate::lip::{pairing, LipFunction};
use crate::metric::SpaceRef;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearWitness {
    source: SpaceRef,
    target: SpaceRef,
    images: BTreeMap<usize, FreeVector>,
}

impl LinearWitness {
    /// `images` must have exactly one entry per non-base source point, each a
    /// vector over `target`.
    pub fn new(source: SpaceRef, target: SpaceRef, images: BTreeMap<usize, FreeVector>) -> Result<Self> {
        let expected: Vec<usize> = source.non_base().collect();
        let keys: Vec<usize> = images.keys().copied().collect();
        if keys != expected {
            return Err(Error::InvalidSpace(format!(
                "witness must give an image for each of the {} non-base source points",
                expected.len()
            )));
        }
        if images.values().any(|v| !same_space(v.space(), &target)) {
            return Err(Error::SpaceMismatch);
        }
        Ok(Self { source, target, images })
    }

    pub fn identity(space: &SpaceRef) -> Self {
        let images = space.non_base().map(|x| (x, delta(space, x).expect("index in range"))).collect();
        Self { source: space.clone(), target: space.clone(), images }
    }

    /// The witness sending `δ(x)` to `t·δ(x)`.
    pub fn scaling(space: &SpaceRef, t: &Rational) -> Self {
        let images = space.non_base().map(|x| (x, delta(space, x).expect("index in range").scale(t))).collect();
        Self { source: space.clone(), target: space.clone(), images }
    }

    pub fn source(&self) -> &SpaceRef {
        &self.source
    }

    pub fn target(&self) -> &SpaceRef {
        &self.target
    }

    pub fn images(&self) -> &BTreeMap<usize, FreeVector> {
        &self.images
    }

    pub fn image(&self, x: usize) -> FreeVector {
        self.images.get(&x).cloned().unwrap_or_else(|| FreeVector::zero(self.target.clone()))
    }

    /// Linear extension of the image table.
    pub fn apply(&self, m: &FreeVector) -> Result<FreeVector> {
        apply(self, m)
    }

    /// Columns are source non-base points, rows target non-base points.
    pub fn matrix(&self) -> Matrix {
        let rows: Vec<usize> = self.target.non_base().collect();
        let cols: Vec<usize> = self.source.non_base().collect();
        rows.iter().map(|&y| cols.iter().map(|&x| self.images[&x].coeff(y)).collect()).collect()
    }

    fn from_matrix(source: SpaceRef, target: SpaceRef, m: &Matrix) -> Self {
        let rows: Vec<usize> = target.non_base().collect();
        let images = source
            .non_base()
            .enumerate()
            .map(|(c, x)| {
                let terms = rows.iter().enumerate().map(|(r, &y)| (y, m[r][c].clone()));
                (x, FreeVector::new(target.clone(), terms).expect("indices in range"))
            })
            .collect();
        Self { source, target, images }
    }

    pub fn inverse(&self) -> Result<LinearWitness> {
        let inv = linalg::inverse(&self.matrix()).ok_or(Error::Singular)?;
        Ok(Self::from_matrix(self.target.clone(), self.source.clone(), &inv))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &LinearWitness) -> Result<LinearWitness> {
        if !same_space(&self.target, &other.source) {
            return Err(Error::SpaceMismatch);
        }
        let images = self.images.iter().map(|(&x, v)| other.apply(v).map(|w| (x, w))).collect::<Result<_>>()?;
        Ok(Self { source: self.source.clone(), target: other.target.clone(), images })
    }

    /// The adjoint on functions: `(T*f)(x) = ⟨T δ(x), f⟩`.
    pub fn pullback(&self, f: &LipFunction) -> Result<LipFunction> {
        if !same_space(f.space(), &self.target) {
            return Err(Error::SpaceMismatch);
        }
        let mut values = vec![rational::zero(); self.source.len()];
        for (&x, img) in &self.images {
            values[x] = pairing(img, f)?;
        }
        LipFunction::new(self.source.clone(), values)
    }

    pub fn operator_norm(&self) -> Rational {
        operator_norm(self)
    }
}

pub fn apply(t: &LinearWitness, m: &FreeVector) -> Result<FreeVector> {
    if !same_space(m.space(), &t.source) {
        return Err(Error::SpaceMismatch);
    }
    let mut out = FreeVector::zero(t.target.clone());
    for (x, c) in m.coeffs() {
        out = out.combine(&t.images[x], c)?;
    }
    Ok(out)
}

/// Outcome of checking that a witness is a linear isomorphism.
#[derive(Debug, Clone)]
pub struct WitnessReport {
    pub valid: bool,
    /// Why the witness fails, when it does.
    pub reason: Option<String>,
    pub forward: LinearWitness,
    pub inverse: Option<LinearWitness>,
    pub forward_norm: Rational,
    pub inverse_norm: Option<Rational>,
}

impl WitnessReport {
    /// `‖T‖·‖T⁻¹‖` for valid witnesses.
    pub fn condition_number(&self) -> Option<Rational> {
        self.inverse_norm.as_ref().map(|inv| &self.forward_norm * inv)
    }
}

/// Checks invertibility and computes the inverse table and both operator norms.
pub fn validate_witness(t: &LinearWitness) -> WitnessReport {
    validate_witness_with(t, Exec::default())
}

pub fn validate_witness_with(t: &LinearWitness, exec: Exec) -> WitnessReport {
    let forward_norm = operator_norm_with(t, exec).0;
    let src = t.source.len() - 1;
    let tgt = t.target.len() - 1;
    let (inverse, reason) = if src != tgt {
        (None, Some(format!("dimension mismatch: {src} source vs {tgt} target coordinates")))
    } else {
        match t.inverse() {
            Ok(inv) => (Some(inv), None),
            Err(_) => {
                let rank = linalg::rank(&t.matrix());
                (None, Some(format!("rank deficient: rank {rank} < {src}")))
            }
        }
    };
    let inverse_norm = inverse.as_ref().map(|inv| operator_norm_with(inv, exec).0);
    WitnessReport { valid: inverse.is_some(), reason, forward: t.clone(), inverse, forward_norm, inverse_norm }
}

/// `max_{x≠y} ‖T(δx − δy)‖ / d(x, y)`, the norm of `T` between free spaces
/// (the unit ball of a finite free space is the convex hull of molecules).
pub fn operator_norm(t: &LinearWitness) -> Rational {
    operator_norm_with(t, Exec::default()).0
}

/// Operator norm together with a maximizing pair, when the source has one.
pub fn operator_norm_with(t: &LinearWitness, exec: Exec) -> (Rational, Option<(usize, usize)>) {
    let n = t.source.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|x| ((x + 1)..n).map(move |y| (x, y))).collect();
    let values = exec.map(&pairs, |&(x, y)| {
        let diff = t.image(x).sub(&t.image(y)).expect("images share the target");
        free_norm(&diff) / t.source.d(x, y)
    });
    let mut best: (Rational, Option<(usize, usize)>) = (rational::zero(), None);
    for (v, p) in values.into_iter().zip(pairs) {
        if best.1.is_none() || v > best.0 {
            best = (v, Some(p));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::metric::MetricSpace;
    use crate::rational::int;

    fn eq3() -> SpaceRef {
        Arc::new(MetricSpace::equilateral(3))
    }

    #[test]
    fn identity_witness() {
        let s = Arc::new(MetricSpace::path(3));
        let id = LinearWitness::identity(&s);
        let m = FreeVector::new(s.clone(), [(1, int(2)), (3, int(-1))]).unwrap();
        assert_eq!(id.apply(&m).unwrap(), m);
        assert!(id.apply(&FreeVector::zero(s.clone())).unwrap().is_zero());
        let report = validate_witness(&id);
        assert!(report.valid);
        assert_eq!(report.forward_norm, int(1));
        assert_eq!(report.inverse_norm, Some(int(1)));
        assert_eq!(report.condition_number(), Some(int(1)));
    }

    #[test]
    fn scaling_witness_norm() {
        let s = Arc::new(MetricSpace::path(2));
        assert_eq!(operator_norm(&LinearWitness::scaling(&s, &int(2))), int(2));
    }

    #[test]
    fn collision_is_rank_deficient() {
        let s = eq3();
        let y1 = delta(&s, 1).unwrap();
        let images = BTreeMap::from([(1, y1.clone()), (2, y1)]);
        let t = LinearWitness::new(s.clone(), s, images).unwrap();
        let report = validate_witness(&t);
        assert!(!report.valid);
        assert!(report.reason.as_deref().unwrap().contains("rank"));
        assert!(report.condition_number().is_none());
    }

    #[test]
    fn telescoping_map_on_equilateral() {
        // δx1 ↦ δ1, δx2 ↦ δ2 − δ1 over the path {0,1,2}
        let src = eq3();
        let path = Arc::new(MetricSpace::path(2));
        let d1 = delta(&path, 1).unwrap();
        let d2 = delta(&path, 2).unwrap();
        let images = BTreeMap::from([(1, d1.clone()), (2, d2.sub(&d1).unwrap())]);
        let t = LinearWitness::new(src, path, images).unwrap();
        assert_eq!(t.matrix(), vec![vec![int(1), int(-1)], vec![int(0), int(1)]]);
        let report = validate_witness(&t);
        assert!(report.valid);
        let (norm, pair) = operator_norm_with(&t, Exec::Sequential);
        assert_eq!(norm, int(2));
        assert_eq!(pair, Some((1, 2)));
    }

    #[test]
    fn rejects_incomplete_tables() {
        let s = eq3();
        let images = BTreeMap::from([(1, delta(&s, 1).unwrap())]);
        assert!(LinearWitness::new(s.clone(), s, images).is_err());
    }

    #[test]
    fn pullback_is_adjoint() {
        let s = Arc::new(MetricSpace::path(2));
        let t = LinearWitness::scaling(&s, &int(3));
        let f = LipFunction::new(s.clone(), vec![int(0), int(1), int(-1)]).unwrap();
        let g = t.pullback(&f).unwrap();
        assert_eq!(g.values(), &[int(0), int(3), int(-3)]);
    }

    #[test]
    fn sequential_matches_parallel() {
        let s = eq3();
        let t = LinearWitness::scaling(&s, &int(5));
        assert_eq!(operator_norm_with(&t, Exec::Sequential), operator_norm_with(&t, Exec::Parallel));
    }
}
