//! Finitely supported elements of the free space and their exact norm.
//!
//! The norm is available through two unrelated algorithms:
//! [`free_norm_dual`] maximizes the pairing against base-point-vanishing
//! 1-Lipschitz functions with the exact simplex method, and
//! [`free_norm_flow`] finds the cheapest transshipment realizing the vector,
//! with the base point absorbing any excess mass.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lip::LipFunction;
use crate::metric::{MetricSpace, SpaceRef};
use crate::rational::{self, Rational};
use crate::simplex::LinearProgram;
use crate::transport;

pub(crate) fn same_space(a: &SpaceRef, b: &SpaceRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A finite linear combination of point evaluations `δ(x)`.
///
/// Coefficients are kept canonical: indices are merged, zero coefficients
/// are dropped and the base point never carries a coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeVector {
    space: SpaceRef,
    coeffs: BTreeMap<usize, Rational>,
}

impl FreeVector {
    pub fn zero(space: SpaceRef) -> Self {
        Self { space, coeffs: BTreeMap::new() }
    }

    pub fn new<I>(space: SpaceRef, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, Rational)>,
    {
        let mut coeffs: BTreeMap<usize, Rational> = BTreeMap::new();
        for (x, c) in terms {
            space.check_index(x)?;
            if x == space.base() {
                continue;
            }
            *coeffs.entry(x).or_insert_with(rational::zero) += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(Self { space, coeffs })
    }

    /// Terms given by point label.
    pub fn from_labels<'a, I>(space: SpaceRef, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, Rational)>,
    {
        let indexed: Vec<(usize, Rational)> =
            terms.into_iter().map(|(l, c)| space.index_of(l).map(|i| (i, c))).collect::<Result<_>>()?;
        Self::new(space, indexed)
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, x: usize) -> Rational {
        self.coeffs.get(&x).cloned().unwrap_or_else(rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Dense coefficients over the non-base points, in index order.
    pub fn to_dense(&self) -> Vec<Rational> {
        self.space.non_base().map(|x| self.coeff(x)).collect()
    }

    pub fn add(&self, other: &FreeVector) -> Result<FreeVector> {
        self.combine(other, &rational::one())
    }

    pub fn sub(&self, other: &FreeVector) -> Result<FreeVector> {
        self.combine(other, &-rational::one())
    }

    /// `self + t·other`.
    pub fn combine(&self, other: &FreeVector, t: &Rational) -> Result<FreeVector> {
        if !same_space(&self.space, &other.space) {
            return Err(Error::SpaceMismatch);
        }
        let mut coeffs = self.coeffs.clone();
        for (&x, c) in &other.coeffs {
            *coeffs.entry(x).or_insert_with(rational::zero) += t * c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(FreeVector { space: self.space.clone(), coeffs })
    }

    pub fn scale(&self, t: &Rational) -> FreeVector {
        if t.is_zero() {
            return FreeVector::zero(self.space.clone());
        }
        let coeffs = self.coeffs.iter().map(|(&x, c)| (x, c * t)).collect();
        FreeVector { space: self.space.clone(), coeffs }
    }

    pub fn neg(&self) -> FreeVector {
        self.scale(&-rational::one())
    }

    pub fn support(&self) -> BTreeSet<usize> {
        support(self)
    }
}

impl fmt::Display for FreeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> =
            self.coeffs.iter().map(|(&x, c)| format!("{}·δ({})", rational::format(c), self.space.label(x))).collect();
        f.write_str(&terms.join(" + "))
    }
}

/// `δ(x)`; the zero vector when `x` is the base point.
pub fn delta(space: &SpaceRef, x: usize) -> Result<FreeVector> {
    FreeVector::new(space.clone(), [(x, rational::one())])
}

/// Indices carrying a nonzero coefficient.
pub fn support(m: &FreeVector) -> BTreeSet<usize> {
    m.coeffs.keys().copied().collect()
}

/// The normalized difference `(δ(x) − δ(y)) / d(x, y)`.
pub fn molecule(space: &SpaceRef, x: usize, y: usize) -> Result<FreeVector> {
    space.check_index(x)?;
    space.check_index(y)?;
    if x == y {
        return Err(Error::DegenerateMolecule(x));
    }
    let w = rational::one() / space.d(x, y);
    FreeVector::new(space.clone(), [(x, w.clone()), (y, -w)])
}

/// Norm of `δa − δb + δc − δd` by the closed form
/// `min(d(a,b) + d(c,d), d(a,d) + d(c,b))`.
pub fn four_point_norm(space: &MetricSpace, a: usize, b: usize, c: usize, d: usize) -> Result<Rational> {
    for i in [a, b, c, d] {
        space.check_index(i)?;
    }
    let straight = space.d(a, b) + space.d(c, d);
    let crossed = space.d(a, d) + space.d(c, b);
    Ok(std::cmp::min(straight, crossed))
}

/// Dual computation: `max { ⟨m, f⟩ : L(f) ≤ 1, f(e) = 0 }` with an optimal `f`.
pub fn free_norm_dual(m: &FreeVector) -> (Rational, LipFunction) {
    let space = m.space();
    let base = space.base();
    let points: Vec<usize> = space.non_base().collect();
    let k = points.len();

    // Substituting f(x) = u_x − d(x,e) with u_x ≥ 0 (from f(x) ≥ −d(x,e)) makes
    // the origin feasible: every right-hand side below is nonnegative.
    let objective: Vec<Rational> = points.iter().map(|&x| m.coeff(x)).collect();
    let offset = points.iter().fold(rational::zero(), |acc, &x| acc + m.coeff(x) * space.d(x, base));
    let mut lp = LinearProgram::maximize(objective);
    for (a, &x) in points.iter().enumerate() {
        let mut row = vec![rational::zero(); k];
        row[a] = rational::one();
        lp.less_eq(row, space.d(x, base) * rational::int(2));
        for (b, &y) in points.iter().enumerate() {
            if a == b {
                continue;
            }
            let mut row = vec![rational::zero(); k];
            row[a] = rational::one();
            row[b] = -rational::one();
            lp.less_eq(row, space.d(x, y) + space.d(x, base) - space.d(y, base));
        }
    }
    let solution = lp.solve().expect("difference-constraint program is feasible and bounded");

    let mut values = vec![rational::zero(); space.len()];
    for (a, &x) in points.iter().enumerate() {
        values[x] = &solution.x[a] - space.d(x, base);
    }
    let f = LipFunction::new(space.clone(), values).expect("base value fixed at zero");
    (solution.value - offset, f)
}

/// One unit of transport along an edge of the complete graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowEdge {
    pub from: usize,
    pub to: usize,
    pub amount: Rational,
}

/// Primal certificate: a nonnegative flow whose divergence realizes the vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowSolution {
    pub edges: Vec<FlowEdge>,
    pub cost: Rational,
}

impl FlowSolution {
    /// Outflow minus inflow at every node.
    pub fn divergence(&self, n: usize) -> Vec<Rational> {
        let mut div = vec![rational::zero(); n];
        for e in &self.edges {
            div[e.from] += &e.amount;
            div[e.to] -= &e.amount;
        }
        div
    }

    /// Flow is nonnegative, the divergence matches `m` off the base point,
    /// and the reported cost equals `Σ amount·d`.
    pub fn certifies(&self, m: &FreeVector) -> bool {
        let space = m.space();
        if self.edges.iter().any(|e| e.amount.is_negative()) {
            return false;
        }
        let div = self.divergence(space.len());
        let divergence_ok = space.non_base().all(|x| div[x] == m.coeff(x));
        let cost = self.edges.iter().fold(rational::zero(), |acc, e| acc + &e.amount * space.d(e.from, e.to));
        divergence_ok && cost == self.cost
    }
}

/// Primal computation: cheapest transshipment on the complete graph
/// realizing `m`, the base node absorbing the imbalance.
pub fn free_norm_flow(m: &FreeVector) -> (Rational, FlowSolution) {
    let space = m.space();
    let mut supply: Vec<Rational> = (0..space.len()).map(|x| m.coeff(x)).collect();
    let total = supply.iter().fold(rational::zero(), |acc, s| acc + s);
    supply[space.base()] = -total;
    let (cost, plan) = transport::min_cost_transport(&supply, |i, j| space.d(i, j).clone());
    let edges = plan.into_iter().map(|s| FlowEdge { from: s.from, to: s.to, amount: s.amount }).collect();
    (cost.clone(), FlowSolution { edges, cost })
}

/// The free norm (computed by the transshipment route).
pub fn free_norm(m: &FreeVector) -> Rational {
    free_norm_flow(m).0
}

/// Distance between integer combinations of points: `‖u − v‖`.
pub fn graev_distance(u: &FreeVector, v: &FreeVector) -> Result<Rational> {
    for c in u.coeffs().values().chain(v.coeffs().values()) {
        if !rational::is_integer(c) {
            return Err(Error::NonInteger(rational::format(c)));
        }
    }
    let diff = u.sub(v)?;
    Ok(free_norm_dual(&diff).0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn line(n: usize) -> SpaceRef {
        Arc::new(MetricSpace::path(n))
    }

    fn fv(space: &SpaceRef, terms: &[(usize, i64)]) -> FreeVector {
        FreeVector::new(space.clone(), terms.iter().map(|&(x, c)| (x, int(c)))).unwrap()
    }

    #[test]
    fn delta_examples() {
        let s = line(2);
        assert!(delta(&s, 0).unwrap().is_zero());
        let two = Arc::new(
            MetricSpace::new(vec!["e".into(), "a".into()], 0, vec![vec![int(0), int(2)], vec![int(2), int(0)]])
                .unwrap(),
        );
        let a = delta(&two, 1).unwrap();
        assert_eq!(free_norm(&a), int(2));
        assert!(a.sub(&a).unwrap().is_zero());
    }

    #[test]
    fn canonical_form() {
        let s = line(2);
        let m = FreeVector::new(s.clone(), [(1, int(3)), (2, int(1)), (2, int(-1)), (0, int(7))]).unwrap();
        assert_eq!(m.coeffs().len(), 1);
        assert_eq!(support(&m), BTreeSet::from([1]));
        assert!(support(&FreeVector::zero(s.clone())).is_empty());
        assert_eq!(support(&fv(&s, &[(1, 1), (2, -1)])), BTreeSet::from([1, 2]));
        assert!(FreeVector::new(s, [(9, int(1))]).is_err());
    }

    #[test]
    fn dual_examples() {
        let s = line(2);
        let (v, f) = free_norm_dual(&fv(&s, &[(1, 1), (2, -1)]));
        assert_eq!(v, int(1));
        assert_eq!(f.lipschitz_number(), int(1));

        let m = fv(&s, &[(1, 1), (2, 1)]);
        let (v, f) = free_norm_dual(&m);
        assert_eq!(v, int(3));
        assert_eq!(f.values(), &[int(0), int(1), int(2)]);

        let s3 = line(3);
        let (v, _) = free_norm_dual(&fv(&s3, &[(1, 1), (2, -1), (3, 1)]));
        assert_eq!(v, int(2));
    }

    #[test]
    fn flow_examples() {
        let s = line(2);
        let (c, sol) = free_norm_flow(&fv(&s, &[(1, 1), (2, -1)]));
        assert_eq!(c, int(1));
        assert_eq!(sol.edges, vec![FlowEdge { from: 1, to: 2, amount: int(1) }]);

        let s1 = line(1);
        let (c, sol) = free_norm_flow(&fv(&s1, &[(1, 2)]));
        assert_eq!(c, int(2));
        assert_eq!(sol.edges, vec![FlowEdge { from: 1, to: 0, amount: int(2) }]);

        let m = fv(&s, &[(1, 1), (2, 1)]);
        let (c, sol) = free_norm_flow(&m);
        assert_eq!(c, int(3));
        assert!(sol.certifies(&m));
        assert_eq!(sol.edges.len(), 2);
        assert!(sol.edges.iter().all(|e| e.to == 0 && e.amount == int(1)));
    }

    #[test]
    fn molecule_examples() {
        let s = line(2);
        let m = molecule(&s, 2, 1).unwrap();
        assert_eq!(m, fv(&s, &[(2, 1), (1, -1)]));
        let m = molecule(&s, 2, 0).unwrap();
        assert_eq!(m.coeff(2), ratio(1, 2));
        assert_eq!(free_norm_dual(&m).0, int(1));
        assert!(matches!(molecule(&s, 1, 1), Err(Error::DegenerateMolecule(1))));
    }

    #[test]
    fn four_point_examples() {
        let s = MetricSpace::path(3);
        assert_eq!(four_point_norm(&s, 1, 2, 3, 0).unwrap(), int(2));
        assert_eq!(four_point_norm(&s, 1, 1, 3, 3).unwrap(), int(0));
        assert_eq!(four_point_norm(&s, 1, 2, 2, 1).unwrap(), int(0));
    }

    #[test]
    fn graev_examples() {
        let s = line(2);
        let u = fv(&s, &[(1, 2)]);
        let v = fv(&s, &[(2, 1)]);
        assert_eq!(graev_distance(&u, &v).unwrap(), int(2));
        assert_eq!(graev_distance(&u, &u).unwrap(), int(0));
        assert_eq!(graev_distance(&delta(&s, 1).unwrap(), &delta(&s, 2).unwrap()).unwrap(), int(1));
        let half = FreeVector::new(s.clone(), [(1, ratio(1, 2))]).unwrap();
        assert!(matches!(graev_distance(&half, &u), Err(Error::NonInteger(_))));
    }

    #[test]
    fn mismatched_spaces() {
        let a = delta(&line(2), 1).unwrap();
        let b = delta(&line(3), 1).unwrap();
        assert!(matches!(a.add(&b), Err(Error::SpaceMismatch)));
    }
}
