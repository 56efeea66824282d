//! Lipschitz functions vanishing at the base point.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::free::{same_space, FreeVector};
use crate::metric::{distance_to_set, SpaceRef};
use crate::rational::{self, Rational};

/// A real function on a finite pointed space with `f(e) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LipFunction {
    space: SpaceRef,
    values: Vec<Rational>,
}

impl LipFunction {
    pub fn new(space: SpaceRef, values: Vec<Rational>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::InvalidSpace(format!(
                "function has {} values for {} points",
                values.len(),
                space.len()
            )));
        }
        if !values[space.base()].is_zero() {
            return Err(Error::NonzeroAtBase);
        }
        Ok(Self { space, values })
    }

    pub fn zero(space: SpaceRef) -> Self {
        let values = vec![rational::zero(); space.len()];
        Self { space, values }
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, x: usize) -> &Rational {
        &self.values[x]
    }

    /// `max_{x≠y} |f(x) − f(y)| / d(x,y)`, zero on a one-point space.
    pub fn lipschitz_number(&self) -> Rational {
        lipschitz_number(self)
    }
}

pub fn lipschitz_number(f: &LipFunction) -> Rational {
    let n = f.space.len();
    let mut best = rational::zero();
    for i in 0..n {
        for j in (i + 1)..n {
            let slope = (&f.values[i] - &f.values[j]).abs() / f.space.d(i, j);
            if slope > best {
                best = slope;
            }
        }
    }
    best
}

/// `⟨m, f⟩ = Σ_x m_x f(x)`.
pub fn pairing(m: &FreeVector, f: &LipFunction) -> Result<Rational> {
    if !same_space(m.space(), &f.space) {
        return Err(Error::SpaceMismatch);
    }
    Ok(m.coeffs().iter().fold(rational::zero(), |acc, (&x, c)| acc + c * &f.values[x]))
}

/// Extends `f`, defined on a metric subspace of `target` (points matched by
/// label), to all of `target` by `g(x) = min_s f(s) + L(f)·d(x, s)`.
///
/// The result agrees with `f` on the subspace and has the same Lipschitz number.
pub fn mcshane_extend(f: &LipFunction, target: &SpaceRef) -> Result<LipFunction> {
    let sub = f.space();
    let embed: Vec<usize> = sub.labels().iter().map(|l| target.index_of(l)).collect::<Result<_>>()?;
    if embed[sub.base()] != target.base() {
        return Err(Error::BaseNotInSubset);
    }
    for i in 0..sub.len() {
        for j in (i + 1)..sub.len() {
            if sub.d(i, j) != target.d(embed[i], embed[j]) {
                return Err(Error::InvalidSpace(format!(
                    "`{}` is not a metric subspace: d({},{}) differs",
                    sub,
                    sub.label(i),
                    sub.label(j)
                )));
            }
        }
    }
    let lip = f.lipschitz_number();
    let values = (0..target.len())
        .map(|x| {
            embed
                .iter()
                .enumerate()
                .map(|(s, &ts)| &f.values[s] + &lip * target.d(x, ts))
                .min()
                .expect("subspace contains the base point")
        })
        .collect();
    LipFunction::new(target.clone(), values)
}

/// The capped cone `f(y) = min(1, d(y, A∪{e}) / d(x, A∪{e}))`: it vanishes on
/// `A` and at the base, equals one at `x`, and has the least Lipschitz number
/// `1 / d(x, A∪{e})` among such functions.
pub fn separating_function(space: &SpaceRef, set: &[usize], x: usize) -> Result<LipFunction> {
    space.check_index(x)?;
    let mut zero_set: Vec<usize> = set.to_vec();
    zero_set.push(space.base());
    if zero_set.contains(&x) {
        return Err(Error::NotSeparable(x));
    }
    let gap = distance_to_set(space, x, &zero_set)?;
    let values = (0..space.len())
        .map(|y| {
            let r = distance_to_set(space, y, &zero_set)? / &gap;
            Ok(std::cmp::min(r, rational::one()))
        })
        .collect::<Result<_>>()?;
    LipFunction::new(space.clone(), values)
}
