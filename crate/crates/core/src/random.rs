//! Seeded generators of random instances for property batteries.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

use crate::free::FreeVector;
use crate::lip::LipFunction;
use crate::metric::{MetricSpace, SpaceRef};
use crate::rational::{self, ratio, Rational};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

/// A random valid space on `n` points drawn from one of three families:
/// distances in `[1, 2]`, shortest-path closures of random weighted complete
/// graphs, and `ℓ₁` distances between distinct integer points in the plane.
pub fn space<R: Rng>(rng: &mut R, n: usize) -> MetricSpace {
    assert!(n >= 1);
    let base = rng.gen_range(0..n);
    let dist = match rng.gen_range(0..3) {
        0 => banded(rng, n),
        1 => graph_closure(rng, n),
        _ => planar_l1(rng, n),
    };
    MetricSpace::new(labels(n), base, dist).expect("generator yields a metric")
}

/// Entries in `[1, 2]` always satisfy the triangle inequality.
fn banded<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<Rational>> {
    let mut d = vec![vec![rational::zero(); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let q = rng.gen_range(1..=4);
            let v = ratio(rng.gen_range(q..=2 * q), q);
            d[i][j] = v.clone();
            d[j][i] = v;
        }
    }
    d
}

fn graph_closure<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<Rational>> {
    let mut d = vec![vec![rational::zero(); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let q = rng.gen_range(1..=3);
            let v = ratio(rng.gen_range(1..=6 * q), q);
            d[i][j] = v.clone();
            d[j][i] = v;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = &d[i][k] + &d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

fn planar_l1<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<Rational>> {
    let side = (n as i64).max(3);
    let mut cells: Vec<(i64, i64)> = (0..side).flat_map(|x| (0..side).map(move |y| (x, y))).collect();
    cells.shuffle(rng);
    let pts = &cells[..n];
    pts.iter().map(|a| pts.iter().map(|b| rational::int((a.0 - b.0).abs() + (a.1 - b.1).abs())).collect()).collect()
}

/// Integer coefficients drawn from `[-bound, bound]` on every non-base point.
pub fn free_vector<R: Rng>(rng: &mut R, space: &SpaceRef, bound: i64) -> FreeVector {
    let terms: Vec<(usize, Rational)> =
        space.non_base().map(|x| (x, rational::int(rng.gen_range(-bound..=bound)))).collect();
    FreeVector::new(space.clone(), terms).expect("indices in range")
}

/// Values `p/q` with `|p| ≤ 6q`, `q ≤ 3`, zero at the base point.
pub fn lip_function<R: Rng>(rng: &mut R, space: &SpaceRef) -> LipFunction {
    let values = (0..space.len())
        .map(|x| {
            if x == space.base() {
                rational::zero()
            } else {
                let q = rng.gen_range(1..=3);
                ratio(rng.gen_range(-6 * q..=6 * q), q)
            }
        })
        .collect();
    LipFunction::new(space.clone(), values).expect("base value is zero")
}

/// A random nonempty subset of `0..n`.
pub fn nonempty_subset<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    loop {
        let s: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
        if !s.is_empty() {
            return s;
        }
    }
}

/// A random retraction of `0..n` fixing `base`: a random image set
/// containing `base`, and every other point sent into it.
pub fn retraction<R: Rng>(rng: &mut R, n: usize, base: usize) -> Vec<usize> {
    let mut fixed: Vec<usize> = (0..n).filter(|&i| i == base || rng.gen_bool(0.5)).collect();
    fixed.sort_unstable();
    (0..n).map(|i| if fixed.contains(&i) { i } else { *fixed.choose(rng).expect("base is fixed") }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_spaces_are_valid() {
        let mut r = rng(7);
        for n in 1..=10 {
            for _ in 0..10 {
                assert!(space(&mut r, n).is_valid());
            }
        }
    }

    #[test]
    fn retractions_are_idempotent() {
        let mut r = rng(3);
        for _ in 0..50 {
            let phi = retraction(&mut r, 6, 2);
            assert_eq!(phi[2], 2);
            assert!(phi.iter().all(|&y| phi[y] == y));
        }
    }

    #[test]
    fn seeds_are_deterministic() {
        assert_eq!(space(&mut rng(11), 6), space(&mut rng(11), 6));
    }
}
