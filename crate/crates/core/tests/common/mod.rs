//! Oracles written without the library's solvers.

#![allow(dead_code)]

use num_traits::{Signed, ToPrimitive};

use lipfree::metric::MetricSpace;
use lipfree::rational::{self, int, Rational};
use lipfree::FreeVector;

/// Norm on the path `{0, 1, …, n}` based at `0`: the mass crossing each unit
/// edge is the total coefficient beyond it.
pub fn path_norm(m: &FreeVector) -> Rational {
    let n = m.space().len() - 1;
    (1..=n)
        .map(|k| (k..=n).fold(rational::zero(), |acc, x| acc + m.coeff(x)).abs())
        .fold(rational::zero(), |a, b| a + b)
}

/// `max ⟨m, f⟩` over integer `f` with `f(e) = 0` and `|f(x) − f(y)| ≤ d(x, y)`.
/// For integer distances the constraint matrix is a network matrix, so the
/// maximum over all real `f` is attained at an integer vertex.
pub fn lattice_norm(m: &FreeVector) -> Rational {
    let s = m.space();
    let d = |x: usize, y: usize| s.d(x, y).to_i64().expect("integer distances");
    let n = s.len();
    let mut f = vec![0i64; n];
    let mut best = None;
    search(s, &d, m, 0, &mut f, &mut best);
    int(best.expect("zero function is feasible"))
}

fn search(
    s: &MetricSpace,
    d: &dyn Fn(usize, usize) -> i64,
    m: &FreeVector,
    x: usize,
    f: &mut Vec<i64>,
    best: &mut Option<i64>,
) {
    if x == s.len() {
        let value: i64 = (0..s.len()).map(|y| m.coeff(y).to_i64().unwrap() * f[y]).sum();
        if best.is_none_or(|b| value > b) {
            *best = Some(value);
        }
        return;
    }
    let range = if x == s.base() { 0..=0 } else { -d(x, s.base())..=d(x, s.base()) };
    for v in range {
        if (0..x).all(|y| (v - f[y]).abs() <= d(x, y)) {
            f[x] = v;
            search(s, d, m, x + 1, f, best);
        }
    }
}

/// Fewest centres whose closed `r`-balls cover `B(x, R)`, by trying every
/// subset of centres in order of size.
pub fn brute_covering(s: &MetricSpace, x: usize, big: &Rational, small: &Rational) -> usize {
    let n = s.len();
    assert!(n <= 16);
    let ball: Vec<usize> = (0..n).filter(|&y| s.d(x, y) <= big).collect();
    let mut best = usize::MAX;
    for mask in 0u32..(1 << n) {
        let k = mask.count_ones() as usize;
        if k >= best {
            continue;
        }
        let covers = ball.iter().all(|&y| (0..n).any(|c| mask & (1 << c) != 0 && s.d(c, y) <= small));
        if covers {
            best = k;
        }
    }
    best
}
