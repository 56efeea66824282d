//! Covering numbers, doubling constants and Assouad-dimension estimates.
//!
//! A covering number counts the closed `r`-balls (centred at points of the
//! space) needed to cover a closed ball `B(x, R)`. Counts come with a lower
//! bound from a set of pairwise incompatible points (no single `r`-ball
//! contains two of them); a count is exact when it meets that bound or when
//! branch-and-bound set cover has been run on the ball.

use fixedbitset::FixedBitSet;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::metric::MetricSpace;
use crate::rational::{self, Rational};

pub const DEFAULT_EXACT_THRESHOLD: usize = 20;

/// Hard ceiling for branch-and-bound; balls are tracked as 64-bit masks.
const MASK_BITS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    pub count: usize,
    pub centers: Vec<usize>,
    pub lower_bound: usize,
    pub exact: bool,
}

pub fn covering_number(
    space: &MetricSpace,
    x: usize,
    big: &Rational,
    small: &Rational,
    exact_threshold: usize,
) -> Result<Cover> {
    space.check_index(x)?;
    check_scales(big, small)?;
    let ranks = Ranks::new(space);
    let close = ranks.neighbourhoods(ranks.cutoff(small));
    Ok(cover_ball(&ranks.within(x, ranks.cutoff(big)), &close, exact_threshold))
}

/// Size of the greedy cover alone, an upper bound for the covering number.
pub fn greedy_covering_number(space: &MetricSpace, x: usize, big: &Rational, small: &Rational) -> Result<usize> {
    space.check_index(x)?;
    check_scales(big, small)?;
    let ranks = Ranks::new(space);
    let close = ranks.neighbourhoods(ranks.cutoff(small));
    Ok(greedy_cover(&ranks.within(x, ranks.cutoff(big)), &close).len())
}

fn check_scales(big: &Rational, small: &Rational) -> Result<()> {
    if !small.is_positive() || big < small {
        return Err(Error::InvalidScale);
    }
    Ok(())
}

/// Each distance replaced by its position among the sorted distinct values,
/// so ball membership is an integer comparison.
struct Ranks {
    values: Vec<Rational>,
    rank: Vec<Vec<u32>>,
}

impl Ranks {
    fn new(space: &MetricSpace) -> Self {
        let mut values = space.distinct_distances();
        values.insert(0, rational::zero());
        let n = space.len();
        let rank = (0..n)
            .map(|x| {
                (0..n).map(|y| values.binary_search(space.d(x, y)).expect("every distance is listed") as u32).collect()
            })
            .collect();
        Self { values, rank }
    }

    /// Number of distinct distances `≤ radius`; `y` is within `radius` of
    /// `x` exactly when its rank is below this.
    fn cutoff(&self, radius: &Rational) -> u32 {
        self.values.partition_point(|v| v <= radius) as u32
    }

    fn within(&self, x: usize, cutoff: u32) -> FixedBitSet {
        let row = &self.rank[x];
        let mut set = FixedBitSet::with_capacity(row.len());
        set.extend((0..row.len()).filter(|&y| row[y] < cutoff));
        set
    }

    /// The closed ball of every point. By symmetry `close[e]` is also the set
    /// of centres whose ball contains `e`.
    fn neighbourhoods(&self, cutoff: u32) -> Vec<FixedBitSet> {
        (0..self.rank.len()).map(|c| self.within(c, cutoff)).collect()
    }
}

fn cover_ball(ball: &FixedBitSet, close: &[FixedBitSet], exact_threshold: usize) -> Cover {
    let greedy = greedy_cover(ball, close);
    let lower_bound = incompatible_points(ball, close);
    let k = ball.count_ones(..);
    if greedy.len() == lower_bound {
        return Cover { count: greedy.len(), centers: greedy, lower_bound, exact: true };
    }
    if k <= exact_threshold.min(MASK_BITS) {
        let elements: Vec<usize> = ball.ones().collect();
        let balls: Vec<Vec<usize>> =
            close.iter().map(|b| (0..k).filter(|&e| b.contains(elements[e])).collect()).collect();
        let centers = exact_cover(k, &balls, greedy);
        return Cover { count: centers.len(), centers, lower_bound, exact: true };
    }
    Cover { count: greedy.len(), centers: greedy, lower_bound, exact: false }
}

/// Repeatedly takes the centre covering most uncovered points, lowest index
/// on ties.
fn greedy_cover(ball: &FixedBitSet, close: &[FixedBitSet]) -> Vec<usize> {
    let mut uncovered = ball.clone();
    let mut centers = Vec::new();
    while !uncovered.is_clear() {
        let (c, gain) = close
            .iter()
            .enumerate()
            .map(|(c, b)| (c, b.intersection_count(&uncovered)))
            .fold((0, 0), |best, cur| if cur.1 > best.1 { cur } else { best });
        debug_assert!(gain > 0, "every point is its own centre");
        uncovered.difference_with(&close[c]);
        centers.push(c);
    }
    centers.sort_unstable();
    centers
}

/// Size of a greedily chosen set of ball points no two of which share an
/// `r`-ball; each needs its own centre.
fn incompatible_points(ball: &FixedBitSet, close: &[FixedBitSet]) -> usize {
    let mut order: Vec<usize> = ball.ones().collect();
    order.sort_by_key(|&e| (close[e].count_ones(..), e));
    let mut blocked = FixedBitSet::with_capacity(ball.len());
    let mut chosen = 0;
    for e in order {
        if !blocked.contains(e) {
            chosen += 1;
            for c in close[e].ones() {
                blocked.union_with(&close[c]);
            }
        }
    }
    chosen
}

fn exact_cover(k: usize, balls: &[Vec<usize>], warm_start: Vec<usize>) -> Vec<usize> {
    let universe: u64 = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let mut masks: Vec<(u64, usize)> = balls
        .iter()
        .enumerate()
        .map(|(c, b)| (b.iter().fold(0u64, |m, &e| m | (1 << e)), c))
        .filter(|(m, _)| *m != 0)
        .collect();
    // drop balls contained in another one (keep the lowest centre among equals)
    masks.sort_by_key(|&(m, c)| (std::cmp::Reverse(m.count_ones()), c));
    let mut kept: Vec<(u64, usize)> = Vec::new();
    for (m, c) in masks {
        if !kept.iter().any(|&(k, _)| k & m == m) {
            kept.push((m, c));
        }
    }
    let largest = kept.first().map_or(1, |(m, _)| m.count_ones()) as usize;
    let mut search = Search { sets: kept, largest, best: warm_start, stack: Vec::new() };
    search.run(universe, 0);
    let mut best = search.best;
    best.sort_unstable();
    best
}

struct Search {
    sets: Vec<(u64, usize)>,
    largest: usize,
    best: Vec<usize>,
    stack: Vec<usize>,
}

impl Search {
    fn run(&mut self, uncovered: u64, depth: usize) {
        if uncovered == 0 {
            if depth < self.best.len() {
                self.best = self.stack.clone();
            }
            return;
        }
        let remaining = (uncovered.count_ones() as usize).div_ceil(self.largest);
        if depth + remaining >= self.best.len() {
            return;
        }
        // branch on the uncovered element contained in the fewest balls
        let mut pick = (usize::MAX, 0u32);
        let mut bits = uncovered;
        while bits != 0 {
            let e = bits.trailing_zeros();
            bits &= bits - 1;
            let count = self.sets.iter().filter(|(m, _)| m & (1 << e) != 0).count();
            if count < pick.0 {
                pick = (count, e);
            }
        }
        let e = pick.1;
        let options: Vec<(u64, usize)> = self.sets.iter().copied().filter(|(m, _)| m & (1 << e) != 0).collect();
        for (m, c) in options {
            self.stack.push(c);
            self.run(uncovered & !m, depth + 1);
            self.stack.pop();
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaleEntry {
    pub r: Rational,
    /// Worst case over centres of the `r`-ball count for `B(x, 2r)`.
    pub count: usize,
    pub lower_bound: usize,
    pub exact: bool,
    pub worst_center: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssouadEstimate {
    /// `max log N(x, R, r) / log(R/r)` over grid pairs with `R/r ≥ 2`.
    pub value: f64,
    pub center: usize,
    pub big: Rational,
    pub small: Rational,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DoublingReport {
    pub scales: Vec<ScaleEntry>,
    pub max_count: usize,
    pub max_lower_bound: usize,
    /// Every scale count is exact.
    pub exact: bool,
    pub assouad: Option<AssouadEstimate>,
}

#[derive(Debug, Clone)]
pub struct DoublingOptions {
    /// Overrides the default grid of half-distances and distances.
    pub scales: Option<Vec<Rational>>,
    pub exact_threshold: usize,
    pub assouad: bool,
    pub exec: Exec,
}

impl Default for DoublingOptions {
    fn default() -> Self {
        Self { scales: None, exact_threshold: DEFAULT_EXACT_THRESHOLD, assouad: true, exec: Exec::default() }
    }
}

/// Distinct positive distances and their halves, ascending.
pub fn scale_grid(space: &MetricSpace) -> Vec<Rational> {
    let half = rational::ratio(1, 2);
    let mut grid: Vec<Rational> = space.distinct_distances().into_iter().flat_map(|d| [&d * &half, d]).collect();
    grid.sort();
    grid.dedup();
    grid
}

pub fn doubling_constant(space: &MetricSpace, opts: &DoublingOptions) -> Result<DoublingReport> {
    let grid = match &opts.scales {
        Some(s) => {
            let mut s = s.clone();
            if s.iter().any(|r| !r.is_positive()) {
                return Err(Error::InvalidScale);
            }
            s.sort();
            s.dedup();
            s
        }
        None => scale_grid(space),
    };
    let two = rational::int(2);
    let n = space.len();
    let ranks = Ranks::new(space);
    let scales: Vec<ScaleEntry> = grid
        .iter()
        .map(|r| {
            let big = &two * r;
            let close = ranks.neighbourhoods(ranks.cutoff(r));
            let cutoff = ranks.cutoff(&big);
            let covers = opts.exec.map_range(n, |x| cover_ball(&ranks.within(x, cutoff), &close, opts.exact_threshold));
            let (worst_center, worst) =
                covers
                    .iter()
                    .enumerate()
                    .fold((0, &covers[0]), |best, cur| if cur.1.count > best.1.count { cur } else { best });
            ScaleEntry {
                r: r.clone(),
                count: worst.count,
                lower_bound: covers.iter().map(|c| c.lower_bound).max().unwrap_or(0),
                exact: covers.iter().all(|c| c.exact),
                worst_center,
            }
        })
        .collect();
    let assouad = if opts.assouad { assouad_estimate(&ranks, &grid, opts) } else { None };
    Ok(DoublingReport {
        max_count: scales.iter().map(|s| s.count).max().unwrap_or(0),
        max_lower_bound: scales.iter().map(|s| s.lower_bound).max().unwrap_or(0),
        exact: scales.iter().all(|s| s.exact),
        scales,
        assouad,
    })
}

fn assouad_estimate(ranks: &Ranks, grid: &[Rational], opts: &DoublingOptions) -> Option<AssouadEstimate> {
    let two = rational::int(2);
    // indices into the grid, big first
    let pairs: Vec<(usize, usize)> = (0..grid.len())
        .flat_map(|small| (0..grid.len()).map(move |big| (big, small)))
        .filter(|&(big, small)| grid[big] >= &two * &grid[small])
        .collect();
    let cutoffs: Vec<u32> = grid.iter().map(|r| ranks.cutoff(r)).collect();
    let closes: Vec<Vec<FixedBitSet>> = cutoffs.iter().map(|&c| ranks.neighbourhoods(c)).collect();
    let per_center: Vec<Option<AssouadEstimate>> = opts.exec.map_range(ranks.rank.len(), |x| {
        let balls: Vec<FixedBitSet> = cutoffs.iter().map(|&c| ranks.within(x, c)).collect();
        let mut best: Option<AssouadEstimate> = None;
        for &(big, small) in &pairs {
            let cover = cover_ball(&balls[big], &closes[small], opts.exact_threshold);
            let ratio = (&grid[big] / &grid[small]).to_f64().unwrap_or(f64::INFINITY);
            let value = (cover.count as f64).ln() / ratio.ln();
            if best.as_ref().is_none_or(|b| value > b.value) {
                best = Some(AssouadEstimate {
                    value,
                    center: x,
                    big: grid[big].clone(),
                    small: grid[small].clone(),
                    count: cover.count,
                });
            }
        }
        best
    });
    per_center.into_iter().flatten().fold(None, |best: Option<AssouadEstimate>, c| match best {
        Some(b) if b.value >= c.value => Some(b),
        _ => Some(c),
    })
}

/// Separation `θ` (smallest positive distance) and diameter `D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discreteness {
    pub separation: Rational,
    pub diameter: Rational,
}

impl Discreteness {
    pub fn ratio(&self) -> Rational {
        &self.diameter / &self.separation
    }
}

pub fn uniform_discreteness(space: &MetricSpace) -> Result<Discreteness> {
    let separation = space.separation().ok_or(Error::EmptySet("uniform discreteness needs at least two points"))?;
    Ok(Discreteness { separation, diameter: space.diameter() })
}
