//! Naive reference computations for cross-checking the engine.
//!
//! Nothing here uses the engine's composition, word evaluation, orbit
//! expansion or spatial hashing. Maps are applied entry by entry, inverses are
//! obtained by plain Gaussian elimination, words are enumerated by brute
//! force and nearest-point queries scan every point.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use crate::dynamics::Aabb;
use crate::word::{Letter, Word};
use crate::{AffineMap, Error, GeneratorSet, LinearMap, Point};

fn apply(f: &AffineMap, x: &[f64]) -> Point {
    let q = f.dim();
    (0..q).map(|i| (0..q).map(|j| f.linear().get(i, j) * x[j]).sum::<f64>() + f.translation()[i]).collect()
}

fn apply_inverse(f: &AffineMap, x: &[f64]) -> Point {
    let q = f.dim();
    let rows: Vec<Vec<f64>> = (0..q).map(|i| (0..q).map(|j| f.linear().get(i, j)).collect()).collect();
    let rhs: Vec<f64> = x.iter().zip(f.translation()).map(|(a, b)| a - b).collect();
    gauss(rows, rhs).expect("generators are invertible")
}

fn apply_letter(gens: &GeneratorSet, letter: Letter, x: &[f64]) -> Point {
    let f = &gens.maps()[letter.generator];
    if letter.inverse {
        apply_inverse(f, x)
    } else {
        apply(f, x)
    }
}

/// Applies a word letter by letter, rightmost first.
pub fn apply_word(gens: &GeneratorSet, w: &Word, x: &[f64]) -> Point {
    w.letters().iter().rev().fold(x.to_vec(), |p, l| apply_letter(gens, *l, &p))
}

/// Gaussian elimination with partial pivoting; `None` for a (numerically)
/// singular system.
fn gauss(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(libm::fabs(*v)));
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| libm::fabs(a[i][col]).total_cmp(&libm::fabs(a[j][col])))?;
        if !(libm::fabs(a[pivot][col]) > 1e-12 * scale) {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Reconstructs the affine map `x ↦ h(x)` from its values on the first
/// `q + 1` test points by solving the interpolation system.
fn interpolate(q: usize, test_points: &[Point], h: impl Fn(&[f64]) -> Point) -> Result<(LinearMap, Point), Error> {
    if test_points.len() < q + 1 {
        return Err(Error::DegenerateTestSet);
    }
    let p0 = &test_points[0];
    let v0 = h(p0);
    let diffs: Vec<Vec<f64>> =
        test_points[1..=q].iter().map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect()).collect();
    let values: Vec<Point> = test_points[1..=q].iter().map(|p| h(p)).collect();
    let mut entries = vec![0.0; q * q];
    for i in 0..q {
        let rhs: Vec<f64> = values.iter().map(|v| v[i] - v0[i]).collect();
        let row = gauss(diffs.clone(), rhs).ok_or(Error::DegenerateTestSet)?;
        entries[i * q..(i + 1) * q].copy_from_slice(&row);
    }
    let linear = LinearMap::from_row_major(q, entries)?;
    let translation = (0..q).map(|i| v0[i] - (0..q).map(|j| linear.get(i, j) * p0[j]).sum::<f64>()).collect();
    Ok((linear, translation))
}

/// The map `x ↦ f(g(x))`, reconstructed from point evaluations only.
pub fn pointwise_compose_oracle(
    f: &AffineMap,
    g: &AffineMap,
    test_points: &[Point],
) -> Result<(LinearMap, Point), Error> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: g.dim() });
    }
    interpolate(f.dim(), test_points, |x| apply(f, &apply(g, x)))
}

/// The map realized by a word, reconstructed from point evaluations only.
pub fn pointwise_word_oracle(
    gens: &GeneratorSet,
    w: &Word,
    test_points: &[Point],
) -> Result<(LinearMap, Point), Error> {
    interpolate(gens.dim(), test_points, |x| apply_word(gens, w, x))
}

/// `0, e₁, …, e_q`.
pub fn standard_test_points(q: usize) -> Vec<Point> {
    let mut out = vec![vec![0.0; q]];
    for i in 0..q {
        let mut e = vec![0.0; q];
        e[i] = 1.0;
        out.push(e);
    }
    out
}

/// All freely reduced words of length at most `max_len`, by extending every
/// word of the previous length with every letter and discarding those that
/// cancel.
pub fn brute_force_words(rank: usize, max_len: usize) -> Vec<Word> {
    let mut all = vec![Word::empty()];
    let mut layer = vec![Vec::<Letter>::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for g in 0..rank {
                for inverse in [false, true] {
                    let l = Letter { generator: g, inverse };
                    if w.last().is_some_and(|last| last.generator == g && last.inverse != inverse) {
                        continue;
                    }
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        all.extend(next.iter().cloned().map(Word::new));
        layer = next;
    }
    all
}

/// Every point `w(base)` for reduced words of length at most `max_len`,
/// without any deduplication.
pub fn naive_orbit(gens: &GeneratorSet, base: &[f64], max_len: usize) -> Vec<Point> {
    brute_force_words(gens.rank(), max_len).iter().map(|w| apply_word(gens, w, base)).collect()
}

/// Cells of a box reached from a seed point by breadth-first cell marking.
#[derive(Clone, Debug, PartialEq)]
pub struct GridClosure {
    pub bounds: Aabb,
    pub resolution: f64,
    /// Cells per axis.
    pub shape: Vec<usize>,
    /// Cells of the grid extension around `bounds` that points may pass
    /// through, per side and axis.
    pub margin_cells: usize,
    /// Occupied cells of `bounds`.
    pub occupied: BTreeSet<Vec<usize>>,
    /// Generator applications performed.
    pub budget_used: usize,
}

impl GridClosure {
    pub fn total_cells(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_full(&self) -> bool {
        self.occupied.len() == self.total_cells()
    }
}

/// Cell index relative to `bounds.lo`, or `None` outside the grid extended by
/// `margin` cells on every side.
fn cell_of(bounds: &Aabb, shape: &[usize], resolution: f64, margin: usize, p: &[f64]) -> Option<Vec<i64>> {
    let m = margin as i64;
    p.iter()
        .zip(&bounds.lo)
        .zip(&bounds.hi)
        .zip(shape)
        .map(|(((x, lo), hi), n)| {
            let n = *n as i64;
            if *x >= *lo && *x <= *hi {
                return Some((libm::floor((x - lo) / resolution) as i64).min(n - 1));
            }
            let i = libm::floor((x - lo) / resolution);
            (i >= -(m as f64) && i < (n + m) as f64).then_some(i as i64)
        })
        .collect()
}

/// Marks the cells of `bounds` reached from `seed`: one representative point
/// per occupied cell is mapped by every generator and inverse until no new
/// cell appears. Fails once more than `budget` applications are needed.
pub fn grid_orbit_closure(
    gens: &GeneratorSet,
    seed: &[f64],
    bounds: &Aabb,
    resolution: f64,
    budget: usize,
) -> Result<GridClosure, Error> {
    grid_orbit_closure_with_margin(gens, seed, bounds, resolution, 0, budget)
}

/// [`grid_orbit_closure`] on the grid extended by `margin_cells` cells on
/// every side, so that orbit paths may leave `bounds` and come back. Only
/// cells of `bounds` are reported.
pub fn grid_orbit_closure_with_margin(
    gens: &GeneratorSet,
    seed: &[f64],
    bounds: &Aabb,
    resolution: f64,
    margin_cells: usize,
    budget: usize,
) -> Result<GridClosure, Error> {
    if !(resolution > 0.0) {
        return Err(Error::InvalidArgument("resolution must be positive"));
    }
    let shape: Vec<usize> = bounds
        .lo
        .iter()
        .zip(&bounds.hi)
        .map(|(lo, hi)| (libm::ceil((hi - lo) / resolution - 1e-9) as usize).max(1))
        .collect();
    let mut closure = GridClosure {
        bounds: bounds.clone(),
        resolution,
        shape: shape.clone(),
        margin_cells,
        occupied: BTreeSet::new(),
        budget_used: 0,
    };
    let mut marked: BTreeSet<Vec<i64>> = BTreeSet::new();
    let Some(cell) = cell_of(bounds, &shape, resolution, margin_cells, seed) else { return Ok(closure) };
    marked.insert(cell);
    let mut queue = VecDeque::from([seed.to_vec()]);
    while let Some(p) = queue.pop_front() {
        for g in 0..gens.rank() {
            for inverse in [false, true] {
                closure.budget_used += 1;
                if closure.budget_used > budget {
                    return Err(Error::BudgetExceeded { what: "grid closure applications", cap: budget });
                }
                let image = apply_letter(gens, Letter { generator: g, inverse }, &p);
                if let Some(cell) = cell_of(bounds, &shape, resolution, margin_cells, &image) {
                    if marked.insert(cell) {
                        queue.push_back(image);
                    }
                }
            }
        }
    }
    closure.occupied = marked
        .into_iter()
        .filter(|c| c.iter().zip(&shape).all(|(i, n)| *i >= 0 && (*i as usize) < *n))
        .map(|c| c.into_iter().map(|i| i as usize).collect())
        .collect();
    Ok(closure)
}

/// True iff every point of the `eps`-grid of `bounds` lies within `eps` of
/// some input point.
pub fn density_check(points: &[Point], bounds: &Aabb, eps: f64) -> bool {
    if points.is_empty() {
        return false;
    }
    let counts: Vec<usize> =
        bounds.lo.iter().zip(&bounds.hi).map(|(lo, hi)| libm::floor((hi - lo) / eps + 1e-9) as usize + 1).collect();
    let total: usize = counts.iter().product();
    (0..total).all(|mut k| {
        let grid_point: Point = counts
            .iter()
            .zip(bounds.lo.iter().zip(&bounds.hi))
            .map(|(n, (lo, hi))| {
                let i = k % n;
                k /= n;
                (lo + i as f64 * eps).min(*hi)
            })
            .collect();
        points.iter().any(|p| crate::distance(p, &grid_point) <= eps)
    })
}
