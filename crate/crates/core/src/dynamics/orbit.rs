use alloc::vec::Vec;

use super::{
    ordered_map, Aabb, SpatialHash, DEFAULT_DEDUP_EPS, DEFAULT_ORBIT_MAX_LEN, DEFAULT_POINT_CAP, ESCAPE_RADIUS,
};
use crate::word::{Letter, Word};
use crate::{norm, Error, GeneratorSet, Point};

/// Budgets and tolerances for breadth-first orbit expansion.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitOptions {
    /// Maximum word length.
    pub max_len: usize,
    /// Points closer than this to a stored point are not stored again.
    pub dedup_eps: f64,
    /// Maximum number of stored points.
    pub point_cap: usize,
    /// Points beyond this norm are counted as escapes and pruned.
    pub escape_radius: f64,
    /// Points outside the window are counted and pruned.
    pub window: Option<Aabb>,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        Self {
            max_len: DEFAULT_ORBIT_MAX_LEN,
            dedup_eps: DEFAULT_DEDUP_EPS,
            point_cap: DEFAULT_POINT_CAP,
            escape_radius: ESCAPE_RADIUS,
            window: None,
        }
    }
}

impl OrbitOptions {
    pub fn with_max_len(mut self, max_len: usize) -> Self {
        self.max_len = max_len;
        self
    }

    pub fn with_dedup_eps(mut self, eps: f64) -> Self {
        self.dedup_eps = eps;
        self
    }

    pub fn with_window(mut self, window: Option<Aabb>) -> Self {
        self.window = window;
        self
    }

    pub fn with_point_cap(mut self, cap: usize) -> Self {
        self.point_cap = cap;
        self
    }
}

/// A deduplicated breadth-first sample of the orbit `Ψ.base`.
///
/// Every stored point is an actual orbit point: it was computed from its
/// parent by one generator or inverse, and its word is recovered by walking
/// the parent chain. Entries are ordered by word length and, within a length,
/// lexicographically by word.
#[derive(Clone, Debug)]
pub struct OrbitSample {
    base: Point,
    store: SpatialHash,
    parent: Vec<u32>,
    letter: Vec<Option<Letter>>,
    depth: Vec<u32>,
    /// Tolerance used for deduplication.
    pub dedup_eps: f64,
    /// Word-length budget used.
    pub budget: usize,
    /// Candidates pruned for exceeding the escape radius (or not finite).
    pub escapes: usize,
    /// Candidates pruned for leaving the window.
    pub left_window: usize,
    /// Candidates dropped as duplicates although they differ from the stored
    /// point by more than rounding noise.
    pub near_misses: usize,
    /// True when a level produced no new point before the budget ran out.
    pub saturated: bool,
    /// True when expansion was cut short by the caller's stop predicate.
    pub stopped_early: bool,
}

impl OrbitSample {
    pub fn base(&self) -> &[f64] {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn point(&self, index: usize) -> &[f64] {
        self.store.point(index)
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }

    /// Length of the word that produced entry `index`.
    pub fn word_len(&self, index: usize) -> usize {
        self.depth[index] as usize
    }

    /// The reduced word `w` with `point(index) = w(base)`.
    pub fn word(&self, index: usize) -> Word {
        let mut letters = Vec::with_capacity(self.word_len(index));
        let mut i = index;
        while let Some(l) = self.letter[i] {
            letters.push(l);
            i = self.parent[i] as usize;
        }
        Word::new(letters)
    }

    /// Pairs of (point, word) in storage order.
    pub fn entries(&self) -> impl Iterator<Item = (&[f64], Word)> + '_ {
        (0..self.len()).map(move |i| (self.point(i), self.word(i)))
    }

    /// True when the orbit was exhausted inside the budget with nothing pruned,
    /// so the sample is the whole orbit up to `dedup_eps`.
    pub fn is_complete(&self) -> bool {
        self.saturated && self.escapes == 0 && self.left_window == 0
    }

    /// Nearest stored point within `radius ≤ dedup_eps`.
    pub fn nearest_within(&self, p: &[f64], radius: f64) -> Option<(usize, f64)> {
        self.store.nearest_within(p, radius)
    }
}

/// Orbit sample with default budgets apart from word length and dedup radius.
pub fn orbit(base: &[f64], gens: &GeneratorSet, max_len: usize, dedup_eps: f64) -> Result<OrbitSample, Error> {
    orbit_with(base, gens, &OrbitOptions::default().with_max_len(max_len).with_dedup_eps(dedup_eps))
}

pub fn orbit_with(base: &[f64], gens: &GeneratorSet, options: &OrbitOptions) -> Result<OrbitSample, Error> {
    orbit_until(base, gens, options, |_, _, _| false)
}

/// Breadth-first expansion that stops as soon as `stop(index, depth, point)`
/// returns true for a newly stored point.
pub(crate) fn orbit_until(
    base: &[f64],
    gens: &GeneratorSet,
    options: &OrbitOptions,
    mut stop: impl FnMut(usize, usize, &[f64]) -> bool,
) -> Result<OrbitSample, Error> {
    if base.len() != gens.dim() {
        return Err(Error::DimensionMismatch { expected: gens.dim(), found: base.len() });
    }
    if !(options.dedup_eps > 0.0) {
        return Err(Error::InvalidArgument("dedup_eps must be positive"));
    }
    let mut sample = OrbitSample {
        base: base.to_vec(),
        store: SpatialHash::new(gens.dim(), options.dedup_eps),
        parent: Vec::new(),
        letter: Vec::new(),
        depth: Vec::new(),
        dedup_eps: options.dedup_eps,
        budget: options.max_len,
        escapes: 0,
        left_window: 0,
        near_misses: 0,
        saturated: false,
        stopped_early: false,
    };
    sample.store.insert(base);
    sample.parent.push(0);
    sample.letter.push(None);
    sample.depth.push(0);
    if stop(0, 0, base) {
        sample.stopped_early = true;
        return Ok(sample);
    }

    let mut frontier: Vec<u32> = alloc::vec![0];
    for depth in 1..=options.max_len {
        let mut next_frontier = Vec::new();
        // Letter-major, then frontier order: candidate words `letter · w` come
        // out in lexicographic order because the frontier already is.
        for letter in gens.letters() {
            let map = gens.letter_map(letter);
            let images: Vec<Option<Point>> = ordered_map(&frontier, |_, &i| {
                let i = i as usize;
                if sample.letter[i] == Some(letter.inverted()) {
                    None
                } else {
                    Some(map.map_point(sample.point(i)))
                }
            });
            for (&parent, image) in frontier.iter().zip(images) {
                let Some(p) = image else { continue };
                let n = norm(&p);
                if !(n <= options.escape_radius) {
                    sample.escapes += 1;
                    continue;
                }
                if options.window.as_ref().is_some_and(|w| !w.contains(&p)) {
                    sample.left_window += 1;
                    continue;
                }
                if let Some((_, d)) = sample.store.nearest_within(&p, options.dedup_eps) {
                    if d > 1e-9 * (1.0 + n) {
                        sample.near_misses += 1;
                    }
                    continue;
                }
                let index = sample.store.insert(&p);
                sample.parent.push(parent);
                sample.letter.push(Some(letter));
                sample.depth.push(depth as u32);
                if sample.len() > options.point_cap {
                    return Err(Error::BudgetExceeded { what: "orbit points", cap: options.point_cap });
                }
                if stop(index, depth, &p) {
                    sample.stopped_early = true;
                    return Ok(sample);
                }
                next_frontier.push(index as u32);
            }
        }
        if next_frontier.is_empty() {
            sample.saturated = true;
            break;
        }
        frontier = next_frontier;
    }
    Ok(sample)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::fixtures;
    use crate::{AffineMap, LinearMap};
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn halving_map_on_the_line() {
        let gens =
            GeneratorSet::new(1, vec![("h".to_string(), AffineMap::linear_only(LinearMap::diagonal(&[0.5])).unwrap())])
                .unwrap();
        let o = orbit(&[1.0], &gens, 3, 1e-4).unwrap();
        let mut xs: Vec<f64> = o.points().map(|p| p[0]).collect();
        xs.sort_by(f64::total_cmp);
        assert_eq!(xs, vec![0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0]);
    }

    #[test]
    fn identity_generator_gives_the_base_point() {
        let gens = GeneratorSet::new(2, vec![("id".to_string(), AffineMap::identity(2))]).unwrap();
        let o = orbit(&[0.3, 0.4], &gens, 10, 1e-4).unwrap();
        assert_eq!(o.len(), 1);
        assert!(o.is_complete());
        assert_eq!(o.near_misses, 0);
    }

    #[test]
    fn example1_diagonal_orbit() {
        let o = orbit(&[1.0, 1.0], &fixtures::example1(), 3, 1e-4).unwrap();
        assert_eq!(o.len(), 7);
        for (p, w) in o.entries() {
            let n: i32 = w.letters().iter().map(|l| i32::from(l.sign())).sum();
            assert_eq!(p, &[libm::pow(2.0, -f64::from(n)), libm::pow(2.0, f64::from(n))][..]);
        }
    }

    #[test]
    fn provenance_matches_word_evaluation() {
        let gens = fixtures::example4();
        let o = orbit(&[0.0, 0.0], &gens, 6, 1e-4).unwrap();
        for (p, w) in o.entries() {
            let q = gens.apply_word(&w, &[0.0, 0.0]).unwrap();
            assert!(crate::distance(p, &q) < 1e-9);
            let q = gens.evaluate_word(&w).unwrap().apply(&[0.0, 0.0]).unwrap();
            assert!(crate::distance(p, &q) < 1e-9);
        }
    }

    #[test]
    fn entries_are_shortlex_ordered() {
        let o = orbit(&[0.3, 0.7], &fixtures::example2(), 4, 1e-4).unwrap();
        let words: Vec<Word> = (0..o.len()).map(|i| o.word(i)).collect();
        assert!(words.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn generator_invariance_up_to_budget() {
        let gens = fixtures::example4();
        let eps = 1e-4;
        let o = orbit(&[0.0, 0.0], &gens, 7, eps).unwrap();
        for i in 0..o.len() {
            if o.word_len(i) == o.budget {
                continue;
            }
            for letter in gens.letters() {
                let image = gens.letter_map(letter).map_point(o.point(i));
                assert!(o.nearest_within(&image, eps).is_some(), "image of entry {i} missing");
            }
        }
    }

    #[test]
    fn escapes_are_counted() {
        let o = orbit(&[1.0, 1.0], &fixtures::example1(), 60, 1e-4).unwrap();
        assert!(o.escapes > 0);
        assert!(o.points().all(|p| crate::norm(p) <= ESCAPE_RADIUS));
    }

    #[test]
    fn point_cap() {
        let options = OrbitOptions::default().with_max_len(8).with_point_cap(50);
        assert!(matches!(orbit_with(&[0.3, 0.7], &fixtures::example2(), &options), Err(Error::BudgetExceeded { .. })));
    }
}
