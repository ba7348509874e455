//! The affine group Aff(ℝ^q) and finitely generated subgroups of it.
//!
//! An element `⟨A, a⟩` acts by `x ↦ A·x + a` and composes as
//! `⟨A, a⟩ ∘ ⟨B, b⟩ = ⟨A·B, A·b + a⟩`.

use alloc::string::String;
use alloc::vec::Vec;

use crate::linalg::{solve_classified, SystemSolution};
use crate::word::{Letter, Word};
use crate::{Error, LinearMap, Point};

/// Relative determinant tolerance of the invertibility gate.
pub const INVERTIBILITY_TOLERANCE: f64 = 1e-12;

/// An invertible affine transformation `x ↦ A·x + a` of ℝ^q.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap {
    linear: LinearMap,
    translation: Point,
}

impl AffineMap {
    /// Builds a group element, checking shapes and that
    /// `|det A| > 1e-12 · ‖A‖^q`.
    pub fn new(linear: LinearMap, translation: Point) -> Result<Self, Error> {
        if linear.dim() != translation.len() {
            return Err(Error::DimensionMismatch { expected: linear.dim(), found: translation.len() });
        }
        check_invertible(&linear)?;
        Ok(Self { linear, translation })
    }

    /// Builds from row-major rows of `A` and the vector `a`.
    pub fn from_parts(rows: &[Vec<f64>], translation: &[f64]) -> Result<Self, Error> {
        Self::new(LinearMap::from_rows(rows)?, translation.to_vec())
    }

    pub fn identity(dim: usize) -> Self {
        Self { linear: LinearMap::identity(dim), translation: alloc::vec![0.0; dim] }
    }

    pub fn linear_only(linear: LinearMap) -> Result<Self, Error> {
        let dim = linear.dim();
        Self::new(linear, alloc::vec![0.0; dim])
    }

    pub fn translation_by(v: &[f64]) -> Self {
        Self { linear: LinearMap::identity(v.len()), translation: v.to_vec() }
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn linear(&self) -> &LinearMap {
        &self.linear
    }

    pub fn translation(&self) -> &[f64] {
        &self.translation
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self, Error> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Self) -> Self {
        let linear = self.linear.mul(&other.linear);
        let mut translation = self.linear.apply(&other.translation);
        for (t, a) in translation.iter_mut().zip(&self.translation) {
            *t += a;
        }
        Self { linear, translation }
    }

    pub fn inverse(&self) -> Result<Self, Error> {
        check_invertible(&self.linear)?;
        let inv = self.linear.inverse().ok_or(Error::NearSingular { det: 0.0, threshold: 0.0 })?;
        let translation = inv.apply(&self.translation).into_iter().map(|v| -v).collect();
        Ok(Self { linear: inv, translation })
    }

    /// `A·x + a`.
    pub fn apply(&self, x: &[f64]) -> Result<Point, Error> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.len() });
        }
        Ok(self.map_point(x))
    }

    /// [`apply`](Self::apply) without the dimension check.
    #[inline]
    pub fn map_point(&self, x: &[f64]) -> Point {
        let n = self.dim();
        let entries = self.linear.entries();
        let mut out = self.translation.clone();
        for i in 0..n {
            let row = &entries[i * n..(i + 1) * n];
            out[i] += row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
        }
        out
    }

    /// `selfⁿ` by binary exponentiation; negative `n` uses the inverse.
    pub fn pow(&self, n: i64) -> Result<Self, Error> {
        let mut base = if n < 0 { self.inverse()? } else { self.clone() };
        let mut exp = n.unsigned_abs();
        let mut acc = Self::identity(self.dim());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.compose_unchecked(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.compose_unchecked(&base);
            }
        }
        Ok(acc)
    }

    /// The unique solution of `(I − A)·x = a`.
    pub fn fixed_point(&self) -> Result<Point, Error> {
        match solve_classified(&self.linear.identity_minus(), &self.translation, 1e-12) {
            SystemSolution::Unique(x) => Ok(x),
            SystemSolution::Infinite => Err(Error::NonUnique),
            SystemSolution::Inconsistent => Err(Error::NoFixedPoint),
        }
    }

    /// Fixed point `v` and the differential at `v`.
    ///
    /// In the flat affine chart the exponential map at `v` is `X ↦ v + X`, so
    /// `f(v + X) = v + A·X` holds exactly and the differential is `A` itself.
    pub fn linearize_at_fixed_point(&self) -> Result<(Point, LinearMap), Error> {
        let v = self.fixed_point()?;
        Ok((v, self.linear.clone()))
    }

    /// Largest entrywise difference over both the linear part and translation.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let t = self.translation.iter().zip(&other.translation).map(|(a, b)| libm::fabs(a - b)).fold(0.0, f64::max);
        self.linear.max_abs_diff(&other.linear).max(t)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.max_abs_diff(&Self::identity(self.dim())) <= tol
    }
}

fn check_invertible(linear: &LinearMap) -> Result<(), Error> {
    let q = linear.dim();
    let det = linear.determinant();
    let norm = linear.operator_norm()?;
    let threshold = INVERTIBILITY_TOLERANCE * libm::pow(norm, q as f64);
    if !(libm::fabs(det) > threshold) {
        return Err(Error::NearSingular { det, threshold });
    }
    Ok(())
}

/// `fⁿ ∘ gⁿ ∘ f⁻ⁿ ∘ g⁻ⁿ`.
pub fn commutator_h_n(f: &AffineMap, g: &AffineMap, n: u32) -> Result<AffineMap, Error> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: g.dim() });
    }
    if n == 0 {
        return Err(Error::InvalidArgument("commutator index n must be at least 1"));
    }
    let n = i64::from(n);
    let parts = [f.pow(n)?, g.pow(n)?, f.pow(-n)?, g.pow(-n)?];
    Ok(parts[0].compose_unchecked(&parts[1]).compose_unchecked(&parts[2]).compose_unchecked(&parts[3]))
}

/// An ordered, named, finite set of generators of a subgroup of Aff(ℝ^q).
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSet {
    dim: usize,
    names: Vec<String>,
    maps: Vec<AffineMap>,
    inverses: Vec<AffineMap>,
}

impl GeneratorSet {
    pub fn new(dim: usize, generators: Vec<(String, AffineMap)>) -> Result<Self, Error> {
        let mut names: Vec<String> = Vec::with_capacity(generators.len());
        let mut maps = Vec::with_capacity(generators.len());
        let mut inverses = Vec::with_capacity(generators.len());
        for (name, map) in generators {
            if map.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: map.dim() });
            }
            if names.contains(&name) {
                return Err(Error::DuplicateName(name));
            }
            inverses.push(map.inverse()?);
            names.push(name);
            maps.push(map);
        }
        Ok(Self { dim, names, maps, inverses })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.maps.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn maps(&self) -> &[AffineMap] {
        &self.maps
    }

    pub fn generator(&self, index: usize) -> Option<&AffineMap> {
        self.maps.get(index)
    }

    /// The map a single letter stands for.
    #[inline]
    pub fn letter_map(&self, letter: Letter) -> &AffineMap {
        if letter.inverse {
            &self.inverses[letter.generator]
        } else {
            &self.maps[letter.generator]
        }
    }

    /// All letters in alphabet order `g₀, g₀⁻¹, g₁, g₁⁻¹, …`.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..2 * self.rank()).map(Letter::from_rank_key)
    }

    fn check_word(&self, w: &Word) -> Result<(), Error> {
        match w.max_generator() {
            Some(index) if index >= self.rank() => Err(Error::BadIndex { index, rank: self.rank() }),
            _ => Ok(()),
        }
    }

    /// Composition of the letters' maps, left to right; the empty word is the
    /// identity. The word is freely reduced first.
    pub fn evaluate_word(&self, w: &Word) -> Result<AffineMap, Error> {
        self.check_word(w)?;
        let w = w.reduced();
        let mut acc = AffineMap::identity(self.dim);
        for letter in w.letters() {
            acc = acc.compose_unchecked(self.letter_map(*letter));
        }
        Ok(acc)
    }

    /// Applies the word to a point letter by letter, rightmost letter first.
    pub fn apply_word(&self, w: &Word, x: &[f64]) -> Result<Point, Error> {
        self.check_word(w)?;
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.len() });
        }
        let mut p = x.to_vec();
        for letter in w.letters().iter().rev() {
            p = self.letter_map(*letter).map_point(&p);
        }
        Ok(p)
    }

    /// Stable 64-bit fingerprint of the generator maps (FNV-1a over the
    /// IEEE-754 bit patterns), used to tie reports to their group.
    pub fn fingerprint(&self) -> u64 {
        const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
        const PRIME: u64 = 0x0000_0100_0000_01b3;
        let mut h = OFFSET;
        let mut feed = |bytes: [u8; 8]| {
            for b in bytes {
                h ^= u64::from(b);
                h = h.wrapping_mul(PRIME);
            }
        };
        feed((self.dim as u64).to_le_bytes());
        for map in &self.maps {
            for v in map.linear().entries().iter().chain(map.translation()) {
                feed(v.to_bits().to_le_bytes());
            }
        }
        h
    }

    /// Same group with generator `index` replaced by its inverse.
    pub fn with_inverted(&self, index: usize) -> Result<Self, Error> {
        if index >= self.rank() {
            return Err(Error::BadIndex { index, rank: self.rank() });
        }
        let mut out = self.clone();
        core::mem::swap(&mut out.maps[index], &mut out.inverses[index]);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn diag(d: &[f64], t: &[f64]) -> AffineMap {
        AffineMap::new(LinearMap::diagonal(d), t.to_vec()).unwrap()
    }

    /// Example 4 generators: ψ₁ = ⟨diag(μ₁,μ₂),0⟩, ψ₂ = ⟨diag(μ₃,ν),(1,0)⟩.
    fn example4(mu1: f64, mu2: f64, mu3: f64, nu: f64) -> (AffineMap, AffineMap) {
        (diag(&[mu1, mu2], &[0.0, 0.0]), diag(&[mu3, nu], &[1.0, 0.0]))
    }

    fn random_map(rng: &mut ChaCha8Rng) -> AffineMap {
        loop {
            let rows: Vec<Vec<f64>> = (0..2).map(|_| (0..2).map(|_| rng.gen_range(-2.0..2.0)).collect()).collect();
            let t: Vec<f64> = (0..2).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let m = LinearMap::from_rows(&rows).unwrap();
            if m.determinant().abs() > 1e-3 {
                return AffineMap::new(m, t).unwrap();
            }
        }
    }

    /// Evaluates f(g(x)) at 0, e₁, e₂ and rebuilds the affine map.
    fn pointwise_oracle(f: &AffineMap, g: &AffineMap) -> AffineMap {
        let at = |x: &[f64]| f.apply(&g.apply(x).unwrap()).unwrap();
        let origin = at(&[0.0, 0.0]);
        let c1 = at(&[1.0, 0.0]);
        let c2 = at(&[0.0, 1.0]);
        let rows = vec![vec![c1[0] - origin[0], c2[0] - origin[0]], vec![c1[1] - origin[1], c2[1] - origin[1]]];
        AffineMap::from_parts(&rows, &origin).unwrap()
    }

    #[test]
    fn identity_composition() {
        let id = AffineMap::identity(2);
        assert_eq!(id.compose(&id).unwrap(), id);
    }

    #[test]
    fn composition_law_matches_pointwise_oracle() {
        let f = diag(&[2.0, 1.0], &[1.0, 0.0]);
        let g = diag(&[1.0, 3.0], &[0.0, 1.0]);
        let expected = pointwise_oracle(&f, &g);
        let got = f.compose(&g).unwrap();
        assert_eq!(got, diag(&[2.0, 3.0], &[1.0, 1.0]));
        assert!(got.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn dimension_mismatch() {
        let f = AffineMap::identity(2);
        let g = AffineMap::identity(3);
        assert!(matches!(f.compose(&g), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(f.apply(&[1.0]), Err(Error::DimensionMismatch { .. })));
        assert!(AffineMap::new(LinearMap::identity(2), vec![0.0]).is_err());
    }

    #[test]
    fn invertibility_gate() {
        let singular = LinearMap::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(AffineMap::linear_only(singular), Err(Error::NearSingular { .. })));
        let tiny = LinearMap::diagonal(&[1.0, 1e-13]);
        assert!(AffineMap::linear_only(tiny).is_err());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(AffineMap::identity(2).inverse().unwrap(), AffineMap::identity(2));
        let f = diag(&[2.0, 2.0], &[1.0, 0.0]);
        let inv = f.inverse().unwrap();
        assert!(inv.max_abs_diff(&diag(&[0.5, 0.5], &[-0.5, 0.0])) < 1e-15);
        assert!(f.compose(&inv).unwrap().is_identity(1e-12));
        let f = diag(&[0.5, 2.0], &[0.0, 0.0]);
        assert!(f.inverse().unwrap().max_abs_diff(&diag(&[2.0, 0.5], &[0.0, 0.0])) < 1e-15);
    }

    #[test]
    fn apply_examples() {
        assert_eq!(AffineMap::identity(2).apply(&[3.0, -1.0]).unwrap(), vec![3.0, -1.0]);
        assert_eq!(diag(&[0.5, 2.0], &[0.0, 0.0]).apply(&[1.0, 1.0]).unwrap(), vec![0.5, 2.0]);
        let (_, psi2) = example4(0.5, 0.5, 0.5, 0.5);
        assert_eq!(psi2.apply(&[2.0, 0.0]).unwrap(), vec![2.0, 0.0]);
    }

    #[test]
    fn fixed_points() {
        let (_, psi2) = example4(0.5, 0.5, 0.5, 0.5);
        // x₀ = (1/(1−μ₃), 0).
        assert_eq!(psi2.fixed_point().unwrap(), vec![2.0, 0.0]);
        assert_eq!(AffineMap::identity(2).fixed_point(), Err(Error::NonUnique));
        assert_eq!(AffineMap::translation_by(&[1.0, 0.0]).fixed_point(), Err(Error::NoFixedPoint));
        // Eigenvalue 1 along one axis with consistent translation: a line of fixed points.
        assert_eq!(diag(&[1.0, 0.5], &[0.0, 3.0]).fixed_point(), Err(Error::NonUnique));
        assert_eq!(diag(&[1.0, 0.5], &[2.0, 3.0]).fixed_point(), Err(Error::NoFixedPoint));
    }

    #[test]
    fn linearization_examples() {
        let (_, psi2) = example4(0.5, 0.5, 0.5, 0.5);
        let (v, l) = psi2.linearize_at_fixed_point().unwrap();
        assert_eq!(v, vec![2.0, 0.0]);
        assert_eq!(l, LinearMap::diagonal(&[0.5, 0.5]));
        assert_eq!(AffineMap::identity(2).linearize_at_fixed_point(), Err(Error::NonUnique));

        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut tested = 0;
        while tested < 20 {
            let f = random_map(&mut rng);
            let rho = f.linear().spectral_radius().unwrap();
            if (rho - 1.0).abs() < 1e-2 || f.linear().identity_minus().determinant().abs() < 1e-2 {
                continue;
            }
            let (v, l) = f.linearize_at_fixed_point().unwrap();
            for _ in 0..100 {
                let x: Vec<f64> = (0..2).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let shifted: Vec<f64> = v.iter().zip(&x).map(|(a, b)| a + b).collect();
                let lhs = f.apply(&shifted).unwrap();
                let lx = l.apply(&x);
                for i in 0..2 {
                    assert!((lhs[i] - v[i] - lx[i]).abs() < 1e-12);
                }
            }
            tested += 1;
        }
    }

    #[test]
    fn binary_power_matches_repeated_composition() {
        let f = diag(&[0.5, 2.0], &[1.0, -1.0]);
        let mut acc = AffineMap::identity(2);
        for n in 0..20 {
            assert!(f.pow(n).unwrap().max_abs_diff(&acc) < 1e-9 * (1.0 + acc.linear().max_abs()));
            acc = acc.compose(&f).unwrap();
        }
        assert!(f.pow(-3).unwrap().compose(&f.pow(3).unwrap()).unwrap().is_identity(1e-12));
    }

    #[test]
    fn commutator_of_commuting_linear_maps_is_identity() {
        let f = diag(&[0.5, 3.0], &[0.0, 0.0]);
        let g = diag(&[2.0, 0.25], &[0.0, 0.0]);
        for n in 1..10 {
            assert!(commutator_h_n(&f, &g, n).unwrap().is_identity(1e-12));
        }
    }

    #[test]
    fn commutator_example_values() {
        let (psi1, psi2) = example4(0.5, 0.5, 0.5, 0.5);
        let h1 = commutator_h_n(&psi1, &psi2, 1).unwrap();
        let h2 = commutator_h_n(&psi1, &psi2, 2).unwrap();
        assert!(h1.max_abs_diff(&AffineMap::translation_by(&[-0.5, 0.0])) < 1e-15);
        assert!(h2.max_abs_diff(&AffineMap::translation_by(&[-1.125, 0.0])) < 1e-15);
        let delta1 = h2.compose(&h1.inverse().unwrap()).unwrap();
        assert!(delta1.max_abs_diff(&AffineMap::translation_by(&[-0.625, 0.0])) < 1e-15);
        assert!(commutator_h_n(&psi1, &psi2, 0).is_err());
    }

    #[test]
    fn evaluate_word_examples() {
        let (psi1, psi2) = example4(0.5, 0.5, 0.5, 0.5);
        let gens = GeneratorSet::new(2, vec![("psi1".into(), psi1), ("psi2".into(), psi2)]).unwrap();
        assert_eq!(gens.evaluate_word(&Word::empty()).unwrap(), AffineMap::identity(2));
        let w = Word::from_signed(&[(0, 1), (0, -1)]);
        assert!(gens.evaluate_word(&w).unwrap().is_identity(0.0));
        let w = Word::from_signed(&[(0, 1), (1, 1), (0, -1), (1, -1)]);
        let got = gens.evaluate_word(&w).unwrap();
        assert!(got.max_abs_diff(&AffineMap::translation_by(&[-0.5, 0.0])) < 1e-15);
        let bad = Word::from_signed(&[(2, 1)]);
        assert_eq!(gens.evaluate_word(&bad), Err(Error::BadIndex { index: 2, rank: 2 }));
    }

    #[test]
    fn generator_set_validation() {
        let f = AffineMap::identity(2);
        assert!(matches!(
            GeneratorSet::new(2, vec![("a".into(), f.clone()), ("a".into(), f.clone())]),
            Err(Error::DuplicateName(_))
        ));
        assert!(GeneratorSet::new(3, vec![("a".into(), f)]).is_err());
    }

    #[test]
    fn closed_form_commutator_grid() {
        for &mu1 in &[0.3, 0.5, 0.9] {
            for &mu3 in &[0.3, 0.5, 0.9] {
                for &nu in &[0.5, 1.5] {
                    let (psi1, psi2) = example4(mu1, 0.5, mu3, nu);
                    for n in 1..=30u32 {
                        let h = commutator_h_n(&psi1, &psi2, n).unwrap();
                        let k = n as i32;
                        let d = (mu1.powi(k) - 1.0) * (mu3.powi(k) - 1.0) / (mu3 - 1.0);
                        assert!(h.linear().max_abs_diff(&LinearMap::identity(2)) <= 1e-10);
                        assert!((h.translation()[0] - d).abs() <= 1e-10, "mu1={mu1} mu3={mu3} n={n}");
                        assert!(h.translation()[1].abs() <= 1e-10);
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn associativity(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (f, g, h) = (random_map(&mut rng), random_map(&mut rng), random_map(&mut rng));
            let left = f.compose(&g).unwrap().compose(&h).unwrap();
            let right = f.compose(&g.compose(&h).unwrap()).unwrap();
            prop_assert!(left.max_abs_diff(&right) < 1e-10);
        }

        #[test]
        fn inverse_law(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_map(&mut rng);
            let inv = f.inverse().unwrap();
            // Random determinants bottom out at 1e-3, so entries of the inverse
            // reach ~1e3; scale the tolerance accordingly.
            let tol = 1e-12 * (1.0 + inv.linear().max_abs()) * (1.0 + f.linear().max_abs());
            prop_assert!(f.compose(&inv).unwrap().is_identity(tol));
            prop_assert!(inv.compose(&f).unwrap().is_identity(tol));
        }
    }
}
