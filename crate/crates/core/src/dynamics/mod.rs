//! Orbits, contraction certificates, limit points and attractor detection for
//! finitely generated subgroups of Aff(ℝ^q).
//!
//! Attractor candidates come from two sources only: fixed points of words
//! whose linear part contracts (a [`Certificate`]), and fixed points of short
//! words that pass an empirical limit-point test. Everything else is evidence
//! gathered by seeded sampling, so a `None` from [`detect_attractor`] means "no
//! candidate survived", not a proof that no attractor exists.

mod ball;
mod certificate;
mod detect;
mod evidence;
mod hausdorff;
mod limit;
mod orbit;
mod sampling;
mod spatial;
mod subspace;

use alloc::vec::Vec;

pub use ball::{ball_size, enumerate_reduced_words, DEFAULT_WORD_CAP};
pub use certificate::{contraction_certificate, contraction_certificate_capped, Certificate, CertificateKind};
pub use detect::{detect_attractor, AttractorReport, DetectParams};
pub use evidence::{
    global_check, minimality_check, verify_attractor, AttractorSet, BasinEvidence, EvidenceParams, EvidenceRoute,
    GlobalEvidence, MinimalityEvidence, MinimalityFailure, SampleEvidence, SampleRegion,
};
pub use hausdorff::hausdorff_distance;
pub use limit::{
    detect_local_limit_point, probe_limit_point, LimitParams, LimitPointEvidence, LimitVerdict, ProbeOutcome,
};
pub use orbit::{orbit, orbit_with, OrbitOptions, OrbitSample};
pub use sampling::sample_stream;
pub use spatial::SpatialHash;
pub use subspace::{fit_affine_subspace, AffineSubspace};

use crate::Point;

/// Default spatial deduplication radius.
pub const DEFAULT_DEDUP_EPS: f64 = 1e-4;
/// Default slack below 1 required of a contraction certificate.
pub const DEFAULT_TOL_CERT: f64 = 1e-6;
/// Default density/approach tolerance for attractor evidence.
pub const DEFAULT_EPSILON: f64 = 0.05;
/// Default word-length budget of the certificate search.
pub const DEFAULT_CERT_MAX_LEN: usize = 12;
/// Default word-length budget of orbit expansion.
pub const DEFAULT_ORBIT_MAX_LEN: usize = 60;
/// Default cap on stored orbit points.
pub const DEFAULT_POINT_CAP: usize = 1_000_000;
/// Orbit points beyond this norm are counted as escapes and not expanded.
pub const ESCAPE_RADIUS: f64 = 1e9;

/// Axis-aligned box `[lo₁,hi₁] × … × [lo_q,hi_q]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Aabb {
    pub lo: Point,
    pub hi: Point,
}

impl Aabb {
    pub fn new(lo: Point, hi: Point) -> Self {
        debug_assert_eq!(lo.len(), hi.len());
        Self { lo, hi }
    }

    /// The cube of half-width `half_width` around `center`.
    pub fn centered(center: &[f64], half_width: f64) -> Self {
        Self {
            lo: center.iter().map(|c| c - half_width).collect(),
            hi: center.iter().map(|c| c + half_width).collect(),
        }
    }

    /// Smallest box containing every point; `None` for an empty set.
    pub fn bounding<'a>(points: impl IntoIterator<Item = &'a [f64]>) -> Option<Self> {
        let mut iter = points.into_iter();
        let first = iter.next()?;
        let mut lo = first.to_vec();
        let mut hi = first.to_vec();
        for p in iter {
            for i in 0..lo.len() {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        Some(Self { lo, hi })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn inflate(&self, margin: f64) -> Self {
        Self { lo: self.lo.iter().map(|v| v - margin).collect(), hi: self.hi.iter().map(|v| v + margin).collect() }
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (lo, hi))| *lo <= *v && *v <= *hi)
    }

    pub fn is_valid(&self) -> bool {
        self.lo.len() == self.hi.len() && self.lo.iter().zip(&self.hi).all(|(lo, hi)| lo <= hi)
    }

    /// Grid points `lo + k·step` (per axis, up to and including `hi`).
    pub fn grid(&self, step: f64) -> Vec<Point> {
        let counts: Vec<usize> =
            self.lo.iter().zip(&self.hi).map(|(lo, hi)| libm::floor((hi - lo) / step + 1e-9) as usize + 1).collect();
        let total: usize = counts.iter().product();
        let mut out = Vec::with_capacity(total);
        for mut k in 0..total {
            let mut p = Vec::with_capacity(self.dim());
            for (axis, count) in counts.iter().enumerate() {
                let idx = k % count;
                k /= count;
                p.push((self.lo[axis] + idx as f64 * step).min(self.hi[axis]));
            }
            out.push(p);
        }
        out
    }
}

/// Maps `f` over `items` preserving order, fanning out over rayon when the
/// `parallel` feature is on.
#[cfg(feature = "parallel")]
pub(crate) fn ordered_map<T: Sync, R: Send>(items: &[T], f: impl Fn(usize, &T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().enumerate().map(|(i, t)| f(i, t)).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn ordered_map<T, R>(items: &[T], f: impl Fn(usize, &T) -> R) -> Vec<R> {
    items.iter().enumerate().map(|(i, t)| f(i, t)).collect()
}

#[cfg(test)]
pub(crate) mod fixtures {
    use alloc::string::ToString;
    use alloc::vec;

    use crate::{AffineMap, GeneratorSet, LinearMap};

    fn diag(d: &[f64], t: &[f64]) -> AffineMap {
        AffineMap::new(LinearMap::diagonal(d), t.to_vec()).unwrap()
    }

    /// ⟨diag(1/2, 2)⟩ on ℝ².
    pub fn example1() -> GeneratorSet {
        GeneratorSet::new(2, vec![("fA".to_string(), diag(&[0.5, 2.0], &[0.0, 0.0]))]).unwrap()
    }

    /// f₀ = λx, f₁ = λ(x − e₁) + e₁, f₂ = λ(x − e₂) + e₂ with λ = 1/2.
    pub fn example2() -> GeneratorSet {
        GeneratorSet::new(
            2,
            vec![
                ("a0".to_string(), diag(&[0.5, 0.5], &[0.0, 0.0])),
                ("a1".to_string(), diag(&[0.5, 0.5], &[0.5, 0.0])),
                ("a2".to_string(), diag(&[0.5, 0.5], &[0.0, 0.5])),
            ],
        )
        .unwrap()
    }

    /// ⟨x ↦ 2x⟩ on ℝ.
    pub fn example3() -> GeneratorSet {
        GeneratorSet::new(1, vec![("gamma".to_string(), diag(&[2.0], &[0.0]))]).unwrap()
    }

    /// ψ₁ = ⟨diag(½,½),0⟩, ψ₂ = ⟨diag(½,½),(1,0)⟩.
    pub fn example4() -> GeneratorSet {
        GeneratorSet::new(
            2,
            vec![
                ("psi1".to_string(), diag(&[0.5, 0.5], &[0.0, 0.0])),
                ("psi2".to_string(), diag(&[0.5, 0.5], &[1.0, 0.0])),
            ],
        )
        .unwrap()
    }
}
