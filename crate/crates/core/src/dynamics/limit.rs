use alloc::vec::Vec;

use super::orbit::orbit_until;
use super::sampling::{sample_stream, uniform_in_ball};
use super::{orbit_with, ordered_map, Aabb, OrbitOptions, SpatialHash};
use crate::{distance, Error, GeneratorSet, Point};

/// Rejection attempts per sample before it is skipped.
const MAX_DRAWS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitVerdict {
    Positive,
    Negative,
    Inconclusive,
}

/// Parameters of the local limit-point test.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitParams {
    /// Radius of the sampled neighborhood around the candidate.
    pub radius: f64,
    pub n_samples: usize,
    /// Approach tolerance δ.
    pub delta: f64,
    pub seed: u64,
    /// Fewest tested samples that can support a positive verdict.
    pub min_samples: usize,
    /// Samples this close to the candidate's own orbit count as lying on it
    /// and are redrawn. Must not exceed `delta`.
    pub exclusion_radius: f64,
    /// Orbit budgets for each probe. When `window` is unset, probes are
    /// confined to the cube of half-width `4·radius` around the candidate.
    pub orbit: OrbitOptions,
}

impl LimitParams {
    pub fn new(radius: f64, n_samples: usize, max_len: usize, delta: f64, seed: u64) -> Self {
        Self {
            radius,
            n_samples,
            delta,
            seed,
            min_samples: 8.min(n_samples.max(1)),
            exclusion_radius: 1e-9,
            orbit: OrbitOptions::default().with_max_len(max_len).with_dedup_eps(delta / 4.0),
        }
    }
}

/// Outcome of following one sample's orbit toward a candidate point.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeOutcome {
    pub sample: Point,
    pub attracted: bool,
    /// Closest approach of the orbit sample to the candidate.
    pub min_distance: f64,
    /// Word length at the closest approach.
    pub word_len: usize,
    /// The orbit was exhausted without pruning, so a miss is definitive.
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LimitPointEvidence {
    pub candidate: Point,
    pub neighborhood_radius: f64,
    pub samples_tested: usize,
    pub samples_attracted: usize,
    pub approach_tolerance: f64,
    pub verdict: LimitVerdict,
    pub seed: u64,
    /// Samples for which no admissible point was drawn.
    pub skipped: usize,
    pub probes: Vec<ProbeOutcome>,
}

/// Follows the orbit of `sample` breadth-first until it enters the
/// `delta`-ball of `candidate` or the budget runs out.
pub fn probe_limit_point(
    gens: &GeneratorSet,
    sample: &[f64],
    candidate: &[f64],
    delta: f64,
    options: &OrbitOptions,
) -> Result<ProbeOutcome, Error> {
    let mut best = (f64::INFINITY, 0usize);
    let result = orbit_until(sample, gens, options, |_, depth, p| {
        let d = distance(p, candidate);
        if d < best.0 {
            best = (d, depth);
        }
        d < delta
    });
    let complete = match result {
        Ok(o) => o.is_complete(),
        Err(Error::BudgetExceeded { .. }) => false,
        Err(e) => return Err(e),
    };
    Ok(ProbeOutcome {
        sample: sample.to_vec(),
        attracted: best.0 < delta,
        min_distance: best.0,
        word_len: best.1,
        complete,
    })
}

/// Tests whether `candidate` is a local limit point of the group: every
/// sampled orbit from its neighborhood (excluding the candidate's own orbit)
/// must come within `delta` of it.
pub fn detect_local_limit_point(
    gens: &GeneratorSet,
    candidate: &[f64],
    params: &LimitParams,
) -> Result<LimitPointEvidence, Error> {
    if candidate.len() != gens.dim() {
        return Err(Error::DimensionMismatch { expected: gens.dim(), found: candidate.len() });
    }
    if !(params.radius > params.delta && params.delta > 0.0) {
        return Err(Error::InvalidArgument("limit-point test needs radius > delta > 0"));
    }
    let mut options = params.orbit.clone();
    if options.window.is_none() {
        options.window = Some(Aabb::centered(candidate, 4.0 * params.radius));
    }

    // Samples on the candidate's own orbit are excluded.
    let own = match orbit_with(candidate, gens, &options) {
        Ok(o) => o,
        Err(Error::BudgetExceeded { .. }) => orbit_with(candidate, gens, &options.clone().with_max_len(8))?,
        Err(e) => return Err(e),
    };
    let mut exclusion = SpatialHash::new(gens.dim(), params.delta);
    for p in own.points() {
        exclusion.insert(p);
    }

    let indices: Vec<u64> = (0..params.n_samples as u64).collect();
    let outcomes = ordered_map(&indices, |_, &i| -> Result<Option<ProbeOutcome>, Error> {
        let mut rng = sample_stream(params.seed, i);
        for _ in 0..MAX_DRAWS {
            let y = uniform_in_ball(&mut rng, candidate, params.radius);
            if exclusion.nearest_within(&y, params.exclusion_radius.min(params.delta)).is_none() {
                return probe_limit_point(gens, &y, candidate, params.delta, &options).map(Some);
            }
        }
        Ok(None)
    });

    let mut probes = Vec::new();
    let mut skipped = 0;
    for outcome in outcomes {
        match outcome? {
            Some(p) => probes.push(p),
            None => skipped += 1,
        }
    }
    let tested = probes.len();
    let attracted = probes.iter().filter(|p| p.attracted).count();
    let definitive_miss = probes.iter().any(|p| !p.attracted && p.complete);
    let verdict = if tested >= params.min_samples && attracted == tested {
        LimitVerdict::Positive
    } else if tested > 0 && (attracted == 0 || definitive_miss) {
        LimitVerdict::Negative
    } else {
        LimitVerdict::Inconclusive
    };
    Ok(LimitPointEvidence {
        candidate: candidate.to_vec(),
        neighborhood_radius: params.radius,
        samples_tested: tested,
        samples_attracted: attracted,
        approach_tolerance: params.delta,
        verdict,
        seed: params.seed,
        skipped,
        probes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::fixtures;

    #[test]
    fn doubling_map_has_origin_as_limit_point() {
        let params = LimitParams::new(1.0, 20, 40, 1e-3, 7);
        let ev = detect_local_limit_point(&fixtures::example3(), &[0.0], &params).unwrap();
        assert_eq!(ev.verdict, LimitVerdict::Positive);
        assert_eq!(ev.samples_attracted, ev.samples_tested);
        assert_eq!(ev.samples_tested, 20);
    }

    #[test]
    fn example1_origin_is_not_a_limit_point() {
        let params = LimitParams::new(1.0, 20, 40, 1e-2, 7);
        let ev = detect_local_limit_point(&fixtures::example1(), &[0.0, 0.0], &params).unwrap();
        assert_eq!(ev.verdict, LimitVerdict::Negative);
        assert!(ev.samples_attracted < ev.samples_tested);
    }

    #[test]
    fn example1_probe_from_one_one_stays_away() {
        let options = OrbitOptions::default().with_max_len(60);
        let probe = probe_limit_point(&fixtures::example1(), &[1.0, 1.0], &[0.0, 0.0], 1e-2, &options).unwrap();
        assert!(!probe.attracted);
        // min over n of |(2⁻ⁿ, 2ⁿ)| is attained at n = 0.
        assert!((probe.min_distance - core::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn example2_origin_is_a_limit_point() {
        let params = LimitParams::new(1.0, 12, 12, 0.05, 3);
        let ev = detect_local_limit_point(&fixtures::example2(), &[0.0, 0.0], &params).unwrap();
        assert_eq!(ev.verdict, LimitVerdict::Positive);
    }

    #[test]
    fn rejects_bad_radii() {
        let params = LimitParams::new(0.01, 4, 4, 0.1, 0);
        assert!(detect_local_limit_point(&fixtures::example3(), &[0.0], &params).is_err());
    }
}
