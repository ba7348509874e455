use alloc::vec::Vec;

use super::ball::enumerate_reduced_words;
use super::certificate::contraction_certificate_capped;
use super::{
    detect_local_limit_point, fit_affine_subspace, global_check, minimality_check, orbit_with, verify_attractor, Aabb,
    AffineSubspace, AttractorSet, BasinEvidence, Certificate, EvidenceParams, GlobalEvidence, LimitParams,
    LimitPointEvidence, LimitVerdict, MinimalityEvidence, OrbitOptions, DEFAULT_CERT_MAX_LEN, DEFAULT_EPSILON,
    DEFAULT_TOL_CERT, DEFAULT_WORD_CAP,
};
use crate::{distance, Error, GeneratorSet, Point};

/// Budgets, tolerances and sampling parameters of [`detect_attractor`].
#[derive(Clone, Debug, PartialEq)]
pub struct DetectParams {
    pub seed: u64,
    pub cert_max_len: usize,
    pub tol_cert: f64,
    /// Budgets of the orbit sample that becomes the candidate set.
    pub orbit: OrbitOptions,
    /// The candidate set is confined to the cube of this half-width around
    /// its seed point.
    pub window_radius: f64,
    pub epsilon: f64,
    pub neighborhood_radius: f64,
    pub n_samples: usize,
    pub evidence_max_len: usize,
    /// Sampled domain of the global check; skipped when `None`.
    pub domain: Option<Aabb>,
    /// Longest word whose fixed point is tried when no certificate exists.
    pub candidate_max_len: usize,
    pub subspace_tol: f64,
}

impl Default for DetectParams {
    fn default() -> Self {
        Self {
            seed: 0,
            cert_max_len: DEFAULT_CERT_MAX_LEN,
            tol_cert: DEFAULT_TOL_CERT,
            orbit: OrbitOptions::default(),
            window_radius: 2.0,
            epsilon: DEFAULT_EPSILON,
            neighborhood_radius: 1.0,
            n_samples: 32,
            evidence_max_len: 60,
            domain: None,
            candidate_max_len: 2,
            subspace_tol: 1e-6,
        }
    }
}

impl DetectParams {
    fn evidence(&self) -> EvidenceParams {
        EvidenceParams::new(self.epsilon, self.n_samples, self.evidence_max_len, self.seed)
    }
}

/// A detected attractor together with the evidence gathered for it.
#[derive(Clone, Debug, PartialEq)]
pub struct AttractorReport {
    pub attractor: AttractorSet,
    /// Best-fitting affine subspace; `None` for a single point.
    pub subspace: Option<AffineSubspace>,
    pub certificate: Option<Certificate>,
    /// Limit-point evidence when the candidate came from the fallback route.
    pub limit_point: Option<LimitPointEvidence>,
    pub basin: BasinEvidence,
    pub minimality: MinimalityEvidence,
    pub global_evidence: Option<GlobalEvidence>,
    /// Fingerprint of the generator set the report was computed from.
    pub fingerprint: u64,
    pub seed: u64,
}

impl AttractorReport {
    pub fn minimal(&self) -> bool {
        self.minimality.minimal
    }

    pub fn global(&self) -> bool {
        self.global_evidence.as_ref().is_some_and(|g| g.global)
    }
}

/// Certificate first: the orbit of the certified fixed point is the
/// candidate set. Without a certificate, fixed points of short words that
/// pass the limit-point test are tried in shortlex order. Returns `None` when
/// no candidate survives basin verification.
pub fn detect_attractor(gens: &GeneratorSet, params: &DetectParams) -> Result<Option<AttractorReport>, Error> {
    if gens.rank() == 0 {
        return Ok(None);
    }
    if let Some(cert) = contraction_certificate_capped(gens, params.cert_max_len, params.tol_cert, DEFAULT_WORD_CAP)? {
        let k = candidate_set(gens, &cert.fixed_point, params)?;
        return assemble(gens, k, Some(cert), None, params);
    }

    let mut tried: Vec<Point> = Vec::new();
    for word in enumerate_reduced_words(gens.rank(), params.candidate_max_len, DEFAULT_WORD_CAP)? {
        let Ok(candidate) = gens.evaluate_word(&word)?.fixed_point() else { continue };
        if tried.iter().any(|t| distance(t, &candidate) < params.orbit.dedup_eps) {
            continue;
        }
        tried.push(candidate.clone());
        let mut limit = LimitParams::new(
            params.neighborhood_radius,
            params.n_samples,
            params.evidence_max_len,
            params.epsilon,
            params.seed,
        );
        limit.orbit.window =
            Some(Aabb::centered(&candidate, params.window_radius.max(4.0 * params.neighborhood_radius)));
        let evidence = detect_local_limit_point(gens, &candidate, &limit)?;
        if evidence.verdict != LimitVerdict::Positive {
            continue;
        }
        let k = candidate_set(gens, &candidate, params)?;
        if let Some(report) = assemble(gens, k, None, Some(evidence), params)? {
            return Ok(Some(report));
        }
    }
    Ok(None)
}

fn candidate_set(gens: &GeneratorSet, seed_point: &[f64], params: &DetectParams) -> Result<AttractorSet, Error> {
    let options = params.orbit.clone().with_window(Some(Aabb::centered(seed_point, params.window_radius)));
    Ok(AttractorSet::from_orbit(&orbit_with(seed_point, gens, &options)?))
}

fn assemble(
    gens: &GeneratorSet,
    k: AttractorSet,
    certificate: Option<Certificate>,
    limit_point: Option<LimitPointEvidence>,
    params: &DetectParams,
) -> Result<Option<AttractorReport>, Error> {
    let evidence = params.evidence();
    let basin = verify_attractor(&k, gens, params.neighborhood_radius, &evidence, certificate.as_ref())?;
    if !basin.all_attracted() {
        return Ok(None);
    }
    let minimality = minimality_check(&k, gens, &evidence, certificate.as_ref())?;
    let global_evidence = match &params.domain {
        Some(domain) => Some(global_check(&k, gens, domain, &evidence, certificate.as_ref())?),
        None => None,
    };
    let subspace = match fit_affine_subspace(k.points(), params.subspace_tol) {
        Ok(fit) => Some(fit),
        Err(Error::Degenerate) => None,
        Err(e) => return Err(e),
    };
    Ok(Some(AttractorReport {
        attractor: k,
        subspace,
        certificate,
        limit_point,
        basin,
        minimality,
        global_evidence,
        fingerprint: gens.fingerprint(),
        seed: params.seed,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::fixtures;
    use alloc::vec;

    fn params(domain: f64) -> DetectParams {
        DetectParams { domain: Some(Aabb::centered(&[0.0, 0.0], domain)), n_samples: 16, ..DetectParams::default() }
    }

    #[test]
    fn example1_has_no_attractor() {
        assert!(detect_attractor(&fixtures::example1(), &params(5.0)).unwrap().is_none());
    }

    #[test]
    fn doubling_map_origin_is_global_and_minimal() {
        let p = DetectParams {
            domain: Some(Aabb::centered(&[0.0], 10.0)),
            neighborhood_radius: 10.0,
            evidence_max_len: 40,
            ..DetectParams::default()
        };
        let report = detect_attractor(&fixtures::example3(), &p).unwrap().unwrap();
        assert_eq!(report.attractor.points(), &[vec![0.0]]);
        assert!(report.subspace.is_none());
        assert!(report.minimal());
        assert!(report.global());
    }

    #[test]
    fn example4_attractor_is_the_x_axis() {
        let report = detect_attractor(&fixtures::example4(), &params(5.0)).unwrap().unwrap();
        let fit = report.subspace.as_ref().unwrap();
        assert_eq!(fit.dim, 1);
        assert!(fit.residual < 1e-6);
        assert_eq!(fit.basis, vec![vec![1.0, 0.0]]);
        assert_eq!(fit.base[1], 0.0);
        assert!(report.minimal());
        assert!(report.global());
        assert_eq!(report.fingerprint, fixtures::example4().fingerprint());
    }

    #[test]
    fn certificate_point_lies_in_the_set() {
        let report = detect_attractor(&fixtures::example4(), &params(5.0)).unwrap().unwrap();
        let x = &report.certificate.as_ref().unwrap().fixed_point;
        assert!(report.attractor.points().iter().any(|p| distance(p, x) <= 1e-4));
    }
}
