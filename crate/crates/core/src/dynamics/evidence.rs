use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::orbit::orbit_until;
use super::sampling::{sample_stream, uniform_in_ball, uniform_in_box};
use super::{ordered_map, Aabb, Certificate, OrbitOptions, OrbitSample, SpatialHash};
use crate::word::Word;
use crate::{distance, AffineMap, Error, GeneratorSet, Point};

const MAX_DRAWS: usize = 200;
/// Point cap for the orbit of a single evidence sample.
const EVIDENCE_POINT_CAP: usize = 200_000;

/// A finite sample of a candidate attractor.
///
/// When the sample was produced as an orbit, `origin` and `words` record the
/// provenance: `points[i] = words[i](origin)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AttractorSet {
    points: Vec<Point>,
    origin: Option<Point>,
    words: Vec<Word>,
}

impl AttractorSet {
    pub fn from_points(points: Vec<Point>) -> Result<Self, Error> {
        let dim = points.first().ok_or(Error::EmptySet)?.len();
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
        }
        Ok(Self { points, origin: None, words: Vec::new() })
    }

    pub fn from_orbit(sample: &OrbitSample) -> Self {
        let (points, words) = sample.entries().map(|(p, w)| (p.to_vec(), w)).unzip();
        Self { points, origin: Some(sample.base().to_vec()), words }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn origin(&self) -> Option<&[f64]> {
        self.origin.as_deref()
    }

    pub fn word(&self, index: usize) -> Option<&Word> {
        self.words.get(index)
    }

    /// Greedy `eps`-net in storage order: indices of points no two of which
    /// are within `eps`, such that every point is within `eps` of one of them.
    pub fn net(&self, eps: f64) -> Vec<usize> {
        let mut hash = SpatialHash::new(self.dim(), eps);
        let mut out = Vec::new();
        for (i, p) in self.points.iter().enumerate() {
            if hash.nearest_within(p, eps).is_none() {
                hash.insert(p);
                out.push(i);
            }
        }
        out
    }

    pub fn bounding_box(&self) -> Aabb {
        Aabb::bounding(self.points.iter().map(Vec::as_slice)).expect("attractor sets are nonempty")
    }
}

/// Parameters shared by the basin, minimality and global checks.
#[derive(Clone, Debug, PartialEq)]
pub struct EvidenceParams {
    /// Density tolerance ε.
    pub epsilon: f64,
    pub n_samples: usize,
    /// Word-length budget per sample.
    pub max_len: usize,
    pub seed: u64,
    /// Budgets of the breadth-first route. Without a window, orbits are
    /// confined to the sampled region joined with the set's bounding box,
    /// inflated by `window_margin`.
    pub orbit: OrbitOptions,
    pub window_margin: f64,
}

impl EvidenceParams {
    pub fn new(epsilon: f64, n_samples: usize, max_len: usize, seed: u64) -> Self {
        Self {
            epsilon,
            n_samples,
            max_len,
            seed,
            orbit: OrbitOptions::default()
                .with_max_len(max_len)
                .with_dedup_eps(epsilon / 4.0)
                .with_point_cap(EVIDENCE_POINT_CAP),
            window_margin: 1.0,
        }
    }
}

/// How sample orbits were followed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvidenceRoute {
    /// Iterate the certificate word toward its fixed point, then apply the
    /// provenance word of each net point.
    Transport,
    /// Breadth-first orbit expansion.
    Orbit,
}

/// Where evidence samples were drawn.
#[derive(Clone, Debug, PartialEq)]
pub enum SampleRegion {
    Neighborhood { radius: f64 },
    Domain(Aabb),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleEvidence {
    pub point: Point,
    /// Closest approach to the set.
    pub min_distance: f64,
    /// Largest distance from a net point to the orbit sample.
    pub worst_gap: f64,
    /// Longest word needed to approach the net points.
    pub word_len: usize,
    pub attracted: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasinEvidence {
    pub region: SampleRegion,
    pub route: EvidenceRoute,
    pub epsilon: f64,
    pub net_size: usize,
    pub seed: u64,
    pub samples: Vec<SampleEvidence>,
    /// Samples for which every draw fell into the ε-thickening of the set.
    pub skipped: usize,
}

impl BasinEvidence {
    pub fn tested(&self) -> usize {
        self.samples.len()
    }

    pub fn attracted(&self) -> usize {
        self.samples.iter().filter(|s| s.attracted).count()
    }

    /// Every tested sample was attracted. Vacuously true when the set's
    /// thickening swallowed the whole region, which `skipped` records.
    pub fn all_attracted(&self) -> bool {
        self.samples.iter().all(|s| s.attracted)
    }

    pub fn worst_gap(&self) -> f64 {
        self.samples.iter().map(|s| s.worst_gap).fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinimalityFailure {
    /// Net point whose orbit misses part of the net.
    pub net_index: usize,
    pub uncovered: usize,
    pub worst_gap: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinimalityEvidence {
    pub route: EvidenceRoute,
    pub epsilon: f64,
    pub net_size: usize,
    pub failures: Vec<MinimalityFailure>,
    pub minimal: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GlobalEvidence {
    pub domain: Aabb,
    pub basin: BasinEvidence,
    pub global: bool,
}

struct Net {
    points: Vec<Point>,
    words: Option<Vec<Word>>,
    hash: SpatialHash,
}

impl Net {
    fn build(k: &AttractorSet, eps: f64, transport: bool) -> Self {
        let indices = k.net(eps);
        let points: Vec<Point> = indices.iter().map(|&i| k.points[i].clone()).collect();
        let words = transport.then(|| indices.iter().map(|&i| k.words[i].clone()).collect());
        let mut hash = SpatialHash::new(k.dim(), eps);
        for p in &points {
            hash.insert(p);
        }
        Self { points, words, hash }
    }

    fn len(&self) -> usize {
        self.points.len()
    }
}

struct Transport {
    map: AffineMap,
    len: usize,
}

/// The transport route applies when the set is the orbit of the
/// certificate's fixed point.
fn transport_for(
    k: &AttractorSet,
    gens: &GeneratorSet,
    cert: Option<&Certificate>,
) -> Result<Option<Transport>, Error> {
    let (Some(cert), Some(origin)) = (cert, k.origin()) else { return Ok(None) };
    if k.words.len() != k.len() || cert.word.is_empty() {
        return Ok(None);
    }
    let scale = 1.0 + crate::norm(&cert.fixed_point);
    if distance(origin, &cert.fixed_point) > 1e-9 * scale {
        return Ok(None);
    }
    Ok(Some(Transport { map: gens.evaluate_word(&cert.word)?, len: cert.word.len() }))
}

/// Per-net-point gap and word length for the orbit of `y`.
type Gaps = (Vec<f64>, Vec<usize>);

fn transport_gaps(gens: &GeneratorSet, t: &Transport, net: &Net, y: &[f64], max_len: usize) -> Result<Gaps, Error> {
    let words = net.words.as_ref().expect("transport nets carry words");
    let mut iterates = vec![y.to_vec()];
    for _ in 0..max_len / t.len {
        let last = iterates.last().expect("nonempty");
        let next = t.map.map_point(last);
        let settled = next == *last;
        iterates.push(next);
        if settled {
            break;
        }
    }
    let mut gaps = vec![f64::INFINITY; net.len()];
    let mut lens = vec![0; net.len()];
    for (i, (z, g)) in net.points.iter().zip(words).enumerate() {
        if g.len() > max_len {
            lens[i] = g.len();
            continue;
        }
        let k = ((max_len - g.len()) / t.len).min(iterates.len() - 1);
        let p = gens.apply_word(g, &iterates[k])?;
        gaps[i] = distance(&p, z);
        lens[i] = g.len() + k * t.len;
    }
    Ok((gaps, lens))
}

fn orbit_gaps(gens: &GeneratorSet, net: &Net, y: &[f64], options: &OrbitOptions, eps: f64) -> Result<Gaps, Error> {
    let mut gaps = vec![f64::INFINITY; net.len()];
    let mut lens = vec![0; net.len()];
    let mut uncovered = net.len();
    let mut seen: Vec<(Point, usize)> = Vec::new();
    let result = orbit_until(y, gens, options, |_, depth, p| {
        seen.push((p.to_vec(), depth));
        net.hash.for_each_near(p, |i, d| {
            if d < gaps[i] {
                if gaps[i] > eps && d <= eps {
                    uncovered -= 1;
                }
                gaps[i] = d;
                lens[i] = depth;
            }
        });
        uncovered == 0
    });
    match result {
        Ok(_) | Err(Error::BudgetExceeded { .. }) => {}
        Err(e) => return Err(e),
    }
    for (i, z) in net.points.iter().enumerate() {
        if gaps[i] > eps {
            for (p, depth) in &seen {
                let d = distance(p, z);
                if d < gaps[i] {
                    gaps[i] = d;
                    lens[i] = *depth;
                }
            }
        }
    }
    Ok((gaps, lens))
}

fn summarize(point: Point, (gaps, lens): Gaps, eps: f64) -> SampleEvidence {
    let worst_gap = gaps.iter().copied().fold(0.0, f64::max);
    let min_distance = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    let word_len = lens.iter().copied().max().unwrap_or(0);
    SampleEvidence { point, min_distance, worst_gap, word_len, attracted: worst_gap <= eps }
}

fn check_inputs(k: &AttractorSet, gens: &GeneratorSet, params: &EvidenceParams) -> Result<(), Error> {
    if k.is_empty() {
        return Err(Error::EmptySet);
    }
    if k.dim() != gens.dim() {
        return Err(Error::DimensionMismatch { expected: gens.dim(), found: k.dim() });
    }
    if !(params.epsilon > 0.0) {
        return Err(Error::InvalidArgument("epsilon must be positive"));
    }
    Ok(())
}

fn basin(
    k: &AttractorSet,
    gens: &GeneratorSet,
    region: SampleRegion,
    params: &EvidenceParams,
    cert: Option<&Certificate>,
) -> Result<BasinEvidence, Error> {
    check_inputs(k, gens, params)?;
    let eps = params.epsilon;
    let transport = transport_for(k, gens, cert)?;
    let net = Net::build(k, eps, transport.is_some());
    let mut thickening = SpatialHash::new(k.dim(), eps);
    for p in k.points() {
        thickening.insert(p);
    }
    let mut options = params.orbit.clone();
    if options.window.is_none() {
        let reach = match &region {
            SampleRegion::Neighborhood { radius } => k.bounding_box().inflate(*radius),
            SampleRegion::Domain(d) => hull(&k.bounding_box(), d),
        };
        options.window = Some(reach.inflate(params.window_margin));
    }

    let indices: Vec<u64> = (0..params.n_samples as u64).collect();
    let outcomes = ordered_map(&indices, |_, &i| -> Result<Option<SampleEvidence>, Error> {
        let mut rng = sample_stream(params.seed, i);
        for _ in 0..MAX_DRAWS {
            let y = match &region {
                SampleRegion::Neighborhood { radius } => {
                    let center = &k.points[rng.gen_range(0..k.len())];
                    uniform_in_ball(&mut rng, center, *radius)
                }
                SampleRegion::Domain(d) => uniform_in_box(&mut rng, d),
            };
            if thickening.nearest_within(&y, eps).is_some() {
                continue;
            }
            let gaps = match &transport {
                Some(t) => transport_gaps(gens, t, &net, &y, params.max_len)?,
                None => orbit_gaps(gens, &net, &y, &options, eps)?,
            };
            return Ok(Some(summarize(y, gaps, eps)));
        }
        Ok(None)
    });
    let mut samples = Vec::new();
    let mut skipped = 0;
    for outcome in outcomes {
        match outcome? {
            Some(s) => samples.push(s),
            None => skipped += 1,
        }
    }
    Ok(BasinEvidence {
        region,
        route: if transport.is_some() { EvidenceRoute::Transport } else { EvidenceRoute::Orbit },
        epsilon: eps,
        net_size: net.len(),
        seed: params.seed,
        samples,
        skipped,
    })
}

fn hull(a: &Aabb, b: &Aabb) -> Aabb {
    Aabb::new(
        a.lo.iter().zip(&b.lo).map(|(x, y)| x.min(*y)).collect(),
        a.hi.iter().zip(&b.hi).map(|(x, y)| x.max(*y)).collect(),
    )
}

/// Samples the `neighborhood_radius`-neighborhood of `k` (outside its
/// ε-thickening) and checks that each sample's orbit comes ε-close to every
/// point of an ε-net of `k`.
///
/// Passing the certificate that produced `k` enables the transport route:
/// the certificate word drives every sample toward its fixed point, whose
/// orbit is `k`.
pub fn verify_attractor(
    k: &AttractorSet,
    gens: &GeneratorSet,
    neighborhood_radius: f64,
    params: &EvidenceParams,
    cert: Option<&Certificate>,
) -> Result<BasinEvidence, Error> {
    if !(neighborhood_radius > 0.0) {
        return Err(Error::InvalidArgument("neighborhood radius must be positive"));
    }
    basin(k, gens, SampleRegion::Neighborhood { radius: neighborhood_radius }, params, cert)
}

/// Basin check with samples drawn from the whole `domain` box.
pub fn global_check(
    k: &AttractorSet,
    gens: &GeneratorSet,
    domain: &Aabb,
    params: &EvidenceParams,
    cert: Option<&Certificate>,
) -> Result<GlobalEvidence, Error> {
    if !domain.is_valid() || domain.dim() != gens.dim() {
        return Err(Error::InvalidArgument("domain must be a nonempty box of the transversal dimension"));
    }
    let basin = basin(k, gens, SampleRegion::Domain(domain.clone()), params, cert)?;
    let global = basin.tested() > 0 && basin.all_attracted();
    Ok(GlobalEvidence { domain: domain.clone(), basin, global })
}

/// Checks that the orbit of each point of an ε-net of `k` comes ε-close to
/// every other net point.
pub fn minimality_check(
    k: &AttractorSet,
    gens: &GeneratorSet,
    params: &EvidenceParams,
    cert: Option<&Certificate>,
) -> Result<MinimalityEvidence, Error> {
    check_inputs(k, gens, params)?;
    let eps = params.epsilon;
    let transport = transport_for(k, gens, cert)?;
    let net = Net::build(k, eps, transport.is_some());
    let mut options = params.orbit.clone();
    if options.window.is_none() {
        options.window = Some(k.bounding_box().inflate(params.window_margin));
    }
    let outcomes = ordered_map(&net.points, |_, z| -> Result<Gaps, Error> {
        match &transport {
            Some(t) => transport_gaps(gens, t, &net, z, params.max_len),
            None => orbit_gaps(gens, &net, z, &options, eps),
        }
    });
    let mut failures = Vec::new();
    for (net_index, outcome) in outcomes.into_iter().enumerate() {
        let (gaps, _) = outcome?;
        let uncovered = gaps.iter().filter(|g| **g > eps).count();
        if uncovered > 0 {
            let worst_gap = gaps.iter().copied().fold(0.0, f64::max);
            failures.push(MinimalityFailure { net_index, uncovered, worst_gap });
        }
    }
    Ok(MinimalityEvidence {
        route: if transport.is_some() { EvidenceRoute::Transport } else { EvidenceRoute::Orbit },
        epsilon: eps,
        net_size: net.len(),
        minimal: failures.is_empty(),
        failures,
    })
}
