//! Suspended foliations `Sus(T, B, ρ)` over surfaces and wedge-type bases,
//! modeled through their transversal dynamics on `T = ℝ^q`.
//!
//! The foliated manifold is never built. A [`SuspendedFoliation`] is a base
//! descriptor plus a validated representation of `π₁(B)` in Aff(ℝ^q); its
//! global holonomy group is the image of the representation, and leaves
//! correspond to orbits of that group.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::dynamics::{orbit_with, AttractorReport, OrbitOptions, SpatialHash};
use crate::word::{Letter, Word};
use crate::{AffineMap, Error, GeneratorSet, Point};

/// Relator images must match the identity to this tolerance, entrywise.
pub const RELATOR_TOLERANCE: f64 = 1e-9;
/// Accumulation witnesses report at most this many points.
const MAX_WITNESSES: usize = 8;

/// A finite group presentation `⟨names | relators⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    names: Vec<String>,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(names: Vec<String>, relators: Vec<Word>) -> Result<Self, Error> {
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::DuplicateName(name.clone()));
            }
        }
        for r in &relators {
            if r.is_empty() || !r.is_reduced() {
                return Err(Error::InvalidArgument("relators must be nonempty reduced words"));
            }
            if let Some(index) = r.max_generator().filter(|&i| i >= names.len()) {
                return Err(Error::BadIndex { index, rank: names.len() });
            }
        }
        Ok(Self { names, relators })
    }

    /// Surface group of genus `genus` with generators `a_i, b_i` numbered
    /// from `first_index` and the single relator `Π [a_i, b_i]`.
    pub fn surface(genus: usize, first_index: usize) -> Self {
        let mut names = Vec::with_capacity(2 * genus);
        let mut letters = Vec::with_capacity(4 * genus);
        for i in 0..genus {
            names.push(format!("a{}", first_index + i));
            names.push(format!("b{}", first_index + i));
            let (a, b) = (2 * i, 2 * i + 1);
            letters.extend([Letter::positive(a), Letter::positive(b), Letter::negative(a), Letter::negative(b)]);
        }
        let relators = if genus == 0 { Vec::new() } else { alloc::vec![Word::new(letters)] };
        Self { names, relators }
    }

    /// Free group on `g_i`, numbered from `first_index`.
    pub fn free(rank: usize, first_index: usize) -> Result<Self, Error> {
        if rank == 0 {
            return Err(Error::InvalidArgument("free presentation needs rank >= 1"));
        }
        let names = (0..rank).map(|i| format!("g{}", first_index + i)).collect();
        Ok(Self { names, relators: Vec::new() })
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// `⟨a₁, b₁, …, a_m, b_m | a₁b₁a₁⁻¹b₁⁻¹ ⋯ a_m b_m a_m⁻¹ b_m⁻¹⟩`.
pub fn surface_presentation(m: usize) -> Presentation {
    Presentation::surface(m, 1)
}

/// `⟨g₁, …, g_rank⟩` with no relators.
pub fn free_presentation(rank: usize) -> Result<Presentation, Error> {
    Presentation::free(rank, 1)
}

/// A homomorphism from a presented group to Aff(ℝ^q), given on generators.
#[derive(Clone, Debug, PartialEq)]
pub struct Representation {
    presentation: Presentation,
    dim: usize,
    images: Vec<AffineMap>,
    labels: Vec<String>,
}

impl Representation {
    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Image of presentation generator `index`.
    pub fn image(&self, index: usize) -> &AffineMap {
        &self.images[index]
    }

    /// Names the images carry in the holonomy group (by default the
    /// presentation's generator names).
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, Error> {
        if labels.len() != self.images.len() {
            return Err(Error::DimensionMismatch { expected: self.images.len(), found: labels.len() });
        }
        self.labels = labels;
        Ok(self)
    }

    /// The group generated by the images: distinct non-identity images in
    /// presentation order.
    pub fn holonomy_group(&self) -> Result<GeneratorSet, Error> {
        let mut generators: Vec<(String, AffineMap)> = Vec::new();
        for (label, map) in self.labels.iter().zip(&self.images) {
            if map.is_identity(0.0) || generators.iter().any(|(_, g)| g == map) {
                continue;
            }
            generators.push((label.clone(), map.clone()));
        }
        GeneratorSet::new(self.dim, generators)
    }

    /// Largest entrywise deviation of a relator image from the identity.
    pub fn relator_residual(&self, relator: &Word) -> Result<f64, Error> {
        let named: Vec<(String, AffineMap)> =
            self.presentation.names.iter().cloned().zip(self.images.iter().cloned()).collect();
        let gens = GeneratorSet::new(self.dim, named)?;
        Ok(gens.evaluate_word(relator)?.max_abs_diff(&AffineMap::identity(self.dim)))
    }
}

/// Validates an assignment of affine maps to the presentation's generators:
/// every generator is covered, dimensions agree and each relator maps to
/// the identity.
pub fn build_representation(p: &Presentation, assignment: Vec<(String, AffineMap)>) -> Result<Representation, Error> {
    let mut images: Vec<Option<AffineMap>> = alloc::vec![None; p.rank()];
    let mut dim = None;
    for (name, map) in assignment {
        let index = p.index_of(&name).ok_or_else(|| Error::UnknownName(name.clone()))?;
        if images[index].is_some() {
            return Err(Error::DuplicateName(name));
        }
        match dim {
            None => dim = Some(map.dim()),
            Some(d) if d != map.dim() => return Err(Error::DimensionMismatch { expected: d, found: map.dim() }),
            Some(_) => {}
        }
        images[index] = Some(map);
    }
    let images = images
        .into_iter()
        .zip(&p.names)
        .map(|(m, name)| m.ok_or_else(|| Error::Unassigned(name.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    let Some(dim) = dim else {
        return Err(Error::InvalidArgument("representation of the trivial presentation needs a dimension"));
    };
    let rep = Representation { presentation: p.clone(), dim, images, labels: p.names.clone() };
    for relator in &p.relators {
        let residual = rep.relator_residual(relator)?;
        if !(residual <= RELATOR_TOLERANCE) {
            return Err(Error::RelatorViolated { relator: relator.render(&p.names), residual });
        }
    }
    Ok(rep)
}

/// The base `B` of a suspension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseDescriptor {
    /// Closed orientable surface of genus `genus`.
    Surface { genus: usize },
    /// A base with free fundamental group: `S¹` for rank 1, otherwise the
    /// connected sum of `rank` copies of `S¹×S²`.
    Free { rank: usize },
}

impl BaseDescriptor {
    pub fn symbol(&self) -> String {
        match *self {
            Self::Surface { genus } => format!("S²_{genus}"),
            Self::Free { rank: 1 } => "S¹".to_string(),
            Self::Free { rank } => alloc::vec!["(S¹×S²)"; rank].join("♯"),
        }
    }

    fn accepts(&self, p: &Presentation) -> bool {
        match *self {
            Self::Surface { genus } => p.rank() == 2 * genus && p.relators().len() == usize::from(genus > 0),
            Self::Free { rank } => p.rank() == rank && p.relators().is_empty(),
        }
    }
}

/// `Sus(ℝ^q, B, ρ)`, kept as its base and representation.
#[derive(Clone, Debug, PartialEq)]
pub struct SuspendedFoliation {
    pub representation: Representation,
    pub base: BaseDescriptor,
    pub transversal_dim: usize,
    pub codimension: usize,
    /// Set when the base stands for a finite truncation of a presentation
    /// with countably many generators.
    pub truncation_rank: Option<usize>,
    holonomy: GeneratorSet,
}

impl SuspendedFoliation {
    /// The global holonomy group: the image of the representation.
    pub fn holonomy_group(&self) -> &GeneratorSet {
        &self.holonomy
    }

    pub fn with_truncation(mut self, rank: usize) -> Self {
        self.truncation_rank = Some(rank);
        self
    }

    pub fn symbol(&self) -> String {
        let fiber = match self.transversal_dim {
            1 => "ℝ".to_string(),
            2 => "ℝ²".to_string(),
            3 => "ℝ³".to_string(),
            q => format!("ℝ^{q}"),
        };
        format!("Sus({fiber}, {}, ρ)", self.base.symbol())
    }
}

pub fn suspend(rep: Representation, base: BaseDescriptor) -> Result<SuspendedFoliation, Error> {
    if !base.accepts(rep.presentation()) {
        return Err(Error::InvalidArgument("base descriptor does not match the presentation"));
    }
    let holonomy = rep.holonomy_group()?;
    let q = rep.dim();
    Ok(SuspendedFoliation {
        representation: rep,
        base,
        transversal_dim: q,
        codimension: q,
        truncation_rank: None,
        holonomy,
    })
}

/// Leaf type read off from the orbit of a transversal point.
#[derive(Clone, Debug, PartialEq)]
pub enum LeafClass {
    /// Finite orbit.
    Periodic { orbit_size: usize },
    /// Infinite orbit with no accumulation inside the budget.
    ClosedDiscrete { points_seen: usize, escapes: usize },
    /// The orbit accumulates. `non_proper` is set when the point itself is
    /// approached. `inconclusive` marks a budget overrun.
    Accumulating { non_proper: bool, witnesses: Vec<Point>, inconclusive: bool },
}

impl LeafClass {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::Periodic { .. } => "periodic",
            Self::ClosedDiscrete { .. } => "closed-discrete",
            Self::Accumulating { .. } => "accumulating",
        }
    }
}

/// Classifies the leaf through `t` by the orbit of `t` under the holonomy
/// group. An orbit point is an accumulation witness when at least three other
/// orbit points lie within `10·dedup_eps` of it.
pub fn classify_leaf(fol: &SuspendedFoliation, t: &[f64], budget: usize, dedup_eps: f64) -> Result<LeafClass, Error> {
    classify_orbit(fol.holonomy_group(), t, budget, dedup_eps)
}

pub(crate) fn classify_orbit(
    gens: &GeneratorSet,
    t: &[f64],
    budget: usize,
    dedup_eps: f64,
) -> Result<LeafClass, Error> {
    let options = OrbitOptions::default().with_max_len(budget).with_dedup_eps(dedup_eps);
    let orbit = match orbit_with(t, gens, &options) {
        Ok(o) => o,
        Err(Error::BudgetExceeded { .. }) => {
            return Ok(LeafClass::Accumulating { non_proper: false, witnesses: Vec::new(), inconclusive: true })
        }
        Err(e) => return Err(e),
    };
    if orbit.is_complete() && orbit.near_misses == 0 {
        return Ok(LeafClass::Periodic { orbit_size: orbit.len() });
    }
    let radius = 10.0 * dedup_eps;
    let mut hash = SpatialHash::new(gens.dim(), radius);
    for p in orbit.points() {
        hash.insert(p);
    }
    let crowded = |i: usize| {
        let mut near = 0;
        hash.for_each_near(orbit.point(i), |j, d| {
            if j != i && d <= radius {
                near += 1;
            }
        });
        near >= 3
    };
    let witnesses: Vec<Point> =
        (0..orbit.len()).filter(|&i| crowded(i)).take(MAX_WITNESSES).map(|i| orbit.point(i).to_vec()).collect();
    if witnesses.is_empty() && orbit.near_misses == 0 {
        return Ok(LeafClass::ClosedDiscrete { points_seen: orbit.len(), escapes: orbit.escapes });
    }
    Ok(LeafClass::Accumulating { non_proper: crowded(0), witnesses, inconclusive: false })
}

/// The formal record `M = κ(r⁻¹(K))` of a lifted attractor.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftDescriptor {
    pub formula: &'static str,
    pub foliation: String,
    pub base: BaseDescriptor,
    pub codimension: usize,
    pub truncation_rank: Option<usize>,
}

/// A foliation attractor obtained from an attractor of the holonomy group.
#[derive(Clone, Debug, PartialEq)]
pub struct FoliationAttractor {
    pub transversal: AttractorReport,
    pub lift: LiftDescriptor,
    pub minimal: bool,
    pub global: bool,
}

/// Lifts a group attractor of `fol`'s holonomy group to the foliation; the
/// minimal and global flags carry over unchanged.
pub fn lift_attractor(fol: &SuspendedFoliation, report: &AttractorReport) -> Result<FoliationAttractor, Error> {
    let expected = fol.holonomy_group().fingerprint();
    if report.fingerprint != expected {
        return Err(Error::MismatchedGroup { expected, found: report.fingerprint });
    }
    Ok(FoliationAttractor {
        transversal: report.clone(),
        lift: LiftDescriptor {
            formula: "M = κ(r⁻¹(K))",
            foliation: fol.symbol(),
            base: fol.base,
            codimension: fol.codimension,
            truncation_rank: fol.truncation_rank,
        },
        minimal: report.minimal(),
        global: report.global(),
    })
}
