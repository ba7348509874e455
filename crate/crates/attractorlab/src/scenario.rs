//! Scenario files: generator sets, optional suspension data, run parameters
//! and the expected outcome, as one JSON document with `schema_version: 1`.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use attractorlab_core::dynamics::{Aabb, DetectParams, OrbitOptions};
use attractorlab_core::suspension::{build_representation, suspend, BaseDescriptor, Presentation, SuspendedFoliation};
use attractorlab_core::{AffineMap, GeneratorSet, LinearMap};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;
/// Assignment target standing for the identity map.
pub const IDENTITY: &str = "identity";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema_version: u32,
    pub id: String,
    #[serde(default)]
    pub description: String,
    pub dim: usize,
    pub generators: Vec<GeneratorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suspension: Option<SuspensionSpec>,
    #[serde(default)]
    pub params: Params,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expected>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub name: String,
    /// Row-major rows.
    pub linear: Vec<Vec<f64>>,
    pub translation: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuspensionSpec {
    pub base: BaseSpec,
    /// Presentation generator → generator name or `"identity"`.
    pub assignment: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum BaseSpec {
    Surface {
        genus: usize,
        #[serde(default = "one")]
        first_index: usize,
    },
    Free {
        rank: usize,
        #[serde(default = "one")]
        first_index: usize,
    },
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Params {
    pub seed: u64,
    pub cert_max_len: usize,
    pub tol_cert: f64,
    pub orbit_max_len: usize,
    pub dedup_eps: f64,
    pub point_cap: usize,
    pub window_radius: f64,
    pub epsilon: f64,
    pub neighborhood_radius: f64,
    pub n_samples: usize,
    pub evidence_max_len: usize,
    pub candidate_max_len: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domain: Option<Domain>,
}

impl Default for Params {
    fn default() -> Self {
        let d = DetectParams::default();
        Self {
            seed: d.seed,
            cert_max_len: d.cert_max_len,
            tol_cert: d.tol_cert,
            orbit_max_len: d.orbit.max_len,
            dedup_eps: d.orbit.dedup_eps,
            point_cap: d.orbit.point_cap,
            window_radius: d.window_radius,
            epsilon: d.epsilon,
            neighborhood_radius: d.neighborhood_radius,
            n_samples: d.n_samples,
            evidence_max_len: d.evidence_max_len,
            candidate_max_len: d.candidate_max_len,
            domain: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Domain {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    pub tag: ExpectedTag,
    /// Dimension of the fitted subspace; 0 for a single point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subspace_dim: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExpectedTag {
    NoAttractor,
    GlobalMinimalAttractor,
}

impl ExpectedTag {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::NoAttractor => "no-attractor",
            Self::GlobalMinimalAttractor => "global-minimal-attractor",
        }
    }
}

impl Scenario {
    /// Parses and validates a scenario. Errors name the offending key.
    pub fn parse(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let scenario: Scenario = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            if path == "." {
                anyhow!("{inner}")
            } else {
                anyhow!("{path}: {inner}")
            }
        })?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Canonical text: sorted keys, two-space indentation, shortest
    /// round-trip floats, trailing newline.
    pub fn to_canonical_json(&self) -> String {
        let value = serde_json::to_value(self).expect("scenarios serialize");
        let mut out = serde_json::to_string_pretty(&value).expect("values serialize");
        out.push('\n');
        out
    }

    fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            bail!("schema_version: unsupported version {} (expected {SCHEMA_VERSION})", self.schema_version);
        }
        let q = self.dim;
        if q == 0 {
            bail!("dim: must be at least 1");
        }
        for (i, g) in self.generators.iter().enumerate() {
            if g.name.is_empty() || g.name == IDENTITY || g.name.contains(['.', '^', ',']) {
                bail!("generators[{i}].name: {:?} is not a usable generator name", g.name);
            }
            if self.generators[..i].iter().any(|h| h.name == g.name) {
                bail!("generators[{i}].name: duplicate name {:?}", g.name);
            }
            if g.linear.len() != q || g.linear.iter().any(|row| row.len() != q) {
                bail!("generators[{i}].linear: expected a {q}x{q} matrix");
            }
            if g.translation.len() != q {
                bail!("generators[{i}].translation: expected {q} entries");
            }
            self.generator_map(i).map_err(|e| anyhow!("generators[{i}]: {e}"))?;
        }
        if let Some(s) = &self.suspension {
            for (key, target) in &s.assignment {
                if target != IDENTITY && !self.generators.iter().any(|g| &g.name == target) {
                    bail!("suspension.assignment.{key}: unknown generator {target:?}");
                }
            }
            self.foliation()?;
        }
        let p = &self.params;
        let positive = [
            ("tol_cert", p.tol_cert),
            ("dedup_eps", p.dedup_eps),
            ("window_radius", p.window_radius),
            ("epsilon", p.epsilon),
            ("neighborhood_radius", p.neighborhood_radius),
        ];
        for (key, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                bail!("params.{key}: must be positive");
            }
        }
        for (key, v) in [("cert_max_len", p.cert_max_len), ("point_cap", p.point_cap)] {
            if v == 0 {
                bail!("params.{key}: must be positive");
            }
        }
        if let Some(d) = &p.domain {
            if d.lo.len() != q || d.hi.len() != q {
                bail!("params.domain: expected {q} coordinates in lo and hi");
            }
            if d.lo.iter().zip(&d.hi).any(|(lo, hi)| !(lo <= hi)) {
                bail!("params.domain: lo must not exceed hi");
            }
        }
        Ok(())
    }

    fn generator_map(&self, i: usize) -> Result<AffineMap, attractorlab_core::Error> {
        let g = &self.generators[i];
        AffineMap::new(LinearMap::from_rows(&g.linear)?, g.translation.clone())
    }

    pub fn generator_set(&self) -> Result<GeneratorSet> {
        let gens = (0..self.generators.len())
            .map(|i| Ok((self.generators[i].name.clone(), self.generator_map(i)?)))
            .collect::<Result<Vec<_>, attractorlab_core::Error>>()?;
        Ok(GeneratorSet::new(self.dim, gens)?)
    }

    /// The suspended foliation, when the scenario has a suspension block.
    pub fn foliation(&self) -> Result<Option<SuspendedFoliation>> {
        let Some(s) = &self.suspension else {
            return Ok(None);
        };
        let (presentation, base) = match s.base {
            BaseSpec::Surface { genus, first_index } => {
                (Presentation::surface(genus, first_index), BaseDescriptor::Surface { genus })
            }
            BaseSpec::Free { rank, first_index } => (
                Presentation::free(rank, first_index).map_err(|e| anyhow!("suspension.base: {e}"))?,
                BaseDescriptor::Free { rank },
            ),
        };
        let mut assignment = Vec::new();
        let mut labels = Vec::new();
        for name in presentation.names() {
            let target =
                s.assignment.get(name).ok_or_else(|| anyhow!("suspension.assignment: no image for {name:?}"))?;
            let map = if target == IDENTITY {
                AffineMap::identity(self.dim)
            } else {
                let i = self.generators.iter().position(|g| &g.name == target).expect("validated above");
                self.generator_map(i)?
            };
            assignment.push((name.clone(), map));
            labels.push(target.clone());
        }
        if let Some(extra) = s.assignment.keys().find(|k| presentation.index_of(k).is_none()) {
            bail!("suspension.assignment.{extra}: not a generator of the presentation");
        }
        let rep = build_representation(&presentation, assignment)
            .map_err(|e| anyhow!("suspension: {e}"))?
            .with_labels(labels)?;
        Ok(Some(suspend(rep, base).map_err(|e| anyhow!("suspension.base: {e}"))?))
    }

    /// The group acted on: the holonomy group of the suspension when there
    /// is one, the generator set otherwise.
    pub fn group(&self) -> Result<GeneratorSet> {
        match self.foliation()? {
            Some(f) => Ok(f.holonomy_group().clone()),
            None => self.generator_set(),
        }
    }

    pub fn detect_params(&self) -> DetectParams {
        let p = &self.params;
        DetectParams {
            seed: p.seed,
            cert_max_len: p.cert_max_len,
            tol_cert: p.tol_cert,
            orbit: OrbitOptions::default()
                .with_max_len(p.orbit_max_len)
                .with_dedup_eps(p.dedup_eps)
                .with_point_cap(p.point_cap),
            window_radius: p.window_radius,
            epsilon: p.epsilon,
            neighborhood_radius: p.neighborhood_radius,
            n_samples: p.n_samples,
            evidence_max_len: p.evidence_max_len,
            domain: p.domain.as_ref().map(|d| Aabb::new(d.lo.clone(), d.hi.clone())),
            candidate_max_len: p.candidate_max_len,
            subspace_tol: 1e-6,
        }
    }
}

/// The shipped scenario corpus, embedded in the binary.
pub const CORPUS: [(&str, &str); 6] = [
    ("example1", include_str!("../scenarios/example1.json")),
    ("example2", include_str!("../scenarios/example2.json")),
    ("example3", include_str!("../scenarios/example3.json")),
    ("example4", include_str!("../scenarios/example4.json")),
    ("rotation", include_str!("../scenarios/rotation.json")),
    ("identity", include_str!("../scenarios/identity.json")),
];

pub fn shipped(id: &str) -> Option<Scenario> {
    CORPUS
        .iter()
        .find(|(name, _)| *name == id)
        .map(|(_, text)| Scenario::parse(text).expect("shipped scenarios are valid"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_canonical() {
        for (id, text) in CORPUS {
            let s = Scenario::parse(text).unwrap();
            assert_eq!(s.id, id);
            assert_eq!(s.to_canonical_json(), text, "{id} is not in canonical form");
            assert_eq!(Scenario::parse(&s.to_canonical_json()).unwrap(), s);
        }
    }

    #[test]
    fn relators_of_shipped_suspensions_hold() {
        for (id, _) in CORPUS {
            let s = shipped(id).unwrap();
            if let Some(f) = s.foliation().unwrap() {
                for r in f.representation.presentation().relators() {
                    assert!(f.representation.relator_residual(r).unwrap() <= 1e-9);
                }
            }
        }
    }

    #[test]
    fn errors_name_the_key() {
        let text = CORPUS[3].1.replace("\"epsilon\": 0.05", "\"epsilon\": \"wide\"");
        let err = Scenario::parse(&text).unwrap_err().to_string();
        assert!(err.contains("params.epsilon"), "{err}");
        let text = CORPUS[3].1.replace("\"dim\": 2", "\"dimension\": 2");
        let err = Scenario::parse(&text).unwrap_err().to_string();
        assert!(err.contains("dimension"), "{err}");
        let text = CORPUS[3].1.replace("\"epsilon\": 0.05", "\"epsilon\": -1.0");
        let err = Scenario::parse(&text).unwrap_err().to_string();
        assert!(err.contains("params.epsilon"), "{err}");
    }

    #[test]
    fn singular_generators_are_rejected() {
        let text = CORPUS[3].1.replacen("0.5", "0.0", 1);
        let err = Scenario::parse(&text).unwrap_err().to_string();
        assert!(err.contains("generators[0]"), "{err}");
    }
}
