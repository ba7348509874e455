//! Versioned fixture records minted from the naive oracles.
//!
//! Every record names its scenario, the parameters it was minted with and the
//! minted values. Records live in `ATTRACTORLAB_FIXTURES`, or in the
//! `fixtures/` directory of this crate when the variable is unset.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use attractorlab_core::dynamics::Aabb;
use attractorlab_core::oracle::{
    brute_force_words, density_check, grid_orbit_closure, grid_orbit_closure_with_margin, naive_orbit,
    pointwise_word_oracle, standard_test_points,
};
use attractorlab_core::{AffineMap, GeneratorSet, Word};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::formats::{fnv1a, render_svg};
use crate::scenario::shipped;

pub const FIXTURE_SCHEMA_VERSION: u32 = 1;
pub const ENV_VAR: &str = "ATTRACTORLAB_FIXTURES";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureRecord {
    pub schema_version: u32,
    pub name: String,
    pub scenario: String,
    pub parameters: Value,
    pub values: Value,
}

pub fn fixtures_dir() -> PathBuf {
    match std::env::var_os(ENV_VAR) {
        Some(dir) => PathBuf::from(dir),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures"),
    }
}

pub fn load(name: &str) -> Result<FixtureRecord> {
    load_from(&fixtures_dir(), name)
}

pub fn load_from(dir: &Path, name: &str) -> Result<FixtureRecord> {
    let path = dir.join(format!("{name}.json"));
    let text = std::fs::read_to_string(&path).with_context(|| format!("reading fixture {}", path.display()))?;
    let record: FixtureRecord =
        serde_json::from_str(&text).with_context(|| format!("parsing fixture {}", path.display()))?;
    if record.schema_version != FIXTURE_SCHEMA_VERSION {
        bail!("fixture {name}: unsupported schema_version {}", record.schema_version);
    }
    Ok(record)
}

pub fn save(dir: &Path, record: &FixtureRecord) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("{}.json", record.name));
    let mut text = serde_json::to_string_pretty(&serde_json::to_value(record)?)?;
    text.push('\n');
    std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn record(name: &str, scenario: &str, parameters: Value, values: Value) -> FixtureRecord {
    FixtureRecord {
        schema_version: FIXTURE_SCHEMA_VERSION,
        name: name.into(),
        scenario: scenario.into(),
        parameters,
        values,
    }
}

fn group(id: &str) -> GeneratorSet {
    shipped(id).and_then(|s| s.generator_set().ok()).expect("shipped scenario")
}

/// Every record, recomputed from scratch.
pub fn mint_all() -> Result<Vec<FixtureRecord>> {
    Ok(vec![
        example1_certificate_search()?,
        example1_orbit_rows(),
        ball_sizes(),
        example2_grid_closure()?,
        example4_translations()?,
        example4_density_budget(),
        plot_hashes(),
    ])
}

/// 2×2 operator norm and spectral radius from closed forms.
fn norm_and_radius(a: [[f64; 2]; 2]) -> (f64, f64) {
    let [[p, q], [r, s]] = a;
    let (tr, det) = (p + s, p * s - q * r);
    let disc = tr * tr / 4.0 - det;
    let radius = if disc >= 0.0 { (tr / 2.0).abs() + disc.sqrt() } else { det.abs().sqrt() };
    let (m11, m12, m22) = (p * p + r * r, p * q + r * s, q * q + s * s);
    let half = (m11 + m22) / 2.0;
    let norm = (half + ((m11 - m22) * (m11 - m22) / 4.0 + m12 * m12).sqrt()).sqrt();
    (norm, radius)
}

/// Exhaustive search of the word ball of Example 1 for a contracting word.
pub fn example1_certificate_search() -> Result<FixtureRecord> {
    let gens = group("example1");
    let max_len = 12;
    let points = standard_test_points(2);
    let words = brute_force_words(gens.rank(), max_len);
    let mut contracting = 0usize;
    let (mut min_norm, mut min_radius) = (f64::INFINITY, f64::INFINITY);
    for w in words.iter().filter(|w| !w.is_empty()) {
        let (linear, _) = pointwise_word_oracle(&gens, w, &points)?;
        let a = [[linear.get(0, 0), linear.get(0, 1)], [linear.get(1, 0), linear.get(1, 1)]];
        let (norm, radius) = norm_and_radius(a);
        if norm < 1.0 || radius < 1.0 {
            contracting += 1;
        }
        min_norm = min_norm.min(norm);
        min_radius = min_radius.min(radius);
    }
    Ok(record(
        "example1_certificate_search",
        "example1",
        json!({ "max_len": max_len }),
        json!({
            "words_checked": words.len() - 1,
            "contracting_words": contracting,
            "min_operator_norm": min_norm,
            "min_spectral_radius": min_radius,
        }),
    ))
}

/// Distinct orbit points of `(1, 1)` for words of length at most 2.
pub fn example1_orbit_rows() -> FixtureRecord {
    let gens = group("example1");
    let base = [1.0, 1.0];
    let mut points = naive_orbit(&gens, &base, 2);
    points.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    points.dedup();
    record("example1_orbit_rows", "example1", json!({ "base": base, "max_len": 2 }), json!({ "rows": points.len() }))
}

/// Reduced-word ball sizes of the free group of rank 2.
pub fn ball_sizes() -> FixtureRecord {
    let sizes: Vec<usize> = (0..=4).map(|n| brute_force_words(2, n).len()).collect();
    record("ball_sizes_rank2", "example4", json!({ "rank": 2, "max_len": 4 }), json!({ "sizes": sizes }))
}

pub const EXAMPLE2_SEED: [f64; 2] = [0.3, 0.7];
pub const EXAMPLE2_RESOLUTION: f64 = 0.05;
/// One box width on every side.
pub const EXAMPLE2_MARGIN_CELLS: usize = 20;
const MINT_BUDGET: usize = 50_000_000;

/// Cell closure of the unit square under the Example 2 group. Orbit paths
/// may pass through the surrounding ring of one box width.
pub fn example2_grid_closure() -> Result<FixtureRecord> {
    let gens = group("example2");
    let bounds = Aabb::new(vec![0.0, 0.0], vec![1.0, 1.0]);
    let closure = grid_orbit_closure_with_margin(
        &gens,
        &EXAMPLE2_SEED,
        &bounds,
        EXAMPLE2_RESOLUTION,
        EXAMPLE2_MARGIN_CELLS,
        MINT_BUDGET,
    )?;
    let clipped = grid_orbit_closure(&gens, &EXAMPLE2_SEED, &bounds, EXAMPLE2_RESOLUTION, MINT_BUDGET)?;
    Ok(record(
        "example2_grid_closure",
        "example2",
        json!({
            "seed": EXAMPLE2_SEED,
            "lo": bounds.lo,
            "hi": bounds.hi,
            "resolution": EXAMPLE2_RESOLUTION,
            "margin_cells": EXAMPLE2_MARGIN_CELLS,
        }),
        json!({
            "occupied": closure.occupied.len(),
            "total_cells": closure.total_cells(),
            "budget_used": closure.budget_used,
            "dense": closure.is_full(),
            "occupied_without_margin": clipped.occupied.len(),
        }),
    ))
}

/// `fⁿ gⁿ f⁻ⁿ g⁻ⁿ` as a word in generators 0 and 1.
pub fn commutator_word(n: usize) -> Word {
    let mut pairs = Vec::with_capacity(4 * n);
    for (g, s) in [(0, 1), (1, 1), (0, -1), (1, -1)] {
        pairs.extend(std::iter::repeat_n((g, s), n));
    }
    Word::from_signed(&pairs)
}

/// `δ_n` is the translation `h_{n+1} ∘ h_n⁻¹`.
pub const DELTA_INDICES: [usize; 2] = [1, 2];
pub const TRANSLATION_STEP: f64 = 1.0 / 32.0;

/// `h_{n+1} h_n⁻¹` as a word in generators 0 and 1.
pub fn delta_word(n: usize) -> Word {
    commutator_word(n + 1).concat(&commutator_word(n).inverse())
}

/// Step of the integer span of translation lengths, when all are integer
/// multiples of `TRANSLATION_STEP`.
fn span(deltas: &[f64]) -> (Vec<i64>, Option<f64>) {
    let multiples: Vec<i64> = deltas.iter().map(|d| (d / TRANSLATION_STEP).round() as i64).collect();
    let exact = deltas.iter().zip(&multiples).all(|(d, m)| *d == *m as f64 * TRANSLATION_STEP);
    let g = multiples.iter().fold(0i64, |a, &b| gcd(a, b.abs()));
    (multiples, exact.then_some(g as f64 * TRANSLATION_STEP))
}

/// The translations `δ_n` of Example 4, read off pointwise, and the cells of
/// `[-2, 0]` reached from 0 by the group they generate at the scale of their
/// integer span.
pub fn example4_translations() -> Result<FixtureRecord> {
    let gens = group("example4");
    let points = standard_test_points(2);
    let mut deltas = Vec::new();
    for n in DELTA_INDICES {
        let (linear, t) = pointwise_word_oracle(&gens, &delta_word(n), &points)?;
        let identity = (0..2).all(|i| (0..2).all(|j| linear.get(i, j) == if i == j { 1.0 } else { 0.0 }));
        if !identity || t[1] != 0.0 {
            bail!("delta_{n} is not a translation along the x-axis");
        }
        deltas.push(t[0]);
    }
    let (multiples, step) = span(&deltas);
    let line = GeneratorSet::new(
        1,
        deltas.iter().enumerate().map(|(i, d)| (format!("t{}", i + 1), AffineMap::translation_by(&[*d]))).collect(),
    )?;
    let bounds = Aabb::new(vec![-2.0], vec![0.0]);
    let closure = grid_orbit_closure(&line, &[0.0], &bounds, TRANSLATION_STEP, MINT_BUDGET)?;
    Ok(record(
        "example4_translations",
        "example4",
        json!({ "n": DELTA_INDICES, "seed": [0.0], "lo": [-2.0], "hi": [0.0], "resolution": TRANSLATION_STEP }),
        json!({
            "deltas": deltas,
            "multiples": multiples,
            "span_step": step,
            "occupied": closure.occupied.len(),
            "total_cells": closure.total_cells(),
            "budget_used": closure.budget_used,
        }),
    ))
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub const SEGMENT_LO: [f64; 2] = [-1.9, 0.0];
pub const SEGMENT_HI: [f64; 2] = [-0.1, 0.0];
pub const SEGMENT_EPS: f64 = 0.05;
const DENSITY_SEARCH_CAP: usize = 14;

/// Shortest word budget at which the naive orbit of the origin is
/// `SEGMENT_EPS`-dense on the segment.
pub fn example4_density_budget() -> FixtureRecord {
    let gens = group("example4");
    let segment = Aabb::new(SEGMENT_LO.to_vec(), SEGMENT_HI.to_vec());
    let found = (0..=DENSITY_SEARCH_CAP).find_map(|len| {
        let points = naive_orbit(&gens, &[0.0, 0.0], len);
        density_check(&points, &segment, SEGMENT_EPS).then_some((len, points.len()))
    });
    let (max_len, naive_points) = match found {
        Some((l, n)) => (json!(l), json!(n)),
        None => (Value::Null, Value::Null),
    };
    record(
        "example4_density_budget",
        "example4",
        json!({ "base": [0.0, 0.0], "lo": SEGMENT_LO, "hi": SEGMENT_HI, "eps": SEGMENT_EPS, "search_cap": DENSITY_SEARCH_CAP }),
        json!({ "max_len": max_len, "naive_points": naive_points }),
    )
}

pub const PLOT_CASES: [(&str, [f64; 2], usize); 2] = [("example1", [1.0, 1.0], 6), ("example4", [0.0, 0.0], 6)];

/// Hashes of the scatter plots of two naive orbits.
pub fn plot_hashes() -> FixtureRecord {
    let mut params = serde_json::Map::new();
    let mut values = serde_json::Map::new();
    for (id, base, max_len) in PLOT_CASES {
        let points = naive_orbit(&group(id), &base, max_len);
        params.insert(id.into(), json!({ "base": base, "max_len": max_len }));
        values.insert(id.into(), json!(format!("{:016x}", fnv1a(render_svg(&points).as_bytes()))));
    }
    record("plot_hashes", "example1+example4", Value::Object(params), Value::Object(values))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_norms() {
        let (n, r) = norm_and_radius([[0.5, 0.0], [0.0, 2.0]]);
        assert_eq!((n, r), (2.0, 2.0));
        let (n, r) = norm_and_radius([[0.0, -0.9], [0.9, 0.0]]);
        assert!((n - 0.9).abs() < 1e-15 && (r - 0.9).abs() < 1e-15);
        let (n, r) = norm_and_radius([[1.0, 1.0], [0.0, 1.0]]);
        assert!((n - (1.5 + 1.25f64.sqrt()).sqrt()).abs() < 1e-15);
        assert_eq!(r, 1.0);
    }

    #[test]
    fn commutator_words_are_reduced() {
        assert_eq!(commutator_word(2).len(), 8);
        assert!(commutator_word(3).is_reduced());
    }
}
