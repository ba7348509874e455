//! Run reports as canonical JSON: sorted keys, floats as `{:.16e}`,
//! non-finite floats as strings.

use std::io;

use attractorlab_core::dynamics::{
    Aabb, AffineSubspace, AttractorReport, BasinEvidence, Certificate, CertificateKind, EvidenceRoute,
    LimitPointEvidence, LimitVerdict, MinimalityEvidence, SampleRegion,
};
use attractorlab_core::suspension::{FoliationAttractor, LeafClass, SuspendedFoliation};
use attractorlab_core::{GeneratorSet, Point};
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{json, Map, Value};

pub const ENGINE: &str = "attractorlab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Pretty printing with every float written to 17 significant digits.
struct FixedFloats<'a>(PrettyFormatter<'a>);

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*);)*) => {
        $(fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
            self.0.$name(w $(, $arg)*)
        })*
    };
}

impl Formatter for FixedFloats<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    delegate! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        begin_object_value();
        end_object_value();
    }
}

/// Canonical text of a report value, with a trailing newline.
pub fn to_canonical_string(value: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedFloats(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("values serialize");
    out.push(b'\n');
    String::from_utf8(out).expect("JSON is UTF-8")
}

pub fn float(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

pub fn point(p: &[f64]) -> Value {
    Value::Array(p.iter().map(|&x| float(x)).collect())
}

fn aabb(b: &Aabb) -> Value {
    json!({ "lo": point(&b.lo), "hi": point(&b.hi) })
}

fn route(r: EvidenceRoute) -> &'static str {
    match r {
        EvidenceRoute::Transport => "transport",
        EvidenceRoute::Orbit => "orbit",
    }
}

/// Report skeleton shared by every command.
pub fn header(scenario: &str, command: &str, seed: u64) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("engine".into(), json!({ "name": ENGINE, "version": VERSION }));
    m.insert("scenario".into(), json!(scenario));
    m.insert("command".into(), json!(command));
    m.insert("seed".into(), json!(seed));
    m
}

pub fn certificate(c: &Certificate, gens: &GeneratorSet) -> Value {
    let kind = match c.kind {
        CertificateKind::OperatorNorm => "operator-norm",
        CertificateKind::SpectralRadius => "spectral-radius",
    };
    let power = c.contracting_power(gens).map(|k| json!(k)).unwrap_or(Value::Null);
    json!({
        "word": c.word.render(gens.names()),
        "length": c.word.len(),
        "kind": kind,
        "value": float(c.value),
        "fixed_point": point(&c.fixed_point),
        "contracting_power": power,
    })
}

pub fn subspace(s: &AffineSubspace) -> Value {
    json!({
        "dim": s.dim,
        "base": point(&s.base),
        "basis": s.basis.iter().map(|v| point(v)).collect::<Vec<_>>(),
        "residual": float(s.residual),
    })
}

pub fn basin(b: &BasinEvidence) -> Value {
    let region = match &b.region {
        SampleRegion::Neighborhood { radius } => {
            json!({ "kind": "neighborhood", "radius": float(*radius) })
        }
        SampleRegion::Domain(d) => json!({ "kind": "domain", "box": aabb(d) }),
    };
    let samples: Vec<Value> = b
        .samples
        .iter()
        .map(|s| {
            json!({
                "point": point(&s.point),
                "min_distance": float(s.min_distance),
                "worst_gap": float(s.worst_gap),
                "word_len": s.word_len,
                "attracted": s.attracted,
            })
        })
        .collect();
    json!({
        "region": region,
        "route": route(b.route),
        "epsilon": float(b.epsilon),
        "net_size": b.net_size,
        "seed": b.seed,
        "tested": b.tested(),
        "attracted": b.attracted(),
        "skipped": b.skipped,
        "worst_gap": float(b.worst_gap()),
        "samples": samples,
    })
}

pub fn minimality(m: &MinimalityEvidence) -> Value {
    let failures: Vec<Value> = m
        .failures
        .iter()
        .map(|f| json!({ "net_index": f.net_index, "uncovered": f.uncovered, "worst_gap": float(f.worst_gap) }))
        .collect();
    json!({
        "route": route(m.route),
        "epsilon": float(m.epsilon),
        "net_size": m.net_size,
        "failures": failures,
        "minimal": m.minimal,
    })
}

pub fn limit_point(e: &LimitPointEvidence) -> Value {
    let verdict = match e.verdict {
        LimitVerdict::Positive => "positive",
        LimitVerdict::Negative => "negative",
        LimitVerdict::Inconclusive => "inconclusive",
    };
    json!({
        "candidate": point(&e.candidate),
        "neighborhood_radius": float(e.neighborhood_radius),
        "approach_tolerance": float(e.approach_tolerance),
        "samples_tested": e.samples_tested,
        "samples_attracted": e.samples_attracted,
        "skipped": e.skipped,
        "verdict": verdict,
        "seed": e.seed,
    })
}

/// The attractor with its evidence. The set itself is summarized by its
/// ε-net.
pub fn attractor(r: &AttractorReport, gens: &GeneratorSet, epsilon: f64) -> Value {
    let net: Vec<Value> = r.attractor.net(epsilon).into_iter().map(|i| point(&r.attractor.points()[i])).collect();
    json!({
        "sample_size": r.attractor.len(),
        "net_epsilon": float(epsilon),
        "net": net,
        "subspace": r.subspace.as_ref().map(subspace),
        "certificate": r.certificate.as_ref().map(|c| certificate(c, gens)),
        "limit_point": r.limit_point.as_ref().map(limit_point),
        "basin": basin(&r.basin),
        "minimality": minimality(&r.minimality),
        "global": r.global_evidence.as_ref().map(|g| json!({
            "domain": aabb(&g.domain),
            "basin": basin(&g.basin),
            "global": g.global,
        })),
        "is_minimal": r.minimal(),
        "is_global": r.global(),
        "fingerprint": format!("{:016x}", r.fingerprint),
    })
}

pub fn foliation(f: &SuspendedFoliation, lift: Option<&FoliationAttractor>) -> Value {
    let rep = &f.representation;
    let names = rep.presentation().names();
    let relators: Vec<Value> = rep
        .presentation()
        .relators()
        .iter()
        .map(|r| {
            json!({
                "relator": r.render(names),
                "residual": float(rep.relator_residual(r).unwrap_or(f64::INFINITY)),
            })
        })
        .collect();
    let assignment: Map<String, Value> = names.iter().zip(rep.labels()).map(|(n, l)| (n.clone(), json!(l))).collect();
    json!({
        "symbol": f.symbol(),
        "base": f.base.symbol(),
        "codimension": f.codimension,
        "assignment": assignment,
        "relators": relators,
        "holonomy_generators": f.holonomy_group().names(),
        "lift": lift.map(|l| json!({
            "formula": l.lift.formula,
            "foliation": l.lift.foliation,
            "base": l.lift.base.symbol(),
            "codimension": l.lift.codimension,
            "minimal": l.minimal,
            "global": l.global,
        })),
    })
}

pub fn leaf(t: &[f64], class: &LeafClass) -> Value {
    let detail = match class {
        LeafClass::Periodic { orbit_size } => json!({ "orbit_size": orbit_size }),
        LeafClass::ClosedDiscrete { points_seen, escapes } => {
            json!({ "points_seen": points_seen, "escapes": escapes })
        }
        LeafClass::Accumulating { non_proper, witnesses, inconclusive } => json!({
            "non_proper": non_proper,
            "witnesses": witnesses.iter().map(|w| point(w)).collect::<Vec<_>>(),
            "inconclusive": inconclusive,
        }),
    };
    json!({ "point": point(t), "class": class.tag(), "detail": detail })
}

pub fn leaves(rows: &[(Point, LeafClass)]) -> Value {
    Value::Array(rows.iter().map(|(t, c)| leaf(t, c)).collect())
}
