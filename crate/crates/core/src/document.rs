//! JSON ring and module documents with a canonical serialization.
//!
//! Canonical text is compact JSON with object keys sorted, so two equal
//! presentations always serialize to the same bytes.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::ground::GroundRing;
use crate::module::{Module, ModulePresentation};
use crate::ring::{GeneratorDecl, GeneratorKind, Parity, Ring, RingFlags, RingPresentation};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorDoc {
    name: String,
    degree: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    parity: Option<String>,
    kind: KindDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum KindDoc {
    Word(String),
    Nilpotent { nilpotent: u32 },
    Integral { integral: u32 },
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FlagsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    connective: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coherent: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    graded_local: Option<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    max_ideal0: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    global_dimension: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    local_at_each_prime: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    window: Option<(i64, i64)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RingDoc {
    ground: String,
    #[serde(default)]
    generators: Vec<GeneratorDoc>,
    #[serde(default)]
    relations: Vec<String>,
    #[serde(default)]
    flags: FlagsDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModuleGeneratorDoc {
    name: String,
    shift: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModuleDoc {
    ring: String,
    generators: Vec<ModuleGeneratorDoc>,
    #[serde(default)]
    relations: Vec<Vec<String>>,
}

/// Syntax errors keep their position; everything else is a schema error.
fn decode<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str::<Value>(text).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
}

fn kind_of(g: &GeneratorDoc) -> Result<GeneratorKind> {
    match &g.kind {
        KindDoc::Word(w) if w == "poly" => Ok(GeneratorKind::Polynomial),
        KindDoc::Word(w) if w == "inv" => Ok(GeneratorKind::Invertible),
        KindDoc::Word(w) => Err(Error::Schema(format!("generator {}: unknown kind {w:?}", g.name))),
        KindDoc::Nilpotent { nilpotent } => Ok(GeneratorKind::Nilpotent(*nilpotent)),
        KindDoc::Integral { integral } => Ok(GeneratorKind::Integral(*integral)),
    }
}

fn parity_of(g: &GeneratorDoc) -> Result<Parity> {
    match g.parity.as_deref() {
        None => Ok(Parity::of_degree(g.degree)),
        Some("even") => Ok(Parity::Even),
        Some("odd") => Ok(Parity::Odd),
        Some(p) => Err(Error::Schema(format!("generator {}: unknown parity {p:?}", g.name))),
    }
}

pub fn parse_ring_document(text: &str) -> Result<Ring> {
    let doc: RingDoc = decode(text)?;
    let ground = GroundRing::parse(&doc.ground).map_err(|e| Error::Schema(format!("ground: {e}")))?;
    let mut generators = Vec::with_capacity(doc.generators.len());
    for g in &doc.generators {
        let mut decl = GeneratorDecl::new(&g.name, g.degree, kind_of(g)?);
        decl.parity = parity_of(g)?;
        generators.push(decl);
    }
    let f = doc.flags;
    let flags = RingFlags {
        connective: f.connective,
        coherent: f.coherent,
        graded_local: f.graded_local,
        max_ideal0: f.max_ideal0,
        global_dimension: f.global_dimension,
        local_at_each_prime: f.local_at_each_prime,
        window: f.window,
    };
    RingPresentation::from_relations(ground, generators, &doc.relations, flags)
}

pub fn ring_document(r: &Ring) -> Value {
    let generators = r
        .generators()
        .iter()
        .map(|g| GeneratorDoc {
            name: g.name.clone(),
            degree: g.degree,
            parity: Some(if g.parity == Parity::Odd { "odd" } else { "even" }.into()),
            kind: match g.kind {
                GeneratorKind::Polynomial => KindDoc::Word("poly".into()),
                GeneratorKind::Invertible => KindDoc::Word("inv".into()),
                GeneratorKind::Nilpotent(k) => KindDoc::Nilpotent { nilpotent: k },
                GeneratorKind::Integral(k) => KindDoc::Integral { integral: k },
            },
        })
        .collect();
    let f = r.flags().clone();
    let doc = RingDoc {
        ground: r.ground().to_string(),
        generators,
        relations: r.relations().iter().map(|e| r.format(e)).collect(),
        flags: FlagsDoc {
            connective: f.connective,
            coherent: f.coherent,
            graded_local: f.graded_local,
            max_ideal0: f.max_ideal0,
            global_dimension: f.global_dimension,
            local_at_each_prime: f.local_at_each_prime,
            window: f.window,
        },
    };
    serde_json::to_value(doc).expect("ring documents serialize")
}

/// Parses a module document; `resolve` turns its ring reference into a ring.
pub fn parse_module_document<F>(text: &str, mut resolve: F) -> Result<(String, Module)>
where
    F: FnMut(&str) -> Result<Ring>,
{
    let doc: ModuleDoc = decode(text)?;
    let ring = resolve(&doc.ring)?;
    let names = doc.generators.iter().map(|g| g.name.clone()).collect();
    let shifts = doc.generators.iter().map(|g| g.shift).collect();
    let m = ModulePresentation::from_expressions(&ring, names, shifts, &doc.relations)?;
    Ok((doc.ring, m))
}

pub fn module_document(m: &Module, ring_ref: &str) -> Value {
    let doc = ModuleDoc {
        ring: ring_ref.to_string(),
        generators: m
            .names()
            .iter()
            .zip(m.shifts())
            .map(|(n, &s)| ModuleGeneratorDoc { name: n.clone(), shift: s })
            .collect(),
        relations: m.relations().iter().map(|r| m.format_element(r)).collect(),
    };
    serde_json::to_value(doc).expect("module documents serialize")
}

/// Compact JSON with sorted keys.
pub fn canonical(v: &Value) -> String {
    // serde_json's map is ordered by key unless `preserve_order` is enabled
    serde_json::to_string(v).expect("values serialize")
}
