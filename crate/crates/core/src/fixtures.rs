//! Bundled ring and module presentations.
//!
//! Ring references follow `NAME(@p)?([Cn(xCm)*])?`: the base fixture, then
//! an optional ground localization at the prime `p`, then an optional group
//! ring over cyclic factors. Module references accept the same `@p` and
//! group suffixes and are rebuilt over the corresponding ring.

use crate::error::{Error, Result};
use crate::ground::GroundRing;
use crate::module::{Module, ModulePresentation};
use crate::ring::{GeneratorDecl, GeneratorKind, Localization, Ring, RingFlags, RingPresentation};

/// Where a fixture's data comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    /// Presentation quoted verbatim from the reference text.
    Quoted,
    /// Standard facts taken from outside the reference text.
    External,
    /// Reconstructed to fit a statement whose data is not given.
    Reconstructed,
    /// Chosen by convention, e.g. a grading the text leaves open.
    Convention,
}

impl Source {
    pub fn label(self) -> &'static str {
        match self {
            Source::Quoted => "quoted",
            Source::External => "external",
            Source::Reconstructed => "reconstructed",
            Source::Convention => "convention",
        }
    }
}

#[derive(Debug, Clone)]
pub struct FixtureInfo {
    pub name: &'static str,
    /// `None` for rings; the base ring reference for modules.
    pub ring: Option<&'static str>,
    pub source: Source,
    pub note: &'static str,
}

const RINGS: &[FixtureInfo] = &[
    FixtureInfo { name: "Z_triv", ring: None, source: Source::Convention, note: "the integers concentrated in degree 0" },
    FixtureInfo {
        name: "Zp_triv",
        ring: None,
        source: Source::Convention,
        note: "Z_(p) concentrated in degree 0; written Zp_triv@p",
    },
    FixtureInfo { name: "Z_half", ring: None, source: Source::Convention, note: "Z[1/2] concentrated in degree 0" },
    FixtureInfo {
        name: "Z_third_w",
        ring: None,
        source: Source::Convention,
        note: "Z[1/3][w]/(w^2 + w + 1), a primitive cube root of unity in degree 0",
    },
    FixtureInfo { name: "KU", ring: None, source: Source::Quoted, note: "Z[u, u^-1] with |u| = 2" },
    FixtureInfo { name: "ku", ring: None, source: Source::Quoted, note: "Z[u] with |u| = 2" },
    FixtureInfo {
        name: "KO",
        ring: None,
        source: Source::Quoted,
        note: "Z[η,y,w,w⁻¹]/(2η,η³,ηy,y²−4w); degrees 1, 4, 8 by convention",
    },
    FixtureInfo {
        name: "ko",
        ring: None,
        source: Source::External,
        note: "connective cover of KO: Z[eta,a,b]/(2eta,eta^3,eta a,a^2-4b), degrees 1, 4, 8",
    },
    FixtureInfo { name: "KO_half", ring: None, source: Source::Quoted, note: "Z[1/2][y, y^-1]; |y| = 4 by convention" },
    FixtureInfo { name: "ZS5", ring: None, source: Source::Convention, note: "Z[s]/(s^2 + 5) concentrated in degree 0" },
    FixtureInfo {
        name: "S_trunc5",
        ring: None,
        source: Source::External,
        note: "stable stems through degree 5: pi_1 = Z/2, pi_3 = Z/24, eta^3 = 12nu, eta nu = 0",
    },
];

const MODULES: &[FixtureInfo] = &[
    FixtureInfo { name: "ku_mod_2u", ring: Some("ku"), source: Source::Convention, note: "residue field ku/(2, u)" },
    FixtureInfo { name: "ku_mod_u", ring: Some("ku"), source: Source::Convention, note: "ku/(u)" },
    FixtureInfo { name: "Z_mod_2", ring: Some("Z_triv"), source: Source::Convention, note: "Z/2 in degree 0" },
    FixtureInfo {
        name: "I25",
        ring: Some("ZS5"),
        source: Source::Convention,
        note: "the ideal (2, 1+s) presented on generators 2 and 1+s",
    },
    FixtureInfo {
        name: "I25bar",
        ring: Some("ZS5"),
        source: Source::Convention,
        note: "the conjugate ideal (2, 1-s) presented on generators 2 and 1-s",
    },
    FixtureInfo {
        name: "KUoverKO",
        ring: Some("KO"),
        source: Source::Reconstructed,
        note: "KU as a KO-module via complexification: eta acts by 0, y by 2u^2, w by u^4",
    },
    FixtureInfo {
        name: "KUoverKO_C2",
        ring: Some("KO[C2]"),
        source: Source::Reconstructed,
        note: "KUoverKO extended to KO[C2]",
    },
];

pub fn rings() -> &'static [FixtureInfo] {
    RINGS
}

pub fn modules() -> &'static [FixtureInfo] {
    MODULES
}

/// Splits a reference into base name, prime and cyclic orders.
pub fn parse_reference(reference: &str) -> Result<(&str, Option<u64>, Vec<u64>)> {
    let bad = || Error::InvalidInput(format!("malformed fixture reference {reference:?}"));
    let (head, group) = match reference.find('[') {
        Some(i) => {
            let inner = reference[i + 1..].strip_suffix(']').ok_or_else(bad)?;
            let orders = inner
                .split('x')
                .map(|c| c.trim().strip_prefix('C').and_then(|n| n.parse::<u64>().ok()).ok_or_else(bad))
                .collect::<Result<Vec<_>>>()?;
            (&reference[..i], orders)
        }
        None => (reference, Vec::new()),
    };
    let (base, prime) = match head.split_once('@') {
        Some((b, p)) => (b, Some(p.parse::<u64>().map_err(|_| bad())?)),
        None => (head, None),
    };
    if base.is_empty() {
        return Err(bad());
    }
    Ok((base, prime, group))
}

/// Base fixture name of a ring or module reference.
pub fn base_name(reference: &str) -> &str {
    let end = reference.find(['@', '[']).unwrap_or(reference.len());
    &reference[..end]
}

pub fn ring(reference: &str) -> Result<Ring> {
    let (base, prime, group) = parse_reference(reference)?;
    let mut r = match base {
        "Zp_triv" => {
            let p = prime.ok_or_else(|| Error::InvalidInput("Zp_triv needs a prime, as in Zp_triv@2".into()))?;
            base_ring("Z_triv")?.localize_ground(Localization::Prime(p))?
        }
        _ => base_ring(base)?,
    };
    if let (Some(p), false) = (prime, base == "Zp_triv") {
        r = r.localize_ground(Localization::Prime(p))?;
    }
    if !group.is_empty() {
        r = r.group_ring(&group)?;
    }
    Ok(r)
}

fn flags(connective: bool, local_at_each_prime: bool) -> RingFlags {
    RingFlags {
        connective: Some(connective),
        coherent: Some(true),
        local_at_each_prime: Some(local_at_each_prime),
        ..RingFlags::default()
    }
}

fn base_ring(name: &str) -> Result<Ring> {
    use GeneratorKind::*;
    let g = GeneratorDecl::new;
    let none: &[&str] = &[];
    match name {
        "Z_triv" => RingPresentation::from_relations(GroundRing::Integers, vec![], none, flags(true, true)),
        "Z_half" => RingPresentation::from_relations(GroundRing::inverted_at(2)?, vec![], none, flags(true, false)),
        "Z_third_w" => RingPresentation::from_relations(
            GroundRing::inverted_at(3)?,
            vec![g("w", 0, Integral(2))],
            &["w^2 + w + 1"],
            flags(true, false),
        ),
        "KU" => RingPresentation::from_relations(GroundRing::Integers, vec![g("u", 2, Invertible)], none, flags(false, true)),
        "ku" => RingPresentation::from_relations(GroundRing::Integers, vec![g("u", 2, Polynomial)], none, flags(true, true)),
        "KO" => RingPresentation::from_relations(
            GroundRing::Integers,
            vec![g("eta", 1, Polynomial), g("y", 4, Polynomial), g("w", 8, Invertible)],
            &["2*eta", "eta^3", "eta*y", "y^2 - 4*w"],
            flags(false, true),
        ),
        "ko" => RingPresentation::from_relations(
            GroundRing::Integers,
            vec![g("eta", 1, Polynomial), g("a", 4, Polynomial), g("b", 8, Polynomial)],
            &["2*eta", "eta^3", "eta*a", "a^2 - 4*b"],
            flags(true, true),
        ),
        "KO_half" => RingPresentation::from_relations(
            GroundRing::inverted_at(2)?,
            vec![g("y", 4, Invertible)],
            none,
            flags(false, false),
        ),
        "ZS5" => RingPresentation::from_relations(
            GroundRing::Integers,
            vec![g("s", 0, Integral(2))],
            &["s^2 + 5"],
            RingFlags { coherent: Some(true), connective: Some(true), ..RingFlags::default() },
        ),
        "S_trunc5" => RingPresentation::from_relations(
            GroundRing::Integers,
            vec![g("eta", 1, Polynomial), g("nu", 3, Polynomial)],
            &["2*eta", "24*nu", "eta^3 - 12*nu", "eta*nu"],
            RingFlags { window: Some((0, 5)), ..flags(true, true) },
        ),
        _ => Err(Error::InvalidInput(format!("unknown ring fixture {name:?}"))),
    }
}

pub fn module(reference: &str) -> Result<Module> {
    let base = base_name(reference);
    let info = MODULES
        .iter()
        .find(|m| m.name == base)
        .ok_or_else(|| Error::InvalidInput(format!("unknown module fixture {base:?}")))?;
    let ring_base = info.ring.expect("module fixtures name a ring");
    let suffix = &reference[base.len()..];
    let ring_ref = merge_suffix(ring_base, suffix)?;
    let r = ring(&ring_ref)?;
    module_over(base, &r)
}

/// Appends the `@p[..]` suffix of a module reference to its ring reference.
fn merge_suffix(ring_ref: &str, suffix: &str) -> Result<String> {
    if suffix.is_empty() {
        return Ok(ring_ref.to_string());
    }
    let (_, prime, group) = parse_reference(&format!("x{suffix}"))?;
    let (base, p0, g0) = parse_reference(ring_ref)?;
    if prime.is_some() && p0.is_some() {
        return Err(Error::InvalidInput(format!("{ring_ref} is already localized")));
    }
    let mut out = base.to_string();
    if let Some(p) = prime.or(p0) {
        out.push_str(&format!("@{p}"));
    }
    let orders: Vec<u64> = g0.into_iter().chain(group).collect();
    if !orders.is_empty() {
        let parts: Vec<String> = orders.iter().map(|n| format!("C{n}")).collect();
        out.push_str(&format!("[{}]", parts.join("x")));
    }
    Ok(out)
}

/// Builds a module fixture over `r`, which must contain the generators the
/// fixture mentions.
pub fn module_over(name: &str, r: &Ring) -> Result<Module> {
    let names = |n: &[&str]| n.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    match name {
        "ku_mod_2u" => ModulePresentation::from_expressions(r, names(&["x"]), vec![0], &[vec!["2"], vec!["u"]]),
        "ku_mod_u" => ModulePresentation::from_expressions(r, names(&["x"]), vec![0], &[vec!["u"]]),
        "Z_mod_2" => ModulePresentation::from_expressions(r, names(&["x"]), vec![0], &[vec!["2"]]),
        "I25" => ModulePresentation::from_expressions(
            r,
            names(&["a", "b"]),
            vec![0, 0],
            &[vec!["1 + s", "-2"], vec!["-3", "1 - s"]],
        ),
        "I25bar" => ModulePresentation::from_expressions(
            r,
            names(&["a", "b"]),
            vec![0, 0],
            &[vec!["1 - s", "-2"], vec!["-3", "1 + s"]],
        ),
        "KUoverKO" | "KUoverKO_C2" => ModulePresentation::from_expressions(
            r,
            names(&["g0", "g2", "g4", "g6"]),
            vec![0, 2, 4, 6],
            &[
                vec!["eta", "0", "0", "0"],
                vec!["0", "eta", "0", "0"],
                vec!["0", "0", "eta", "0"],
                vec!["0", "0", "0", "eta"],
                vec!["y", "0", "-2", "0"],
                vec!["0", "y", "0", "-2"],
                vec!["-2*w", "0", "y", "0"],
                vec!["0", "-2*w", "0", "y"],
            ],
        ),
        _ => Err(Error::InvalidInput(format!("unknown module fixture {name:?}"))),
    }
}
