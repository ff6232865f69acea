//! Graded-commutative ring presentations.
//!
//! A presentation is split at construction into two parts:
//!
//! * **rules** `g^k -> tail`, one per generator, taken from relations that
//!   contain a pure power of a non-invertible generator with unit coefficient
//!   and whose other monomials have smaller `g`-exponent. Distinct rules have
//!   coprime leading powers, so rewriting by them is confluent;
//! * **linear relations**, everything else, imposed degreewise as the ground
//!   span of `m * r` over reduced monomials `m`.
//!
//! A degree piece is the ground module on the rule-reduced monomials of that
//! degree modulo the lattice spanned by the linear relations. Normal forms
//! reduce coordinates canonically modulo that lattice.

mod basis;
mod element;
mod expr;
mod group;
mod local;

pub use basis::DegreeBasis;
pub use element::{Monomial, RingElement};
pub use local::{EilenbergVerdict, GradedFieldVerdict, ResidueQuotient};

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ground::{GroundRing, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_degree(d: i64) -> Parity {
        if d.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    Polynomial,
    Invertible,
    /// `g^k = 0`.
    Nilpotent(u32),
    /// Satisfies a monic relation `g^k + (lower powers) = 0`; degree zero.
    Integral(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorDecl {
    pub name: String,
    pub degree: i64,
    pub parity: Parity,
    pub kind: GeneratorKind,
}

impl GeneratorDecl {
    pub fn new(name: &str, degree: i64, kind: GeneratorKind) -> Self {
        GeneratorDecl { name: name.into(), degree, parity: Parity::of_degree(degree), kind }
    }
}

/// Declared hypotheses. Never computed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct RingFlags {
    pub connective: Option<bool>,
    pub coherent: Option<bool>,
    pub graded_local: Option<bool>,
    /// Degree-zero generators of the maximal ideal, as expressions.
    pub max_ideal0: Vec<String>,
    pub global_dimension: Option<u32>,
    /// Localizing the ground at any prime yields a graded-local ring whose
    /// degree-zero maximal ideal is generated by that prime.
    pub local_at_each_prime: Option<bool>,
    /// Degrees outside this window are not modelled.
    pub window: Option<(i64, i64)>,
}

#[derive(Debug, Clone)]
struct Rule {
    power: i64,
    tail: RingElement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    /// Unbounded generators are polynomial of positive degree.
    Positive,
    /// A single unbounded invertible generator and nothing else unbounded.
    Periodic(usize),
}

pub type Ring = Arc<RingPresentation>;

pub struct RingPresentation {
    ground: GroundRing,
    generators: Vec<GeneratorDecl>,
    names: Vec<String>,
    odd: Vec<bool>,
    relations: Vec<RingElement>,
    auto_relations: Vec<RingElement>,
    rules: Vec<Option<Rule>>,
    linear: Vec<(RingElement, i64)>,
    shape: Shape,
    flags: RingFlags,
    max_ideal0: Vec<RingElement>,
    basis_cache: Mutex<HashMap<i64, Arc<DegreeBasis>>>,
    rewrite_cache: Mutex<HashMap<Monomial, RingElement>>,
}

impl fmt::Debug for RingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingPresentation({self})")
    }
}

impl fmt::Display for RingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| format!("{}({})", g.name, g.degree)).collect();
        let rels: Vec<String> = self.relations.iter().map(|r| self.format(r)).collect();
        write!(f, "{}[{}]/({})", self.ground, gens.join(", "), rels.join(", "))
    }
}

impl PartialEq for RingPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.ground == other.ground
            && self.generators == other.generators
            && self.relations == other.relations
            && self.flags == other.flags
    }
}

impl Eq for RingPresentation {}

/// Product of monomials `a * b` with the Koszul sign of moving odd factors of
/// `b` past odd factors of `a`; the flag is true when the sign is negative.
pub(crate) fn monomial_product(a: &Monomial, b: &Monomial, odd: &[bool]) -> (Monomial, bool) {
    let (ae, be) = (a.exponents(), b.exponents());
    let mut passed = 0i64;
    let mut sign = 0i64;
    for k in 0..ae.len() {
        if odd[k] {
            sign += ae[k].rem_euclid(2) * passed;
            passed += be[k].rem_euclid(2);
        }
    }
    let m = Monomial(ae.iter().zip(be).map(|(x, y)| x + y).collect());
    (m, sign % 2 == 1)
}

const REWRITE_CAP: usize = 200_000;

impl RingPresentation {
    /// Validates and assembles a presentation.
    pub fn new(
        ground: GroundRing,
        generators: Vec<GeneratorDecl>,
        relations: Vec<RingElement>,
        flags: RingFlags,
    ) -> Result<Ring> {
        let names: Vec<String> = generators.iter().map(|g| g.name.clone()).collect();
        let odd: Vec<bool> = generators.iter().map(|g| g.parity == Parity::Odd).collect();
        for (i, g) in generators.iter().enumerate() {
            let valid_name = g.name.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                && g.name.chars().all(|c| c.is_alphanumeric() || c == '_');
            if !valid_name {
                return Err(Error::Validation(format!("invalid generator name {:?}", g.name)));
            }
            if names[..i].contains(&g.name) {
                return Err(Error::Validation(format!("duplicate generator name {:?}", g.name)));
            }
            if g.parity != Parity::of_degree(g.degree) {
                return Err(Error::Validation(format!("parity of {} does not match its degree {}", g.name, g.degree)));
            }
            match g.kind {
                GeneratorKind::Polynomial if g.degree <= 0 => {
                    return Err(Error::Validation(format!(
                        "polynomial generator {} must have positive degree, not {}",
                        g.name, g.degree
                    )))
                }
                GeneratorKind::Invertible if g.degree == 0 => {
                    return Err(Error::Validation(format!(
                        "invertible generator {} of degree 0 must be declared integral",
                        g.name
                    )))
                }
                GeneratorKind::Nilpotent(k) if k < 2 => {
                    return Err(Error::Validation(format!("nilpotence bound of {} must be at least 2", g.name)))
                }
                GeneratorKind::Integral(k) if k < 2 || g.degree != 0 => {
                    return Err(Error::Validation(format!(
                        "integral generator {} needs exponent at least 2 and degree 0",
                        g.name
                    )))
                }
                _ => {}
            }
        }

        let mut ring = RingPresentation {
            ground,
            generators,
            names,
            odd,
            relations: Vec::new(),
            auto_relations: Vec::new(),
            rules: Vec::new(),
            linear: Vec::new(),
            shape: Shape::Positive,
            flags,
            max_ideal0: Vec::new(),
            basis_cache: Mutex::new(HashMap::new()),
            rewrite_cache: Mutex::new(HashMap::new()),
        };

        let mut rels: Vec<RingElement> = Vec::new();
        for r in relations {
            let r = r.map_coefficients(|c| ring.ground.embed(c))?;
            if r.is_zero() {
                continue;
            }
            ring.check_exponents(&r)?;
            ring.homogeneous_degree(&r)?;
            rels.push(r);
        }
        let mut keyed: Vec<(String, RingElement)> = rels.into_iter().map(|r| (ring.format(&r), r)).collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        keyed.dedup_by(|a, b| a.0 == b.0);
        ring.relations = keyed.into_iter().map(|(_, r)| r).collect();

        ring.install_rules()?;
        ring.shape = ring.classify()?;
        ring.max_ideal0 = ring
            .flags
            .max_ideal0
            .iter()
            .map(|s| {
                let e = ring.parse(s)?;
                match ring.homogeneous_degree(&e)? {
                    Some(0) | None => Ok(e),
                    Some(d) => Err(Error::Validation(format!("maximal-ideal generator {s:?} has degree {d}, not 0"))),
                }
            })
            .collect::<Result<_>>()?;
        Ok(Arc::new(ring))
    }

    fn check_exponents(&self, e: &RingElement) -> Result<()> {
        for (m, _) in e.terms() {
            for (i, &x) in m.exponents().iter().enumerate() {
                if x < 0 && self.generators[i].kind != GeneratorKind::Invertible {
                    return Err(Error::Validation(format!(
                        "negative power of non-invertible generator {}",
                        self.names[i]
                    )));
                }
            }
        }
        Ok(())
    }

    fn install_rules(&mut self) -> Result<()> {
        let n = self.generators.len();
        let mut rules: Vec<Option<Rule>> = vec![None; n];
        for (i, g) in self.generators.iter().enumerate() {
            if let GeneratorKind::Nilpotent(k) = g.kind {
                rules[i] = Some(Rule { power: k as i64, tail: RingElement::zero() });
            }
        }
        let mut linear = Vec::new();
        for r in &self.relations {
            let mut used = false;
            for i in 0..n {
                if rules[i].is_some() || self.generators[i].kind == GeneratorKind::Invertible {
                    continue;
                }
                let pure = r.terms().find(|(m, _)| {
                    m.exponents().iter().enumerate().all(|(j, &e)| if j == i { e > 0 } else { e == 0 })
                });
                let Some((lead, c)) = pure else { continue };
                let k = lead.exponents()[i];
                if !self.ground.is_unit(c) || r.terms().any(|(m, _)| m != lead && m.exponents()[i] >= k) {
                    continue;
                }
                let inv = self.ground.inverse(c).expect("unit");
                let tail = RingElement::from_terms(
                    r.terms()
                        .filter(|(m, _)| *m != lead)
                        .map(|(m, x)| (m.clone(), self.ground.neg(&self.ground.mul(x, &inv)))),
                    |a, b| self.ground.add(a, b),
                );
                rules[i] = Some(Rule { power: k, tail });
                used = true;
                break;
            }
            if !used {
                let d = self.homogeneous_degree(r)?.expect("nonzero relation");
                linear.push((r.clone(), d));
            }
        }
        for (i, g) in self.generators.iter().enumerate() {
            if let GeneratorKind::Integral(k) = g.kind {
                match &rules[i] {
                    Some(rule) if rule.power == k as i64 => {}
                    _ => {
                        return Err(Error::Validation(format!(
                            "integral generator {} needs a monic relation {}^{k} + (lower powers)",
                            g.name, g.name
                        )))
                    }
                }
            }
        }
        // graded commutativity forces 2 g^2 = 0 for odd g
        for (i, g) in self.generators.iter().enumerate() {
            if g.parity != Parity::Odd {
                continue;
            }
            if rules[i].as_ref().is_some_and(|r| r.power <= 2) {
                continue;
            }
            let g1 = Monomial::generator(n, i, 1);
            let two = self.ground.from_i64(2);
            let killed = self.relations.iter().any(|r| {
                r.len() == 1 && r.coefficient(&g1).is_some_and(|c| self.ground.divide(&two, c).is_some())
            });
            if killed {
                continue;
            }
            let rel = RingElement::monomial(Monomial::generator(n, i, 2), two);
            if rel.is_zero() {
                continue;
            }
            linear.push((rel.clone(), 2 * g.degree));
            self.auto_relations.push(rel);
        }
        self.rules = rules;
        self.linear = linear;
        Ok(())
    }

    fn classify(&self) -> Result<Shape> {
        let mut invertible = Vec::new();
        let mut poly = 0;
        for (i, g) in self.generators.iter().enumerate() {
            if self.rules[i].is_some() {
                continue;
            }
            match g.kind {
                GeneratorKind::Invertible => invertible.push(i),
                GeneratorKind::Polynomial => poly += 1,
                _ => {}
            }
        }
        match (invertible.as_slice(), poly) {
            ([], _) => Ok(Shape::Positive),
            ([g], 0) => Ok(Shape::Periodic(*g)),
            _ => Err(Error::Validation(
                "unbounded degree basis: unbounded invertible generators must be alone".into(),
            )),
        }
    }

    pub fn ground(&self) -> &GroundRing {
        &self.ground
    }

    pub fn generators(&self) -> &[GeneratorDecl] {
        &self.generators
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn flags(&self) -> &RingFlags {
        &self.flags
    }

    /// Declared relations in canonical order; auto-added ones excluded.
    pub fn relations(&self) -> &[RingElement] {
        &self.relations
    }

    pub fn auto_relations(&self) -> &[RingElement] {
        &self.auto_relations
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Degree of the unique unbounded invertible generator, if any.
    pub fn period(&self) -> Option<i64> {
        match self.shape {
            Shape::Periodic(g) => Some(self.generators[g].degree.abs()),
            Shape::Positive => None,
        }
    }

    /// No element of negative degree: every generator has degree at least
    /// zero and none of nonzero degree is invertible.
    pub fn is_connective(&self) -> bool {
        self.shape == Shape::Positive && self.generators.iter().all(|g| g.degree >= 0)
    }

    /// Largest degree of a linear relation or rule, a bound on how far
    /// relations reach.
    pub fn max_relation_degree(&self) -> i64 {
        let lin = self.linear.iter().map(|(_, d)| d.abs());
        let rules = self
            .rules
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.as_ref().map(|r| (r.power * self.generators[i].degree).abs()));
        lin.chain(rules).max().unwrap_or(0)
    }

    pub fn parse(&self, text: &str) -> Result<RingElement> {
        let sig = expr::Signature { names: &self.names, odd: &self.odd, ground: &self.ground };
        let e = expr::parse(text, &sig)?;
        self.check_exponents(&e)?;
        Ok(e)
    }

    pub fn format(&self, e: &RingElement) -> String {
        expr::format(e, &self.names, &self.ground)
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        expr::format_monomial(m, &self.names)
    }

    pub fn one(&self) -> RingElement {
        RingElement::monomial(Monomial::one(self.generators.len()), Scalar::one())
    }

    pub fn constant(&self, c: &Scalar) -> RingElement {
        RingElement::monomial(Monomial::one(self.generators.len()), c.clone())
    }

    pub fn generator(&self, i: usize) -> RingElement {
        RingElement::monomial(Monomial::generator(self.generators.len(), i, 1), Scalar::one())
    }

    pub fn monomial_degree(&self, m: &Monomial) -> i64 {
        m.exponents().iter().zip(&self.generators).map(|(e, g)| e * g.degree).sum()
    }

    pub fn monomial_is_odd(&self, m: &Monomial) -> bool {
        self.monomial_degree(m).rem_euclid(2) == 1
    }

    /// `None` for zero; an error when terms of several degrees occur.
    pub fn homogeneous_degree(&self, e: &RingElement) -> Result<Option<i64>> {
        let mut deg = None;
        for (m, _) in e.terms() {
            let d = self.monomial_degree(m);
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 != d => {
                    return Err(Error::Inhomogeneous(format!(
                        "{} mixes degrees {d0} and {d}",
                        self.format(e)
                    )))
                }
                _ => {}
            }
        }
        Ok(deg)
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let k = &self.ground;
        RingElement::from_terms(
            a.terms().chain(b.terms()).map(|(m, c)| (m.clone(), c.clone())),
            |x, y| k.add(x, y),
        )
    }

    pub fn neg(&self, a: &RingElement) -> RingElement {
        self.scale(a, &self.ground.from_i64(-1))
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> RingElement {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &RingElement, c: &Scalar) -> RingElement {
        let k = &self.ground;
        RingElement::from_terms(a.terms().map(|(m, x)| (m.clone(), k.mul(x, c))), |x, y| k.add(x, y))
    }

    /// Product of raw monomial combinations, signs applied, no rewriting.
    fn product_raw(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let k = &self.ground;
        let mut terms = Vec::with_capacity(a.len() * b.len());
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                let (m, neg) = monomial_product(ma, mb, &self.odd);
                let c = k.mul(ca, cb);
                terms.push((m, if neg { k.neg(&c) } else { c }));
            }
        }
        RingElement::from_terms(terms, |x, y| k.add(x, y))
    }

    fn rewrite_monomial(&self, m: &Monomial) -> Result<RingElement> {
        if let Some(hit) = self.rewrite_cache.lock().expect("cache lock").get(m) {
            return Ok(hit.clone());
        }
        let k = &self.ground;
        let mut pending: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        pending.insert(m.clone(), Scalar::one());
        let mut done: Vec<(Monomial, Scalar)> = Vec::new();
        let mut steps = 0usize;
        while let Some((mono, c)) = pending.pop_first() {
            let hit = self.rules.iter().enumerate().find_map(|(i, r)| {
                r.as_ref().filter(|r| mono.exponents()[i] >= r.power).map(|r| (i, r))
            });
            let Some((i, rule)) = hit else {
                done.push((mono, c));
                continue;
            };
            steps += 1;
            if steps > REWRITE_CAP {
                return Err(Error::Validation("rewriting by the relations does not terminate".into()));
            }
            let n = self.generators.len();
            let mut rest = mono.clone();
            rest.0[i] -= rule.power;
            let (_, neg) = monomial_product(&Monomial::generator(n, i, rule.power), &rest, &self.odd);
            let c = if neg { k.neg(&c) } else { c };
            let rest_el = RingElement::monomial(rest, Scalar::one());
            for (tm, tc) in self.product_raw(&rule.tail, &rest_el).into_terms() {
                let add = k.mul(&c, &tc);
                let slot = pending.entry(tm).or_insert_with(Scalar::zero);
                *slot = k.add(slot, &add);
            }
            pending.retain(|_, x| !x.is_zero());
        }
        let out = RingElement::from_terms(done, |x, y| k.add(x, y));
        self.rewrite_cache.lock().expect("cache lock").insert(m.clone(), out.clone());
        Ok(out)
    }

    /// Rewrites by the rules only; the result involves reduced monomials.
    pub fn rewrite(&self, e: &RingElement) -> Result<RingElement> {
        let k = &self.ground;
        let mut terms = Vec::new();
        for (m, c) in e.terms() {
            for (rm, rc) in self.rewrite_monomial(m)?.into_terms() {
                terms.push((rm, k.mul(c, &rc)));
            }
        }
        Ok(RingElement::from_terms(terms, |x, y| k.add(x, y)))
    }

    /// Rule-rewritten product, not reduced modulo linear relations.
    pub fn mul_reduced(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        self.rewrite(&self.product_raw(a, b))
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        self.normal_form(&self.product_raw(a, b))
    }

    pub fn pow(&self, a: &RingElement, e: u32) -> Result<RingElement> {
        let mut out = self.one();
        for _ in 0..e {
            out = self.mul(&out, a)?;
        }
        Ok(out)
    }

    /// Canonical representative: equal elements have identical normal forms.
    pub fn normal_form(&self, e: &RingElement) -> Result<RingElement> {
        let r = self.rewrite(e)?;
        let mut by_degree: BTreeMap<i64, Vec<(Monomial, Scalar)>> = BTreeMap::new();
        for (m, c) in r.into_terms() {
            by_degree.entry(self.monomial_degree(&m)).or_default().push((m, c));
        }
        let k = &self.ground;
        let mut out = Vec::new();
        for (d, terms) in by_degree {
            let basis = self.degree_basis(d)?;
            let part = RingElement::from_terms(terms, |x, y| k.add(x, y));
            let v = basis.coordinates_of_reduced(&part)?;
            let v = basis.relations.reduce(k, &v);
            out.extend(basis.element_terms(&v));
        }
        Ok(RingElement::from_terms(out, |x, y| k.add(x, y)))
    }

    pub fn is_zero_element(&self, e: &RingElement) -> Result<bool> {
        Ok(self.normal_form(e)?.is_zero())
    }

    /// Coordinates of a homogeneous element of degree `d` on the reduced
    /// monomials of that degree, before reduction modulo linear relations.
    pub fn coordinates(&self, d: i64, e: &RingElement) -> Result<Vec<Scalar>> {
        let basis = self.degree_basis(d)?;
        basis.coordinates_of_reduced(&self.rewrite(e)?)
    }

    pub fn check_window(&self, d: i64) -> Result<()> {
        if let Some((lo, hi)) = self.flags.window {
            if d < lo || d > hi {
                return Err(Error::WindowExceeded { degree: d, lo, hi });
            }
        }
        Ok(())
    }

    pub fn degree_basis(&self, d: i64) -> Result<Arc<DegreeBasis>> {
        self.check_window(d)?;
        if let Some(hit) = self.basis_cache.lock().expect("cache lock").get(&d) {
            return Ok(hit.clone());
        }
        let b = Arc::new(DegreeBasis::compute(self, d)?);
        self.basis_cache.lock().expect("cache lock").insert(d, b.clone());
        Ok(b)
    }

    /// Same generators, relations extended by `ideal`.
    pub fn quotient_ring(&self, ideal: &[RingElement]) -> Result<Ring> {
        let mut rels = self.relations.clone();
        for g in ideal {
            self.homogeneous_degree(g)?;
            rels.push(g.clone());
        }
        RingPresentation::new(self.ground.clone(), self.generators.clone(), rels, self.flags.clone())
    }

    /// Rebuilds the presentation over another ground ring.
    pub fn with_ground(&self, ground: GroundRing, flags: RingFlags) -> Result<Ring> {
        let rels: Result<Vec<RingElement>> =
            self.relations.iter().map(|r| r.map_coefficients(|c| ground.embed(c))).collect();
        RingPresentation::new(ground, self.generators.clone(), rels?, flags)
    }

    pub fn localize_ground(&self, at: Localization) -> Result<Ring> {
        let ground = match (&self.ground, at) {
            (GroundRing::Integers, Localization::Prime(p)) => GroundRing::localized_at(p)?,
            (GroundRing::Integers, Localization::Invert(n)) => GroundRing::inverted_at(n)?,
            (GroundRing::LocalizedAt(q), Localization::Prime(p)) if *q == p => self.ground.clone(),
            (GroundRing::Rationals | GroundRing::PrimeField(_), Localization::Prime(p)) => {
                GroundRing::localized_at(p)?;
                self.ground.clone()
            }
            (g, at) => {
                return Err(Error::InvalidInput(format!("cannot localize ground {g} at {at:?}")));
            }
        };
        let mut flags = self.flags.clone();
        if let (Localization::Prime(p), Some(true)) = (at, self.flags.local_at_each_prime) {
            if matches!(ground, GroundRing::LocalizedAt(_)) {
                flags.graded_local = Some(true);
                flags.max_ideal0 = vec![p.to_string()];
            }
        }
        self.with_ground(ground, flags)
    }

    /// Homogeneous generators of the maximal graded ideal.
    pub fn graded_max_ideal(&self) -> Result<Vec<RingElement>> {
        if self.flags.graded_local != Some(true) {
            return Err(Error::NotGradedLocal);
        }
        let mut out = self.max_ideal0.clone();
        for (i, g) in self.generators.iter().enumerate() {
            let in_ideal = match g.kind {
                GeneratorKind::Invertible | GeneratorKind::Integral(_) => false,
                GeneratorKind::Nilpotent(_) => true,
                GeneratorKind::Polynomial => g.degree != 0,
            };
            if in_ideal {
                out.push(self.generator(i));
            }
        }
        Ok(out)
    }

    /// Whether `e` (homogeneous) lies in the ideal generated by `ideal`,
    /// decided in the quotient ring.
    pub fn ideal_contains(&self, ideal: &[RingElement], e: &RingElement) -> Result<bool> {
        let q = self.quotient_ring(ideal)?;
        q.is_zero_element(e)
    }

    /// Extends the presentation by fresh generators; `relations` are parsed
    /// against the extended generator list.
    pub fn extend(&self, new_generators: Vec<GeneratorDecl>, relations: &[String], flags: RingFlags) -> Result<Ring> {
        let extra = new_generators.len();
        let mut gens = self.generators.clone();
        gens.extend(new_generators);
        let mut rels: Vec<RingElement> = self.relations.iter().map(|r| r.extended(extra)).collect();
        for text in relations {
            rels.push(parse_against(&gens, &self.ground, text)?);
        }
        RingPresentation::new(self.ground.clone(), gens, rels, flags)
    }

    /// Builds a presentation from relation expressions.
    pub fn from_relations<S: AsRef<str>>(
        ground: GroundRing,
        generators: Vec<GeneratorDecl>,
        relations: &[S],
        flags: RingFlags,
    ) -> Result<Ring> {
        let rels: Result<Vec<RingElement>> =
            relations.iter().map(|t| parse_against(&generators, &ground, t.as_ref())).collect();
        RingPresentation::new(ground, generators, rels?, flags)
    }

    /// Rule-reduced monomials of degree `d`, ignoring the window.
    pub fn reduced_monomials(&self, d: i64) -> Vec<Monomial> {
        basis::enumerate(self, d)
    }

    /// Whether the element is a unit of the ring, tested by solving `e * x = 1`
    /// in the degree piece of `-deg e`.
    pub fn is_unit_element(&self, e: &RingElement) -> Result<bool> {
        let e = self.normal_form(e)?;
        let Some(d) = self.homogeneous_degree(&e)? else { return Ok(false) };
        let target = self.degree_basis(-d)?;
        let zero = self.degree_basis(0)?;
        let k = &self.ground;
        let one = zero.relations.reduce(k, &zero.coordinates_of_reduced(&self.one())?);
        let mut columns = Vec::new();
        for m in target.monomials() {
            let p = self.mul_reduced(&e, &RingElement::monomial(m.clone(), Scalar::one()))?;
            columns.push(zero.coordinates_of_reduced(&p)?);
        }
        columns.extend(zero.relations.basis().iter().cloned());
        let a = crate::ground::GroundMatrix::from_columns(&columns, zero.monomials().len());
        Ok(crate::ground::solve_linear(k, &a, &one)?.is_some())
    }
}

fn parse_against(generators: &[GeneratorDecl], ground: &GroundRing, text: &str) -> Result<RingElement> {
    let names: Vec<String> = generators.iter().map(|g| g.name.clone()).collect();
    let odd: Vec<bool> = generators.iter().map(|g| g.parity == Parity::Odd).collect();
    expr::parse(text, &expr::Signature { names: &names, odd: &odd, ground })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Localization {
    Prime(u64),
    Invert(u64),
}

#[cfg(test)]
mod tests;
