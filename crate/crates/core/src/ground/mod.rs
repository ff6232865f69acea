//! Euclidean ground rings and exact linear algebra over them.
//!
//! Every scalar is a reduced fraction (`BigRational`); the ground ring decides
//! which fractions are admissible and how division with remainder works.
//! Prime-field scalars are stored as integers in `0..p`.

mod lattice;
mod matrix;

pub use lattice::Lattice;
pub use matrix::{cokernel_invariants, solve_linear, GroundMatrix, Invariants, InvariantsJson, SmithDecomposition};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The coefficient ring underneath a graded ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroundRing {
    Integers,
    Rationals,
    PrimeField(u64),
    /// `Z_(p)`: fractions whose denominator is prime to `p`.
    LocalizedAt(u64),
    /// `Z[1/n]`: fractions whose denominator only involves primes dividing `n`.
    InvertedAt(u64),
}

impl fmt::Display for GroundRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroundRing::Integers => write!(f, "Z"),
            GroundRing::Rationals => write!(f, "Q"),
            GroundRing::PrimeField(p) => write!(f, "Fp:{p}"),
            GroundRing::LocalizedAt(p) => write!(f, "Zloc:{p}"),
            GroundRing::InvertedAt(n) => write!(f, "Zinv:{n}"),
        }
    }
}

impl GroundRing {
    pub fn prime_field(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        Ok(GroundRing::PrimeField(p))
    }

    pub fn localized_at(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        Ok(GroundRing::LocalizedAt(p))
    }

    pub fn inverted_at(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("cannot invert {n}: need n >= 2")));
        }
        Ok(GroundRing::InvertedAt(n))
    }

    /// Parses the document spelling: `Z`, `Q`, `Fp:<p>`, `Zloc:<p>`, `Zinv:<n>`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let num = |s: &str| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| Error::Schema(format!("bad ground parameter in {text:?}")))
        };
        match text {
            "Z" => Ok(GroundRing::Integers),
            "Q" => Ok(GroundRing::Rationals),
            _ => {
                if let Some(rest) = text.strip_prefix("Fp:") {
                    Self::prime_field(num(rest)?)
                } else if let Some(rest) = text.strip_prefix("Zloc:") {
                    Self::localized_at(num(rest)?)
                } else if let Some(rest) = text.strip_prefix("Zinv:") {
                    Self::inverted_at(num(rest)?)
                } else {
                    Err(Error::Schema(format!("unknown ground ring {text:?}")))
                }
            }
        }
    }

    pub fn is_field(&self) -> bool {
        matches!(self, GroundRing::Rationals | GroundRing::PrimeField(_))
    }

    /// Characteristic of the residue field when the ground is local or a field.
    pub fn residue_characteristic(&self) -> Option<u64> {
        match self {
            GroundRing::PrimeField(p) | GroundRing::LocalizedAt(p) => Some(*p),
            GroundRing::Rationals => Some(0),
            _ => None,
        }
    }

    fn fp(&self) -> Option<BigInt> {
        match self {
            GroundRing::PrimeField(p) => Some(BigInt::from(*p)),
            _ => None,
        }
    }

    /// Whether a fraction is an element of this ground ring.
    pub fn contains(&self, x: &Scalar) -> bool {
        let den = x.denom();
        match self {
            GroundRing::Integers => den.is_one(),
            GroundRing::Rationals => true,
            GroundRing::PrimeField(p) => {
                den.is_one() && !x.numer().is_negative() && x.numer() < &BigInt::from(*p)
            }
            GroundRing::LocalizedAt(p) => !(den % BigInt::from(*p)).is_zero(),
            GroundRing::InvertedAt(n) => self.strip_inverted(den, *n).is_one(),
        }
    }

    /// Removes every prime factor of `n` from `m`.
    fn strip_inverted(&self, m: &BigInt, n: u64) -> BigInt {
        let mut m = m.abs();
        if m.is_zero() {
            return m;
        }
        for q in prime_factors(n) {
            let q = BigInt::from(q);
            while (&m % &q).is_zero() {
                m /= &q;
            }
        }
        m
    }

    /// Maps a fraction into the ground ring, failing when its denominator is
    /// not a unit here.
    pub fn embed(&self, x: &Scalar) -> Result<Scalar> {
        if let Some(p) = self.fp() {
            let den = x.denom();
            if (den % &p).is_zero() {
                return Err(Error::InvalidInput(format!("denominator of {x} vanishes mod {p}")));
            }
            let inv = den.modpow(&(&p - 2u32), &p);
            let v = (x.numer() * inv).mod_floor(&p);
            return Ok(BigRational::from_integer(v));
        }
        if self.contains(x) {
            Ok(x.clone())
        } else {
            Err(Error::InvalidInput(format!("{x} is not an element of {self}")))
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        self.embed(&int(n)).expect("integers embed in every ground ring")
    }

    fn reduce(&self, x: Scalar) -> Scalar {
        match self.fp() {
            Some(p) => BigRational::from_integer(x.numer().mod_floor(&p)),
            None => x,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a + b)
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a - b)
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a * b)
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.reduce(-a)
    }

    pub fn is_unit(&self, x: &Scalar) -> bool {
        if x.is_zero() {
            return false;
        }
        match self {
            GroundRing::Integers => x.numer().abs().is_one(),
            GroundRing::Rationals | GroundRing::PrimeField(_) => true,
            GroundRing::LocalizedAt(p) => !(x.numer() % BigInt::from(*p)).is_zero(),
            GroundRing::InvertedAt(n) => self.strip_inverted(x.numer(), *n).is_one(),
        }
    }

    pub fn inverse(&self, x: &Scalar) -> Option<Scalar> {
        if !self.is_unit(x) {
            return None;
        }
        match self.fp() {
            Some(p) => {
                let inv = x.numer().modpow(&(&p - 2u32), &p);
                Some(BigRational::from_integer(inv))
            }
            None => Some(x.recip()),
        }
    }

    /// Exact quotient `a / b` when it exists in the ground ring.
    pub fn divide(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        if b.is_zero() {
            return if a.is_zero() { Some(Scalar::zero()) } else { None };
        }
        match self.fp() {
            Some(_) => Some(self.mul(a, &self.inverse(b)?)),
            None => {
                let q = a / b;
                self.contains(&q).then_some(q)
            }
        }
    }

    /// Canonical associate: `x = unit * normalized`, with `normalized`
    /// nonnegative for the integers, a power of `p` for `Z_(p)`, the prime-to-`n`
    /// part of the numerator for `Z[1/n]` and `1` for fields.
    pub fn normalize(&self, x: &Scalar) -> (Scalar, Scalar) {
        if x.is_zero() {
            return (Scalar::one(), Scalar::zero());
        }
        let normalized = match self {
            GroundRing::Integers => x.abs(),
            GroundRing::Rationals | GroundRing::PrimeField(_) => Scalar::one(),
            GroundRing::LocalizedAt(p) => {
                let p = BigInt::from(*p);
                let mut m = x.numer().abs();
                let mut out = BigInt::one();
                while (&m % &p).is_zero() {
                    m /= &p;
                    out *= &p;
                }
                BigRational::from_integer(out)
            }
            GroundRing::InvertedAt(n) => BigRational::from_integer(self.strip_inverted(x.numer(), *n)),
        };
        let unit = self.divide(x, &normalized).expect("normalized part divides x");
        (unit, normalized)
    }

    /// Euclidean size; only comparisons between sizes are meaningful.
    pub fn size(&self, x: &Scalar) -> BigInt {
        if x.is_zero() {
            return BigInt::zero();
        }
        self.normalize(x).1.to_integer()
    }

    /// Division with remainder: `a = q*b + r` with `size(r) < size(b)`.
    pub fn div_rem(&self, a: &Scalar, b: &Scalar) -> (Scalar, Scalar) {
        assert!(!b.is_zero(), "division by zero");
        match self {
            GroundRing::Rationals | GroundRing::PrimeField(_) => {
                (self.divide(a, b).expect("field division"), Scalar::zero())
            }
            GroundRing::Integers => {
                let bi = b.to_integer();
                let r = a.to_integer().mod_floor(&bi.abs());
                let q = (a.to_integer() - &r) / &bi;
                (BigRational::from_integer(q), BigRational::from_integer(r))
            }
            GroundRing::LocalizedAt(_) => match self.divide(a, b) {
                Some(q) => (q, Scalar::zero()),
                None => (Scalar::zero(), a.clone()),
            },
            GroundRing::InvertedAt(_) => {
                if a.is_zero() {
                    return (Scalar::zero(), Scalar::zero());
                }
                let (ua, big_a) = self.normalize(a);
                let (ub, big_b) = self.normalize(b);
                let (ai, bi) = (big_a.to_integer(), big_b.to_integer());
                let (q0, r0) = ai.div_mod_floor(&bi);
                let q = &ua * BigRational::from_integer(q0) / &ub;
                let r = &ua * BigRational::from_integer(r0);
                (q, r)
            }
        }
    }

    /// Canonical representative of `a` modulo the normalized element `d`.
    pub fn canonical_residue(&self, a: &Scalar, d: &Scalar) -> Scalar {
        if d.is_zero() {
            return a.clone();
        }
        if self.is_unit(d) {
            return Scalar::zero();
        }
        let modulus = self.normalize(d).1.to_integer();
        match self {
            GroundRing::Integers => BigRational::from_integer(a.to_integer().mod_floor(&modulus)),
            GroundRing::LocalizedAt(_) | GroundRing::InvertedAt(_) => {
                let den_inv = a
                    .denom()
                    .extended_gcd(&modulus)
                    .x
                    .mod_floor(&modulus);
                BigRational::from_integer((a.numer() * den_inv).mod_floor(&modulus))
            }
            GroundRing::Rationals | GroundRing::PrimeField(_) => Scalar::zero(),
        }
    }

    /// Extended gcd: `x*a + y*b = g` with `g` in canonical normalization.
    pub fn gcd_bezout(&self, a: &Scalar, b: &Scalar) -> (Scalar, Scalar, Scalar) {
        if a.is_zero() && b.is_zero() {
            return (Scalar::zero(), Scalar::zero(), Scalar::zero());
        }
        // invariant: r0 = x0*a + y0*b, r1 = x1*a + y1*b
        let (mut r0, mut x0, mut y0) = (a.clone(), Scalar::one(), Scalar::zero());
        let (mut r1, mut x1, mut y1) = (b.clone(), Scalar::zero(), Scalar::one());
        while !r1.is_zero() {
            let (q, r) = self.div_rem(&r0, &r1);
            let x2 = self.sub(&x0, &self.mul(&q, &x1));
            let y2 = self.sub(&y0, &self.mul(&q, &y1));
            r0 = std::mem::replace(&mut r1, r);
            x0 = std::mem::replace(&mut x1, x2);
            y0 = std::mem::replace(&mut y1, y2);
        }
        let (unit, g) = self.normalize(&r0);
        let inv = self.inverse(&unit).expect("unit part is invertible");
        (g, self.mul(&x0, &inv), self.mul(&y0, &inv))
    }

    /// Renders a scalar the way documents spell it.
    pub fn format(&self, x: &Scalar) -> String {
        if x.denom().is_one() {
            x.numer().to_string()
        } else {
            format!("{}/{}", x.numer(), x.denom())
        }
    }

    pub fn modulus_u64(x: &Scalar) -> Option<u64> {
        if x.denom().is_one() {
            x.numer().to_u64()
        } else {
            None
        }
    }
}
