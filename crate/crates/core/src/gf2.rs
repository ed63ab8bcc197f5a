//! Arithmetic in GF(2^r), 1 <= r <= 16, in polynomial basis.
//!
//! Elements are plain bit patterns; the field they belong to is carried by a
//! [`FieldSpec`] that every operation takes explicitly.

use std::fmt;

use thiserror::Error;

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("degree {0} out of range 1..={MAX_DEGREE}")]
    DegreeOutOfRange(u32),
    #[error("polynomial {poly:#x} is not monic of degree {degree}")]
    WrongDegree { poly: u32, degree: u32 },
    #[error("polynomial {poly:#x} is reducible (divisible by {factor:#x})")]
    Reducible { poly: u32, factor: u32 },
    #[error("value {value:#x} is not an element of GF(2^{degree})")]
    ForeignElement { value: u32, degree: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("{sub} does not divide {degree}")]
    NotASubfield { sub: u32, degree: u32 },
}

/// Default reduction polynomials, indexed by degree. Entries include the
/// leading `X^r` bit.
pub const DEFAULT_POLYS: [u32; 17] = [
    0,
    0b11,                // X + 1
    0b111,               // X^2 + X + 1
    0b1011,              // X^3 + X + 1
    0b1_0011,            // X^4 + X + 1
    0b10_0101,           // X^5 + X^2 + 1
    0b100_0011,          // X^6 + X + 1
    0b1000_0011,         // X^7 + X + 1
    0b1_0001_1011,       // X^8 + X^4 + X^3 + X + 1
    0x211,               // X^9 + X^4 + 1
    0x409,               // X^10 + X^3 + 1
    0x805,               // X^11 + X^2 + 1
    0x1053,              // X^12 + X^6 + X^4 + X + 1
    0x201b,              // X^13 + X^4 + X^3 + X + 1
    0x4443,              // X^14 + X^10 + X^6 + X + 1
    0x8003,              // X^15 + X + 1
    0x1002d,             // X^16 + X^5 + X^3 + X^2 + 1
];

/// An element of GF(2^r) as a bit vector in polynomial basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Wraps a raw bit pattern without range checking.
    /// Use [`FieldSpec::element`] when the value comes from outside.
    #[inline]
    pub const fn from_raw(value: u16) -> Self {
        FieldElement(value)
    }

    #[inline]
    pub const fn value(self) -> u32 {
        self.0 as u32
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

/// Degree of a nonzero GF(2) polynomial given as a bit mask.
#[inline]
fn poly_degree(p: u32) -> u32 {
    31 - p.leading_zeros()
}

/// Remainder of `a` modulo `m` over GF(2).
fn poly_rem(mut a: u32, m: u32) -> u32 {
    let dm = poly_degree(m);
    while a != 0 && poly_degree(a) >= dm {
        a ^= m << (poly_degree(a) - dm);
    }
    a
}

/// Returns the first monic factor of degree `1..=deg/2`, if any.
fn find_factor(poly: u32) -> Option<u32> {
    let deg = poly_degree(poly);
    for d in 1..=deg / 2 {
        for low in 0..(1u32 << d) {
            let cand = (1 << d) | low;
            if poly_rem(poly, cand) == 0 {
                return Some(cand);
            }
        }
    }
    None
}

/// Description of GF(2^r): degree and irreducible reduction polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    degree: u32,
    poly: u32,
}

impl FieldSpec {
    /// Builds a field of degree `r`. `poly` is a bit mask including the
    /// leading term; `None` picks the built-in irreducible for `r`.
    /// The polynomial is always checked for irreducibility.
    pub fn new(r: u32, poly: Option<u32>) -> Result<Self, FieldError> {
        if !(1..=MAX_DEGREE).contains(&r) {
            return Err(FieldError::DegreeOutOfRange(r));
        }
        let poly = poly.unwrap_or(DEFAULT_POLYS[r as usize]);
        if poly == 0 || poly_degree(poly) != r {
            return Err(FieldError::WrongDegree { poly, degree: r });
        }
        if let Some(factor) = find_factor(poly) {
            return Err(FieldError::Reducible { poly, factor });
        }
        Ok(FieldSpec { degree: r, poly })
    }

    /// Field with the default polynomial for degree `r`.
    pub fn with_degree(r: u32) -> Result<Self, FieldError> {
        Self::new(r, None)
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Reduction polynomial including the leading bit.
    #[inline]
    pub fn poly(&self) -> u32 {
        self.poly
    }

    /// q = 2^r.
    #[inline]
    pub fn order(&self) -> usize {
        1usize << self.degree
    }

    #[inline]
    pub fn contains(&self, a: FieldElement) -> bool {
        a.value() >> self.degree == 0
    }

    pub fn element(&self, value: u32) -> Result<FieldElement, FieldError> {
        if value >> self.degree != 0 {
            return Err(FieldError::ForeignElement {
                value,
                degree: self.degree,
            });
        }
        Ok(FieldElement(value as u16))
    }

    /// Checks that every argument belongs to this field.
    pub fn check(&self, elems: &[FieldElement]) -> Result<(), FieldError> {
        match elems.iter().find(|a| !self.contains(**a)) {
            Some(a) => Err(FieldError::ForeignElement {
                value: a.value(),
                degree: self.degree,
            }),
            None => Ok(()),
        }
    }

    /// All elements in increasing bit order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (0..self.order() as u32).map(|v| FieldElement(v as u16))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (1..self.order() as u32).map(|v| FieldElement(v as u16))
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(self.contains(a) && self.contains(b), "element outside GF(2^{})", self.degree);
        FieldElement(a.0 ^ b.0)
    }

    pub fn checked_add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(&[a, b])?;
        Ok(FieldElement(a.0 ^ b.0))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(self.contains(a) && self.contains(b), "element outside GF(2^{})", self.degree);
        let (a, mut b) = (a.value(), b.value());
        if a == 0 || b == 0 {
            return FieldElement::ZERO;
        }
        let mut acc = 0u32;
        let mut shifted = a;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= shifted;
            }
            shifted <<= 1;
            b >>= 1;
        }
        FieldElement(self.reduce(acc) as u16)
    }

    pub fn checked_mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(&[a, b])?;
        Ok(self.mul(a, b))
    }

    #[inline]
    fn reduce(&self, mut x: u32) -> u32 {
        let r = self.degree;
        let mut top = 31 - x.leading_zeros().min(31);
        while x >> r != 0 {
            if x >> top & 1 == 1 {
                x ^= self.poly << (top - r);
            }
            top -= 1;
        }
        x
    }

    #[inline]
    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// a^(-1) = a^(q-2).
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        self.check(&[a])?;
        Ok(self.pow(a, self.order() as u64 - 2))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Frobenius power a^(2^i); `i` is taken mod r.
    pub fn frob(&self, a: FieldElement, i: u32) -> FieldElement {
        (0..i % self.degree).fold(a, |x, _| self.square(x))
    }

    /// Unique square root (inverse of the Frobenius map).
    pub fn sqrt(&self, a: FieldElement) -> FieldElement {
        self.frob(a, self.degree - 1)
    }

    /// Elements of the subfield GF(2^s), i.e. the fixed points of a -> a^(2^s).
    pub fn subfield(&self, s: u32) -> Result<Vec<FieldElement>, FieldError> {
        if s == 0 || !self.degree.is_multiple_of(s) {
            return Err(FieldError::NotASubfield {
                sub: s,
                degree: self.degree,
            });
        }
        Ok(self.elements().filter(|&a| self.frob(a, s) == a).collect())
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}) mod {:#x}", self.degree, self.poly)
    }
}

/// gcd on small non-negative integers.
pub fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
