//! Small finite fields GF(p^m) with p in {2, 3}.
//!
//! An element is a polynomial over GF(p) of degree below `m`, reduced modulo
//! an irreducible modulus. Internally each element is also packed into
//! a single byte, `code = c_0 + c_1 p + ... + c_{m-1} p^{m-1}`, so that code
//! order equals lexicographic order on the coefficient vector read from the top
//! degree down. The bulk linear algebra elsewhere in the crate works on codes
//! through lookup tables that are filled, once per field, by the coefficient
//! vector arithmetic in this module.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Characteristic, degree and modulus of a field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
    m: u32,
    /// Monic modulus, ascending degree, length m + 1.
    modulus: Vec<u32>,
}

impl FieldSpec {
    /// Validates `modulus` (ascending coefficients, degree exactly `m`) and
    /// normalizes it to be monic.
    pub fn new(p: u32, m: u32, modulus: &[u32]) -> Result<Self> {
        if p != 2 && p != 3 {
            return Err(Error::UnsupportedField {
                p,
                m,
                reason: "characteristic must be 2 or 3",
            });
        }
        if m == 0 {
            return Err(Error::UnsupportedField {
                p,
                m,
                reason: "extension degree must be at least 1",
            });
        }
        if (p as u64).pow(m) > 256 {
            return Err(Error::UnsupportedField {
                p,
                m,
                reason: "field size exceeds 256",
            });
        }
        if modulus.len() != m as usize + 1 {
            return Err(Error::BadModulus(format!(
                "expected {} coefficients for a degree-{m} modulus, got {}",
                m + 1,
                modulus.len()
            )));
        }
        if let Some(&bad) = modulus.iter().find(|&&c| c >= p) {
            return Err(Error::CoefficientRange { value: bad, p });
        }
        let lead = modulus[m as usize];
        if lead == 0 {
            return Err(Error::BadModulus("leading coefficient is zero".into()));
        }
        let lead_inv = prime_inv(lead, p);
        let modulus: Vec<u32> = modulus.iter().map(|&c| c * lead_inv % p).collect();
        if !is_irreducible(&modulus, p) {
            return Err(Error::ReducibleModulus { p });
        }
        Ok(Self { p, m, modulus })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn q(&self) -> usize {
        (self.p as usize).pow(self.m)
    }

    fn decode(&self, code: u8) -> Vec<u32> {
        let mut c = code as u32;
        (0..self.m)
            .map(|_| {
                let d = c % self.p;
                c /= self.p;
                d
            })
            .collect()
    }

    fn encode(&self, coeffs: &[u32]) -> u8 {
        coeffs.iter().rev().fold(0u32, |acc, &c| acc * self.p + c) as u8
    }

    fn poly_add(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    fn poly_mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let m = self.m as usize;
        let mut prod = vec![0u32; 2 * m];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        // t^m = -(modulus_0 + ... + modulus_{m-1} t^{m-1})
        for d in (m..2 * m).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for k in 0..m {
                let sub = c * self.modulus[k] % self.p;
                prod[d - m + k] = (prod[d - m + k] + self.p - sub) % self.p;
            }
        }
        prod.truncate(m);
        prod
    }
}

fn prime_inv(a: u32, p: u32) -> u32 {
    (1..p)
        .find(|&x| a * x % p == 1)
        .expect("nonzero residue mod a prime")
}

fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Remainder of `a` modulo the monic polynomial `b` over GF(p).
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = *r.last().unwrap();
        for (k, &bk) in b.iter().enumerate() {
            r[shift + k] = (r[shift + k] + p * p - c * bk % p) % p;
        }
        r = trim(r);
    }
    r
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let deg = modulus.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as usize).pow(d as u32);
        for tail in 0..count {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut t = tail;
            for _ in 0..d {
                divisor.push((t % p as usize) as u32);
                t /= p as usize;
            }
            divisor.push(1);
            if poly_rem(modulus, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

struct Tables {
    spec: FieldSpec,
    q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

/// A constructed field: the spec plus code-level arithmetic tables.
///
/// Cloning is cheap and the value is immutable, so it can be shared across
/// threads.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GF({}^{}) mod {:?}",
            self.0.spec.p, self.0.spec.m, self.0.spec.modulus
        )
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Field {}

impl Field {
    pub fn new(spec: FieldSpec) -> Self {
        let q = spec.q();
        let elems: Vec<Vec<u32>> = (0..q).map(|c| spec.decode(c as u8)).collect();
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = spec.encode(&spec.poly_add(&elems[a], &elems[b]));
                mul[a * q + b] = spec.encode(&spec.poly_mul(&elems[a], &elems[b]));
            }
        }
        let neg = (0..q)
            .map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u8)
            .collect();
        let inv = (0..q)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    (1..q)
                        .find(|&b| mul[a * q + b] == 1)
                        .expect("nonzero element is invertible") as u8
                }
            })
            .collect();
        Field(Arc::new(Tables {
            spec,
            q,
            add,
            mul,
            neg,
            inv,
        }))
    }

    /// GF(8) with modulus t^3 + t + 1.
    pub fn gf8() -> Self {
        Field::new(FieldSpec::new(2, 3, &[1, 1, 0, 1]).expect("t^3+t+1 is irreducible"))
    }

    /// GF(27) with modulus t^3 + 2t + 1.
    pub fn gf27() -> Self {
        Field::new(FieldSpec::new(3, 3, &[1, 2, 0, 1]).expect("t^3+2t+1 is irreducible"))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn p(&self) -> u32 {
        self.0.spec.p
    }

    pub fn q(&self) -> usize {
        self.0.q
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.0.add[a as usize * self.0.q + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.0.neg[b as usize])
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.0.neg[a as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.0.mul[a as usize * self.0.q + b as usize]
    }

    /// Inverse of a nonzero code; zero maps to zero.
    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        self.0.inv[a as usize]
    }

    pub fn pow(&self, a: u8, mut e: u64) -> u8 {
        let mut base = a;
        let mut acc = 1u8;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Embeds an integer residue of the prime field.
    pub fn from_prime(&self, c: u32) -> u8 {
        (c % self.p()) as u8
    }

    /// Whether the code lies in the prime subfield GF(p).
    pub fn is_prime_subfield(&self, a: u8) -> bool {
        (a as u32) < self.p()
    }

    /// Builds an element from a coefficient list (ascending degree, at most m
    /// entries, each in 0..p).
    pub fn element(&self, coeffs: &[u32]) -> Result<FieldElement> {
        let spec = self.spec();
        if coeffs.len() > spec.m as usize {
            return Err(Error::CoefficientLength {
                got: coeffs.len(),
                max: spec.m as usize,
            });
        }
        if let Some(&bad) = coeffs.iter().find(|&&c| c >= spec.p) {
            return Err(Error::CoefficientRange {
                value: bad,
                p: spec.p,
            });
        }
        let mut full = coeffs.to_vec();
        full.resize(spec.m as usize, 0);
        Ok(self.from_code(spec.encode(&full)))
    }

    pub fn from_code(&self, code: u8) -> FieldElement {
        debug_assert!((code as usize) < self.q());
        FieldElement {
            field: self.clone(),
            code,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.from_code(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_code(1)
    }

    /// All q elements, zero first, in lexicographic coefficient order.
    pub fn elements(&self) -> Vec<FieldElement> {
        (0..self.q()).map(|c| self.from_code(c as u8)).collect()
    }
}

/// A field element that carries its field, so that mixing fields is caught.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    code: u8,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs = self.coeffs();
        let terms: Vec<String> = coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(d, &c)| match (d, c) {
                (0, c) => c.to_string(),
                (1, 1) => "t".to_string(),
                (1, c) => format!("{c}t"),
                (d, 1) => format!("t^{d}"),
                (d, c) => format!("{c}t^{d}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn code(&self) -> u8 {
        self.code
    }

    /// Coefficient vector, ascending degree, length m.
    pub fn coeffs(&self) -> Vec<u32> {
        self.field.spec().decode(self.code)
    }

    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.field.from_code(self.field.add(self.code, other.code)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.field.from_code(self.field.sub(self.code, other.code)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.field.from_code(self.field.mul(self.code, other.code)))
    }

    pub fn neg(&self) -> Self {
        self.field.from_code(self.field.neg(self.code))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.field.from_code(self.field.inv(self.code)))
    }

    pub fn pow(&self, e: u64) -> Self {
        self.field.from_code(self.field.pow(self.code, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(f: &Field) -> FieldElement {
        f.element(&[0, 1]).unwrap()
    }

    #[test]
    fn gf8_modulus_reduction() {
        let f = Field::gf8();
        assert!(f.element(&[0]).unwrap().is_zero());
        let tt = t(&f);
        let t2 = tt.mul(&tt).unwrap();
        assert_eq!(tt.mul(&t2).unwrap(), f.element(&[1, 1]).unwrap());
    }

    #[test]
    fn gf27_modulus_reduction() {
        let f = Field::gf27();
        let tt = t(&f);
        let t3 = tt.mul(&tt.mul(&tt).unwrap()).unwrap();
        // t^3 = -2t - 1 = t + 2
        assert_eq!(t3, f.element(&[2, 1]).unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        let f = Field::gf8();
        assert_eq!(
            f.element(&[1, 0, 0, 1]).unwrap_err(),
            Error::CoefficientLength { got: 4, max: 3 }
        );
        assert!(matches!(
            f.element(&[2]),
            Err(Error::CoefficientRange { .. })
        ));
        // t^3 + 1 = (t + 1)(t^2 + t + 1)
        assert_eq!(
            FieldSpec::new(2, 3, &[1, 0, 0, 1]).unwrap_err(),
            Error::ReducibleModulus { p: 2 }
        );
        // no roots in GF(3)
        assert!(FieldSpec::new(3, 3, &[2, 2, 0, 1]).is_ok());
        // t^3 + t over GF(3) has the root 0
        assert!(FieldSpec::new(3, 3, &[0, 1, 0, 1]).is_err());
        assert!(FieldSpec::new(5, 1, &[0, 1]).is_err());
        assert!(FieldSpec::new(2, 9, &[1; 10]).is_err());
    }

    #[test]
    fn inverse_and_cross_field() {
        let f = Field::gf8();
        for a in f.elements().into_iter().skip(1) {
            assert_eq!(a.mul(&a.inv().unwrap()).unwrap(), f.one());
        }
        assert_eq!(f.zero().inv().unwrap_err(), Error::ZeroInverse);
        let g = Field::gf27();
        assert_eq!(f.one().add(&g.one()).unwrap_err(), Error::FieldMismatch);
        let other_gf8 = Field::new(FieldSpec::new(2, 3, &[1, 0, 1, 1]).unwrap());
        assert_eq!(
            f.one().mul(&other_gf8.one()).unwrap_err(),
            Error::FieldMismatch
        );
    }

    #[test]
    fn field_equation_and_enumeration() {
        let f = Field::gf8();
        let all = f.elements();
        assert_eq!(all.len(), 8);
        assert!(all[0].is_zero());
        assert_eq!(all[1], f.one());
        for a in &all {
            assert_eq!(&a.pow(8), a);
        }
        let g = Field::gf27();
        let all = g.elements();
        assert_eq!(all.len(), 27);
        assert_eq!(all[1], g.one());
        let distinct: std::collections::HashSet<u8> = all.iter().map(|e| e.code()).collect();
        assert_eq!(distinct.len(), 27);
    }

    #[test]
    fn multiplicative_group_is_cyclic() {
        for f in [Field::gf8(), Field::gf27()] {
            let q = f.q() as u64;
            let order = |a: u8| (1..q).find(|&e| f.pow(a, e) == 1).unwrap();
            for a in 1..q as u8 {
                assert_eq!(f.pow(a, q - 1), 1);
            }
            assert!((1..q as u8).any(|a| order(a) == q - 1));
        }
    }

    #[test]
    fn characteristic_and_frobenius() {
        for f in [Field::gf8(), Field::gf27()] {
            let p = f.p() as u64;
            for a in 0..f.q() as u8 {
                let mut acc = 0;
                for _ in 0..p {
                    acc = f.add(acc, a);
                }
                assert_eq!(acc, 0);
                for b in 0..f.q() as u8 {
                    assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn field_axioms_gf27(a in 0u8..27, b in 0u8..27, c in 0u8..27) {
            let f = Field::gf27();
            prop_assert_eq!(f.add(a, 0), a);
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.sub(f.add(a, b), b), a);
        }
    }
}
