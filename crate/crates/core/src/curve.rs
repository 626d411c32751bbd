//! Plane curves `G(X) - H(Y)` over a small field, the weighted degree
//! lexicographic order, normal forms modulo `{F, X^q - X, Y^q - Y}`, the
//! footprint and the evaluation map.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};

/// `X^x Y^y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial {
    pub x: u32,
    pub y: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { x: 0, y: 0 };

    pub fn new(x: u32, y: u32) -> Self {
        Self { x, y }
    }

    pub fn mul(self, other: Monomial) -> Monomial {
        Monomial {
            x: self.x + other.x,
            y: self.y + other.y,
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let part = |name: &str, e: u32| match e {
            0 => String::new(),
            1 => name.to_string(),
            e => format!("{name}^{e}"),
        };
        let s = format!("{}{}", part("X", self.x), part("Y", self.y));
        if s.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{s}")
        }
    }
}

/// Weighted degree order; ties are broken by the smaller X-exponent being
/// smaller.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialOrder {
    wx: u32,
    wy: u32,
}

impl MonomialOrder {
    pub fn new(wx: u32, wy: u32) -> Result<Self> {
        if wx == 0 || wy == 0 {
            return Err(Error::InvalidCurve(
                "monomial weights must be positive".into(),
            ));
        }
        Ok(Self { wx, wy })
    }

    pub fn weights(&self) -> (u32, u32) {
        (self.wx, self.wy)
    }

    pub fn weight(&self, m: Monomial) -> u32 {
        self.wx * m.x + self.wy * m.y
    }

    pub fn compare(&self, a: Monomial, b: Monomial) -> Ordering {
        self.weight(a).cmp(&self.weight(b)).then(a.x.cmp(&b.x))
    }
}

/// Sparse bivariate polynomial with coefficients stored as field codes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, u8>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, 1)
    }

    pub fn term(m: Monomial, c: u8) -> Self {
        let mut p = Self::zero();
        if c != 0 {
            p.terms.insert(m, c);
        }
        p
    }

    /// Univariate polynomial in X (`var_x`) or Y from ascending codes.
    pub fn univariate(coeffs: &[u8], var_x: bool) -> Self {
        let mut p = Self::zero();
        for (d, &c) in coeffs.iter().enumerate() {
            let m = if var_x {
                Monomial::new(d as u32, 0)
            } else {
                Monomial::new(0, d as u32)
            };
            p.add_term(m, c, None);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: u8, f: Option<&Field>) {
        if c == 0 {
            return;
        }
        match self.terms.get(&m).copied() {
            None => {
                self.terms.insert(m, c);
            }
            Some(old) => {
                let f = f.expect("adding to an existing term needs the field");
                let s = f.add(old, c);
                if s == 0 {
                    self.terms.remove(&m);
                } else {
                    self.terms.insert(m, s);
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: Monomial) -> u8 {
        self.terms.get(&m).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, u8)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Polynomial, f: &Field) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m, c, Some(f));
        }
        out
    }

    pub fn sub(&self, other: &Polynomial, f: &Field) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m, f.neg(c), Some(f));
        }
        out
    }

    pub fn mul(&self, other: &Polynomial, f: &Field) -> Polynomial {
        let mut out = Polynomial::zero();
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                out.add_term(a.mul(b), f.mul(ca, cb), Some(f));
            }
        }
        out
    }

    pub fn leading_monomial(&self, order: &MonomialOrder) -> Option<Monomial> {
        self.terms
            .keys()
            .copied()
            .max_by(|a, b| order.compare(*a, *b))
    }

    pub fn eval(&self, f: &Field, x: u8, y: u8) -> u8 {
        self.terms().fold(0, |acc, (m, c)| {
            f.add(
                acc,
                f.mul(c, f.mul(f.pow(x, m.x as u64), f.pow(y, m.y as u64))),
            )
        })
    }
}

/// On-disk curve description. Coefficient arrays are ascending and hold
/// integers in `0..p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveConfig {
    pub p: u32,
    pub m: u32,
    pub modulus: Vec<u32>,
    #[serde(rename = "G")]
    pub g: Vec<u32>,
    #[serde(rename = "H")]
    pub h: Vec<u32>,
    pub weights: [u32; 2],
}

impl CurveConfig {
    pub fn f8() -> Self {
        Self {
            p: 2,
            m: 3,
            modulus: vec![1, 1, 0, 1],
            g: vec![0, 1, 1, 0, 1],
            h: vec![0, 0, 0, 1, 0, 1, 1],
            weights: [3, 2],
        }
    }

    pub fn f27() -> Self {
        let mut g = vec![0; 10];
        g[1] = 1;
        g[3] = 1;
        g[9] = 1;
        let mut h = vec![0; 13];
        h[4] = 1;
        h[10] = 1;
        h[12] = 1;
        Self {
            p: 3,
            m: 3,
            modulus: vec![1, 2, 0, 1],
            g,
            h,
            weights: [4, 3],
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn build(&self) -> Result<Curve> {
        let field = Field::new(FieldSpec::new(self.p, self.m, &self.modulus)?);
        let to_codes = |v: &[u32]| -> Result<Vec<u8>> {
            v.iter()
                .map(|&c| {
                    if c >= self.p {
                        Err(Error::CoefficientRange {
                            value: c,
                            p: self.p,
                        })
                    } else {
                        Ok(c as u8)
                    }
                })
                .collect()
        };
        let order = MonomialOrder::new(self.weights[0], self.weights[1])?;
        Curve::new(field, &to_codes(&self.g)?, &to_codes(&self.h)?, order)
    }
}

/// The curve `F = G(X) - H(Y)` with its footprint, variety and evaluation map.
#[derive(Clone, Debug)]
pub struct Curve {
    field: Field,
    g: Polynomial,
    h: Polynomial,
    deg_g: u32,
    order: MonomialOrder,
    /// `X^deg_g` is rewritten to this.
    x_rule: Polynomial,
    footprint: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    points: Vec<(u8, u8)>,
}

fn degree(coeffs: &[u8]) -> Option<usize> {
    coeffs.iter().rposition(|&c| c != 0)
}

impl Curve {
    pub fn new(field: Field, g: &[u8], h: &[u8], order: MonomialOrder) -> Result<Self> {
        let q = field.q() as u32;
        let deg_g = degree(g).ok_or_else(|| Error::InvalidCurve("G is zero".into()))?;
        if deg_g == 0 {
            return Err(Error::InvalidCurve("G must have positive degree".into()));
        }
        if deg_g as u32 > q {
            return Err(Error::InvalidCurve(format!(
                "deg G = {deg_g} exceeds q = {q}"
            )));
        }
        let gp = Polynomial::univariate(g, true);
        let hp = Polynomial::univariate(h, false);
        let f_poly = gp.sub(&hp, &field);
        let lead = Monomial::new(deg_g as u32, 0);
        if f_poly.leading_monomial(&order) != Some(lead) {
            return Err(Error::InvalidCurve(format!(
                "leading monomial of G - H is not {lead} under weights {:?}",
                order.weights()
            )));
        }
        // X^d = X^d - F / lc(G)
        let lc_inv = field.inv(g[deg_g]);
        let scaled_f = f_poly.mul(&Polynomial::term(Monomial::ONE, lc_inv), &field);
        let x_rule = Polynomial::monomial(lead).sub(&scaled_f, &field);

        let mut footprint: Vec<Monomial> = (0..deg_g as u32)
            .flat_map(|x| (0..q).map(move |y| Monomial::new(x, y)))
            .collect();
        footprint.sort_by(|a, b| order.compare(*a, *b));
        let index = footprint
            .iter()
            .enumerate()
            .map(|(i, &m)| (m, i + 1))
            .collect();

        let mut points = Vec::new();
        for x in 0..q as u8 {
            let gx = gp.eval(&field, x, 0);
            for y in 0..q as u8 {
                if gx == hp.eval(&field, 0, y) {
                    points.push((x, y));
                }
            }
        }
        if points.len() != footprint.len() {
            return Err(Error::InvalidCurve(format!(
                "footprint has {} monomials but the variety has {} points; \
                 the basis is not a Groebner basis",
                footprint.len(),
                points.len()
            )));
        }
        Ok(Self {
            field,
            g: gp,
            h: hp,
            deg_g: deg_g as u32,
            order,
            x_rule,
            footprint,
            index,
            points,
        })
    }

    /// `X^4 + X^2 + X = Y^6 + Y^5 + Y^3` over GF(8), weights (3, 2).
    pub fn f8() -> Self {
        CurveConfig::f8().build().expect("preset curve is valid")
    }

    /// `X^9 + X^3 + X = Y^12 + Y^10 + Y^4` over GF(27), weights (4, 3).
    pub fn f27() -> Self {
        CurveConfig::f27().build().expect("preset curve is valid")
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn g(&self) -> &Polynomial {
        &self.g
    }

    pub fn h(&self) -> &Polynomial {
        &self.h
    }

    pub fn n(&self) -> usize {
        self.footprint.len()
    }

    /// Footprint monomials `M_1..M_n`, ascending in the order.
    pub fn footprint(&self) -> &[Monomial] {
        &self.footprint
    }

    /// 1-based footprint position of a monomial.
    pub fn index_of(&self, m: Monomial) -> Option<usize> {
        self.index.get(&m).copied()
    }

    /// `M_i` for 1-based `i`.
    pub fn monomial(&self, i: usize) -> Monomial {
        self.footprint[i - 1]
    }

    pub fn weight(&self, m: Monomial) -> u32 {
        self.order.weight(m)
    }

    pub fn weights(&self) -> Vec<u32> {
        self.footprint.iter().map(|&m| self.weight(m)).collect()
    }

    pub fn points(&self) -> &[(u8, u8)] {
        &self.points
    }

    fn in_footprint(&self, m: Monomial) -> bool {
        m.x < self.deg_g && (m.y as usize) < self.field.q()
    }

    /// Remainder of `p` modulo `{F, X^q - X, Y^q - Y}`.
    pub fn normal_form(&self, p: &Polynomial) -> Polynomial {
        let q = self.field.q() as u32;
        let f = &self.field;
        let mut cur = p.clone();
        loop {
            let Some(m) = cur
                .terms
                .keys()
                .copied()
                .filter(|&m| !self.in_footprint(m))
                .max_by(|a, b| self.order.compare(*a, *b))
            else {
                return cur;
            };
            let c = cur.terms.remove(&m).expect("term present");
            let replacement = if m.x >= self.deg_g {
                let rest = Polynomial::term(Monomial::new(m.x - self.deg_g, m.y), c);
                rest.mul(&self.x_rule, f)
            } else {
                Polynomial::term(Monomial::new(m.x, m.y - q + 1), c)
            };
            cur = cur.add(&replacement, f);
        }
    }

    /// `(M(P_1), ..., M(P_n))`.
    pub fn evaluate(&self, m: Monomial) -> Vec<u8> {
        let f = &self.field;
        self.points
            .iter()
            .map(|&(x, y)| f.mul(f.pow(x, m.x as u64), f.pow(y, m.y as u64)))
            .collect()
    }

    pub fn evaluate_poly(&self, p: &Polynomial) -> Vec<u8> {
        self.points
            .iter()
            .map(|&(x, y)| p.eval(&self.field, x, y))
            .collect()
    }

    /// Evaluation vectors of `M_1..M_n` as matrix rows.
    pub fn evaluation_rows(&self) -> Vec<Vec<u8>> {
        self.footprint.iter().map(|&m| self.evaluate(m)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use proptest::prelude::*;

    fn mono(x: u32, y: u32) -> Monomial {
        Monomial::new(x, y)
    }

    #[test]
    fn order_examples() {
        let o = MonomialOrder::new(3, 2).unwrap();
        assert_eq!(o.compare(mono(0, 6), mono(4, 0)), Ordering::Less);
        assert_eq!(o.compare(mono(2, 3), mono(2, 3)), Ordering::Equal);
        assert_eq!(o.compare(Monomial::ONE, mono(0, 1)), Ordering::Less);
        assert!(MonomialOrder::new(0, 2).is_err());
    }

    #[test]
    fn f8_footprint_matches_grid() {
        let c = Curve::f8();
        assert_eq!(c.n(), 32);
        assert_eq!(c.monomial(17), mono(0, 6));
        assert_eq!(c.monomial(18), mono(2, 3));
        assert_eq!(c.monomial(12), mono(3, 0));
        assert_eq!(c.monomial(3), mono(1, 0));
        assert_eq!(c.weight(mono(3, 7)), 23);
        // Indexing grid, bottom row first.
        let grid = [
            [1, 3, 7, 12],
            [2, 5, 10, 16],
            [4, 8, 14, 20],
            [6, 11, 18, 24],
            [9, 15, 22, 27],
            [13, 19, 25, 29],
            [17, 23, 28, 31],
            [21, 26, 30, 32],
        ];
        for (y, row) in grid.iter().enumerate() {
            for (x, &idx) in row.iter().enumerate() {
                assert_eq!(c.index_of(mono(x as u32, y as u32)), Some(idx));
            }
        }
    }

    #[test]
    fn f8_normal_forms() {
        let c = Curve::f8();
        let f = c.field();
        let nf = c.normal_form(&Polynomial::monomial(mono(4, 0)));
        let mut expect = Polynomial::zero();
        for m in [mono(0, 6), mono(0, 5), mono(2, 0), mono(0, 3), mono(1, 0)] {
            expect = expect.add(&Polynomial::monomial(m), f);
        }
        assert_eq!(nf, expect);
        assert_eq!(nf.leading_monomial(c.order()), Some(mono(0, 6)));
        assert_eq!(
            c.normal_form(&Polynomial::monomial(mono(0, 8))),
            Polynomial::monomial(mono(0, 1))
        );
        for &m in c.footprint() {
            assert_eq!(
                c.normal_form(&Polynomial::monomial(m)),
                Polynomial::monomial(m)
            );
        }
    }

    #[test]
    fn variety_sizes() {
        let c = Curve::f8();
        assert_eq!(c.points().len(), 32);
        assert!(c.points().contains(&(0, 0)));
        let c27 = Curve::f27();
        assert_eq!(c27.n(), 243);
        assert_eq!(c27.points().len(), 243);
        let f = c27.field();
        for x in 0..27u8 {
            assert!(f.is_prime_subfield(c27.g().eval(f, x, 0)));
        }
    }

    #[test]
    fn evaluation_basics() {
        let c = Curve::f8();
        assert!(c.evaluate(Monomial::ONE).iter().all(|&v| v == 1));
        let xs: Vec<u8> = c.points().iter().map(|p| p.0).collect();
        assert_eq!(c.evaluate(mono(1, 0)), xs);
        for curve in [Curve::f8(), Curve::f27()] {
            let m = Matrix::from_rows(curve.evaluation_rows()).unwrap();
            assert_eq!(m.rank(curve.field()), curve.n());
        }
    }

    #[test]
    fn evaluation_is_multiplicative_f8() {
        let c = Curve::f8();
        let f = c.field();
        for &a in c.footprint() {
            for &b in c.footprint() {
                let nf = c.normal_form(&Polynomial::monomial(a.mul(b)));
                let lhs = c.evaluate_poly(&nf);
                let rhs: Vec<u8> = c
                    .evaluate(a)
                    .iter()
                    .zip(c.evaluate(b))
                    .map(|(&u, v)| f.mul(u, v))
                    .collect();
                assert_eq!(lhs, rhs, "{a} * {b}");
            }
        }
    }

    #[test]
    fn rejects_bad_curves() {
        let f = Field::gf8();
        let o = MonomialOrder::new(3, 2).unwrap();
        // Y^6 would lead under weights (1, 2)
        let g = [0, 1, 1, 0, 1];
        let h = [0, 0, 0, 1, 0, 1, 1];
        assert!(Curve::new(f.clone(), &g, &h, MonomialOrder::new(1, 2).unwrap()).is_err());
        // x^4 is a bijection of GF(8): only 8 points against 32 footprint monomials
        let bad_g = [0, 0, 0, 0, 1];
        assert!(matches!(
            Curve::new(f, &bad_g, &h, o),
            Err(Error::InvalidCurve(_))
        ));
        assert!(CurveConfig::from_json("{\"p\": 2").is_err());
        let mut cfg = CurveConfig::f8();
        cfg.g[1] = 2;
        assert!(matches!(cfg.build(), Err(Error::CoefficientRange { .. })));
    }

    #[test]
    fn config_json_roundtrip() {
        let cfg = CurveConfig::f27();
        let text = serde_json::to_string(&cfg).unwrap();
        assert!(text.contains("\"G\""));
        assert_eq!(CurveConfig::from_json(&text).unwrap(), cfg);
    }

    proptest! {
        #[test]
        fn order_is_multiplicative(a in (0u32..10, 0u32..10), b in (0u32..10, 0u32..10), m in (0u32..10, 0u32..10)) {
            let o = MonomialOrder::new(4, 3).unwrap();
            let (a, b, m) = (mono(a.0, a.1), mono(b.0, b.1), mono(m.0, m.1));
            prop_assert_eq!(o.compare(a, b), o.compare(a.mul(m), b.mul(m)));
            prop_assert_eq!(o.compare(a, b) == Ordering::Equal, a == b);
        }

        #[test]
        fn normal_form_is_idempotent_f27(i in 1usize..=243, j in 1usize..=243) {
            let c = Curve::f27();
            let p = Polynomial::monomial(c.monomial(i).mul(c.monomial(j)));
            let nf = c.normal_form(&p);
            prop_assert_eq!(c.normal_form(&nf), nf.clone());
            let f = c.field();
            let lhs = c.evaluate_poly(&nf);
            let rhs: Vec<u8> = c.evaluate(c.monomial(i)).iter()
                .zip(c.evaluate(c.monomial(j))).map(|(&u, v)| f.mul(u, v)).collect();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
