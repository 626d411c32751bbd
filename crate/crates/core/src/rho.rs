//! The table `rho[i][j] = rho_W(u_i * v_j)` and the maps `rho_W(.)`, `m(.)`.
//!
//! Everything downstream (well-behaving pairs, mu-properties, all bounds)
//! reads only a [`RhoTable`]. It can be built two ways: generically from three
//! bases by linear algebra, or for a curve from leading monomials of normal
//! forms. The two routes must agree.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::curve::{Curve, Monomial, Polynomial};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{dot, star, Matrix};

/// Three ordered bases `U`, `V`, `W` of `F_q^n` (row `i` is basis vector `i`).
#[derive(Clone, Debug)]
pub struct BasisTriple {
    field: Field,
    u: Matrix,
    v: Matrix,
    w: Matrix,
    /// Row k is column k of `W^{-1}`, so coordinate k of `c` is `c . w_inv_t[k]`.
    w_inv_t: Matrix,
}

impl BasisTriple {
    pub fn new(field: Field, u: Matrix, v: Matrix, w: Matrix) -> Result<Self> {
        let n = w.rows();
        for m in [&u, &v, &w] {
            if m.rows() != n || m.cols() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: m.cols().max(m.rows()),
                });
            }
        }
        if u.rank(&field) != n || v.rank(&field) != n {
            return Err(Error::Singular);
        }
        let w_inv_t = w.inverse(&field)?.transpose();
        Ok(Self {
            field,
            u,
            v,
            w,
            w_inv_t,
        })
    }

    /// `U = V = W = (ev(M_1), ..., ev(M_n))`.
    pub fn from_curve(curve: &Curve) -> Result<Self> {
        let ev = Matrix::from_rows(curve.evaluation_rows())?;
        Self::new(curve.field().clone(), ev.clone(), ev.clone(), ev)
    }

    pub fn n(&self) -> usize {
        self.w.rows()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// 1-based basis vectors.
    pub fn u(&self, i: usize) -> &[u8] {
        self.u.row(i - 1)
    }

    pub fn v(&self, j: usize) -> &[u8] {
        self.v.row(j - 1)
    }

    pub fn w(&self, l: usize) -> &[u8] {
        self.w.row(l - 1)
    }

    pub fn w_matrix(&self) -> &Matrix {
        &self.w
    }

    fn check_len(&self, c: &[u8]) -> Result<()> {
        if c.len() != self.n() {
            return Err(Error::Dimension {
                expected: self.n(),
                got: c.len(),
            });
        }
        Ok(())
    }

    /// Least `i` with `c` in `Span{w_1..w_i}`; 0 for the zero vector.
    pub fn rho_of_vector(&self, c: &[u8]) -> Result<usize> {
        self.check_len(c)?;
        Ok(self.rho_unchecked(c))
    }

    fn rho_unchecked(&self, c: &[u8]) -> usize {
        (0..self.n())
            .rev()
            .find(|&k| dot(&self.field, c, self.w_inv_t.row(k)) != 0)
            .map_or(0, |k| k + 1)
    }

    /// Least `l` with `c . w_l != 0`.
    pub fn m_of_vector(&self, c: &[u8]) -> Result<usize> {
        self.check_len(c)?;
        (1..=self.n())
            .find(|&l| dot(&self.field, c, self.w(l)) != 0)
            .ok_or(Error::ZeroVector)
    }
}

/// `n x n` table of 1-based rho values, with optional per-index weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoTable {
    n: usize,
    cells: Vec<u16>,
    weights: Option<Vec<u32>>,
}

impl RhoTable {
    /// Builds a table from 1-based values given row by row.
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.len();
        let mut cells = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: row.len(),
                });
            }
            for &v in row {
                if v == 0 || v > n {
                    return Err(Error::IndexOutOfRange { index: v, n });
                }
                cells.push(v as u16);
            }
        }
        Ok(Self {
            n,
            cells,
            weights: None,
        })
    }

    pub fn with_weights(mut self, weights: Vec<u32>) -> Result<Self> {
        if weights.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: weights.len(),
            });
        }
        self.weights = Some(weights);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `rho[i][j]` for 1-based `i`, `j`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.cells[(i - 1) * self.n + (j - 1)] as usize
    }

    pub fn checked_get(&self, i: usize, j: usize) -> Result<usize> {
        for idx in [i, j] {
            if idx == 0 || idx > self.n {
                return Err(Error::IndexOutOfRange {
                    index: idx,
                    n: self.n,
                });
            }
        }
        Ok(self.get(i, j))
    }

    /// Weight of `M_l` (1-based) when the table came from a curve.
    pub fn weight(&self, l: usize) -> Option<u32> {
        self.weights.as_ref().map(|w| w[l - 1])
    }

    pub fn weights(&self) -> Option<&[u32]> {
        self.weights.as_deref()
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (1..=self.n)
            .map(|i| (1..=self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (1..=self.n).all(|i| (1..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

/// `rho[i][j] = rho_W(u_i * v_j)` by expressing each star product in the
/// W-basis.
pub fn rho_table_generic(triple: &BasisTriple) -> Result<RhoTable> {
    let n = triple.n();
    let f = triple.field();
    let rows: Vec<Vec<u16>> = (1..=n)
        .into_par_iter()
        .map(|i| {
            (1..=n)
                .map(|j| {
                    let prod = star(f, triple.u(i), triple.v(j));
                    match triple.rho_unchecked(&prod) {
                        0 => Err(Error::ZeroStarProduct { i, j }),
                        r => Ok(r as u16),
                    }
                })
                .collect::<Result<Vec<u16>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RhoTable {
        n,
        cells: rows.concat(),
        weights: None,
    })
}

/// `rho[i][j]` = footprint index of `lm(M_i M_j rem {F, X^q - X, Y^q - Y})`.
pub fn rho_table_algebraic(curve: &Curve) -> Result<RhoTable> {
    let n = curve.n();
    let fp = curve.footprint();
    let mut products: Vec<Monomial> = fp
        .iter()
        .flat_map(|&a| fp.iter().map(move |&b| a.mul(b)))
        .collect();
    products.sort_unstable();
    products.dedup();
    let leads: HashMap<Monomial, usize> = products
        .par_iter()
        .map(|&m| {
            let nf = curve.normal_form(&Polynomial::monomial(m));
            let lead = nf
                .leading_monomial(curve.order())
                .ok_or_else(|| Error::InvalidCurve(format!("normal form of {m} vanishes")))?;
            let idx = curve
                .index_of(lead)
                .expect("normal forms live on the footprint");
            Ok((m, idx))
        })
        .collect::<Result<_>>()?;
    let mut cells = Vec::with_capacity(n * n);
    for &a in fp {
        for &b in fp {
            cells.push(leads[&a.mul(b)] as u16);
        }
    }
    Ok(RhoTable {
        n,
        cells,
        weights: Some(curve.weights()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::MonomialOrder;
    use crate::field::FieldSpec;

    #[test]
    fn rho_of_basis_vectors() {
        let c = Curve::f8();
        let t = BasisTriple::from_curve(&c).unwrap();
        let f = c.field();
        assert_eq!(t.rho_of_vector(&vec![0; 32]).unwrap(), 0);
        for i in 1..=32 {
            assert_eq!(t.rho_of_vector(t.w(i)).unwrap(), i);
        }
        let sum: Vec<u8> = t
            .w(3)
            .iter()
            .zip(t.w(7))
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        assert_eq!(t.rho_of_vector(&sum).unwrap(), 7);
        assert!(t.rho_of_vector(&[1, 2]).is_err());
    }

    #[test]
    fn m_of_vector_basics() {
        let c = Curve::f8();
        let t = BasisTriple::from_curve(&c).unwrap();
        // w_1 = all ones; e_1 has e_1 . w_1 = 1
        let mut e1 = vec![0u8; 32];
        e1[0] = 1;
        assert_eq!(t.m_of_vector(&e1).unwrap(), 1);
        assert_eq!(t.m_of_vector(&vec![0; 32]).unwrap_err(), Error::ZeroVector);
    }

    #[test]
    fn f8_table_values() {
        let c = Curve::f8();
        let alg = rho_table_algebraic(&c).unwrap();
        assert_eq!(alg.get(3, 12), 17);
        assert_eq!(alg.get(3, 11), 18);
        assert_eq!(alg.get(2, 13), 17);
        assert!(alg.is_symmetric());
        for j in 1..=32 {
            assert_eq!(alg.get(1, j), j);
            assert_eq!(alg.get(j, 1), j);
        }
        let generic = rho_table_generic(&BasisTriple::from_curve(&c).unwrap()).unwrap();
        assert_eq!(generic.rows(), alg.rows());
    }

    #[test]
    fn weight_compatibility() {
        let c = Curve::f8();
        let t = rho_table_algebraic(&c).unwrap();
        for i in 1..=32 {
            for j in 1..=32 {
                let (wi, wj, wl) = (
                    t.weight(i).unwrap(),
                    t.weight(j).unwrap(),
                    t.weight(t.get(i, j)).unwrap(),
                );
                assert!(wl <= wi + wj);
                let prod = c.monomial(i).mul(c.monomial(j));
                if let Some(l) = c.index_of(prod) {
                    assert_eq!(t.get(i, j), l);
                    assert_eq!(wl, wi + wj);
                }
            }
        }
    }

    #[test]
    fn modulus_independence() {
        let other = Field::new(FieldSpec::new(2, 3, &[1, 0, 1, 1]).unwrap());
        let c = Curve::new(
            other,
            &[0, 1, 1, 0, 1],
            &[0, 0, 0, 1, 0, 1, 1],
            MonomialOrder::new(3, 2).unwrap(),
        )
        .unwrap();
        assert_eq!(
            rho_table_algebraic(&c).unwrap(),
            rho_table_algebraic(&Curve::f8()).unwrap()
        );
        let generic = rho_table_generic(&BasisTriple::from_curve(&c).unwrap()).unwrap();
        assert_eq!(generic.rows(), rho_table_algebraic(&c).unwrap().rows());
    }

    #[test]
    fn zero_star_product_is_reported() {
        let f = Field::gf8();
        let id = Matrix::identity(2);
        let t = BasisTriple::new(f, id.clone(), id.clone(), id).unwrap();
        assert_eq!(
            rho_table_generic(&t).unwrap_err(),
            Error::ZeroStarProduct { i: 1, j: 2 }
        );
    }

    #[test]
    fn table_validation() {
        assert!(RhoTable::from_rows(&[vec![1, 2], vec![2]]).is_err());
        assert!(RhoTable::from_rows(&[vec![1, 3], vec![2, 2]]).is_err());
        let t = RhoTable::from_rows(&[vec![1, 2], vec![2, 2]]).unwrap();
        assert!(t.checked_get(3, 1).is_err());
        assert_eq!(t.checked_get(2, 1).unwrap(), 2);
    }
}
