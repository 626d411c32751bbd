//! Brute-force ground truth for tiny instances: true minimum distance and
//! generalized Hamming weights, `m(D)` of explicit subspaces, and exhaustive
//! mu-set maximization.
//!
//! Nothing here goes through the mu predicates or the bound search; only
//! field arithmetic, the basis triple and raw table reads are shared.

use rayon::prelude::*;

use crate::bounds::CodeSpec;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::mu::IndexSet;
use crate::rho::{BasisTriple, RhoTable};

pub const MESSAGE_CAP: u128 = 10_000_000;
pub const SUBSPACE_CAP: u128 = 10_000_000;
pub const COMBINATION_CAP: u128 = 1_000_000;
pub const UNIVERSE_CAP: usize = 22;

/// A subspace of `F_q^n` given by linearly independent rows.
#[derive(Clone, Debug)]
pub struct Subspace {
    field: Field,
    basis: Matrix,
}

impl Subspace {
    pub fn new(field: Field, basis: Vec<Vec<u8>>) -> Result<Self> {
        let t = basis.len();
        let basis = Matrix::from_rows(basis)?;
        if basis.rank(&field) != t {
            return Err(Error::Singular);
        }
        Ok(Self { field, basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn len(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// All `q^t - 1` nonzero members.
    pub fn nonzero_vectors(&self) -> Result<Vec<Vec<u8>>> {
        let q = self.field.q() as u128;
        let total = q.checked_pow(self.dim() as u32).unwrap_or(u128::MAX);
        if total > COMBINATION_CAP {
            return Err(Error::EnumerationCap {
                size: total,
                cap: COMBINATION_CAP,
            });
        }
        Ok((1..total as usize)
            .map(|idx| {
                self.basis
                    .left_mul(&self.field, &digits(idx, self.field.q(), self.dim()))
            })
            .collect())
    }
}

fn digits(mut idx: usize, q: usize, len: usize) -> Vec<u8> {
    (0..len)
        .map(|_| {
            let d = (idx % q) as u8;
            idx /= q;
            d
        })
        .collect()
}

/// Positions where some basis vector is nonzero.
pub fn support_size(d: &Subspace) -> usize {
    (0..d.len())
        .filter(|&c| (0..d.dim()).any(|r| d.basis.get(r, c) != 0))
        .count()
}

/// `{m(c) : c in D, c != 0}`, by enumerating all of `D`.
pub fn m_of_subspace(t: &BasisTriple, d: &Subspace) -> Result<IndexSet> {
    if d.len() != t.n() {
        return Err(Error::Dimension {
            expected: t.n(),
            got: d.len(),
        });
    }
    d.nonzero_vectors()?
        .iter()
        .map(|c| t.m_of_vector(c))
        .collect::<Result<IndexSet>>()
}

/// Rows spanning the code: the null space of its parity vectors.
pub fn generator_matrix(t: &BasisTriple, code: &CodeSpec) -> Result<Matrix> {
    if code.n() != t.n() {
        return Err(Error::Dimension {
            expected: t.n(),
            got: code.n(),
        });
    }
    let mut parity = Matrix::zeros(code.parity().len(), t.n());
    for (r, l) in code.parity().iter().enumerate() {
        for (c, &v) in t.w(l).iter().enumerate() {
            parity.set(r, c, v);
        }
    }
    Ok(parity.null_space(t.field()))
}

fn weight(c: &[u8]) -> usize {
    c.iter().filter(|&&x| x != 0).count()
}

/// Minimum weight over all nonzero codewords. Only messages whose first
/// nonzero entry is 1 are visited; scalar multiples share a weight.
pub fn true_min_distance(t: &BasisTriple, code: &CodeSpec) -> Result<usize> {
    let g = generator_matrix(t, code)?;
    let f = t.field();
    let (k, q) = (g.rows(), f.q());
    if k == 0 {
        return Err(Error::Precondition("the code has dimension 0".into()));
    }
    let total = (q as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if total > MESSAGE_CAP {
        return Err(Error::EnumerationCap {
            size: total,
            cap: MESSAGE_CAP,
        });
    }
    let best = (0..k)
        .into_par_iter()
        .map(|lead| {
            let tail = k - lead - 1;
            (0..q.pow(tail as u32))
                .map(|idx| {
                    let mut msg = vec![0u8; k];
                    msg[lead] = 1;
                    msg[lead + 1..].copy_from_slice(&digits(idx, q, tail));
                    weight(&g.left_mul(f, &msg))
                })
                .min()
                .expect("at least one message")
        })
        .min()
        .expect("k >= 1");
    Ok(best)
}

/// Number of `t`-dimensional subspaces of `F_q^k`.
pub fn gaussian_binomial(k: usize, t: usize, q: u128) -> Option<u128> {
    if t > k {
        return Some(0);
    }
    let (mut num, mut den) = (1u128, 1u128);
    for i in 0..t {
        num = num.checked_mul(q.checked_pow((k - i) as u32)?.checked_sub(1)?)?;
        den = den.checked_mul(q.checked_pow((i + 1) as u32)?.checked_sub(1)?)?;
    }
    Some(num / den)
}

/// Calls `visit` with every `t x k` matrix in reduced row echelon form of
/// rank `t`, i.e. once per `t`-dimensional subspace of `F_q^k`.
pub fn for_each_rref(k: usize, t: usize, q: usize, mut visit: impl FnMut(&[Vec<u8>])) {
    let mut pivots: Vec<usize> = (0..t).collect();
    loop {
        // free positions: row r, columns right of its pivot that are not pivots
        let free: Vec<(usize, usize)> = (0..t)
            .flat_map(|r| {
                (pivots[r] + 1..k)
                    .filter(|c| !pivots.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        let mut rows = vec![vec![0u8; k]; t];
        for (r, &p) in pivots.iter().enumerate() {
            rows[r][p] = 1;
        }
        let count = q.pow(free.len() as u32);
        for idx in 0..count {
            for (&(r, c), d) in free.iter().zip(digits(idx, q, free.len())) {
                rows[r][c] = d;
            }
            visit(&rows);
        }
        // next pivot combination
        let Some(i) = (0..t).rev().find(|&i| pivots[i] < k - t + i) else {
            return;
        };
        pivots[i] += 1;
        for j in i + 1..t {
            pivots[j] = pivots[j - 1] + 1;
        }
    }
}

/// `t`-th generalized Hamming weight by enumerating every `t`-dimensional
/// subcode; the number visited is checked against the Gaussian binomial.
pub fn true_ghw(t: &BasisTriple, code: &CodeSpec, dim: usize) -> Result<usize> {
    let g = generator_matrix(t, code)?;
    let f = t.field();
    let k = g.rows();
    if dim == 0 || dim > k {
        return Err(Error::Precondition(format!("t = {dim} outside 1..={k}")));
    }
    let count = gaussian_binomial(k, dim, f.q() as u128).unwrap_or(u128::MAX);
    if count > SUBSPACE_CAP {
        return Err(Error::EnumerationCap {
            size: count,
            cap: SUBSPACE_CAP,
        });
    }
    let n = g.cols();
    let mut best = usize::MAX;
    let mut visited = 0u128;
    for_each_rref(k, dim, f.q(), |msgs| {
        visited += 1;
        let words: Vec<Vec<u8>> = msgs.iter().map(|m| g.left_mul(f, m)).collect();
        let supp = (0..n).filter(|&c| words.iter().any(|w| w[c] != 0)).count();
        best = best.min(supp);
    });
    assert_eq!(
        visited, count,
        "subspace enumeration missed or repeated subspaces"
    );
    Ok(best)
}

/// Largest set with the mu-property w.r.t. `targets`, by enumerating every
/// feasible set. Feasibility of a member depends only on smaller members, so
/// growing sets in ascending order visits exactly the feasible ones.
pub fn max_mu_exhaustive(t: &RhoTable, targets: &[usize]) -> Result<usize> {
    if targets.is_empty() {
        return Err(Error::EmptyTargets);
    }
    let n = t.n();
    let universe: Vec<usize> = (1..=n)
        .filter(|&i| (1..=n).any(|j| targets.contains(&t.get(i, j))))
        .collect();
    if universe.len() > UNIVERSE_CAP {
        return Err(Error::UniverseTooLarge {
            size: universe.len(),
            cap: UNIVERSE_CAP,
        });
    }
    let ok = |set: &[usize], i: usize| {
        (1..=n).any(|j| {
            let v = t.get(i, j);
            targets.contains(&v) && set.iter().all(|&i2| t.get(i2, j) < v)
        })
    };
    fn grow(
        universe: &[usize],
        from: usize,
        set: &mut Vec<usize>,
        ok: &dyn Fn(&[usize], usize) -> bool,
    ) -> usize {
        let mut best = set.len();
        for pos in from..universe.len() {
            let i = universe[pos];
            if ok(set, i) {
                set.push(i);
                best = best.max(grow(universe, pos + 1, set, ok));
                set.pop();
            }
        }
        best
    }
    Ok(grow(&universe, 0, &mut Vec::new(), &ok))
}
