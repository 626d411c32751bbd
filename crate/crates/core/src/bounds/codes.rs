use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mu::IndexSet;

/// Dual code `C = Span{w_l : l in parity}^perp` of length `n`.
///
/// A nonzero word `c` has `m(c)` outside `parity`, so `m(C)` is the
/// complement of `parity` in `1..=n` and `dim C = n - |parity|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSpec {
    n: usize,
    parity: IndexSet,
}

impl CodeSpec {
    /// Panics if `parity` leaves `1..=n`; use [`CodeSpec::checked`] for input.
    pub fn new(n: usize, parity: IndexSet) -> Self {
        Self::checked(n, parity).expect("parity positions within 1..=n")
    }

    pub fn checked(n: usize, parity: IndexSet) -> Result<Self> {
        if let Some(bad) = parity.iter().find(|&l| l == 0 || l > n) {
            return Err(Error::IndexOutOfRange { index: bad, n });
        }
        Ok(Self { n, parity })
    }

    /// `C(s)`: parity checks `w_1, ..., w_s`.
    pub fn standard(n: usize, s: usize) -> Result<Self> {
        if s > n {
            return Err(Error::IndexOutOfRange { index: s, n });
        }
        Ok(Self {
            n,
            parity: (1..=s).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parity(&self) -> &IndexSet {
        &self.parity
    }

    pub fn k(&self) -> usize {
        self.n - self.parity.len()
    }

    pub fn m_c(&self) -> IndexSet {
        (1..=self.n).filter(|&l| !self.parity.contains(l)).collect()
    }
}
