use serde::{Deserialize, Serialize};

use crate::mu::{IndexSet, PairStatus, StatusTable};
use crate::rho::RhoTable;

/// Which well-behaving notion a Feng-Rao count uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Flavor {
    Wb,
    Wwb,
    Owb,
}

impl Flavor {
    pub fn min_status(self) -> PairStatus {
        match self {
            Flavor::Wb => PairStatus::Wb,
            Flavor::Wwb => PairStatus::Wwb,
            Flavor::Owb => PairStatus::Owb,
        }
    }
}

/// Pairs `(i, j)` with `rho[i][j] = l` whose status is at least `flavor`.
pub fn feng_rao_pairs(
    t: &RhoTable,
    st: &StatusTable,
    l: usize,
    flavor: Flavor,
) -> Vec<(usize, usize)> {
    let n = t.n();
    (1..=n)
        .flat_map(|i| (1..=n).map(move |j| (i, j)))
        .filter(|&(i, j)| t.get(i, j) == l && st.get(i, j) >= flavor.min_status())
        .collect()
}

/// Feng-Rao lower bound for a word with `m(c) = l`.
pub fn feng_rao(t: &RhoTable, st: &StatusTable, l: usize, flavor: Flavor) -> usize {
    feng_rao_pairs(t, st, l, flavor).len()
}

/// `{i : exists j, status(i, j) >= flavor, rho[i][j] in targets}`.
///
/// A globally OWB pair is OWB with respect to every subset, so this set
/// always has the mu-property with respect to `targets`.
pub fn harvest(t: &RhoTable, st: &StatusTable, targets: &[usize], flavor: Flavor) -> IndexSet {
    let n = t.n();
    (1..=n)
        .filter(|&i| {
            (1..=n).any(|j| targets.contains(&t.get(i, j)) && st.get(i, j) >= flavor.min_status())
        })
        .collect()
}
