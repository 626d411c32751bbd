//! Well-behaving pair classification and the mu-property family of
//! predicates, evaluated purely on a [`RhoTable`].
//!
//! Every mu-type predicate has the same shape: each member `i` of a candidate
//! set must own a column `j` such that `rho[i][j]` hits a prescribed value and
//! every smaller member `i'` keeps `rho[i'][j]` inside an allowed region. A
//! [`Rule`] captures one such (hit value, allowed region) pair and a
//! [`Condition`] is a disjunction of rules.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rho::RhoTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PairStatus {
    None,
    Owb,
    Wwb,
    Wb,
}

/// Strongest label of `(i, j)`: OWB needs `rho[i'][j] < rho[i][j]` for all
/// `i' < i`, WWB adds `rho[i][j'] < rho[i][j]` for `j' < j`, WB needs every
/// other pair below and left of `(i, j)` to be smaller.
pub fn pair_status(t: &RhoTable, i: usize, j: usize) -> Result<PairStatus> {
    let l = t.checked_get(i, j)?;
    let owb = (1..i).all(|i2| t.get(i2, j) < l);
    if !owb {
        return Ok(PairStatus::None);
    }
    if !(1..j).all(|j2| t.get(i, j2) < l) {
        return Ok(PairStatus::Owb);
    }
    let wb = (1..=i).all(|i2| (1..=j).all(|j2| (i2, j2) == (i, j) || t.get(i2, j2) < l));
    Ok(if wb { PairStatus::Wb } else { PairStatus::Wwb })
}

/// All pair statuses at once, via running maxima of the table.
#[derive(Clone, Debug)]
pub struct StatusTable {
    n: usize,
    status: Vec<PairStatus>,
}

impl StatusTable {
    pub fn new(t: &RhoTable) -> Self {
        let n = t.n();
        // col_max[i][j] = max rho[i'][j] for i' <= i, likewise row and box maxima.
        let mut col_max = vec![0usize; (n + 1) * (n + 1)];
        let mut row_max = vec![0usize; (n + 1) * (n + 1)];
        let mut box_max = vec![0usize; (n + 1) * (n + 1)];
        let at = |i: usize, j: usize| i * (n + 1) + j;
        let mut status = Vec::with_capacity(n * n);
        for i in 1..=n {
            for j in 1..=n {
                let v = t.get(i, j);
                let above = col_max[at(i - 1, j)];
                let left = row_max[at(i, j - 1)];
                let boxed = box_max[at(i - 1, j)].max(box_max[at(i, j - 1)]);
                status.push(if above >= v {
                    PairStatus::None
                } else if left >= v {
                    PairStatus::Owb
                } else if boxed >= v {
                    PairStatus::Wwb
                } else {
                    PairStatus::Wb
                });
                col_max[at(i, j)] = above.max(v);
                row_max[at(i, j)] = left.max(v);
                box_max[at(i, j)] = boxed.max(v);
            }
        }
        Self { n, status }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> PairStatus {
        self.status[(i - 1) * self.n + (j - 1)]
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Sorted set of distinct 1-based indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(items: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = items.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Self(v)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        IndexSet::new(self.iter().chain(other.iter()))
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.iter().all(|i| other.contains(i))
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl FromIterator<usize> for IndexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        IndexSet::new(iter)
    }
}

/// One way for a member `i` to be justified by a column `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    /// `rho[i][j] = l`, and smaller members have `rho[i'][j] < l` or
    /// `rho[i'][j]` in `l+1..=l+g`. With `g = 0` this is OWB w.r.t. the set.
    Window { l: usize, g: usize },
    /// `rho[i][j] = pivot`, and smaller members have `rho[i'][j] < pivot` and
    /// `rho[i'][j] != l`.
    Pivot { l: usize, pivot: usize },
}

impl Rule {
    /// Value `rho[i][j]` must take.
    #[inline]
    pub fn head(&self) -> usize {
        match *self {
            Rule::Window { l, .. } => l,
            Rule::Pivot { pivot, .. } => pivot,
        }
    }

    /// Whether a smaller member with `rho[i'][j] = value` is tolerated.
    #[inline]
    pub fn admits(&self, value: usize) -> bool {
        match *self {
            Rule::Window { l, g } => value < l || (value > l && value <= l + g),
            Rule::Pivot { l, pivot } => value < pivot && value != l,
        }
    }
}

/// A disjunction of rules; a set satisfies it when every member is justified
/// by at least one rule and one column.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Condition {
    rules: Vec<Rule>,
}

impl Condition {
    pub fn from_rules(rules: Vec<Rule>) -> Self {
        Self { rules }
    }

    /// Plain mu-property with respect to `targets`.
    pub fn mu(targets: &[usize]) -> Self {
        Self {
            rules: targets.iter().map(|&l| Rule::Window { l, g: 0 }).collect(),
        }
    }

    /// mu-property w.r.t. `l` with exception `{l+1..l+g}`.
    pub fn exception(l: usize, g: usize) -> Self {
        Self {
            rules: vec![Rule::Window { l, g }],
        }
    }

    /// Relaxed mu-property w.r.t. `(l, pivot)` with exception `{l+1..pivot-1}`.
    pub fn relaxed(l: usize, pivot: usize) -> Self {
        assert!(pivot > l, "pivot must exceed l");
        Self {
            rules: vec![
                Rule::Window {
                    l,
                    g: pivot - l - 1,
                },
                Rule::Pivot { l, pivot },
            ],
        }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Disjunction of two conditions.
    pub fn or(mut self, other: &Condition) -> Self {
        for r in &other.rules {
            if !self.rules.contains(r) {
                self.rules.push(*r);
            }
        }
        self
    }

    fn check_range(&self, n: usize) -> Result<()> {
        for r in &self.rules {
            let top = match *r {
                Rule::Window { l, g } => l + g,
                Rule::Pivot { pivot, .. } => pivot,
            };
            if r.head() == 0 || top > n {
                return Err(Error::Precondition(format!(
                    "rule {r:?} reaches beyond n = {n}"
                )));
            }
        }
        Ok(())
    }

    /// First `(j, rule)` justifying `i` inside `set`, if any.
    pub fn justify(&self, t: &RhoTable, set: &IndexSet, i: usize) -> Option<(usize, Rule)> {
        let smaller: Vec<usize> = set.iter().take_while(|&x| x < i).collect();
        (1..=t.n()).find_map(|j| {
            let v = t.get(i, j);
            self.rules
                .iter()
                .find(|r| r.head() == v && smaller.iter().all(|&i2| r.admits(t.get(i2, j))))
                .map(|r| (j, *r))
        })
    }

    /// Direct evaluation of the predicate on `set`.
    pub fn holds(&self, t: &RhoTable, set: &IndexSet) -> bool {
        set.iter()
            .all(|i| i >= 1 && i <= t.n() && self.justify(t, set, i).is_some())
    }
}

/// `(i, j)` is OWB with respect to `set`: `rho[i'][j] < rho[i][j]` for every
/// smaller `i'` in `set`.
pub fn owb_wrt(t: &RhoTable, i: usize, j: usize, set: &IndexSet) -> Result<bool> {
    let l = t.checked_get(i, j)?;
    if !set.contains(i) {
        return Err(Error::NotInSet(i));
    }
    Ok(set.iter().take_while(|&x| x < i).all(|i2| t.get(i2, j) < l))
}

pub fn check_mu(t: &RhoTable, set: &IndexSet, targets: &[usize]) -> bool {
    Condition::mu(targets).holds(t, set)
}

pub fn check_mu_exception(t: &RhoTable, set: &IndexSet, l: usize, g: usize) -> Result<bool> {
    let cond = Condition::exception(l, g);
    cond.check_range(t.n())?;
    Ok(cond.holds(t, set))
}

pub fn check_relaxed_mu(t: &RhoTable, set: &IndexSet, l: usize, pivot: usize) -> Result<bool> {
    if pivot <= l {
        return Err(Error::Precondition(format!(
            "pivot {pivot} must exceed l = {l}"
        )));
    }
    let cond = Condition::relaxed(l, pivot);
    cond.check_range(t.n())?;
    Ok(cond.holds(t, set))
}

/// Fixed-width bitset over local indices.
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(64).max(1)
}

/// A condition compiled against a table: for each candidate `i` the list of
/// `(j, rule)` witnesses and, per witness, the smaller candidates it forbids.
/// This part does not depend on the candidate set, so it is computed once per
/// condition and reused by every search.
#[derive(Clone, Debug)]
pub struct WitnessTable {
    universe: Vec<usize>,
    words: usize,
    opt_start: Vec<usize>,
    masks: Vec<u64>,
    witnesses: Vec<(usize, Rule)>,
}

impl WitnessTable {
    pub fn compile(t: &RhoTable, cond: &Condition) -> Self {
        let n = t.n();
        let mut raw: Vec<(usize, Vec<(usize, Rule)>)> = Vec::new();
        for i in 1..=n {
            let opts: Vec<(usize, Rule)> = (1..=n)
                .flat_map(|j| {
                    let v = t.get(i, j);
                    cond.rules
                        .iter()
                        .filter(move |r| r.head() == v)
                        .map(move |r| (j, *r))
                })
                .collect();
            if !opts.is_empty() {
                raw.push((i, opts));
            }
        }
        let universe: Vec<usize> = raw.iter().map(|(i, _)| *i).collect();
        let words = words_for(universe.len());
        let mut opt_start = vec![0];
        let mut masks = Vec::new();
        let mut witnesses = Vec::new();
        for (k, (i, opts)) in raw.iter().enumerate() {
            let mut local: Vec<(Vec<u64>, (usize, Rule))> = opts
                .iter()
                .map(|&(j, rule)| {
                    let mut mask = vec![0u64; words];
                    for (k2, &i2) in universe[..k].iter().enumerate() {
                        if !rule.admits(t.get(i2, j)) {
                            mask[k2 / 64] |= 1 << (k2 % 64);
                        }
                    }
                    (mask, (j, rule))
                })
                .collect();
            // drop witnesses whose forbidden set contains another's
            let mut kept: Vec<(Vec<u64>, (usize, Rule))> = Vec::new();
            for cand in local.drain(..) {
                let dominated = kept
                    .iter()
                    .any(|(m, _)| m.iter().zip(&cand.0).all(|(a, b)| a & !b == 0));
                if !dominated {
                    kept.retain(|(m, _)| !cand.0.iter().zip(m).all(|(a, b)| a & !b == 0));
                    kept.push(cand);
                }
            }
            debug_assert!(*i >= 1);
            for (mask, w) in kept {
                masks.extend(mask);
                witnesses.push(w);
            }
            opt_start.push(witnesses.len());
        }
        Self {
            universe,
            words,
            opt_start,
            masks,
            witnesses,
        }
    }

    /// Candidates (1-based, ascending) that own at least one witness.
    pub fn universe(&self) -> &[usize] {
        &self.universe
    }

    pub fn words(&self) -> usize {
        self.words
    }

    pub fn local_of(&self, i: usize) -> Option<usize> {
        self.universe.binary_search(&i).ok()
    }

    pub fn option_count(&self, k: usize) -> usize {
        self.opt_start[k + 1] - self.opt_start[k]
    }

    #[inline]
    pub fn mask(&self, opt: usize) -> &[u64] {
        &self.masks[opt * self.words..(opt + 1) * self.words]
    }

    pub fn options(&self, k: usize) -> std::ops::Range<usize> {
        self.opt_start[k]..self.opt_start[k + 1]
    }

    pub fn witness(&self, opt: usize) -> (usize, Rule) {
        self.witnesses[opt]
    }

    /// Whether local candidate `k` can join a set whose smaller members are
    /// `chosen` (a bitset over local indices).
    #[inline]
    pub fn addable(&self, k: usize, chosen: &[u64]) -> bool {
        self.options(k)
            .any(|o| self.mask(o).iter().zip(chosen).all(|(m, c)| m & c == 0))
    }

    /// Converts a set of 1-based indices into a local bitset; indices outside
    /// the universe make the set infeasible and yield `None`.
    pub fn to_local(&self, set: &IndexSet) -> Option<Vec<u64>> {
        let mut bits = vec![0u64; self.words];
        for i in set.iter() {
            let k = self.local_of(i)?;
            bits[k / 64] |= 1 << (k % 64);
        }
        Some(bits)
    }

    /// Feasibility of `set` using the compiled witnesses.
    pub fn feasible(&self, set: &IndexSet) -> bool {
        let Some(bits) = self.to_local(set) else {
            return false;
        };
        let mut below = vec![0u64; self.words];
        for i in set.iter() {
            let k = self.local_of(i).expect("checked above");
            if !self.addable(k, &below) {
                return false;
            }
            below[k / 64] |= 1 << (k % 64);
        }
        debug_assert_eq!(below, bits);
        true
    }
}
