//! Maximum-cardinality sets satisfying a compiled mu-type condition.
//!
//! Feasibility of a member only depends on smaller members, so sets are grown
//! in ascending index order: a candidate can join iff one of its witnesses
//! avoids everything already chosen, and later additions never invalidate it.
//! The search is a depth-first branch and bound over that order, include
//! branch first.
//!
//! For the bound, each (candidate, option) pair is a vertex, adjacent to the
//! other options of its candidate and to every option of a candidate inside
//! its mask. Members added to a feasible set, each with an option that
//! justifies it, form an independent set of this graph; so `|chosen|` plus a
//! greedy clique cover of the usable options bounds every extension.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mu::{IndexSet, WitnessTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SearchMode {
    /// Branch and bound with a node budget; returns the incumbent when the
    /// budget runs out.
    Heuristic,
    /// Branch and bound to optimality; refuses universes above the cap.
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    pub node_budget: u64,
    pub universe_cap: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self {
            node_budget: 2_000_000,
            universe_cap: 24,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub set: IndexSet,
    /// The search proved `set` maximum.
    pub complete: bool,
    pub nodes: u64,
}

impl SearchOutcome {
    pub fn size(&self) -> usize {
        self.set.len()
    }
}

/// Largest set feasible for `wt`.
///
/// `seeds` that are feasible provide the starting incumbent. With `stop_at`
/// the search returns as soon as a set of that size is known; the outcome is
/// then only a lower bound (`complete == false` unless it was already proved).
pub fn max_feasible_set(
    wt: &WitnessTable,
    seeds: &[&IndexSet],
    mode: SearchMode,
    limits: SearchLimits,
    stop_at: Option<usize>,
) -> Result<SearchOutcome> {
    let u = wt.universe().len();
    if mode == SearchMode::Exact && u > limits.universe_cap {
        return Err(Error::UniverseTooLarge {
            size: u,
            cap: limits.universe_cap,
        });
    }
    let budget = match mode {
        SearchMode::Exact => None,
        SearchMode::Heuristic => Some(limits.node_budget),
    };
    let mut solver = Solver::new(wt, budget, stop_at);
    for seed in seeds {
        if seed.len() > solver.best_count && wt.feasible(seed) {
            solver.best = wt
                .to_local(seed)
                .expect("feasible sets lie in the universe");
            solver.best_count = seed.len();
        }
    }
    if stop_at.is_some_and(|s| solver.best_count >= s) {
        return Ok(solver.outcome(false));
    }
    solver.dfs(0);
    let complete = !solver.aborted && !solver.reached;
    Ok(solver.outcome(complete))
}

struct Solver<'a> {
    wt: &'a WitnessTable,
    u: usize,
    adjacent: Vec<Vec<u64>>,
    groups: Vec<Vec<u64>>,
    usable: Vec<usize>,
    chosen: Vec<u64>,
    count: usize,
    best: Vec<u64>,
    best_count: usize,
    nodes: u64,
    budget: Option<u64>,
    stop_at: Option<usize>,
    aborted: bool,
    reached: bool,
}

impl<'a> Solver<'a> {
    fn new(wt: &'a WitnessTable, budget: Option<u64>, stop_at: Option<usize>) -> Self {
        let words = wt.words();
        let u = wt.universe().len();
        let total = if u == 0 { 0 } else { wt.options(u - 1).end };
        let owords = total.div_ceil(64).max(1);
        let mut adjacent = vec![vec![0u64; owords]; total];
        let mut link = |x: usize, y: usize| {
            adjacent[x][y / 64] |= 1 << (y % 64);
            adjacent[y][x / 64] |= 1 << (x % 64);
        };
        for b in 0..u {
            for o in wt.options(b) {
                for o2 in wt.options(b).filter(|&o2| o2 != o) {
                    link(o, o2);
                }
                let mask = wt.mask(o);
                for a in (0..b).filter(|&a| mask[a / 64] >> (a % 64) & 1 == 1) {
                    for o2 in wt.options(a) {
                        link(o, o2);
                    }
                }
            }
        }
        Self {
            wt,
            u,
            adjacent,
            groups: Vec::new(),
            usable: Vec::new(),
            chosen: vec![0; words],
            count: 0,
            best: vec![0; words],
            best_count: 0,
            nodes: 0,
            budget,
            stop_at,
            aborted: false,
            reached: false,
        }
    }

    fn outcome(&self, complete: bool) -> SearchOutcome {
        let set = (0..self.u)
            .filter(|&k| self.best[k / 64] >> (k % 64) & 1 == 1)
            .map(|k| self.wt.universe()[k])
            .collect();
        SearchOutcome {
            set,
            complete,
            nodes: self.nodes,
        }
    }

    /// Whether choosing `k` can never block any of `later`.
    fn harmless(&self, k: usize, later: &[usize]) -> bool {
        let (w, b) = (k / 64, 1u64 << (k % 64));
        later
            .iter()
            .all(|&k2| self.wt.options(k2).all(|o| self.wt.mask(o)[w] & b == 0))
    }

    /// Greedy clique cover of the options of `cand` still compatible with
    /// the chosen set; stops counting once `limit` is exceeded.
    fn cover_bound(&mut self, cand: &[usize], limit: usize) -> usize {
        let mut usable = std::mem::take(&mut self.usable);
        usable.clear();
        for &k in cand {
            usable.extend(self.wt.options(k).filter(|&o| {
                self.wt
                    .mask(o)
                    .iter()
                    .zip(&self.chosen)
                    .all(|(m, c)| m & c == 0)
            }));
        }
        let mut used = 0;
        for &o in &usable {
            let (w, b) = (o / 64, 1u64 << (o % 64));
            match self.groups[..used].iter_mut().find(|g| g[w] & b != 0) {
                Some(g) => g
                    .iter_mut()
                    .zip(&self.adjacent[o])
                    .for_each(|(x, y)| *x &= y),
                None => {
                    if used == self.groups.len() {
                        self.groups.push(Vec::new());
                    }
                    self.groups[used].clone_from(&self.adjacent[o]);
                    used += 1;
                    if used > limit {
                        break;
                    }
                }
            }
        }
        self.usable = usable;
        used
    }

    fn dfs(&mut self, pos: usize) {
        self.nodes += 1;
        if self.budget.is_some_and(|b| self.nodes > b) {
            self.aborted = true;
            return;
        }
        let cand: Vec<usize> = (pos..self.u)
            .filter(|&k| self.wt.addable(k, &self.chosen))
            .collect();
        if self.count + cand.len() <= self.best_count {
            return;
        }
        let room = self.best_count - self.count;
        if cand.len() > 1 && self.cover_bound(&cand, room) <= room {
            return;
        }
        let Some(&k) = cand.first() else {
            return;
        };
        let (w, b) = (k / 64, 1u64 << (k % 64));
        self.chosen[w] |= b;
        self.count += 1;
        if self.count > self.best_count {
            self.best_count = self.count;
            self.best.copy_from_slice(&self.chosen);
            if self.stop_at.is_some_and(|s| self.best_count >= s) {
                self.reached = true;
            }
        }
        if !self.reached {
            self.dfs(k + 1);
        }
        self.chosen[w] &= !b;
        self.count -= 1;
        if self.aborted || self.reached || self.harmless(k, &cand[1..]) {
            return;
        }
        self.dfs(k + 1);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Curve;
    use crate::mu::Condition;
    use crate::rho::{rho_table_algebraic, RhoTable};

    /// Plain subset enumeration, independent of the solver.
    fn brute(t: &RhoTable, cond: &Condition) -> usize {
        let wt = WitnessTable::compile(t, cond);
        let u = wt.universe().to_vec();
        assert!(u.len() <= 20);
        (0u32..1 << u.len())
            .filter_map(|mask| {
                let s: IndexSet = (0..u.len())
                    .filter(|k| mask >> k & 1 == 1)
                    .map(|k| u[k])
                    .collect();
                cond.holds(t, &s).then_some(s.len())
            })
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn matches_enumeration_on_f8() {
        let t = rho_table_algebraic(&Curve::f8()).unwrap();
        for l in [2, 5, 9, 12, 14, 17] {
            let cond = Condition::mu(&[l]);
            let wt = WitnessTable::compile(&t, &cond);
            if wt.universe().len() > 20 {
                continue;
            }
            let out = max_feasible_set(&wt, &[], SearchMode::Exact, SearchLimits::default(), None)
                .unwrap();
            assert!(out.complete);
            assert!(cond.holds(&t, &out.set));
            assert_eq!(out.size(), brute(&t, &cond), "l = {l}");
        }
    }

    #[test]
    fn stop_at_and_caps() {
        let t = rho_table_algebraic(&Curve::f8()).unwrap();
        let wt = WitnessTable::compile(&t, &Condition::mu(&[30]));
        let limits = SearchLimits {
            node_budget: 10,
            universe_cap: 3,
        };
        assert!(matches!(
            max_feasible_set(&wt, &[], SearchMode::Exact, limits, None),
            Err(Error::UniverseTooLarge { .. })
        ));
        let seed = IndexSet::new([1]);
        let out = max_feasible_set(&wt, &[&seed], SearchMode::Heuristic, limits, Some(1)).unwrap();
        assert_eq!(out.set, seed);
        assert_eq!(out.nodes, 0);
        // infeasible seeds are ignored
        let bad = IndexSet::new([1, 2, 3, 4, 5, 6, 7, 8, 9, 10]);
        let out = max_feasible_set(
            &wt,
            &[&bad],
            SearchMode::Heuristic,
            SearchLimits::default(),
            None,
        )
        .unwrap();
        assert!(Condition::mu(&[30]).holds(&t, &out.set));
    }
}
