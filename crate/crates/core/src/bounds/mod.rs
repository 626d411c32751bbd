//! Lower bounds on Hamming weights and generalized Hamming weights of dual
//! codes, computed from a [`RhoTable`].
//!
//! * Feng-Rao counts with WB, WWB or OWB pairs.
//! * The advisory bound: the largest set with the mu-property with respect to
//!   the target value(s).
//! * The further improved ("fim") bound: a case split on which of the
//!   positions `l+1..l+v` is the first with a nonzero syndrome, taking the
//!   minimum over the cases of the largest exception / relaxed mu-sets.
//!
//! Every value comes with the sets that witness it, each tagged with the
//! [`Condition`] it satisfies, so results can be re-checked independently.

pub mod codes;
pub mod feng_rao;
pub mod report;
pub mod search;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mu::{Condition, IndexSet, StatusTable, WitnessTable};
use crate::rho::RhoTable;

pub use codes::CodeSpec;
pub use feng_rao::{feng_rao, harvest, Flavor};
pub use search::{max_feasible_set, SearchLimits, SearchMode, SearchOutcome};

/// How the window length `v` is chosen for each `l` in the fim bound.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum VPolicy {
    /// Number of later footprint monomials sharing the weight of `M_l`
    /// (0 for tables without weights).
    #[default]
    Auto,
    /// The same `v` everywhere, clipped to `n - l`.
    Uniform(usize),
    /// Explicit values; unlisted `l` get 0.
    Fixed(BTreeMap<usize, usize>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundMethod {
    FrWb,
    FrWwb,
    FrOwb,
    Advisory,
    Fim(VPolicy),
}

impl BoundMethod {
    pub fn name(&self) -> &'static str {
        match self {
            BoundMethod::FrWb => "wb",
            BoundMethod::FrWwb => "wwb",
            BoundMethod::FrOwb => "owb",
            BoundMethod::Advisory => "adv",
            BoundMethod::Fim(_) => "fim",
        }
    }

    pub fn flavor(&self) -> Option<Flavor> {
        match self {
            BoundMethod::FrWb => Some(Flavor::Wb),
            BoundMethod::FrWwb => Some(Flavor::Wwb),
            BoundMethod::FrOwb => Some(Flavor::Owb),
            _ => None,
        }
    }

    /// The five methods in increasing strength, fim with the automatic policy.
    pub fn all() -> Vec<BoundMethod> {
        vec![
            BoundMethod::FrWb,
            BoundMethod::FrWwb,
            BoundMethod::FrOwb,
            BoundMethod::Advisory,
            BoundMethod::Fim(VPolicy::Auto),
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundConfig {
    pub mode: SearchMode,
    pub limits: SearchLimits,
    /// Largest number of case tuples a single fim GHW target set may need.
    pub case_cap: usize,
}

impl Default for BoundConfig {
    fn default() -> Self {
        Self {
            mode: SearchMode::Heuristic,
            limits: SearchLimits::default(),
            case_cap: 4096,
        }
    }
}

/// A set together with the condition it is claimed to satisfy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certified {
    pub condition: Condition,
    pub set: IndexSet,
}

/// A bound value with its witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: usize,
    /// Target values (m-values) of the minimizing case.
    pub targets: Vec<usize>,
    pub certificate: Vec<Certified>,
    /// All searches behind the minimizing case were proved optimal.
    pub complete: bool,
}

impl Estimate {
    /// Re-checks every certificate set against its condition.
    pub fn verify(&self, t: &RhoTable) -> bool {
        self.certificate
            .iter()
            .all(|c| c.condition.holds(t, &c.set))
    }

    /// Smallest certificate set size; equals `value` for search-based methods.
    pub fn certified_min(&self) -> Option<usize> {
        self.certificate.iter().map(|c| c.set.len()).min()
    }
}

/// Result of the fim bound for a single `l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FimBound {
    pub l: usize,
    pub v: usize,
    pub known_zeros: IndexSet,
    /// `l'_1 < ... < l'_s`: positions in `l+1..l+v` not known to vanish.
    pub pivots: Vec<usize>,
    pub value: usize,
    /// Case 0 first, then one entry per pivot.
    pub cases: Vec<Certified>,
    pub complete: bool,
}

impl From<FimBound> for Estimate {
    fn from(f: FimBound) -> Self {
        Estimate {
            value: f.value,
            targets: vec![f.l],
            certificate: f.cases,
            complete: f.complete,
        }
    }
}

/// Bound computations over one table. Caches witness tables and full search
/// results for single targets; safe to share across threads.
pub struct Bounds<'a> {
    table: &'a RhoTable,
    status: StatusTable,
    config: BoundConfig,
    witnesses: Mutex<HashMap<Condition, Arc<WitnessTable>>>,
    searches: Mutex<HashMap<Condition, SearchOutcome>>,
    harvest_bits: [OnceLock<Vec<Vec<u64>>>; 3],
}

fn or_bits(acc: &mut [u64], other: &[u64]) {
    acc.iter_mut().zip(other).for_each(|(a, b)| *a |= b);
}

fn count_bits(bits: &[u64]) -> usize {
    bits.iter().map(|w| w.count_ones() as usize).sum()
}

impl<'a> Bounds<'a> {
    pub fn new(table: &'a RhoTable) -> Self {
        Self::with_config(table, BoundConfig::default())
    }

    pub fn with_config(table: &'a RhoTable, config: BoundConfig) -> Self {
        Self {
            table,
            status: StatusTable::new(table),
            config,
            witnesses: Mutex::new(HashMap::new()),
            searches: Mutex::new(HashMap::new()),
            harvest_bits: [OnceLock::new(), OnceLock::new(), OnceLock::new()],
        }
    }

    pub fn table(&self) -> &RhoTable {
        self.table
    }

    pub fn status(&self) -> &StatusTable {
        &self.status
    }

    pub fn config(&self) -> &BoundConfig {
        &self.config
    }

    pub fn n(&self) -> usize {
        self.table.n()
    }

    fn check_l(&self, l: usize) -> Result<()> {
        if l == 0 || l > self.n() {
            return Err(Error::IndexOutOfRange {
                index: l,
                n: self.n(),
            });
        }
        Ok(())
    }

    fn witness_table(&self, cond: &Condition, cache: bool) -> Arc<WitnessTable> {
        if !cache {
            return Arc::new(WitnessTable::compile(self.table, cond));
        }
        if let Some(wt) = self.witnesses.lock().unwrap().get(cond) {
            return wt.clone();
        }
        let wt = Arc::new(WitnessTable::compile(self.table, cond));
        self.witnesses
            .lock()
            .unwrap()
            .entry(cond.clone())
            .or_insert(wt)
            .clone()
    }

    /// Full search for a cacheable condition in the configured mode.
    fn full_search(&self, cond: &Condition, seeds: &[&IndexSet]) -> Result<SearchOutcome> {
        self.search(cond, seeds, None)
    }

    /// Cached search in the configured mode. A run that never reached
    /// `stop_at` followed the same path as a full one, so it is cached too.
    fn search(
        &self,
        cond: &Condition,
        seeds: &[&IndexSet],
        stop_at: Option<usize>,
    ) -> Result<SearchOutcome> {
        if let Some(out) = self.searches.lock().unwrap().get(cond) {
            return Ok(out.clone());
        }
        let wt = self.witness_table(cond, true);
        let out = max_feasible_set(&wt, seeds, self.config.mode, self.config.limits, stop_at)?;
        if stop_at.is_none_or(|s| out.size() < s) {
            self.searches
                .lock()
                .unwrap()
                .insert(cond.clone(), out.clone());
        }
        Ok(out)
    }

    pub fn feng_rao(&self, l: usize, flavor: Flavor) -> Result<usize> {
        self.check_l(l)?;
        Ok(feng_rao::feng_rao(self.table, &self.status, l, flavor))
    }

    /// Per-`l` harvest sets as bitsets over `i`.
    fn harvest_bits(&self, flavor: Flavor) -> &Vec<Vec<u64>> {
        let slot = match flavor {
            Flavor::Wb => 0,
            Flavor::Wwb => 1,
            Flavor::Owb => 2,
        };
        self.harvest_bits[slot].get_or_init(|| {
            let n = self.n();
            let words = n.div_ceil(64);
            let mut bits = vec![vec![0u64; words]; n + 1];
            for i in 1..=n {
                for j in 1..=n {
                    if self.status.get(i, j) >= flavor.min_status() {
                        let l = self.table.get(i, j);
                        bits[l][(i - 1) / 64] |= 1 << ((i - 1) % 64);
                    }
                }
            }
            bits
        })
    }

    fn harvest_bitset(&self, targets: &[usize], flavor: Flavor) -> Vec<u64> {
        let hb = self.harvest_bits(flavor);
        let mut acc = vec![0u64; hb[0].len()];
        for &l in targets {
            or_bits(&mut acc, &hb[l]);
        }
        acc
    }

    fn harvest_set(&self, targets: &[usize], flavor: Flavor) -> IndexSet {
        let bits = self.harvest_bitset(targets, flavor);
        (1..=self.n())
            .filter(|&i| bits[(i - 1) / 64] >> ((i - 1) % 64) & 1 == 1)
            .collect()
    }

    fn harvest_size(&self, targets: &[usize], flavor: Flavor) -> usize {
        count_bits(&self.harvest_bitset(targets, flavor))
    }

    /// Largest set with the mu-property with respect to `targets`.
    pub fn max_mu_set(&self, targets: &[usize], mode: SearchMode) -> Result<SearchOutcome> {
        if targets.is_empty() {
            return Err(Error::EmptyTargets);
        }
        for &l in targets {
            self.check_l(l)?;
        }
        let mut targets = targets.to_vec();
        targets.sort_unstable();
        targets.dedup();
        let cond = Condition::mu(&targets);
        let seed = self.harvest_set(&targets, Flavor::Owb);
        if mode == self.config.mode {
            return self.full_search(&cond, &[&seed]);
        }
        let wt = self.witness_table(&cond, true);
        max_feasible_set(&wt, &[&seed], mode, self.config.limits, None)
    }

    /// Advisory value for `l`, allowed to stop once it reaches `cur`.
    fn advisory_with_stop(&self, l: usize, cur: usize) -> Result<Estimate> {
        self.check_l(l)?;
        let cond = Condition::mu(&[l]);
        let seed = self.harvest_set(&[l], Flavor::Owb);
        let stop = (cur != usize::MAX).then_some(cur);
        let out = self.search(&cond, &[&seed], stop)?;
        Ok(Estimate {
            value: out.size(),
            targets: vec![l],
            certificate: vec![Certified {
                condition: cond,
                set: out.set,
            }],
            complete: out.complete,
        })
    }

    pub fn advisory_bound(&self, l: usize) -> Result<Estimate> {
        let out = self.max_mu_set(&[l], self.config.mode)?;
        Ok(Estimate {
            value: out.size(),
            targets: vec![l],
            certificate: vec![Certified {
                condition: Condition::mu(&[l]),
                set: out.set,
            }],
            complete: out.complete,
        })
    }

    /// Window length for `l` under `policy`, never reaching beyond `n`.
    pub fn v_for(&self, l: usize, policy: &VPolicy) -> usize {
        let n = self.n();
        let v = match policy {
            VPolicy::Auto => match self.table.weights() {
                Some(w) => (l + 1..=n).take_while(|&x| w[x - 1] == w[l - 1]).count(),
                None => 0,
            },
            VPolicy::Uniform(v) => *v,
            VPolicy::Fixed(map) => map.get(&l).copied().unwrap_or(0),
        };
        v.min(n - l)
    }

    /// The fim bound for `m(c) = l` with window `l+1..l+v`, of which
    /// `known_zeros` are known a priori to have zero syndrome.
    pub fn fim_bound(&self, l: usize, known_zeros: &IndexSet, v: usize) -> Result<FimBound> {
        self.fim_with_stop(l, known_zeros, v, None)
    }

    fn fim_with_stop(
        &self,
        l: usize,
        known_zeros: &IndexSet,
        v: usize,
        stop_at: Option<usize>,
    ) -> Result<FimBound> {
        self.check_l(l)?;
        if l + v > self.n() {
            return Err(Error::Precondition(format!(
                "l + v = {} exceeds n = {}",
                l + v,
                self.n()
            )));
        }
        if let Some(x) = known_zeros.iter().find(|&x| x <= l || x > l + v) {
            return Err(Error::Precondition(format!(
                "known zero {x} outside {}..={}",
                l + 1,
                l + v
            )));
        }
        let pivots: Vec<usize> = (l + 1..=l + v)
            .filter(|&x| !known_zeros.contains(x))
            .collect();
        let adv = self.advisory_with_stop(l, stop_at.unwrap_or(usize::MAX))?;
        let adv = &adv.certificate[0];
        let conds = std::iter::once(Condition::exception(l, v))
            .chain(pivots.iter().map(|&p| Condition::relaxed(l, p)));
        let mut cur = usize::MAX;
        let mut cases = Vec::new();
        let mut complete = true;
        for cond in conds {
            let limit = stop_at.map_or(cur, |s| s.min(cur));
            let out = self.search(&cond, &[&adv.set], (limit != usize::MAX).then_some(limit))?;
            if out.size() < cur {
                cur = out.size();
                complete = out.complete;
            }
            cases.push(Certified {
                condition: cond,
                set: out.set,
            });
        }
        Ok(FimBound {
            l,
            v,
            known_zeros: known_zeros.clone(),
            pivots,
            value: cur,
            cases,
            complete,
        })
    }

    /// Known zeros for `l` in a code with parity positions `parity`.
    pub fn known_zeros(&self, l: usize, v: usize, parity: &IndexSet) -> IndexSet {
        (l + 1..=l + v).filter(|&x| parity.contains(x)).collect()
    }

    /// Fim bound for `l` inside a code, with `v` from `policy`.
    pub fn fim_in_code(&self, l: usize, policy: &VPolicy, parity: &IndexSet) -> Result<FimBound> {
        let v = self.v_for(l, policy);
        self.fim_bound(l, &self.known_zeros(l, v, parity), v)
    }

    /// Per-`l` value of a method for a word with `m(c) = l` in a code with the
    /// given parity set (only fim looks at it).
    pub fn per_l(&self, l: usize, method: &BoundMethod, parity: &IndexSet) -> Result<Estimate> {
        match method {
            BoundMethod::Advisory => self.advisory_bound(l),
            BoundMethod::Fim(policy) => Ok(self.fim_in_code(l, policy, parity)?.into()),
            fr => {
                let flavor = fr.flavor().expect("Feng-Rao method");
                let value = self.feng_rao(l, flavor)?;
                Ok(Estimate {
                    value,
                    targets: vec![l],
                    certificate: vec![Certified {
                        condition: Condition::mu(&[l]),
                        set: self.harvest_set(&[l], flavor),
                    }],
                    complete: true,
                })
            }
        }
    }

    fn check_t(&self, m_c: &IndexSet, t: usize) -> Result<()> {
        if t == 0 || t > m_c.len() {
            return Err(Error::Precondition(format!(
                "t = {t} outside 1..={}",
                m_c.len()
            )));
        }
        for l in m_c.iter() {
            self.check_l(l)?;
        }
        Ok(())
    }

    /// `t`-th generalized Hamming weight bound: minimum over `t`-subsets of
    /// `m_c` of the Feng-Rao harvest size or the advisory maximum.
    pub fn ghw_bound(&self, m_c: &IndexSet, t: usize, method: &BoundMethod) -> Result<Estimate> {
        self.check_t(m_c, t)?;
        if let Some(flavor) = method.flavor() {
            let (value, targets) = m_c
                .as_slice()
                .iter()
                .copied()
                .combinations(t)
                .map(|s| (self.harvest_size(&s, flavor), s))
                .min_by_key(|(v, _)| *v)
                .expect("at least one subset");
            let set = self.harvest_set(&targets, flavor);
            return Ok(Estimate {
                value,
                certificate: vec![Certified {
                    condition: Condition::mu(&targets),
                    set,
                }],
                targets,
                complete: true,
            });
        }
        if !matches!(method, BoundMethod::Advisory) {
            return Err(Error::Precondition(
                "ghw_bound takes a Feng-Rao flavor or the advisory bound".into(),
            ));
        }
        if t == 1 {
            return self.min_over_targets(
                m_c,
                |l| self.harvest_size(&[l], Flavor::Owb),
                |l, cur| self.advisory_with_stop(l, cur),
            );
        }
        // Single-target results are lower bounds (and seeds) for every target
        // set containing them; computed on demand and stopped at the minimum.
        let mut singles: BTreeMap<usize, Estimate> = BTreeMap::new();
        let mut best: Option<Estimate> = None;
        for subset in m_c.as_slice().iter().copied().combinations(t) {
            let cur = best.as_ref().map_or(usize::MAX, |b| b.value);
            if self.harvest_size(&subset, Flavor::Owb) >= cur {
                continue;
            }
            for &l in &subset {
                if !singles.contains_key(&l) {
                    singles.insert(l, self.advisory_with_stop(l, cur)?);
                }
            }
            if subset.iter().map(|l| singles[l].value).max().unwrap() >= cur {
                continue;
            }
            let harvest = self.harvest_set(&subset, Flavor::Owb);
            let mut seeds: Vec<&IndexSet> = subset
                .iter()
                .map(|l| &singles[l].certificate[0].set)
                .collect();
            seeds.push(&harvest);
            let cond = Condition::mu(&subset);
            let wt = self.witness_table(&cond, false);
            let stop = (cur != usize::MAX).then_some(cur);
            let out = max_feasible_set(&wt, &seeds, self.config.mode, self.config.limits, stop)?;
            if out.size() < cur {
                best = Some(Estimate {
                    value: out.size(),
                    certificate: vec![Certified {
                        condition: cond,
                        set: out.set,
                    }],
                    targets: subset,
                    complete: out.complete,
                });
            }
        }
        Ok(best.expect("at least one subset"))
    }

    /// Fim bound on the `t`-th generalized Hamming weight of the code with
    /// parity positions `parity` (`m_c` its complement).
    ///
    /// Every case condition of a target contains its plain mu-condition, so
    /// OWB harvests and per-target fim values are lower bounds used to skip
    /// target sets that cannot beat the running minimum. Per-target results
    /// are computed on demand, stopping once they reach that minimum.
    pub fn fim_ghw_bound(
        &self,
        m_c: &IndexSet,
        t: usize,
        policy: &VPolicy,
        parity: &IndexSet,
    ) -> Result<Estimate> {
        self.check_t(m_c, t)?;
        let fim_at = |l: usize, cur: usize| {
            let v = self.v_for(l, policy);
            let stop = (cur != usize::MAX).then_some(cur);
            self.fim_with_stop(l, &self.known_zeros(l, v, parity), v, stop)
        };
        if t == 1 {
            return self.min_over_targets(
                m_c,
                |l| self.harvest_size(&[l], Flavor::Owb),
                |l, cur| Ok(fim_at(l, cur)?.into()),
            );
        }
        let mut singles: BTreeMap<usize, FimBound> = BTreeMap::new();
        let mut best: Option<(usize, Vec<usize>, Vec<Certified>, bool)> = None;
        for subset in m_c.as_slice().iter().copied().combinations(t) {
            let cur = best.as_ref().map_or(usize::MAX, |b| b.0);
            if self.harvest_size(&subset, Flavor::Owb) >= cur {
                continue;
            }
            for &l in &subset {
                if !singles.contains_key(&l) {
                    singles.insert(l, fim_at(l, cur)?);
                }
            }
            let fims: Vec<&FimBound> = subset.iter().map(|l| &singles[l]).collect();
            if fims.iter().map(|f| f.value).max().unwrap() >= cur {
                continue;
            }
            let harvest = self.harvest_set(&subset, Flavor::Owb);
            let count = fims
                .iter()
                .try_fold(1usize, |acc, f| acc.checked_mul(f.cases.len()));
            match count {
                Some(c) if c <= self.config.case_cap => {}
                c => {
                    return Err(Error::TooManyCases {
                        count: c.unwrap_or(usize::MAX),
                        cap: self.config.case_cap,
                    })
                }
            }
            let mut sub_cur = cur;
            let mut certs = Vec::new();
            let mut complete = true;
            for tuple in fims
                .iter()
                .map(|f| 0..f.cases.len())
                .multi_cartesian_product()
            {
                let cond = tuple
                    .iter()
                    .zip(&fims)
                    .fold(Condition::from_rules(Vec::new()), |acc, (&z, f)| {
                        acc.or(&f.cases[z].condition)
                    });
                let mut seeds: Vec<&IndexSet> = tuple
                    .iter()
                    .zip(&fims)
                    .map(|(&z, f)| &f.cases[z].set)
                    .collect();
                seeds.push(&harvest);
                let wt = self.witness_table(&cond, false);
                let stop = (sub_cur != usize::MAX).then_some(sub_cur);
                let out =
                    max_feasible_set(&wt, &seeds, self.config.mode, self.config.limits, stop)?;
                if out.size() < sub_cur {
                    sub_cur = out.size();
                    complete = out.complete;
                }
                certs.push(Certified {
                    condition: cond,
                    set: out.set,
                });
            }
            if sub_cur < cur {
                best = Some((sub_cur, subset, certs, complete));
            }
        }
        let (value, targets, certificate, complete) = best.expect("at least one subset");
        Ok(Estimate {
            value,
            targets,
            certificate,
            complete,
        })
    }

    /// Minimum of `eval` over `m_c`, visiting targets by ascending lower bound
    /// `lower` and stopping once it reaches the running minimum. `eval` gets
    /// that minimum and may stop its own searches there. Ties keep the first
    /// target in visiting order.
    fn min_over_targets(
        &self,
        m_c: &IndexSet,
        lower: impl Fn(usize) -> usize + Sync,
        mut eval: impl FnMut(usize, usize) -> Result<Estimate>,
    ) -> Result<Estimate> {
        let mut order: Vec<(usize, usize)> =
            m_c.as_slice().par_iter().map(|&l| (lower(l), l)).collect();
        order.sort_unstable();
        let mut best: Option<Estimate> = None;
        for (lb, l) in order {
            let cur = best.as_ref().map_or(usize::MAX, |e| e.value);
            if lb >= cur {
                break;
            }
            let e = eval(l, cur)?;
            if e.value < cur {
                best = Some(e);
            }
        }
        Ok(best.expect("nonempty target set"))
    }

    /// Bound on `d_t` of `code` under `method`.
    pub fn code_bound(&self, code: &CodeSpec, method: &BoundMethod, t: usize) -> Result<Estimate> {
        if code.n() != self.n() {
            return Err(Error::Dimension {
                expected: self.n(),
                got: code.n(),
            });
        }
        let m_c = code.m_c();
        if m_c.is_empty() {
            return Err(Error::Precondition("the code has dimension 0".into()));
        }
        self.check_t(&m_c, t)?;
        if t == 1 {
            match method {
                BoundMethod::Advisory => {
                    return self.min_over_targets(
                        &m_c,
                        |l| self.harvest_size(&[l], Flavor::Owb),
                        |l, cur| self.advisory_with_stop(l, cur),
                    )
                }
                BoundMethod::Fim(_) => {}
                fr => {
                    let per: Vec<Estimate> = m_c
                        .as_slice()
                        .par_iter()
                        .map(|&l| self.per_l(l, fr, code.parity()))
                        .collect::<Result<_>>()?;
                    return Ok(per
                        .into_iter()
                        .min_by_key(|e| e.value)
                        .expect("nonempty m(C)"));
                }
            }
        }
        match method {
            BoundMethod::Fim(policy) => self.fim_ghw_bound(&m_c, t, policy, code.parity()),
            other => self.ghw_bound(&m_c, t, other),
        }
    }

    /// Whether the per-`l` value of `method` reaches `delta`, given parity set
    /// `parity` for the fim known zeros. Searches stop once `delta` is reached.
    fn reaches(
        &self,
        l: usize,
        method: &BoundMethod,
        parity: &IndexSet,
        delta: usize,
    ) -> Result<bool> {
        match method {
            BoundMethod::Fim(policy) => {
                let v = self.v_for(l, policy);
                let kz = self.known_zeros(l, v, parity);
                Ok(self.fim_with_stop(l, &kz, v, Some(delta))?.value >= delta)
            }
            other => Ok(self.per_l(l, other, parity)?.value >= delta),
        }
    }

    /// Improved code of designed distance `delta`: parity checks exactly at
    /// the `l` whose per-`l` value stays below `delta`.
    ///
    /// For fim the known zeros depend on the parity set itself; starting from
    /// the advisory parity set the update is iterated to a fixed point.
    pub fn improved_code(&self, delta: usize, method: &BoundMethod) -> Result<CodeSpec> {
        if delta == 0 {
            return Err(Error::Precondition(
                "designed distance must be at least 1".into(),
            ));
        }
        let n = self.n();
        let below = |method: &BoundMethod, parity: &IndexSet| -> Result<IndexSet> {
            let flags: Vec<bool> = (1..=n)
                .into_par_iter()
                .map(|l| self.reaches(l, method, parity, delta).map(|r| !r))
                .collect::<Result<_>>()?;
            Ok((1..=n).filter(|&l| flags[l - 1]).collect())
        };
        let empty = IndexSet::empty();
        match method {
            BoundMethod::Fim(_) => {
                const ROUNDS: usize = 10;
                let mut parity = below(&BoundMethod::Advisory, &empty)?;
                for _ in 0..ROUNDS {
                    let next = below(method, &parity)?;
                    if next == parity {
                        return Ok(CodeSpec::new(n, parity));
                    }
                    parity = next;
                }
                Err(Error::NoFixedPoint(ROUNDS))
            }
            other => Ok(CodeSpec::new(n, below(other, &empty)?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Curve;
    use crate::rho::rho_table_algebraic;

    fn f8() -> RhoTable {
        rho_table_algebraic(&Curve::f8()).unwrap()
    }

    #[test]
    fn auto_v_policy() {
        let t = f8();
        let b = Bounds::new(&t);
        assert_eq!(b.v_for(17, &VPolicy::Auto), 1);
        assert_eq!(b.v_for(18, &VPolicy::Auto), 0);
        assert_eq!(b.v_for(21, &VPolicy::Auto), 1);
        assert_eq!(b.v_for(32, &VPolicy::Uniform(3)), 0);
        let plain = RhoTable::from_rows(&t.rows()).unwrap();
        assert_eq!(Bounds::new(&plain).v_for(17, &VPolicy::Auto), 0);
    }

    #[test]
    fn fim_preconditions() {
        let t = f8();
        let b = Bounds::new(&t);
        assert!(b.fim_bound(32, &IndexSet::empty(), 1).is_err());
        assert!(b.fim_bound(17, &IndexSet::new([19]), 1).is_err());
        assert!(b.max_mu_set(&[], SearchMode::Heuristic).is_err());
        assert!(b
            .ghw_bound(&IndexSet::new([20, 21]), 3, &BoundMethod::Advisory)
            .is_err());
    }

    #[test]
    fn advisory_and_fim_at_17_and_21() {
        let t = f8();
        let b = Bounds::new(&t);
        let a17 = b.advisory_bound(17).unwrap();
        assert!(a17.value >= 9 && a17.verify(&t));
        let a21 = b.advisory_bound(21).unwrap();
        assert!(a21.value >= 12 && a21.verify(&t));
        let f17 = b.fim_bound(17, &IndexSet::empty(), 1).unwrap();
        assert_eq!(f17.pivots, vec![18]);
        assert!(f17.value >= 10);
        let f21 = b.fim_bound(21, &IndexSet::empty(), 1).unwrap();
        assert!(f21.value >= 13);
        let e: Estimate = f21.into();
        assert!(e.verify(&t));
        assert_eq!(e.certified_min(), Some(e.value));
    }

    #[test]
    fn bitset_harvest_matches_direct() {
        for curve in [Curve::f8(), Curve::f27()] {
            let t = rho_table_algebraic(&curve).unwrap();
            let b = Bounds::new(&t);
            for flavor in [Flavor::Wb, Flavor::Wwb, Flavor::Owb] {
                for targets in [vec![1], vec![17], vec![21, 28], vec![5, 30, 31, 32]] {
                    let direct = harvest(&t, b.status(), &targets, flavor);
                    assert_eq!(b.harvest_set(&targets, flavor), direct);
                    assert_eq!(b.harvest_size(&targets, flavor), direct.len());
                }
            }
        }
    }
}
