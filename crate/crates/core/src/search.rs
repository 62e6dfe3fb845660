//! Exhaustive searches for realizing triples in small groups.
//!
//! Both searches only visit unordered triples, list them with sizes
//! `n1 <= n2 <= n3`, and break ties in `nmp` by the smallest sorted triple of
//! subset encodings, where a subset is encoded as the integer whose bit `r` is
//! set when the element of rank `r` belongs to it. The answer therefore does
//! not depend on pruning or iteration order.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::group::{Element, FiniteGroup, GroupError, GroupTable};
use crate::tpp::{verify_tpp_with, Certificate, TppError, TppOutcome, VerifyOptions};

/// Largest group accepted by the subset search.
pub const SUBSET_CAP: u64 = 16;
/// Largest group accepted by subgroup enumeration.
pub const SUBGROUP_CAP: u64 = 2000;
const SUBGROUP_COUNT_CAP: usize = 200_000;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("{mode} search needs |G| <= {cap}, got {order}")]
    TooLarge { mode: &'static str, order: u64, cap: u64 },
    #[error("budget must be positive")]
    ZeroBudget,
    #[error("more than {0} subgroups")]
    TooManySubgroups(usize),
    #[error("search produced a triple that fails re-verification")]
    Inconsistent,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Tpp(#[from] TppError),
}

type Result<T> = std::result::Result<T, SearchError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Subgroups,
    Subsets,
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub group: FiniteGroup,
    pub mode: SearchMode,
    /// Triples with smaller `nmp` are ignored.
    pub min_nmp: u128,
    /// Skip triples ruled out by the size bound `n_i n_j <= |G|` or unable to
    /// beat the current best; in subset mode also keep one subset per
    /// quotient set.
    pub prune: bool,
    /// Subset mode only: restrict to subsets that are subgroups.
    pub subgroups_only: bool,
    /// Maximum number of triples given the full product check.
    pub budget: u64,
}

impl SearchConfig {
    pub fn new(group: FiniteGroup, mode: SearchMode) -> Self {
        Self { group, mode, min_nmp: 1, prune: true, subgroups_only: false, budget: 10_000_000_000 }
    }
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub best: Option<Certificate>,
    pub exhaustive: bool,
    /// Triples that reached the full product check.
    pub examined: u64,
    /// Group multiplications performed.
    pub work: u64,
}

impl SearchResult {
    pub fn nmp(&self) -> u128 {
        self.best.as_ref().map_or(0, Certificate::nmp)
    }
}

/// Runs the search selected by `cfg.mode`.
pub fn search(cfg: &SearchConfig) -> Result<SearchResult> {
    match cfg.mode {
        SearchMode::Subgroups => search_subgroup_triples(cfg),
        SearchMode::Subsets => search_subset_triples(cfg),
    }
}

/// Element-set bitset over ranks, ordered as an integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn set(&mut self, i: u32) -> bool {
        let (w, b) = ((i / 64) as usize, 1u64 << (i % 64));
        let fresh = self.0[w] & b == 0;
        self.0[w] |= b;
        fresh
    }

    fn get(&self, i: u32) -> bool {
        self.0[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn meet_count(&self, other: &Bits) -> usize {
        self.0.iter().zip(&other.0).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    fn indices(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for (w, &word) in self.0.iter().enumerate() {
            let mut x = word;
            while x != 0 {
                out.push(w as u32 * 64 + x.trailing_zeros());
                x &= x - 1;
            }
        }
        out
    }
}

impl Ord for Bits {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.iter().rev().cmp(other.0.iter().rev())
    }
}

impl PartialOrd for Bits {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn closure(t: &GroupTable, start: &Bits, gens: &[u32]) -> Bits {
    let mut set = start.clone();
    let mut frontier = start.indices();
    for &g in gens {
        if set.set(g) {
            frontier.push(g);
        }
    }
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = t.mul(x, g);
            if set.set(y) {
                frontier.push(y);
            }
        }
    }
    set
}

fn check_order(g: &FiniteGroup, mode: &'static str, cap: u64) -> Result<()> {
    if g.order() > cap {
        return Err(SearchError::TooLarge { mode, order: g.order(), cap });
    }
    Ok(())
}

fn subgroup_bits(t: &GroupTable) -> Result<Vec<Bits>> {
    let n = t.len();
    let mut trivial = Bits::new(n);
    trivial.set(t.identity());
    let mut seen: HashSet<Bits> = HashSet::new();
    let mut found: Vec<(Bits, Vec<u32>)> = Vec::new();
    let mut cyclic_gens = Vec::new();
    for g in 0..n as u32 {
        let c = closure(t, &trivial, &[g]);
        if seen.insert(c.clone()) {
            found.push((c, vec![g]));
            cyclic_gens.push(g);
        }
    }
    let mut next = 0;
    while next < found.len() {
        let (h, gens) = found[next].clone();
        next += 1;
        for &c in &cyclic_gens {
            if h.get(c) {
                continue;
            }
            let mut more = gens.clone();
            more.push(c);
            let k = closure(t, &h, &more);
            if seen.insert(k.clone()) {
                if found.len() >= SUBGROUP_COUNT_CAP {
                    return Err(SearchError::TooManySubgroups(SUBGROUP_COUNT_CAP));
                }
                found.push((k, more));
            }
        }
    }
    let mut out: Vec<Bits> = found.into_iter().map(|(b, _)| b).collect();
    out.sort_by(|a, b| a.count().cmp(&b.count()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// All subgroups of `g`, sorted by order and then by encoding.
pub fn enumerate_subgroups(g: &FiniteGroup) -> Result<Vec<Vec<Element>>> {
    check_order(g, "subgroup", SUBGROUP_CAP)?;
    let t = GroupTable::new(g)?;
    let subs = subgroup_bits(&t)?;
    Ok(subs.iter().map(|b| b.indices().iter().map(|&i| t.element(i).clone()).collect()).collect())
}

/// Best-so-far tracker with the total order `(nmp, smallest sorted encoding)`.
struct Best<K: Ord + Clone> {
    nmp: u128,
    key: Option<[K; 3]>,
    triple: Option<[usize; 3]>,
}

impl<K: Ord + Clone> Best<K> {
    fn new() -> Self {
        Self { nmp: 0, key: None, triple: None }
    }

    fn offer(&mut self, nmp: u128, mut key: [K; 3], triple: [usize; 3]) {
        key.sort();
        let better = match &self.key {
            None => true,
            Some(k) => nmp > self.nmp || (nmp == self.nmp && key < *k),
        };
        if better {
            self.nmp = nmp;
            self.key = Some(key);
            self.triple = Some(triple);
        }
    }
}

fn certify(g: &FiniteGroup, subsets: [Vec<Element>; 3], subgroups: [bool; 3], label: &str) -> Result<Certificate> {
    let opts = VerifyOptions { assume_subgroup: subgroups, ..Default::default() };
    match verify_tpp_with(g, &subsets, opts)? {
        TppOutcome::Verified(c) => Ok(c.with_construction(label)),
        TppOutcome::Counterexample(_) => Err(SearchError::Inconsistent),
    }
}

/// Searches unordered triples of subgroups for the largest `nmp`.
pub fn search_subgroup_triples(cfg: &SearchConfig) -> Result<SearchResult> {
    if cfg.budget == 0 {
        return Err(SearchError::ZeroBudget);
    }
    let g = &cfg.group;
    check_order(g, "subgroup", SUBGROUP_CAP)?;
    let t = GroupTable::new(g)?;
    let order = t.len() as u128;
    let subs = subgroup_bits(&t)?;
    let sizes: Vec<u128> = subs.iter().map(|b| b.count() as u128).collect();
    let members: Vec<Vec<u32>> = subs.iter().map(|b| b.indices()).collect();
    let e = t.identity();
    let mut best = Best::new();
    let (mut examined, mut work) = (0u64, 0u64);
    let mut exhaustive = true;
    'outer: for k in 0..subs.len() {
        for j in 0..=k {
            if cfg.prune && sizes[j] * sizes[k] > order {
                break;
            }
            for i in 0..=j {
                let nmp = sizes[i] * sizes[j] * sizes[k];
                if nmp < cfg.min_nmp || (cfg.prune && best.key.is_some() && nmp < best.nmp) {
                    continue;
                }
                if subs[i].meet_count(&subs[j]) != 1
                    || subs[i].meet_count(&subs[k]) != 1
                    || subs[j].meet_count(&subs[k]) != 1
                {
                    continue;
                }
                if examined == cfg.budget {
                    exhaustive = false;
                    break 'outer;
                }
                examined += 1;
                let clash = members[i].iter().filter(|&&a| a != e).any(|&a| {
                    members[j].iter().filter(|&&b| b != e).any(|&b| {
                        work += 1;
                        subs[k].get(t.mul(a, b))
                    })
                });
                if !clash {
                    best.offer(nmp, [subs[i].clone(), subs[j].clone(), subs[k].clone()], [i, j, k]);
                }
            }
        }
    }
    let best_cert = match best.triple {
        None => None,
        Some(tr) => {
            let subsets = tr.map(|x| members[x].iter().map(|&i| t.element(i).clone()).collect());
            Some(certify(g, subsets, [true; 3], "subgroup search")?)
        }
    };
    Ok(SearchResult { best: best_cert, exhaustive, examined, work })
}

/// Searches unordered triples of subsets for the largest `nmp`.
///
/// Right translation does not change a quotient set, so only subsets
/// containing the identity are visited.
pub fn search_subset_triples(cfg: &SearchConfig) -> Result<SearchResult> {
    if cfg.budget == 0 {
        return Err(SearchError::ZeroBudget);
    }
    let g = &cfg.group;
    check_order(g, "subset", SUBSET_CAP)?;
    let t = GroupTable::new(g)?;
    let n = t.len();
    let order = n as u128;
    let e = t.identity();
    let ebit = 1u64 << e;
    let others: Vec<u32> = (0..n as u32).filter(|&x| x != e).collect();
    let mut work = 0u64;

    let mut cands: Vec<(u64, u64)> = Vec::new();
    for sub in 0u64..1 << others.len() {
        let mut mask = ebit;
        for (b, &x) in others.iter().enumerate() {
            if sub >> b & 1 == 1 {
                mask |= 1 << x;
            }
        }
        let elems: Vec<u32> = (0..n as u32).filter(|&x| mask >> x & 1 == 1).collect();
        let mut q = 0u64;
        for &a in &elems {
            for &b in &elems {
                q |= 1 << t.mul(a, t.inv(b));
            }
        }
        work += (elems.len() * elems.len()) as u64;
        if cfg.subgroups_only && q != mask {
            continue;
        }
        cands.push((mask, q));
    }
    if cfg.prune {
        let mut per_q: HashMap<u64, u64> = HashMap::new();
        for &(mask, q) in &cands {
            per_q
                .entry(q)
                .and_modify(|m| {
                    let (cur, new) = (m.count_ones(), mask.count_ones());
                    if new > cur || (new == cur && mask < *m) {
                        *m = mask;
                    }
                })
                .or_insert(mask);
        }
        cands = per_q.into_iter().map(|(q, m)| (m, q)).collect();
    }
    cands.sort_by_key(|&(m, _)| (m.count_ones(), m));
    let sizes: Vec<u128> = cands.iter().map(|&(m, _)| m.count_ones() as u128).collect();

    let mut best = Best::new();
    let mut examined = 0u64;
    let mut exhaustive = true;
    'outer: for j in 0..cands.len() {
        for i in 0..=j {
            if cfg.prune && sizes[i] * sizes[j] > order {
                break;
            }
            let (qi, qj) = (cands[i].1, cands[j].1);
            if qi & qj != ebit {
                continue;
            }
            let mut product = 0u64;
            for a in (0..n as u32).filter(|&a| a != e && qi >> a & 1 == 1) {
                for b in (0..n as u32).filter(|&b| b != e && qj >> b & 1 == 1) {
                    product |= 1 << t.mul(a, b);
                }
            }
            work += ((qi.count_ones() - 1) * (qj.count_ones() - 1)) as u64;
            for k in j..cands.len() {
                if cfg.prune && sizes[j] * sizes[k] > order {
                    break;
                }
                let nmp = sizes[i] * sizes[j] * sizes[k];
                if nmp < cfg.min_nmp || (cfg.prune && best.key.is_some() && nmp < best.nmp) {
                    continue;
                }
                if examined == cfg.budget {
                    exhaustive = false;
                    break 'outer;
                }
                examined += 1;
                let qk = cands[k].1;
                if qi & qk == ebit && qj & qk == ebit && product & qk == 0 {
                    best.offer(nmp, [cands[i].0, cands[j].0, cands[k].0], [i, j, k]);
                }
            }
        }
    }
    let best_cert = match best.triple {
        None => None,
        Some(tr) => {
            let masks = tr.map(|x| cands[x]);
            let subsets = masks.map(|(m, _)| (0..n as u32).filter(|&x| m >> x & 1 == 1).map(|x| t.element(x).clone()).collect());
            let subgroups = masks.map(|(m, q)| m == q);
            Some(certify(g, subsets, subgroups, "subset search")?)
        }
    };
    Ok(SearchResult { best: best_cert, exhaustive, examined, work })
}
